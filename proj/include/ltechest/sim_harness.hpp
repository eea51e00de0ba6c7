/*
 * Copyright 2026 The ltechest Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltechest/channel_model.hpp"
#include "ltechest/config.hpp"
#include "ltechest/estimation.hpp"
#include "ltechest/link_proc.hpp"
#include "ltechest/resource_grid.hpp"

namespace ltechest {

enum class EstimatorChoice { LS, LMMSE, Hybrid, PerfectCSI };

std::string to_string(EstimatorChoice e);
EstimatorChoice parse_estimator(std::string_view text);

struct TrialSpec {
    PowerDelayProfile pdp = PowerDelayProfile::uniform(1);
    double snr_db = 0.0;
    EstimatorChoice estimator = EstimatorChoice::LS;
    /// Only read by the hybrid estimator.
    double hybrid_threshold_db = 0.0;
    LmmseModel lmmse_model = LmmseModel::CpTruncated;
};

/// Accumulated error terms of one trial, summed over every (tx, rx) pair.
struct TrialResult {
    double err_all = 0.0;      // sum |h_hat - h|^2 over used subcarriers
    double power_all = 0.0;    // sum |h|^2 over the same cells
    double err_pilot = 0.0;    // restricted to each port's pilot subcarriers
    double power_pilot = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bit_count = 0;
    int erasures = 0;          // subcarriers ZF refused to invert
    std::optional<bool> chose_ls;

    double mse_all() const { return power_all > 0 ? err_all / power_all : 0.0; }
    double mse_pilot() const { return power_pilot > 0 ? err_pilot / power_pilot : 0.0; }
    double ber() const { return bit_count ? static_cast<double>(bit_errors) / bit_count : 0.0; }
};

/// Seeds of one trial. The realization seed drives channel, payload and
/// pilots; the noise seed drives AWGN only.
struct TrialSeeds {
    std::uint64_t realization;
    std::uint64_t noise;
};

/// Seeds for trial `index` of a sweep: the realization depends on (seed,
/// channel span, index) and the noise additionally on the SNR, so every
/// estimator and SNR point sees the same channels and payloads.
TrialSeeds trial_seeds(std::uint64_t seed, int channel_span, double snr_db, std::uint64_t index);

/// One slot through TX, channel, AWGN, RX, estimation and ZF detection.
TrialResult run_trial(const SystemConfig& config, const TrialSpec& spec, const TrialSeeds& seeds);
TrialResult run_trial(const SystemConfig& config, const TrialSpec& spec, Rng& rng);

/// Mean |h_hat - h|^2 over the selected positions, divided by mean |h|^2
/// over the same positions.
double compute_mse(const CVector& h_hat, const CVector& h_true, const std::vector<int>& positions);
double compute_mse(const CVector& h_hat, const CVector& h_true);

double compute_ber(const Bits& tx_bits, const Bits& rx_bits);

struct SweepConfig {
    SystemConfig system;
    std::vector<int> channel_lengths{6, 10, 20, 40};
    std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30};
    int n_frames = 100;
    std::uint64_t seed = 42;
    std::vector<EstimatorChoice> estimators{EstimatorChoice::LS, EstimatorChoice::LMMSE,
                                            EstimatorChoice::Hybrid, EstimatorChoice::PerfectCSI};
    std::optional<double> threshold_override_db;
    LmmseModel lmmse_model = LmmseModel::CpTruncated;
    /// Trials per point when calibrating the hybrid threshold; 0 means n_frames.
    int calibration_frames = 0;
    /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
    int workers = 0;

    void validate() const;
};

struct SweepRecord {
    double snr_db = 0.0;
    int channel_len = 0;
    EstimatorChoice estimator = EstimatorChoice::LS;
    double mse_all_subcarriers = 0.0;
    double mse_pilot_subcarriers = 0.0;
    double ber = 0.0;
    int n_trials = 0;
    std::optional<double> branch_fraction_ls;  // hybrid rows only
    std::uint64_t seed = 0;
};

/// SNR above which LS beats LMMSE on the given channel, from an LS/LMMSE
/// MSE sweep over `sweep_snrs`. Uses the same trial seeds as run_sweep.
double calibrate_threshold(const SystemConfig& config, const PowerDelayProfile& pdp_long,
                           const std::vector<double>& sweep_snrs, int trials, std::uint64_t seed,
                           LmmseModel model = LmmseModel::CpTruncated, int workers = 1);

/// Cartesian sweep over (channel length, SNR, estimator), rows in that
/// order. Hybrid thresholds actually used are written to `thresholds`
/// (keyed by channel length) when given.
std::vector<SweepRecord> run_sweep(const SweepConfig& config,
                                   std::map<int, double>* thresholds = nullptr);

void emit_csv(const std::vector<SweepRecord>& records, std::ostream& out);
/// Throws std::runtime_error naming the path on I/O failure.
void emit_csv(const std::vector<SweepRecord>& records, const std::string& path);

/// "a:b:step" (inclusive) or a comma-separated list.
std::vector<double> parse_snr_grid(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);
std::vector<EstimatorChoice> parse_estimator_list(std::string_view text);

/// Flat key=value file; '#' starts a comment. Unknown keys are an error.
SweepConfig load_sweep_config(const std::string& path);
SweepConfig parse_sweep_config(std::istream& in, const std::string& origin = "<config>");

}  // namespace ltechest
