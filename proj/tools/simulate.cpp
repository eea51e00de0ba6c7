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

// Monte Carlo MSE/BER sweep for LS, LMMSE and hybrid channel estimation.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "ltechest/sim_harness.hpp"

using namespace ltechest;

namespace {

void print_summary(const std::vector<SweepRecord>& records, const std::map<int, double>& thresholds,
                   std::FILE* out) {
    for (const auto& [len, thr] : thresholds)
        std::fprintf(out, "hybrid threshold L=%d: %g dB\n", len, thr);
    std::fprintf(out, "%4s %7s %-8s %14s %14s %12s %7s %9s\n", "L", "snr_db", "est", "mse_all", "mse_pilot",
                 "ber", "trials", "frac_ls");
    for (const auto& r : records) {
        std::fprintf(out, "%4d %7.2f %-8s %14.6e %14.6e %12.4e %7d ", r.channel_len, r.snr_db,
                     to_string(r.estimator).c_str(), r.mse_all_subcarriers, r.mse_pilot_subcarriers, r.ber,
                     r.n_trials);
        if (r.branch_fraction_ls)
            std::fprintf(out, "%9.3f\n", *r.branch_fraction_ls);
        else
            std::fprintf(out, "%9s\n", "-");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LTE downlink channel-estimation link simulator"};

    std::string config_path, snr, lengths, estimators, out_path, lmmse_model;
    int frames = 0, workers = -1, calibration_frames = -1;
    std::uint64_t seed = 0;
    double threshold_db = 0.0;
    bool calibrate = false, summary = false;

    app.add_option("--config", config_path, "key=value config file (defaults: 5 MHz, 2x2, QPSK, CP 16)")
        ->check(CLI::ExistingFile);
    app.add_option("--snr", snr, "SNR grid in dB, a:b:step or a,b,c");
    app.add_option("--channel-lengths", lengths, "comma-separated channel lengths (taps)");
    auto* frames_opt = app.add_option("--frames", frames, "trials per grid point")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "64-bit base seed");
    app.add_option("--estimators", estimators, "subset of ls,lmmse,hybrid,perfect");
    auto* thr_opt = app.add_option("--threshold-db", threshold_db, "fixed hybrid switching SNR");
    auto* cal_opt = app.add_flag("--calibrate-threshold", calibrate,
                                 "calibrate the hybrid threshold even if the config fixes one");
    thr_opt->excludes(cal_opt);
    app.add_option("--lmmse-model", lmmse_model, "receiver delay profile: cp (truncated to the CP) or matched")
        ->check(CLI::IsMember({"cp", "matched"}));
    app.add_option("--calibration-frames", calibration_frames, "trials per point for calibration (0 = frames)");
    app.add_option("--workers", workers, "worker threads (0 = all cores)");
    app.add_option("--out", out_path, "CSV destination (default: stdout)");
    app.add_flag("--summary", summary, "print per-cell means");

    CLI11_PARSE(app, argc, argv);

    try {
        SweepConfig cfg = config_path.empty() ? SweepConfig{} : load_sweep_config(config_path);
        if (!snr.empty()) cfg.snr_grid_db = parse_snr_grid(snr);
        if (!lengths.empty()) cfg.channel_lengths = parse_int_list(lengths);
        if (*frames_opt) cfg.n_frames = frames;
        if (*seed_opt) cfg.seed = seed;
        if (!estimators.empty()) cfg.estimators = parse_estimator_list(estimators);
        if (*thr_opt) cfg.threshold_override_db = threshold_db;
        if (calibrate) cfg.threshold_override_db.reset();
        if (!lmmse_model.empty()) cfg.lmmse_model = parse_lmmse_model(lmmse_model);
        if (calibration_frames >= 0) cfg.calibration_frames = calibration_frames;
        if (workers >= 0) cfg.workers = workers;

        std::map<int, double> thresholds;
        const auto records = run_sweep(cfg, &thresholds);

        if (out_path.empty()) {
            emit_csv(records, std::cout);
        } else {
            emit_csv(records, out_path);
        }
        if (summary) print_summary(records, thresholds, out_path.empty() ? stderr : stdout);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "simulate: %s\n", e.what());
        return 1;
    }
    return 0;
}
