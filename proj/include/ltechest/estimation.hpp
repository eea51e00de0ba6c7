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

#include <string>
#include <vector>

#include "ltechest/channel_model.hpp"
#include "ltechest/config.hpp"

namespace ltechest {

enum class EstimatorKind { LS, LMMSE, HybridChoseLS, HybridChoseLMMSE };

std::string to_string(EstimatorKind k);

struct ChannelEstimate {
    CVector h_hat;  // one entry per used subcarrier
    EstimatorKind estimator_used = EstimatorKind::LS;
    /// Diagonal loading added before inversion when the noise term was zero
    /// and the pilot autocorrelation was singular; 0 otherwise.
    double regularization_jitter = 0.0;
};

/// Second-order statistics of the frequency response seen by the receiver.
struct CorrelationModel {
    CMatrix r_hh_p;   // n_used x n_pilot
    CMatrix r_hp_hp;  // n_pilot x n_pilot
};

/// r(k, k') = sum_l power_l * exp(-j2*pi*(f_k - f_k')*delay_l / N) with f the
/// signed FFT frequency of each used subcarrier. `pilot_subcarriers` index
/// the used subcarriers 0..n_used-1.
CorrelationModel build_correlation_model(const PowerDelayProfile& pdp,
                                         const std::vector<int>& pilot_subcarriers,
                                         const SubcarrierMap& map);

/// Which delay profile the receiver assumes when it builds its LMMSE statistics.
enum class LmmseModel {
    /// True profile restricted to delays within the cyclic prefix and
    /// renormalized. Identical to Matched whenever the channel fits the CP.
    CpTruncated,
    /// True profile, including taps beyond the CP.
    Matched,
};

std::string to_string(LmmseModel m);
LmmseModel parse_lmmse_model(std::string_view text);

PowerDelayProfile receiver_pdp(const PowerDelayProfile& true_pdp, int cp_len, LmmseModel model);

/// Elementwise y_p / x_p. Throws on a zero pilot or a length mismatch.
CVector ls_estimate(const CVector& y_p, const CVector& x_p);

/// Precomputed R_HHp (R_HpHp + D)^-1 so one inversion serves every antenna pair.
class LmmseFilter {
public:
    LmmseFilter(const CorrelationModel& corr, const CVector& loading);

    ChannelEstimate apply(const CVector& h_ls) const;
    const CMatrix& weights() const { return weights_; }
    double jitter() const { return jitter_; }

private:
    CMatrix weights_;
    double jitter_ = 0.0;
};

/// Loading sigma_w2 / |x_p|^2 on the diagonal.
LmmseFilter make_lmmse_filter_full(const CorrelationModel& corr, const CVector& x_p, double sigma_w2);
/// Loading beta / snr on the diagonal.
LmmseFilter make_lmmse_filter_simplified(const CorrelationModel& corr, double snr_linear, double beta);

ChannelEstimate lmmse_estimate_full(const CVector& h_ls, const CorrelationModel& corr,
                                    const CVector& x_p, double sigma_w2);
ChannelEstimate lmmse_estimate_simplified(const CVector& h_ls, const CorrelationModel& corr,
                                          double snr_linear, double beta);

/// Constellation-dependent scaling of the simplified LMMSE regularizer.
double beta_for_constellation(Constellation c);

/// Linear interpolation between pilots (sorted by subcarrier), constant
/// extrapolation past the outermost pilots. Repeated positions are averaged.
ChannelEstimate interpolate_ls(const CVector& h_p, const std::vector<int>& pilot_subcarriers, int n_used);

struct HybridPolicy {
    int cp_len = 16;
    int channel_len_hint = 1;
    double snr_threshold_db = 0.0;

    void validate() const;
    /// True when the policy picks LS for this SNR.
    bool chooses_ls(double snr_db) const;
};

struct HybridInputs {
    CVector y_p;
    CVector x_p;
    std::vector<int> pilot_subcarriers;
    int n_used = 0;
    double snr_db = 0.0;
    double beta = 1.0;
};

/// LMMSE when the channel fits the CP; otherwise LMMSE below the SNR
/// threshold and interpolated LS at or above it.
ChannelEstimate hybrid_estimate(const HybridInputs& in, const CorrelationModel& corr,
                                const HybridPolicy& policy);
/// Same decision, reusing an LMMSE filter already built for this SNR.
ChannelEstimate hybrid_estimate(const HybridInputs& in, const LmmseFilter& lmmse,
                                const HybridPolicy& policy);

/// SNR above which the LS curve stays at or below the LMMSE curve for the
/// rest of the grid, linearly interpolated between the bracketing points.
/// -inf if LS is never worse, +inf if LS is worse at the last point.
/// Throws on an empty or mismatched grid.
double crossover_threshold(const std::vector<double>& snr_db, const std::vector<double>& mse_ls,
                           const std::vector<double>& mse_lmmse);

}  // namespace ltechest
