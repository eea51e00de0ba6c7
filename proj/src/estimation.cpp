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

#include "ltechest/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace ltechest {

namespace {

// Diagonal loading used when the noise term is zero and R_HpHp is singular.
constexpr double kSingularJitter = 1e-12;

}  // namespace

std::string to_string(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::LS: return "LS";
        case EstimatorKind::LMMSE: return "LMMSE";
        case EstimatorKind::HybridChoseLS: return "HybridChoseLS";
        case EstimatorKind::HybridChoseLMMSE: return "HybridChoseLMMSE";
    }
    return "?";
}

std::string to_string(LmmseModel m) {
    return m == LmmseModel::CpTruncated ? "cp" : "matched";
}

LmmseModel parse_lmmse_model(std::string_view text) {
    if (text == "cp") return LmmseModel::CpTruncated;
    if (text == "matched") return LmmseModel::Matched;
    throw std::invalid_argument("unknown LMMSE model '" + std::string(text) + "' (cp or matched)");
}

PowerDelayProfile receiver_pdp(const PowerDelayProfile& true_pdp, int cp_len, LmmseModel model) {
    if (model == LmmseModel::Matched || true_pdp.delays().back() <= cp_len) return true_pdp;
    std::vector<int> delays;
    std::vector<double> powers;
    double total = 0.0;
    for (int l = 0; l < true_pdp.n_taps() && true_pdp.delays()[l] <= cp_len; ++l) {
        delays.push_back(true_pdp.delays()[l]);
        powers.push_back(true_pdp.powers()[l]);
        total += powers.back();
    }
    if (total <= 0.0) throw std::invalid_argument("receiver_pdp: no power within the cyclic prefix");
    for (double& p : powers) p /= total;
    // Renormalizing can leave the sum a few ulps away from 1.
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < powers.size(); ++i) sum += powers[i];
    powers.back() = 1.0 - sum;
    return {std::move(delays), std::move(powers)};
}

CorrelationModel build_correlation_model(const PowerDelayProfile& pdp,
                                         const std::vector<int>& pilot_subcarriers,
                                         const SubcarrierMap& map) {
    const int n_used = map.n_used();
    const double n_fft = map.n_fft();

    // r depends only on the frequency difference, which spans
    // -(n_used) .. n_used once the DC gap is counted.
    const int max_diff = n_used + 1;
    std::vector<cplx> r(2 * max_diff + 1);
    for (int d = -max_diff; d <= max_diff; ++d) {
        cplx acc = 0.0;
        for (int l = 0; l < pdp.n_taps(); ++l) {
            const double phase = -2.0 * std::numbers::pi * d * pdp.delays()[l] / n_fft;
            acc += pdp.powers()[l] * std::polar(1.0, phase);
        }
        r[d + max_diff] = acc;
    }
    auto corr_at = [&](int a, int b) { return r[map.frequency(a) - map.frequency(b) + max_diff]; };

    const auto n_p = static_cast<Eigen::Index>(pilot_subcarriers.size());
    for (int p : pilot_subcarriers) {
        if (p < 0 || p >= n_used)
            throw std::invalid_argument("build_correlation_model: pilot position out of range");
    }
    CorrelationModel m;
    m.r_hh_p.resize(n_used, n_p);
    m.r_hp_hp.resize(n_p, n_p);
    for (int k = 0; k < n_used; ++k) {
        for (Eigen::Index j = 0; j < n_p; ++j) m.r_hh_p(k, j) = corr_at(k, pilot_subcarriers[j]);
    }
    for (Eigen::Index i = 0; i < n_p; ++i) {
        for (Eigen::Index j = 0; j < n_p; ++j)
            m.r_hp_hp(i, j) = corr_at(pilot_subcarriers[i], pilot_subcarriers[j]);
    }
    return m;
}

CVector ls_estimate(const CVector& y_p, const CVector& x_p) {
    if (y_p.size() != x_p.size())
        throw std::invalid_argument("ls_estimate: received and pilot vectors differ in length");
    for (Eigen::Index i = 0; i < x_p.size(); ++i) {
        if (x_p[i] == cplx(0.0, 0.0))
            throw std::invalid_argument("ls_estimate: zero pilot at index " + std::to_string(i));
    }
    return y_p.cwiseQuotient(x_p);
}

LmmseFilter::LmmseFilter(const CorrelationModel& corr, const CVector& loading) {
    const auto n_p = corr.r_hp_hp.rows();
    if (corr.r_hp_hp.cols() != n_p || corr.r_hh_p.cols() != n_p || loading.size() != n_p)
        throw std::invalid_argument("LmmseFilter: inconsistent correlation model dimensions");

    CMatrix inner = corr.r_hp_hp;
    inner.diagonal() += loading;

    if (loading.cwiseAbs().maxCoeff() == 0.0) {
        Eigen::FullPivLU<CMatrix> probe(inner);
        probe.setThreshold(1e-12);
        if (!probe.isInvertible()) {
            jitter_ = kSingularJitter;
            inner.diagonal().array() += jitter_;
        }
    }

    // inner is Hermitian, so W^H = inner^-1 R_HHp^H.
    Eigen::PartialPivLU<CMatrix> lu(inner);
    weights_ = lu.solve(corr.r_hh_p.adjoint()).adjoint();
    if (!weights_.allFinite()) throw std::runtime_error("LmmseFilter: singular pilot autocorrelation");
}

ChannelEstimate LmmseFilter::apply(const CVector& h_ls) const {
    if (h_ls.size() != weights_.cols())
        throw std::invalid_argument("LmmseFilter: expected " + std::to_string(weights_.cols()) +
                                    " pilot estimates, got " + std::to_string(h_ls.size()));
    return {weights_ * h_ls, EstimatorKind::LMMSE, jitter_};
}

LmmseFilter make_lmmse_filter_full(const CorrelationModel& corr, const CVector& x_p, double sigma_w2) {
    if (!(sigma_w2 >= 0.0)) throw std::invalid_argument("lmmse: noise variance must be non-negative");
    CVector loading(x_p.size());
    for (Eigen::Index i = 0; i < x_p.size(); ++i) {
        const double p = std::norm(x_p[i]);
        if (p == 0.0) throw std::invalid_argument("lmmse: zero pilot value");
        loading[i] = sigma_w2 / p;
    }
    return LmmseFilter(corr, loading);
}

LmmseFilter make_lmmse_filter_simplified(const CorrelationModel& corr, double snr_linear, double beta) {
    if (!(snr_linear > 0.0)) throw std::invalid_argument("lmmse: snr must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("lmmse: beta must be positive");
    return LmmseFilter(corr, CVector::Constant(corr.r_hp_hp.rows(), beta / snr_linear));
}

ChannelEstimate lmmse_estimate_full(const CVector& h_ls, const CorrelationModel& corr,
                                    const CVector& x_p, double sigma_w2) {
    return make_lmmse_filter_full(corr, x_p, sigma_w2).apply(h_ls);
}

ChannelEstimate lmmse_estimate_simplified(const CVector& h_ls, const CorrelationModel& corr,
                                          double snr_linear, double beta) {
    return make_lmmse_filter_simplified(corr, snr_linear, beta).apply(h_ls);
}

double beta_for_constellation(Constellation c) {
    switch (c) {
        case Constellation::QPSK: return 1.0;
        case Constellation::QAM16: return 17.0 / 9.0;
        default: break;
    }
    throw std::invalid_argument("beta_for_constellation: unsupported constellation " + to_string(c));
}

ChannelEstimate interpolate_ls(const CVector& h_p, const std::vector<int>& pilot_subcarriers, int n_used) {
    if (static_cast<Eigen::Index>(pilot_subcarriers.size()) != h_p.size())
        throw std::invalid_argument("interpolate_ls: values and positions differ in length");

    // Average repeated positions, sort by subcarrier.
    std::map<int, std::pair<cplx, int>> acc;
    for (std::size_t i = 0; i < pilot_subcarriers.size(); ++i) {
        const int k = pilot_subcarriers[i];
        if (k < 0 || k >= n_used) throw std::invalid_argument("interpolate_ls: position out of range");
        auto& [sum, n] = acc[k];
        sum += h_p[static_cast<Eigen::Index>(i)];
        ++n;
    }
    if (acc.size() < 2) throw std::invalid_argument("interpolate_ls: need at least 2 pilot positions");

    std::vector<int> pos;
    std::vector<cplx> val;
    for (const auto& [k, sn] : acc) {
        pos.push_back(k);
        val.push_back(sn.first / static_cast<double>(sn.second));
    }

    ChannelEstimate out{CVector(n_used), EstimatorKind::LS, 0.0};
    std::size_t seg = 0;
    for (int k = 0; k < n_used; ++k) {
        if (k <= pos.front()) {
            out.h_hat[k] = val.front();
        } else if (k >= pos.back()) {
            out.h_hat[k] = val.back();
        } else {
            while (pos[seg + 1] < k) ++seg;
            const double t = static_cast<double>(k - pos[seg]) / (pos[seg + 1] - pos[seg]);
            out.h_hat[k] = (1.0 - t) * val[seg] + t * val[seg + 1];
        }
    }
    return out;
}

void HybridPolicy::validate() const {
    if (channel_len_hint < 1) throw std::invalid_argument("HybridPolicy: channel_len_hint must be >= 1");
    if (cp_len < 0) throw std::invalid_argument("HybridPolicy: cp_len must be non-negative");
    if (std::isnan(snr_threshold_db)) throw std::invalid_argument("HybridPolicy: threshold is NaN");
}

bool HybridPolicy::chooses_ls(double snr_db) const {
    if (channel_len_hint <= cp_len) return false;
    return snr_db >= snr_threshold_db;
}

ChannelEstimate hybrid_estimate(const HybridInputs& in, const CorrelationModel& corr,
                                const HybridPolicy& policy) {
    policy.validate();
    const CVector h_ls = ls_estimate(in.y_p, in.x_p);
    if (policy.chooses_ls(in.snr_db)) {
        auto est = interpolate_ls(h_ls, in.pilot_subcarriers, in.n_used);
        est.estimator_used = EstimatorKind::HybridChoseLS;
        return est;
    }
    const double snr_linear = std::pow(10.0, in.snr_db / 10.0);
    auto est = lmmse_estimate_simplified(h_ls, corr, snr_linear, in.beta);
    est.estimator_used = EstimatorKind::HybridChoseLMMSE;
    return est;
}

ChannelEstimate hybrid_estimate(const HybridInputs& in, const LmmseFilter& lmmse,
                                const HybridPolicy& policy) {
    policy.validate();
    const CVector h_ls = ls_estimate(in.y_p, in.x_p);
    if (policy.chooses_ls(in.snr_db)) {
        auto est = interpolate_ls(h_ls, in.pilot_subcarriers, in.n_used);
        est.estimator_used = EstimatorKind::HybridChoseLS;
        return est;
    }
    auto est = lmmse.apply(h_ls);
    est.estimator_used = EstimatorKind::HybridChoseLMMSE;
    return est;
}

double crossover_threshold(const std::vector<double>& snr_db, const std::vector<double>& mse_ls,
                           const std::vector<double>& mse_lmmse) {
    if (snr_db.empty()) throw std::invalid_argument("crossover_threshold: empty SNR grid");
    if (mse_ls.size() != snr_db.size() || mse_lmmse.size() != snr_db.size())
        throw std::invalid_argument("crossover_threshold: curves do not match the SNR grid");

    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = snr_db.size();
    std::ptrdiff_t last_worse = -1;  // last index where LS is strictly worse
    for (std::size_t i = 0; i < n; ++i) {
        if (mse_ls[i] > mse_lmmse[i]) last_worse = static_cast<std::ptrdiff_t>(i);
    }
    if (last_worse < 0) return -inf;
    if (last_worse == static_cast<std::ptrdiff_t>(n) - 1) return inf;

    const auto j = static_cast<std::size_t>(last_worse);
    const double d0 = mse_ls[j] - mse_lmmse[j];          // > 0
    const double d1 = mse_ls[j + 1] - mse_lmmse[j + 1];  // <= 0
    const double t = d0 / (d0 - d1);
    return snr_db[j] + t * (snr_db[j + 1] - snr_db[j]);
}

}  // namespace ltechest
