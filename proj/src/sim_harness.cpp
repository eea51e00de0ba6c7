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

#include "ltechest/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace ltechest {

namespace {

constexpr std::uint64_t kRealizationTag = 0x7265616c;  // "real"
constexpr std::uint64_t kNoiseTag = 0x6e6f6973;        // "nois"

/// Everything a trial needs that does not change between trials of one
/// (channel, SNR) cell.
struct CellContext {
    CellContext(const SystemConfig& cfg, const PowerDelayProfile& profile, double snr, LmmseModel model)
        : config(cfg), pattern(build_pilot_pattern(cfg)), pdp(profile), snr_db(snr),
          beta(beta_for_constellation(cfg.constellation)), data_cells(pattern.data_positions()) {
        if (cfg.n_rx < cfg.n_tx)
            throw std::invalid_argument("zero-forcing needs n_rx >= n_tx");
        const SubcarrierMap map(cfg);
        const auto assumed = receiver_pdp(pdp, cfg.cp_len, model);
        for (int p = 0; p < cfg.n_tx; ++p) {
            std::vector<int> sc;
            for (const auto& pos : pattern.positions(p)) sc.push_back(pos.subcarrier);
            pilot_subcarriers.push_back(sc);
            correlation.push_back(build_correlation_model(assumed, sc, map));
        }
    }

    const LmmseFilter& lmmse(int port) const {
        std::call_once(lmmse_once, [this] {
            const double snr_linear = std::pow(10.0, snr_db / 10.0);
            for (const auto& c : correlation)
                lmmse_filters.push_back(make_lmmse_filter_simplified(c, snr_linear, beta));
        });
        return lmmse_filters[port];
    }

    SystemConfig config;
    PilotPattern pattern;
    PowerDelayProfile pdp;
    double snr_db;
    double beta;
    std::vector<GridPosition> data_cells;
    std::vector<std::vector<int>> pilot_subcarriers;
    std::vector<CorrelationModel> correlation;

private:
    mutable std::once_flag lmmse_once;
    mutable std::vector<LmmseFilter> lmmse_filters;
};

struct SlotObservation {
    ResourceGrid tx_grid;
    std::vector<CMatrix> rx;       // per rx antenna, n_used x n_symbols
    std::vector<CVector> h_true;   // index tx * n_rx + rx, used subcarriers
    std::vector<Bits> bits;        // per tx antenna
};

SlotObservation simulate_slot(const CellContext& ctx, const TrialSeeds& seeds) {
    const auto& cfg = ctx.config;
    Rng rng(seeds.realization);

    const auto channel = generate_channel(ctx.pdp, cfg.n_tx, cfg.n_rx, rng);

    const int bps = bits_per_symbol(cfg.constellation);
    const auto n_data = ctx.data_cells.size();
    std::vector<Bits> bits(cfg.n_tx, Bits(n_data * bps));
    std::vector<CVector> data;
    for (auto& b : bits) {
        for (std::size_t i = 0; i < b.size(); i += 64) {
            auto word = rng();
            for (std::size_t j = i; j < std::min(b.size(), i + 64); ++j, word >>= 1) b[j] = word & 1;
        }
        data.push_back(map_bits(b, cfg.constellation));
    }
    const CVector pilots = make_pilot_sequence(ctx.pattern.entries().size(), rng());

    auto grid = map_to_grid(cfg, ctx.pattern, data, pilots);
    auto rx = apply_channel(modulate_slot(grid, cfg), channel);
    Rng noise_rng(seeds.noise);
    add_awgn_inplace(rx, NoiseSpec{ctx.snr_db, 1.0}, noise_rng);

    std::vector<CVector> h_true;
    for (int t = 0; t < cfg.n_tx; ++t) {
        for (int r = 0; r < cfg.n_rx; ++r)
            h_true.push_back(used_frequency_response(channel.taps(t, r), ctx.pdp.delays(), cfg));
    }
    return {std::move(grid), demodulate_slot(rx, cfg), std::move(h_true), std::move(bits)};
}

TrialResult evaluate(const CellContext& ctx, const SlotObservation& obs, EstimatorChoice estimator,
                     double threshold_db) {
    const auto& cfg = ctx.config;
    TrialResult res;

    std::vector<CVector> est(static_cast<std::size_t>(cfg.n_tx) * cfg.n_rx);
    for (int t = 0; t < cfg.n_tx; ++t) {
        const CVector x_p = pilot_values(obs.tx_grid, ctx.pattern, t);
        const auto& sc = ctx.pilot_subcarriers[t];
        for (int r = 0; r < cfg.n_rx; ++r) {
            const auto idx = static_cast<std::size_t>(t) * cfg.n_rx + r;
            const CVector& h = obs.h_true[idx];
            switch (estimator) {
                case EstimatorChoice::PerfectCSI:
                    est[idx] = h;
                    break;
                case EstimatorChoice::LS:
                    est[idx] = interpolate_ls(ls_estimate(extract_pilots(obs.rx[r], ctx.pattern, t).values, x_p),
                                              sc, cfg.n_used).h_hat;
                    break;
                case EstimatorChoice::LMMSE:
                    est[idx] = ctx.lmmse(t).apply(
                        ls_estimate(extract_pilots(obs.rx[r], ctx.pattern, t).values, x_p)).h_hat;
                    break;
                case EstimatorChoice::Hybrid: {
                    HybridInputs in{extract_pilots(obs.rx[r], ctx.pattern, t).values, x_p, sc,
                                    cfg.n_used, ctx.snr_db, ctx.beta};
                    const HybridPolicy policy{cfg.cp_len, ctx.pdp.span(), threshold_db};
                    auto e = hybrid_estimate(in, ctx.lmmse(t), policy);
                    res.chose_ls = e.estimator_used == EstimatorKind::HybridChoseLS;
                    est[idx] = std::move(e.h_hat);
                    break;
                }
            }
            res.err_all += (est[idx] - h).squaredNorm();
            res.power_all += h.squaredNorm();
            for (int k : sc) {
                res.err_pilot += std::norm(est[idx][k] - h[k]);
                res.power_pilot += std::norm(h[k]);
            }
        }
    }

    std::vector<ZfEqualizer> zf;
    zf.reserve(cfg.n_used);
    CMatrix hk(cfg.n_rx, cfg.n_tx);
    for (int k = 0; k < cfg.n_used; ++k) {
        for (int t = 0; t < cfg.n_tx; ++t) {
            for (int r = 0; r < cfg.n_rx; ++r) hk(r, t) = est[static_cast<std::size_t>(t) * cfg.n_rx + r][k];
        }
        zf.emplace_back(hk);
        if (zf.back().erased()) ++res.erasures;
    }

    const auto n_data = static_cast<Eigen::Index>(ctx.data_cells.size());
    std::vector<CVector> detected(cfg.n_tx, CVector(n_data));
    CVector y(cfg.n_rx);
    for (Eigen::Index i = 0; i < n_data; ++i) {
        const auto& pos = ctx.data_cells[static_cast<std::size_t>(i)];
        for (int r = 0; r < cfg.n_rx; ++r) y[r] = obs.rx[r](pos.subcarrier, pos.symbol);
        const CVector x = zf[pos.subcarrier].detect(y);
        for (int t = 0; t < cfg.n_tx; ++t) detected[t][i] = x[t];
    }
    for (int t = 0; t < cfg.n_tx; ++t) {
        const Bits rx_bits = demap_symbols(detected[t], cfg.constellation);
        for (std::size_t j = 0; j < rx_bits.size(); ++j) res.bit_errors += rx_bits[j] != obs.bits[t][j];
        res.bit_count += rx_bits.size();
    }
    return res;
}

std::string trial_context(const CellContext& ctx, std::uint64_t index) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "trial %llu (L=%d, snr=%g dB): ",
                  static_cast<unsigned long long>(index), ctx.pdp.span(), ctx.snr_db);
    return buf;
}

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    const auto hw = std::max(1u, std::thread::hardware_concurrency());
    const auto n_workers = std::min<std::size_t>(n, workers > 0 ? static_cast<std::size_t>(workers) : hw);
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

struct CellTotals {
    TrialResult sum;
    int trials = 0;
    int ls_branches = 0;
    bool hybrid = false;

    void add(const TrialResult& r) {
        sum.err_all += r.err_all;
        sum.power_all += r.power_all;
        sum.err_pilot += r.err_pilot;
        sum.power_pilot += r.power_pilot;
        sum.bit_errors += r.bit_errors;
        sum.bit_count += r.bit_count;
        sum.erasures += r.erasures;
        if (r.chose_ls) {
            hybrid = true;
            ls_branches += *r.chose_ls;
        }
        ++trials;
    }
};

/// Runs `trials` trials of one (channel, SNR) cell, evaluating every
/// estimator on the same simulated slot. Reduction is in trial order.
std::vector<CellTotals> run_cell(const SystemConfig& config, const PowerDelayProfile& pdp, double snr_db,
                                 LmmseModel model, const std::vector<EstimatorChoice>& estimators,
                                 double threshold_db, int trials, std::uint64_t seed, int workers) {
    const CellContext ctx(config, pdp, snr_db, model);
    std::vector<std::vector<TrialResult>> results(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t i) {
        try {
            const auto obs = simulate_slot(ctx, trial_seeds(seed, pdp.span(), snr_db, i));
            auto& row = results[i];
            for (auto e : estimators) row.push_back(evaluate(ctx, obs, e, threshold_db));
        } catch (const std::exception& ex) {
            throw std::runtime_error(trial_context(ctx, i) + ex.what());
        }
    });
    std::vector<CellTotals> totals(estimators.size());
    for (const auto& row : results) {
        for (std::size_t e = 0; e < row.size(); ++e) totals[e].add(row[e]);
    }
    return totals;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string to_string(EstimatorChoice e) {
    switch (e) {
        case EstimatorChoice::LS: return "ls";
        case EstimatorChoice::LMMSE: return "lmmse";
        case EstimatorChoice::Hybrid: return "hybrid";
        case EstimatorChoice::PerfectCSI: return "perfect";
    }
    return "?";
}

EstimatorChoice parse_estimator(std::string_view text) {
    if (text == "ls") return EstimatorChoice::LS;
    if (text == "lmmse") return EstimatorChoice::LMMSE;
    if (text == "hybrid") return EstimatorChoice::Hybrid;
    if (text == "perfect") return EstimatorChoice::PerfectCSI;
    throw std::invalid_argument("unknown estimator '" + std::string(text) + "'");
}

TrialSeeds trial_seeds(std::uint64_t seed, int channel_span, double snr_db, std::uint64_t index) {
    const auto span = static_cast<std::uint64_t>(channel_span);
    return {derive_seed(seed, {kRealizationTag, span, index}),
            derive_seed(seed, {kNoiseTag, span, std::bit_cast<std::uint64_t>(snr_db), index})};
}

TrialResult run_trial(const SystemConfig& config, const TrialSpec& spec, const TrialSeeds& seeds) {
    const CellContext ctx(config, spec.pdp, spec.snr_db, spec.lmmse_model);
    return evaluate(ctx, simulate_slot(ctx, seeds), spec.estimator, spec.hybrid_threshold_db);
}

TrialResult run_trial(const SystemConfig& config, const TrialSpec& spec, Rng& rng) {
    const std::uint64_t a = rng();
    const std::uint64_t b = rng();
    return run_trial(config, spec, TrialSeeds{a, b});
}

double compute_mse(const CVector& h_hat, const CVector& h_true, const std::vector<int>& positions) {
    if (h_hat.size() != h_true.size())
        throw std::invalid_argument("compute_mse: estimate and reference differ in length");
    if (positions.empty()) throw std::invalid_argument("compute_mse: empty position selection");
    double err = 0.0;
    double power = 0.0;
    for (int k : positions) {
        if (k < 0 || k >= h_true.size()) throw std::out_of_range("compute_mse: position out of range");
        err += std::norm(h_hat[k] - h_true[k]);
        power += std::norm(h_true[k]);
    }
    if (power == 0.0) throw std::invalid_argument("compute_mse: reference channel has zero power");
    return err / power;
}

double compute_mse(const CVector& h_hat, const CVector& h_true) {
    std::vector<int> all(static_cast<std::size_t>(h_true.size()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return compute_mse(h_hat, h_true, all);
}

double compute_ber(const Bits& tx_bits, const Bits& rx_bits) {
    if (tx_bits.size() != rx_bits.size())
        throw std::invalid_argument("compute_ber: bit vectors differ in length");
    if (tx_bits.empty()) throw std::invalid_argument("compute_ber: empty bit vectors");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx_bits.size(); ++i) errors += (tx_bits[i] != 0) != (rx_bits[i] != 0);
    return static_cast<double>(errors) / static_cast<double>(tx_bits.size());
}

void SweepConfig::validate() const {
    system.validate();
    if (n_frames < 1) throw std::invalid_argument("SweepConfig: n_frames must be >= 1");
    if (calibration_frames < 0) throw std::invalid_argument("SweepConfig: calibration_frames must be >= 0");
    if (snr_grid_db.empty()) throw std::invalid_argument("SweepConfig: empty SNR grid");
    if (!std::is_sorted(snr_grid_db.begin(), snr_grid_db.end()))
        throw std::invalid_argument("SweepConfig: SNR grid must be sorted");
    if (channel_lengths.empty()) throw std::invalid_argument("SweepConfig: no channel lengths");
    for (int l : channel_lengths) {
        if (l < 1 || l > system.n_fft)
            throw std::invalid_argument("SweepConfig: channel length " + std::to_string(l) + " out of range");
    }
    if (estimators.empty()) throw std::invalid_argument("SweepConfig: no estimators");
    if (system.n_rx < system.n_tx) throw std::invalid_argument("SweepConfig: zero-forcing needs n_rx >= n_tx");
}

double calibrate_threshold(const SystemConfig& config, const PowerDelayProfile& pdp_long,
                           const std::vector<double>& sweep_snrs, int trials, std::uint64_t seed,
                           LmmseModel model, int workers) {
    if (sweep_snrs.empty()) throw std::invalid_argument("calibrate_threshold: empty SNR grid");
    if (trials < 1) throw std::invalid_argument("calibrate_threshold: trials must be >= 1");
    if (pdp_long.span() <= config.cp_len)
        throw std::invalid_argument("calibrate_threshold: channel fits inside the cyclic prefix");
    const std::vector<EstimatorChoice> pair{EstimatorChoice::LS, EstimatorChoice::LMMSE};
    std::vector<double> ls;
    std::vector<double> lmmse;
    for (double snr : sweep_snrs) {
        const auto t = run_cell(config, pdp_long, snr, model, pair, 0.0, trials, seed, workers);
        ls.push_back(t[0].sum.mse_all());
        lmmse.push_back(t[1].sum.mse_all());
    }
    return crossover_threshold(sweep_snrs, ls, lmmse);
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config, std::map<int, double>* thresholds) {
    config.validate();
    const bool wants_hybrid = std::find(config.estimators.begin(), config.estimators.end(),
                                        EstimatorChoice::Hybrid) != config.estimators.end();
    std::vector<SweepRecord> records;
    for (int len : config.channel_lengths) {
        const auto pdp = PowerDelayProfile::uniform(len);

        double threshold = std::numeric_limits<double>::infinity();
        if (wants_hybrid && len > config.system.cp_len) {
            if (config.threshold_override_db) {
                threshold = *config.threshold_override_db;
            } else {
                const int trials = config.calibration_frames ? config.calibration_frames : config.n_frames;
                threshold = calibrate_threshold(config.system, pdp, config.snr_grid_db, trials, config.seed,
                                                config.lmmse_model, config.workers);
            }
            if (thresholds) (*thresholds)[len] = threshold;
        }

        for (double snr : config.snr_grid_db) {
            const auto totals = run_cell(config.system, pdp, snr, config.lmmse_model, config.estimators, threshold,
                                         config.n_frames, config.seed, config.workers);
            for (std::size_t e = 0; e < totals.size(); ++e) {
                const auto& t = totals[e];
                SweepRecord rec;
                rec.snr_db = snr;
                rec.channel_len = len;
                rec.estimator = config.estimators[e];
                rec.mse_all_subcarriers = t.sum.mse_all();
                rec.mse_pilot_subcarriers = t.sum.mse_pilot();
                rec.ber = t.sum.ber();
                rec.n_trials = t.trials;
                if (rec.estimator == EstimatorChoice::Hybrid)
                    rec.branch_fraction_ls = static_cast<double>(t.ls_branches) / t.trials;
                rec.seed = config.seed;
                records.push_back(rec);
            }
        }
    }
    return records;
}

void emit_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
    out << "snr_db,channel_len,estimator,mse_all_subcarriers,mse_pilot_subcarriers,ber,n_trials,"
           "branch_fraction_ls,seed\n";
    for (const auto& r : records) {
        out << format_double(r.snr_db) << ',' << r.channel_len << ',' << to_string(r.estimator) << ','
            << format_double(r.mse_all_subcarriers) << ',' << format_double(r.mse_pilot_subcarriers) << ','
            << format_double(r.ber) << ',' << r.n_trials << ','
            << (r.branch_fraction_ls ? format_double(*r.branch_fraction_ls) : std::string()) << ','
            << r.seed << '\n';
    }
}

void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    emit_csv(records, f);
    f.flush();
    if (!f) throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

}  // namespace ltechest
