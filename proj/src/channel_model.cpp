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

#include "ltechest/channel_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ltechest {

PowerDelayProfile::PowerDelayProfile(std::vector<int> tap_delays, std::vector<double> tap_powers)
    : delays_(std::move(tap_delays)), powers_(std::move(tap_powers)) {
    if (delays_.empty()) throw std::invalid_argument("PowerDelayProfile: no taps");
    if (delays_.size() != powers_.size())
        throw std::invalid_argument("PowerDelayProfile: delays and powers differ in length");
    if (delays_.front() != 0) throw std::invalid_argument("PowerDelayProfile: first delay must be 0");
    for (std::size_t i = 1; i < delays_.size(); ++i) {
        if (delays_[i] <= delays_[i - 1])
            throw std::invalid_argument("PowerDelayProfile: delays must strictly increase");
    }
    for (double p : powers_) {
        if (!(p >= 0.0)) throw std::invalid_argument("PowerDelayProfile: negative tap power");
    }
    const double total = std::accumulate(powers_.begin(), powers_.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("PowerDelayProfile: tap powers sum to " + std::to_string(total) +
                                    ", expected 1");
}

PowerDelayProfile PowerDelayProfile::uniform(int n_taps) {
    if (n_taps < 1) throw std::invalid_argument("PowerDelayProfile: need at least one tap");
    std::vector<int> d(n_taps);
    std::iota(d.begin(), d.end(), 0);
    return {std::move(d), std::vector<double>(n_taps, 1.0 / n_taps)};
}

ChannelRealization::ChannelRealization(PowerDelayProfile pdp, int n_tx, int n_rx)
    : pdp_(std::move(pdp)), n_tx_(n_tx), n_rx_(n_rx) {
    taps_.assign(static_cast<std::size_t>(n_tx) * n_rx, CVector::Zero(pdp_.n_taps()));
}

ChannelRealization generate_channel(const PowerDelayProfile& pdp, int n_tx, int n_rx, Rng& rng) {
    ChannelRealization ch(pdp, n_tx, n_rx);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int t = 0; t < n_tx; ++t) {
        for (int r = 0; r < n_rx; ++r) {
            CVector& g = ch.taps(t, r);
            for (int l = 0; l < pdp.n_taps(); ++l) {
                const double s = std::sqrt(pdp.powers()[l] / 2.0);
                const double re = normal(rng);
                const double im = normal(rng);
                g[l] = cplx(s * re, s * im);
            }
        }
    }
    return ch;
}

CVector channel_frequency_response(const CVector& taps, const std::vector<int>& delays, int n_fft) {
    if (static_cast<Eigen::Index>(delays.size()) != taps.size())
        throw std::invalid_argument("channel_frequency_response: taps and delays differ in length");
    CVector padded = CVector::Zero(n_fft);
    for (std::size_t l = 0; l < delays.size(); ++l) {
        if (delays[l] < 0 || delays[l] >= n_fft)
            throw std::invalid_argument("channel_frequency_response: delay exceeds the FFT size");
        padded[delays[l]] += taps[static_cast<Eigen::Index>(l)];
    }
    return unitary_dft(padded) * std::sqrt(static_cast<double>(n_fft));
}

CVector channel_frequency_response(const CVector& taps, int n_fft) {
    std::vector<int> delays(static_cast<std::size_t>(taps.size()));
    std::iota(delays.begin(), delays.end(), 0);
    return channel_frequency_response(taps, delays, n_fft);
}

CVector used_frequency_response(const CVector& taps, const std::vector<int>& delays,
                                const SystemConfig& config) {
    const CVector full = channel_frequency_response(taps, delays, config.n_fft);
    const SubcarrierMap map(config);
    CVector out(config.n_used);
    for (int i = 0; i < config.n_used; ++i) out[i] = full[map.bin(i)];
    return out;
}

TimeDomainSignal apply_channel(const TimeDomainSignal& tx, const ChannelRealization& channel) {
    if (tx.n_antennas() != channel.n_tx())
        throw std::invalid_argument("apply_channel: signal has " + std::to_string(tx.n_antennas()) +
                                    " streams, channel expects " + std::to_string(channel.n_tx()));
    const Eigen::Index n = tx.length();
    const auto& delays = channel.pdp().delays();

    TimeDomainSignal rx;
    rx.symbol_len = tx.symbol_len;
    rx.streams.assign(channel.n_rx(), CVector::Zero(n));
    for (int r = 0; r < channel.n_rx(); ++r) {
        CVector& y = rx.streams[r];
        for (int t = 0; t < channel.n_tx(); ++t) {
            const CVector& x = tx.streams[t];
            const CVector& g = channel.taps(t, r);
            for (std::size_t l = 0; l < delays.size(); ++l) {
                const Eigen::Index d = delays[l];
                if (d >= n) break;
                y.tail(n - d) += g[static_cast<Eigen::Index>(l)] * x.head(n - d);
            }
        }
    }
    return rx;
}

double NoiseSpec::variance() const {
    if (noiseless()) return 0.0;
    return signal_power_ref / std::pow(10.0, snr_db / 10.0);
}

bool NoiseSpec::noiseless() const { return std::isinf(snr_db) && snr_db > 0; }

CVector add_awgn(const CVector& signal, const NoiseSpec& noise, Rng& rng) {
    if (!std::isfinite(noise.snr_db) && !noise.noiseless())
        throw std::invalid_argument("add_awgn: snr_db must be finite or +inf");
    if (noise.noiseless()) return signal;
    const double s = std::sqrt(noise.variance() / 2.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector out = signal;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        out[i] += cplx(s * re, s * im);
    }
    return out;
}

void add_awgn_inplace(TimeDomainSignal& signal, const NoiseSpec& noise, Rng& rng) {
    for (auto& s : signal.streams) s = add_awgn(s, noise, rng);
}

}  // namespace ltechest
