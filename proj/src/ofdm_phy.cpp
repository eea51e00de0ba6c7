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

#include "ltechest/ofdm_phy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

namespace ltechest {

namespace {

// Eigen::FFT caches twiddles per size inside the object; one per thread.
Eigen::FFT<double>& fft_engine() {
    thread_local Eigen::FFT<double> fft = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::Unscaled);
        return f;
    }();
    return fft;
}

}  // namespace

cplx dft_coefficient(int n, int l, int k) {
    if (n <= 0 || l < 0 || l >= n || k < 0 || k >= n)
        throw std::out_of_range("dft_coefficient: index out of range");
    // Reduce the exponent mod n first so large l*k keeps full precision.
    const auto m = (static_cast<long long>(l) * k) % n;
    const double phase = -2.0 * std::numbers::pi * static_cast<double>(m) / n;
    return std::polar(1.0 / std::sqrt(static_cast<double>(n)), phase);
}

CVector unitary_dft(const CVector& x) {
    CVector out;
    fft_engine().fwd(out, x);
    return out / std::sqrt(static_cast<double>(x.size()));
}

CVector unitary_idft(const CVector& x) {
    CVector out;
    fft_engine().inv(out, x);
    return out / std::sqrt(static_cast<double>(x.size()));
}

CVector ofdm_modulate(const CVector& grid_column, const SystemConfig& config) {
    if (grid_column.size() != config.n_used)
        throw std::invalid_argument("ofdm_modulate: expected " + std::to_string(config.n_used) +
                                    " subcarriers, got " + std::to_string(grid_column.size()));
    const SubcarrierMap map(config);
    CVector bins = CVector::Zero(config.n_fft);
    for (int i = 0; i < config.n_used; ++i) bins[map.bin(i)] = grid_column[i];

    const CVector body = unitary_idft(bins);
    CVector out(config.symbol_len());
    out.head(config.cp_len) = body.tail(config.cp_len);
    out.tail(config.n_fft) = body;
    return out;
}

CVector ofdm_demodulate(const CVector& rx_symbol, const SystemConfig& config) {
    if (rx_symbol.size() != config.symbol_len())
        throw std::invalid_argument("ofdm_demodulate: expected " + std::to_string(config.symbol_len()) +
                                    " samples, got " + std::to_string(rx_symbol.size()));
    const SubcarrierMap map(config);
    const CVector bins = unitary_dft(rx_symbol.tail(config.n_fft));
    CVector out(config.n_used);
    for (int i = 0; i < config.n_used; ++i) out[i] = bins[map.bin(i)];
    return out;
}

TimeDomainSignal modulate_slot(const ResourceGrid& grid, const SystemConfig& config) {
    const int len = config.symbol_len();
    TimeDomainSignal sig;
    sig.symbol_len = len;
    sig.streams.assign(grid.n_antennas(), CVector(static_cast<Eigen::Index>(len) * grid.n_symbols()));
    for (int a = 0; a < grid.n_antennas(); ++a) {
        for (int l = 0; l < grid.n_symbols(); ++l)
            sig.streams[a].segment(static_cast<Eigen::Index>(l) * len, len) =
                ofdm_modulate(grid.antenna(a).col(l), config);
    }
    return sig;
}

std::vector<CMatrix> demodulate_slot(const TimeDomainSignal& rx, const SystemConfig& config) {
    const int len = config.symbol_len();
    if (rx.symbol_len != len || rx.length() % len != 0)
        throw std::invalid_argument("demodulate_slot: stream is not a whole number of symbols");
    const int n_sym = rx.n_symbols();
    std::vector<CMatrix> out;
    out.reserve(rx.streams.size());
    for (const auto& s : rx.streams) {
        CMatrix g(config.n_used, n_sym);
        for (int l = 0; l < n_sym; ++l)
            g.col(l) = ofdm_demodulate(s.segment(static_cast<Eigen::Index>(l) * len, len), config);
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace ltechest
