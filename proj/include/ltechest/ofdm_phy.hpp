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

#include <vector>

#include "ltechest/config.hpp"
#include "ltechest/resource_grid.hpp"

namespace ltechest {

/// Entry (l, k) of the unitary n-point DFT matrix: exp(-j2*pi*l*k/n) / sqrt(n).
cplx dft_coefficient(int n, int l, int k);

/// Unitary forward / inverse DFT of arbitrary length.
CVector unitary_dft(const CVector& x);
CVector unitary_idft(const CVector& x);

/// One OFDM symbol: maps n_used subcarriers into the FFT bins, applies the
/// inverse DFT and prepends the last cp_len samples.
CVector ofdm_modulate(const CVector& grid_column, const SystemConfig& config);

/// Drops the CP, applies the DFT and reads back the used bins.
CVector ofdm_demodulate(const CVector& rx_symbol, const SystemConfig& config);

/// One sample stream per antenna, a whole number of OFDM symbols long.
struct TimeDomainSignal {
    std::vector<CVector> streams;
    int symbol_len = 0;

    int n_antennas() const { return static_cast<int>(streams.size()); }
    Eigen::Index length() const { return streams.empty() ? 0 : streams.front().size(); }
    int n_symbols() const { return symbol_len ? static_cast<int>(length() / symbol_len) : 0; }
};

/// Modulates every symbol of every antenna of a slot back to back.
TimeDomainSignal modulate_slot(const ResourceGrid& grid, const SystemConfig& config);

/// Demodulates each antenna's stream into an n_used x n_symbols grid.
std::vector<CMatrix> demodulate_slot(const TimeDomainSignal& rx, const SystemConfig& config);

}  // namespace ltechest
