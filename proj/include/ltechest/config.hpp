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

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace ltechest {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// LTE downlink bandwidth profiles. `Custom` leaves n_fft/n_used free.
enum class Bandwidth { MHz1_25, MHz2_5, MHz5, MHz10, MHz15, MHz20, Custom };

enum class Constellation { QPSK, QAM16, QAM64 };

struct BandwidthProfile {
    Bandwidth bandwidth;
    double mhz;
    int n_prb;
    double sampling_mhz;
    int n_fft;
    int n_occupied;  // includes the DC bin
};

/// Looks up the LTE parameter row for a named bandwidth. Throws for Custom.
const BandwidthProfile& bandwidth_profile(Bandwidth bw);

Bandwidth parse_bandwidth(std::string_view text);
std::string to_string(Bandwidth bw);

Constellation parse_constellation(std::string_view text);
std::string to_string(Constellation c);
int bits_per_symbol(Constellation c);

struct SystemConfig {
    Bandwidth bandwidth = Bandwidth::MHz5;
    int n_fft = 512;
    int n_used = 300;
    int cp_len = 16;
    int n_symbols_per_slot = 7;
    int n_tx = 2;
    int n_rx = 2;
    Constellation constellation = Constellation::QPSK;

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;

    int symbol_len() const { return n_fft + cp_len; }
    bool short_cp() const { return n_symbols_per_slot == 7; }
};

/// Config for a named profile: n_fft from the table, n_used = occupied - 1
/// (the DC bin is kept null).
SystemConfig make_config(Bandwidth bw);

/// Used subcarriers sit around DC with equal guard bands and the DC bin
/// left empty. The lower half maps to negative frequencies.
class SubcarrierMap {
public:
    SubcarrierMap(int n_fft, int n_used);
    explicit SubcarrierMap(const SystemConfig& config)
        : SubcarrierMap(config.n_fft, config.n_used) {}

    int n_fft() const { return n_fft_; }
    int n_used() const { return n_used_; }

    /// FFT bin (0..n_fft-1) carrying used subcarrier `index`.
    int bin(int index) const;
    /// Signed frequency index, -n_used/2 .. n_used - n_used/2, skipping 0.
    int frequency(int index) const;

private:
    int n_fft_;
    int n_used_;
    int n_negative_;
};

}  // namespace ltechest
