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

#include "ltechest/config.hpp"

#include <array>
#include <stdexcept>

namespace ltechest {

namespace {

constexpr std::array<BandwidthProfile, 6> kProfiles{{
    {Bandwidth::MHz1_25, 1.25, 6, 1.92, 128, 76},
    {Bandwidth::MHz2_5, 2.5, 12, 3.84, 256, 151},
    {Bandwidth::MHz5, 5.0, 25, 7.68, 512, 301},
    {Bandwidth::MHz10, 10.0, 50, 15.36, 1024, 601},
    {Bandwidth::MHz15, 15.0, 75, 23.04, 1536, 901},
    {Bandwidth::MHz20, 20.0, 100, 30.72, 2048, 1201},
}};

std::invalid_argument config_error(const std::string& what) {
    return std::invalid_argument("SystemConfig: " + what);
}

}  // namespace

const BandwidthProfile& bandwidth_profile(Bandwidth bw) {
    for (const auto& p : kProfiles) {
        if (p.bandwidth == bw) return p;
    }
    throw std::invalid_argument("no LTE profile for custom bandwidth");
}

Bandwidth parse_bandwidth(std::string_view text) {
    if (text == "1.25") return Bandwidth::MHz1_25;
    if (text == "2.5") return Bandwidth::MHz2_5;
    if (text == "5") return Bandwidth::MHz5;
    if (text == "10") return Bandwidth::MHz10;
    if (text == "15") return Bandwidth::MHz15;
    if (text == "20") return Bandwidth::MHz20;
    if (text == "custom") return Bandwidth::Custom;
    throw std::invalid_argument("unknown bandwidth '" + std::string(text) + "'");
}

std::string to_string(Bandwidth bw) {
    switch (bw) {
        case Bandwidth::MHz1_25: return "1.25";
        case Bandwidth::MHz2_5: return "2.5";
        case Bandwidth::MHz5: return "5";
        case Bandwidth::MHz10: return "10";
        case Bandwidth::MHz15: return "15";
        case Bandwidth::MHz20: return "20";
        case Bandwidth::Custom: return "custom";
    }
    return "custom";
}

Constellation parse_constellation(std::string_view text) {
    if (text == "qpsk" || text == "QPSK") return Constellation::QPSK;
    if (text == "qam16" || text == "QAM16" || text == "16qam") return Constellation::QAM16;
    if (text == "qam64" || text == "QAM64" || text == "64qam") return Constellation::QAM64;
    throw std::invalid_argument("unknown constellation '" + std::string(text) + "'");
}

std::string to_string(Constellation c) {
    switch (c) {
        case Constellation::QPSK: return "qpsk";
        case Constellation::QAM16: return "qam16";
        case Constellation::QAM64: return "qam64";
    }
    return "?";
}

int bits_per_symbol(Constellation c) {
    switch (c) {
        case Constellation::QPSK: return 2;
        case Constellation::QAM16: return 4;
        case Constellation::QAM64: return 6;
    }
    return 0;
}

void SystemConfig::validate() const {
    if (n_fft <= 0) throw config_error("n_fft must be positive");
    if (n_used <= 0) throw config_error("n_used must be positive");
    if (n_used >= n_fft) throw config_error("n_used must be smaller than n_fft");
    if (cp_len < 0) throw config_error("cp_len must be non-negative");
    if (cp_len >= n_fft) throw config_error("cp_len must be smaller than n_fft");
    if (n_symbols_per_slot != 6 && n_symbols_per_slot != 7)
        throw config_error("n_symbols_per_slot must be 7 (short CP) or 6 (long CP)");
    if (n_tx < 1 || n_tx > 2) throw config_error("n_tx must be 1 or 2");
    if (n_rx < 1 || n_rx > 2) throw config_error("n_rx must be 1 or 2");
    if (constellation != Constellation::QPSK && constellation != Constellation::QAM16)
        throw config_error("constellation must be qpsk or qam16");
    if (bandwidth != Bandwidth::Custom && bandwidth_profile(bandwidth).n_fft != n_fft)
        throw config_error("n_fft " + std::to_string(n_fft) + " does not match the " +
                           to_string(bandwidth) + " MHz profile (expected " +
                           std::to_string(bandwidth_profile(bandwidth).n_fft) + ")");
}

SystemConfig make_config(Bandwidth bw) {
    SystemConfig cfg;
    cfg.bandwidth = bw;
    if (bw != Bandwidth::Custom) {
        const auto& p = bandwidth_profile(bw);
        cfg.n_fft = p.n_fft;
        cfg.n_used = p.n_occupied - 1;
    }
    return cfg;
}

SubcarrierMap::SubcarrierMap(int n_fft, int n_used)
    : n_fft_(n_fft), n_used_(n_used), n_negative_(n_used / 2) {
    if (n_used <= 0 || n_used >= n_fft)
        throw std::invalid_argument("SubcarrierMap: need 0 < n_used < n_fft");
}

int SubcarrierMap::bin(int index) const {
    const int f = frequency(index);
    return f < 0 ? f + n_fft_ : f;
}

int SubcarrierMap::frequency(int index) const {
    if (index < 0 || index >= n_used_)
        throw std::out_of_range("SubcarrierMap: subcarrier index out of range");
    return index < n_negative_ ? index - n_negative_ : index - n_negative_ + 1;
}

}  // namespace ltechest
