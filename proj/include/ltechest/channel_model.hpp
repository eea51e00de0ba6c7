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

#include <limits>
#include <vector>

#include "ltechest/config.hpp"
#include "ltechest/ofdm_phy.hpp"
#include "ltechest/rng.hpp"

namespace ltechest {

/// Tap delays (integer samples) and powers of a multipath channel.
class PowerDelayProfile {
public:
    /// Throws unless delays start at 0, strictly increase, and powers are
    /// non-negative and sum to 1.
    PowerDelayProfile(std::vector<int> tap_delays, std::vector<double> tap_powers);

    /// L taps at delays 0..L-1 with equal power 1/L.
    static PowerDelayProfile uniform(int n_taps);

    const std::vector<int>& delays() const { return delays_; }
    const std::vector<double>& powers() const { return powers_; }
    int n_taps() const { return static_cast<int>(delays_.size()); }
    /// Channel memory in samples plus one, i.e. last delay + 1.
    int span() const { return delays_.back() + 1; }

private:
    std::vector<int> delays_;
    std::vector<double> powers_;
};

/// Independent FIR channels for every (tx, rx) antenna pair.
class ChannelRealization {
public:
    ChannelRealization(PowerDelayProfile pdp, int n_tx, int n_rx);

    int n_tx() const { return n_tx_; }
    int n_rx() const { return n_rx_; }
    const PowerDelayProfile& pdp() const { return pdp_; }

    CVector& taps(int tx, int rx) { return taps_[tx * n_rx_ + rx]; }
    const CVector& taps(int tx, int rx) const { return taps_[tx * n_rx_ + rx]; }

private:
    PowerDelayProfile pdp_;
    int n_tx_;
    int n_rx_;
    std::vector<CVector> taps_;
};

/// Rayleigh taps: circularly-symmetric Gaussian with variance tap_powers[l].
ChannelRealization generate_channel(const PowerDelayProfile& pdp, int n_tx, int n_rx, Rng& rng);

/// H_k = sum_l g_l exp(-j2*pi*k*delay_l/N) for k = 0..N-1 (no 1/sqrt(N)).
CVector channel_frequency_response(const CVector& taps, const std::vector<int>& delays, int n_fft);
/// Same, with taps at consecutive delays 0..L-1.
CVector channel_frequency_response(const CVector& taps, int n_fft);

/// Frequency response restricted to the used subcarriers, in grid order.
CVector used_frequency_response(const CVector& taps, const std::vector<int>& delays,
                                const SystemConfig& config);

/// rx_r = sum_t (tx_t * g_{t,r}) by linear convolution over the whole stream,
/// truncated to the input length.
TimeDomainSignal apply_channel(const TimeDomainSignal& tx, const ChannelRealization& channel);

struct NoiseSpec {
    /// +infinity disables noise.
    double snr_db = std::numeric_limits<double>::infinity();
    double signal_power_ref = 1.0;

    double variance() const;
    bool noiseless() const;
};

/// Adds i.i.d. complex Gaussian noise with variance NoiseSpec::variance().
CVector add_awgn(const CVector& signal, const NoiseSpec& noise, Rng& rng);
void add_awgn_inplace(TimeDomainSignal& signal, const NoiseSpec& noise, Rng& rng);

}  // namespace ltechest
