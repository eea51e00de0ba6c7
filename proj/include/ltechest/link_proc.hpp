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

#include <cstdint>
#include <vector>

#include "ltechest/config.hpp"

namespace ltechest {

using Bits = std::vector<std::uint8_t>;

/// Gray QPSK: bit pair (b0, b1) -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2).
CVector qpsk_map(const Bits& bits);
/// Sign decision per axis; a zero component decides 0.
Bits qpsk_demap(const CVector& symbols);

/// Gray 16-QAM, unit average power. Bits (b0 b1 b2 b3): b0/b1 pick the I/Q
/// sign, b2/b3 pick the inner (0) or outer (1) amplitude.
CVector qam16_map(const Bits& bits);
Bits qam16_demap(const CVector& symbols);

CVector map_bits(const Bits& bits, Constellation c);
Bits demap_symbols(const CVector& symbols, Constellation c);

/// Condition number above which a subcarrier is erased instead of inverted.
inline constexpr double kZfMaxCondition = 1e12;

/// Zero-forcing equalizer for one subcarrier's n_rx x n_tx channel.
class ZfEqualizer {
public:
    explicit ZfEqualizer(const CMatrix& h);

    /// (H^H H)^-1 H^H y, or zeros when the channel was erased.
    CVector detect(const CVector& y) const;
    bool erased() const { return erased_; }
    double condition() const { return condition_; }

private:
    CMatrix pinv_;
    Eigen::Index n_tx_;
    double condition_;
    bool erased_;
};

struct ZfResult {
    CVector x;
    bool erased = false;
};

/// One-shot ZF solve. Throws std::invalid_argument when n_rx < n_tx or y
/// does not match H.
ZfResult zf_detect(const CVector& y, const CMatrix& h);

}  // namespace ltechest
