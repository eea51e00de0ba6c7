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

#include "ltechest/link_proc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ltechest {

namespace {

const double kQpskScale = 1.0 / std::sqrt(2.0);
const double kQam16Scale = 1.0 / std::sqrt(10.0);

void check_multiple(const Bits& bits, std::size_t k, const char* who) {
    if (bits.size() % k != 0)
        throw std::invalid_argument(std::string(who) + ": bit count " + std::to_string(bits.size()) +
                                    " is not a multiple of " + std::to_string(k));
}

double sign_of(std::uint8_t b) { return b ? -1.0 : 1.0; }

// sigma_max / sigma_min of H. Square 2x2 uses sigma_max * sigma_min = |det H|
// and sigma_max^2 + sigma_min^2 = |H|_F^2, which avoids squaring the condition.
double condition_number(const CMatrix& h) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (h.cols() == 1) return h.norm() > 0.0 ? 1.0 : inf;
    if (h.rows() == 2 && h.cols() == 2) {
        const double det = std::abs(h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0));
        const double fro2 = h.squaredNorm();
        const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
        const double smax = std::sqrt((fro2 + disc) / 2.0);
        const double smin = smax > 0.0 ? det / smax : 0.0;
        return smin > 0.0 ? smax / smin : inf;
    }
    const Eigen::JacobiSVD<CMatrix> svd(h);
    const auto& s = svd.singularValues();
    const double smin = s[s.size() - 1];
    return smin > 0.0 ? s[0] / smin : inf;
}

}  // namespace

CVector qpsk_map(const Bits& bits) {
    check_multiple(bits, 2, "qpsk_map");
    CVector out(static_cast<Eigen::Index>(bits.size() / 2));
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out[i] = kQpskScale * cplx(sign_of(bits[2 * i]), sign_of(bits[2 * i + 1]));
    return out;
}

Bits qpsk_demap(const CVector& symbols) {
    Bits out(static_cast<std::size_t>(symbols.size()) * 2);
    for (Eigen::Index i = 0; i < symbols.size(); ++i) {
        out[2 * i] = symbols[i].real() < 0.0;
        out[2 * i + 1] = symbols[i].imag() < 0.0;
    }
    return out;
}

CVector qam16_map(const Bits& bits) {
    check_multiple(bits, 4, "qam16_map");
    CVector out(static_cast<Eigen::Index>(bits.size() / 4));
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const auto* b = &bits[4 * i];
        const double re = sign_of(b[0]) * (b[2] ? 3.0 : 1.0);
        const double im = sign_of(b[1]) * (b[3] ? 3.0 : 1.0);
        out[i] = kQam16Scale * cplx(re, im);
    }
    return out;
}

Bits qam16_demap(const CVector& symbols) {
    const double edge = 2.0 * kQam16Scale;
    Bits out(static_cast<std::size_t>(symbols.size()) * 4);
    for (Eigen::Index i = 0; i < symbols.size(); ++i) {
        const cplx s = symbols[i];
        out[4 * i] = s.real() < 0.0;
        out[4 * i + 1] = s.imag() < 0.0;
        out[4 * i + 2] = std::abs(s.real()) > edge;
        out[4 * i + 3] = std::abs(s.imag()) > edge;
    }
    return out;
}

CVector map_bits(const Bits& bits, Constellation c) {
    switch (c) {
        case Constellation::QPSK: return qpsk_map(bits);
        case Constellation::QAM16: return qam16_map(bits);
        default: break;
    }
    throw std::invalid_argument("map_bits: unsupported constellation " + to_string(c));
}

Bits demap_symbols(const CVector& symbols, Constellation c) {
    switch (c) {
        case Constellation::QPSK: return qpsk_demap(symbols);
        case Constellation::QAM16: return qam16_demap(symbols);
        default: break;
    }
    throw std::invalid_argument("demap_symbols: unsupported constellation " + to_string(c));
}

ZfEqualizer::ZfEqualizer(const CMatrix& h) : n_tx_(h.cols()) {
    if (h.rows() < h.cols())
        throw std::invalid_argument("ZfEqualizer: need n_rx >= n_tx, got " + std::to_string(h.rows()) +
                                    "x" + std::to_string(h.cols()));
    condition_ = condition_number(h);
    erased_ = !(condition_ <= kZfMaxCondition);
    if (!erased_) {
        const CMatrix gram = h.adjoint() * h;
        pinv_ = gram.inverse() * h.adjoint();
    }
}

CVector ZfEqualizer::detect(const CVector& y) const {
    if (erased_) return CVector::Zero(n_tx_);
    if (y.size() != pinv_.cols())
        throw std::invalid_argument("ZfEqualizer: receive vector has the wrong length");
    return pinv_ * y;
}

ZfResult zf_detect(const CVector& y, const CMatrix& h) {
    if (y.size() != h.rows())
        throw std::invalid_argument("zf_detect: y has " + std::to_string(y.size()) + " entries, H has " +
                                    std::to_string(h.rows()) + " rows");
    const ZfEqualizer eq(h);
    return {eq.detect(y), eq.erased()};
}

}  // namespace ltechest
