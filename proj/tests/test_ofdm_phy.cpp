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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ltechest/ofdm_phy.hpp"

using namespace ltechest;

namespace {

CVector random_vector(int n, std::mt19937_64& gen) {
    std::normal_distribution<double> g;
    CVector v(n);
    for (auto& x : v) x = cplx(g(gen), g(gen));
    return v;
}

// Textbook O(N^2) DFT, the oracle for the FFT-backed path.
CVector brute_dft(const CVector& x, int sign) {
    const auto n = x.size();
    CVector out = CVector::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = 0; l < n; ++l) {
            const long long m = (static_cast<long long>(k) * l) % n;
            out[k] += x[l] * std::polar(1.0, sign * 2.0 * std::numbers::pi * m / n);
        }
    }
    return out / std::sqrt(static_cast<double>(n));
}

}  // namespace

TEST_CASE("dft coefficient values") {
    CHECK(std::abs(dft_coefficient(4, 0, 0) - cplx(0.5, 0)) < 1e-15);
    CHECK(std::abs(dft_coefficient(4, 1, 1) - cplx(0, -0.5)) < 1e-15);
    CHECK(std::abs(dft_coefficient(4, 2, 1) - cplx(-0.5, 0)) < 1e-15);
    for (int n : {3, 8, 17}) {
        cplx row0 = 0;
        for (int k = 0; k < n; ++k) row0 += dft_coefficient(n, 0, k);
        CHECK(std::abs(row0 - std::sqrt(static_cast<double>(n))) < 1e-12);
    }
    CHECK_THROWS_AS(dft_coefficient(4, 4, 0), std::out_of_range);
}

TEST_CASE("dft matrix is unitary") {
    for (int n : {5, 16, 64}) {
        CMatrix f(n, n);
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k) f(l, k) = dft_coefficient(n, l, k);
        CHECK((f * f.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("fft path matches the dft matrix") {
    std::mt19937_64 gen(1);
    for (int n : {128, 256, 300, 512, 1024, 1536, 2048}) {
        CAPTURE(n);
        const auto x = random_vector(n, gen);
        const double scale = x.norm();
        CHECK((unitary_dft(x) - brute_dft(x, -1)).norm() / scale < 1e-10);
        CHECK((unitary_idft(x) - brute_dft(x, +1)).norm() / scale < 1e-10);
        CHECK((unitary_idft(unitary_dft(x)) - x).norm() / scale < 1e-12);
    }
}

TEST_CASE("ofdm symbol structure") {
    const SystemConfig cfg;
    std::mt19937_64 gen(2);
    const auto col = random_vector(cfg.n_used, gen);
    const auto sym = ofdm_modulate(col, cfg);
    REQUIRE(sym.size() == cfg.n_fft + cfg.cp_len);

    // CP is a bit-exact copy of the body's tail.
    for (int i = 0; i < cfg.cp_len; ++i) CHECK(sym[i] == sym[cfg.n_fft + i]);

    // Parseval on the body.
    CHECK(std::abs(sym.tail(cfg.n_fft).squaredNorm() - col.squaredNorm()) < 1e-9 * col.squaredNorm());

    // DC bin stays empty.
    const auto bins = unitary_dft(sym.tail(cfg.n_fft));
    CHECK(std::abs(bins[0]) < 1e-12);

    CHECK((ofdm_demodulate(sym, cfg) - col).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("slot round trip") {
    const SystemConfig cfg;
    std::mt19937_64 gen(3);
    ResourceGrid grid(cfg.n_used, cfg.n_symbols_per_slot, 2);
    for (int a = 0; a < 2; ++a)
        for (int l = 0; l < cfg.n_symbols_per_slot; ++l)
            for (int k = 0; k < cfg.n_used; ++k) grid.at(k, l, a) = cplx(double(gen() % 7), -double(gen() % 5));

    const auto sig = modulate_slot(grid, cfg);
    CHECK(sig.n_antennas() == 2);
    CHECK(sig.n_symbols() == 7);
    CHECK(sig.length() == 7 * 528);
    const auto back = demodulate_slot(sig, cfg);
    for (int a = 0; a < 2; ++a) CHECK((back[a] - grid.antenna(a)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("wrong lengths are rejected") {
    const SystemConfig cfg;
    CHECK_THROWS_AS(ofdm_modulate(CVector::Zero(299), cfg), std::invalid_argument);
    CHECK_THROWS_AS(ofdm_demodulate(CVector::Zero(512), cfg), std::invalid_argument);
    TimeDomainSignal bad;
    bad.symbol_len = cfg.symbol_len();
    bad.streams = {CVector::Zero(cfg.symbol_len() * 2 + 1)};
    CHECK_THROWS_AS(demodulate_slot(bad, cfg), std::invalid_argument);
}
