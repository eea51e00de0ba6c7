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

#include "doctest.h"
#include "ltechest/channel_model.hpp"

using namespace ltechest;

namespace {

ResourceGrid random_grid(const SystemConfig& cfg, int n_tx, Rng& rng) {
    std::normal_distribution<double> g;
    ResourceGrid grid(cfg.n_used, cfg.n_symbols_per_slot, n_tx);
    for (int a = 0; a < n_tx; ++a)
        for (int l = 0; l < cfg.n_symbols_per_slot; ++l)
            for (int k = 0; k < cfg.n_used; ++k) grid.at(k, l, a) = cplx(g(rng), g(rng));
    return grid;
}

// max over subcarriers and symbols of |Y - sum_t H_t X_t| / |sum_t H_t X_t|
double diagonal_residual(const SystemConfig& cfg, int n_taps, std::uint64_t seed) {
    Rng rng(seed);
    const auto pdp = PowerDelayProfile::uniform(n_taps);
    const auto ch = generate_channel(pdp, cfg.n_tx, cfg.n_rx, rng);
    const auto grid = random_grid(cfg, cfg.n_tx, rng);
    const auto rx = demodulate_slot(apply_channel(modulate_slot(grid, cfg), ch), cfg);

    double worst = 0.0;
    for (int r = 0; r < cfg.n_rx; ++r) {
        CMatrix expect = CMatrix::Zero(cfg.n_used, cfg.n_symbols_per_slot);
        for (int t = 0; t < cfg.n_tx; ++t) {
            const auto h = used_frequency_response(ch.taps(t, r), pdp.delays(), cfg);
            expect += h.asDiagonal() * grid.antenna(t);
        }
        worst = std::max(worst, ((rx[r] - expect).array().abs() / expect.array().abs()).maxCoeff());
    }
    return worst;
}

}  // namespace

TEST_CASE("power delay profile validation") {
    CHECK_NOTHROW(PowerDelayProfile({0, 3, 7}, {0.5, 0.25, 0.25}));
    CHECK_THROWS_AS(PowerDelayProfile({1, 3}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({0, 3, 3}, {0.5, 0.25, 0.25}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({0, 1}, {1.5, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({0, 1}, {0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile::uniform(0), std::invalid_argument);
    const auto u = PowerDelayProfile::uniform(40);
    CHECK(u.span() == 40);
    CHECK(u.powers()[39] == doctest::Approx(1.0 / 40));
}

TEST_CASE("tap power moments") {
    Rng rng(123);
    const int n = 10000;

    double p1 = 0.0;
    const auto one = PowerDelayProfile::uniform(1);
    for (int i = 0; i < n; ++i) p1 += std::norm(generate_channel(one, 1, 1, rng).taps(0, 0)[0]);
    p1 /= n;
    CHECK(p1 > 0.97);
    CHECK(p1 < 1.03);

    std::vector<double> p4(4, 0.0);
    const auto four = PowerDelayProfile::uniform(4);
    for (int i = 0; i < n; ++i) {
        const auto g = generate_channel(four, 1, 1, rng).taps(0, 0);
        for (int l = 0; l < 4; ++l) p4[l] += std::norm(g[l]) / n;
    }
    for (double p : p4) CHECK(std::abs(p - 0.25) < 0.25 * 0.03 * 1.5);
}

TEST_CASE("awgn variance and noiseless passthrough") {
    Rng rng(5);
    const CVector zero = CVector::Zero(100000);
    const auto noisy = add_awgn(zero, NoiseSpec{0.0, 1.0}, rng);
    const double var = noisy.squaredNorm() / zero.size();
    CHECK(var > 0.98);
    CHECK(var < 1.02);
    // Real and imaginary halves carry equal power.
    CHECK(noisy.real().squaredNorm() / zero.size() == doctest::Approx(0.5).epsilon(0.02));

    CHECK(NoiseSpec{10.0, 2.0}.variance() == doctest::Approx(0.2));
    CHECK(NoiseSpec{}.noiseless());
    const CVector x = CVector::Constant(4, cplx(1, 2));
    CHECK(add_awgn(x, NoiseSpec{}, rng) == x);
    CHECK_THROWS_AS(add_awgn(x, NoiseSpec{std::nan(""), 1.0}, rng), std::invalid_argument);
    CHECK_THROWS_AS(add_awgn(x, NoiseSpec{-std::numeric_limits<double>::infinity(), 1.0}, rng),
                    std::invalid_argument);
}

TEST_CASE("generation is deterministic per seed") {
    const auto pdp = PowerDelayProfile::uniform(6);
    Rng a(99), b(99), c(100);
    const auto ga = generate_channel(pdp, 2, 2, a);
    const auto gb = generate_channel(pdp, 2, 2, b);
    const auto gc = generate_channel(pdp, 2, 2, c);
    for (int t = 0; t < 2; ++t)
        for (int r = 0; r < 2; ++r) {
            CHECK(ga.taps(t, r) == gb.taps(t, r));
            CHECK(ga.taps(t, r) != gc.taps(t, r));
        }
}

TEST_CASE("frequency response") {
    CVector g(1);
    g << cplx(1, 0);
    CHECK((channel_frequency_response(g, 8) - CVector::Ones(8)).norm() < 1e-14);

    CVector g2(2);
    g2 << cplx(1, 0), cplx(1, 0);
    const auto h2 = channel_frequency_response(g2, 4);
    CHECK(std::abs(h2[0] - cplx(2, 0)) < 1e-14);
    CHECK(std::abs(h2[1] - cplx(1, -1)) < 1e-14);
    CHECK(std::abs(h2[2]) < 1e-14);

    // Sparse delays against the defining sum.
    Rng rng(8);
    const PowerDelayProfile pdp({0, 5, 17, 40}, {0.4, 0.3, 0.2, 0.1});
    const auto taps = generate_channel(pdp, 1, 1, rng).taps(0, 0);
    const int n = 128;
    const auto h = channel_frequency_response(taps, pdp.delays(), n);
    for (int k = 0; k < n; ++k) {
        cplx want = 0;
        for (int l = 0; l < 4; ++l)
            want += taps[l] * std::polar(1.0, -2.0 * std::numbers::pi * k * pdp.delays()[l] / n);
        CHECK(std::abs(h[k] - want) < 1e-12);
    }
    CHECK_THROWS_AS(channel_frequency_response(taps, {0, 5, 17, 200}, n), std::invalid_argument);
}

TEST_CASE("apply_channel is linear and time-invariant") {
    SystemConfig cfg;
    Rng rng(31);
    const auto pdp = PowerDelayProfile::uniform(10);
    const auto ch = generate_channel(pdp, 2, 2, rng);
    const auto a = modulate_slot(random_grid(cfg, 2, rng), cfg);
    const auto b = modulate_slot(random_grid(cfg, 2, rng), cfg);
    const cplx alpha(0.3, -1.2), beta(-2.0, 0.5);

    TimeDomainSignal mix = a;
    for (int t = 0; t < 2; ++t) mix.streams[t] = alpha * a.streams[t] + beta * b.streams[t];
    const auto ya = apply_channel(a, ch);
    const auto yb = apply_channel(b, ch);
    const auto ym = apply_channel(mix, ch);
    for (int r = 0; r < 2; ++r) {
        const CVector want = alpha * ya.streams[r] + beta * yb.streams[r];
        CHECK((ym.streams[r] - want).cwiseAbs().maxCoeff() < 1e-12 * want.cwiseAbs().maxCoeff());
    }

    // A delayed input gives a delayed output.
    TimeDomainSignal shifted = a;
    const Eigen::Index n = a.length();
    for (int t = 0; t < 2; ++t) {
        shifted.streams[t].setZero();
        shifted.streams[t].tail(n - 7) = a.streams[t].head(n - 7);
    }
    const auto ys = apply_channel(shifted, ch);
    for (int r = 0; r < 2; ++r)
        CHECK((ys.streams[r].tail(n - 7) - ya.streams[r].head(n - 7)).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(apply_channel(TimeDomainSignal{{a.streams[0]}, a.symbol_len}, ch), std::invalid_argument);
}

TEST_CASE("cyclic prefix diagonalizes short channels") {
    SystemConfig cfg;
    for (int taps : {1, 6, 10, cfg.cp_len + 1}) {
        CAPTURE(taps);
        CHECK(diagonal_residual(cfg, taps, 1000 + taps) < 1e-10);
    }
    // Beyond the CP the model no longer holds.
    CHECK(diagonal_residual(cfg, 40, 77) > 1e-3);
}
