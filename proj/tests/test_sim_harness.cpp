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
#include <sstream>

#include "doctest.h"
#include "ltechest/sim_harness.hpp"

using namespace ltechest;

namespace {

SweepConfig tiny_sweep() {
    SweepConfig c;
    c.channel_lengths = {6, 20};
    c.snr_grid_db = {0, 15, 30};
    c.n_frames = 4;
    c.workers = 1;
    return c;
}

std::string csv_of(const std::vector<SweepRecord>& r) {
    std::ostringstream os;
    emit_csv(r, os);
    return os.str();
}

}  // namespace

TEST_CASE("compute_mse") {
    CVector h(4), e(4);
    h << 1, cplx(0, 1), 2, 0;
    e << 1, 0, 2, 1;
    // errors 0,1,0,1 over power 1,1,4,0
    CHECK(compute_mse(e, h) == doctest::Approx(2.0 / 6.0));
    CHECK(compute_mse(e, h, {1, 2}) == doctest::Approx(1.0 / 5.0));
    CHECK(compute_mse(h, h) == 0.0);
    CHECK_THROWS_AS(compute_mse(e, h, {}), std::invalid_argument);
    CHECK_THROWS_AS(compute_mse(e, h, {3}), std::invalid_argument);
    CHECK_THROWS_AS(compute_mse(e.head(3), h), std::invalid_argument);
}

TEST_CASE("compute_ber") {
    CHECK(compute_ber({0, 1, 1, 0}, {0, 1, 0, 1}) == 0.5);
    CHECK(compute_ber({1, 1}, {1, 1}) == 0.0);
    CHECK_THROWS_AS(compute_ber({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(compute_ber({1}, {1, 0}), std::invalid_argument);
}

TEST_CASE("csv output") {
    CHECK(csv_of({}) ==
          "snr_db,channel_len,estimator,mse_all_subcarriers,mse_pilot_subcarriers,ber,n_trials,"
          "branch_fraction_ls,seed\n");

    SweepRecord r;
    r.snr_db = 12.5;
    r.channel_len = 40;
    r.estimator = EstimatorChoice::Hybrid;
    r.mse_all_subcarriers = 0.125;
    r.mse_pilot_subcarriers = 1.0 / 3.0;
    r.ber = 0.0;
    r.n_trials = 100;
    r.branch_fraction_ls = 1.0;
    r.seed = 42;
    const auto text = csv_of({r});
    CHECK(text.substr(text.find('\n') + 1) == "12.5,40,hybrid,0.125,0.333333333333,0,100,1,42\n");

    r.estimator = EstimatorChoice::LS;
    r.branch_fraction_ls.reset();
    const auto ls = csv_of({r});
    CHECK(ls.substr(ls.find('\n') + 1) == "12.5,40,ls,0.125,0.333333333333,0,100,,42\n");
    CHECK(csv_of({r}) == ls);

    CHECK_THROWS_AS(emit_csv({r}, std::string("/nonexistent-dir/x.csv")), std::runtime_error);
}

TEST_CASE("perfect csi without noise decodes every bit") {
    const SystemConfig cfg;
    Rng rng(1);
    for (int len : {1, 6, 10, 17}) {
        TrialSpec spec{PowerDelayProfile::uniform(len), std::numeric_limits<double>::infinity(),
                       EstimatorChoice::PerfectCSI};
        const auto r = run_trial(cfg, spec, rng);
        CAPTURE(len);
        CHECK(r.bit_errors == 0);
        CHECK(r.bit_count == 2u * 2 * 1900);
        CHECK(r.mse_all() == 0.0);
        CHECK(r.erasures == 0);
    }
}

TEST_CASE("trials are reproducible") {
    const SystemConfig cfg;
    TrialSpec spec{PowerDelayProfile::uniform(10), 5.0, EstimatorChoice::LMMSE};
    const auto s = trial_seeds(42, 10, 5.0, 3);
    const auto a = run_trial(cfg, spec, s);
    const auto b = run_trial(cfg, spec, s);
    CHECK(a.err_all == b.err_all);
    CHECK(a.bit_errors == b.bit_errors);
    const auto c = run_trial(cfg, spec, trial_seeds(42, 10, 5.0, 4));
    CHECK(a.err_all != c.err_all);

    // Realizations are shared across SNR, noise is not.
    const auto s2 = trial_seeds(42, 10, 10.0, 3);
    CHECK(s.realization == s2.realization);
    CHECK(s.noise != s2.noise);
    CHECK(trial_seeds(42, 20, 5.0, 3).realization != s.realization);
}

TEST_CASE("ls pilot error matches the noise level") {
    const SystemConfig cfg;
    TrialSpec spec{PowerDelayProfile::uniform(6), 10.0, EstimatorChoice::LS};
    TrialResult total;
    for (std::uint64_t i = 0; i < 30; ++i) {
        const auto r = run_trial(cfg, spec, trial_seeds(9, 6, 10.0, i));
        total.err_pilot += r.err_pilot;
        total.power_pilot += r.power_pilot;
    }
    CHECK(std::abs(total.mse_pilot() - 0.1) < 0.01);
}

TEST_CASE("hybrid follows its threshold") {
    const SystemConfig cfg;
    const auto s = trial_seeds(1, 40, 20.0, 0);
    TrialSpec spec{PowerDelayProfile::uniform(40), 20.0, EstimatorChoice::Hybrid, 10.0};
    auto r = run_trial(cfg, spec, s);
    REQUIRE(r.chose_ls);
    CHECK(*r.chose_ls);
    spec.estimator = EstimatorChoice::LS;
    CHECK(run_trial(cfg, spec, s).err_all == r.err_all);

    spec.estimator = EstimatorChoice::Hybrid;
    spec.hybrid_threshold_db = 25.0;
    r = run_trial(cfg, spec, s);
    CHECK_FALSE(*r.chose_ls);
    spec.estimator = EstimatorChoice::LMMSE;
    CHECK(run_trial(cfg, spec, s).err_all == r.err_all);

    spec = TrialSpec{PowerDelayProfile::uniform(6), 30.0, EstimatorChoice::Hybrid, -100.0};
    CHECK_FALSE(*run_trial(cfg, spec, trial_seeds(1, 6, 30.0, 0)).chose_ls);
}

TEST_CASE("sweep layout and worker independence") {
    auto cfg = tiny_sweep();
    std::map<int, double> thr;
    const auto one = run_sweep(cfg, &thr);
    CHECK(one.size() == 2 * 3 * 4);
    CHECK(thr.size() == 1);
    CHECK(thr.count(20) == 1);
    CHECK(one[0].channel_len == 6);
    CHECK(one[0].estimator == EstimatorChoice::LS);
    CHECK(one[3].estimator == EstimatorChoice::PerfectCSI);
    CHECK(one[4].snr_db == 15.0);
    CHECK(one.back().channel_len == 20);
    for (const auto& r : one) {
        CHECK(r.n_trials == 4);
        CHECK(r.seed == 42);
        CHECK(r.branch_fraction_ls.has_value() == (r.estimator == EstimatorChoice::Hybrid));
    }

    cfg.workers = 3;
    CHECK(csv_of(run_sweep(cfg)) == csv_of(one));

    cfg.threshold_override_db = 12.0;
    thr.clear();
    const auto fixed = run_sweep(cfg, &thr);
    CHECK(thr.at(20) == 12.0);
    for (const auto& r : fixed) {
        if (r.estimator != EstimatorChoice::Hybrid) continue;
        const double want = r.channel_len > 16 && r.snr_db >= 12.0 ? 1.0 : 0.0;
        CHECK(*r.branch_fraction_ls == want);
    }
}

TEST_CASE("calibration preconditions") {
    const SystemConfig cfg;
    CHECK_THROWS_AS(calibrate_threshold(cfg, PowerDelayProfile::uniform(16), {0, 10}, 2, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(calibrate_threshold(cfg, PowerDelayProfile::uniform(40), {}, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(calibrate_threshold(cfg, PowerDelayProfile::uniform(40), {0}, 0, 1), std::invalid_argument);
}

TEST_CASE("config parsing") {
    std::istringstream in(R"(# sweep
bandwidth = 10
cp_len=16
channel_lengths = 6, 40
snr_grid_db=0:20:10
n_frames=7   # trials
seed=5
estimators=ls,hybrid
threshold_override_db=3.5
lmmse_model=matched
)");
    const auto c = parse_sweep_config(in, "t.cfg");
    CHECK(c.system.n_fft == 1024);
    CHECK(c.system.n_used == 600);
    CHECK(c.channel_lengths == std::vector<int>{6, 40});
    CHECK(c.snr_grid_db == std::vector<double>{0, 10, 20});
    CHECK(c.n_frames == 7);
    CHECK(c.seed == 5);
    CHECK(c.estimators == std::vector<EstimatorChoice>{EstimatorChoice::LS, EstimatorChoice::Hybrid});
    CHECK(*c.threshold_override_db == 3.5);
    CHECK(c.lmmse_model == LmmseModel::Matched);

    std::istringstream bad("n_frames=3\nfoo=1\n");
    CHECK_THROWS_WITH_AS(parse_sweep_config(bad, "b.cfg"), "b.cfg:2: unknown key 'foo'", std::invalid_argument);
    std::istringstream junk("seed=abc\n");
    CHECK_THROWS_AS(parse_sweep_config(junk), std::invalid_argument);
    std::istringstream nokv("just words\n");
    CHECK_THROWS_AS(parse_sweep_config(nokv), std::invalid_argument);
}

TEST_CASE("grid and list parsing") {
    CHECK(parse_snr_grid("0:30:5").size() == 7);
    CHECK(parse_snr_grid("0:1:0.25").back() == 1.0);
    CHECK(parse_snr_grid("3, -2,7") == std::vector<double>{3, -2, 7});
    CHECK_THROWS_AS(parse_snr_grid("0:10"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("0:10:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("10:0:5"), std::invalid_argument);
    CHECK(parse_int_list("6,10,20,40") == std::vector<int>{6, 10, 20, 40});
    CHECK_THROWS_AS(parse_int_list("6,x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_estimator_list("ls,mmse"), std::invalid_argument);

    SweepConfig c;
    c.snr_grid_db = {10, 0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SweepConfig{};
    c.n_frames = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
