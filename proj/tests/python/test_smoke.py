# Copyright 2026 The ltechest Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import ltechest as lc


def test_dft_matches_numpy():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(300) + 1j * rng.standard_normal(300)
    np.testing.assert_allclose(lc.unitary_dft(x), np.fft.fft(x) / math.sqrt(300), atol=1e-10)
    np.testing.assert_allclose(lc.unitary_idft(lc.unitary_dft(x)), x, atol=1e-12)


def test_frequency_response_sparse_delays():
    taps = np.array([1.0, 0.5j, -0.25])
    delays = [0, 3, 9]
    h = lc.channel_frequency_response(taps, delays, 64)
    k = np.arange(64)
    want = sum(g * np.exp(-2j * np.pi * k * d / 64) for g, d in zip(taps, delays))
    np.testing.assert_allclose(h, want, atol=1e-12)


def test_pilot_comb():
    cfg = lc.SystemConfig()
    p0 = lc.pilot_subcarriers(cfg, 0)
    p1 = lc.pilot_subcarriers(cfg, 1)
    assert len(p0) == len(p1) == 100
    assert p0[:4] == [0, 6, 12, 18]
    assert 3 in p0 and 0 in p1
    with pytest.raises(IndexError):
        lc.pilot_subcarriers(cfg, 2)


def test_ls_and_lmmse_forms_agree():
    rng = np.random.default_rng(1)
    cfg = lc.SystemConfig()
    pilots = lc.pilot_subcarriers(cfg, 0)
    r_hh_p, r_hp_hp = lc.correlation_model(lc.PowerDelayProfile.uniform(6), pilots, 512, 300)
    assert r_hh_p.shape == (300, 100)
    np.testing.assert_allclose(np.diag(r_hp_hp), 1.0)

    x = np.exp(2j * np.pi * rng.random(100))
    y = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    h_ls = lc.ls_estimate(y, x)
    np.testing.assert_allclose(h_ls, y / x)
    full = lc.lmmse_estimate_full(h_ls, r_hh_p, r_hp_hp, x, 0.1)
    simp = lc.lmmse_estimate_simplified(h_ls, r_hh_p, r_hp_hp, 10.0, 1.0)
    np.testing.assert_allclose(full, simp, atol=1e-12)

    interp = lc.interpolate_ls(np.array([2.0, 4.0]), [1, 3], 5)
    np.testing.assert_allclose(interp, [2, 2, 3, 4, 4])


def test_constants_and_crossover():
    assert lc.beta_for_constellation("qpsk") == 1.0
    assert lc.beta_for_constellation("qam16") == 17 / 9
    with pytest.raises(ValueError):
        lc.beta_for_constellation("qam64")
    assert lc.crossover_threshold([0, 10, 20], [1.0, 0.7, 0.1], [0.5, 0.5, 0.3]) == pytest.approx(15.0)
    assert lc.crossover_threshold([0, 10], [0.1, 0.1], [1, 1]) == -math.inf


def test_qpsk_and_zf():
    bits = [0, 0, 0, 1, 1, 0, 1, 1]
    s = lc.qpsk_map(bits)
    assert list(lc.qpsk_demap(s)) == bits
    h = np.array([[1.0, 0.5j], [0.2, -1.0]])
    x, erased = lc.zf_detect(h @ s[:2], h)
    assert not erased
    np.testing.assert_allclose(x, s[:2], atol=1e-12)
    _, erased = lc.zf_detect(np.ones(2), np.array([[1, 2], [2, 4]], dtype=complex))
    assert erased


def test_small_sweep_is_deterministic():
    kw = dict(channel_lengths=[6, 40], snr_db=[0, 30], frames=2, estimators=["ls", "lmmse", "hybrid"])
    rows, thresholds, csv = lc.run_sweep(**kw)
    assert len(rows) == 2 * 2 * 3
    assert set(thresholds) == {40}
    assert csv.startswith("snr_db,channel_len,estimator,")
    assert rows[0]["estimator"] == "ls" and rows[0]["branch_fraction_ls"] is None
    assert all(r["n_trials"] == 2 and r["seed"] == 42 for r in rows)
    assert lc.run_sweep(**kw)[2] == csv
    with pytest.raises(ValueError):
        lc.run_sweep(estimators=["nope"], frames=1)
