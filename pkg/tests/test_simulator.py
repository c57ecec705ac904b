import math

import numpy as np
import pytest

from ia_ofdm.channel import Uniform, draw_channel_set
from ia_ofdm.ia_core import build_precoders
from ia_ofdm.simulator import FIGURE_PRESETS, SimConfig, normalize_precoders, run_sweep, run_trial

INF = math.inf


def cfg(**kw):
    base = dict(trials=20, snr_db_grid=(0.0, 40.0, 100.0, INF))
    base.update(kw)
    return SimConfig(**base)


def test_noise_off_full_decode():
    r = run_trial(cfg(snr_db_grid=(INF,)), 0)
    assert r.outage_groups == 0 and r.groups == 85
    assert r.decoded[0] == 340


def test_baseline_noise_off():
    r = run_trial(cfg(scheme="single_user", snr_db_grid=(INF,)), 3)
    assert r.decoded[0] == 255


def test_low_snr_below_max():
    res = run_sweep(cfg(snr_db_grid=(0.0,)))
    assert np.all(res.counts[:, 0] < 340)


def test_bounds_and_leftover():
    c = cfg(n=5, dist=Uniform(0.0, 1.0))
    res = run_sweep(c)
    assert c.max_packets == 23 * 16 + 2
    assert np.all(res.counts >= 0) and np.all(res.counts <= c.max_packets)


def test_deterministic_and_worker_independent():
    c = cfg(trials=6, M=2)
    a = run_sweep(c)
    b = run_sweep(c)
    p = run_sweep(c, workers=2)
    assert np.array_equal(a.counts, b.counts)
    assert np.array_equal(a.counts, p.counts)
    assert a.outage_frac == p.outage_frac


def test_trial_seed_rule():
    c = cfg(trials=3, seed=10)
    res = run_sweep(c)
    assert np.array_equal(res.counts[2], run_trial(c, 12).decoded)


def test_monotone_in_snr():
    c = cfg(trials=40, snr_db_grid=tuple(range(0, 101, 10)))
    for kw in (dict(), dict(M=2), dict(scheme="single_user")):
        m = run_sweep(SimConfig(**{**c.to_dict(), **kw})).mean
        assert np.all(np.diff(m) >= -0.5)


def test_high_snr_ceiling_siso():
    res = run_sweep(cfg(trials=50, snr_db_grid=(100.0,)))
    ceiling = (1 - res.outage_frac) * 340
    assert abs(res.mean[0] - ceiling) <= 0.01 * ceiling


def test_ia_beats_baseline_at_high_snr():
    grid = tuple(range(60, 101, 5))
    ia = run_sweep(cfg(trials=30, snr_db_grid=grid)).mean
    su = run_sweep(cfg(trials=30, snr_db_grid=grid, scheme="single_user")).mean
    assert np.all(ia >= su)


def test_power_check_modes():
    raw = run_sweep(cfg(M=2, power_check="raw", snr_db_grid=(INF,)))
    tx = run_sweep(cfg(M=2, snr_db_grid=(INF,)))
    assert raw.outage_frac > 0.3 > tx.outage_frac
    assert raw.mean[0] < tx.mean[0]


def test_fallback_adds_baseline_traffic():
    base = cfg(M=2, power_check="raw", snr_db_grid=(INF,))
    off = run_sweep(base)
    on = run_sweep(SimConfig(**{**base.to_dict(), "fallback": True}))
    assert on.mean[0] > off.mean[0]
    assert np.all(on.counts <= base.max_packets)


@pytest.mark.parametrize("policy", ["unit-column", "unit-total-power", "none"])
def test_normalization_policies_decode(policy):
    r = run_trial(cfg(normalization=policy, snr_db_grid=(INF,)), 1)
    assert r.decoded[0] == 340


def test_normalize_precoders():
    cs = draw_channel_set(3, 3, 2, Uniform(0.9, 1.0), 0)
    ps = build_precoders(cs, 1)
    uc = normalize_precoders(ps, "unit-column")
    for V in uc.V:
        assert np.allclose(np.linalg.norm(V, axis=0), 1.0, atol=1e-12)
    tp = normalize_precoders(ps, "unit-total-power")
    for V in tp.V:
        assert (V**2).sum() == pytest.approx(V.shape[1], abs=1e-12)
    assert uc.normalization == "unit-column"
    with pytest.raises(ValueError):
        normalize_precoders(ps, "peak")


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(K=4)
    with pytest.raises(ValueError):
        SimConfig(snr_db_grid=())
    with pytest.raises(ValueError):
        SimConfig(trials=0)
    with pytest.raises(ValueError):
        SimConfig(scheme="cdma")
    with pytest.raises(ValueError):
        SimConfig(N=4, n=2)
    with pytest.raises(ValueError):
        SimConfig.from_dict({"bogus": 1})


def test_config_round_trip_and_aliases():
    c = SimConfig(M=2, dist={"kind": "uniform", "lo": 0.0, "hi": 1.0}, scheme="SingleUserOFDM")
    assert c.scheme == "single_user" and c.dist == Uniform(0.0, 1.0)
    assert SimConfig.from_dict(c.to_dict()) == c


def test_rows_columns():
    res = run_sweep(cfg(trials=2))
    rows = res.rows()
    assert len(rows) == 4
    assert set(rows[0]) == {"snr_db", "scheme", "n", "M", "mean_dof", "std", "outage_frac"}
    assert "snr_definition" in res.metadata()


def test_presets():
    assert set(FIGURE_PRESETS) == {"fig5", "fig6", "fig7"}
    assert all(c.dist == Uniform(0.9, 1.0) for c in FIGURE_PRESETS["fig6"])
    assert {c.n for c in FIGURE_PRESETS["fig7"] if c.scheme == "ia"} == {5}
