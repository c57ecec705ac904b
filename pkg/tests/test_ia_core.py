import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ia_ofdm.channel import ChannelSet, Uniform, draw_channel_set
from ia_ofdm.errors import DecodeInfeasibleError, InfeasiblePlanError, NumericalError, SingularChannelError
from ia_ofdm.ia_core import (
    PacketBlock,
    batch_decoders,
    batch_power_ratio,
    batch_precoders,
    build_decoders,
    build_precoders,
    build_T,
    decode,
    encode,
    generic_channel_ia_demo,
    plan_groups,
    power_ratio_check,
    random_packets,
    receive,
    subcarrier_power,
    verify_alignment,
)
from ia_ofdm.simulator import normalize_precoders


def group(n, M, seed, dist=Uniform(0.9, 1.0)):
    return draw_channel_set(3, 2 * n + 1, M, dist, seed)


# -- group planning ------------------------------------------------------
def test_plan_groups_leftover():
    p = plan_groups(255, 1)
    assert (p.group_size, p.num_groups, p.leftover) == (3, 85, 0)
    assert p.max_packets == 340
    p = plan_groups(255, 1, M=2)
    assert p.max_packets == 85 * 8
    p = plan_groups(255, 2)
    assert (p.num_groups, p.leftover, p.max_packets) == (51, 0, 357)
    p = plan_groups(255, 5)
    assert (p.num_groups, p.leftover) == (23, 2)
    assert p.max_packets == 23 * 16 + 2


def test_plan_groups_too_small():
    with pytest.raises(InfeasiblePlanError):
        plan_groups(4, 2)


# -- operator T ----------------------------------------------------------
def test_T_siso_formula():
    cs = group(1, 1, 3)
    h = lambda i, j: cs.link(i, j)[:, 0, 0]
    expected = h(2, 1) * h(3, 2) * h(1, 3) / (h(1, 2) * h(2, 3) * h(3, 1))
    assert np.allclose(build_T(cs)[:, 0, 0], expected, rtol=1e-14)


def test_T_mimo_block_order():
    cs = group(1, 2, 4)
    inv = np.linalg.inv
    L = cs.link
    expected = inv(L(1, 2)) @ L(3, 2) @ inv(L(3, 1)) @ L(2, 1) @ inv(L(2, 3)) @ L(1, 3)
    assert np.allclose(build_T(cs), expected, rtol=1e-12)


def test_singular_cross_link_raises():
    g = group(1, 2, 0).gains.copy()
    g[0, 1, 1] = [[1.0, 2.0], [2.0, 4.0]]
    with pytest.raises(SingularChannelError):
        build_T(ChannelSet(g))


# -- precoders -----------------------------------------------------------
@pytest.mark.parametrize("n,M", [(1, 1), (2, 1), (3, 1), (1, 2), (1, 3), (2, 2)])
def test_dimension_ledger(n, M):
    ps = build_precoders(group(n, M, 1), n)
    rows = (2 * n + 1) * M
    assert ps.V1.shape == (rows, (n + 1) * M)
    assert ps.V2.shape == ps.V3.shape == (rows, n * M)
    assert ps.V1.shape[1] + ps.V2.shape[1] == rows


def test_V1_is_krylov_sequence():
    cs = group(2, 1, 5)
    ps = build_precoders(cs, 2)
    t = build_T(cs)[:, 0, 0]
    assert np.allclose(ps.V1, np.vander(t, 3, increasing=True))
    assert np.array_equal(ps.w, np.ones(5))


@pytest.mark.parametrize("n,M", [(1, 1), (2, 1), (3, 1), (1, 2), (1, 3), (2, 2)])
@pytest.mark.parametrize("dist", [Uniform(0.9, 1.0), Uniform(0.0, 1.0)])
def test_alignment_identities(n, M, dist):
    for seed in range(20):
        cs = group(n, M, seed, dist)
        rep = verify_alignment(cs, build_precoders(cs, n))
        assert rep.max_residual <= 1e-9


def test_alignment_survives_normalization():
    cs = group(1, 2, 7)
    for policy in ("unit-column", "unit-total-power"):
        ps = normalize_precoders(build_precoders(cs, 1), policy)
        assert verify_alignment(cs, ps).max_span_residual <= 1e-9


def test_perturbed_precoder_breaks_alignment():
    cs = group(1, 2, 42)
    ps = build_precoders(cs, 1)
    V2 = ps.V2.copy()
    V2[0, 0] += 1e-3
    bad = type(ps)(ps.V1, V2, ps.V3, ps.T, ps.n, ps.M)
    assert verify_alignment(cs, bad).residuals[0] > 1e-6


def test_mimo_does_not_commute():
    # swapping operand order in T would break alignment for M > 1
    cs = group(1, 2, 3)
    L, inv = cs.link, np.linalg.inv
    wrong = L(1, 3) @ inv(L(2, 3)) @ L(2, 1) @ inv(L(3, 1)) @ L(3, 2) @ inv(L(1, 2))
    assert not np.allclose(wrong, build_T(cs))


# -- decoders ------------------------------------------------------------
def test_decoder_shapes():
    ds = build_decoders(group(1, 1, 0), build_precoders(group(1, 1, 0), 1))
    assert all(D.shape == (3, 3) for D in ds.D)
    cs = group(1, 2, 0)
    ds = build_decoders(cs, build_precoders(cs, 1))
    assert all(D.shape == (6, 6) for D in ds.D)
    assert [len(s) for s in ds.selectors] == [4, 2, 2]


def test_identity_channels_are_decode_infeasible():
    g = np.broadcast_to(np.eye(2), (3, 3, 3, 2, 2))
    cs = ChannelSet(g)
    with pytest.raises(NumericalError):
        build_decoders(cs, build_precoders(cs, 1))
    g1 = np.ones((3, 3, 3, 1, 1))
    cs1 = ChannelSet(g1)
    with pytest.raises(DecodeInfeasibleError):
        build_decoders(cs1, build_precoders(cs1, 1))


def test_n_M_mismatch_rejected():
    cs = group(1, 1, 0)
    with pytest.raises(ValueError):
        build_decoders(cs, build_precoders(cs, 1), n=2)
    with pytest.raises(ValueError):
        build_precoders(cs, 2)


# -- encode / decode -----------------------------------------------------
def test_encode_linearity():
    cs = group(1, 2, 9)
    ps = build_precoders(cs, 1)
    rng = np.random.default_rng(0)
    a = PacketBlock(*(rng.standard_normal(k) for k in (4, 2, 2)), alphabet="real")
    b = PacketBlock(*(rng.standard_normal(k) for k in (4, 2, 2)), alphabet="real")
    s = PacketBlock(*(x + y for x, y in zip(a.packets, b.packets)), alphabet="real")
    for u, v, w in zip(encode(ps, a), encode(ps, b), encode(ps, s)):
        assert np.allclose(u + v, w, atol=1e-12)


def test_encode_unit_vector_gives_column():
    ps = build_precoders(group(1, 1, 2), 1)
    pkt = PacketBlock(np.array([0.0, 1.0]), np.zeros(1), np.zeros(1), alphabet="real")
    s1, s2, _ = encode(ps, pkt)
    assert np.array_equal(s1, ps.V1[:, 1])
    assert not s2.any()


def test_zero_received_gives_zero():
    cs = group(1, 1, 2)
    ds = build_decoders(cs, build_precoders(cs, 1))
    out = decode(ds, [np.zeros(3)] * 3, alphabet="real")
    assert all(not x.any() for x in out.packets)


def test_bpsk_validation():
    with pytest.raises(ValueError):
        PacketBlock(np.array([1.0, 0.5]), np.ones(1), np.ones(1))


@pytest.mark.parametrize("n,M", [(1, 1), (2, 1), (1, 2)])
def test_noiseless_round_trip(n, M):
    for seed in range(30):
        cs = group(n, M, seed)
        ps = normalize_precoders(build_precoders(cs, n), "unit-column")
        ds = build_decoders(cs, ps)
        pkt = random_packets(n, M, seed)
        est = decode(ds, receive(cs, encode(ps, pkt)), alphabet="real")
        for x, y in zip(est.packets, pkt.packets):
            assert np.allclose(x, y, atol=1e-6)


def test_noisy_receive_reproducible():
    cs = group(1, 1, 0)
    ps = build_precoders(cs, 1)
    sig = encode(ps, random_packets(1, 1, 0))
    a = receive(cs, sig, noise_std=0.1, rng=3)
    b = receive(cs, sig, noise_std=0.1, rng=3)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    # the three receivers see independent noise
    clean = receive(cs, sig)
    assert not np.allclose(a[0] - clean[0], a[1] - clean[1])


# -- power ratio ---------------------------------------------------------
def test_power_ratio_all_ones():
    cs = ChannelSet(np.ones((3, 3, 3, 1, 1)) * 0.5)
    ps = build_precoders(cs, 1)
    pc = power_ratio_check(ps, 3)
    assert pc.ok and pc.ratio == pytest.approx(1.0)


def test_power_ratio_siso_threshold():
    # SISO n = 1: per-subcarrier power is roughly t^2 times the w-column floor
    g = np.ones((3, 3, 3, 1, 1))
    g[1, 0, 0] = 100.0  # t on subcarrier 0 is 100
    ps = build_precoders(ChannelSet(g), 1)
    assert not power_ratio_check(ps, 3).ok
    assert power_ratio_check(ps, 8).ok
    assert power_ratio_check(ps, 1e6).ok


def test_power_ratio_rejects_nonpositive_a():
    with pytest.raises(ValueError):
        power_ratio_check(build_precoders(group(1, 1, 0), 1), 0.0)


def test_subcarrier_power_forms():
    ps = build_precoders(group(1, 2, 1), 1)
    agg = subcarrier_power(ps)
    per = subcarrier_power(ps, per_user=True)
    assert agg.shape == (3,) and per.shape == (3, 3)
    assert np.allclose(per.sum(axis=0), agg)


# -- batched vs per-group ------------------------------------------------
@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 3), M=st.integers(1, 2), seed=st.integers(0, 10**6))
def test_batch_matches_single(n, M, seed):
    s = 2 * n + 1
    cs = draw_channel_set(3, 4 * s, M, Uniform(0.9, 1.0), seed)
    Hg = cs.gains.reshape(3, 3, 4, s, M, M)
    V1, V2, V3, T, ok = batch_precoders(Hg, n)
    D, cond = batch_decoders(Hg, V1, V2, V3, n)
    ratios = batch_power_ratio((V1, V2, V3), s, M)
    for g in range(4):
        sub = ChannelSet(cs.gains[:, :, g * s : (g + 1) * s])
        ps = build_precoders(sub, n)
        assert np.allclose(ps.V1, V1[g]) and np.allclose(ps.V3, V3[g])
        assert power_ratio_check(ps, 3).ratio == pytest.approx(ratios[g])
        ds = batch_decoders(sub.gains, *ps.V, n)[0]
        assert np.allclose(ds[2], D[2][g])


# -- generic two-antenna demo --------------------------------------------
def test_generic_demo_dense():
    demo = generic_channel_ia_demo(seed=1)
    assert demo.packets_recovered == 3
    assert max(demo.residuals) <= 1e-9
    assert demo.v1_nonzero_entries == 2


def test_generic_demo_diagonal():
    demo = generic_channel_ia_demo(seed=1, diagonal=True)
    assert demo.v1_nonzero_entries == 1
    assert demo.packets_recovered < 3
    assert min(demo.projections) == 0.0


def test_generic_demo_explicit_channels():
    rng = np.random.default_rng(0)
    H = {(i, j): rng.random((2, 2)) + 0.1 for i in range(1, 4) for j in range(1, 4)}
    assert generic_channel_ia_demo(channels=H).packets_recovered == 3
