from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ia_ofdm.dof_planner import DofRow, enumerate_feasible, format_table, practical_dof, table_one


def test_row_counts():
    r = DofRow(5, 1)
    assert (r.q, r.subcarriers, r.packets) == (11, 2049, 2052)
    r = DofRow(4, 4)
    assert (r.subcarriers, r.packets, round(r.dof, 2)) == (4149, 6197, 1.49)
    assert DofRow(6, 1).subcarriers == 524_289
    assert DofRow(3, 2).dof_exact == Fraction(7, 5)


def test_big_integers_exact():
    r = DofRow(7, 50)
    q = 29
    assert r.subcarriers == 51**q + 50**q
    assert r.packets == 51**q + 6 * 50**q


def test_row_validation():
    with pytest.raises(ValueError):
        DofRow(2, 1)
    with pytest.raises(ValueError):
        DofRow(3, 0)


@given(K=st.integers(3, 8), n=st.integers(1, 200))
def test_dof_bounds(K, n):
    r = DofRow(K, n)
    assert 1 < r.dof_exact < Fraction(K, 2)


@given(n=st.integers(1, 10**6))
def test_three_user_dof(n):
    assert DofRow(3, n).dof_exact == Fraction(3 * n + 1, 2 * n + 1)


def test_monotone_in_n_and_K():
    for K in (3, 4, 5):
        d = [DofRow(K, n).dof_exact for n in range(1, 8)]
        assert all(a < b for a, b in zip(d, d[1:]))
    for n in (1, 2, 3):
        p = [DofRow(K, n).packets for K in range(3, 7)]
        assert all(a < b for a, b in zip(p, p[1:]))


def test_enumerate_2001():
    plan = enumerate_feasible(2001)
    b = plan.best
    assert (b.K, b.n, b.subcarriers, b.packets) == (3, 1000, 2001, 3001)
    assert f"{b.dof:.4f}" == "1.4998"


def test_enumerate_stops_at_infeasible_K():
    plan = enumerate_feasible(2049)
    Ks = {r.K for r in plan.rows}
    assert Ks == {3, 4, 5}
    assert all(r.subcarriers <= 2049 for r in plan.rows)
    assert [r.n for r in plan.rows if r.K == 5] == [1]


def test_enumerate_tiny_budget():
    plan = enumerate_feasible(3)
    assert [(r.K, r.n) for r in plan.rows] == [(3, 1)]
    with pytest.raises(ValueError):
        enumerate_feasible(2)


def test_tie_break_prefers_smaller_K():
    # build a tie by hand through the ranking rule
    plan = enumerate_feasible(40)
    best = plan.best
    assert best.K == 3 and best.n == 19


def test_table_one_rows():
    entries = table_one()
    assert len(entries) == 12
    assert [r.K for r, _ in entries] == [5, 5, 4, 4, 4, 4, 3, 3, 3, 3, 3, 3]
    assert len(table_one(4149)) == 11


def test_format_table_csv():
    text = format_table(table_one(33), fmt="csv")
    lines = text.strip().splitlines()
    assert lines[0] == "K,q,n,subcarriers,packets,dof"
    assert "4,5,1,33,35,1.06" in lines


@pytest.mark.parametrize("nmax", [3, 4148, 10**6])
def test_practical_dof_default(nmax):
    r = practical_dof(nmax, a=3)
    assert (r.K, r.n) == (3, 1)
    assert r.dof_exact == Fraction(4, 3)


def test_practical_dof_grows_with_a():
    ns = [practical_dof(10**6, a=a).n for a in (3, 10, 30)]
    assert ns[0] < ns[1] < ns[2]
    assert practical_dof(11, a=30).n == 5  # budget caps n
