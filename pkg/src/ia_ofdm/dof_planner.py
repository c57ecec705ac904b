"""
Degrees-of-freedom planning under a subcarrier budget.

With ``K`` users and symbol extension parameter ``n`` the alignment scheme
needs ``(n+1)^q + n^q`` subcarriers to carry ``(n+1)^q + (K-1) n^q``
packets, where ``q = (K-1)(K-2) - 1``.  The feasible region for any
realistic budget is tiny, so it is enumerated exactly with Python
integers; no solver is involved.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .outage import outage_uniform

__all__ = [
    "DofRow",
    "DofPlan",
    "TABLE_ONE",
    "enumerate_feasible",
    "table_one",
    "format_table",
    "practical_dof",
]


def _q(K: int) -> int:
    return (K - 1) * (K - 2) - 1


@dataclass(frozen=True, order=False)
class DofRow:
    K: int
    n: int
    q: int = field(init=False)
    subcarriers: int = field(init=False)
    packets: int = field(init=False)

    def __post_init__(self):
        if self.K < 3 or self.n < 1:
            raise ValueError(f"need K >= 3 and n >= 1, got K={self.K}, n={self.n}")
        q = _q(self.K)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "subcarriers", (self.n + 1) ** q + self.n**q)
        object.__setattr__(self, "packets", (self.n + 1) ** q + (self.K - 1) * self.n**q)

    @property
    def dof_exact(self) -> Fraction:
        return Fraction(self.packets, self.subcarriers)

    @property
    def dof(self) -> float:
        return float(self.dof_exact)

    def to_dict(self) -> dict:
        return {"K": self.K, "q": self.q, "n": self.n, "subcarriers": self.subcarriers,
                "packets": self.packets, "dof": self.dof}


@dataclass(frozen=True)
class DofPlan:
    n_max_budget: int
    rows: list
    best: DofRow | None


def _rank(row: DofRow):
    # larger dof first; ties go to the cheaper system
    return (-row.dof_exact, row.K, row.n)


def enumerate_feasible(N_max: int, K_min: int = 3, K_cap: int = 64) -> DofPlan:
    """
    All ``(K, n)`` with ``(n+1)^q + n^q <= N_max``.

    Enumeration over ``K`` stops at the first ``K`` whose ``n = 1`` row
    (``2^q + 1`` subcarriers) is already over budget, or at `K_cap`.

    >>> best = enumerate_feasible(2001).best
    >>> best.K, best.n, best.subcarriers, best.packets
    (3, 1000, 2001, 3001)
    """
    if N_max < 3:
        raise ValueError(f"N_max must be at least 3, got {N_max}")
    rows = []
    for K in range(max(3, K_min), K_cap + 1):
        if 2 ** _q(K) + 1 > N_max:
            break
        n = 1
        while True:
            row = DofRow(K, n)
            if row.subcarriers > N_max:
                break
            rows.append(row)
            n += 1
    best = min(rows, key=_rank) if rows else None
    return DofPlan(N_max, rows, best)


# n values and printed dof digits of each published sub-table
TABLE_ONE = {
    5: ((1, 3), (2, 2)),
    4: ((1, 2), (2, 2), (3, 2), (4, 2)),
    3: ((1, 3), (2, 2), (3, 3), (4, 3), (100, 3), (1000, 4)),
}


def table_one(N_max: int | None = None):
    """
    The efficiency table: K = 5, 4, 3 blocks at their published ``n``.

    Rows needing more than `N_max` subcarriers are dropped (none when
    `N_max` is None).  Each entry is ``(DofRow, digits)``, where `digits`
    is the number of decimals the dof is printed with.
    """
    out = []
    for K, entries in TABLE_ONE.items():
        for n, digits in entries:
            row = DofRow(K, n)
            if N_max is None or row.subcarriers <= N_max:
                out.append((row, digits))
    return out


def format_table(entries, fmt: str = "text") -> str:
    """Render ``table_one`` output as aligned text or CSV."""
    if fmt == "csv":
        lines = ["K,q,n,subcarriers,packets,dof"]
        for row, d in entries:
            lines.append(f"{row.K},{row.q},{row.n},{row.subcarriers},{row.packets},{row.dof:.{d}f}")
        return "\n".join(lines) + "\n"
    lines = []
    current = None
    for row, d in entries:
        if row.K != current:
            current = row.K
            lines.append(f"K={row.K}, q={row.q}")
            lines.append(f"{'n':>6} {'subcarriers':>12} {'packets':>12} {'dof':>8}")
        lines.append(f"{row.n:>6} {row.subcarriers:>12,} {row.packets:>12,} {row.dof:>8.{d}f}")
    return "\n".join(lines) + "\n"


def practical_dof(N_max: int, a: float = 3.0, threshold: float = 0.1) -> DofRow:
    """
    Best three-user row once the power-ratio outage is accounted for.

    An extension ``n`` is admitted when the Uniform(0, 1) outage
    probability at exponent `a` is at most `threshold`; the outage
    probability grows with ``n`` so the largest admitted ``n`` wins.  Only
    ``K = 3`` has an explicit precoder construction, so larger ``K`` rows
    are not considered here.
    """
    if N_max < 3:
        raise ValueError(f"N_max must be at least 3, got {N_max}")
    n_budget = (N_max - 1) // 2
    best = None
    n = 1
    while n <= n_budget and outage_uniform(n, 1, a).p_outage <= threshold:
        best = n
        n += 1
    if best is None:
        # n = 1 is the smallest extension; report it even when over threshold
        best = 1
    return DofRow(3, best)
