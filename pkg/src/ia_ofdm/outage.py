"""
Outage probability of the precoder power-ratio constraint.

Within a group the diagonal entries ``t_1 .. t_s`` of the alignment
operator are modelled as ``s = (2n+1)M`` i.i.d. draws.  The group is in
outage when the spread ``t_(s) / t_(1)`` exceeds

    gamma_max = 10 ** (a / (2 (n+1) M - 2)),

the largest spread for which the highest Krylov power
``T^((n+1)M-1)`` keeps the power ratio below ``10**a``.

Three evaluation routes are provided: the closed form for Uniform(0, 1),
adaptive 2-D quadrature over the joint density of (min, max) for any
supported distribution, and a Monte Carlo estimate used as an oracle.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .channel import FadingDistribution, Rayleigh, Uniform, distribution_from_dict
from .errors import QuadratureError

__all__ = [
    "OutageQuery",
    "OutageResult",
    "gamma_max",
    "outage_uniform",
    "minmax_joint_pdf",
    "outage_quadrature",
    "outage_rayleigh",
    "outage_mc",
    "outage_curve",
]


@dataclass(frozen=True)
class OutageQuery:
    n: int
    M: int
    a: float
    dist: FadingDistribution = field(default_factory=Uniform)

    def __post_init__(self):
        if self.n < 1 or self.M < 1:
            raise ValueError(f"need n >= 1 and M >= 1, got n={self.n}, M={self.M}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        object.__setattr__(self, "dist", distribution_from_dict(self.dist))

    @property
    def sample_count(self) -> int:
        return (2 * self.n + 1) * self.M

    @property
    def gamma(self) -> float:
        return gamma_max(self.n, self.M, self.a)


@dataclass(frozen=True)
class OutageResult:
    p_outage: float
    method: str
    stderr: float = 0.0

    def to_dict(self) -> dict:
        return {"p": self.p_outage, "method": self.method, "stderr": self.stderr}


def gamma_max(n: int, M: int, a: float) -> float:
    """Largest admissible ``t_max / t_min``; ``10**(a/2n)`` when ``M = 1``."""
    return 10.0 ** (a / (2 * (n + 1) * M - 2))


def outage_uniform(n: int, M: int, a: float) -> OutageResult:
    """
    Closed form for ``t ~ Uniform(0, 1)``:
    ``1 - (1 - 1/gamma_max) ** ((2n+1)M - 1)``.

    >>> round(outage_uniform(1, 1, 3).p_outage, 4)
    0.0622
    """
    q = OutageQuery(n, M, a)
    p = -np.expm1((q.sample_count - 1) * np.log1p(-1.0 / q.gamma))
    return OutageResult(float(p), "closed_form")


def minmax_joint_pdf(dist: FadingDistribution, s: int):
    """
    Joint density of the minimum and maximum of ``s`` i.i.d. samples,

        f(x, y) = s (s-1) f(x) f(y) [F(y) - F(x)]^(s-2),   x < y,

    and zero elsewhere.  The returned callable broadcasts over arrays.
    """
    if s < 2:
        raise ValueError(f"need at least 2 samples, got {s}")
    dist = distribution_from_dict(dist)

    def f(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        gap = np.clip(dist.cdf(y) - dist.cdf(x), 0.0, 1.0)
        val = s * (s - 1) * dist.pdf(x) * dist.pdf(y) * gap ** (s - 2)
        val = np.where(x < y, val, 0.0)
        return val if val.ndim else float(val)

    return f


def _upper_limit(dist, s, tol):
    lo, hi = dist.support
    if np.isfinite(hi):
        return hi
    # P(max > Y) <= s * (1 - F(Y)); cut where that is below tol / 10
    sigma = dist.sigma
    return sigma * np.sqrt(2.0 * np.log(10.0 * s / tol))


def outage_quadrature(query: OutageQuery, quad_tol: float = 1e-6) -> OutageResult:
    """
    ``P{t_(1) <= t_(s) / gamma}`` as ``1 - integral`` of the joint
    (min, max) density over ``{y/gamma < x < y}``, computed with nested
    adaptive Gauss-Kronrod quadrature (outer ``y``, inner ``x``).

    Raises
    ------
    QuadratureError
        When the reported error estimate exceeds `quad_tol`.
    """
    s, g = query.sample_count, query.gamma
    f = minmax_joint_pdf(query.dist, s)
    lo = query.dist.support[0]
    y_hi = _upper_limit(query.dist, s, quad_tol)
    eps = quad_tol / 10
    mass, err = integrate.dblquad(
        lambda x, y: f(x, y),
        lo,
        y_hi,
        lambda y: max(y / g, lo),
        lambda y: y,
        epsabs=eps,
        epsrel=eps,
    )
    if not np.isfinite(mass) or err > quad_tol:
        raise QuadratureError(
            f"quadrature error estimate {err:.3g} exceeds {quad_tol:.3g} "
            f"(s={s}, gamma={g:.6g}, dist={query.dist})"
        )
    p = float(np.clip(1.0 - mass, 0.0, 1.0))
    return OutageResult(p, "quadrature")


def outage_rayleigh(n: int, M: int, a: float, sigma: float = 1.0, quad_tol: float = 1e-6) -> OutageResult:
    """Outage probability with ``t`` approximated as Rayleigh(`sigma`)."""
    return outage_quadrature(OutageQuery(n, M, a, Rayleigh(sigma)), quad_tol)


def _six_gain_ratio(dist, rng, size):
    h = dist.ppf(rng.random((6,) + size))
    h = np.where(h > 0, h, np.finfo(float).tiny)
    return h[0] * h[1] * h[2] / (h[3] * h[4] * h[5])


def outage_mc(query: OutageQuery, trials: int = 1_000_000, seed: int = 0,
              empirical: bool = False, chunk: int = 200_000) -> OutageResult:
    """
    Monte Carlo estimate of the outage probability.

    Each trial draws ``s`` samples and counts an outage when
    ``max / min > gamma_max``.  With ``empirical=True`` every sample is
    the actual six-gain ratio ``h21 h32 h13 / (h12 h23 h31)`` rather than a
    direct draw from `dist`, which measures the cost of approximating
    ``t`` by `dist` itself.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    s, g = query.sample_count, query.gamma
    hits = 0
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        if empirical:
            t = _six_gain_ratio(query.dist, rng, (m, s))
        else:
            t = query.dist.ppf(rng.random((m, s)))
        with np.errstate(divide="ignore"):
            hits += int(np.count_nonzero(t.max(axis=1) > g * t.min(axis=1)))
        done += m
    p = hits / trials
    return OutageResult(p, "monte_carlo", float(np.sqrt(p * (1 - p) / trials)))


def outage_curve(dist, sweep: str = "n", values=range(1, 11), n: int = 1, M: int = 1,
                 a: float = 3.0, quad_tol: float = 1e-6):
    """
    Outage probability as `n` or `M` varies; one dict per point.

    Uniform(0, 1) uses the closed form, anything else quadrature.
    """
    dist = distribution_from_dict(dist)
    if sweep not in ("n", "M", "m"):
        raise ValueError(f"sweep must be 'n' or 'M', got {sweep!r}")
    rows = []
    for v in values:
        nn, MM = (int(v), M) if sweep == "n" else (n, int(v))
        if isinstance(dist, Uniform) and (dist.lo, dist.hi) == (0.0, 1.0):
            res = outage_uniform(nn, MM, a)
        else:
            res = outage_quadrature(OutageQuery(nn, MM, a, dist), quad_tol)
        rows.append({"dist": dist.to_dict()["kind"], "n": nn, "M": MM, "a": a, "p": res.p_outage,
                     "method": res.method})
    return rows

