"""
Random channel ensembles for K-user (MIMO-)OFDM.

Each link ``tx i -> rx j`` is stored per subcarrier as an ``M x M`` block
(rows = receive antennas, columns = transmit antennas), so the full
``NM x NM`` channel matrix is block diagonal in subcarrier-major order.
For ``M = 1`` every link is a plain diagonal matrix.

All draws go through inverse-CDF transforms of a seeded uniform stream
(``numpy.random.default_rng``), which keeps results bit-identical for
equal ``(parameters, seed)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.linalg import block_diag

__all__ = [
    "Uniform",
    "Rayleigh",
    "FadingDistribution",
    "ChannelSet",
    "draw_channel_set",
    "restrict_to_group",
    "apply_blocks",
    "distribution_from_dict",
]


@dataclass(frozen=True)
class Uniform:
    """Uniform fading gains on ``[lo, hi]``."""

    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError("Uniform bounds must be finite")
        if not 0.0 <= self.lo < self.hi:
            raise ValueError(f"Uniform requires 0 <= lo < hi, got ({self.lo}, {self.hi})")

    def ppf(self, u):
        return self.lo + (self.hi - self.lo) * np.asarray(u, dtype=float)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        return np.where(inside, 1.0 / (self.hi - self.lo), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.clip((x - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    @property
    def support(self):
        return (self.lo, self.hi)

    def to_dict(self):
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class Rayleigh:
    """Rayleigh fading gains with scale ``sigma``."""

    sigma: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"Rayleigh requires sigma > 0, got {self.sigma}")

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        return self.sigma * np.sqrt(-2.0 * np.log1p(-u))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        s2 = self.sigma**2
        return np.where(x >= 0, x / s2 * np.exp(-(x**2) / (2 * s2)), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, -np.expm1(-(x**2) / (2 * self.sigma**2)), 0.0)

    @property
    def support(self):
        return (0.0, np.inf)

    def to_dict(self):
        return {"kind": "rayleigh", "sigma": self.sigma}


FadingDistribution = Union[Uniform, Rayleigh]


def distribution_from_dict(d) -> FadingDistribution:
    """Inverse of ``to_dict``; also accepts the bare strings
    ``"uniform"`` (on ``[0, 1]``) and ``"rayleigh"`` (``sigma = 1``)."""
    if isinstance(d, (Uniform, Rayleigh)):
        return d
    if isinstance(d, str):
        d = {"kind": d}
    kind = str(d.get("kind", "")).lower()
    if kind == "uniform":
        return Uniform(float(d.get("lo", 0.0)), float(d.get("hi", 1.0)))
    if kind == "rayleigh":
        return Rayleigh(float(d.get("sigma", 1.0)))
    raise ValueError(f"unknown fading distribution {d!r}")


def _sample_positive(dist, rng, size):
    """Draw from ``dist`` by inverse CDF, redrawing exact zeros."""
    out = dist.ppf(rng.random(size))
    bad = out <= 0
    while bad.any():
        out[bad] = dist.ppf(rng.random(int(bad.sum())))
        bad = out <= 0
    return out


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """
    All ``K x K`` channel links for one coherence block.

    Parameters
    ----------
    gains : ndarray, shape (K, K, N, M, M)
        ``gains[i, j, s]`` is the ``M x M`` block from transmitter ``i + 1``
        to receiver ``j + 1`` on subcarrier ``s``.
    distribution : Uniform or Rayleigh, optional
        The distribution the gains were drawn from (metadata).
    seed : int, optional
        Seed used for the draw (metadata).
    """

    gains: np.ndarray
    distribution: FadingDistribution | None = None
    seed: int | None = None

    def __post_init__(self):
        g = np.array(self.gains, dtype=float)
        if g.ndim != 5 or g.shape[0] != g.shape[1] or g.shape[3] != g.shape[4]:
            raise ValueError(f"gains must have shape (K, K, N, M, M), got {g.shape}")
        g.setflags(write=False)
        object.__setattr__(self, "gains", g)

    @property
    def K(self) -> int:
        return self.gains.shape[0]

    @property
    def N(self) -> int:
        return self.gains.shape[2]

    @property
    def M(self) -> int:
        return self.gains.shape[3]

    def link(self, tx: int, rx: int) -> np.ndarray:
        """Blocks of ``H_{tx,rx}`` (1-based user indices), shape ``(N, M, M)``."""
        if not (1 <= tx <= self.K and 1 <= rx <= self.K):
            raise IndexError(f"link ({tx}, {rx}) outside 1..{self.K}")
        return self.gains[tx - 1, rx - 1]

    def dense(self, tx: int, rx: int) -> np.ndarray:
        """The full ``NM x NM`` block-diagonal matrix of one link."""
        return block_diag(*self.link(tx, rx))

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "N": self.N,
            "M": self.M,
            "distribution": None if self.distribution is None else self.distribution.to_dict(),
            "seed": self.seed,
            "blocks": self.gains.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelSet":
        dist = d.get("distribution")
        cs = cls(
            np.asarray(d["blocks"], dtype=float),
            None if dist is None else distribution_from_dict(dist),
            d.get("seed"),
        )
        if (cs.K, cs.N, cs.M) != (d["K"], d["N"], d["M"]):
            raise ValueError("declared K, N, M disagree with block array")
        return cs

    @classmethod
    def from_json(cls, text: str) -> "ChannelSet":
        return cls.from_dict(json.loads(text))


def draw_channel_set(K: int, N: int, M: int, dist: FadingDistribution, seed: int) -> ChannelSet:
    """
    Draw a block-fading channel ensemble.

    Every entry of every ``M x M`` block is i.i.d. from `dist`; entries
    outside the per-subcarrier blocks are structurally zero.

    Examples
    --------
    >>> cs = draw_channel_set(3, 3, 1, Uniform(0.9, 1.0), seed=7)
    >>> cs.dense(1, 2).shape
    (3, 3)
    """
    if K < 2 or N < 1 or M < 1:
        raise ValueError(f"need K >= 2, N >= 1, M >= 1; got K={K}, N={N}, M={M}")
    dist = distribution_from_dict(dist)
    rng = np.random.default_rng(seed)
    gains = _sample_positive(dist, rng, (K, K, N, M, M))
    return ChannelSet(gains, dist, seed)


def restrict_to_group(cs: ChannelSet, group_index: int, group_size: int) -> ChannelSet:
    """Channels on subcarriers ``[g * size, (g + 1) * size)`` only."""
    if group_size < 1 or group_index < 0 or (group_index + 1) * group_size > cs.N:
        raise IndexError(
            f"group {group_index} of size {group_size} does not fit in {cs.N} subcarriers"
        )
    lo = group_index * group_size
    return ChannelSet(cs.gains[:, :, lo : lo + group_size], cs.distribution, cs.seed)


def apply_blocks(blocks: np.ndarray, X: np.ndarray) -> np.ndarray:
    """
    Multiply a block-diagonal matrix by a dense matrix or vector.

    Parameters
    ----------
    blocks : ndarray, shape (..., s, M, M)
    X : ndarray, shape (..., s*M, c) or (..., s*M)

    Returns
    -------
    ndarray with the shape of `X`.
    """
    s, M = blocks.shape[-3], blocks.shape[-1]
    if X.ndim == blocks.ndim - 2:
        return apply_blocks(blocks, X[..., None])[..., 0]
    c = X.shape[-1]
    Xr = X.reshape(X.shape[:-2] + (s, M, c))
    return np.matmul(blocks, Xr).reshape(np.broadcast_shapes(blocks.shape[:-3], X.shape[:-2]) + (s * M, c))
