"""
Monte Carlo link simulation of three-user (MIMO-)OFDM with alignment.

One trial draws a block-fading channel over all ``N`` subcarriers, splits
it into groups of ``2n + 1`` subcarriers, precodes every group in closed
form and sends one BPSK symbol per packet.  The figure of merit is the
number of packets decoded without error (the "unnormalised DoF"); at high
SNR it approaches ``groups * (3n+1) * M``.  The single-user baseline sends
one symbol per subcarrier from transmitter 1 alone.

SNR is defined per receive dimension: the noise variance of a group is
its average received signal power per dimension (after precoder
normalisation) divided by the linear SNR.  Noise draws are shared across
the SNR grid within a trial, so every curve is evaluated on paired
samples.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .channel import FadingDistribution, Uniform, apply_blocks, distribution_from_dict, draw_channel_set
from .ia_core import (
    COND_THRESHOLD,
    PrecoderSet,
    batch_decoders,
    batch_power_ratio,
    batch_precoders,
    plan_groups,
)

__all__ = [
    "SimConfig",
    "TrialResult",
    "SweepResult",
    "NORMALIZATIONS",
    "normalize_precoders",
    "run_trial",
    "run_sweep",
    "FIGURE_PRESETS",
    "DEFAULT_SNR_GRID",
]

NORMALIZATIONS = ("unit-column", "unit-total-power", "none")
DEFAULT_SNR_GRID = tuple(float(x) for x in range(0, 101, 2))
_SCHEME_ALIASES = {"ia": "ia", "single_user": "single_user", "singleuserofdm": "single_user",
                   "single-user": "single_user", "baseline": "single_user"}


@dataclass(frozen=True)
class SimConfig:
    """
    Parameters of one simulated scheme.

    `power_check` selects which precoders the ``10**a`` power-ratio test
    sees: ``"transmitted"`` (after normalisation) or ``"raw"`` (the
    closed-form Krylov precoders, i.e. the regime the analytical outage
    model describes).
    """

    n: int = 1
    M: int = 1
    N: int = 255
    K: int = 3
    dist: FadingDistribution = field(default_factory=lambda: Uniform(0.9, 1.0))
    snr_db_grid: tuple = DEFAULT_SNR_GRID
    trials: int = 1000
    a: float = 3.0
    seed: int = 0
    scheme: str = "ia"
    normalization: str = "unit-column"
    power_check: str = "transmitted"
    per_user_power: bool = False
    cond_threshold: float = COND_THRESHOLD
    fallback: bool = False

    def __post_init__(self):
        object.__setattr__(self, "dist", distribution_from_dict(self.dist))
        object.__setattr__(self, "snr_db_grid", tuple(float(x) for x in self.snr_db_grid))
        object.__setattr__(self, "scheme", _SCHEME_ALIASES.get(str(self.scheme).lower(), self.scheme))
        if self.K != 3:
            raise ValueError("only K = 3 has a closed-form precoder construction")
        if not self.snr_db_grid:
            raise ValueError("snr_db_grid must not be empty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.scheme not in ("ia", "single_user"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
        if self.power_check not in ("transmitted", "raw"):
            raise ValueError("power_check must be 'transmitted' or 'raw'")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.scheme == "ia":
            plan_groups(self.N, self.n, self.M)

    @property
    def max_packets(self) -> int:
        if self.scheme == "single_user":
            return self.N
        return plan_groups(self.N, self.n, self.M).max_packets

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dist"] = self.dist.to_dict()
        d["snr_db_grid"] = list(self.snr_db_grid)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class TrialResult:
    decoded: np.ndarray  # per SNR
    groups: int
    outage_groups: int


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Per-SNR statistics of the decoded-packet count over all trials."""

    config: SimConfig
    snr_db: np.ndarray
    counts: np.ndarray  # (trials, len(snr_db))
    outage_frac: float

    @property
    def mean(self) -> np.ndarray:
        return self.counts.mean(axis=0)

    @property
    def std(self) -> np.ndarray:
        return self.counts.std(axis=0)

    def rows(self) -> list[dict]:
        c = self.config
        return [
            {"snr_db": float(snr), "scheme": c.scheme, "n": c.n if c.scheme == "ia" else 0,
             "M": c.M if c.scheme == "ia" else 1, "mean_dof": float(m), "std": float(s),
             "outage_frac": self.outage_frac}
            for snr, m, s in zip(self.snr_db, self.mean, self.std)
        ]

    def metadata(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "snr_definition": "average received signal power per receive dimension / noise variance, "
                              "after precoder normalisation",
            "max_packets": self.config.max_packets,
            "seed_rule": "trial t uses seed + t",
        }


def _normalize(Vs, policy):
    if policy == "none":
        return tuple(Vs)
    out = []
    with np.errstate(all="ignore"):
        for V in Vs:
            if policy == "unit-column":
                out.append(V / np.linalg.norm(V, axis=-2, keepdims=True))
            else:
                fro = np.sqrt((V**2).sum(axis=(-2, -1), keepdims=True))
                out.append(V * np.sqrt(V.shape[-1]) / fro)
    return tuple(out)


def normalize_precoders(ps: PrecoderSet, policy: str = "unit-column") -> PrecoderSet:
    """
    Rescale precoders for transmission.

    ``"unit-column"`` gives every column unit norm; ``"unit-total-power"``
    scales each precoder so its squared Frobenius norm equals its column
    count.  Both keep every column space, hence the alignment.
    """
    if policy not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
    V1, V2, V3 = _normalize(ps.V, policy)
    return replace(ps, V1=V1, V2=V2, V3=V3, normalization=policy)


def _snr_linear(grid):
    return np.array([math.inf if math.isinf(x) and x > 0 else 10.0 ** (x / 10.0) for x in grid])


def _noise_scale(power, snr_lin):
    """Noise std per (item, snr); zero for infinite SNR."""
    with np.errstate(divide="ignore"):
        return np.sqrt(np.asarray(power)[..., None] / snr_lin)


def _baseline_counts(h, rng, snr_lin):
    """Single-user BPSK on scalar gains `h`; correct symbols per SNR."""
    if h.size == 0:
        return np.zeros(len(snr_lin))
    x = rng.choice([-1.0, 1.0], size=h.shape)
    z = rng.standard_normal(h.shape)
    sigma = _noise_scale(np.mean(h**2), snr_lin)  # (len(snr),)
    est = x[:, None] + (z / h)[:, None] * sigma[None, :]
    return (np.where(est >= 0, 1.0, -1.0) == x[:, None]).sum(axis=0).astype(float)


def run_trial(cfg: SimConfig, trial_seed: int) -> TrialResult:
    """
    Simulate one channel realisation.

    Groups failing the power-ratio test or with a decoding matrix above
    the condition threshold are in outage and contribute nothing (or
    carry baseline traffic with ``fallback=True``).
    """
    cs = draw_channel_set(cfg.K, cfg.N, cfg.M, cfg.dist, trial_seed)
    rng = np.random.default_rng([trial_seed, 1])
    snr_lin = _snr_linear(cfg.snr_db_grid)
    h11 = cs.gains[0, 0, :, 0, 0]

    if cfg.scheme == "single_user":
        return TrialResult(_baseline_counts(h11, rng, snr_lin), 0, 0)

    plan = plan_groups(cfg.N, cfg.n, cfg.M)
    G, s, n, M = plan.num_groups, plan.group_size, cfg.n, cfg.M
    used = G * s
    Hg = cs.gains[:, :, :used].reshape(3, 3, G, s, M, M)

    raw = batch_precoders(Hg, n, threshold=cfg.cond_threshold)
    ok = raw[4]
    Vt = _normalize(raw[:3], cfg.normalization)
    checked = Vt if cfg.power_check == "transmitted" else raw[:3]
    ok = ok & (batch_power_ratio(checked, s, M, cfg.per_user_power) <= np.power(10.0, cfg.a))
    D, cond = batch_decoders(Hg, *Vt, n)
    ok = ok & (cond <= cfg.cond_threshold).all(axis=-1)

    sizes = ((n + 1) * M, n * M, n * M)
    xs = [rng.choice([-1.0, 1.0], size=(G, c)) for c in sizes]
    x_all = np.concatenate(xs, axis=-1)
    z = rng.standard_normal((3, G, s * M))

    counts = np.zeros(len(snr_lin))
    eye = np.eye(s * M)
    with np.errstate(all="ignore"):
        Heff = [np.concatenate([apply_blocks(Hg[i, r], Vt[i]) for i in range(3)], axis=-1) for r in range(3)]
        power = np.mean([(He**2).sum(axis=(-2, -1)) for He in Heff], axis=0) / (s * M)
        sigma = _noise_scale(np.where(ok, power, 0.0), snr_lin)  # (G, len(snr))
        for r in range(3):
            y0 = (Heff[r] @ x_all[..., None])[..., 0]
            Dr = np.where(ok[:, None, None], D[r], eye)
            y0 = np.where(ok[:, None], y0, 0.0)
            e0 = np.linalg.solve(Dr, y0[..., None])[..., 0][:, : sizes[r]]
            ez = np.linalg.solve(Dr, z[r][..., None])[..., 0][:, : sizes[r]]
            est = e0[:, :, None] + ez[:, :, None] * sigma[:, None, :]
            right = (np.where(est >= 0, 1.0, -1.0) == xs[r][:, :, None]).sum(axis=1)
            counts += np.where(ok[:, None], right, 0).sum(axis=0)

    baseline_idx = list(range(used, cfg.N))
    if cfg.fallback:
        for g in np.flatnonzero(~ok):
            baseline_idx.extend(range(g * s, (g + 1) * s))
    if baseline_idx:
        counts += _baseline_counts(h11[np.array(baseline_idx)], rng, snr_lin)
    return TrialResult(counts, G, int(np.count_nonzero(~ok)))


def _run_chunk(cfg, seeds):
    return [run_trial(cfg, s) for s in seeds]


def run_sweep(cfg: SimConfig, workers: int = 1) -> SweepResult:
    """
    Average `run_trial` over ``cfg.trials`` trials (trial ``t`` uses seed
    ``cfg.seed + t``).  Results do not depend on `workers`.
    """
    seeds = [cfg.seed + t for t in range(cfg.trials)]
    if workers > 1 and cfg.trials > 1:
        chunks = [seeds[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_chunk, [cfg] * len(chunks), chunks))
        by_seed = {}
        for chunk, part in zip(chunks, parts):
            by_seed.update(zip(chunk, part))
        results = [by_seed[s] for s in seeds]
    else:
        results = _run_chunk(cfg, seeds)
    counts = np.stack([r.decoded for r in results])
    groups = sum(r.groups for r in results)
    out = sum(r.outage_groups for r in results)
    return SweepResult(cfg, np.array(cfg.snr_db_grid), counts, out / groups if groups else 0.0)


def _preset(dist, schemes, **kw):
    out = []
    for scheme, n, M in schemes:
        out.append(SimConfig(n=n, M=M, dist=dist, scheme=scheme, **kw))
    return out


_VARIANCE_SCHEMES = (
    ("single_user", 1, 1),
    ("ia", 1, 1),
    ("ia", 2, 1),
    ("ia", 3, 1),
    ("ia", 1, 2),
    ("ia", 2, 2),
    ("ia", 1, 3),
)

# figure name -> list of SimConfig
FIGURE_PRESETS = {
    "fig5": _preset(Uniform(0.0, 1.0), _VARIANCE_SCHEMES),
    "fig6": _preset(Uniform(0.9, 1.0), _VARIANCE_SCHEMES),
    "fig7": _preset(Uniform(0.0, 1.0), (("single_user", 1, 1), ("ia", 5, 1))),
}


def load_config(path) -> SimConfig:
    with open(path) as f:
        return SimConfig.from_dict(json.load(f))
