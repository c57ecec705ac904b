"""
Three-user interference alignment over groups of subcarriers.

A group spans ``s = 2n + 1`` subcarriers with ``M`` antennas per node, so
every signal lives in ``sM`` dimensions.  Transmitter 1 sends ``(n+1)M``
packets, transmitters 2 and 3 send ``nM`` each; the precoders are Krylov
sequences of the all-ones vector ``w`` under the alignment operator

    T = H12^-1 H32 H31^-1 H21 H23^-1 H13        (blockwise per subcarrier)

    V1 = [w, Tw, ..., T^((n+1)M-1) w]
    V2 = H23^-1 H13 C,   C = V1[:, M-1 : (n+1)M-1]
    V3 = H32^-1 H12 B,   B = V1[:, M:]  = T C

so that the interference at every receiver collapses into ``nM``
dimensions and the desired packets are recovered by inverting one square
matrix per receiver.

Functions prefixed ``batch_`` take link arrays of shape
``(3, 3, *batch, s, M, M)`` and never raise on bad groups; they return
validity masks instead.  The per-group functions wrap them and raise.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSet, apply_blocks, draw_channel_set, Uniform
from .errors import (
    ConditioningError,
    DecodeInfeasibleError,
    DefectiveMatrixError,
    InfeasiblePlanError,
    SingularChannelError,
)

__all__ = [
    "COND_THRESHOLD",
    "GroupPlan",
    "PrecoderSet",
    "DecoderSet",
    "PacketBlock",
    "AlignmentReport",
    "PowerCheck",
    "GenericIADemo",
    "plan_groups",
    "build_T",
    "build_precoders",
    "verify_alignment",
    "build_decoders",
    "encode",
    "receive",
    "decode",
    "random_packets",
    "power_ratio_check",
    "subcarrier_power",
    "generic_channel_ia_demo",
    "batch_T",
    "batch_precoders",
    "batch_decoders",
    "batch_power_ratio",
    "matrix_cond",
]

# Above this 2-norm condition number a matrix is treated as singular.
COND_THRESHOLD = 1e12


# ------------------------------------------------------------------------
# Data types
# ------------------------------------------------------------------------
@dataclass(frozen=True)
class GroupPlan:
    """How ``N`` subcarriers split into independent precoding groups."""

    N: int
    n: int
    M: int
    group_size: int
    num_groups: int
    leftover: int

    @property
    def packets_per_group(self) -> int:
        return (3 * self.n + 1) * self.M

    @property
    def max_packets(self) -> int:
        """IA packets over all groups plus one baseline packet per leftover subcarrier."""
        return self.num_groups * self.packets_per_group + self.leftover


@dataclass(frozen=True, eq=False)
class PrecoderSet:
    """
    Precoders for one subcarrier group.

    ``V1`` is ``sM x (n+1)M``, ``V2`` and ``V3`` are ``sM x nM``.  ``T`` is
    stored as its ``s`` diagonal blocks.  `normalization` records whether
    the columns have been rescaled after construction.
    """

    V1: np.ndarray
    V2: np.ndarray
    V3: np.ndarray
    T: np.ndarray
    n: int
    M: int
    normalization: str = "none"

    @property
    def w(self) -> np.ndarray:
        return np.ones(self.V1.shape[0])

    @property
    def B(self) -> np.ndarray:
        return self.V1[:, self.M :]

    @property
    def C(self) -> np.ndarray:
        return self.V1[:, self.M - 1 : (self.n + 1) * self.M - 1]

    @property
    def V(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.V1, self.V2, self.V3

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "normalization": self.normalization,
            "T": self.T.tolist(),
            "V1": self.V1.tolist(),
            "V2": self.V2.tolist(),
            "V3": self.V3.tolist(),
        }


@dataclass(frozen=True, eq=False)
class DecoderSet:
    """
    Stacked receive matrices for one group.

    ``D[r]`` maps the (partly interference-summed) coordinate vector seen
    by receiver ``r + 1`` to its received signal; ``selectors[r]`` lists
    the coordinates that hold the desired packets.
    """

    D: tuple[np.ndarray, np.ndarray, np.ndarray]
    selectors: tuple[np.ndarray, np.ndarray, np.ndarray]
    cond: tuple[float, float, float]

    def to_dict(self) -> dict:
        return {
            "D": [d.tolist() for d in self.D],
            "selectors": [s.tolist() for s in self.selectors],
            "cond": list(self.cond),
        }


@dataclass(frozen=True, eq=False)
class PacketBlock:
    x1: np.ndarray
    x2: np.ndarray
    x3: np.ndarray
    alphabet: str = "bpsk"

    def __post_init__(self):
        if self.alphabet not in ("bpsk", "real"):
            raise ValueError(f"unknown alphabet {self.alphabet!r}")
        if self.alphabet == "bpsk":
            for x in self.packets:
                if not np.all(np.abs(np.asarray(x)) == 1):
                    raise ValueError("BPSK packets must be +1 or -1")

    @property
    def packets(self):
        return self.x1, self.x2, self.x3


@dataclass(frozen=True)
class AlignmentReport:
    """
    Alignment residuals at the three receivers.

    `residuals` compares the two sides of each identity entrywise, relative
    to the larger max-abs entry.  `span_residuals` compares unit-normalised
    columns and therefore also holds after column rescaling.
    """

    residuals: tuple[float, float, float]
    span_residuals: tuple[float, float, float]

    @property
    def max_residual(self) -> float:
        return max(self.residuals)

    @property
    def max_span_residual(self) -> float:
        return max(self.span_residuals)


@dataclass(frozen=True)
class PowerCheck:
    ok: bool
    ratio: float


# ------------------------------------------------------------------------
# Batched construction
# ------------------------------------------------------------------------
def matrix_cond(A: np.ndarray) -> np.ndarray:
    """2-norm condition number over the last two axes; ``inf`` for
    singular or non-finite matrices."""
    A = np.asarray(A, dtype=float)
    finite = np.isfinite(A).all(axis=(-2, -1))
    safe = np.where(finite[..., None, None], A, 0.0)
    sv = np.linalg.svd(safe, compute_uv=False)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = sv[..., 0] / sv[..., -1]
    c = np.where(np.isnan(c), np.inf, c)
    return np.where(finite, c, np.inf)


def _safe_inv(blocks, threshold):
    """Blockwise inverse; bad blocks are replaced by identity and flagged."""
    cond = matrix_cond(blocks)
    bad = cond > threshold
    eye = np.broadcast_to(np.eye(blocks.shape[-1]), blocks.shape)
    return np.linalg.inv(np.where(bad[..., None, None], eye, blocks)), bad


def batch_T(Hg: np.ndarray, threshold: float = COND_THRESHOLD):
    """
    Alignment operator blocks for every subcarrier.

    Parameters
    ----------
    Hg : ndarray, shape (3, 3, *batch, s, M, M)

    Returns
    -------
    T : ndarray, shape (*batch, s, M, M)
    ok : bool ndarray, shape (*batch,)
        False where a cross link block is singular or T is non-finite.
    """
    h = lambda i, j: Hg[i - 1, j - 1]
    M = Hg.shape[-1]
    with np.errstate(all="ignore"):
        if M == 1:
            num = h(2, 1) * h(3, 2) * h(1, 3)
            den = h(1, 2) * h(2, 3) * h(3, 1)
            bad = ~np.isfinite(den) | (den == 0) | (h(3, 2) == 0)
            T = num / np.where(bad, 1.0, den)
            bad = bad[..., 0, 0]
        else:
            i12, b12 = _safe_inv(h(1, 2), threshold)
            i31, b31 = _safe_inv(h(3, 1), threshold)
            i23, b23 = _safe_inv(h(2, 3), threshold)
            T = i12 @ h(3, 2) @ i31 @ h(2, 1) @ i23 @ h(1, 3)
            bad = b12 | b31 | b23
            # V2, V3 prefixes also invert H32
            bad = bad | (matrix_cond(h(3, 2)) > threshold)
        ok = ~bad.any(axis=-1) & np.isfinite(T).all(axis=(-3, -2, -1))
    return T, ok


def batch_precoders(Hg: np.ndarray, n: int, T: np.ndarray | None = None,
                    threshold: float = COND_THRESHOLD):
    """
    Raw (unnormalised) precoders for a batch of groups.

    Returns ``(V1, V2, V3, T, ok)`` with ``V*`` of shape ``(*batch, sM, cols)``.
    """
    M = Hg.shape[-1]
    s = Hg.shape[-3]
    if s != 2 * n + 1:
        raise ValueError(f"group has {s} subcarriers, expected 2n+1 = {2 * n + 1}")
    ok = np.ones(Hg.shape[2:-3], dtype=bool)
    if T is None:
        T, ok = batch_T(Hg, threshold)
    h = lambda i, j: Hg[i - 1, j - 1]
    batch = Hg.shape[2:-3]
    cols = [np.ones(batch + (s * M,))]
    with np.errstate(all="ignore"):
        for _ in range((n + 1) * M - 1):
            cols.append(apply_blocks(T, cols[-1]))
        V1 = np.stack(cols, axis=-1)
        C = V1[..., M - 1 : (n + 1) * M - 1]
        B = V1[..., M:]
        P2 = np.linalg.solve(_guard(h(2, 3)), h(1, 3))
        P3 = np.linalg.solve(_guard(h(3, 2)), h(1, 2))
        V2 = apply_blocks(P2, C)
        V3 = apply_blocks(P3, B)
    finite = np.ones(batch, dtype=bool)
    for V in (V1, V2, V3):
        finite &= np.isfinite(V).all(axis=(-2, -1))
    return V1, V2, V3, T, ok & finite


def _guard(blocks):
    """Replace exactly singular or non-finite blocks so batched solves never raise."""
    det = np.linalg.det(np.where(np.isfinite(blocks), blocks, 0.0))
    bad = (det == 0) | ~np.isfinite(blocks).all(axis=(-2, -1))
    eye = np.broadcast_to(np.eye(blocks.shape[-1]), blocks.shape)
    return np.where(bad[..., None, None], eye, blocks)


def batch_decoders(Hg: np.ndarray, V1, V2, V3, n: int):
    """
    Stacked decoding matrices for a batch of groups.

    Receiver 1: ``[H11 V1 | H21 V2]``; receiver 2:
    ``[H22 V2 | H12 V1[:, :M] | H32 V3]``; receiver 3:
    ``[H33 V3 | H23 V2 | H13 V1[:, :M-1] | H13 V1[:, -1]]``.  For raw
    precoders ``H32 V3 = H12 B`` and ``H23 V2 = H13 C``; taking the
    interference columns from the transmitted precoders keeps the
    decoders valid after columnwise rescaling.

    Returns
    -------
    D : tuple of three ndarrays, shape (*batch, sM, sM)
    cond : ndarray, shape (*batch, 3)
    """
    h = lambda i, j: Hg[i - 1, j - 1]
    M = Hg.shape[-1]
    with np.errstate(all="ignore"):
        D1 = np.concatenate([apply_blocks(h(1, 1), V1), apply_blocks(h(2, 1), V2)], axis=-1)
        D2 = np.concatenate(
            [apply_blocks(h(2, 2), V2), apply_blocks(h(1, 2), V1[..., :M]), apply_blocks(h(3, 2), V3)],
            axis=-1,
        )
        D3 = np.concatenate(
            [
                apply_blocks(h(3, 3), V3),
                apply_blocks(h(2, 3), V2),
                apply_blocks(h(1, 3), V1[..., : M - 1]),
                apply_blocks(h(1, 3), V1[..., -1:]),
            ],
            axis=-1,
        )
    cond = np.stack([matrix_cond(D) for D in (D1, D2, D3)], axis=-1)
    return (D1, D2, D3), cond


def _per_subcarrier(V, s, M):
    return (V**2).reshape(V.shape[:-2] + (s, M, V.shape[-1])).sum(axis=(-2, -1))


def batch_power_ratio(Vs, s: int, M: int, per_user: bool = False) -> np.ndarray:
    """
    Max/min per-subcarrier transmit power over a group.

    The power of subcarrier ``k`` sums squared precoder entries over its
    ``M`` antenna rows and all columns of every precoder in `Vs`
    (aggregate form), or is evaluated per precoder with the worst ratio
    reported (``per_user=True``).
    """
    with np.errstate(all="ignore"):
        if per_user:
            ratios = []
            for V in Vs:
                p = _per_subcarrier(V, s, M)
                ratios.append(p.max(axis=-1) / p.min(axis=-1))
            r = np.max(ratios, axis=0)
        else:
            p = sum(_per_subcarrier(V, s, M) for V in Vs)
            r = p.max(axis=-1) / p.min(axis=-1)
    return np.where(np.isnan(r), np.inf, r)


# ------------------------------------------------------------------------
# Per-group API
# ------------------------------------------------------------------------
def plan_groups(N: int, n: int, M: int = 1) -> GroupPlan:
    """
    Split ``N`` subcarriers into groups of ``2n + 1``.

    >>> plan_groups(7, 2)
    GroupPlan(N=7, n=2, M=1, group_size=5, num_groups=1, leftover=2)
    """
    if n < 1 or M < 1:
        raise ValueError(f"need n >= 1 and M >= 1, got n={n}, M={M}")
    size = 2 * n + 1
    if N < size:
        raise InfeasiblePlanError(f"N={N} subcarriers cannot hold a group of {size}")
    g, left = divmod(N, size)
    return GroupPlan(N, n, M, size, g, left)


def _links(cs: ChannelSet) -> np.ndarray:
    if cs.K != 3:
        raise ValueError(f"closed-form alignment needs K = 3 users, got {cs.K}")
    return cs.gains


def _check_M(cs, M):
    if M is not None and M != cs.M:
        raise ValueError(f"M={M} does not match channel set with M={cs.M}")


def build_T(cs: ChannelSet, M: int | None = None, threshold: float = COND_THRESHOLD) -> np.ndarray:
    """
    Blocks of the alignment operator, one ``M x M`` block per subcarrier.

    For ``M = 1`` this is ``t_k = h21 h32 h13 / (h12 h23 h31)``; for
    ``M > 1`` the six-factor block product keeps its operand order since
    the blocks do not commute.

    Raises
    ------
    SingularChannelError
        If a cross-link block cannot be inverted.
    """
    _check_M(cs, M)
    T, ok = batch_T(_links(cs), threshold)
    if not ok:
        raise SingularChannelError("singular cross-link block; group is in outage")
    return T


def build_precoders(cs: ChannelSet, n: int, M: int | None = None,
                    threshold: float = COND_THRESHOLD) -> PrecoderSet:
    """Closed-form precoders for a single group of ``2n + 1`` subcarriers."""
    _check_M(cs, M)
    if cs.N != 2 * n + 1:
        raise ValueError(f"channel set has {cs.N} subcarriers, a group needs {2 * n + 1}")
    T = build_T(cs, threshold=threshold)
    V1, V2, V3, T, ok = batch_precoders(_links(cs), n, T, threshold)
    if not ok:
        raise ConditioningError("non-finite precoder entries; group is in outage")
    return PrecoderSet(V1, V2, V3, T, n, cs.M)


def _rel_residual(X, Y):
    scale = max(np.abs(X).max(), np.abs(Y).max())
    if scale == 0:
        return 0.0
    return float(np.abs(X - Y).max() / scale)


def _span_residual(X, Y):
    with np.errstate(all="ignore"):
        Xn = X / np.linalg.norm(X, axis=0)
        Yn = Y / np.linalg.norm(Y, axis=0)
    r = np.abs(Xn - Yn).max() if X.size else 0.0
    return float(r) if np.isfinite(r) else np.inf


def verify_alignment(cs: ChannelSet, ps: PrecoderSet) -> AlignmentReport:
    """
    Check ``H21 V2 = H31 V3``, ``H32 V3 = H12 B`` and ``H23 V2 = H13 C``.
    """
    pairs = [
        (apply_blocks(cs.link(2, 1), ps.V2), apply_blocks(cs.link(3, 1), ps.V3)),
        (apply_blocks(cs.link(3, 2), ps.V3), apply_blocks(cs.link(1, 2), ps.B)),
        (apply_blocks(cs.link(2, 3), ps.V2), apply_blocks(cs.link(1, 3), ps.C)),
    ]
    return AlignmentReport(
        tuple(_rel_residual(X, Y) for X, Y in pairs),
        tuple(_span_residual(X, Y) for X, Y in pairs),
    )


def build_decoders(cs: ChannelSet, ps: PrecoderSet, n: int | None = None, M: int | None = None,
                   threshold: float = COND_THRESHOLD) -> DecoderSet:
    """
    Square per-receiver decoding matrices and desired-packet selectors.

    Raises
    ------
    DecodeInfeasibleError
        If any stacked matrix has condition number above `threshold`.
    """
    n = ps.n if n is None else n
    M = ps.M if M is None else M
    if (n, M) != (ps.n, ps.M):
        raise ValueError("n, M do not match the precoder set")
    D, cond = batch_decoders(_links(cs), *ps.V, n)
    cond = tuple(float(c) for c in cond)
    if max(cond) > threshold:
        raise DecodeInfeasibleError(f"decoding matrix condition numbers {cond} exceed {threshold:g}")
    selectors = (np.arange((n + 1) * M), np.arange(n * M), np.arange(n * M))
    return DecoderSet(D, selectors, cond)


def encode(ps: PrecoderSet, pkt: PacketBlock):
    """Transmitted vectors ``s_i = V_i x_i``."""
    return tuple(V @ np.asarray(x, dtype=float) for V, x in zip(ps.V, pkt.packets))


def receive(cs: ChannelSet, signals, noise_std: float = 0.0, rng=None):
    """``y_r = sum_i H_ir s_i`` plus i.i.d. Gaussian noise of std `noise_std`."""
    rng = np.random.default_rng(rng)
    out = []
    for r in range(1, 4):
        y = sum(apply_blocks(cs.link(i, r), np.asarray(signals[i - 1], dtype=float)) for i in range(1, 4))
        if noise_std > 0:
            y = y + noise_std * rng.standard_normal(y.shape)
        out.append(y)
    return tuple(out)


def decode(ds: DecoderSet, received, alphabet: str = "bpsk") -> PacketBlock:
    """Zero-forcing recovery ``r = D^-1 y`` followed by packet selection."""
    xs = []
    for D, sel, y in zip(ds.D, ds.selectors, received):
        r = np.linalg.solve(D, np.asarray(y, dtype=float))[sel]
        if alphabet == "bpsk":
            r = np.where(r >= 0, 1.0, -1.0)
        xs.append(r)
    return PacketBlock(*xs, alphabet=alphabet)


def random_packets(n: int, M: int, rng=None) -> PacketBlock:
    rng = np.random.default_rng(rng)
    sizes = ((n + 1) * M, n * M, n * M)
    return PacketBlock(*(rng.choice([-1.0, 1.0], size=k) for k in sizes))


def subcarrier_power(ps: PrecoderSet, per_user: bool = False) -> np.ndarray:
    """Transmit power per subcarrier, shape ``(s,)`` or ``(3, s)`` per user."""
    s = ps.V1.shape[0] // ps.M
    if per_user:
        return np.stack([_per_subcarrier(V, s, ps.M) for V in ps.V])
    return sum(_per_subcarrier(V, s, ps.M) for V in ps.V)


def power_ratio_check(ps: PrecoderSet, a: float, per_user: bool = False) -> PowerCheck:
    """
    Outage test on the max/min per-subcarrier power ratio.

    The group is in outage when the ratio exceeds ``10**a``.  With
    ``per_user=True`` every precoder is tested on its own.
    """
    if not a > 0:
        raise ValueError(f"a must be positive, got {a}")
    s = ps.V1.shape[0] // ps.M
    ratio = float(batch_power_ratio(ps.V, s, ps.M, per_user))
    with np.errstate(over="ignore"):
        limit = np.power(10.0, a)
    return PowerCheck(bool(ratio <= limit), ratio)


# ------------------------------------------------------------------------
# Single-extension alignment on 2x2 channels
# ------------------------------------------------------------------------
def _inv2(A):
    a, b, c, d = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
    det = a * d - b * c
    if det == 0:
        raise SingularChannelError("singular 2x2 channel")
    return np.array([[d, -b], [-c, a]]) / det


def _eig2(A):
    """One eigenpair of a real 2x2 matrix in closed form (possibly complex)."""
    a, b, c, d = (complex(v) for v in A.ravel())
    if b == 0 and c == 0:
        if a == d:
            raise DefectiveMatrixError("scalar matrix: every vector is an eigenvector")
        return a, np.array([1.0, 0.0], dtype=complex)
    tr, det = a + d, a * d - b * c
    disc = tr * tr - 4 * det
    if abs(disc) <= 1e-14 * max(1.0, abs(tr)) ** 2:
        raise DefectiveMatrixError("repeated eigenvalue")
    lam = (tr + np.sqrt(disc)) / 2
    v = np.array([b, lam - a]) if b != 0 else np.array([lam - d, c])
    return lam, v / np.linalg.norm(v)


@dataclass(frozen=True, eq=False)
class GenericIADemo:
    """Outcome of single-extension alignment with 2 dimensions per node."""

    channels: dict = field(repr=False)
    v: tuple
    eigenvalue: complex
    residuals: tuple[float, float, float]
    projections: tuple[float, float, float]
    recovered: tuple[bool, bool, bool]
    attempts: int

    @property
    def packets_recovered(self) -> int:
        return int(sum(self.recovered))

    @property
    def v1_nonzero_entries(self) -> int:
        return int(np.count_nonzero(self.v[0]))


def _collinear(a, b):
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(abs(a[0] * b[1] - a[1] * b[0]) / (na * nb))


def generic_channel_ia_demo(seed: int = 0, channels: dict | None = None, diagonal: bool = False,
                            max_attempts: int = 20, tol: float = 1e-9) -> GenericIADemo:
    """
    Three users, two dimensions each, one packet per user.

    ``v1`` is an eigenvector of ``H12^-1 H32 H31^-1 H21 H23^-1 H13``,
    ``v2 = H23^-1 H13 v1`` and ``v3 = H32^-1 H12 v1``.  Each receiver
    projects onto the vector orthogonal to its (single) interference
    direction and tries to read its own packet.

    Dense channels give 3 packets.  With diagonal channels (two
    subcarriers instead of two antennas) ``v1`` is a standard basis
    vector, every signal shares that axis and the desired packet is
    cancelled along with the interference.

    Parameters
    ----------
    channels : dict, optional
        ``{(i, j): 2x2 array}`` for all nine links; drawn from
        Uniform(0, 1) when omitted.
    diagonal : bool
        Zero the off-diagonal entries of drawn channels.
    """
    for attempt in range(max_attempts):
        if channels is None:
            cs = draw_channel_set(3, 1, 2, Uniform(0.0, 1.0), seed + attempt)
            H = {(i, j): cs.link(i, j)[0].copy() for i in range(1, 4) for j in range(1, 4)}
            if diagonal:
                H = {k: np.diag(np.diag(v)) for k, v in H.items()}
        else:
            H = {k: np.asarray(v, dtype=float) for k, v in channels.items()}
        E = _inv2(H[1, 2]) @ H[3, 2] @ _inv2(H[3, 1]) @ H[2, 1] @ _inv2(H[2, 3]) @ H[1, 3]
        try:
            lam, v1 = _eig2(E)
            break
        except DefectiveMatrixError:
            if channels is not None:
                raise
    else:
        raise DefectiveMatrixError(f"no usable draw in {max_attempts} attempts")

    v2 = _inv2(H[2, 3]) @ H[1, 3] @ v1
    v3 = _inv2(H[3, 2]) @ H[1, 2] @ v1
    v = (v1, v2, v3)
    # interference directions seen by receivers 1, 2, 3
    interf = (
        (H[2, 1] @ v2, H[3, 1] @ v3),
        (H[1, 2] @ v1, H[3, 2] @ v3),
        (H[1, 3] @ v1, H[2, 3] @ v2),
    )
    residuals = tuple(_collinear(a, b) for a, b in interf)

    rng = np.random.default_rng(seed)
    x = rng.choice([-1.0, 1.0], size=3)
    projections, recovered = [], []
    for r in range(3):
        g = interf[r][0]
        u = np.array([g[1], -g[0]])
        desired = H[r + 1, r + 1] @ v[r]
        proj = abs(u @ desired) / (np.linalg.norm(u) * np.linalg.norm(desired))
        projections.append(float(proj))
        if proj <= tol:
            recovered.append(False)
            continue
        y = sum(H[i + 1, r + 1] @ v[i] * x[i] for i in range(3))
        xhat = (u @ y) / (u @ desired)
        recovered.append(bool(abs(xhat - x[r]) < 1e-6))
    return GenericIADemo(H, v, lam, residuals, tuple(projections), tuple(recovered), attempt + 1)
