"""Seeded time-varying channels, base vectors and diagonal alignment operators.

Every entry is drawn with magnitude uniform on ``[lo, hi]`` and phase
uniform on ``[0, 2 pi)``.  Randomness comes from numpy's counter-based
Philox generator keyed by ``(seed, stream)`` so channel and base-vector
draws never share a stream.
"""

from dataclasses import dataclass

import numpy as np

from .errors import SingularChannelError, SpecError

LO, HI = 0.5, 2.0
CHANNEL_STREAM = 1
BASE_STREAM = 2
DENSE_LIMIT = 2048
SINGULAR_COND = 1e10


def rng(seed, stream):
    if not 0 <= seed < 2 ** 64:
        raise SpecError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(key=seed + (stream << 64)))


def _bounded_complex(gen, shape, lo, hi):
    if not 0 < lo <= hi < np.inf:
        raise SpecError(f"need 0 < lo <= hi < inf, got lo={lo}, hi={hi}")
    mag = gen.uniform(lo, hi, size=shape)
    phase = gen.uniform(0.0, 2 * np.pi, size=shape)
    return mag * np.exp(1j * phase)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """``H[j-1, k-1, t-1]`` is the ``M x M`` matrix ``H_jk(t)``."""

    spec: object
    tau: int
    H: np.ndarray
    seed: int
    lo: float = LO
    hi: float = HI

    def scalar(self, j, k):
        """Diagonal of the time-expanded single-antenna channel ``H~_jk``."""
        return self.H[j - 1, k - 1, :, 0, 0]

    def column(self, j, k, p):
        """``h_jk,p(t)`` for all t, shape ``(tau, M)``."""
        return self.H[j - 1, k - 1, :, :, p - 1]


@dataclass(frozen=True, eq=False)
class BaseVectors:
    w: np.ndarray  # shape (count, tau)
    seed: int

    def __len__(self):
        return self.w.shape[0]

    def __getitem__(self, i):
        """1-based access to ``w_i``."""
        return self.w[i - 1]


@dataclass(frozen=True, eq=False)
class AlignmentOperator:
    """Diagonal of an alignment operator ``T``.

    ``residual`` is the largest off-diagonal magnitude observed when the
    operator was extracted from a dense product (``0.0`` for the scalar
    case, ``None`` if the dense product was skipped).
    """

    constraint: tuple
    diag: np.ndarray
    residual: object = 0.0


def generate_channels(spec, tau, seed, lo=LO, hi=HI):
    if tau < 1:
        raise SpecError(f"tau must be positive, got {tau}")
    shape = (spec.J, spec.K, tau, spec.M, spec.M)
    H = _bounded_complex(rng(seed, CHANNEL_STREAM), shape, lo, hi)
    H.setflags(write=False)
    return ChannelRealization(spec, tau, H, seed, lo, hi)


def generate_base_vectors(tau, count, seed, lo=LO, hi=HI):
    if count < 0:
        raise SpecError(f"count must be nonnegative, got {count}")
    w = _bounded_complex(rng(seed, BASE_STREAM), (count, tau), lo, hi)
    w.setflags(write=False)
    return BaseVectors(w, seed)


def assemble_T(chan, m, n, j):
    """``T = H~_jm^{-1} H~_jn`` for single-antenna channels."""
    if chan.spec.M != 1:
        raise SpecError("assemble_T needs M = 1; use assemble_T_multi")
    return AlignmentOperator((m, n, j), chan.scalar(j, n) / chan.scalar(j, m))


def stacked(chan, j, k, p):
    """Time-expanded SIMO channel ``H~_jk,p`` as a dense ``(M tau, tau)`` array.

    Row ``r*tau + t`` holds receive antenna ``r+1`` at time ``t+1``.
    """
    tau, M = chan.tau, chan.spec.M
    h = chan.column(j, k, p)  # (tau, M)
    out = np.zeros((M * tau, tau), dtype=complex)
    idx = np.arange(tau)
    for r in range(M):
        out[r * tau + idx, idx] = h[:, r]
    return out


def stacked_all(chan, j, k):
    """``H~_jk,1:M``, shape ``(M tau, M tau)``."""
    return np.hstack([stacked(chan, j, k, p) for p in range(1, chan.spec.M + 1)])


def check_invertible(chan, j, m):
    cond = np.linalg.cond(chan.H[j - 1, m - 1])
    if not np.all(np.isfinite(cond)) or np.max(cond) > SINGULAR_COND:
        raise SingularChannelError(
            f"H_{j}{m}(t) is numerically singular (condition number {np.max(cond):.3g})")


def multi_blocks(chan, m, n, p, j, dense_limit=DENSE_LIMIT):
    """All ``M`` diagonal blocks of ``H~_jm,1:M^{-1} H~_jn,p``.

    Returns ``(diags, residuals)`` with ``diags`` of shape ``(M, tau)``.
    The diagonals come from ``tau`` independent ``M x M`` solves.  When
    ``M tau <= dense_limit`` the full product is also formed densely and
    the off-diagonal magnitude of each block is reported; otherwise the
    residuals are ``None``.
    """
    tau, M = chan.tau, chan.spec.M
    check_invertible(chan, j, m)
    Hm = chan.H[j - 1, m - 1]                         # (tau, M, M)
    hn = chan.column(j, n, p)[..., None]              # (tau, M, 1)
    diags = np.linalg.solve(Hm, hn)[..., 0].T.copy()  # (M, tau)
    residuals = [None] * M
    if M * tau <= dense_limit:
        X = np.linalg.solve(stacked_all(chan, j, m), stacked(chan, j, n, p))
        for q in range(M):
            block = X[q * tau:(q + 1) * tau]
            off = block - np.diag(np.diag(block))
            residuals[q] = float(np.max(np.abs(off))) if tau > 1 else 0.0
    return diags, residuals


def assemble_T_multi(chan, m, n, p, q, j, dense_limit=DENSE_LIMIT):
    """Block ``q`` of ``H~_jm,1:M^{-1} H~_jn,p`` as a diagonal operator."""
    if chan.spec.M < 2:
        raise SpecError("assemble_T_multi needs M >= 2")
    diags, residuals = multi_blocks(chan, m, n, p, j, dense_limit)
    return AlignmentOperator((m, n, p, q, j), diags[q - 1], residuals[q - 1])


def apply_channel(chan, j, k, V, p=None):
    """Receive-side image of beams ``V`` (``tau x c``) sent from transmitter ``k``.

    Single antenna: ``H~_jk V``.  Multi antenna: ``H~_jk,p V`` of shape
    ``(M tau, c)``.
    """
    if p is None:
        return chan.scalar(j, k)[:, None] * V
    h = chan.column(j, k, p)
    return np.vstack([h[:, r, None] * V for r in range(chan.spec.M)])
