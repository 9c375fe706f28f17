"""QCSS data model and exhaustive periodic-correlation scans."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .characters import root_table
from .errors import (
    BudgetExceeded,
    DegenerateOptimum,
    InvalidParams,
    LengthMismatch,
    ShapeMismatch,
)

DEFAULT_WORK_BUDGET = 10**10
TOL = 1e-6
# Ties closer than this are treated as equal when picking the argmax.
_TIE = 1e-9


@dataclass(frozen=True, eq=False)
class SequenceMatrix:
    """K x N matrix of unit-root exponents modulo A."""

    exps: np.ndarray
    A: int
    label: str = ""

    def __post_init__(self):
        exps = np.asarray(self.exps, dtype=np.int64)
        if exps.ndim != 2:
            raise ShapeMismatch("sequence matrix must be two-dimensional")
        if exps.size and (exps.min() < 0 or exps.max() >= self.A):
            raise ValueError(f"exponents must lie in [0, {self.A})")
        exps.setflags(write=False)
        object.__setattr__(self, "exps", exps)

    @property
    def K(self) -> int:
        return self.exps.shape[0]

    @property
    def N(self) -> int:
        return self.exps.shape[1]

    def values(self) -> np.ndarray:
        return root_table(self.A)[self.exps]

    def energy(self) -> float:
        return float(np.sum(np.abs(self.values()) ** 2))

    def __eq__(self, other):
        return (
            isinstance(other, SequenceMatrix)
            and self.A == other.A
            and np.array_equal(self.exps, other.exps)
        )


class QcssFamily:
    """An ordered set of M sequence matrices sharing (K, N, A)."""

    def __init__(self, matrices, M=None, K=None, N=None):
        matrices = list(matrices)
        if not matrices:
            raise InvalidParams("a family needs at least one matrix")
        first = matrices[0]
        for S in matrices:
            if (S.K, S.N, S.A) != (first.K, first.N, first.A):
                raise ShapeMismatch("all family members must share K, N and alphabet")
        if M is not None and M != len(matrices):
            raise InvalidParams(f"declared M={M} but got {len(matrices)} matrices")
        if (K is not None and K != first.K) or (N is not None and N != first.N):
            raise ShapeMismatch("declared (K, N) disagree with the matrices")
        self.matrices = matrices
        self.A = first.A

    @property
    def M(self) -> int:
        return len(self.matrices)

    @property
    def K(self) -> int:
        return self.matrices[0].K

    @property
    def N(self) -> int:
        return self.matrices[0].N

    def __len__(self):
        return self.M

    def __getitem__(self, i):
        return self.matrices[i]

    def __iter__(self):
        return iter(self.matrices)

    def exponent_stack(self) -> np.ndarray:
        return np.stack([S.exps for S in self.matrices])

    def values(self) -> np.ndarray:
        """Complex array of shape (M, K, N)."""
        return root_table(self.A)[self.exponent_stack()]


def _row_values(a, A):
    if isinstance(a, SequenceMatrix):
        return a.values()
    arr = np.asarray(a)
    if A is not None and np.issubdtype(arr.dtype, np.integer):
        return root_table(A)[arr % A]
    return arr.astype(complex)


def periodic_corr(a, b, tau: int, A: int | None = None) -> complex:
    """sum_t a(t) * conj(b((t + tau) mod N)).

    Rows are either complex arrays or integer exponent arrays modulo ``A``.
    """
    a = _row_values(a, A)
    b = _row_values(b, A)
    if a.shape != b.shape:
        raise LengthMismatch(f"length {a.shape} vs {b.shape}")
    N = a.shape[-1]
    return complex(np.sum(a * np.conj(np.roll(b, -(tau % N), axis=-1))))


ROWWISE = "rowwise"
CONCATENATED = "concatenated"
SHIFT_MODES = (ROWWISE, CONCATENATED)


def _shift(X, tau, mode):
    """Cyclic shift by tau along the last two axes (K, N) of X."""
    if mode == ROWWISE:
        return np.roll(X, -tau, axis=-1)
    if mode == CONCATENATED:
        shape = X.shape
        flat = X.reshape(shape[:-2] + (shape[-2] * shape[-1],))
        return np.roll(flat, -tau, axis=-1).reshape(shape)
    raise ValueError(f"unknown shift mode {mode!r}; expected one of {SHIFT_MODES}")


def matrix_corr(S1: SequenceMatrix, S2: SequenceMatrix, tau: int, mode: str = ROWWISE) -> complex:
    """Sum over rows of the periodic correlation at shift tau.

    ``mode="concatenated"`` instead shifts the row-major concatenation of all
    K rows as one sequence of length KN (row k's tail runs into row k+1).
    The finite-field correlation identities hold exactly for that shift,
    not for the row-wise one; it is provided for diagnostics.
    """
    if S1.exps.shape != S2.exps.shape or S1.A != S2.A:
        raise ShapeMismatch("matrices differ in shape or alphabet")
    if not 0 <= tau < S1.N:
        raise ValueError(f"shift {tau} outside [0, {S1.N})")
    a = S1.values()
    b = _shift(S2.values(), tau, mode)
    return complex(np.sum(a * np.conj(b)))


def delta_opt(M: int, K: int, N: int) -> float:
    """Lower bound K N sqrt((M/K - 1) / (M N - 1)) on delta_max."""
    if K < 1 or N < 1 or M < K or M * N <= 1:
        raise InvalidParams(f"need M >= K >= 1, N >= 1, MN > 1; got {(M, K, N)}")
    return K * N * math.sqrt((M / K - 1) / (M * N - 1))


def tightness_rho(dmax: float, M: int, K: int, N: int) -> float:
    opt = delta_opt(M, K, N)
    if opt == 0:
        raise DegenerateOptimum(f"delta_opt vanishes for M=K={M}")
    return dmax / opt


@dataclass
class CorrelationProfile:
    M: int
    K: int
    N: int
    A: int
    delta_a: float
    delta_c: float
    delta_max: float
    delta_opt: float | None
    rho: float | None
    argmax: tuple
    cross_defined: bool = True
    mode: str = ROWWISE
    theorem_bound: float | None = None
    bound_satisfied: bool | None = None
    extra: dict = field(default_factory=dict)

    def check_bound(self, bound: float, tol: float = TOL) -> bool:
        self.theorem_bound = bound
        self.bound_satisfied = bool(self.delta_max <= bound + tol)
        return self.bound_satisfied

    def to_dict(self) -> dict:
        d = {
            "M": self.M,
            "K": self.K,
            "N": self.N,
            "A": self.A,
            "delta_a": self.delta_a,
            "delta_c": self.delta_c,
            "delta_max": self.delta_max,
            "delta_opt": self.delta_opt,
            "rho": self.rho,
            "argmax": list(self.argmax),
            "theorem_bound": self.theorem_bound,
            "bound_satisfied": self.bound_satisfied,
        }
        if not self.cross_defined:
            d["cross_defined"] = False
        if self.mode != ROWWISE:
            d["shift_mode"] = self.mode
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def work_estimate(M: int, K: int, N: int) -> int:
    return M * M * N * K * N


class _Best:
    """Running maximum with lexicographically smallest (m1, m2, tau) key."""

    def __init__(self, M, N):
        self.M, self.N = M, N
        self.value = -1.0
        self.key = None

    def offer(self, mags, m1, m2, tau):
        """mags, m1, m2, tau: flat arrays of candidate magnitudes and positions."""
        if mags.size == 0:
            return
        top = float(mags.max())
        if top < self.value - _TIE:
            return
        level = max(top, self.value)
        sel = mags >= level - _TIE
        keys = (m1[sel] * self.M + m2[sel]) * self.N + tau[sel]
        key = int(keys.min())
        if top > self.value + _TIE or self.key is None:
            self.key = key
        else:
            self.key = min(self.key, key)
        self.value = level

    def triple(self):
        if self.key is None:
            return None
        mm, tau = divmod(self.key, self.N)
        m1, m2 = divmod(mm, self.M)
        return (m1, m2, tau)

    def merge(self, other):
        if other.key is None:
            return
        if self.key is None or other.value > self.value + _TIE:
            self.value, self.key = other.value, other.key
        elif abs(other.value - self.value) <= _TIE:
            self.key = min(self.key, other.key)
            self.value = max(self.value, other.value)


def _scan_auto(X, M, K, N, mode):
    best = _Best(M, N)
    m = np.arange(M)
    for tau in range(1, N):
        shifted = _shift(X, tau, mode)
        vals = np.einsum("mkt,mkt->m", X, np.conj(shifted))
        best.offer(np.abs(vals), m, m, np.full(M, tau))
    return best


def _scan_cross_block(Xf, shifted_conj, i0, i1, M, N, halve):
    """Pairs m1 in [i0, i1) against m2 > m1 (halve) or every m2 != m1."""
    best = _Best(M, N)
    rows = Xf[i0:i1]
    c0 = i0 if halve else 0
    m1, m2 = np.meshgrid(np.arange(i0, i1), np.arange(c0, M), indexing="ij")
    keep = ((m2 > m1) if halve else (m2 != m1)).ravel()
    m1, m2 = m1.ravel()[keep], m2.ravel()[keep]
    for tau in range(N):
        C = rows @ shifted_conj[tau][c0:].T
        best.offer(np.abs(C.ravel())[keep], m1, m2, np.full(m1.size, tau))
    return best


def correlation_profile(
    fam: QcssFamily,
    budget: float = DEFAULT_WORK_BUDGET,
    workers: int = 1,
    block_rows: int | None = None,
    mode: str = ROWWISE,
) -> CorrelationProfile:
    """Exhaustive delta_a, delta_c and delta_max of a family.

    For the row-wise shift, cross-correlations are scanned only for m1 < m2:
    by conjugate symmetry |R_{m2,m1}(tau)| = |R_{m1,m2}(N - tau)|, and the
    lexicographically smallest attaining triple always has m1 < m2.  The
    concatenated shift has no such pairing within 0 <= tau < N, so every
    ordered pair is scanned.  The reported maxima are
    recomputed at their argmax with the fixed-order row sum, so results do
    not depend on the worker count or block size.
    """
    M, K, N = fam.M, fam.K, fam.N
    est = work_estimate(M, K, N)
    if est > budget:
        raise BudgetExceeded(est, budget, "multiply-add")

    X = fam.values()
    auto = _scan_auto(X, M, K, N, mode)

    cross = _Best(M, N)
    if M > 1:
        halve = mode == ROWWISE
        Xf = X.reshape(M, K * N)
        shifted_conj = [np.conj(_shift(X, tau, mode)).reshape(M, K * N) for tau in range(N)]
        if block_rows is None:
            # keep each block's correlation matrix around 8 MB
            block_rows = max(1, min(M, (1 << 19) // max(1, M)))
        starts = list(range(0, M, block_rows))
        jobs = [(i0, min(M, i0 + block_rows)) for i0 in starts]
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                results = list(
                    pool.map(
                        lambda j: _scan_cross_block(Xf, shifted_conj, j[0], j[1], M, N, halve), jobs
                    )
                )
        else:
            results = [
                _scan_cross_block(Xf, shifted_conj, i0, i1, M, N, halve) for i0, i1 in jobs
            ]
        for r in results:
            cross.merge(r)

    def exact(triple):
        m1, m2, tau = triple
        return abs(matrix_corr(fam[m1], fam[m2], tau, mode))

    delta_a = exact(auto.triple()) if auto.key is not None else 0.0
    cross_defined = cross.key is not None
    delta_c = exact(cross.triple()) if cross_defined else 0.0

    if cross_defined and abs(delta_c - delta_a) <= _TIE and auto.key is not None:
        key_triple = min(auto.triple(), cross.triple())
    elif cross_defined and delta_c > delta_a:
        key_triple = cross.triple()
    else:
        key_triple = auto.triple() if auto.key is not None else (0, 0, 0)
    delta_max = max(delta_a, delta_c)

    try:
        opt = delta_opt(M, K, N)
    except InvalidParams:
        opt = None
    rho = delta_max / opt if opt else None

    return CorrelationProfile(
        M=M,
        K=K,
        N=N,
        A=fam.A,
        delta_a=delta_a,
        delta_c=delta_c,
        delta_max=delta_max,
        delta_opt=opt,
        rho=rho,
        argmax=tuple(int(v) for v in key_triple),
        cross_defined=cross_defined,
        mode=mode,
    )
