"""Induced codebooks, maximum inner products and Welch/Levenshtein bounds."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .correlation import QcssFamily, delta_opt
from .errors import BudgetExceeded, InvalidParams, TooFewVectors

DEFAULT_ENTRY_BUDGET = 10**8
DEFAULT_PAIR_BUDGET = 10**11
SQRT2 = math.sqrt(2)
GOLDEN = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True, eq=False)
class Codebook:
    vectors: np.ndarray
    provenance: str = "external"

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise InvalidParams("codebook must be a non-empty U x V array")
        norms = np.linalg.norm(v, axis=1)
        if np.any(np.abs(norms - 1) > 1e-9):
            raise InvalidParams("codebook vectors must have unit norm")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def U(self) -> int:
        return self.vectors.shape[0]

    @property
    def V(self) -> int:
        return self.vectors.shape[1]

    def subset(self, indices) -> Codebook:
        return Codebook(self.vectors[np.asarray(indices)], self.provenance + ":subset")


def induce_codebook(fam: QcssFamily, budget: int = DEFAULT_ENTRY_BUDGET) -> Codebook:
    """Vectors c_{m,tau}: every row of S^m cyclically shifted by tau, flattened, scaled.

    Vector m*N + tau holds c_{m,tau}, so <c_{m1,t1}, c_{m2,t2}> equals
    R_{S^{m1},S^{m2}}(t2 - t1) / (KN).
    """
    M, K, N = fam.M, fam.K, fam.N
    entries = M * N * K * N
    if entries > budget:
        raise BudgetExceeded(entries, budget, "codebook entry")
    X = fam.values()
    t = np.arange(N)
    cols = (t[None, :] + t[:, None]) % N  # cols[tau, j] = (j + tau) mod N
    shifted = X[:, :, cols]  # (M, K, tau, N)
    vecs = shifted.transpose(0, 2, 1, 3).reshape(M * N, K * N) / math.sqrt(K * N)
    return Codebook(vecs, "induced")


def i_max(cb: Codebook, budget: float = DEFAULT_PAIR_BUDGET, block_rows: int = 512) -> float:
    """max over i != j of |<c_i, c_j>|, scanning only i < j."""
    U, V = cb.U, cb.V
    if U < 2:
        raise TooFewVectors("need at least two vectors")
    work = U * U * V
    if work > budget:
        raise BudgetExceeded(work, budget, "inner-product")
    C = cb.vectors
    CH = np.conj(C)
    best = 0.0
    for i0 in range(0, U - 1, block_rows):
        i1 = min(U, i0 + block_rows)
        G = np.abs(C[i0:i1] @ CH[i0:].T)
        rows, cols = np.indices(G.shape)
        G[cols <= rows] = 0.0
        best = max(best, float(G.max()))
    return best


def welch_bound(U: int, V: int) -> float:
    if not (U >= V >= 1 and U >= 2):
        raise InvalidParams(f"Welch bound needs U >= V >= 1 and U >= 2; got {(U, V)}")
    return math.sqrt((U - V) / ((U - 1) * V))


@dataclass(frozen=True)
class LevenshteinBounds:
    real_flavor: float | None
    complex_flavor: float | None
    cubic: float | None


def levenshtein_bounds(U: int, V: int) -> LevenshteinBounds:
    """Each value is present only when its density precondition holds."""
    if not (V >= 1 and U > V):
        raise InvalidParams(f"Levenshtein bounds need U > V >= 1; got {(U, V)}")
    real = None
    if 2 * U > V * (V + 1):
        real = math.sqrt((3 * U - V * V - 2 * V) / ((V + 2) * (U - V)))
    cplx = None
    if U > V * V:
        cplx = math.sqrt((2 * U - V * V - V) / ((V + 1) * (U - V)))
    cubic = None
    if U == V**3:
        cubic = math.sqrt(
            (3 * (V + 1) + math.sqrt((5 * V + 1) * (V + 1))) / (2 * (V + 1) * (V + 2))
        )
    return LevenshteinBounds(real, cplx, cubic)


def monotonicity_check(cb: Codebook, subset_indices, tol: float = 1e-9) -> bool:
    idx = np.unique(np.asarray(subset_indices))
    if idx.size < 2:
        raise TooFewVectors("subset needs at least two vectors")
    return i_max(cb) >= i_max(cb.subset(idx)) - tol


def density_regime(U: int, V: int) -> str:
    if U <= V**2:
        return "sub-quadratic"
    if U <= V**3:
        return "quadratic"
    if U <= V**4:
        return "cubic"
    return "super-cubic"


@dataclass
class BoundReport:
    U: int
    V: int
    i_max: float
    welch: float | None
    lev_real: float | None
    lev_complex: float | None
    lev_cubic: float | None
    regime: str
    M: int | None = None
    K: int | None = None
    N: int | None = None
    A: int | None = None
    delta_max: float | None = None
    delta_opt: float | None = None
    rho: float | None = None
    rho_defined: bool = True
    ratio_quadratic: float | None = None
    ratio_cubic: float | None = None
    threshold_quadratic: float = SQRT2
    threshold_cubic: float = GOLDEN
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    CSV_COLUMNS = (
        "M", "K", "N", "A", "delta_max", "delta_opt", "rho", "U", "V", "i_max", "welch",
        "lev_complex", "lev_cubic", "ratio_quadratic", "ratio_cubic", "regime",
    )  # fmt: skip

    def csv_row(self, header: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(self.CSV_COLUMNS)
        d = self.to_dict()
        w.writerow(["" if d[c] is None else d[c] for c in self.CSV_COLUMNS])
        return buf.getvalue()


_DIAGNOSTIC_NOTE = (
    "diagnostic only: the scaling limits carry unquantified o(1) terms, so ratios "
    "against K^2 N and K^3 N^2 are reported without a pass/fail verdict"
)


def _lower_bounds(U, V):
    welch = welch_bound(U, V) if U >= V and U >= 2 else None
    lev = levenshtein_bounds(U, V) if U > V else LevenshteinBounds(None, None, None)
    return welch, lev


def scaling_report(M: int, K: int, N: int, delta_max: float, A: int | None = None) -> BoundReport:
    if M < 1 or K < 1 or N < 1 or M < K or delta_max < 0:
        raise InvalidParams(f"invalid QCSS parameters {(M, K, N, delta_max)}")
    U, V = M * N, K * N
    welch, lev = _lower_bounds(U, V)
    opt = delta_opt(M, K, N) if M * N > 1 else 0.0
    rho = delta_max / opt if opt > 0 else None
    return BoundReport(
        U=U,
        V=V,
        i_max=delta_max / (K * N),
        welch=welch,
        lev_real=lev.real_flavor,
        lev_complex=lev.complex_flavor,
        lev_cubic=lev.cubic,
        regime=density_regime(U, V),
        M=M,
        K=K,
        N=N,
        A=A,
        delta_max=delta_max,
        delta_opt=opt,
        rho=rho,
        rho_defined=rho is not None,
        ratio_quadratic=M / (K * K * N),
        ratio_cubic=M / (K**3 * N**2),
        note=_DIAGNOSTIC_NOTE,
    )


def codebook_report(cb: Codebook) -> BoundReport:
    """Bounds for an arbitrary codebook, using its measured i_max."""
    welch, lev = _lower_bounds(cb.U, cb.V)
    return BoundReport(
        U=cb.U,
        V=cb.V,
        i_max=i_max(cb),
        welch=welch,
        lev_real=lev.real_flavor,
        lev_complex=lev.complex_flavor,
        lev_cubic=lev.cubic,
        regime=density_regime(cb.U, cb.V),
    )
