"""The four finite-field QCSS families and their exponent-matrix file format.

Variants:

``cubic``      S^{alpha,beta,eta}, entries chi(alpha g^{3y} + beta g^{2y} + eta g^y)
``quadratic``  the alpha = 0 subfamily of ``cubic``
``mixed``      S^{r;eta,lambda}, entries psi1^r(g^y + eta) * chi(lambda g^y)
``mixed0``     the lambda = 0 subfamily of ``mixed``

Here y = k*N + t for row k and column t, N = (p^{2n} - 1)/Q, and eta runs
over the order-Q subgroup H_Q = {g^{N j}}.  Matrices are generated lazily from
their index; materializing a whole family is explicit and capped.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .characters import MultiplicativeCharacter, ONE, combine_exponents, root_table
from .correlation import QcssFamily, SequenceMatrix
from .errors import (
    CharacteristicTooSmall,
    FamilyTooLarge,
    IndexOutOfRange,
    InvalidDivisor,
    InvalidParams,
    ParseError,
)
from .field import FieldSpec, build_field, divisors, is_prime

VARIANTS = ("cubic", "quadratic", "mixed", "mixed0")
ADDITIVE = ("cubic", "quadratic")
MIXED = ("mixed", "mixed0")
DEFAULT_FAMILY_CAP = 10**4


class Expected(NamedTuple):
    M: int
    K: int
    N: int
    delta_bound: int
    A: int


class AdditiveIndex(NamedTuple):
    alpha: int
    beta: int
    eta: int

    def canonical(self) -> str:
        return f"{self.alpha},{self.beta},{self.eta}"


class MixedIndex(NamedTuple):
    r: int
    eta: int
    lam: int

    def canonical(self) -> str:
        return f"{self.r},{self.eta},{self.lam}"


@dataclass(frozen=True)
class ConstructionParams:
    """Parameters of one family; ``field`` is GF(p^{2n}) and ``a`` the chi multiplier."""

    variant: str
    p: int
    n: int
    Q: int
    field: FieldSpec
    delta: int | None = None
    a: int = 1

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def K(self) -> int:
        return self.Q

    @property
    def N(self) -> int:
        return (self.q - 1) // self.Q

    @property
    def additive(self) -> bool:
        return self.variant in ADDITIVE

    def expected(self) -> Expected:
        return expected_parameters(self)

    @property
    def M(self) -> int:
        return expected_parameters(self).M

    def subgroup(self) -> np.ndarray:
        """H_Q in the order j = 0..Q-1."""
        return self.field.gpow(self.N * np.arange(self.Q))

    def eta_index(self, eta: int) -> int:
        """j with eta = g^{N j}; raises if eta is not in H_Q."""
        if eta == 0:
            raise IndexOutOfRange("eta = 0 is not in H_Q")
        k = self.field.log(eta)
        if k % self.N:
            raise IndexOutOfRange(f"element {eta} is not in H_Q")
        return k // self.N

    def header_fields(self) -> str:
        s = f"construction={self.variant} p={self.p} n={self.n} Q={self.Q}"
        if self.variant in MIXED:
            s += f" Delta={self.delta}"
        return s


def make_params(
    variant: str,
    p: int,
    n: int,
    Q: int,
    delta: int | None = None,
    poly=None,
    g=None,
    a: int = 1,
    field: FieldSpec | None = None,
) -> ConstructionParams:
    """Validate parameters and build GF(p^{2n}) if not supplied."""
    if n < 1:
        raise InvalidParams("n must be >= 1")
    _check_shape(variant, p, n, Q, delta)
    if field is None:
        field = build_field(p, 2 * n, poly=poly, g=g)
    elif (field.p, field.m) != (p, 2 * n):
        raise InvalidParams("field does not match (p, 2n)")
    params = ConstructionParams(variant, p, n, Q, field, delta, int(a))
    _validate(params)
    return params


def _check_shape(variant, p, n, Q, delta):
    if variant not in VARIANTS:
        raise InvalidParams(f"unknown construction {variant!r}; expected one of {VARIANTS}")
    q1 = p ** (2 * n) - 1
    if Q <= 1 or Q >= q1 or q1 % Q:
        raise InvalidDivisor(f"Q={Q} must divide {q1} with 1 < Q < {q1}")
    if variant == "cubic" and p < 5:
        raise CharacteristicTooSmall("the cubic construction needs p >= 5")
    if variant == "quadratic" and p < 3:
        raise CharacteristicTooSmall("the quadratic construction needs p >= 3")
    if variant in MIXED:
        if delta is None or delta <= 1 or q1 % delta:
            raise InvalidDivisor(f"Delta={delta} must divide {q1} and exceed 1")
    elif delta is not None:
        raise InvalidParams("Delta only applies to the mixed constructions")


def _validate(params: ConstructionParams):
    _check_shape(params.variant, params.p, params.n, params.Q, params.delta)
    if params.variant != "mixed0" and params.a == 0:
        raise InvalidParams("the additive character multiplier must be nonzero")
    params.field.check(params.a)


def family_shape(variant: str, p: int, n: int, Q: int, delta: int | None = None) -> Expected:
    """(M, K, N, correlation bound, alphabet size) promised for a family.

    Needs no field tables, so it is cheap enough for large parameter grids.
    """
    _check_shape(variant, p, n, Q, delta)
    q = p ** (2 * n)
    K, N = Q, (q - 1) // Q
    pn = p**n
    if variant == "cubic":
        return Expected(q * q * Q, K, N, 2 * pn + 1, p)
    if variant == "quadratic":
        return Expected(q * Q, K, N, pn + 1, p)
    if variant == "mixed":
        return Expected((delta - 1) * Q * q, K, N, 2 * pn + 3, delta * p)
    return Expected((delta - 1) * Q, K, N, pn + 3, delta)


def expected_parameters(params: ConstructionParams) -> Expected:
    _validate(params)
    return family_shape(params.variant, params.p, params.n, params.Q, params.delta)


# --- indexing ----------------------------------------------------------------


def _ranges(params):
    """Radix of each index coordinate, outermost first."""
    q, Q = params.q, params.Q
    v = params.variant
    if v == "cubic":
        return (q, q, Q)
    if v == "quadratic":
        return (1, q, Q)
    if v == "mixed":
        return (params.delta - 1, Q, q)
    return (params.delta - 1, Q, 1)


def index_at(params: ConstructionParams, i: int):
    """The i-th index in enumeration order."""
    M = expected_parameters(params).M
    if not 0 <= i < M:
        raise IndexOutOfRange(f"position {i} outside [0, {M})")
    r0, r1, r2 = _ranges(params)
    c0, rest = divmod(i, r1 * r2)
    c1, c2 = divmod(rest, r2)
    H = params.subgroup()
    if params.additive:
        return AdditiveIndex(c0, c1, int(H[c2]))
    return MixedIndex(c0 + 1, int(H[c1]), c2)


def position_of(params: ConstructionParams, idx) -> int:
    """Inverse of :func:`index_at`."""
    idx = check_index(params, idx)
    r0, r1, r2 = _ranges(params)
    if params.additive:
        c = (idx.alpha, idx.beta, params.eta_index(idx.eta))
    else:
        c = (idx.r - 1, params.eta_index(idx.eta), idx.lam)
    return (c[0] * r1 + c[1]) * r2 + c[2]


def enumerate_indices(params: ConstructionParams) -> Iterator:
    """Lazily yield every index in the family's deterministic order."""
    H = [int(h) for h in params.subgroup()]
    q = params.q
    v = params.variant
    if v in ADDITIVE:
        alphas = range(q) if v == "cubic" else (0,)
        for alpha in alphas:
            for beta in range(q):
                for eta in H:
                    yield AdditiveIndex(alpha, beta, eta)
    else:
        lams = range(q) if v == "mixed" else (0,)
        for r in range(1, params.delta):
            for eta in H:
                for lam in lams:
                    yield MixedIndex(r, eta, lam)


def check_index(params: ConstructionParams, idx):
    q = params.q
    if params.additive:
        if not isinstance(idx, AdditiveIndex):
            idx = AdditiveIndex(*idx)
        if not (0 <= idx.alpha < q and 0 <= idx.beta < q):
            raise IndexOutOfRange(f"{idx} has an element outside the field")
        if params.variant == "quadratic" and idx.alpha != 0:
            raise IndexOutOfRange("the quadratic family has alpha = 0")
    else:
        if not isinstance(idx, MixedIndex):
            idx = MixedIndex(*idx)
        if not 1 <= idx.r <= params.delta - 1:
            raise IndexOutOfRange(f"r={idx.r} outside [1, {params.delta - 1}]")
        if not 0 <= idx.lam < q:
            raise IndexOutOfRange(f"lambda={idx.lam} outside the field")
        if params.variant == "mixed0" and idx.lam != 0:
            raise IndexOutOfRange("the lambda-zero family has lambda = 0")
    params.eta_index(idx.eta)
    return idx


# --- generation --------------------------------------------------------------


def _grid(params):
    """Exponents y = k*N + t arranged as a K x N array."""
    return np.arange(params.q - 1, dtype=np.int64).reshape(params.K, params.N)


def build_matrix(params: ConstructionParams, idx) -> SequenceMatrix:
    idx = check_index(params, idx)
    F = params.field
    y = _grid(params)
    A = expected_parameters(params).A
    label = f"{params.variant}:{idx.canonical()}"
    if params.additive:
        arg = F.add(
            F.add(F.mul(idx.alpha, F.gpow(3 * y)), F.mul(idx.beta, F.gpow(2 * y))),
            F.mul(idx.eta, F.gpow(y)),
        )
        return SequenceMatrix(F.trace(F.mul(params.a, arg)), A, label)

    gy = F.gpow(y)
    psi1 = MultiplicativeCharacter(F, params.delta, at_zero=ONE)
    mult = (idx.r * psi1.exponent_array(F.add(gy, idx.eta))) % params.delta
    if params.variant == "mixed0":
        return SequenceMatrix(mult, A, label)
    add = F.trace(F.mul(F.mul(params.a, idx.lam), gy))
    return SequenceMatrix(combine_exponents(mult, add, params.delta, params.p), A, label)


def iter_family(params: ConstructionParams):
    for idx in enumerate_indices(params):
        yield idx, build_matrix(params, idx)


def build_family(params: ConstructionParams, cap: int = DEFAULT_FAMILY_CAP) -> QcssFamily:
    exp = expected_parameters(params)
    if exp.M > cap:
        raise FamilyTooLarge(exp.M, cap)
    mats = [S for _, S in iter_family(params)]
    return QcssFamily(mats, M=exp.M, K=exp.K, N=exp.N)


def correlation_via_charsum(params: ConstructionParams, idx1, idx2, tau: int) -> complex:
    """Correlation of two members evaluated as a character sum over the field.

    Additive families: sum over all z of chi(c3 z^3 + c2 z^2 + c1 z) minus 1,
    with c3 = alpha1 - alpha2 g^{3 tau}, c2 = beta1 - beta2 g^{2 tau},
    c1 = eta1 - eta2 g^tau.

    Mixed families: sum over nonzero z of
    psi1^{r1}(z + eta1) * psi1^{Delta - r2}(g^tau z + eta2) * chi((lam1 - lam2 g^tau) z).
    """
    idx1 = check_index(params, idx1)
    idx2 = check_index(params, idx2)
    N = params.N
    if not 0 <= tau < N:
        raise IndexOutOfRange(f"shift {tau} outside [0, {N})")
    F = params.field
    p = params.p
    gt = F.gpow(tau)

    if params.additive:
        c3 = F.sub(idx1.alpha, F.mul(idx2.alpha, F.gpow(3 * tau)))
        c2 = F.sub(idx1.beta, F.mul(idx2.beta, F.gpow(2 * tau)))
        c1 = F.sub(idx1.eta, F.mul(idx2.eta, gt))
        z = np.arange(F.q, dtype=np.int64)
        val = F.add(F.add(F.mul(c3, F.pow(z, 3)), F.mul(c2, F.pow(z, 2))), F.mul(c1, z))
        e = F.trace(F.mul(params.a, val))
        counts = np.bincount(e, minlength=p)
        return complex(counts @ root_table(p)) - 1

    D = params.delta
    z = np.arange(1, F.q, dtype=np.int64)
    psi1 = MultiplicativeCharacter(F, D, at_zero=ONE)
    e1 = psi1.exponent_array(F.add(z, idx1.eta)) * idx1.r
    e2 = psi1.exponent_array(F.add(F.mul(gt, z), idx2.eta)) * (D - idx2.r)
    mult = (e1 + e2) % D
    c = F.sub(idx1.lam, F.mul(idx2.lam, gt))
    add = F.trace(F.mul(F.mul(params.a, c), z))
    A = D * p
    comb = (mult * p + add * D) % A
    counts = np.bincount(comb, minlength=A)
    return complex(counts @ root_table(A))


# --- exponent-matrix text format ----------------------------------------------

_HEADER = re.compile(
    r"^# qcss v1 construction=(?P<construction>\w+) p=(?P<p>\d+) n=(?P<n>\d+) Q=(?P<Q>\d+)"
    r"(?: Delta=(?P<Delta>\d+))? A=(?P<A>\d+) index=(?P<index>\S+)$"
)


def format_matrix(params: ConstructionParams, idx, S: SequenceMatrix | None = None) -> str:
    idx = check_index(params, idx)
    if S is None:
        S = build_matrix(params, idx)
    lines = [f"# qcss v1 {params.header_fields()} A={S.A} index={idx.canonical()}"]
    lines += [" ".join(str(int(v)) for v in row) for row in S.exps]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str):
    """Return (header dict, SequenceMatrix) from the exponent-matrix format."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty matrix file")
    m = _HEADER.match(lines[0].strip())
    if not m:
        raise ParseError(f"bad header line: {lines[0]!r}")
    header = {k: v for k, v in m.groupdict().items() if v is not None}
    for k in ("p", "n", "Q", "Delta", "A"):
        if k in header:
            header[k] = int(header[k])
    header["index"] = tuple(int(v) for v in header["index"].split(","))
    rows = [[int(v) for v in ln.split()] for ln in lines[1:]]
    if len({len(r) for r in rows}) > 1:
        raise ParseError("ragged matrix body")
    return header, SequenceMatrix(np.array(rows, dtype=np.int64), header["A"], m["index"])


# --- count identities ------------------------------------------------------------


def scaling_law_value(variant: str, K: int, N: int, delta: int | None = None) -> Fraction:
    """Set size given by the scaling-law column in terms of (K, N), exactly."""
    q1 = K * N
    if variant == "quadratic":
        return Fraction(K * K * N + K)
    if variant == "cubic":
        return Fraction(K**3 * N**2 + 2 * K * K * N + K)
    if variant == "mixed":
        return Fraction((K**3 * N**2 + K * K * N) * (delta - 1), q1)
    if variant == "mixed0":
        return Fraction(K * K * N * (delta - 1), q1)
    raise InvalidParams(f"unknown construction {variant!r}")


def admissible_grid(variant: str, max_q: int, deltas=None):
    """Every valid (p, n, Q[, Delta]) with p^{2n} <= max_q, for count checks."""
    out = []
    for p in range(2, math.isqrt(max_q) + 1):
        if not is_prime(p):
            continue
        n = 1
        while p ** (2 * n) <= max_q:
            q1 = p ** (2 * n) - 1
            for Q in divisors(q1):
                if not 1 < Q < q1:
                    continue
                if variant == "cubic" and p < 5:
                    continue
                if variant == "quadratic" and p < 3:
                    continue
                if variant in MIXED:
                    for d in deltas or divisors(q1):
                        if d > 1 and q1 % d == 0:
                            out.append((p, n, Q, d))
                else:
                    out.append((p, n, Q, None))
            n += 1
    return out
