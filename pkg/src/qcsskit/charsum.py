"""Brute-force character sums over whole fields and Weil-bound audits.

Every sum walks the full field: nonzero z in antilog order g^0, g^1, ...,
then z = 0.  Terms are tallied as exact exponent counts and converted to a
complex number once, so results are reproducible to the last bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .characters import MultiplicativeCharacter, ZERO, root_table
from .errors import InvalidParams
from .field import FieldSpec


@dataclass(frozen=True)
class PolynomialOverField:
    """Polynomial with field-element coefficients (integer codes), constant first."""

    spec: FieldSpec
    coeffs: tuple

    def __post_init__(self):
        c = [int(v) for v in self.coeffs]
        self.spec.check(c)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c) if c else (0,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    def __call__(self, z):
        F = self.spec
        z = np.asarray(z, dtype=np.int64)
        acc = np.zeros_like(z)
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, z), np.full_like(z, c))
        return acc

    def __mul__(self, other: PolynomialOverField) -> PolynomialOverField:
        F = self.spec
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = F.add(out[i + j], F.mul(a, b))
        return PolynomialOverField(F, tuple(out))

    def __pow__(self, e: int) -> PolynomialOverField:
        result = PolynomialOverField(self.spec, (1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    @classmethod
    def monomial(cls, spec, coef, degree):
        return cls(spec, (0,) * degree + (coef,))

    @classmethod
    def linear(cls, spec, slope, const):
        """slope * z + const."""
        return cls(spec, (const, slope))

    @classmethod
    def from_roots(cls, spec, roots, lead=1):
        poly = cls(spec, (lead,))
        for r in roots:
            poly = poly * cls(spec, (spec.neg(r), 1))
        return poly


def field_order(spec: FieldSpec) -> np.ndarray:
    """All field elements in summation order: g^0, ..., g^{q-2}, then 0."""
    return np.concatenate([spec.antilog_table, [0]])


def _sum_exponents(exps, A):
    counts = np.bincount(np.asarray(exps, dtype=np.int64).ravel(), minlength=A)
    return complex(counts @ root_table(A))


def additive_charsum(spec: FieldSpec, a: int, h: PolynomialOverField) -> complex:
    """sum over z in F of chi_a(h(z)); a = 0 gives the trivial character."""
    z = field_order(spec)
    return _sum_exponents(spec.trace(spec.mul(a, h(z))), spec.p)


def _as_psi(spec, psi):
    if isinstance(psi, MultiplicativeCharacter):
        return psi
    return MultiplicativeCharacter(spec, int(psi), at_zero=ZERO)


def mixed_charsum(
    spec: FieldSpec,
    psi,
    r: int,
    f: PolynomialOverField,
    a: int = 0,
    h: PolynomialOverField | None = None,
) -> complex:
    """sum over z of psi^r(f(z)) * chi_a(h(z)), with psi(0) = 0.

    ``psi`` is a MultiplicativeCharacter or an order Delta.  Omitting ``h``
    (or a = 0) gives a pure multiplicative sum.
    """
    psi = _as_psi(spec, psi)
    D = psi.delta
    if not 1 <= r <= D - 1:
        raise InvalidParams(f"power r={r} outside [1, {D - 1}]")
    z = field_order(spec)
    fz = f(z)
    live = fz != 0
    if psi.at_zero != ZERO:
        raise InvalidParams("mixed sums use the psi(0) = 0 convention")
    mult = (r * psi.exponent_array(fz[live])) % D
    if h is None or a == 0:
        return _sum_exponents(mult, D)
    add = spec.trace(spec.mul(a, h(z[live])))
    A = D * spec.p // math.gcd(D, spec.p)
    return _sum_exponents((mult * (A // D) + add * (A // spec.p)) % A, A)


def gauss_sum(spec: FieldSpec, psi, a: int = 1) -> complex:
    """sum over nonzero y of psi(y) * chi_a(y)."""
    if not isinstance(psi, MultiplicativeCharacter) and int(psi) <= 1:
        raise InvalidParams("Gauss sums need a non-trivial multiplicative character")
    if a == 0:
        raise InvalidParams("Gauss sums need a non-trivial additive character")
    z = PolynomialOverField(spec, (0, 1))
    return mixed_charsum(spec, psi, 1, z, a, z)


@dataclass
class AuditReport:
    field: dict
    kind: str
    trials: int
    max_ratio: float
    attaining_polynomial: list
    violations: int = 0

    def to_dict(self):
        return {
            "field": self.field,
            "kind": self.kind,
            "trials": self.trials,
            "max_ratio": self.max_ratio,
            "attaining_polynomial": self.attaining_polynomial,
            "violations": self.violations,
        }


def _random_poly(spec, rng, degree):
    coeffs = list(rng.integers(0, spec.q, size=degree + 1))
    coeffs[-1] = int(rng.integers(1, spec.q))
    return PolynomialOverField(spec, tuple(coeffs))


def _ratio(value, bound):
    if bound == 0:
        return 0.0 if abs(value) <= 1e-6 else math.inf
    return abs(value) / bound


def weil_audit(
    spec: FieldSpec,
    trials: int,
    degree: int = 3,
    kind: str = "additive",
    delta: int | None = None,
    rng=None,
    seed: int = 0,
) -> AuditReport:
    """Random checks of the additive or mixed Weil-type bounds.

    additive: h of exact degree d with gcd(d, q) = 1, bound (d - 1) sqrt(q).
    mixed: f a product of distinct linear factors (square-free, so never a
    Delta-th power up to a constant), h random of degree ``degree``, psi of
    order ``delta`` (default: smallest divisor of q - 1 above 1), bound
    (deg h + #zeros(f) - 1) sqrt(q).
    """
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    rng = rng if rng is not None else np.random.default_rng(seed)
    sq = math.sqrt(spec.q)
    worst, worst_poly, bad = 0.0, [], 0
    if kind == "additive":
        if degree < 1 or math.gcd(degree, spec.q) != 1:
            raise InvalidParams(f"degree {degree} must be >= 1 and coprime to q = {spec.q}")
        a = 1
        for _ in range(trials):
            h = _random_poly(spec, rng, degree)
            ratio = _ratio(additive_charsum(spec, a, h), (h.degree - 1) * sq)
            if ratio > worst or not worst_poly:
                worst, worst_poly = ratio, list(h.coeffs)
            bad += ratio > 1 + 1e-9
    elif kind == "mixed":
        if delta is None:
            delta = min(d for d in range(2, spec.q) if (spec.q - 1) % d == 0)
        psi = MultiplicativeCharacter(spec, delta, at_zero=ZERO)
        for _ in range(trials):
            nroots = int(rng.integers(1, 4))
            roots = rng.choice(spec.q, size=nroots, replace=False)
            f = PolynomialOverField.from_roots(spec, roots, lead=int(rng.integers(1, spec.q)))
            h = _random_poly(spec, rng, degree)
            r = int(rng.integers(1, delta))
            value = mixed_charsum(spec, psi, r, f, 1, h)
            ratio = _ratio(value, (max(h.degree, 0) + nroots - 1) * sq)
            if ratio > worst or not worst_poly:
                worst, worst_poly = ratio, {"f": list(f.coeffs), "h": list(h.coeffs), "r": r}
            bad += ratio > 1 + 1e-9
    else:
        raise InvalidParams(f"unknown audit kind {kind!r}")
    return AuditReport(spec.to_dict(), kind, trials, worst, worst_poly, bad)
