"""Additive and multiplicative characters carried as exact unit-root exponents.

A value ``exp(2*pi*i*e/A)`` is stored as the pair ``(e, A)``; conversion to
complex happens only when correlations are accumulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidParams, NotCoprime
from .field import FieldSpec


@dataclass(frozen=True)
class UnitRootExponent:
    e: int
    A: int

    def __post_init__(self):
        if self.A < 1:
            raise InvalidParams("alphabet modulus must be positive")
        object.__setattr__(self, "e", self.e % self.A)

    def __mul__(self, other):
        if other.A != self.A:
            raise InvalidParams("cannot multiply roots of different moduli")
        return UnitRootExponent(self.e + other.e, self.A)

    def conj(self):
        return UnitRootExponent(-self.e, self.A)

    def __complex__(self):
        return complex(root_table(self.A)[self.e])


@lru_cache(maxsize=None)
def root_table(A: int) -> np.ndarray:
    """exp(2*pi*i*k/A) for k in range(A), with the exact values at quarter turns."""
    k = np.arange(A)
    table = np.exp(2j * np.pi * k / A)
    # Pin the points where sin/cos should be exactly 0 or +-1.
    for frac, val in ((0, 1), (1, 1j), (2, -1), (3, -1j)):
        if (frac * A) % 4 == 0:
            table[frac * A // 4] = val
    table.setflags(write=False)
    return table


def to_complex(e, A: int | None = None):
    """Complex value(s) of exponent(s) e modulo A; accepts a UnitRootExponent."""
    if isinstance(e, UnitRootExponent):
        return complex(e)
    out = root_table(A)[np.asarray(e) % A]
    return complex(out) if np.ndim(out) == 0 else out


class AdditiveCharacter:
    """x -> zeta_p ** Tr(a * x)."""

    def __init__(self, spec: FieldSpec, a: int = 1):
        spec.check(a)
        self.spec = spec
        self.a = int(a)

    @property
    def modulus(self) -> int:
        return self.spec.p

    @property
    def trivial(self) -> bool:
        return self.a == 0

    def exponent(self, x):
        return self.spec.trace(self.spec.mul(self.a, x))

    def __call__(self, x):
        return to_complex(self.exponent(x), self.spec.p)


ZERO = "zero"
ONE = "one"


class MultiplicativeCharacter:
    """Order-``delta`` character with psi(g**k) = zeta_delta ** k.

    ``at_zero`` selects psi(0) = 0 (``"zero"``) or the extension psi(0) = 1
    (``"one"``).  Under the zero convention the exponent at 0 is reported as
    ``None``.
    """

    def __init__(self, spec: FieldSpec, delta: int, at_zero: str = ZERO):
        if delta <= 1 or spec.order % delta:
            raise InvalidParams(f"order {delta} must exceed 1 and divide q-1 = {spec.order}")
        if at_zero not in (ZERO, ONE):
            raise InvalidParams(f"unknown zero convention {at_zero!r}")
        self.spec = spec
        self.delta = delta
        self.at_zero = at_zero

    @property
    def index(self) -> int:
        return self.spec.order // self.delta

    def exponent(self, x):
        """Exponent mod delta; None (scalar) or -1 (array) marks psi(0) = 0."""
        e = self.exponent_array(x)
        if e.ndim == 0:
            e = int(e)
            return None if e < 0 else e
        return e

    def __call__(self, x, r: int = 1):
        """Complex value of psi**r at x."""
        e = self.exponent_array(x)
        vals = root_table(self.delta)[(r * np.where(e < 0, 0, e)) % self.delta]
        vals = np.where(e < 0, 0, vals)
        return complex(vals) if vals.ndim == 0 else vals

    def exponent_array(self, x):
        arr = np.asarray(x, dtype=np.int64)
        logs = self.spec.log_table[arr]
        return np.where(arr == 0, 0 if self.at_zero == ONE else -1, logs % self.delta)


def additive_exponent(chi: AdditiveCharacter, x) -> UnitRootExponent:
    return UnitRootExponent(int(chi.exponent(x)), chi.modulus)


def multiplicative_exponent(psi: MultiplicativeCharacter, x):
    """UnitRootExponent mod delta, or None when psi(0) = 0."""
    e = psi.exponent(int(x))
    return None if e is None else UnitRootExponent(e, psi.delta)


def combine_exponents(a, b, delta: int | None = None, p: int | None = None):
    """Merge a zeta_delta exponent and a zeta_p exponent into one mod delta*p.

    Uses zeta_delta = zeta_{delta p}**p and zeta_p = zeta_{delta p}**delta.
    Works elementwise on arrays when ``delta`` and ``p`` are given.
    """
    if isinstance(a, UnitRootExponent):
        delta, a = a.A, a.e
    if isinstance(b, UnitRootExponent):
        p, b = b.A, b.e
    if math.gcd(delta, p) != 1:
        raise NotCoprime(f"gcd({delta}, {p}) != 1")
    out = (np.asarray(a) * p + np.asarray(b) * delta) % (delta * p)
    if out.ndim == 0:
        return UnitRootExponent(int(out), delta * p)
    return out
