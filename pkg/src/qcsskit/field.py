"""Arithmetic in GF(p^m) with elements encoded as integers.

An element with polynomial coefficients ``c[0] + c[1] x + ... + c[m-1] x^(m-1)``
is encoded as ``sum(c[i] * p**i)``.  That integer code is the canonical
ordering used for every "smallest" choice (default polynomial, default
primitive element).  Multiplication goes through log/antilog tables, addition
through the base-p digit expansion; every operation accepts numpy integer
arrays as well as plain ints.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    FieldTooLarge,
    InvalidElement,
    LogOfZero,
    NotPrime,
    NotPrimitive,
    ReduciblePolynomial,
)

DEFAULT_MAX_Q = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def euler_phi(n: int) -> int:
    result = n
    for r in prime_factors(n):
        result -= result // r
    return result


# --- polynomials over F_p, coefficient lists constant-first -----------------


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, b, p):
    """Remainder of a / b over F_p (b nonzero, trimmed)."""
    a = _trim(a)
    inv_lead = pow(b[-1], -1, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bi) % p
        a = _trim(a)
    return a


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _pmod(prod, f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def is_irreducible(poly, p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p.

    Degrees up to 4 use trial division by every monic polynomial of degree
    at most m/2; larger degrees use Rabin's test.
    """
    f = _trim([c % p for c in poly])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if m <= 4:
        for d in range(1, m // 2 + 1):
            for low in itertools.product(range(p), repeat=d):
                if not _pmod(f, list(low) + [1], p):
                    return False
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p**m, f, p), x, p):
        return False
    for r in prime_factors(m):
        h = _psub(_ppowmod(x, p ** (m // r), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


def _poly_code(poly, p):
    return sum(c * p**i for i, c in enumerate(poly))


def default_polynomial(p: int, m: int) -> list[int]:
    """Monic irreducible polynomial of degree m with the smallest integer code."""
    for low in range(p**m):
        coeffs = [(low // p**i) % p for i in range(m)] + [1]
        if is_irreducible(coeffs, p):
            return coeffs
    raise ReduciblePolynomial(f"no irreducible polynomial of degree {m} over F_{p}")


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """A fully tabulated finite field F_q, q = p**m."""

    p: int
    m: int
    poly: tuple
    g: int
    q: int
    digits: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)
    antilog_table: np.ndarray = field(repr=False)
    trace_table: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        """Size of the multiplicative group, q - 1."""
        return self.q - 1

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.m, self.poly, self.g) == (other.p, other.m, other.poly, other.g)
        )

    def __hash__(self):
        return hash((self.p, self.m, self.poly, self.g))

    # --- encoding ---------------------------------------------------------

    def element(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            raise InvalidElement(f"element has more than {self.m} coefficients")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def coeffs(self, x: int) -> list[int]:
        self.check(x)
        return [int(c) for c in self.digits[x]]

    def check(self, x):
        arr = np.asarray(x)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise InvalidElement(f"element code out of range [0, {self.q})")

    @property
    def x(self) -> int:
        """The residue class of the polynomial variable."""
        if self.m > 1:
            return self.p
        return (-self.poly[0]) % self.p

    # --- arithmetic, vectorized over numpy arrays -------------------------

    def _encode(self, dig):
        return (dig * self._weights).sum(axis=-1)

    @property
    def _weights(self):
        return self.p ** np.arange(self.m, dtype=np.int64)

    def add(self, a, b):
        out = self._encode((self.digits[a] + self.digits[b]) % self.p)
        return _scalar(out)

    def neg(self, a):
        return _scalar(self._encode((-self.digits[a]) % self.p))

    def sub(self, a, b):
        return _scalar(self._encode((self.digits[a] - self.digits[b]) % self.p))

    def scale(self, c: int, a):
        """Multiply by the prime-field scalar c."""
        return _scalar(self._encode((c * self.digits[a]) % self.p))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la = self.log_table[a]
        lb = self.log_table[b]
        out = self.antilog_table[(la + lb) % self.order]
        out = np.where((a == 0) | (b == 0), 0, out)
        return _scalar(out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return _scalar(self.antilog_table[(-self.log_table[a]) % self.order])

    def pow(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        e = np.asarray(e, dtype=np.int64)
        if np.any((a == 0) & (e < 0)):
            raise ZeroDivisionError("negative power of zero")
        out = self.antilog_table[(self.log_table[a] * e) % self.order]
        out = np.where(a == 0, np.where(e == 0, 1, 0), out)
        return _scalar(out)

    def gpow(self, k):
        """g**k for any integer k."""
        return _scalar(self.antilog_table[np.asarray(k, dtype=np.int64) % self.order])

    def log(self, x):
        x = np.asarray(x, dtype=np.int64)
        if np.any(x == 0):
            raise LogOfZero("discrete log of zero")
        return _scalar(self.log_table[x])

    def trace(self, x):
        """Absolute trace to F_p as a residue in [0, p)."""
        return _scalar(self.trace_table[np.asarray(x, dtype=np.int64)])

    def elements(self):
        return range(self.q)

    # --- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "poly": list(self.poly), "g": self.g}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> FieldSpec:
        return build_field(d["p"], d["m"], poly=d.get("poly"), g=d.get("g"))


def _scalar(out):
    out = np.asarray(out)
    if out.ndim == 0:
        return int(out)
    return out


def _elem_mul(a, b, poly, p, m):
    return (_pmulmod(a, b, poly, p) + [0] * m)[:m]


def _elem_pow(a, e, poly, p, m):
    return (_ppowmod(a, e, poly, p) + [0] * m)[:m]


def _is_generator(coeffs, poly, p, m, q):
    one = [1] + [0] * (m - 1)
    if not any(coeffs):
        return False
    for r in prime_factors(q - 1):
        if _elem_pow(coeffs, (q - 1) // r, poly, p, m) == one:
            return False
    return _elem_pow(coeffs, q - 1, poly, p, m) == one


def _code_to_coeffs(code, p, m):
    return [(code // p**i) % p for i in range(m)]


def build_field(p: int, m: int, poly=None, g=None, max_q: int = DEFAULT_MAX_Q) -> FieldSpec:
    """Construct and validate GF(p^m).

    ``poly`` is a constant-first coefficient list of length m+1 (monic).  ``g``
    is an integer code or coefficient list.  Omitted values default to the
    smallest valid choice by integer code.
    """
    if not is_prime(p):
        raise NotPrime(p)
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    q = p**m
    if q > max_q:
        raise FieldTooLarge(f"q = {q} exceeds cap {max_q}")

    if poly is None:
        poly = default_polynomial(p, m)
    else:
        poly = [int(c) % p for c in poly]
        if len(poly) != m + 1 or poly[-1] != 1:
            raise ReduciblePolynomial(f"polynomial must be monic of degree {m}: {poly}")
        if not is_irreducible(poly, p):
            raise ReduciblePolynomial(f"{poly} is reducible over F_{p}")

    if g is None:
        for code in range(1, q):
            if _is_generator(_code_to_coeffs(code, p, m), poly, p, m, q):
                g = code
                break
    else:
        if not isinstance(g, (int, np.integer)):
            g = sum((int(c) % p) * p**i for i, c in enumerate(g))
        g = int(g)
        if not 0 < g < q or not _is_generator(_code_to_coeffs(g, p, m), poly, p, m, q):
            raise NotPrimitive(f"element {g} does not have order {q - 1}")

    weights = p ** np.arange(m, dtype=np.int64)
    codes = np.arange(q, dtype=np.int64)
    digits = (codes[:, None] // weights[None, :]) % p

    # Powers of g by repeated polynomial multiplication, done on digit rows.
    g_coeffs = _code_to_coeffs(g, p, m)
    antilog = np.empty(q - 1, dtype=np.int64)
    cur = [1] + [0] * (m - 1)
    for k in range(q - 1):
        antilog[k] = sum(c * p**i for i, c in enumerate(cur))
        cur = _elem_mul(cur, g_coeffs, poly, p, m)
    log = np.full(q, -1, dtype=np.int64)
    log[antilog] = np.arange(q - 1, dtype=np.int64)

    # Tr(x) = x + x^p + ... + x^(p^(m-1)), summed digit-wise.
    nz = codes[1:]
    acc = np.zeros((q - 1, m), dtype=np.int64)
    for i in range(m):
        frob = antilog[(log[nz] * p**i) % (q - 1)]
        acc = (acc + digits[frob]) % p
    if np.any(acc[:, 1:]):
        raise AssertionError("trace left the prime subfield")
    trace = np.zeros(q, dtype=np.int64)
    trace[1:] = acc[:, 0]

    for arr in (digits, antilog, log, trace):
        arr.setflags(write=False)
    return FieldSpec(
        p=p,
        m=m,
        poly=tuple(poly),
        g=g,
        q=q,
        digits=digits,
        log_table=log,
        antilog_table=antilog,
        trace_table=trace,
    )


def arith(spec: FieldSpec, op: str, *operands):
    """Dispatch ``op`` in {add, sub, mul, inv, pow} on ``spec``."""
    for x in operands[:2] if op != "pow" else operands[:1]:
        spec.check(x)
    if op == "add":
        return spec.add(*operands)
    if op == "sub":
        return spec.sub(*operands)
    if op == "mul":
        return spec.mul(*operands)
    if op == "inv":
        return spec.inv(*operands)
    if op == "pow":
        return spec.pow(*operands)
    raise ValueError(f"unknown operation {op!r}")


def trace(spec: FieldSpec, x):
    spec.check(x)
    return spec.trace(x)


def discrete_log(spec: FieldSpec, x):
    spec.check(x)
    return spec.log(x)
