"""Compact text syntax for field elements and defining polynomials.

Grammar (whitespace ignored)::

    expr  := sign? term (sign term)*
    sign  := "+" | "-"
    term  := INT ("*"? atom)? | atom
    atom  := VAR ("^"? INT)?
    VAR   := "a" | "alpha" | "x" | "g"
    INT   := [0-9]+

``a``, ``alpha`` and ``x`` all denote the residue class of x modulo the
defining polynomial; ``g`` denotes the chosen primitive element.  Integer
coefficients are reduced mod p.  Examples: ``x4+x+2``, ``a2-2``, ``1+2a``,
``g+1``, ``-1``, ``a^2``.  ``#17`` gives the raw integer code 17.

Polynomials use the same grammar without ``g`` and must be monic.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .field import FieldSpec

_TERM = re.compile(
    r"([+-])?(?:(\d+)\*?)?(alpha|a|x|g)?(?:\^?(\d+))?"
)


def _terms(text: str):
    """Yield (coefficient, var or None, exponent) triples."""
    if re.search(r"[\w^*]\s+[\w^*]", text):
        raise ParseError(f"missing operator in {text!r}")
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ParseError("empty expression")
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, coef, var, exp = m.groups() if m else (None,) * 4
        if not m or m.end() == pos or (coef is None and var is None):
            raise ParseError(f"cannot parse {text!r} at position {pos}")
        if sign is None and not first:
            raise ParseError(f"missing operator in {text!r} at position {pos}")
        if var is None and exp is not None:
            raise ParseError(f"stray exponent in {text!r}")
        c = int(coef) if coef is not None else 1
        if sign == "-":
            c = -c
        yield c, var, int(exp) if exp is not None else (1 if var else 0)
        pos = m.end()
        first = False


def parse_element(text: str, spec: FieldSpec) -> int:
    """Evaluate an element expression to its integer code."""
    s = text.strip()
    if s.startswith("#"):
        try:
            code = int(s[1:])
        except ValueError:
            raise ParseError(f"bad raw code {text!r}") from None
        spec.check(code)
        return code
    acc = 0
    for c, var, e in _terms(s):
        val = 1
        if var in ("a", "alpha", "x"):
            val = spec.pow(spec.x, e)
        elif var == "g":
            val = spec.pow(spec.g, e)
        acc = spec.add(acc, spec.scale(c % spec.p, val))
    return int(acc)


def parse_poly(text: str, p: int) -> list[int]:
    """Monic polynomial over F_p, returned constant-first."""
    coeffs: dict[int, int] = {}
    for c, var, e in _terms(text):
        if var == "g":
            raise ParseError("g cannot appear in a defining polynomial")
        coeffs[e] = (coeffs.get(e, 0) + c) % p
    deg = max((k for k, v in coeffs.items() if v), default=-1)
    if deg < 1:
        raise ParseError(f"{text!r} has degree < 1")
    if coeffs[deg] != 1:
        raise ParseError(f"{text!r} is not monic")
    return [coeffs.get(k, 0) for k in range(deg + 1)]


def format_poly(poly) -> str:
    """Inverse of parse_poly for constant-first coefficient lists."""
    parts = []
    for k in range(len(poly) - 1, -1, -1):
        c = int(poly[k])
        if not c:
            continue
        if k == 0:
            parts.append(str(c))
        else:
            mono = "x" if k == 1 else f"x{k}"
            parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(parts) or "0"


def format_element(x: int, spec: FieldSpec) -> str:
    """Element as a polynomial in a, highest power first."""
    parts = []
    coeffs = spec.coeffs(int(x))
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        if k == 0:
            parts.append(str(c))
        else:
            mono = "a" if k == 1 else f"a{k}"
            parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(parts) or "0"


def split_index(text: str) -> list[str]:
    """Split an index triple on ',' or ';'."""
    parts = [t.strip() for t in re.split(r"[,;]", text)]
    if len(parts) != 3 or not all(parts):
        raise ParseError(f"index {text!r} must have three components")
    return parts
