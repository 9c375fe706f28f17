import json
import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcsskit.charsum import (
    PolynomialOverField,
    additive_charsum,
    field_order,
    gauss_sum,
    mixed_charsum,
    weil_audit,
)
from qcsskit.characters import MultiplicativeCharacter
from qcsskit.errors import InvalidParams
from qcsskit.field import build_field

P = PolynomialOverField


def direct_additive(F, a, h):
    """Term-by-term sum with cmath, as an independent oracle."""
    total = 0
    for z in range(F.q):
        e = int(F.trace(F.mul(a, h(z))))
        total += complex(math.cos(2 * math.pi * e / F.p), math.sin(2 * math.pi * e / F.p))
    return total


def test_polynomial_basics():
    F = build_field(5, 2)
    h = P(F, (1, 2, 0, 0))
    assert h.degree == 1 and h.coeffs == (1, 2)
    assert P(F, (0,)).degree == -1
    sq = h * h
    z = np.arange(F.q)
    assert np.array_equal(sq(z), F.mul(h(z), h(z)))
    assert np.array_equal((h**3)(z), F.pow(h(z), 3))
    f = P.from_roots(F, [1, 4, 7])
    assert f.degree == 3
    assert set(np.flatnonzero(f(z) == 0).tolist()) == {1, 4, 7}


def test_field_order_is_antilog_then_zero():
    F = build_field(3, 2)
    order = field_order(F)
    assert order[-1] == 0 and order[0] == 1 and order[1] == F.g
    assert sorted(order.tolist()) == list(range(F.q))


def test_additive_trivial_cases():
    F = build_field(7, 2)
    assert abs(additive_charsum(F, 1, P(F, (0,))) - F.q) < 1e-9
    for c in (1, 5, 30):
        assert abs(additive_charsum(F, 1, P(F, (0, c)))) < 1e-9


def test_extremal_values():
    t0 = time.perf_counter()
    F81 = build_field(3, 4, poly=(1, 0, 1, 1, 1), g=10)
    f = P.from_roots(F81, [1, F81.neg(1)])
    assert abs(mixed_charsum(F81, 10, 1, f, 1, P(F81, (0, 1))) - 18) < 1e-6
    F25 = build_field(5, 2, poly=(3, 0, 1), g=11)
    f = P.from_roots(F25, [1, F25.neg(1)])
    assert abs(mixed_charsum(F25, 8, 1, f) - 5) < 1e-6
    F625 = build_field(5, 4, poly=(2, 0, 2, 1, 1), g=5)
    assert abs(additive_charsum(F625, 1, P.monomial(F625, 1, 3)) + 50) < 1e-6
    assert abs(gauss_sum(F625, 3, 1) + 25) < 1e-6
    F81b = build_field(3, 4, poly=(2, 1, 0, 0, 1))
    c = F81b.pow(F81b.x, 2)
    assert abs(additive_charsum(F81b, c, P(F81b, (0, 2, 1))) + 9) < 1e-6
    assert time.perf_counter() - t0 < 1.0


def test_additive_matches_direct_oracle():
    F = build_field(5, 2)
    rng = np.random.default_rng(0)
    for _ in range(20):
        h = P(F, tuple(rng.integers(0, F.q, 4)))
        a = int(rng.integers(0, F.q))
        assert abs(additive_charsum(F, a, h) - direct_additive(F, a, h)) < 1e-9


def test_mixed_zero_terms_contribute_nothing():
    F = build_field(7, 2)
    psi = MultiplicativeCharacter(F, 4)
    f = P.from_roots(F, [3])
    direct = sum(psi(int(f(z))) for z in range(F.q))
    assert abs(mixed_charsum(F, psi, 1, f) - direct) < 1e-9
    # pure multiplicative sum of a linear polynomial vanishes
    assert abs(mixed_charsum(F, 4, 1, P(F, (5, 2)))) < 1e-9


@pytest.mark.parametrize("p, m", [(3, 2), (5, 2), (7, 2), (3, 3), (2, 4), (13, 1), (3, 4), (11, 2), (2, 6), (5, 3)])
def test_gauss_magnitude(p, m):
    F = build_field(p, m)
    for delta in [d for d in range(2, F.q) if F.order % d == 0][:2]:
        assert abs(abs(gauss_sum(F, delta, 1)) - math.sqrt(F.q)) < 1e-9


def test_gauss_rejects_trivial():
    F = build_field(5, 2)
    with pytest.raises(InvalidParams):
        gauss_sum(F, 1, 1)
    with pytest.raises(InvalidParams):
        gauss_sum(F, 4, 0)


def test_mixed_rejects_bad_power():
    F = build_field(5, 2)
    with pytest.raises(InvalidParams):
        mixed_charsum(F, 4, 4, P(F, (0, 1)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_affine_substitution_preserves_magnitude(seed):
    rng = np.random.default_rng(seed)
    F = build_field(7, 2)
    h = P(F, tuple(int(c) for c in rng.integers(0, F.q, 4)))
    u, v = int(rng.integers(1, F.q)), int(rng.integers(0, F.q))
    hu = P(F, (0,))
    lin = P(F, (v, u))
    for k, c in enumerate(h.coeffs):
        hu = P(F, _add(F, hu.coeffs, (P(F, (c,)) * lin**k).coeffs))
    assert abs(abs(additive_charsum(F, 1, hu)) - abs(additive_charsum(F, 1, h))) < 1e-9


def _add(F, a, b):
    n = max(len(a), len(b))
    a, b = list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b))
    return tuple(F.add(x, y) for x, y in zip(a, b))


def test_audit_report_shape_and_edge_cases():
    F = build_field(5, 2)
    rep = weil_audit(F, 20, degree=1)
    assert rep.max_ratio == 0.0
    d = json.loads(json.dumps(rep.to_dict()))
    assert set(d) >= {"field", "trials", "max_ratio", "attaining_polynomial"}
    with pytest.raises(InvalidParams):
        weil_audit(F, 0)
    with pytest.raises(InvalidParams):
        weil_audit(F, 5, degree=5)


def test_cubic_extremal_ratio_is_one():
    F = build_field(5, 4, poly=(2, 0, 2, 1, 1), g=5)
    value = additive_charsum(F, 1, P.monomial(F, 1, 3))
    assert abs(value) / (2 * math.sqrt(F.q)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("p, m, d", [(5, 2, 3), (7, 2, 3), (3, 4, 4), (11, 2, 3)])
def test_weil_audits(p, m, d):
    F = build_field(p, m)
    add = weil_audit(F, 1000, degree=d, seed=1)
    mix = weil_audit(F, 1000, degree=d, kind="mixed", seed=2)
    assert add.violations == 0 and add.max_ratio <= 1 + 1e-9
    assert mix.violations == 0 and mix.max_ratio <= 1 + 1e-9
