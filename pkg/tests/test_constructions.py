import numpy as np
import pytest
from conftest import load_golden
from hypothesis import given, settings
from hypothesis import strategies as st

from qcsskit.constructions import (
    AdditiveIndex,
    MixedIndex,
    admissible_grid,
    build_family,
    build_matrix,
    correlation_via_charsum,
    enumerate_indices,
    expected_parameters,
    family_shape,
    format_matrix,
    index_at,
    make_params,
    parse_matrix,
    position_of,
    scaling_law_value,
)
from qcsskit.correlation import CONCATENATED, matrix_corr
from qcsskit.errors import (
    CharacteristicTooSmall,
    FamilyTooLarge,
    IndexOutOfRange,
    InvalidDivisor,
    InvalidParams,
    ParseError,
)

SMALL = [
    ("quadratic", 3, 1, 2, None),
    ("quadratic", 5, 1, 3, None),
    ("cubic", 5, 1, 2, None),
    ("mixed", 3, 1, 2, 4),
    ("mixed0", 5, 1, 6, 8),
    ("mixed0", 3, 1, 4, 2),
]


def test_expected_parameters_examples(ex1, ex2, ex4):
    assert tuple(expected_parameters(ex1)) == (10156250, 26, 24, 51, 5)
    assert tuple(expected_parameters(ex2)) == (810, 10, 8, 10, 3)
    assert tuple(expected_parameters(ex4)) == (42, 6, 4, 8, 8)


@pytest.mark.parametrize(
    "args, err",
    [
        (("quadratic", 3, 1, 3), InvalidDivisor),  # 3 does not divide 8
        (("quadratic", 3, 1, 8), InvalidDivisor),
        (("quadratic", 3, 1, 1), InvalidDivisor),
        (("cubic", 3, 1, 2), CharacteristicTooSmall),
        (("quadratic", 2, 2, 3), CharacteristicTooSmall),
        (("mixed", 3, 1, 2), InvalidDivisor),  # Delta missing
        (("mixed0", 5, 1, 6, 5), InvalidDivisor),
        (("cubic", 5, 1, 2, 4), InvalidParams),
        (("sextic", 5, 1, 2), InvalidParams),
    ],
)
def test_invalid_params(args, err):
    with pytest.raises(err):
        make_params(*args)


def test_enumeration_examples():
    P = make_params("quadratic", 3, 1, 2)
    first = next(iter(enumerate_indices(P)))
    assert first == AdditiveIndex(0, 0, 1)
    assert sum(1 for _ in enumerate_indices(P)) == 18
    assert sum(1 for _ in enumerate_indices(make_params("cubic", 5, 1, 2))) == 1250
    assert sum(1 for _ in enumerate_indices(make_params("mixed0", 5, 1, 6, 8))) == 42


@pytest.mark.parametrize("variant, p, n, Q, delta", SMALL)
def test_index_position_roundtrip(variant, p, n, Q, delta):
    P = make_params(variant, p, n, Q, delta)
    for i, idx in enumerate(enumerate_indices(P)):
        assert index_at(P, i) == idx
        assert position_of(P, idx) == i
    assert i + 1 == P.M


@pytest.mark.parametrize("variant, p, n, Q, delta", SMALL)
def test_subgroup_membership(variant, p, n, Q, delta):
    P = make_params(variant, p, n, Q, delta)
    H = P.subgroup()
    assert len(set(H.tolist())) == Q
    assert np.all(P.field.pow(H, Q) == 1)
    for idx in enumerate_indices(P):
        assert P.field.pow(idx.eta, Q) == 1


def test_family_sizes():
    fam = build_family(make_params("quadratic", 3, 1, 2), cap=10**4)
    assert fam.M == 18 and (fam.K, fam.N) == (2, 4)
    fam = build_family(make_params("mixed0", 5, 1, 6, 8))
    assert fam.M == 42 and (fam.K, fam.N) == (6, 4)
    with pytest.raises(FamilyTooLarge) as err:
        build_family(make_params("cubic", 5, 2, 26), cap=10**4)
    assert err.value.args and "10156250" in str(err.value)


@pytest.mark.parametrize("variant, p, n, Q, delta", SMALL)
def test_entries_in_alphabet(variant, p, n, Q, delta):
    P = make_params(variant, p, n, Q, delta)
    A = P.expected().A
    for S in build_family(P):
        assert S.A == A
        assert S.exps.min() >= 0 and S.exps.max() < A


def test_bad_indices(ex2, ex4):
    with pytest.raises(IndexOutOfRange):
        build_matrix(ex2, (1, 0, 1))  # alpha must be 0
    with pytest.raises(IndexOutOfRange):
        build_matrix(ex2, (0, 0, ex2.field.g))  # g is not in H_10
    with pytest.raises(IndexOutOfRange):
        build_matrix(ex4, (8, 1, 0))
    with pytest.raises(IndexOutOfRange):
        build_matrix(ex4, (1, 1, 3))  # lambda must be 0


# --- golden matrices -------------------------------------------------------------


def test_golden_example1(ex1):
    F = ex1.field
    g = F.g
    S = build_matrix(ex1, (F.add(g, 1), g, 1))
    assert np.array_equal(S.exps, load_golden("ex1_S_g+1_g_1"))
    S = build_matrix(ex1, (g, g, 1))
    assert np.array_equal(S.exps, load_golden("ex1_S_g_g_1"))


def test_golden_example2(ex2):
    F = ex2.field
    assert F.g == F.x  # the only primitive element reproducing both listings
    S = build_matrix(ex2, (0, F.add(F.g, 1), 1))
    assert np.array_equal(S.exps, load_golden("ex2_S_0_g+1_1"))
    S = build_matrix(ex2, (0, F.g, F.neg(1)))
    assert np.array_equal(S.exps, load_golden("ex2_S_0_g_-1"))


def test_golden_example4(ex4):
    F = ex4.field
    S = build_matrix(ex4, (1, 1, 0))
    assert np.array_equal(S.exps, load_golden("ex4_S_1_1_0"))
    S = build_matrix(ex4, (7, F.neg(1), 0))
    assert np.array_equal(S.exps, load_golden("ex4_S_7_-1_0"))


def test_example3_listing_is_inconsistent(ex3):
    """The printed listings use a ternary alphabet; the family's alphabet is 30."""
    F = ex3.field
    assert ex3.expected().A == 30
    printed = load_golden("ex3_S_9_-1_0")
    ours = build_matrix(ex3, (9, F.neg(1), 0))
    assert printed.shape == ours.exps.shape
    assert not np.array_equal(ours.exps, printed)
    # psi_1^9(g^y - 1) is never identically 1 across the matrix
    assert len(np.unique(ours.exps)) > 1


def test_format_parse_roundtrip(ex4):
    text = format_matrix(ex4, (1, 1, 0))
    assert text.splitlines()[0] == "# qcss v1 construction=mixed0 p=5 n=1 Q=6 Delta=8 A=8 index=1,1,0"
    assert text.splitlines()[1] == "2 0 5 1"
    header, S = parse_matrix(text)
    assert header["construction"] == "mixed0" and header["Delta"] == 8
    assert header["index"] == (1, 1, 0)
    assert np.array_equal(S.exps, build_matrix(ex4, (1, 1, 0)).exps)
    assert format_matrix(ex4, (1, 1, 0)) == text


@pytest.mark.parametrize("text", ["", "hello\n0 1", "# qcss v1 construction=cubic p=5 n=1 Q=2 A=5 index=0,0,1\n0 1\n0"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


# --- character-sum path ------------------------------------------------------------


def test_charsum_examples(ex1, ex2):
    g = ex1.field.g
    v = correlation_via_charsum(ex1, (ex1.field.add(g, 1), g, 1), (g, g, 1), 0)
    assert abs(v + 51) < 1e-6
    F = ex2.field
    v = correlation_via_charsum(ex2, (0, F.add(F.g, 1), 1), (0, F.g, F.neg(1)), 0)
    assert abs(v + 10) < 1e-6
    idx = (0, 5, 1)
    assert abs(correlation_via_charsum(ex2, idx, idx, 0) - 80) < 1e-9


def test_example_pairs_matrix_level(ex1, ex2):
    g = ex1.field.g
    S1 = build_matrix(ex1, (ex1.field.add(g, 1), g, 1))
    S2 = build_matrix(ex1, (g, g, 1))
    assert abs(matrix_corr(S1, S2, 0) + 51) < 1e-6
    F = ex2.field
    S1 = build_matrix(ex2, (0, F.add(F.g, 1), 1))
    S2 = build_matrix(ex2, (0, F.g, F.neg(1)))
    assert abs(matrix_corr(S1, S2, 0) + 10) < 1e-6


@pytest.mark.parametrize("variant, p, n, Q, delta", SMALL)
def test_charsum_equals_matrix_corr_at_zero_shift(variant, p, n, Q, delta):
    P = make_params(variant, p, n, Q, delta)
    rng = np.random.default_rng(7)
    for _ in range(60):
        i, j = rng.integers(0, P.M, 2)
        a, b = index_at(P, int(i)), index_at(P, int(j))
        want = matrix_corr(build_matrix(P, a), build_matrix(P, b), 0)
        assert abs(correlation_via_charsum(P, a, b, 0) - want) < 1e-6


@pytest.mark.parametrize("variant, p, n, Q, delta", SMALL)
def test_charsum_tracks_concatenated_shift(variant, p, n, Q, delta):
    """At tau != 0 the reduced sums describe the shift of the concatenated rows."""
    P = make_params(variant, p, n, Q, delta)
    rng = np.random.default_rng(8)
    for _ in range(60):
        i, j = rng.integers(0, P.M, 2)
        tau = int(rng.integers(0, P.N))
        a, b = index_at(P, int(i)), index_at(P, int(j))
        want = matrix_corr(build_matrix(P, a), build_matrix(P, b), tau, CONCATENATED)
        assert abs(correlation_via_charsum(P, a, b, tau) - want) < 1e-6


# --- counts -------------------------------------------------------------------------


@pytest.mark.parametrize("variant", ["quadratic", "cubic", "mixed", "mixed0"])
def test_count_identities_small_grid(variant):
    for p, n, Q, delta in admissible_grid(variant, 400):
        exp = family_shape(variant, p, n, Q, delta)
        assert exp.M == scaling_law_value(variant, exp.K, exp.N, delta)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 10**6))
def test_index_at_matches_enumeration(args, k):
    variant, p, n, Q, delta = args
    P = make_params(variant, p, n, Q, delta)
    i = k % P.M
    idx = index_at(P, i)
    assert position_of(P, idx) == i
    assert isinstance(idx, AdditiveIndex if P.additive else MixedIndex)
