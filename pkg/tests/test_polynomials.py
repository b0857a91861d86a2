from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logres import (
    InexactDivisionError,
    WeightedPoly,
    WeightMismatchError,
    exact_divide,
    monomials_of_degree,
    squarefree_probable,
)

W32 = (3, 2)  # weights of the cusp ring
W123 = (1, 2, 3)


def p(weights, terms):
    return WeightedPoly(weights, {tuple(k): Fraction(v) for k, v in terms.items()})


def test_add_cancels_terms():
    a = p(W32, {(2, 0): 1, (0, 3): -1})  # x^2 - y^3
    b = p(W32, {(0, 3): 1})
    assert a + b == p(W32, {(2, 0): 1})


def test_product_degree_is_additive():
    x = WeightedPoly.variable(0, W32)
    y = WeightedPoly.variable(1, W32)
    xy = x * y
    assert xy == p(W32, {(1, 1): 1})
    assert xy.degree() == 5


def test_multiplicative_identity():
    a = p(W32, {(2, 0): 1, (0, 3): -1})
    one = WeightedPoly.constant(1, W32)
    assert a * one == a


def test_weight_mismatch_rejected():
    a = WeightedPoly.variable(0, W32)
    b = WeightedPoly.variable(0, (1, 1))
    with pytest.raises(WeightMismatchError):
        a + b


def test_partial_derivatives():
    f = p(W32, {(2, 0): 1, (0, 3): -1})
    assert f.partial_derivative(0) == p(W32, {(1, 0): 2})
    assert f.partial_derivative(1) == p(W32, {(0, 2): -3})


def test_partial_derivative_three_variables():
    # hand differentiation of x*y^4 + y^3*z + z^3 in z
    f = p(W123, {(1, 4, 0): 1, (0, 3, 1): 1, (0, 0, 3): 1})
    assert f.partial_derivative(2) == p(W123, {(0, 3, 0): 1, (0, 0, 2): 3})


def test_graded_components_homogeneous_cases():
    cusp_poly = p(W32, {(2, 0): 1, (0, 3): -1})
    assert cusp_poly.graded_components() == {6: cusp_poly}
    seki_poly = p(W123, {(1, 4, 0): 1, (0, 3, 1): 1, (0, 0, 3): 1})
    assert seki_poly.graded_components() == {9: seki_poly}


def test_graded_components_mixed():
    f = p((1, 1), {(0, 0): 1, (1, 0): 1})  # 1 + x
    parts = f.graded_components()
    assert sorted(parts) == [0, 1]
    assert parts[0] == WeightedPoly.constant(1, (1, 1))
    assert parts[1] == WeightedPoly.variable(0, (1, 1))


def test_exact_divide_cusp_determinant():
    f = p(W32, {(2, 0): 1, (0, 3): -1})
    assert exact_divide(6 * f, f) == WeightedPoly.constant(6, W32)
    # multiply-back check
    assert exact_divide(6 * f, f) * f == 6 * f


def test_exact_divide_variable():
    x = WeightedPoly.variable(0, W32)
    assert exact_divide(x * x, x) == x


def test_inexact_division_raises():
    x = WeightedPoly.variable(0, W32)
    y = WeightedPoly.variable(1, W32)
    with pytest.raises(InexactDivisionError):
        exact_divide(x + y, x)


def test_monomials_of_degree():
    assert monomials_of_degree(W32, 6) == [(0, 3), (2, 0)]
    assert monomials_of_degree(W32, 1) == []
    assert monomials_of_degree((1,), 4) == [(4,)]


def test_squarefree_cusp():
    f = p(W32, {(2, 0): 1, (0, 3): -1})
    assert squarefree_probable(f, trials=8, seed=0) == "probably-squarefree"


def test_squarefree_detects_square():
    f = p((1, 1), {(2, 0): 1, (1, 1): -2, (0, 2): 1})  # (x - y)^2
    assert squarefree_probable(f, trials=8, seed=0) == "not-squarefree"


def test_squarefree_borel_polynomial():
    f = p((2, 2, 2), {(1, 2, 0): 1, (2, 0, 1): -1})  # x*(y^2 - x*z)
    assert squarefree_probable(f, trials=8, seed=0) == "probably-squarefree"


def test_squarefree_deterministic_in_seed():
    f = p(W32, {(2, 0): 1, (0, 3): -1})
    runs = {squarefree_probable(f, trials=8, seed=7) for _ in range(3)}
    assert len(runs) == 1


# ----------------------------------------------------------- property tests

small_fraction = st.fractions(
    min_value=-4, max_value=4, max_denominator=3
)


@st.composite
def polys(draw, weights=(2, 3)):
    nterms = draw(st.integers(min_value=0, max_value=4))
    terms = {}
    for _ in range(nterms):
        mono = tuple(draw(st.integers(min_value=0, max_value=3)) for _ in weights)
        terms[mono] = draw(small_fraction)
    return WeightedPoly(weights, terms)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(polys())
def test_graded_decomposition_reconstructs(a):
    parts = a.graded_components()
    total = WeightedPoly.zero(a.weights)
    for degree, part in parts.items():
        assert part.is_homogeneous()
        assert part.is_zero() or part.homogeneous_degree() == degree
        total = total + part
    assert total == a


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_exact_divide_roundtrip(a, b):
    if b.is_zero():
        return
    assert exact_divide(a * b, b) == a


def test_squarefree_single_trial_is_inconclusive():
    # one bad line is not persistence evidence on its own
    f = p((1, 1), {(2, 0): 1})  # x^2
    assert squarefree_probable(f, trials=1, seed=0) == "inconclusive"
    assert squarefree_probable(f, trials=8, seed=0) == "not-squarefree"
