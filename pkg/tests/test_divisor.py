import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logres import (
    FrameElement,
    FreeDivisor,
    VectorFieldPoly,
    WeightedPoly,
    bracket,
    catalog,
    dlog_f_expansion,
    dual_log_forms,
    form_structure_equations,
    frame_constants,
    structure_functions,
    verify_saito,
)
from logres.divisor import poly_adjugate, poly_determinant

from conftest import poly_of

ALL_NAMES = ("cusp", "normal_crossing_1", "normal_crossing_2", "normal_crossing_3",
             "borel2", "g2", "d4", "sekiguchi_b5")


def test_verify_saito_cusp_constant(cusp):
    result = verify_saito(cusp)
    assert result.ok
    assert result.constant == 6


def test_verify_saito_normal_crossing():
    for k in (1, 2, 3, 4):
        result = verify_saito(catalog(f"normal_crossing_{k}"))
        assert result.ok
        assert result.constant == 1


def test_verify_saito_degenerate_frame(cusp):
    euler = cusp.frame[0]
    broken = FreeDivisor(
        name="broken",
        variables=cusp.variables,
        weights=cusp.weights,
        f=cusp.f,
        degree=cusp.degree,
        frame=(euler, FrameElement("w", euler.field, grade=0)),
        positive_combination=(1,),
    )
    result = verify_saito(broken)
    assert not result.ok
    assert result.constant is None


def test_bracket_euler_with_hamiltonian_is_hamiltonian(cusp):
    e, v = cusp.frame[0].field, cusp.frame[1].field
    assert bracket(e, v).coefficients == v.coefficients


def test_bracket_sekiguchi_pair(seki):
    e, v, w = (el.field for el in seki.frame)
    lie = bracket(v, w)
    expected = e.scale(poly_of(seki, {(0, 0, 1): 24})) \
        + v.scale(poly_of(seki, {(0, 1, 0): 6})) \
        + w.scale(poly_of(seki, {(1, 0, 0): -40}))
    assert (lie - expected).is_zero()


def test_bracket_with_self_vanishes(seki):
    v = seki.frame[1].field
    assert bracket(v, v).is_zero()


def test_structure_functions_sekiguchi(seki):
    sf = structure_functions(seki)
    names = seki.variables
    c = sf.table[(1, 2)]
    assert c[0] == poly_of(seki, {(0, 0, 1): 24})
    assert c[1] == poly_of(seki, {(0, 1, 0): 6})
    assert c[2] == poly_of(seki, {(1, 0, 0): -40})


def test_structure_functions_borel(borel):
    sf = structure_functions(borel)
    one = WeightedPoly.constant(1, borel.weights)
    # [E1, V] = V and [E2, V] = -V
    assert sf.table[(0, 2)] == (0 * one, 0 * one, one)
    assert sf.table[(1, 2)] == (0 * one, 0 * one, -one)


def test_structure_functions_antisymmetry(seki):
    sf = structure_functions(seki)
    forward = sf.coefficients(1, 2)
    backward = sf.coefficients(2, 1)
    assert all((a + b).is_zero() for a, b in zip(forward, backward))
    assert all(c.is_zero() for c in sf.coefficients(1, 1))


@pytest.mark.parametrize("name", ALL_NAMES)
def test_structure_functions_jacobi(name):
    d = catalog(name)
    sf = structure_functions(d)
    fields = [e.field for e in d.frame]
    for i in range(d.n):
        for j in range(i + 1, d.n):
            for k in range(j + 1, d.n):
                total = bracket(fields[i], bracket(fields[j], fields[k]))
                total = total + bracket(fields[j], bracket(fields[k], fields[i]))
                total = total + bracket(fields[k], bracket(fields[i], fields[j]))
                assert total.is_zero()


@pytest.mark.parametrize("name", ALL_NAMES)
def test_structure_functions_e_homogeneity(name):
    # c_ij^k is E-homogeneous of degree m_i + m_j - m_k, with constant frame
    # elements at grade zero
    d = catalog(name)
    sf = structure_functions(d)
    grades = [e.grade if e.grade is not None else 0 for e in d.frame]
    for (i, j), coeffs in sf.table.items():
        for k, c in enumerate(coeffs):
            if c.is_zero():
                continue
            assert c.is_homogeneous()
            assert c.homogeneous_degree() == grades[i] + grades[j] - grades[k]


def test_dual_forms_cusp_match_display(cusp):
    forms = dual_log_forms(cusp)
    assert forms.constant == 6
    # alpha = (1/6) dlog f: numerator rows over 6f
    fx = cusp.f.partial_derivative(0)
    fy = cusp.f.partial_derivative(1)
    assert forms.numerators[0] == (fx, fy)
    # beta = (1/(6f)) (3x dy - 2y dx)
    assert forms.numerators[1] == (poly_of(cusp, {(0, 1): -2}), poly_of(cusp, {(1, 0): 3}))


def test_dual_forms_normal_crossing_rows():
    d = catalog("normal_crossing_3")
    forms = dual_log_forms(d)
    assert forms.constant == 1
    # row i is dz_i / z_i, cleared to (product of the other coordinates) dz_i
    for i in range(3):
        for j in range(3):
            expected = WeightedPoly.constant(1, d.weights)
            if i != j:
                assert forms.numerators[i][j].is_zero()
            else:
                for l in range(3):
                    if l != i:
                        expected = expected * WeightedPoly.variable(l, d.weights)
                assert forms.numerators[i][j] == expected


def test_dlog_expansion_values(cusp, seki):
    assert [p.format(cusp.variables) for p in dlog_f_expansion(cusp)] == ["6", "0"]
    assert [p.format(seki.variables) for p in dlog_f_expansion(seki)] == ["9", "-96*x", "-36*y"]
    nc = catalog("normal_crossing_4")
    assert [p.format(nc.variables) for p in dlog_f_expansion(nc)] == ["1", "1", "1", "1"]


def test_form_structure_equations_sekiguchi(seki):
    table = form_structure_equations(seki)
    # d alpha = -24 z beta ^ gamma; d beta = -alpha ^ beta - 6 y beta ^ gamma;
    # d gamma = -2 alpha ^ gamma + 40 x beta ^ gamma
    assert table[0] == {(1, 2): poly_of(seki, {(0, 0, 1): -24})}
    assert table[1] == {
        (0, 1): poly_of(seki, {(0, 0, 0): -1}),
        (1, 2): poly_of(seki, {(0, 1, 0): -6}),
    }
    assert table[2] == {
        (0, 2): poly_of(seki, {(0, 0, 0): -2}),
        (1, 2): poly_of(seki, {(1, 0, 0): 40}),
    }


def test_form_structure_equations_cusp(cusp):
    table = form_structure_equations(cusp)
    # d alpha = 0 and d beta = (n - p - q) beta ^ alpha = -(n-p-q) alpha ^ beta
    assert table[0] == {}
    assert table[1] == {(0, 1): poly_of(cusp, {(0, 0): -1})}


def test_form_structure_equations_g2(g2_divisor):
    table = form_structure_equations(g2_divisor)
    one = WeightedPoly.constant(1, g2_divisor.weights)
    # d alpha_E = 0, d alpha_h = alpha_e ^ alpha_f = -alpha_f ^ alpha_e
    assert table[0] == {}
    assert table[1] == {(2, 3): -one}
    # d alpha_f = -2 alpha_h ^ alpha_f, d alpha_e = 2 alpha_h ^ alpha_e
    assert table[2] == {(1, 2): -2 * one}
    assert table[3] == {(1, 3): 2 * one}


def test_frame_constants_borel(borel):
    constants = frame_constants(borel)
    assert constants.toral_w[(0, 0)] == 1
    assert constants.toral_w[(1, 0)] == -1
    assert not constants.semisimple


@pytest.mark.parametrize("name", ALL_NAMES)
def test_dual_form_pairing_identity(name):
    d = catalog(name)
    forms = dual_log_forms(d)
    matrix = d.coefficient_matrix()
    det = poly_determinant(matrix)
    for i in range(d.n):
        for l in range(d.n):
            pairing = WeightedPoly.zero(d.weights)
            for j in range(d.n):
                pairing = pairing + forms.numerators[i][j] * matrix[l][j]
            assert pairing == (det if i == l else WeightedPoly.zero(d.weights))


def test_poly_adjugate_identity(seki):
    matrix = seki.coefficient_matrix()
    det = poly_determinant(matrix)
    adj = poly_adjugate(matrix)
    n = seki.n
    for i in range(n):
        for j in range(n):
            total = WeightedPoly.zero(seki.weights)
            for l in range(n):
                total = total + matrix[i][l] * adj[l][j]
            assert total == (det if i == j else WeightedPoly.zero(seki.weights))


# ------------------------------------------------------ bracket property tests

WEIGHTS = (1, 2)
coeff_fraction = st.fractions(min_value=-3, max_value=3, max_denominator=2)


@st.composite
def vector_fields(draw):
    coefficients = []
    for _ in WEIGHTS:
        terms = {}
        for _ in range(draw(st.integers(0, 3))):
            mono = tuple(draw(st.integers(0, 2)) for _ in WEIGHTS)
            terms[mono] = draw(coeff_fraction)
        coefficients.append(WeightedPoly(WEIGHTS, terms))
    return VectorFieldPoly(tuple(coefficients))


@settings(max_examples=40, deadline=None)
@given(vector_fields(), vector_fields(), vector_fields())
def test_bracket_is_a_lie_bracket(a, b, c):
    assert (bracket(a, b) + bracket(b, a)).is_zero()
    left = bracket(a, b + c)
    right = bracket(a, b) + bracket(a, c)
    assert (left - right).is_zero()
    jacobi = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
    assert jacobi.is_zero()
