from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vee.algebra import (
    DimensionError,
    MultiPoly,
    PolyVectorField,
    RatMatrix,
    determinant,
    format_rational,
    kernel_basis,
    parse_rational,
    poly_determinant,
    primitive_integer_vector,
    rank,
    rref,
    sparse_kernel,
    sparse_rank,
)

VARS = ("x1", "x2", "x3")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def polys(draw, max_terms=5, max_deg=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exp = tuple(draw(st.integers(0, max_deg)) for _ in VARS)
        terms[exp] = draw(rationals)
    return MultiPoly(VARS, terms)


@st.composite
def matrices(draw, rows=None, cols=None):
    r = rows if rows is not None else draw(st.integers(1, 4))
    c = cols if cols is not None else draw(st.integers(1, 5))
    return RatMatrix([[draw(st.fractions(min_value=-5, max_value=5, max_denominator=3))
                       for _ in range(c)] for _ in range(r)])


@st.composite
def square_pair(draw):
    n = draw(st.integers(1, 4))
    return draw(matrices(n, n)), draw(matrices(n, n))


# --- rationals -------------------------------------------------------------


@given(rationals)
def test_rational_text_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_rational_text_forms():
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(Fraction(4)) == "4"
    with pytest.raises(ValueError):
        parse_rational("0.5")


def test_primitive_vector():
    assert primitive_integer_vector([Fraction(1, 2), Fraction(-3, 4)]) == ((2, -3), Fraction(1, 4))
    prim, scale = primitive_integer_vector([-4, 6])
    assert prim == (2, -3) and scale == -2


# --- polynomial ring axioms ---------------------------------------------------


@settings(max_examples=60)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == MultiPoly.zero(VARS)


@settings(max_examples=60)
@given(polys(), polys())
def test_leibniz_rule(a, b):
    for v in VARS:
        assert (a * b).diff(v) == a.diff(v) * b + a * b.diff(v)


@settings(max_examples=60)
@given(polys(), st.lists(small_ints, min_size=3, max_size=3).filter(any))
def test_division_by_linear_form(p, coeffs):
    q, r = p.divmod_linear(coeffs)
    form = MultiPoly.linear_form(VARS, coeffs)
    assert q * form + r == p
    piv = max(i for i, c in enumerate(coeffs) if c)
    assert all(e[piv] == 0 for e in r.terms)
    assert (p * form).divides_by_linear(coeffs)


@settings(max_examples=40)
@given(polys(), st.lists(rationals, min_size=3, max_size=3), st.lists(rationals, min_size=3, max_size=3))
def test_composition_is_evaluation_compatible(p, a, point):
    images = [MultiPoly.linear_form(VARS, [a[i], 1, 0]) for i in range(3)]
    composed = p.compose(images)
    inner = [a[i] * point[0] + point[1] for i in range(3)]
    assert composed.evaluate(point) == p.evaluate(inner)


@given(polys())
def test_poly_json_round_trip(p):
    assert MultiPoly.from_json(p.to_json()) == p


def test_homogeneous_components_and_degree():
    x, y, z = MultiPoly.gens(VARS)
    p = x ** 3 + x * y + z + 2
    comps = p.homogeneous_components()
    assert sorted(comps) == [0, 1, 2, 3]
    assert p.degree() == 3 and not p.is_homogeneous()
    assert (x * y * z).is_homogeneous()


def test_mismatched_variables_rejected():
    with pytest.raises(Exception):
        MultiPoly.var(("a",), 0) + MultiPoly.var(("b",), 0)


def test_euler_field_contracts_to_degree_times_poly():
    x, y, z = MultiPoly.gens(VARS)
    p = x ** 2 * y - z ** 3
    E = PolyVectorField.euler(VARS)
    assert sum((c * g for c, g in zip(E, p.gradient())), MultiPoly.zero(VARS)) == p.scale(3)
    assert PolyVectorField.from_json(E.to_json()) == E


# --- matrices -------------------------------------------------------------------


@settings(max_examples=60)
@given(square_pair())
def test_determinant_is_multiplicative(pair):
    a, b = pair
    assert determinant(a @ b) == determinant(a) * determinant(b)


@settings(max_examples=60)
@given(matrices())
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.ncols
    for v in ker:
        assert all(x == 0 for x in m @ v)


@settings(max_examples=60)
@given(matrices())
def test_rref_pivots(m):
    red, cols = rref(m)
    if red is None:
        assert m.is_zero()
        return
    assert len(cols) == rank(m)
    for i, c in enumerate(cols):
        assert [red[k, c] for k in range(red.nrows)] == [int(k == i) for k in range(red.nrows)]


@settings(max_examples=60)
@given(matrices())
def test_kernel_methods_agree(m):
    rows = [{j: x for j, x in enumerate(r) if x} for r in m.rows]
    assert sparse_kernel(rows, m.ncols, method="flint") == sparse_kernel(rows, m.ncols, method="exact")


def test_sparse_kernel_edge_cases():
    assert sparse_kernel([], 2) == [(1, 0), (0, 1)]
    assert sparse_kernel([{0: 1}], 1) == []
    with pytest.raises(DimensionError):
        sparse_kernel([{3: 1}], 2)
    with pytest.raises(ValueError):
        sparse_kernel([{0: 1}], 2, method="bogus")
    assert sparse_rank([{0: 1, 1: 2}, {0: 2, 1: 4}]) == 1


def test_inverse():
    m = RatMatrix([[2, 1], [1, 1]])
    assert m @ m.inverse() == RatMatrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        RatMatrix([[1, 2], [2, 4]]).inverse()


@settings(max_examples=30)
@given(matrices(3, 3))
def test_poly_determinant_matches_numeric(m):
    const = [[MultiPoly.constant(VARS, m[i, j]) for j in range(3)] for i in range(3)]
    assert poly_determinant(const) == MultiPoly.constant(VARS, determinant(m))


def test_poly_determinant_vandermonde():
    x, y, z = MultiPoly.gens(VARS)
    one = MultiPoly.constant(VARS, 1)
    rows = [[one, x, x * x], [one, y, y * y], [one, z, z * z]]
    assert poly_determinant(rows) == (y - x) * (z - x) * (z - y)
