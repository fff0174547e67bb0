import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vee.algebra import MultiPoly, PolyVectorField
from vee.arrangements import (
    delete_hyperplane,
    factorization_check,
    integer_factors,
    intersection_lattice,
    is_logarithmic,
    poincare_polynomial,
    restrict_arrangement,
    saito_criterion,
)
from vee.families import instantiate
from vee.flatsections import flat_solve, harmonic_test
from vee.veesys import CovectorSystem

T = ("t",)


def coeffs(p):
    return [int(p.coefficient((k,))) for k in range(p.degree() + 1)]


@st.composite
def arrangements(draw):
    n = draw(st.integers(2, 3))
    vecs = draw(st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n).filter(any),
                         min_size=1, max_size=7))
    seen, pairs = set(), []
    for v in vecs:
        sys1 = CovectorSystem.from_pairs(n, [(v, 1)], arrangement_only=True)
        d = sys1.directions[0]
        if d not in seen:
            seen.add(d)
            pairs.append((d, 1))
    return CovectorSystem.from_pairs(n, pairs, arrangement_only=True)


def test_boolean_lattice():
    lat = intersection_lattice(instantiate("boolean", n=3))
    assert len(lat) == 8
    assert [e.mobius for e in lat.elements] == [1, -1, -1, -1, 1, 1, 1, -1]
    assert coeffs(poincare_polynomial(lat)) == [1, 3, 3, 1]


def test_braid_three_mobius():
    lat = intersection_lattice(instantiate("braid", n=3))
    assert [e.mobius for e in lat.elements] == [1, -1, -1, -1, 2]
    assert lat.rank() == 2 and lat.bottom.codim == 0


def test_lattice_order_and_json():
    lat = intersection_lattice(instantiate("braid", n=4))
    top = lat.at_codim(3)
    assert len(top) == 1
    for e in lat.elements:
        assert lat.leq(lat.bottom, e) and lat.leq(e, top[0])
    data = lat.to_json()
    assert data["hyperplanes"] == 6 and len(data["elements"]) == len(lat)


@settings(max_examples=40, deadline=None)
@given(arrangements())
def test_mobius_signs_alternate(arr):
    for e in intersection_lattice(arr).elements:
        assert e.mobius != 0
        assert (e.mobius > 0) == (e.codim % 2 == 0)


@settings(max_examples=40, deadline=None)
@given(arrangements(), st.data())
def test_deletion_restriction(arr, data):
    if arr.dimension < 2:
        return
    i = data.draw(st.integers(0, len(arr) - 1))
    t = MultiPoly.var(T, 0)
    assert poincare_polynomial(arr) == (poincare_polynomial(delete_hyperplane(arr, i))
                                        + t * poincare_polynomial(restrict_arrangement(arr, i)))


def test_f4_lattice_and_exponents():
    sys_ = instantiate("f4", s=1)
    lat = intersection_lattice(sys_)
    assert len(lat) == 268
    assert factorization_check(poincare_polynomial(lat), 4) == [1, 5, 7, 11]


def test_integer_factors():
    p = MultiPoly(T, {(0,): 1, (1,): 10, (2,): 35, (3,): 26})
    assert integer_factors(p) == ([1], [1, 9, 26])
    assert factorization_check(p) is None
    q = MultiPoly(T, {(0,): 1, (1,): 3, (2,): 2})
    assert factorization_check(q) == [1, 2]
    # padding with zero exponents for a non-essential arrangement
    assert factorization_check(q, 4) == [0, 0, 1, 2]
    with pytest.raises(ValueError):
        factorization_check(MultiPoly(T, {(0,): 2}))


def test_d5_restrictions():
    d5 = instantiate("bn", c=[-1, 1, 1, 1, 1, 1])
    once = restrict_arrangement(d5, d5.index_of((0, 0, 1, -1, 0)))
    assert once.dimension == 4 and once.arrangement_only
    twice = restrict_arrangement(once, once.index_of((0, 0, 1, -1)))
    assert coeffs(poincare_polynomial(twice)) == [1, 7, 15, 9]
    # logarithmic fields of degrees 1, 3, 3
    v = twice.variables
    x1, x2, x3 = MultiPoly.gens(v)
    fields = [
        PolyVectorField.euler(v),
        PolyVectorField([x1 ** 3, x2 ** 3, x3 ** 3]),
        PolyVectorField([x2 * x3 ** 2, x1 * x3 ** 2, x1 * x2 * x3]),
    ]
    cert = saito_criterion(twice, fields)
    assert cert.valid, cert.reasons
    assert cert.degrees == [1, 3, 3]


def test_delete_keeps_dimension():
    sys_ = instantiate("braid", n=4)
    d = delete_hyperplane(sys_, 0)
    assert d.dimension == 3 and len(d) == 5
    with pytest.raises(IndexError):
        delete_hyperplane(sys_, 6)
    with pytest.raises(IndexError):
        restrict_arrangement(sys_, -1)


def test_is_logarithmic():
    sys_ = instantiate("braid", n=3)
    v = sys_.variables
    assert is_logarithmic(sys_, PolyVectorField.euler(v))
    y1, y2 = MultiPoly.gens(v)
    assert not is_logarithmic(sys_, PolyVectorField([y2, MultiPoly.zero(v)]))


def test_saito_from_harmonic_sections(a3):
    h = harmonic_test(a3)
    cert = saito_criterion(a3, h.sections)
    assert cert.valid
    assert cert.det_ratio != 0
    assert sum(cert.degrees) == len(a3)


@settings(max_examples=15, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_saito_invariant_under_triangular_recombination(a, b, c):
    sys_ = instantiate("bn", c=[1, 1, 2, 3])
    secs = [flat_solve(sys_, k).sections[0] for k in (1, 3, 5)]
    x1, x2, x3 = MultiPoly.gens(sys_.variables)
    r2 = x1 ** 2 + x2 ** 2 + x3 ** 2
    # add lower-degree fields times homogeneous polynomials of matching degree
    mixed = [
        secs[0],
        secs[1] + secs[0] * (r2.scale(a)),
        secs[2] + secs[1] * (r2.scale(b)) + secs[0] * ((r2 * r2).scale(c)),
    ]
    base, other = saito_criterion(sys_, secs), saito_criterion(sys_, mixed)
    assert base.valid and other.valid
    assert base.det_ratio == other.det_ratio


def test_saito_rejections(a3):
    v = a3.variables
    E = PolyVectorField.euler(v)
    with pytest.raises(ValueError):
        saito_criterion(a3, [E, E])
    y1, y2, y3 = MultiPoly.gens(v)
    inhomog = PolyVectorField([y1 + y1 ** 2, y2, y3])
    with pytest.raises(ValueError):
        saito_criterion(a3, [inhomog, E, E])
    cert = saito_criterion(a3, [E, E, E])
    assert not cert.valid and cert.reasons


@settings(max_examples=30, deadline=None)
@given(arrangements())
def test_poincare_low_coefficients(arr):
    p = poincare_polynomial(arr)
    assert p.coefficient((0,)) == 1
    assert p.coefficient((1,)) == len(arr)
    assert p.degree() == arr.rank()
