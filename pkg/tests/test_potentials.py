from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vee.algebra import MultiPoly
from vee.families import instantiate
from vee.flatsections import epd_check, flat_solve
from vee.potentials import (
    DeformedPowerSums,
    PotentialError,
    PotentialSet,
    ambient_variables,
    dihedral_b2_potentials,
    f4_invariant,
    f4_potentials,
    jacobian_identity_for_weights,
    jacobian_rows,
    lambdas_an,
    lambdas_bn,
    partitions,
    potential_an,
    potential_bn,
    reduce_to_subspace_an,
    saito_residue_bn,
    series_oracle_an,
    z_mu,
    zaslavsky_potential,
)

nonzero = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)


def test_partitions_and_z():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert z_mu((2, 1, 1)) == 2 * 2
    # sum of 1/z_mu over partitions of n is 1
    for n in range(1, 8):
        assert sum(Fraction(1, z_mu(mu)) for mu in partitions(n)) == 1


def test_power_sums():
    ps = DeformedPowerSums([1, 2], ("a", "b"))
    a, b = MultiPoly.gens(("a", "b"))
    assert ps[3] == a ** 3 + (b ** 3).scale(2)
    q = DeformedPowerSums([1, 2], ("a", "b"), step=2)
    assert q[1] == a ** 2 + (b ** 2).scale(2) and q.kind == "q"
    with pytest.raises(IndexError):
        ps[0]


def test_lambdas():
    assert lambdas_an([1, 1, 2], 2) == [Fraction(1, 2), Fraction(1, 2), 1]
    assert lambdas_bn([0, 1, 1], 2) == [0, Fraction(3, 4), Fraction(3, 4)]


@settings(max_examples=25, deadline=None)
@given(st.lists(nonzero, min_size=3, max_size=4).filter(lambda c: sum(c) != 0), st.integers(1, 3))
def test_an_forms_agree(c, kappa):
    if kappa > len(c) - 1:
        return
    F = potential_an(c, kappa)
    assert F == potential_an(c, kappa, method="determinant")
    assert F == series_oracle_an(c, kappa, method="exp")
    assert F == series_oracle_an(c, kappa, method="product")


@settings(max_examples=20, deadline=None)
@given(st.lists(nonzero, min_size=3, max_size=4).filter(lambda c: sum(c) != 0))
def test_reduced_an_potentials_are_flat(c):
    sys_ = instantiate("an", c=c)
    for kappa in range(1, len(c)):
        G = reduce_to_subspace_an(potential_an(c, kappa), c, kappa)
        assert G.variables == sys_.variables
        assert epd_check(sys_, G, kappa)


def test_reduction_is_translation_invariant():
    # the ambient potential is invariant under x -> x + s(1,...,1) on p1 = 0,
    # so the chart with x0 = 0 gives the same polynomial
    c = [2, -1, 3, 1]
    F = potential_an(c, 2)
    ys = ("y1", "y2", "y3")
    gens = MultiPoly.gens(ys)
    direct = F.compose([MultiPoly.zero(ys)] + gens)
    assert reduce_to_subspace_an(F, c, 2) == direct


def test_an_parameter_errors():
    with pytest.raises(PotentialError):
        potential_an([1, -1], 1)
    with pytest.raises(PotentialError):
        potential_an([1, 1, 1], 3)
    with pytest.raises(PotentialError):
        potential_an([1, 0, 1], 1)
    with pytest.raises(PotentialError):
        reduce_to_subspace_an(MultiPoly.var(("a",), 0), [1, 1])
    with pytest.raises(ValueError):
        potential_an([1, 1], 1, method="nope")
    with pytest.raises(ValueError):
        series_oracle_an([1, 1], 1, method="nope")


@pytest.mark.parametrize("lam", [[1, 2, 3], [0, 1, 2], [Fraction(1, 2), -3, 5, 7], [0, 0, 1]])
def test_jacobian_identity_any_weights(lam):
    assert jacobian_identity_for_weights(lam)


def test_jacobian_rows_order():
    rows = jacobian_rows([1, 1, 1])
    assert [r.degree() for r in rows] == [1, 3, 2]


@pytest.mark.parametrize("c", [[1, 1, 2], [0, 1, 1, 1], [-1, 1, 2, 2], [3, 1, 2, 5]])
def test_bn_potentials_are_flat(c):
    sys_ = instantiate("bn", c=c)
    for k in range(1, len(c)):
        F = potential_bn(c, k)
        assert F.degree() == 2 * k
        assert all(F.is_even_in(i) for i in range(len(c) - 1))
        assert epd_check(sys_, F, 2 * k - 1)


def test_bn_potential_spans_solution_space():
    c = [1, 1, 2, 3]
    sys_ = instantiate("bn", c=c)
    basis = flat_solve(sys_, 3)
    assert len(basis) == 1
    F, G = potential_bn(c, 2), basis.potentials[0]
    exp, lead = F.leading_term()
    assert G == F.scale(G.coefficient(exp) / lead)


def test_saito_residue_equals_bn_potential():
    for n in (2, 3):
        for k in range(1, n + 1):
            assert potential_bn([0] + [1] * n, k) == saito_residue_bn(n, k)


def test_f4_invariants_are_invariant_under_sign_changes_and_swaps():
    variables = ("x1", "x2", "x3", "x4")
    x = MultiPoly.gens(variables)
    for m in (2, 6, 8, 12):
        I = f4_invariant(m)
        assert I.is_homogeneous() and I.degree() == m
        for i in range(4):
            assert I.is_even_in(i)
        swapped = I.compose([x[1], x[0], x[2], x[3]])
        assert swapped == I


@pytest.mark.parametrize("s", [1, "1/2", 2, 0])
def test_f4_potentials_are_flat(s):
    sys_ = instantiate("f4", s=s)
    for kappa, F in f4_potentials(s):
        assert F.degree() == kappa + 1
        assert epd_check(sys_, F, kappa)


def test_f4_degenerate_parameter():
    with pytest.raises(PotentialError):
        f4_potentials(-1)


@pytest.mark.parametrize("n,m", [(3, 2), (2, 1), (3, 1), (4, 2)])
def test_zaslavsky_potentials_are_flat(n, m):
    sys_ = instantiate("bn", c=[-1] + [1] * (n - m) + [2] * m)
    F = zaslavsky_potential(n, m)
    assert F.degree() == n + m
    assert epd_check(sys_, F, n + m - 1)


def test_zaslavsky_range():
    with pytest.raises(PotentialError):
        zaslavsky_potential(3, 3)


@pytest.mark.parametrize("a2,b2", [(1, 3), (2, 1), (1, 1), ("1/2", 5)])
def test_dihedral_potentials_are_flat(a2, b2):
    sys_ = instantiate("dihedral_b2", a2=a2, b2=b2)
    for kappa, F in dihedral_b2_potentials(a2, b2):
        assert epd_check(sys_, F, kappa)


def test_potential_set_validation_and_json():
    x = MultiPoly.var(("x",), 0)
    with pytest.raises(ValueError):
        PotentialSet("demo", [x], [1, 2])
    with pytest.raises(ValueError):
        PotentialSet("demo", [x, x], [2, 1])
    data = PotentialSet("demo", [x ** 2], [1]).to_json()
    assert data["potentials"][0]["kappa"] == 1


def test_ambient_variables():
    assert ambient_variables(2) == ("x0", "x1", "x2")
