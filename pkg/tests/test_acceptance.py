"""The ten acceptance criteria, one test (or a few) per criterion.

All comparisons are exact.  A summary line per criterion is printed at the
end of the pytest run under "acceptance criteria".
"""

import contextlib
import io
import json
import random
from fractions import Fraction
from math import gcd

import pytest

from vee import cli
from vee.algebra import MultiPoly, RatMatrix
from vee.arrangements import (
    delete_hyperplane,
    factorization_check,
    poincare_polynomial,
    restrict_arrangement,
    saito_criterion,
)
from vee.families import instantiate
from vee.flatsections import (
    epd_check,
    flat_solve,
    gradient_section,
    harmonic_test,
    is_quasi_invariant,
    quasi_invariant_dim,
    section_properties,
)
from vee.potentials import (
    f4_potentials,
    potential_an,
    potential_bn,
    reduce_to_subspace_an,
    saito_residue_bn,
    series_oracle_an,
    jacobian_identity_symbolic,
    jacobian_identity_check,
    zaslavsky_potential,
)
from vee.veesys import (
    CovectorSystem,
    DegenerateForm,
    canonical_form,
    holonomy_check,
    vee_check,
    well_distributed_check,
)

T = ("t",)


def poly_t(coeffs):
    return MultiPoly(T, {(k,): c for k, c in enumerate(coeffs) if c})


def expand(*factors):
    """Product of ``(1 + b t)`` over the given ``b``."""
    out = MultiPoly.constant(T, 1)
    for b in factors:
        out = out * poly_t([1, b])
    return out


def corpus_stdout():
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(["corpus"])
    return code, buf.getvalue()


@pytest.fixture(scope="module")
def corpus_run():
    return corpus_stdout()


# ---------------------------------------------------------------------------
# 1. vee-verification corpus

FAMILY_POINTS = {
    "an": [{"c": c} for c in ([1, 1], [1, 2, 3], [2, -1, 5], [1, 1, 1, 1], [3, 1, -2, 5],
                               [1, 2, 3, 4, 5], [-1, 2, 2, 7, 1])],
    "bn": [{"c": c} for c in ([1, 1, 2], [0, 1, 1], [-1, 1, 3], [1, 1, 2, 3], [0, 1, 1, 1],
                               [2, 1, -1, 5], [1, 1, 1, 1, 1], [0, 1, 2, 3, 4], [-1, 1, 1, 1, 2])],
    "f4": [{"s": s} for s in (1, "1/2", 2, 3, "-1/3")],
    "f3": [{"s": s} for s in (1, 2, "1/3", "-1/5")],
    "g3": [{"t": t} for t in (1, "1/2", 2, "-1/3")],
    "d3": [{"t": t, "s": s} for t, s in ((2, 5), (2, 3), (1, 1), (3, 2))],
    "ab4": [{"k": k} for k in (2, 1, "1/3", 3)],
    "ab4_a1_1": [{"s": s} for s in (1, "1/2", 2)],
    "ab4_a1_2": [{"s": s} for s in (1, 2, "1/3")],
    "dihedral_b2": [{"a2": a, "b2": b} for a, b in ((1, 3), (2, 1), (1, 1))],
}


def _perturbed(rng):
    """A corpus-style system with one weight nudged, or a random small system."""
    base_family = rng.choice(["an", "bn", "f3", "g3", "d3", "ab4_a1_2", "dihedral_b2"])
    sys_ = instantiate(base_family, **rng.choice(FAMILY_POINTS[base_family]))
    weights = list(sys_.weights)
    if rng.random() < 0.8:
        i = rng.randrange(len(weights))
        weights[i] += Fraction(rng.choice([-2, -1, 1, 2]), rng.randint(1, 4))
        if weights[i] == 0:
            weights[i] = Fraction(1, 7)
    return sys_.with_weights(weights)


@pytest.mark.criterion(1, "vee-conditions on every family; holonomy agrees with vee_check")
def test_criterion_1_families_are_vee_systems():
    for family, points in FAMILY_POINTS.items():
        assert len(points) >= 3
        for params in points:
            sys_ = instantiate(family, **params)
            report = vee_check(sys_)
            assert report.is_vee_system, (family, params, report.failures)
            assert holonomy_check(sys_).passes


@pytest.mark.criterion(1, "vee-conditions on every family; holonomy agrees with vee_check")
def test_criterion_1_degenerate_f3_is_euclidean():
    sys_ = instantiate("f3", s="-1/2")
    wd = well_distributed_check(sys_, RatMatrix.identity(3))
    assert wd.proportional and wd.mu == 0


@pytest.mark.criterion(1, "vee-conditions on every family; holonomy agrees with vee_check")
def test_criterion_1_holonomy_agrees_on_corpus_and_perturbations(corpus_run):
    code, out = corpus_run
    rows = json.loads(out)["payload"]["rows"]
    for row in rows:
        assert row["holonomy_agrees"] in (True, None), row["name"]
    rng = random.Random(2024)
    negatives = 0
    for _ in range(100):
        sys_ = _perturbed(rng)
        try:
            v = vee_check(sys_).is_vee_system
        except DegenerateForm:
            continue
        negatives += not v
        assert holonomy_check(sys_).passes == v, sys_.to_json()
    assert negatives >= 50


# ---------------------------------------------------------------------------
# 2. flat sections of A3


@pytest.mark.criterion(2, "flat sections of A3: dimensions, degrees, gradient/logarithmic/quasi-invariant")
def test_criterion_2_a3_flat_sections(a3):
    for kappa in (1, 2, 3):
        basis = flat_solve(a3, kappa)
        assert len(basis) >= 1
        for psi, F in zip(basis.sections, basis.potentials):
            props = section_properties(a3, psi)
            assert props.is_gradient and props.is_logarithmic
            assert props.degree == kappa
            assert gradient_section(a3, props.potential) == psi
            assert is_quasi_invariant(a3, F)
            assert is_quasi_invariant(a3, props.potential)
    h = harmonic_test(a3)
    assert h.is_harmonic and sorted(h.degrees) == [1, 2, 3]
    assert sum(h.degrees) == 6 == len(a3)


# ---------------------------------------------------------------------------
# 3. non-harmonic B3(-1;1,1,3)


@pytest.mark.criterion(3, "B3(-1;1,1,3): quasi-invariants 0 and 2, not harmonic, Poincare (1+t)(1+3t)^2")
def test_criterion_3_non_harmonic(b3_restricted):
    assert quasi_invariant_dim(b3_restricted, 3).dim == 0
    assert quasi_invariant_dim(b3_restricted, 4).dim == 2
    h = harmonic_test(b3_restricted)
    assert not h.is_harmonic
    cert = h.certificate
    assert cert["kind"] == "exhaustive"
    assert cert["quasi_invariant_dims"]["deg3"] == 0
    assert cert["quasi_invariant_dims"]["deg4"] == 2
    assert poincare_polynomial(b3_restricted) == expand(1, 3, 3)


# ---------------------------------------------------------------------------
# 4. degenerate F3


@pytest.mark.criterion(4, "F3 at s=-1/2: zero canonical form, Poincare 1+10t+35t^2+26t^3 does not split")
def test_criterion_4_counterexample():
    sys_ = instantiate("f3", s="-1/2")
    assert canonical_form(sys_).is_zero()
    wd = well_distributed_check(sys_, RatMatrix.identity(3))
    assert wd.proportional and wd.mu == 0
    p = poincare_polynomial(sys_)
    assert p == poly_t([1, 10, 35, 26])
    assert factorization_check(p, 3) is None


# ---------------------------------------------------------------------------
# 5. A_n potentials


def _random_c(rng, n):
    while True:
        c = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5)) for _ in range(n + 1)]
        if sum(c) != 0:
            return c


@pytest.mark.criterion(5, "A_n potentials: four formulas agree, Jacobian identity, reduced potentials flat")
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_criterion_5_an_forms_agree(n):
    rng = random.Random(100 + n)
    for _ in range(20):
        c = _random_c(rng, n)
        sys_ = instantiate("an", c=c)
        for kappa in range(1, n + 1):
            F = potential_an(c, kappa)
            assert F == potential_an(c, kappa, method="determinant")
            assert F == series_oracle_an(c, kappa, method="exp")
            assert F == series_oracle_an(c, kappa, method="product")
            assert epd_check(sys_, reduce_to_subspace_an(F, c, kappa), kappa)


@pytest.mark.criterion(5, "A_n potentials: four formulas agree, Jacobian identity, reduced potentials flat")
@pytest.mark.parametrize("n", [1, 2, 3])
def test_criterion_5_jacobian_identity(n):
    assert jacobian_identity_symbolic(n)
    rng = random.Random(n)
    for _ in range(3):
        assert jacobian_identity_check(_random_c(rng, n))


# ---------------------------------------------------------------------------
# 6. B_n potentials


@pytest.mark.criterion(6, "B_n potentials flat at kappa=2k-1; Saito residue; harmonic degrees 1,3,...,2n-1")
def test_criterion_6_bn_potentials():
    for c in ([1, 1, 2], [0, 1, 1], [-1, 1, 3], [1, 1, 2, 3], [0, 1, 1, 1], [2, 1, -1, 5],
              [Fraction(1, 2), 3, 1, 2]):
        n = len(c) - 1
        sys_ = instantiate("bn", c=c)
        for k in range(1, n + 1):
            assert epd_check(sys_, potential_bn(c, k), 2 * k - 1), (c, k)


@pytest.mark.criterion(6, "B_n potentials flat at kappa=2k-1; Saito residue; harmonic degrees 1,3,...,2n-1")
@pytest.mark.parametrize("n", [1, 2, 3])
def test_criterion_6_saito_residue(n):
    c = [0] + [1] * n
    for k in range(1, n + 1):
        F, S = potential_bn(c, k), saito_residue_bn(n, k)
        exp, lead = S.leading_term()
        ratio = F.coefficient(exp) / lead
        assert ratio != 0 and F == S.scale(ratio)


@pytest.mark.criterion(6, "B_n potentials flat at kappa=2k-1; Saito residue; harmonic degrees 1,3,...,2n-1")
@pytest.mark.parametrize("c", [[1, 1, 2], [1, 1, 2, 3], [2, 1, 3, 5]])
def test_criterion_6_bn_harmonic(c):
    n = len(c) - 1
    h = harmonic_test(instantiate("bn", c=c))
    assert h.is_harmonic
    assert sorted(h.degrees) == list(range(1, 2 * n, 2))


# ---------------------------------------------------------------------------
# 7. Zaslavsky


@pytest.mark.criterion(7, "Zaslavsky bn(-1,1,2,2): harmonic {1,3,4}; its potential completes a Saito basis")
def test_criterion_7_zaslavsky():
    sys_ = instantiate("bn", c=[-1, 1, 2, 2])
    h = harmonic_test(sys_)
    assert h.is_harmonic and sorted(h.degrees) == [1, 3, 4]
    F = zaslavsky_potential(3, 2)
    assert epd_check(sys_, F, 4)
    fields = [flat_solve(sys_, 1).sections[0], flat_solve(sys_, 3).sections[0],
              gradient_section(sys_, F)]
    cert = saito_criterion(sys_, fields)
    assert cert.valid, cert.reasons
    assert sorted(cert.degrees) == [1, 3, 4]
    assert sum(cert.degrees) == 8 == len(sys_)


# ---------------------------------------------------------------------------
# 8. F4


@pytest.mark.criterion(8, "F4 potentials flat at kappa=1,5,7,11 for s=1,1/2,2; Saito with sum 24")
@pytest.mark.parametrize("s", ["1", "1/2", "2"])
def test_criterion_8_f4(s):
    sys_ = instantiate("f4", s=s)
    pots = f4_potentials(s)
    assert pots.kappas == [1, 5, 7, 11]
    for kappa, F in pots:
        assert epd_check(sys_, F, kappa), kappa
    cert = saito_criterion(sys_, [gradient_section(sys_, F) for _, F in pots])
    assert cert.valid, cert.reasons
    assert sum(cert.degrees) == 24 == len(sys_)


@pytest.mark.slow
@pytest.mark.criterion(8, "F4 potentials flat at kappa=1,5,7,11 for s=1,1/2,2; Saito with sum 24")
def test_criterion_8_f4_kappa_11_solution_space():
    """The direct solver (no quasi-invariant reduction) finds exactly the
    line spanned by the closed-form potential."""
    sys_ = instantiate("f4", s=1)
    basis = flat_solve(sys_, 11, method="direct")
    assert len(basis) == 1
    F = f4_potentials(1).potentials[3]
    exp, lead = F.leading_term()
    G = basis.potentials[0]
    assert G == F.scale(G.coefficient(exp) / lead)


# ---------------------------------------------------------------------------
# 9. arrangement engine


def _random_arrangement(rng):
    n = rng.randint(2, 4)
    dirs = set()
    target = rng.randint(n, 8)
    while len(dirs) < target:
        v = [rng.randint(-2, 2) for _ in range(n)]
        if any(v):
            g = 0
            for x in v:
                g = gcd(g, abs(x))
            v = [x // g for x in v]
            first = next(x for x in v if x)
            if first < 0:
                v = [-x for x in v]
            dirs.add(tuple(v))
    return CovectorSystem.from_pairs(n, [(d, 1) for d in sorted(dirs)], arrangement_only=True)


@pytest.mark.criterion(9, "arrangement engine: Arnold's formula, deletion-restriction, D5 double restriction")
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_criterion_9_braid(n):
    assert poincare_polynomial(instantiate("braid", n=n)) == expand(*range(1, n))


@pytest.mark.criterion(9, "arrangement engine: Arnold's formula, deletion-restriction, D5 double restriction")
def test_criterion_9_deletion_restriction():
    rng = random.Random(9)
    t = MultiPoly.var(T, 0)
    for _ in range(50):
        arr = _random_arrangement(rng)
        assert len(arr) <= 8 and arr.dimension <= 4
        i = rng.randrange(len(arr))
        whole = poincare_polynomial(arr)
        deleted = poincare_polynomial(delete_hyperplane(arr, i))
        restricted = poincare_polynomial(restrict_arrangement(arr, i))
        assert whole == deleted + t * restricted, arr.to_json()


@pytest.mark.criterion(9, "arrangement engine: Arnold's formula, deletion-restriction, D5 double restriction")
def test_criterion_9_d5_double_restriction():
    d5 = instantiate("bn", c=[-1, 1, 1, 1, 1, 1])
    assert len(d5) == 20
    once = restrict_arrangement(d5, d5.index_of((0, 0, 1, -1, 0)))
    twice = restrict_arrangement(once, once.index_of((0, 0, 1, -1)))
    assert len(twice) == 7
    assert poincare_polynomial(twice) == expand(1, 3, 3)
    assert sorted(twice.directions) == sorted(instantiate("bn", c=[-1, 1, 1, 3]).directions)


# ---------------------------------------------------------------------------
# 10. determinism


@pytest.mark.criterion(10, "repeated corpus runs are byte-identical")
def test_criterion_10_determinism(corpus_run):
    code, first = corpus_run
    assert code == 0, first
    code2, second = corpus_stdout()
    assert code2 == 0
    assert first == second
    assert json.loads(first)["payload"]["mismatched"] == []
