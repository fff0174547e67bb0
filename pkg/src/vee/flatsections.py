"""Polynomial flat sections of the ∨-connection.

A flat section ``psi`` of degree ``kappa`` is the ``G``-gradient of a
potential ``F`` (``grad F = G psi``), and ``F`` solves the
Euler-Poisson-Darboux type system

    d_i d_j F = kappa * sum_alpha w v_i v_j (d_{G^{-1} v} F) / (v . x)

for all coordinate pairs ``i <= j``. A polynomial solution forces every
``d_{G^{-1} v} F`` to vanish on its hyperplane (``F`` is quasi-invariant),
so the system is imposed as exact divisibility plus the polynomial identity
on the quotients. Both parts are linear in the coefficients of ``F``; the
default solver computes the quasi-invariants first and imposes the identity
on that smaller space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Sequence

from .algebra import (
    MultiPoly,
    PolyVectorField,
    RatMatrix,
    _echelon,
    format_rational,
    monomial_exponents,
    poly_determinant,
    sparse_kernel,
)
from .veesys import CovectorSystem, DegenerateForm, canonical_form, vee_duals

__all__ = [
    "PolyVectorField",
    "FlatBasis",
    "SectionProperties",
    "HarmonicResult",
    "QuasiInvariants",
    "flat_solve",
    "solve_sections_raw",
    "section_properties",
    "harmonic_test",
    "quasi_invariant_dim",
    "epd_check",
    "epd_check_cleared",
    "gradient_section",
    "lowered_field",
    "span_equal",
]


@dataclass
class FlatBasis:
    kappa: int
    sections: list[PolyVectorField]
    potentials: list[MultiPoly]

    def __len__(self) -> int:
        return len(self.potentials)

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa,
            "dimension": len(self.potentials),
            "potentials": [p.to_json() for p in self.potentials],
            "sections": [s.to_json() for s in self.sections],
        }


class _Data:
    """Per-system constants shared by the solvers."""

    def __init__(self, sys_: CovectorSystem):
        self.sys = sys_
        self.n = sys_.dimension
        self.variables = sys_.variables
        self.form = canonical_form(sys_)
        self.duals = vee_duals(sys_)          # raises DegenerateForm
        self.inv = self.form.inverse()
        self.dirs = sys_.directions
        self.weights = sys_.weights


def _check_kappa(kappa: int):
    if not isinstance(kappa, int) or kappa < 1:
        raise ValueError(f"kappa must be a positive integer, got {kappa!r}")


def gradient_section(sys_: CovectorSystem, potential: MultiPoly) -> PolyVectorField:
    """``psi = G^{-1} grad F``."""
    inv = canonical_form(sys_).inverse()
    grad = potential.gradient()
    comps = []
    for i in range(sys_.dimension):
        acc = MultiPoly.zero(potential.variables)
        for j, g in enumerate(grad):
            if inv[i, j]:
                acc = acc + g.scale(inv[i, j])
        comps.append(acc)
    return PolyVectorField(comps)


def lowered_field(sys_: CovectorSystem, psi: PolyVectorField) -> list[MultiPoly]:
    """``G psi``, the covector field paired with ``psi`` by the canonical form."""
    g = canonical_form(sys_)
    out = []
    for i in range(sys_.dimension):
        acc = MultiPoly.zero(psi.variables)
        for j, c in enumerate(psi):
            if g[i, j]:
                acc = acc + c.scale(g[i, j])
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# linear systems on coefficient vectors


def _potential_rows(data: _Data, kappa: int, degree: int, with_epd: bool):
    """Sparse constraint rows on the coefficients of a degree-``degree``
    polynomial, keyed by equation; columns follow ``monomial_exponents``."""
    exps = monomial_exponents(data.n, degree)
    rows: dict[tuple, dict[int, Fraction]] = {}
    pairs = [(i, j) for i in range(data.n) for j in range(i, data.n)]
    for col, e in enumerate(exps):
        mono = MultiPoly._raw(data.variables, {e: Fraction(1)})
        for a, (v, u, w) in enumerate(zip(data.dirs, data.duals, data.weights)):
            q, r = mono.directional_derivative(u).divmod_linear(v)
            for ee, c in r.terms.items():
                rows.setdefault(("r", a, ee), {})[col] = c
            if not with_epd:
                continue
            for i, j in pairs:
                f = v[i] * v[j]
                if not f:
                    continue
                f = -kappa * w * f
                for ee, c in q.terms.items():
                    row = rows.setdefault(("e", i, j, ee), {})
                    row[col] = row.get(col, 0) + f * c
        if with_epd:
            for i, j in pairs:
                d = mono.diff(i).diff(j)
                for ee, c in d.terms.items():
                    row = rows.setdefault(("e", i, j, ee), {})
                    row[col] = row.get(col, 0) + c
    return exps, [r for _, r in sorted(rows.items(), key=lambda kv: repr(kv[0]))]


def _vectors_to_polys(variables, exps, vectors) -> list[MultiPoly]:
    return [MultiPoly._raw(variables, {e: c for e, c in zip(exps, vec) if c}) for vec in vectors]


def _poly_mul_int(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _restriction_map(v: Sequence[int], degree: int, n: int) -> dict[tuple, dict]:
    """Integer images of the degree-``degree`` monomials under restriction to
    ``v . x = 0``, scaled by ``v_p**degree`` where ``p`` is the last
    nonzero coordinate of ``v`` (eliminated via ``v_p x_p = -sum v_i x_i``)."""
    p = max(i for i in range(n) if v[i])
    lin = {}
    for i in range(n):
        if i != p and v[i]:
            e = [0] * n
            e[i] = 1
            lin[tuple(e)] = -v[i]
    powers = [{(0,) * n: 1}]
    for _ in range(degree):
        powers.append(_poly_mul_int(powers[-1], lin))
    out = {}
    for f in monomial_exponents(n, degree):
        k = f[p]
        scale = v[p] ** (degree - k)
        base = list(f)
        base[p] = 0
        out[f] = {tuple(x + y for x, y in zip(base, e)): c * scale for e, c in powers[k].items()}
    return out


def _quasi_rows(data: _Data, degree: int):
    """Integer rows expressing that ``d_{G^{-1} v} p`` vanishes on each
    hyperplane, for ``p`` of the given degree."""
    n = data.n
    exps = monomial_exponents(n, degree)
    if degree == 0:
        return exps, []
    rows: dict[tuple, dict[int, int]] = {}
    for a, (v, u) in enumerate(zip(data.dirs, data.duals)):
        den = 1
        for x in u:
            den = den * x.denominator // gcd(den, x.denominator)
        ui = [int(x * den) for x in u]
        images = _restriction_map(v, degree - 1, n)
        for col, e in enumerate(exps):
            for k in range(n):
                if not (e[k] and ui[k]):
                    continue
                f = list(e)
                f[k] -= 1
                coef = ui[k] * e[k]
                for ee, c in images[tuple(f)].items():
                    row = rows.setdefault((a, ee), {})
                    row[col] = row.get(col, 0) + coef * c
    return exps, [r for _, r in sorted(rows.items())]


def _epd_residuals(data: _Data, potential: MultiPoly, kappa: int) -> list[MultiPoly] | None:
    """``d_i d_j F - kappa sum w v_i v_j q_alpha`` for ``i <= j``, where
    ``q_alpha`` is the exact quotient of ``d_{G^{-1}v} F`` by ``v . x``;
    None when some division leaves a remainder."""
    quots = []
    for v, u in zip(data.dirs, data.duals):
        q, r = potential.directional_derivative(u).divmod_linear(v)
        if not r.is_zero():
            return None
        quots.append(q)
    out = []
    for i in range(data.n):
        di = potential.diff(i)
        for j in range(i, data.n):
            rhs = MultiPoly.zero(data.variables)
            for v, w, q in zip(data.dirs, data.weights, quots):
                f = v[i] * v[j]
                if f:
                    rhs = rhs + q.scale(kappa * w * f)
            out.append(di.diff(j) - rhs)
    return out


def _canonical_span(variables, exps, polys: Sequence[MultiPoly]) -> list[MultiPoly]:
    """Reduced echelon basis of the span of ``polys`` (coefficients ordered
    by ``exps``)."""
    if not polys:
        return []
    index = {e: k for k, e in enumerate(exps)}
    piv = _echelon([{index[e]: c for e, c in p.terms.items()} for p in polys])
    out = []
    for c in sorted(piv):
        r = piv[c]
        lead = r[c]
        out.append(MultiPoly._raw(variables, {exps[j]: Fraction(x, lead) for j, x in r.items()}))
    return out


def flat_solve(sys_: CovectorSystem, kappa: int, check_sections: bool = False,
               method: str = "quasi") -> FlatBasis:
    """All polynomial flat sections of degree ``kappa``, via their potentials.

    ``method="quasi"`` first computes the quasi-invariants of degree
    ``kappa + 1``, which contain every potential, and then imposes the
    second-order equations on that (usually small) space. ``method="direct"``
    imposes divisibility and the second-order equations on all coefficients
    at once. Both return the same reduced echelon basis.

    With ``check_sections`` the first-order system for the sections is also
    solved directly and its span compared with the gradients found here.
    """
    _check_kappa(kappa)
    data = _Data(sys_)
    if method == "direct":
        exps, rows = _potential_rows(data, kappa, kappa + 1, with_epd=True)
        potentials = _vectors_to_polys(data.variables, exps, sparse_kernel(rows, len(exps)))
    elif method == "quasi":
        exps, rows = _quasi_rows(data, kappa + 1)
        basis = _vectors_to_polys(data.variables, exps, sparse_kernel(rows, len(exps)))
        index: dict[tuple, int] = {}
        trows: list[dict[int, Fraction]] = []
        for t, b in enumerate(basis):
            for k, poly in enumerate(_epd_residuals(data, b, kappa)):
                for e, c in poly.terms.items():
                    r = index.setdefault((k, e), len(index))
                    if r == len(trows):
                        trows.append({})
                    trows[r][t] = c
        combos = sparse_kernel(trows, len(basis)) if basis else []
        combined = []
        for vec in combos:
            acc = MultiPoly.zero(data.variables)
            for c, b in zip(vec, basis):
                if c:
                    acc = acc + b.scale(c)
            combined.append(acc)
        potentials = _canonical_span(data.variables, exps, combined)
    else:
        raise ValueError(f"unknown method {method!r}; use 'quasi' or 'direct'")
    sections = [gradient_section(sys_, f) for f in potentials]
    if check_sections:
        raw = solve_sections_raw(sys_, kappa)
        if not span_equal(sections, raw):
            raise AssertionError(
                f"section span mismatch at kappa={kappa}: {len(sections)} potentials vs {len(raw)} raw")
    return FlatBasis(kappa, sections, potentials)


def solve_sections_raw(sys_: CovectorSystem, kappa: int) -> list[PolyVectorField]:
    """Solve ``d_i psi = kappa sum w v_i (v.psi)/(v.x) G^{-1} v`` directly for
    homogeneous degree-``kappa`` vector fields, without assuming a potential."""
    _check_kappa(kappa)
    data = _Data(sys_)
    n = data.n
    exps = monomial_exponents(n, kappa)
    m = len(exps)
    rows: dict[tuple, dict[int, Fraction]] = {}
    for comp, (col, e) in product(range(n), enumerate(exps)):
        idx = comp * m + col
        mono = MultiPoly._raw(data.variables, {e: Fraction(1)})
        for a, (v, u, w) in enumerate(zip(data.dirs, data.duals, data.weights)):
            if not v[comp]:
                continue
            # v . psi picks up v[comp] * mono from this unknown
            q, r = mono.scale(v[comp]).divmod_linear(v)
            for ee, c in r.terms.items():
                rows.setdefault(("r", a, ee), {})[idx] = c
            for i, j in product(range(n), repeat=2):
                f = v[i] * u[j]
                if not f:
                    continue
                f = -kappa * w * f
                for ee, c in q.terms.items():
                    row = rows.setdefault(("e", i, j, ee), {})
                    row[idx] = row.get(idx, 0) + f * c
        for i in range(n):
            d = mono.diff(i)
            for ee, c in d.terms.items():
                row = rows.setdefault(("e", i, comp, ee), {})
                row[idx] = row.get(idx, 0) + c
    ordered = [r for _, r in sorted(rows.items(), key=lambda kv: repr(kv[0]))]
    kernel = sparse_kernel(ordered, n * m)
    fields = []
    for vec in kernel:
        comps = []
        for comp in range(n):
            chunk = vec[comp * m:(comp + 1) * m]
            comps.append(MultiPoly._raw(data.variables, {e: c for e, c in zip(exps, chunk) if c}))
        fields.append(PolyVectorField(comps))
    return fields


def _field_vector(psi: PolyVectorField) -> dict:
    out = {}
    for k, c in enumerate(psi):
        for e, v in c.terms.items():
            out[(k, e)] = v
    return out


def span_equal(a: Sequence[PolyVectorField], b: Sequence[PolyVectorField]) -> bool:
    """Do two lists of fields span the same rational vector space?"""
    keys = sorted({k for f in list(a) + list(b) for k in _field_vector(f)})
    index = {k: i for i, k in enumerate(keys)}

    def rank_of(fields):
        from .algebra import sparse_rank
        rows = []
        for f in fields:
            rows.append({index[k]: v for k, v in _field_vector(f).items()})
        return sparse_rank(rows)

    ra, rb = rank_of(a), rank_of(b)
    return ra == rb == rank_of(list(a) + list(b))


# ---------------------------------------------------------------------------
# checks on given polynomials


def epd_check(sys_: CovectorSystem, potential: MultiPoly, kappa: int) -> bool:
    """Does ``potential`` solve the EPD system at ``kappa`` exactly?"""
    _check_kappa(kappa)
    if potential.variables != sys_.variables:
        raise ValueError(f"potential variables {potential.variables} do not match {sys_.variables}")
    data = _Data(sys_)
    quots = []
    for v, u in zip(data.dirs, data.duals):
        q, r = potential.directional_derivative(u).divmod_linear(v)
        if not r.is_zero():
            return False
        quots.append(q)
    for i in range(data.n):
        di = potential.diff(i)
        for j in range(i, data.n):
            rhs = MultiPoly.zero(data.variables)
            for v, w, q in zip(data.dirs, data.weights, quots):
                f = v[i] * v[j]
                if f:
                    rhs = rhs + q.scale(kappa * w * f)
            if di.diff(j) != rhs:
                return False
    return True


def epd_check_cleared(sys_: CovectorSystem, potential: MultiPoly, kappa: int) -> bool:
    """The same test with denominators cleared by the defining polynomial:
    ``Q d_i d_j F == kappa sum w v_i v_j (Q / (v.x)) d_{G^{-1}v} F``.

    Much slower than :func:`epd_check`; kept as an independent check.
    """
    _check_kappa(kappa)
    data = _Data(sys_)
    forms = sys_.linear_forms()
    q_all = sys_.defining_polynomial()
    cofactors = []
    for k in range(len(forms)):
        c = MultiPoly.constant(data.variables, 1)
        for t, f in enumerate(forms):
            if t != k:
                c = c * f
        cofactors.append(c)
    ders = [potential.directional_derivative(u) for u in data.duals]
    for i in range(data.n):
        for j in range(i, data.n):
            lhs = q_all * potential.diff(i).diff(j)
            rhs = MultiPoly.zero(data.variables)
            for v, w, cof, d in zip(data.dirs, data.weights, cofactors, ders):
                f = v[i] * v[j]
                if f:
                    rhs = rhs + (cof * d).scale(kappa * w * f)
            if lhs != rhs:
                return False
    return True


@dataclass
class SectionProperties:
    is_gradient: bool
    potential: MultiPoly | None
    is_logarithmic: bool
    degree: int | None

    def to_json(self) -> dict:
        return {
            "is_gradient": self.is_gradient,
            "potential": None if self.potential is None else self.potential.to_json(),
            "is_logarithmic": self.is_logarithmic,
            "degree": self.degree,
        }


def _integrate(lowered: Sequence[MultiPoly]) -> MultiPoly:
    # closed polynomial 1-form: integrate each homogeneous piece along rays
    variables = lowered[0].variables
    xs = MultiPoly.gens(variables)
    total = MultiPoly.zero(variables)
    by_degree: dict[int, list[MultiPoly]] = {}
    for k, comp in enumerate(lowered):
        for d, part in comp.homogeneous_components().items():
            by_degree.setdefault(d, [MultiPoly.zero(variables) for _ in lowered])[k] = part
    for d, parts in by_degree.items():
        acc = MultiPoly.zero(variables)
        for x, p in zip(xs, parts):
            acc = acc + x * p
        total = total + acc.scale(Fraction(1, d + 1))
    return total


def section_properties(sys_: CovectorSystem, psi: PolyVectorField) -> SectionProperties:
    if psi.variables != sys_.variables:
        raise ValueError("field variables do not match the system")
    low = lowered_field(sys_, psi)
    n = sys_.dimension
    symmetric = all(low[i].diff(j) == low[j].diff(i) for i in range(n) for j in range(i + 1, n))
    potential = _integrate(low) if symmetric else None
    logarithmic = all(psi.contract(v).divides_by_linear(v) for v in sys_.directions)
    return SectionProperties(symmetric, potential, logarithmic, psi.degree())


# ---------------------------------------------------------------------------
# quasi-invariants


@dataclass
class QuasiInvariants:
    degree: int
    dim: int
    basis: list[MultiPoly]

    def to_json(self) -> dict:
        return {"degree": self.degree, "dim": self.dim, "basis": [p.to_json() for p in self.basis]}


def quasi_invariant_dim(sys_: CovectorSystem, degree: int) -> QuasiInvariants:
    """Homogeneous ``p`` of the given degree with ``d_{G^{-1}v} p`` divisible
    by ``v . x`` for every covector."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    data = _Data(sys_)
    exps, rows = _quasi_rows(data, degree)
    kernel = sparse_kernel(rows, len(exps))
    basis = _vectors_to_polys(data.variables, exps, kernel)
    return QuasiInvariants(degree, len(basis), basis)


def is_quasi_invariant(sys_: CovectorSystem, p: MultiPoly) -> bool:
    data = _Data(sys_)
    return all(p.directional_derivative(u).divides_by_linear(v)
               for v, u in zip(data.dirs, data.duals))


# ---------------------------------------------------------------------------
# harmonicity


@dataclass
class HarmonicResult:
    is_harmonic: bool
    degrees: list[int]
    dims: dict[int, int]
    sections: list[PolyVectorField] = field(default_factory=list)
    potentials: list[MultiPoly] = field(default_factory=list)
    jacobian: MultiPoly | None = None
    candidates_tried: list[tuple[int, ...]] = field(default_factory=list)
    quasi_dims: dict[int, int] = field(default_factory=dict)

    @property
    def certificate(self) -> dict:
        if self.is_harmonic:
            return {
                "kind": "sections",
                "degrees": list(self.degrees),
                "potentials": [p.to_json() for p in self.potentials],
                "jacobian": self.jacobian.to_json() if self.jacobian is not None else None,
            }
        return {
            "kind": "exhaustive",
            "solution_dims": {str(k): v for k, v in sorted(self.dims.items())},
            "candidates_tried": [list(c) for c in self.candidates_tried],
            "quasi_invariant_dims": {f"deg{k}": v for k, v in sorted(self.quasi_dims.items())},
        }

    def to_json(self) -> dict:
        return {
            "is_harmonic": self.is_harmonic,
            "degrees": list(self.degrees),
            "solution_dims": {str(k): v for k, v in sorted(self.dims.items())},
            "certificate": self.certificate,
        }


def _multisets(total: int, parts: int, dims: dict[int, int], low: int = 1, high: int | None = None):
    """Nondecreasing tuples of length ``parts`` summing to ``total`` with
    entries in ``low..high`` and each value used at most ``dims[value]`` times."""
    if high is None:
        high = total
    if parts == 0:
        if total == 0:
            yield ()
        return
    for k in range(low, min(high, total) + 1):
        if k * parts > total:
            break
        for rest in _multisets(total - k, parts - 1, dims, k, high):
            if (1 + rest.count(k)) <= dims.get(k, 0):
                yield (k,) + rest


def section_matrix_det(fields: Sequence[PolyVectorField]) -> MultiPoly:
    """Determinant of the square matrix whose rows are the fields' components."""
    return poly_determinant([list(f) for f in fields])


def harmonic_test(sys_: CovectorSystem, quasi_table: bool = True) -> HarmonicResult:
    """Search for ``n`` independent flat sections whose degrees sum to ``|A|``.

    Degrees range over ``1 .. |A| - (n - 1)``. Solution spaces are computed
    for increasing ``kappa``; after each new ``kappa`` every admissible degree
    multiset whose largest entry is that ``kappa`` is tried, with subsets of
    the computed bases in canonical order until the symbolic determinant is
    nonzero. By multilinearity of the determinant this search is exhaustive,
    and a harmonic system is recognised as soon as its largest degree has
    been reached.
    """
    n, m = sys_.dimension, len(sys_.covectors)
    bases: dict[int, FlatBasis] = {}
    dims: dict[int, int] = {}
    tried = []
    for top in range(1, m - (n - 1) + 1):
        bases[top] = flat_solve(sys_, top)
        dims[top] = len(bases[top])
        if not dims[top]:
            continue
        for cand in _multisets(m, n, dims, high=top):
            if cand[-1] != top:
                continue
            tried.append(cand)
            groups = sorted(set(cand))
            choices = [list(combinations(range(dims[k]), cand.count(k))) for k in groups]
            for pick in product(*choices):
                secs, pots, degs = [], [], []
                for k, idxs in zip(groups, pick):
                    for i in idxs:
                        secs.append(bases[k].sections[i])
                        pots.append(bases[k].potentials[i])
                        degs.append(k)
                det = section_matrix_det(secs)
                if not det.is_zero():
                    return HarmonicResult(True, degs, dims, secs, pots, det, tried)
    quasi = {}
    if quasi_table:
        for k in sorted(bases):
            quasi[k + 1] = quasi_invariant_dim(sys_, k + 1).dim
    return HarmonicResult(False, [], dims, candidates_tried=tried, quasi_dims=quasi)
