"""Hyperplane arrangements of covector systems: intersection lattice,
Poincaré polynomial, factorization over the integers, logarithmic vector
fields, Saito's freeness criterion, deletion and restriction.

Only the directions matter here; weights are ignored throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    MultiPoly,
    PolyVectorField,
    RatMatrix,
    format_rational,
    kernel_basis,
    poly_determinant,
    primitive_integer_vector,
    rref,
)
from .veesys import CovectorSystem, WeightedCovector

__all__ = [
    "LatticeElement",
    "IntersectionLattice",
    "FreenessCertificate",
    "intersection_lattice",
    "poincare_polynomial",
    "integer_factors",
    "factorization_check",
    "is_logarithmic",
    "saito_criterion",
    "hyperplane_basis",
    "restrict_arrangement",
    "delete_hyperplane",
]


@dataclass(frozen=True)
class LatticeElement:
    """A flat: the intersection of the hyperplanes in ``hyperplanes``.

    ``key`` is the reduced row echelon form of the normals (empty for the
    whole space); ``hyperplanes`` is closed, i.e. holds every hyperplane
    containing the flat.
    """

    key: tuple
    codim: int
    hyperplanes: frozenset
    mobius: int

    def to_json(self) -> dict:
        return {
            "codim": self.codim,
            "echelon": [[format_rational(x) for x in row] for row in self.key],
            "hyperplanes": sorted(self.hyperplanes),
            "mobius": self.mobius,
        }


@dataclass
class IntersectionLattice:
    dimension: int
    n_hyperplanes: int
    elements: list[LatticeElement]

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def bottom(self) -> LatticeElement:
        return self.elements[0]

    def rank(self) -> int:
        return max(e.codim for e in self.elements)

    def at_codim(self, k: int) -> list[LatticeElement]:
        return [e for e in self.elements if e.codim == k]

    def leq(self, a: LatticeElement, b: LatticeElement) -> bool:
        """Reverse inclusion of subspaces: ``a <= b`` iff ``b`` lies in ``a``."""
        return a.hyperplanes <= b.hyperplanes

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "hyperplanes": self.n_hyperplanes,
            "elements": [e.to_json() for e in self.elements],
        }


class _Span:
    """Row space of integer vectors, kept in reduced echelon form."""

    def __init__(self, rows: Sequence[Sequence[int]], ncols: int):
        self.ncols = ncols
        if rows:
            m, piv = rref(RatMatrix(rows))
        else:
            m, piv = None, ()
        self.rows = m.rows if m is not None else ()
        self.pivots = piv

    def contains(self, v: Sequence[int]) -> bool:
        w = [Fraction(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            if w[p]:
                c = w[p]
                w = [a - c * b for a, b in zip(w, row)]
        return not any(w)


def intersection_lattice(sys_: CovectorSystem) -> IntersectionLattice:
    """All flats, ordered by (codimension, echelon key), with Möbius values."""
    n = sys_.dimension
    dirs = sys_.directions
    m = len(dirs)
    bottom = ((), 0, frozenset())
    levels = [[bottom]]
    seen = {(): frozenset()}
    while True:
        nxt: dict[tuple, tuple] = {}
        for key, codim, hs in levels[-1]:
            base = [dirs[i] for i in sorted(hs)]
            for h in range(m):
                if h in hs:
                    continue
                span = _Span(base + [dirs[h]], n)
                k = span.rows
                if k in nxt or k in seen:
                    continue
                closed = frozenset(i for i in range(m) if i in hs or i == h or span.contains(dirs[i]))
                nxt[k] = (k, codim + 1, closed)
        if not nxt:
            break
        level = sorted(nxt.values(), key=lambda t: t[0])
        for k, _, hs in level:
            seen[k] = hs
        levels.append(level)
    flat = [item for level in levels for item in level]
    mobius: list[int] = []
    for idx, (_, _, hs) in enumerate(flat):
        if idx == 0:
            mobius.append(1)
            continue
        mobius.append(-sum(mu for (_, _, ys), mu in zip(flat[:idx], mobius) if ys < hs))
    elements = [LatticeElement(k, c, hs, mu) for (k, c, hs), mu in zip(flat, mobius)]
    return IntersectionLattice(n, m, elements)


def poincare_polynomial(lat: IntersectionLattice | CovectorSystem) -> MultiPoly:
    """``sum_X mu(X) (-t)**codim(X)``, a polynomial in the variable ``t``."""
    if isinstance(lat, CovectorSystem):
        lat = intersection_lattice(lat)
    coeffs: dict[tuple, Fraction] = {}
    for e in lat.elements:
        c = Fraction(e.mobius * (-1) ** e.codim)
        coeffs[(e.codim,)] = coeffs.get((e.codim,), 0) + c
    return MultiPoly(("t",), coeffs)


def _coefficients(p) -> list[int]:
    if isinstance(p, MultiPoly):
        if p.nvars != 1:
            raise ValueError("expected a polynomial in one variable")
        d = max(p.degree(), 0)
        raw = [p.coefficient((k,)) for k in range(d + 1)]
    else:
        raw = [Fraction(x) for x in p]
    if any(Fraction(x).denominator != 1 for x in raw):
        raise ValueError("polynomial must have integer coefficients")
    coeffs = [int(x) for x in raw]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs or coeffs[0] != 1:
        raise ValueError("polynomial must have constant term 1")
    return coeffs


def _divisors(a: int) -> list[int]:
    a = abs(a)
    small = [d for d in range(1, int(a ** 0.5) + 1) if a % d == 0]
    return sorted(set(small + [a // d for d in small]))


def _divide_one_plus(coeffs: list[int], b: int) -> list[int] | None:
    """Quotient of the polynomial by ``1 + b t`` if exact, else None."""
    out = []
    rem = 0
    # synthetic division from the constant term upward
    for a in coeffs[:-1]:
        q = a - rem
        out.append(q)
        rem = b * q
    if coeffs[-1] != rem:
        return None
    return out


def integer_factors(p) -> tuple[list[int], list[int]]:
    """Peel off factors ``1 + b t`` with positive integers ``b``.

    Returns the peeled ``b`` values in ascending order and the coefficient
    list (constant term first) of what is left.
    """
    coeffs = _coefficients(p)
    factors = []
    while len(coeffs) > 1:
        for b in _divisors(coeffs[-1]):
            q = _divide_one_plus(coeffs, b)
            if q is not None:
                factors.append(b)
                coeffs = q
                break
        else:
            break
    return sorted(factors), coeffs


def factorization_check(p, n: int | None = None) -> list[int] | None:
    """``[b_1 <= ... <= b_k]`` with ``p == prod (1 + b_i t)``, or None.

    With ``n`` the list is padded with zeros to length ``n`` (the factors
    ``1 + 0 t`` of a non-essential arrangement).
    """
    factors, rest = integer_factors(p)
    if len(rest) != 1:
        return None
    if n is not None:
        if len(factors) > n:
            return None
        factors = [0] * (n - len(factors)) + factors
    return factors


def is_logarithmic(sys_: CovectorSystem, X: PolyVectorField) -> bool:
    """Is ``X`` tangent to every hyperplane, i.e. ``v . X`` divisible by ``v . x``?"""
    if len(X) != sys_.dimension:
        raise ValueError(f"field has {len(X)} components, arrangement dimension is {sys_.dimension}")
    if X.variables != sys_.variables:
        raise ValueError(f"field variables {X.variables} differ from {sys_.variables}")
    return all(X.contract(v).divides_by_linear(v) for v in sys_.directions)


@dataclass
class FreenessCertificate:
    fields: list[PolyVectorField]
    degrees: list[int]
    det_ratio: Fraction
    valid: bool
    reasons: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "degrees": list(self.degrees),
            "degree_sum": sum(self.degrees),
            "det_ratio": format_rational(self.det_ratio),
            "reasons": list(self.reasons),
            "fields": [f.to_json() for f in self.fields],
        }


def saito_criterion(sys_: CovectorSystem, fields: Sequence[PolyVectorField]) -> FreenessCertificate:
    """Certify freeness: ``n`` logarithmic fields whose degrees sum to the
    number of hyperplanes and whose coefficient determinant is a nonzero
    constant multiple of the defining polynomial."""
    n = sys_.dimension
    fields = list(fields)
    if len(fields) != n:
        raise ValueError(f"need exactly {n} fields, got {len(fields)}")
    degrees = []
    for k, f in enumerate(fields):
        d = f.degree()
        if d is None:
            raise ValueError(f"field {k} is not homogeneous")
        degrees.append(d)
    reasons = []
    for k, f in enumerate(fields):
        if not is_logarithmic(sys_, f):
            reasons.append(f"field {k} is not logarithmic")
    if sum(degrees) != len(sys_):
        reasons.append(f"degree sum {sum(degrees)} differs from {len(sys_)} hyperplanes")
    det = poly_determinant([list(f) for f in fields])
    q = sys_.defining_polynomial()
    exp, lead = q.leading_term()
    ratio = det.coefficient(exp) / lead
    if det.is_zero():
        reasons.append("determinant vanishes identically")
    elif ratio == 0 or det != q.scale(ratio):
        reasons.append("determinant is not a constant multiple of the defining polynomial")
        ratio = Fraction(0)
    return FreenessCertificate(fields, degrees, ratio, not reasons, reasons)


def hyperplane_basis(sys_: CovectorSystem, index: int) -> list[tuple[Fraction, ...]]:
    """A basis of the hyperplane ``v . x = 0`` of covector ``index``."""
    if not 0 <= index < len(sys_):
        raise IndexError(f"hyperplane index {index} out of range 0..{len(sys_) - 1}")
    return kernel_basis(RatMatrix([sys_.directions[index]]))


def restrict_arrangement(sys_: CovectorSystem, index: int) -> CovectorSystem:
    """The arrangement induced on the hyperplane of covector ``index``,
    written in the coordinates of :func:`hyperplane_basis`."""
    basis = hyperplane_basis(sys_, index)
    seen = set()
    covs = []
    for j, v in enumerate(sys_.directions):
        if j == index:
            continue
        img = [sum(Fraction(a) * b for a, b in zip(v, vec)) for vec in basis]
        if not any(img):
            continue
        prim, _ = primitive_integer_vector(img)
        if prim not in seen:
            seen.add(prim)
            covs.append(WeightedCovector(prim, Fraction(1)))
    name = f"{sys_.name or 'arrangement'}|H{index}"
    return CovectorSystem(len(basis), tuple(covs), name=name, arrangement_only=True)


def delete_hyperplane(sys_: CovectorSystem, index: int) -> CovectorSystem:
    if not 0 <= index < len(sys_):
        raise IndexError(f"hyperplane index {index} out of range 0..{len(sys_) - 1}")
    covs = tuple(c for k, c in enumerate(sys_.covectors) if k != index)
    name = f"{sys_.name or 'arrangement'}-H{index}"
    return CovectorSystem(sys_.dimension, covs, name=name, variables=sys_.variables, arrangement_only=True)
