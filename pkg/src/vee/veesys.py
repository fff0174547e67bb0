"""Weighted covector configurations and the checks that decide whether they
form a ∨-system.

A covector ``alpha`` is stored as a primitive integer direction ``v`` with a
rational weight ``w`` such that ``alpha ⊗ alpha = w · v ⊗ v``. Every formula
used here is quadratic in each covector, so square roots of weights never
appear and all arithmetic stays in the rationals. A negative weight stands
for a covector with a purely imaginary scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .algebra import (
    MultiPoly,
    RatMatrix,
    as_rational,
    default_variables,
    format_rational,
    kernel_basis,
    parse_rational,
    primitive_integer_vector,
    rank,
    rref,
)

__all__ = [
    "WeightedCovector",
    "CovectorSystem",
    "PlaneRecord",
    "VeeReport",
    "HolonomyReport",
    "WellDistributed",
    "DegenerateForm",
    "InvalidSystem",
    "canonical_form",
    "vee_dual",
    "vee_check",
    "holonomy_check",
    "well_distributed_check",
    "irreducible_components",
    "planes",
    "load_system",
    "dump_system",
]


class DegenerateForm(ArithmeticError):
    """The canonical form has a kernel, so ∨-duals do not exist."""

    def __init__(self, kernel: Sequence[Sequence[Fraction]]):
        self.kernel = [tuple(v) for v in kernel]
        shown = "; ".join("(" + ", ".join(format_rational(x) for x in v) + ")" for v in self.kernel)
        super().__init__(f"degenerate canonical form, kernel spanned by {shown}")


class InvalidSystem(ValueError):
    """Invalid covector system input."""


@dataclass(frozen=True)
class WeightedCovector:
    direction: tuple[int, ...]
    weight: Fraction

    def __post_init__(self):
        d = tuple(int(x) for x in self.direction)
        prim, lam = primitive_integer_vector(d)
        if prim != d:
            raise InvalidSystem(f"direction {d} is not primitive with positive leading entry")
        w = as_rational(self.weight)
        if w == 0:
            raise InvalidSystem(f"covector {d} has zero weight")
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "weight", w)

    @classmethod
    def normalized(cls, direction: Sequence, weight) -> tuple["WeightedCovector", bool]:
        """Build from any nonzero rational direction, rescaling the weight so the
        rank-one tensor is unchanged. The flag reports whether anything moved."""
        prim, lam = primitive_integer_vector(direction)
        w = as_rational(weight) * lam * lam
        changed = prim != tuple(direction) or lam != 1
        return cls(prim, w), changed

    def linear_form(self, variables: Sequence[str]) -> MultiPoly:
        return MultiPoly.linear_form(variables, self.direction)


@dataclass(frozen=True)
class CovectorSystem:
    """A finite list of non-collinear weighted covectors.

    ``arrangement_only`` marks systems whose weights carry no meaning (for
    example restrictions); ∨-checks refuse them. Such systems may also fail
    to span, which deletion in the arrangement code needs.
    """

    dimension: int
    covectors: tuple[WeightedCovector, ...]
    name: str | None = None
    variables: tuple[str, ...] | None = None
    arrangement_only: bool = False
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        n = int(self.dimension)
        if n < 1:
            raise InvalidSystem("dimension must be positive")
        covs = tuple(sorted(self.covectors, key=lambda c: c.direction))
        for c in covs:
            if len(c.direction) != n:
                raise InvalidSystem(f"direction {c.direction} has wrong length for dimension {n}")
        for a, b in zip(covs, covs[1:]):
            if a.direction == b.direction:
                raise InvalidSystem(f"collinear covectors share direction {a.direction}")
        variables = tuple(self.variables) if self.variables else default_variables(n)
        if len(variables) != n:
            raise InvalidSystem("variable names do not match the dimension")
        object.__setattr__(self, "dimension", n)
        object.__setattr__(self, "covectors", covs)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "notes", tuple(self.notes))
        if not covs:
            if not self.arrangement_only:
                raise InvalidSystem("empty covector system")
        elif not self.arrangement_only and self.rank() != n:
            raise InvalidSystem(f"covectors span a {self.rank()}-dimensional subspace, not {n}")

    @classmethod
    def from_pairs(cls, dimension: int, pairs: Iterable[tuple[Sequence, object]], **kw) -> "CovectorSystem":
        covs = []
        notes = list(kw.pop("notes", ()))
        for d, w in pairs:
            c, changed = WeightedCovector.normalized(d, w)
            if changed:
                notes.append(f"normalized direction {tuple(d)} to {c.direction}")
            covs.append(c)
        return cls(dimension, tuple(covs), notes=tuple(notes), **kw)

    def __len__(self) -> int:
        return len(self.covectors)

    @property
    def directions(self) -> list[tuple[int, ...]]:
        return [c.direction for c in self.covectors]

    @property
    def weights(self) -> list[Fraction]:
        return [c.weight for c in self.covectors]

    def rank(self) -> int:
        if not self.covectors:
            return 0
        return rank(RatMatrix(self.directions))

    def index_of(self, direction: Sequence[int]) -> int:
        prim, _ = primitive_integer_vector(direction)
        for i, c in enumerate(self.covectors):
            if c.direction == prim:
                return i
        raise KeyError(f"no covector with direction {prim}")

    def linear_forms(self) -> list[MultiPoly]:
        return [c.linear_form(self.variables) for c in self.covectors]

    def defining_polynomial(self) -> MultiPoly:
        q = MultiPoly.constant(self.variables, 1)
        for f in self.linear_forms():
            q = q * f
        return q

    def with_weights(self, weights: Sequence) -> "CovectorSystem":
        if len(weights) != len(self.covectors):
            raise InvalidSystem("one weight per covector required")
        covs = tuple(WeightedCovector(c.direction, w) for c, w in zip(self.covectors, weights))
        return CovectorSystem(self.dimension, covs, self.name, self.variables)

    def to_json(self) -> dict:
        out = {"dimension": self.dimension}
        if self.name is not None:
            out["name"] = self.name
        if self.variables != default_variables(self.dimension):
            out["variables"] = list(self.variables)
        if self.arrangement_only:
            out["arrangement_only"] = True
        out["covectors"] = [
            {"direction": list(c.direction), "weight": format_rational(c.weight)}
            for c in self.covectors
        ]
        return out


def load_system(data) -> CovectorSystem:
    """Parse the JSON form (a dict, or a JSON string).

    Non-primitive or negatively led directions are normalized with the
    weight rescaled; every such change is recorded in ``notes``.
    """
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        n = int(data["dimension"])
        raw = data["covectors"]
    except (KeyError, TypeError) as exc:
        raise InvalidSystem(f"malformed system JSON: {exc}") from None
    pairs = []
    for entry in raw:
        try:
            d = [int(x) for x in entry["direction"]]
            w = parse_rational(str(entry.get("weight", "1")))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSystem(f"malformed covector {entry!r}: {exc}") from None
        if any(x != int(x) for x in entry["direction"]):
            raise InvalidSystem("directions must be integer vectors")
        pairs.append((d, w))
    order_before = [tuple(d) for d, _ in pairs]
    sys_ = CovectorSystem.from_pairs(
        n, pairs, name=data.get("name"), variables=data.get("variables"),
        arrangement_only=bool(data.get("arrangement_only", False)))
    notes = list(sys_.notes)
    if [c.direction for c in sys_.covectors] != [primitive_integer_vector(d)[0] for d in order_before]:
        notes.append("covectors re-sorted into canonical order")
    if notes != list(sys_.notes):
        object.__setattr__(sys_, "notes", tuple(notes))
    return sys_


def dump_system(sys_: CovectorSystem) -> str:
    return json.dumps(sys_.to_json(), indent=2)


# ---------------------------------------------------------------------------
# canonical form and duals


def canonical_form(sys_: CovectorSystem) -> RatMatrix:
    """``G = sum w v v^T`` over the covectors."""
    n = sys_.dimension
    g = [[Fraction(0)] * n for _ in range(n)]
    for c in sys_.covectors:
        v, w = c.direction, c.weight
        for i in range(n):
            if v[i]:
                wi = w * v[i]
                row = g[i]
                for j in range(n):
                    if v[j]:
                        row[j] += wi * v[j]
    return RatMatrix(g)


def _inverse_form(sys_: CovectorSystem) -> RatMatrix:
    g = canonical_form(sys_)
    ker = kernel_basis(g)
    if ker:
        raise DegenerateForm(ker)
    return g.inverse()


def _require_weights(sys_: CovectorSystem):
    if sys_.arrangement_only:
        raise InvalidSystem("system carries no ∨-weights (arrangement only); supply weights first")


def vee_dual(sys_: CovectorSystem, index: int) -> tuple[Fraction, ...]:
    """``G^{-1} v`` for the direction of covector ``index``."""
    _require_weights(sys_)
    if not 0 <= index < len(sys_.covectors):
        raise IndexError(f"covector index {index} out of range")
    return _inverse_form(sys_) @ sys_.covectors[index].direction


def vee_duals(sys_: CovectorSystem) -> list[tuple[Fraction, ...]]:
    _require_weights(sys_)
    ginv = _inverse_form(sys_)
    return [ginv @ c.direction for c in sys_.covectors]


# ---------------------------------------------------------------------------
# planes


def _span_key(vectors: Sequence[Sequence[int]]) -> tuple:
    m, _ = rref(RatMatrix(vectors))
    return m.rows


def planes(sys_: CovectorSystem) -> list[tuple[tuple, tuple[int, ...]]]:
    """All 2D spans holding at least two covector directions.

    Returns ``(echelon key, covector indices)`` pairs sorted by key.
    """
    groups: dict[tuple, set[int]] = {}
    dirs = sys_.directions
    seen: set[tuple[int, int]] = set()
    for i, j in combinations(range(len(dirs)), 2):
        if (i, j) in seen:
            continue
        key = _span_key([dirs[i], dirs[j]])
        members = groups.setdefault(key, set())
        members.update((i, j))
        # members of a known plane need no further pair keys among themselves
        for a, b in combinations(sorted(members), 2):
            seen.add((a, b))
    return sorted(((k, tuple(sorted(v))) for k, v in groups.items()), key=lambda kv: kv[0])


def _key_json(key: tuple) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in key]


@dataclass
class PlaneRecord:
    indices: tuple[int, ...]
    kind: str
    nu: Fraction | None
    passed: bool
    basis: tuple = ()

    def to_json(self) -> dict:
        return {
            "covectors": list(self.indices),
            "kind": self.kind,
            "nu": None if self.nu is None else format_rational(self.nu),
            "passed": self.passed,
            "basis": _key_json(self.basis),
        }


@dataclass
class VeeReport:
    is_vee_system: bool
    canonical_form: RatMatrix
    planes: list[PlaneRecord]
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "is_vee_system": self.is_vee_system,
            "canonical_form": self.canonical_form.to_json(),
            "planes": [p.to_json() for p in self.planes],
            "failures": list(self.failures),
        }


def _dot(a, b) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def _plane_operator_matrix(sys_, ginv, idx, basis):
    """Matrix of ``u -> sum_beta w_beta (v_beta . G^{-1} u) v_beta`` on the
    plane, in the echelon ``basis`` (rows)."""
    out = []
    bm = RatMatrix(basis)
    pivots = rref(bm)[1]
    for b in basis:
        gb = ginv @ b
        img = [Fraction(0)] * sys_.dimension
        for k in idx:
            c = sys_.covectors[k]
            s = c.weight * _dot(c.direction, gb)
            if s:
                for t, x in enumerate(c.direction):
                    img[t] += s * x
        # echelon basis: coordinates are the entries at pivot columns
        coords = [img[p] for p in pivots]
        recon = [sum((coords[r] * basis[r][t] for r in range(len(basis))), Fraction(0))
                 for t in range(sys_.dimension)]
        if recon != img:
            raise AssertionError("plane operator left the plane")
        out.append(coords)
    # rows above are images of basis vectors; transpose to act on columns
    return [list(col) for col in zip(*out)]


def vee_check(sys_: CovectorSystem) -> VeeReport:
    """Verify the ∨-conditions plane by plane.

    Two-covector planes need ``v^T G^{-1} v' = 0``; planes with more
    covectors need the summed operator restricted to the plane to be a
    multiple ``nu`` of the identity.
    """
    _require_weights(sys_)
    g = canonical_form(sys_)
    ginv = _inverse_form(sys_)
    records = []
    failures = []
    for key, idx in planes(sys_):
        if len(idx) == 2:
            a, b = (sys_.covectors[i].direction for i in idx)
            val = _dot(a, ginv @ b)
            ok = val == 0
            rec = PlaneRecord(idx, "two-covector", None, ok, key)
            if not ok:
                failures.append(
                    f"plane {list(idx)}: G(dual {idx[0]}, dual {idx[1]}) = {format_rational(val)} != 0")
        else:
            mat = _plane_operator_matrix(sys_, ginv, idx, key)
            nu = mat[0][0]
            ok = mat[0][1] == 0 and mat[1][0] == 0 and mat[1][1] == nu
            rec = PlaneRecord(idx, "multi-covector", nu if ok else None, ok, key)
            if not ok:
                shown = [[format_rational(x) for x in r] for r in mat]
                failures.append(f"plane {list(idx)}: restricted operator {shown} is not scalar")
        records.append(rec)
    return VeeReport(not failures, g, records, failures)


@dataclass
class HolonomyReport:
    passes: bool
    failing_planes: list[tuple[int, ...]]

    def to_json(self) -> dict:
        return {"passes": self.passes, "failing_planes": [list(p) for p in self.failing_planes]}


def _rank_one(u, v) -> list[list[Fraction]]:
    return [[a * b for b in v] for a in u]


def _matmul(a, b):
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in cols] for r in a]


def holonomy_check(sys_: CovectorSystem) -> HolonomyReport:
    """Check the holonomy Lie algebra relations for ``t_alpha -> w (G^{-1}v) v^T``."""
    _require_weights(sys_)
    duals = vee_duals(sys_)
    rho = []
    for c, d in zip(sys_.covectors, duals):
        rho.append(_rank_one([c.weight * x for x in d], c.direction))
    failing = []
    n = sys_.dimension
    for _, idx in planes(sys_):
        total = [[sum((rho[k][i][j] for k in idx), Fraction(0)) for j in range(n)] for i in range(n)]
        for k in idx:
            ab = _matmul(rho[k], total)
            ba = _matmul(total, rho[k])
            if ab != ba:
                failing.append(idx)
                break
    return HolonomyReport(not failing, failing)


@dataclass
class WellDistributed:
    proportional: bool
    mu: Fraction | None

    def to_json(self) -> dict:
        return {"proportional": self.proportional,
                "mu": None if self.mu is None else format_rational(self.mu)}


def well_distributed_check(sys_: CovectorSystem, form: RatMatrix) -> WellDistributed:
    """Is the canonical form a scalar multiple (possibly zero) of ``form``?"""
    if form.shape != (sys_.dimension, sys_.dimension):
        raise ValueError("form has the wrong shape")
    if not form.is_symmetric():
        raise ValueError("form must be symmetric")
    if kernel_basis(form):
        raise ValueError("form must be nondegenerate")
    ga = canonical_form(sys_)
    i, j = next((i, j) for i in range(form.nrows) for j in range(form.ncols) if form[i, j] != 0)
    mu = ga[i, j] / form[i, j]
    if ga == form.scale(mu):
        return WellDistributed(True, mu)
    return WellDistributed(False, None)


def _restrict_to_span(sys_: CovectorSystem, members: Sequence[int], tag: str) -> CovectorSystem:
    dirs = [sys_.covectors[i].direction for i in members]
    basis, pivots = rref(RatMatrix(dirs))
    r = len(pivots)
    pairs = []
    for i in members:
        c = sys_.covectors[i]
        coords = [Fraction(c.direction[p]) for p in pivots]
        pairs.append((coords, c.weight))
    name = f"{sys_.name}[{tag}]" if sys_.name else tag
    return CovectorSystem.from_pairs(r, pairs, name=name)


def irreducible_components(sys_: CovectorSystem) -> list[CovectorSystem]:
    """Split into groups with complementary spans, each in its own coordinates.

    Two covectors belong together when some minimal dependent subset holds
    both. With a basis chosen greedily in canonical order, the groups are the
    connected pieces of the fundamental circuits of the non-basis covectors.
    """
    dirs = sys_.directions
    m = len(dirs)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    basis: list[int] = []
    for i in range(m):
        if rank(RatMatrix([dirs[j] for j in basis + [i]])) > len(basis):
            basis.append(i)
    bmat = RatMatrix([dirs[j] for j in basis]).T
    for i in range(m):
        if i in basis:
            continue
        # coordinates of dirs[i] in the basis: kernel of [B | -v]
        aug = RatMatrix([list(r) + [-x] for r, x in zip(bmat.rows, dirs[i])])
        (sol,) = kernel_basis(aug)
        for j, coeff in zip(basis, sol[:-1]):
            if coeff != 0:
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    ordered = sorted(groups.values(), key=lambda g: g[0])
    return [_restrict_to_span(sys_, g, f"component {k}") for k, g in enumerate(ordered)]
