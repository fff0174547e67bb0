"""Named families of ∨-systems with rational parameters.

Weights are the squares of the scale factors, so parameters that enter only
through ``t**2`` are exposed as ``s = t**2``. Covectors whose weight
vanishes at special parameter values are dropped and recorded in the
system's notes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .algebra import as_rational, default_variables, format_rational
from .veesys import CovectorSystem

__all__ = ["FamilySpec", "FamilyError", "instantiate", "FAMILIES", "parse_params"]

FAMILIES = (
    "an", "bn", "f4", "f3", "g3", "d3", "ab4", "ab4_a1_1", "ab4_a1_2",
    "dihedral_b2", "boolean", "braid",
)

_IRRATIONAL = ("h3", "h4", "dihedral", "i2")


class FamilyError(ValueError):
    """Parameters outside the family's allowed range."""


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: Mapping[str, object] = field(default_factory=dict)


def _e(i: int, n: int) -> list[int]:
    v = [0] * n
    v[i] = 1
    return v


def _vec(n: int, entries: Mapping[int, int]) -> list[int]:
    v = [0] * n
    for k, x in entries.items():
        v[k] = x
    return v


def _clist(params) -> list[Fraction]:
    try:
        c = params["c"]
    except KeyError:
        raise FamilyError("parameter list c=c0,c1,...,cn is required") from None
    if not isinstance(c, (list, tuple)):
        c = [c]
    return [as_rational(x) for x in c]


def _q(params, key) -> Fraction:
    try:
        return as_rational(params[key])
    except KeyError:
        raise FamilyError(f"parameter {key} is required") from None


def _int(params, key) -> int:
    v = _q(params, key)
    if v.denominator != 1 or v < 1:
        raise FamilyError(f"parameter {key} must be a positive integer")
    return int(v)


def _build(name, n, pairs, variables=None) -> CovectorSystem:
    kept, dropped = [], []
    for d, w in pairs:
        w = as_rational(w)
        if w == 0:
            dropped.append(tuple(d))
        else:
            kept.append((d, w))
    notes = tuple(f"dropped zero-weight covector {d}" for d in dropped)
    if dropped:
        name = f"{name} (dropped {len(dropped)} zero-weight)"
    return CovectorSystem.from_pairs(n, kept, name=name, variables=variables, notes=notes)


def _check_c(c: Sequence[Fraction], fam: str):
    if len(c) < 2:
        raise FamilyError(f"{fam} needs c0 and at least one more parameter")
    if any(x == 0 for x in c[1:]):
        raise FamilyError(f"{fam}: all c_i with i >= 1 must be nonzero")
    if sum(c) == 0:
        raise FamilyError(f"{fam}: degenerate canonical form, sigma = c0 + ... + cn = 0")


def _an(p):
    c = _clist(p)
    _check_c(c, "an")
    if c[0] == 0:
        raise FamilyError("an: all c_i must be nonzero")
    n = len(c) - 1
    pairs = []
    # chart y_i = x_i - x_0
    for i in range(1, n + 1):
        pairs.append((_e(i - 1, n), c[0] * c[i]))
        for j in range(i + 1, n + 1):
            pairs.append((_vec(n, {i - 1: 1, j - 1: -1}), c[i] * c[j]))
    label = "an(" + ",".join(format_rational(x) for x in c) + ")"
    return _build(label, n, pairs, variables=default_variables(n, "y"))


def _bn(p):
    c = _clist(p)
    _check_c(c, "bn")
    n = len(c) - 1
    pairs = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for s in (1, -1):
                pairs.append((_vec(n, {i - 1: 1, j - 1: s}), c[i] * c[j]))
        pairs.append((_e(i - 1, n), 2 * c[i] * (c[i] + c[0])))
    label = "bn(" + ",".join(format_rational(x) for x in c) + ")"
    return _build(label, n, pairs)


def _f4(p):
    s = _q(p, "s")
    if s == -1:
        raise FamilyError("f4: s = t^2 = -1 gives a degenerate canonical form")
    n = 4
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            for sg in (1, -1):
                pairs.append((_vec(n, {i: 1, j: sg}), 1))
        pairs.append((_e(i, n), 2 * s))
    for signs in product((1, -1), repeat=3):
        pairs.append(([1, *signs], s / 2))
    return _build(f"f4(s={format_rational(s)})", n, pairs)


def _f3(p):
    s = _q(p, "s")
    a = 4 * s + 2
    n = 3
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            for sg in (1, -1):
                pairs.append((_vec(n, {i: 1, j: sg}), 1))
    for i in range(n):
        pairs.append((_e(i, n), a))
    for s1, s2 in product((1, -1), repeat=2):
        pairs.append(([1, s1, s2], 2 * s))
    return _build(f"f3(s={format_rational(s)})", n, pairs)


def _g3(p):
    t = _q(p, "t")
    if t in (0, Fraction(-1, 2)):
        raise FamilyError("g3: t must differ from 0 and -1/2")
    a, b, c = 2 * t + 1, (2 * t - 1) / 3, 3 / t
    pairs = [
        ([1, 0, 0], a), ([0, 1, 0], a), ([1, 1, 0], a),
        ([1, -1, 0], b), ([2, 1, 0], b), ([1, 2, 0], b),
        ([0, 0, 1], c),
    ]
    for sg in (1, -1):
        pairs += [([1, 0, sg], 1), ([0, 1, sg], 1), ([1, 1, sg], 1)]
    return _build(f"g3(t={format_rational(t)})", 3, pairs)


def _d3(p):
    t, s = _q(p, "t"), _q(p, "s")
    if t == 0 or s == 0 or s + t + 1 == 0:
        raise FamilyError("d3: need s != 0, t != 0 and s + t + 1 != 0")
    pairs = [([1, a, b], 1) for a, b in product((1, -1), repeat=2)]
    pairs += [
        ([1, 0, 0], 2 * (s + t - 1)),
        ([0, 1, 0], 2 * (s - t + 1) / t),
        ([0, 0, 1], 2 * (t - s + 1) / s),
    ]
    return _build(f"d3(t={format_rational(t)},s={format_rational(s)})", 3, pairs)


def _ab4(p):
    k = _q(p, "k")
    if k in (0, Fraction(-1, 3)):
        raise FamilyError("ab4: k must differ from 0 and -1/3 (k = -1/3 has zero canonical form)")
    a, b, c = (3 * k + 1) / 2, (3 * k - 1) / 4, (1 - k) / (2 * k)
    n = 4
    pairs = [(_e(i, n), a) for i in range(3)]
    for i in range(3):
        for j in range(i + 1, 3):
            for sg in (1, -1):
                pairs.append((_vec(n, {i: 1, j: sg}), b))
    pairs.append((_e(3, n), c))
    for signs in product((1, -1), repeat=3):
        pairs.append(([1, *signs], Fraction(1, 4)))
    return _build(f"ab4(k={format_rational(k)})", n, pairs)


def _ab4_a1_1(p):
    s = _q(p, "s")
    if s in (-1, Fraction(-1, 2)):
        raise FamilyError("ab4_a1_1: s = t^2 must differ from -1 and -1/2")
    pairs = [
        ([1, 0, 0], 2 * (2 * s + 1)),
        ([0, 1, 0], 8 * (s + 1)),
        ([0, 0, 1], 2 * s * (2 * s - 1) / (s + 1)),
        ([1, 1, 0], 2), ([1, -1, 0], 2),
        ([1, 0, 1], 2 * s), ([1, 0, -1], 2 * s),
    ]
    pairs += [([1, 2 * a, b], s) for a, b in product((1, -1), repeat=2)]
    return _build(f"ab4_a1_1(s={format_rational(s)})", 3, pairs)


def _ab4_a1_2(p):
    s = _q(p, "s")
    if s in (-1, Fraction(-1, 2), Fraction(-1, 4)):
        raise FamilyError("ab4_a1_2: s = t^2 must differ from -1, -1/2 and -1/4")
    pairs = [
        ([1, 1, 0], 1), ([1, 0, 1], 1), ([0, 1, 1], 1),
        ([1, 0, 0], 2), ([0, 1, 0], 2), ([0, 0, 1], 2),
        ([1, 1, 1], 2 * s / (s + 1)),
    ]
    w = 1 / (4 * s + 1)
    pairs += [([1, -1, 0], w), ([1, 0, -1], w), ([0, 1, -1], w)]
    return _build(f"ab4_a1_2(s={format_rational(s)})", 3, pairs)


def _dihedral_b2(p):
    a2, b2 = _q(p, "a2"), _q(p, "b2")
    if a2 == 0 or b2 == 0 or a2 + b2 == 0:
        raise FamilyError("dihedral_b2: need a2 != 0, b2 != 0, a2 + b2 != 0")
    pairs = [([1, 0], a2), ([0, 1], a2), ([1, 1], b2 / 2), ([1, -1], b2 / 2)]
    return _build(f"dihedral_b2(a2={format_rational(a2)},b2={format_rational(b2)})", 2, pairs)


def _boolean(p):
    n = _int(p, "n")
    return _build(f"boolean({n})", n, [(_e(i, n), 1) for i in range(n)])


def _braid(p):
    n = _int(p, "n")
    if n < 2:
        raise FamilyError("braid(n) needs n >= 2 points")
    sys_ = _an({"c": [1] * n})
    return CovectorSystem(sys_.dimension, sys_.covectors, f"braid({n})", sys_.variables)


_BUILDERS = {
    "an": _an, "bn": _bn, "f4": _f4, "f3": _f3, "g3": _g3, "d3": _d3,
    "ab4": _ab4, "ab4_a1_1": _ab4_a1_1, "ab4_a1_2": _ab4_a1_2,
    "dihedral_b2": _dihedral_b2, "boolean": _boolean, "braid": _braid,
}


def instantiate(spec: FamilySpec | str, **params) -> CovectorSystem:
    """Build the covector system of a named family.

    ``instantiate("bn", c=[-1, 1, 1, 3])`` and
    ``instantiate(FamilySpec("bn", {"c": [-1, 1, 1, 3]}))`` are equivalent.
    """
    if isinstance(spec, str):
        spec = FamilySpec(spec, params)
    fam = spec.family.lower().replace("-", "_")
    if fam in _IRRATIONAL:
        raise FamilyError(f"{fam}: irrational coordinates unsupported")
    try:
        builder = _BUILDERS[fam]
    except KeyError:
        raise FamilyError(f"unknown family {spec.family!r}; known: {', '.join(FAMILIES)}") from None
    return builder(dict(spec.params))


def parse_params(text: str | None) -> dict[str, object]:
    """Parse ``"c=-1,1,1,3,s=2"`` style parameter strings.

    A value runs until the next ``name=``; values with several comma
    separated items become lists.
    """
    out: dict[str, object] = {}
    if not text:
        return out
    key = None
    for tok in text.split(","):
        tok = tok.strip()
        if "=" in tok:
            key, val = tok.split("=", 1)
            key = key.strip()
            if not key.isidentifier():
                raise FamilyError(f"bad parameter name {key!r}")
            out[key] = [val.strip()] if val.strip() else []
        elif key is None:
            raise FamilyError(f"value {tok!r} before any parameter name")
        else:
            out[key].append(tok)
    parsed: dict[str, object] = {}
    for k, vals in out.items():
        try:
            qs = [as_rational(v) for v in vals]
        except (ValueError, ZeroDivisionError) as exc:
            raise FamilyError(f"parameter {k}: {exc}") from None
        parsed[k] = qs if (len(qs) != 1 or k == "c") else qs[0]
    return parsed
