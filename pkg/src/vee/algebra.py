"""Exact rational scalars, sparse multivariate polynomials and dense rational
matrices.

Everything here is exact. Scalars are :class:`fractions.Fraction`; the
kernel and determinant routines work over the integers after clearing
denominators row by row, so intermediate sizes stay under control.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import comb, gcd
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]

__all__ = [
    "Rational",
    "MultiPoly",
    "RatMatrix",
    "DimensionError",
    "as_rational",
    "format_rational",
    "parse_rational",
    "kernel_basis",
    "sparse_kernel",
    "determinant",
    "rank",
    "rref",
    "homogeneous_basis",
    "monomial_exponents",
    "poly_determinant",
    "primitive_integer_vector",
    "default_variables",
    "PolyVectorField",
]


class DimensionError(ValueError):
    """Matrix or vector shapes do not fit the requested operation."""


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Decimal strings are refused on purpose."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    if any(ch in text for ch in ".eE"):
        raise ValueError(f"decimal notation is not exact: {text!r}")
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def default_variables(n: int, prefix: str = "x", start: int = 1) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(start, start + n))


def primitive_integer_vector(vec: Sequence[Scalar]) -> tuple[tuple[int, ...], Fraction]:
    """Return ``(u, lam)`` with ``vec == lam * u``, ``u`` integral, primitive
    and with positive first nonzero entry."""
    qs = [as_rational(x) for x in vec]
    if all(q == 0 for q in qs):
        raise ValueError("zero vector has no primitive form")
    den = reduce(lambda a, b: a * b // gcd(a, b), (q.denominator for q in qs), 1)
    ints = [int(q * den) for q in qs]
    g = reduce(gcd, (abs(a) for a in ints), 0)
    ints = [a // g for a in ints]
    sign = 1
    for a in ints:
        if a != 0:
            sign = 1 if a > 0 else -1
            break
    u = tuple(sign * a for a in ints)
    lam = Fraction(sign * g, den)
    return u, lam


# ---------------------------------------------------------------------------
# Polynomials


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _term_key(exp: tuple):
    # graded lex, largest first
    return (-sum(exp), tuple(-e for e in exp))


def monomial_exponents(n_vars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total ``degree`` in lexicographically decreasing order."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if n_vars == 0:
        return [()] if degree == 0 else []
    if n_vars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomial_exponents(n_vars - 1, degree - first):
            out.append((first,) + rest)
    return out


class MultiPoly:
    """Sparse polynomial with rational coefficients over named variables.

    Instances are treated as immutable. Terms map exponent tuples to nonzero
    :class:`Fraction` coefficients.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Scalar] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable names in {variables}")
        clean = {}
        if terms:
            n = len(variables)
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != n or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent {exp} for variables {variables}")
                c = as_rational(c)
                if c != 0:
                    clean[exp] = c
        self.variables = variables
        self.terms = clean

    # constructors -------------------------------------------------------
    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultiPoly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], which: Union[int, str]) -> "MultiPoly":
        variables = tuple(variables)
        i = variables.index(which) if isinstance(which, str) else which
        exp = [0] * len(variables)
        exp[i] = 1
        return cls._raw(variables, {tuple(exp): Fraction(1)})

    @classmethod
    def gens(cls, variables: Sequence[str]) -> list["MultiPoly"]:
        return [cls.var(variables, i) for i in range(len(tuple(variables)))]

    @classmethod
    def monomial(cls, variables: Sequence[str], exp: Sequence[int], coeff: Scalar = 1) -> "MultiPoly":
        return cls(variables, {tuple(exp): coeff})

    @classmethod
    def linear_form(cls, variables: Sequence[str], coeffs: Sequence[Scalar]) -> "MultiPoly":
        variables = tuple(variables)
        n = len(variables)
        if len(coeffs) != n:
            raise DimensionError("linear form length does not match variables")
        terms = {}
        for i, c in enumerate(coeffs):
            exp = [0] * n
            exp[i] = 1
            terms[tuple(exp)] = c
        return cls(variables, terms)

    # basic queries ------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_components(self) -> dict[int, "MultiPoly"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: MultiPoly._raw(self.variables, t) for d, t in sorted(parts.items())}

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _term_key(t[0]))

    def leading_term(self) -> tuple[tuple, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return min(self.terms.items(), key=lambda t: _term_key(t[0]))

    def is_even_in(self, i: int) -> bool:
        return all(e[i] % 2 == 0 for e in self.terms)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError(
                    f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        return MultiPoly.constant(self.variables, as_rational(other))

    def __add__(self, other) -> "MultiPoly":
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def scale(self, c: Scalar) -> "MultiPoly":
        c = as_rational(c)
        if c == 0:
            return MultiPoly.zero(self.variables)
        return MultiPoly._raw(self.variables, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return MultiPoly._raw(self.variables, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            other = as_rational(other)
            if other == 0:
                raise ZeroDivisionError("polynomial divided by zero")
            return self.scale(1 / other)
        return NotImplemented

    def __pow__(self, k: int) -> "MultiPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.constant(self.variables, other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # calculus and substitution -----------------------------------------
    def diff(self, which: Union[int, str]) -> "MultiPoly":
        i = self.variables.index(which) if isinstance(which, str) else which
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return MultiPoly._raw(self.variables, out)

    def gradient(self) -> list["MultiPoly"]:
        return [self.diff(i) for i in range(self.nvars)]

    def directional_derivative(self, u: Sequence[Scalar]) -> "MultiPoly":
        if len(u) != self.nvars:
            raise DimensionError("direction length does not match variables")
        out: dict = {}
        for i, ui in enumerate(u):
            ui = as_rational(ui)
            if ui == 0:
                continue
            for e, c in self.terms.items():
                k = e[i]
                if k:
                    ne = e[:i] + (k - 1,) + e[i + 1:]
                    out[ne] = out.get(ne, 0) + c * k * ui
        return MultiPoly._raw(self.variables, {e: c for e, c in out.items() if c})

    def evaluate(self, point: Union[Sequence[Scalar], Mapping[str, Scalar]]) -> Fraction:
        if isinstance(point, Mapping):
            point = [point[v] for v in self.variables]
        pt = [as_rational(p) for p in point]
        if len(pt) != self.nvars:
            raise DimensionError("point dimension does not match variables")
        total = Fraction(0)
        for e, c in self.terms.items():
            val = c
            for x, k in zip(pt, e):
                if k:
                    val *= x ** k
            total += val
        return total

    def compose(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``images[i]`` for the i-th variable. All images must share
        one variable set, which becomes the result's."""
        if len(images) != self.nvars:
            raise DimensionError("need one image per variable")
        if not images:
            raise ValueError("cannot compose a polynomial in zero variables")
        target = images[0].variables
        for im in images:
            if im.variables != target:
                raise ValueError("images must share variables")
        powers: list[dict[int, MultiPoly]] = [dict() for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = images[i] ** k
            return cache[k]

        result = MultiPoly.zero(target)
        for e, c in self.sorted_terms():
            term = MultiPoly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def rename(self, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        if len(variables) != self.nvars:
            raise DimensionError("renaming must keep the variable count")
        return MultiPoly._raw(variables, dict(self.terms))

    def divmod_linear(self, coeffs: Sequence[Scalar]) -> tuple["MultiPoly", "MultiPoly"]:
        """Divide by the linear form ``sum coeffs[i] * x_i``.

        Returns ``(q, r)`` with ``self == q * form + r`` and ``r`` free of the
        last variable that has a nonzero coefficient in the form.
        """
        coeffs = [as_rational(c) for c in coeffs]
        if len(coeffs) != self.nvars:
            raise DimensionError("linear form length does not match variables")
        piv = max((i for i, c in enumerate(coeffs) if c != 0), default=None)
        if piv is None:
            raise ZeroDivisionError("division by the zero linear form")
        inv = 1 / coeffs[piv]
        others = [(i, c * inv) for i, c in enumerate(coeffs) if i != piv and c != 0]
        work = dict(self.terms)
        quot: dict = {}
        rem: dict = {}
        # peel off the highest power of the pivot variable first
        while work:
            top = max(e[piv] for e in work)
            if top == 0:
                for e, c in work.items():
                    rem[e] = rem.get(e, 0) + c
                break
            layer = [(e, c) for e, c in work.items() if e[piv] == top]
            for e, _ in layer:
                del work[e]
            for e, c in layer:
                ne = e[:piv] + (top - 1,) + e[piv + 1:]
                qc = c * inv
                quot[ne] = quot.get(ne, 0) + qc
                # x_piv = (form - sum others)/coeff_piv
                for i, ci in others:
                    ee = list(ne)
                    ee[i] += 1
                    ee = tuple(ee)
                    v = work.get(ee, 0) - c * ci
                    if v:
                        work[ee] = v
                    else:
                        work.pop(ee, None)
        q = MultiPoly._raw(self.variables, {e: c for e, c in quot.items() if c})
        r = MultiPoly._raw(self.variables, {e: c for e, c in rem.items() if c})
        return q, r

    def divides_by_linear(self, coeffs: Sequence[Scalar]) -> bool:
        return self.divmod_linear(coeffs)[1].is_zero()

    # presentation -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "terms": [
                {"exponents": list(e), "coeff": format_rational(c)}
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        variables = data["variables"]
        terms = {}
        for t in data["terms"]:
            e = tuple(int(k) for k in t["exponents"])
            if e in terms:
                raise ValueError(f"duplicate exponent {e}")
            terms[e] = parse_rational(str(t["coeff"]))
        return cls(variables, terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            if not mono:
                s = format_rational(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{format_rational(c)}*{mono}"
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MultiPoly({self.variables}, {self})"


class PolyVectorField:
    """Vector field with polynomial components, one per variable."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[MultiPoly]):
        comps = tuple(components)
        if not comps:
            raise DimensionError("vector field needs at least one component")
        if any(c.variables != comps[0].variables for c in comps):
            raise ValueError("components must share one variable set")
        if len(comps) != comps[0].nvars:
            raise DimensionError("need one component per variable")
        self.components = comps

    @classmethod
    def euler(cls, variables: Sequence[str]) -> "PolyVectorField":
        return cls(MultiPoly.gens(variables))

    @property
    def variables(self) -> tuple[str, ...]:
        return self.components[0].variables

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i) -> MultiPoly:
        return self.components[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField([a + b for a, b in zip(self, other)])

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField([a - b for a, b in zip(self, other)])

    def __mul__(self, f) -> "PolyVectorField":
        return PolyVectorField([c * f for c in self])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self)

    def degree(self) -> int | None:
        """Common degree of a homogeneous nonzero field, else ``None``."""
        degs = {sum(e) for c in self for e in c.terms}
        return degs.pop() if len(degs) == 1 else None

    def contract(self, covector: Sequence[Scalar]) -> MultiPoly:
        """The polynomial ``sum covector[i] * X_i``."""
        out = MultiPoly.zero(self.variables)
        for a, c in zip(covector, self):
            if a:
                out = out + c.scale(a)
        return out

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self]

    @classmethod
    def from_json(cls, data) -> "PolyVectorField":
        return cls([MultiPoly.from_json(c) for c in data])

    def __repr__(self) -> str:
        return "PolyVectorField(" + ", ".join(str(c) for c in self) + ")"


def homogeneous_basis(n_vars: int, degree: int,
                      variables: Sequence[str] | None = None) -> list[MultiPoly]:
    """All monomials of total ``degree`` in graded-lex order, largest first."""
    if variables is None:
        variables = default_variables(n_vars)
    variables = tuple(variables)
    if len(variables) != n_vars:
        raise DimensionError("variable names do not match n_vars")
    exps = monomial_exponents(n_vars, degree)
    assert len(exps) == comb(n_vars + degree - 1, degree) if n_vars else True
    return [MultiPoly._raw(variables, {e: Fraction(1)}) for e in exps]


def poly_determinant(rows: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant of a small square matrix of polynomials.

    Laplace expansion along rows from the bottom up, memoising the minors on
    column subsets; cost is about ``n * 2**n`` polynomial products.
    """
    n = len(rows)
    if n == 0:
        raise DimensionError("empty matrix")
    if any(len(r) != n for r in rows):
        raise DimensionError("polynomial determinant needs a square matrix")
    variables = rows[0][0].variables
    # minors[cols] = det of the last len(cols) rows restricted to cols
    minors: dict[tuple, MultiPoly] = {(): MultiPoly.constant(variables, 1)}
    for size in range(1, n + 1):
        r = n - size
        new = {}
        for cols in combinations(range(n), size):
            acc = MultiPoly.zero(variables)
            for pos, c in enumerate(cols):
                entry = rows[r][c]
                if entry.is_zero():
                    continue
                sub = minors[cols[:pos] + cols[pos + 1:]]
                if sub.is_zero():
                    continue
                prod = entry * sub
                acc = acc + prod if pos % 2 == 0 else acc - prod
            new[cols] = acc
        minors = new
    return minors[tuple(range(n))]


# ---------------------------------------------------------------------------
# Matrices


class RatMatrix:
    """Dense immutable matrix of Fractions."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[Scalar]]):
        data = tuple(tuple(as_rational(x) for x in r) for r in rows)
        if not data or not data[0]:
            raise DimensionError("matrix must have at least one row and column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise DimensionError("ragged matrix rows")
        self.rows = data
        self.nrows = len(data)
        self.ncols = width

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "RatMatrix":
        return cls([[0] * c for _ in range(r)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_rational(x) for x in r) + "]" for r in self.rows)
        return f"RatMatrix([{body}])"

    def transpose(self) -> "RatMatrix":
        return RatMatrix(zip(*self.rows))

    T = property(transpose)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in addition")
        return RatMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in subtraction")
        return RatMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c: Scalar) -> "RatMatrix":
        c = as_rational(c)
        return RatMatrix([[c * a for a in r] for r in self.rows])

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise DimensionError("inner dimensions differ")
            cols = list(zip(*other.rows))
            return RatMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols]
                              for r in self.rows])
        vec = [as_rational(x) for x in other]
        if len(vec) != self.ncols:
            raise DimensionError("vector length differs from column count")
        return tuple(sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self.rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.nrows) for j in range(i + 1, self.ncols))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def trace(self) -> Fraction:
        if not self.is_square():
            raise DimensionError("trace of a non-square matrix")
        return sum((self.rows[i][i] for i in range(self.nrows)), Fraction(0))

    def inverse(self) -> "RatMatrix":
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            p = aug[col][col]
            aug[col] = [x / p for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return RatMatrix([r[n:] for r in aug])

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self.rows]


def _int_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    """Scale a sparse rational row to a primitive integer row."""
    items = [(k, as_rational(v)) for k, v in row.items() if v != 0]
    if not items:
        return {}
    den = reduce(lambda a, b: a * b // gcd(a, b), (v.denominator for _, v in items), 1)
    ints = {k: int(v * den) for k, v in items}
    g = reduce(gcd, (abs(v) for v in ints.values()), 0)
    if g > 1:
        ints = {k: v // g for k, v in ints.items()}
    return ints


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def _combine(a: int, row: dict[int, int], b: int, piv: dict[int, int]) -> dict[int, int]:
    """Return ``a*row - b*piv`` without zero entries."""
    out = {k: a * v for k, v in row.items()} if a != 1 else dict(row)
    for k, v in piv.items():
        s = out.get(k, 0) - b * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _echelon(rows: Iterable[Mapping[int, Scalar]]) -> dict[int, dict[int, int]]:
    """Fraction-free reduced echelon form of sparse rows.

    Returns ``{pivot column: integer row}``; every pivot row is zero in all
    other pivot columns.
    """
    pivots: dict[int, dict[int, int]] = {}
    for raw in rows:
        row = _int_row(raw)
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                pivots[c] = row
                break
            a, b = p[c], row[c]
            g = gcd(a, b)
            row = _primitive(_combine(a // g, row, b // g, p))
    # back substitution, highest pivot first
    for c in sorted(pivots, reverse=True):
        prow = pivots[c]
        for c2 in sorted(pivots):
            if c2 >= c:
                break
            r = pivots[c2]
            b = r.get(c)
            if b:
                a = prow[c]
                g = gcd(a, b)
                pivots[c2] = _primitive(_combine(a // g, r, b // g, prow))
    return pivots


# ---------------------------------------------------------------------------
# kernels

try:  # exact integer matrices in C, when available
    import flint as _flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    _flint = None


def _free_column_basis(pivots: Mapping[int, Mapping[int, int]], ncols: int) -> list[list[Fraction]]:
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for c, prow in pivots.items():
            v = prow.get(f)
            if v:
                vec[c] = Fraction(-v, prow[c])
        basis.append(vec)
    return basis


def _kernel_exact(rows: Sequence[dict[int, int]], ncols: int) -> list[list[Fraction]]:
    return _free_column_basis(_echelon(rows), ncols)


def _kernel_flint(rows: Sequence[dict[int, int]], ncols: int) -> list[list[Fraction]]:
    dense = [[0] * ncols for _ in rows]
    for out, row in zip(dense, rows):
        for k, v in row.items():
            out[k] = v
    null, nullity = _flint.fmpz_mat(dense).nullspace()
    return [[Fraction(int(null[i, j])) for i in range(ncols)] for j in range(nullity)]


def _kernel_rref(basis: list[list[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    if not basis:
        return []
    pivots = _echelon({k: v for k, v in enumerate(vec) if v} for vec in basis)
    out = []
    for c in sorted(pivots):
        r = pivots[c]
        lead = r[c]
        out.append(tuple(Fraction(r.get(j, 0), lead) for j in range(ncols)))
    return out


def sparse_kernel(rows: Iterable[Mapping[int, Scalar]], ncols: int,
                  method: str = "auto") -> list[tuple[Fraction, ...]]:
    """Right null space of a sparse matrix given as ``{column: value}`` rows.

    The basis returned is the reduced row echelon form of the null space
    (each vector has a leading 1 and the other vectors vanish in that
    column), so it does not depend on how it was computed. ``method`` is
    ``"flint"`` (integer nullspace from python-flint), ``"exact"``
    (fraction-free elimination in Python) or ``"auto"`` (flint if
    installed).
    """
    introws = []
    for raw in rows:
        r = _int_row(raw)
        for c in r:
            if not 0 <= c < ncols:
                raise DimensionError(f"column index {c} out of range")
        if r:
            introws.append(r)
    if method == "auto":
        method = "flint" if _flint is not None else "exact"
    if not introws:
        basis = [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    elif method == "flint":
        if _flint is None:
            raise RuntimeError("python-flint is not installed")
        basis = _kernel_flint(introws, ncols)
    elif method == "exact":
        basis = _kernel_exact(introws, ncols)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _kernel_rref(basis, ncols)


def sparse_rank(rows: Iterable[Mapping[int, Scalar]]) -> int:
    rows = [r for r in rows]
    ncols = 1 + max((k for r in rows for k, v in r.items() if v), default=-1)
    return ncols - len(sparse_kernel(rows, ncols))


def _dense_rows(m: RatMatrix) -> list[dict[int, Fraction]]:
    return [{j: x for j, x in enumerate(r) if x != 0} for r in m.rows]


def kernel_basis(m: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space of ``m`` in reduced echelon form."""
    return sparse_kernel(_dense_rows(m), m.ncols)


def rref(m: RatMatrix) -> tuple[RatMatrix | None, tuple[int, ...]]:
    """Reduced row echelon form (nonzero rows only) and the pivot columns.

    Returns ``(None, ())`` for the zero matrix.
    """
    pivots = _echelon(_dense_rows(m))
    if not pivots:
        return None, ()
    cols = tuple(sorted(pivots))
    out = []
    for c in cols:
        r = pivots[c]
        lead = r[c]
        out.append([Fraction(r.get(j, 0), lead) for j in range(m.ncols)])
    return RatMatrix(out), cols


def rank(m: RatMatrix) -> int:
    return len(_echelon(_dense_rows(m)))


def determinant(m: RatMatrix) -> Fraction:
    """Exact determinant by Bareiss fraction-free elimination."""
    if not m.is_square():
        raise DimensionError(f"determinant of a {m.nrows}x{m.ncols} matrix")
    n = m.nrows
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for r in m.rows for x in r), 1)
    a = [[int(x * den) for x in r] for r in m.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], den ** n)
