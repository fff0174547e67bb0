"""Closed-form potentials for the A_n(c), B_n(c), F4, Zaslavsky and B2
dihedral families.

The A_n potential of degree ``kappa + 1`` is the coefficient of
``u**(kappa+1)`` in ``prod_i (1 - x_i u)**lambda_i`` with
``lambda_i = kappa c_i / sigma``; written through deformed power sums
``p_s = sum lambda_i x_i**s`` it is

    F = sum over partitions mu of kappa+1 of (-1)**len(mu) p_mu / z_mu,

which is also a ``(kappa+1) x (kappa+1)`` determinant in the ``p_s``. The
B_n potentials use the same expressions with ``q_s = sum lambda_i x_i**(2s)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .algebra import MultiPoly, as_rational, default_variables, poly_determinant

__all__ = [
    "PotentialError",
    "DeformedPowerSums",
    "PotentialSet",
    "partitions",
    "z_mu",
    "ambient_variables",
    "lambdas_an",
    "lambdas_bn",
    "potential_an",
    "series_oracle_an",
    "reduce_to_subspace_an",
    "jacobian_identity_check",
    "jacobian_identity_symbolic",
    "jacobian_identity_for_weights",
    "jacobian_rows",
    "potential_bn",
    "saito_residue_bn",
    "f4_invariant",
    "f4_potentials",
    "zaslavsky_potential",
    "dihedral_b2_potentials",
]


class PotentialError(ValueError):
    """Parameters outside the range where a closed formula applies."""


def partitions(n: int, largest: int | None = None):
    """Partitions of ``n`` as nonincreasing tuples, lexicographically decreasing."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def z_mu(mu: Sequence[int]) -> int:
    """``prod_j j**m_j * m_j!`` where ``m_j`` counts the parts equal to ``j``."""
    out = 1
    for j in set(mu):
        m = mu.count(j)
        out *= j ** m * factorial(m)
    return out


def ambient_variables(n: int) -> tuple[str, ...]:
    """``x0 .. xn``."""
    return default_variables(n + 1, "x", start=0)


class DeformedPowerSums:
    """Lazily computed ``sum_i lambda_i x_i**(step*s)``.

    ``step=1`` gives the ``p`` sums, ``step=2`` the ``q`` sums.
    """

    def __init__(self, lam: Sequence, variables: Sequence[str], step: int = 1):
        if len(lam) != len(variables):
            raise ValueError("one weight per variable required")
        self.kind = "p" if step == 1 else "q"
        self.lam = tuple(as_rational(x) for x in lam)
        self.variables = tuple(variables)
        self.step = step
        self._cache: dict[int, MultiPoly] = {}

    def __getitem__(self, s: int) -> MultiPoly:
        if s < 1:
            raise IndexError("power sums are indexed from 1")
        if s not in self._cache:
            n = len(self.variables)
            terms = {}
            for i, l in enumerate(self.lam):
                if l:
                    e = [0] * n
                    e[i] = self.step * s
                    terms[tuple(e)] = l
            self._cache[s] = MultiPoly._raw(self.variables, terms)
        return self._cache[s]

    def product(self, mu: Sequence[int]) -> MultiPoly:
        out = MultiPoly.constant(self.variables, 1)
        for part in mu:
            out = out * self[part]
        return out


def _partition_form(ps: DeformedPowerSums, kappa: int) -> MultiPoly:
    total = MultiPoly.zero(ps.variables)
    for mu in partitions(kappa + 1):
        coeff = Fraction((-1) ** len(mu), z_mu(mu))
        total = total + ps.product(mu).scale(coeff)
    return total


def _determinant_form(ps: DeformedPowerSums, kappa: int) -> MultiPoly:
    size = kappa + 1
    zero = MultiPoly.zero(ps.variables)
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            if j <= i:
                row.append(ps[i - j + 1])
            elif j == i + 1:
                row.append(MultiPoly.constant(ps.variables, i + 1))
            else:
                row.append(zero)
        rows.append(row)
    return poly_determinant(rows).scale(Fraction((-1) ** (kappa + 1), factorial(kappa + 1)))


def _evaluate(ps: DeformedPowerSums, kappa: int, method: str) -> MultiPoly:
    if method == "partition":
        return _partition_form(ps, kappa)
    if method == "determinant":
        return _determinant_form(ps, kappa)
    raise ValueError(f"unknown method {method!r}; use 'partition' or 'determinant'")


def _check_an(c, kappa):
    c = [as_rational(x) for x in c]
    if len(c) < 2:
        raise PotentialError("need c0 and at least one more parameter")
    if any(x == 0 for x in c):
        raise PotentialError("all c_i must be nonzero")
    sigma = sum(c)
    if sigma == 0:
        raise PotentialError("sigma = sum of c_i must be nonzero")
    n = len(c) - 1
    if not isinstance(kappa, int) or not 1 <= kappa <= n:
        raise PotentialError(f"kappa must be an integer in 1..{n}")
    return c, sigma, n


def lambdas_an(c: Sequence, kappa: int) -> list[Fraction]:
    """``lambda_i = kappa c_i / sigma`` for ``i = 0..n``."""
    c, sigma, _ = _check_an(c, kappa)
    return [kappa * x / sigma for x in c]


def potential_an(c: Sequence, kappa: int, method: str = "partition") -> MultiPoly:
    """The degree ``kappa + 1`` potential of A_n(c) in ``x0 .. xn``."""
    lam = lambdas_an(c, kappa)
    ps = DeformedPowerSums(lam, ambient_variables(len(lam) - 1))
    return _evaluate(ps, kappa, method)


def _binomial_series(a: Fraction, order: int) -> list[Fraction]:
    """Coefficients of ``(1 - t)**a`` up to ``t**order``."""
    out = [Fraction(1)]
    for m in range(1, order + 1):
        out.append(out[-1] * (m - 1 - a) / m)
    return out


def series_oracle_an(c: Sequence, kappa: int, method: str = "exp") -> MultiPoly:
    """Coefficient of ``u**(kappa+1)`` in ``prod_i (1 - x_i u)**lambda_i``.

    ``method="exp"`` expands ``exp(-sum_s p_s u**s / s)`` through the
    recurrence ``m e_m = sum_k k a_k e_{m-k}``; ``method="product"``
    multiplies the truncated binomial series of the factors. Both are
    independent of the partition and determinant formulas.
    """
    lam = lambdas_an(c, kappa)
    variables = ambient_variables(len(lam) - 1)
    order = kappa + 1
    if method == "exp":
        ps = DeformedPowerSums(lam, variables)
        # log of the product is sum_s a_s u**s with a_s = -p_s / s
        e = [MultiPoly.constant(variables, 1)]
        for m in range(1, order + 1):
            acc = MultiPoly.zero(variables)
            for k in range(1, m + 1):
                # k a_k = -p_k
                acc = acc - ps[k] * e[m - k]
            e.append(acc.scale(Fraction(1, m)))
        return e[order]
    if method == "product":
        series = [MultiPoly.constant(variables, 1)] + [MultiPoly.zero(variables)] * order
        for i, l in enumerate(lam):
            xi = MultiPoly.var(variables, i)
            coeffs = _binomial_series(l, order)
            factor = [xi ** m * MultiPoly.constant(variables, coeffs[m]) for m in range(order + 1)]
            new = []
            for m in range(order + 1):
                acc = MultiPoly.zero(variables)
                for k in range(m + 1):
                    acc = acc + series[k] * factor[m - k]
                new.append(acc)
            series = new
        return series[order]
    raise ValueError(f"unknown method {method!r}; use 'exp' or 'product'")


def reduce_to_subspace_an(F: MultiPoly, c: Sequence, kappa: int | None = None) -> MultiPoly:
    """Restrict an ambient A_n(c) potential to ``p_1 = 0`` in the chart
    ``y_i = x_i - x_0``.

    The point of the hyperplane ``sum c_i x_i = 0`` with differences
    ``y`` is ``x_0 = -sum_{i>=1} c_i y_i / sigma``, ``x_i = x_0 + y_i``.
    The result lives in the variables of ``instantiate("an", c=c)``.
    """
    c = [as_rational(x) for x in c]
    n = len(c) - 1
    if F.variables != ambient_variables(n):
        raise PotentialError(f"expected a polynomial in {ambient_variables(n)}")
    sigma = sum(c)
    if sigma == 0 or c[0] == 0:
        raise PotentialError("need sigma != 0 and c0 != 0")
    if kappa is not None:
        _check_an(c, kappa)
    ys = default_variables(n, "y")
    gens = MultiPoly.gens(ys)
    x0 = MultiPoly.zero(ys)
    for ci, y in zip(c[1:], gens):
        x0 = x0 - y.scale(ci / sigma)
    images = [x0] + [x0 + y for y in gens]
    return F.compose(images)


def jacobian_identity_check(c: Sequence, n: int | None = None) -> bool:
    """Check ``det(dF_i/dx_j) == lambda_0 ... lambda_n prod_{i<j} (x_i - x_j)``.

    All rows use one weight vector ``lambda = c / sigma``. The first row is
    ``F_0 = p_1``; the remaining rows are ``potential``-formula polynomials
    of degrees ``n + 1, n, ..., 2``. Listing those rows by increasing degree
    instead multiplies the determinant by ``(-1)**(n(n-1)/2)``.
    """
    c = [as_rational(x) for x in c]
    if n is None:
        n = len(c) - 1
    if len(c) != n + 1:
        raise PotentialError(f"need n + 1 = {n + 1} parameters, got {len(c)}")
    _check_an(c, 1)
    sigma = sum(c)
    return jacobian_identity_for_weights([x / sigma for x in c])


def jacobian_rows(lam: Sequence) -> list[MultiPoly]:
    """``[p_1, F(n), F(n-1), ..., F(1)]`` for one weight vector, where
    ``F(k)`` is the partition formula of degree ``k + 1``."""
    lam = [as_rational(x) for x in lam]
    n = len(lam) - 1
    ps = DeformedPowerSums(lam, ambient_variables(n))
    return [ps[1]] + [_partition_form(ps, k) for k in range(n, 0, -1)]


def jacobian_identity_for_weights(lam: Sequence) -> bool:
    """The Jacobian identity for arbitrary (possibly zero) weights."""
    lam = [as_rational(x) for x in lam]
    n = len(lam) - 1
    variables = ambient_variables(n)
    lhs = poly_determinant([f.gradient() for f in jacobian_rows(lam)])
    rhs = MultiPoly.constant(variables, 1)
    for l in lam:
        rhs = rhs.scale(l)
    xs = MultiPoly.gens(variables)
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            rhs = rhs * (xs[i] - xs[j])
    return lhs == rhs


def jacobian_identity_symbolic(n: int) -> bool:
    """The Jacobian identity with the weights as indeterminates.

    Works in ``Q[x0..xn, l0..ln]`` with ``p_s = sum l_i x_i**s`` and
    differentiates in the ``x`` only, so a ``True`` answer proves the
    identity for every weight vector at once.
    """
    if n < 1:
        raise PotentialError("n must be positive")
    xs_names = ambient_variables(n)
    ls_names = default_variables(n + 1, "l", start=0)
    ring = xs_names + ls_names
    xs = MultiPoly.gens(ring)[: n + 1]
    ls = MultiPoly.gens(ring)[n + 1:]
    cache: dict[int, MultiPoly] = {}

    def p(s):
        if s not in cache:
            cache[s] = sum((l * x ** s for l, x in zip(ls, xs)), MultiPoly.zero(ring))
        return cache[s]

    def form(kappa):
        total = MultiPoly.zero(ring)
        for mu in partitions(kappa + 1):
            term = MultiPoly.constant(ring, Fraction((-1) ** len(mu), z_mu(mu)))
            for part in mu:
                term = term * p(part)
            total = total + term
        return total

    rows = [p(1)] + [form(k) for k in range(n, 0, -1)]
    lhs = poly_determinant([[f.diff(v) for v in xs_names] for f in rows])
    rhs = MultiPoly.constant(ring, 1)
    for l in ls:
        rhs = rhs * l
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            rhs = rhs * (xs[i] - xs[j])
    return lhs == rhs


def lambdas_bn(c: Sequence, k: int) -> list[Fraction]:
    """``lambda_i = (2k - 1) c_i / (2 sigma)`` for ``i = 0..n``."""
    c = [as_rational(x) for x in c]
    if len(c) < 2:
        raise PotentialError("need c0 and at least one more parameter")
    if any(x == 0 for x in c[1:]):
        raise PotentialError("c_i must be nonzero for i >= 1")
    sigma = sum(c)
    if sigma == 0:
        raise PotentialError("sigma = sum of c_i must be nonzero")
    n = len(c) - 1
    if not isinstance(k, int) or not 1 <= k <= n:
        raise PotentialError(f"k must be an integer in 1..{n}")
    return [(2 * k - 1) * x / (2 * sigma) for x in c]


def potential_bn(c: Sequence, k: int, method: str = "partition") -> MultiPoly:
    """The degree ``2k`` potential of B_n(c) in ``x1 .. xn`` (flat section
    degree ``2k - 1``)."""
    lam = lambdas_bn(c, k)
    n = len(lam) - 1
    ps = DeformedPowerSums(lam[1:], default_variables(n), step=2)
    return _evaluate(ps, k - 1, method)


def saito_residue_bn(n: int, k: int) -> MultiPoly:
    """Coefficient of ``u**k`` in ``prod_i (1 - x_i**2 u)**((2k-1)/(2n))``,
    i.e. the residue at infinity of ``prod (x**2 - x_i**2)**((2k-1)/(2n))``
    up to sign, computed by binomial expansion."""
    if not 1 <= k <= n:
        raise PotentialError(f"k must be in 1..{n}")
    variables = default_variables(n)
    a = Fraction(2 * k - 1, 2 * n)
    coeffs = _binomial_series(a, k)
    series = [MultiPoly.constant(variables, 1)] + [MultiPoly.zero(variables)] * k
    for i in range(n):
        sq = MultiPoly.var(variables, i) ** 2
        factor = [(sq ** m).scale(coeffs[m]) for m in range(k + 1)]
        series = [
            sum((series[j] * factor[m - j] for j in range(m + 1)), MultiPoly.zero(variables))
            for m in range(k + 1)
        ]
    return series[k]


def f4_invariant(m: int) -> MultiPoly:
    """``sum_{i<j} (x_i - x_j)**m + (x_i + x_j)**m`` in four variables."""
    variables = default_variables(4)
    xs = MultiPoly.gens(variables)
    out = MultiPoly.zero(variables)
    for i in range(4):
        for j in range(i + 1, 4):
            out = out + (xs[i] - xs[j]) ** m + (xs[i] + xs[j]) ** m
    return out


@dataclass
class PotentialSet:
    family: str
    potentials: list[MultiPoly]
    kappas: list[int]

    def __post_init__(self):
        if len(self.potentials) != len(self.kappas):
            raise ValueError("one kappa per potential required")
        if any(b <= a for a, b in zip(self.kappas, self.kappas[1:])):
            raise ValueError("kappa values must be strictly increasing")

    def __iter__(self):
        return iter(zip(self.kappas, self.potentials))

    def __len__(self):
        return len(self.potentials)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "potentials": [{"kappa": k, "potential": p.to_json()} for k, p in self],
        }


def f4_potentials(s) -> PotentialSet:
    """The four F4 potentials with ``t**2 = s`` (κ = 1, 5, 7, 11)."""
    s = as_rational(s)
    if s == -1:
        raise PotentialError("s = -1 gives a degenerate canonical form")
    I2, I6, I8, I12 = (f4_invariant(m) for m in (2, 6, 8, 12))
    a = 1 + s
    F1 = I2
    F5 = I6.scale(648 * a) - (I2 ** 3).scale(5 * (5 + 4 * s))
    F7 = (
        I8.scale(69984 * a ** 2)
        - (I2 * I6).scale(9072 * (7 + 2 * s) * a)
        + (I2 ** 4).scale(35 * (49 + 46 * s + 4 * s ** 2))
    )
    F11 = (
        I12.scale(10077696 * a ** 3)
        - (I8 * I2 ** 2).scale(384912 * (11 + 8 * s) * a ** 2)
        + (I6 ** 2).scale(769824 * (4 * s - 11) * a ** 2)
        + (I6 * I2 ** 3).scale(7128 * (319 + 376 * s + 112 * s ** 2) * a)
        - (I2 ** 6).scale(11 * (3641 + 7032 * s + 4560 * s ** 2 + 1048 * s ** 3))
    )
    return PotentialSet("f4", [F1, F5, F7, F11], [1, 5, 7, 11])


def zaslavsky_potential(n: int, m: int) -> MultiPoly:
    """``x_1 ... x_{n-m} (x_{n-m+1} ... x_n)**2``.

    ``m`` counts the coordinate hyperplanes present; the matching system is
    ``instantiate("bn", c=[-1] + [1]*(n-m) + [2]*m)``, and the potential
    has degree ``n + m`` (κ = ``n + m - 1``).
    """
    if not 1 <= m <= n - 1:
        raise PotentialError(f"m must be in 1..{n - 1}")
    variables = default_variables(n)
    exps = tuple([1] * (n - m) + [2] * m)
    return MultiPoly.monomial(variables, exps)


def dihedral_b2_potentials(a2, b2) -> PotentialSet:
    """``x1**2 + x2**2`` and ``2(x1**4 - 6 x1**2 x2**2 + x2**4)
    + 6 (a2 - b2)/(a2 + b2) (x1**2 + x2**2)**2`` (κ = 1, 3)."""
    a2, b2 = as_rational(a2), as_rational(b2)
    if a2 == 0 or b2 == 0 or a2 + b2 == 0:
        raise PotentialError("need a2 != 0, b2 != 0, a2 + b2 != 0")
    variables = default_variables(2)
    x1, x2 = MultiPoly.gens(variables)
    r = x1 ** 2 + x2 ** 2
    quartic = (x1 ** 4 - (x1 ** 2 * x2 ** 2).scale(6) + x2 ** 4).scale(2)
    F2 = quartic + (r ** 2).scale(6 * (a2 - b2) / (a2 + b2))
    return PotentialSet("dihedral_b2", [r, F2], [1, 3])
