"""Truncated graded power series over exact rationals.

One small commutative algebra serves every characteristic-class computation
in the package: polynomials with Fraction coefficients in the formal
variables

    d            degree 2   (a degree-2 cohomology class)
    p1, p2, ...  degree 4i  (Pontryagin classes)
    q1, q2, ...  degree 4i  (Pontryagin classes of a second formal bundle)
    z1, z2, ...  degree 4   (squares of formal Chern roots)

truncated at a fixed total cohomological degree.  Addition, multiplication
and substitution all truncate consistently, so intermediate results may be
computed at the working order without affecting the retained terms.

On top of the arithmetic:

* `sinh_half(l, order)` and `sinh_ratio(l, order)` expand sinh(l d/2) and
  sinh(d/2)/sinh(l d/2).  The ratio is computed as the unit series
  sinh(d/2)/d times the inverse unit of sinh(l d/2)/d and therefore
  contains only even powers of d; its degree-4 coefficient is
  -(l^2-1)/(24 l).

* `ahat_table(n)` produces the A-hat polynomials A_0 = 1, A_1 = -p1/24,
  A_2 = (7 p1^2 - 4 p2)/5760, ... via the multiplicative sequence of
  Q(z) = (sqrt(z)/2)/sinh(sqrt(z)/2): expand prod_j Q(z_j) over n formal
  roots and rewrite each homogeneous piece in elementary symmetric
  polynomials e_i(z) = p_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import re

__all__ = [
    "GradedSeries",
    "AhatPolynomialTable",
    "variable_degree",
    "parse_monomial",
    "format_monomial",
    "sinh_half",
    "sinh_ratio",
    "ahat_table",
]

_VAR_RE = re.compile(r"^(d|[pqz][1-9][0-9]*)$")


def variable_degree(name: str) -> int:
    """Cohomological degree of a formal variable."""
    if name == "d":
        return 2
    if _VAR_RE.match(name):
        if name[0] == "z":
            return 4
        return 4 * int(name[1:])
    raise ValueError(f"unknown formal variable {name!r}")


# A monomial is a sorted tuple of (variable, positive exponent) pairs;
# the empty tuple is the constant monomial 1.
Monomial = tuple


def monomial_degree(mono: Monomial) -> int:
    return sum(variable_degree(v) * e for v, e in mono)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def parse_monomial(text: str) -> Monomial:
    """Parse 'd^2*p1' style monomial text; '1' or '' is the constant."""
    text = text.replace(" ", "")
    if text in ("", "1"):
        return ()
    exps: dict = {}
    for factor in text.split("*"):
        if "^" in factor:
            var, _, exp = factor.partition("^")
            e = int(exp)
        else:
            var, e = factor, 1
        if not _VAR_RE.match(var):
            raise ValueError(f"unknown formal variable {var!r} in monomial {text!r}")
        if e <= 0:
            raise ValueError(f"exponent must be positive in monomial {text!r}")
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


def format_monomial(mono: Monomial) -> str:
    if not mono:
        return "1"
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)


def _sort_key(mono: Monomial):
    return (monomial_degree(mono), mono)


class GradedSeries:
    """Immutable graded polynomial truncated at `order` (total degree)."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        clean = {}
        for mono, value in dict(coeffs).items():
            frac = Fraction(value)
            if frac == 0:
                continue
            if monomial_degree(mono) <= order:
                clean[mono] = frac
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("GradedSeries is immutable")

    @classmethod
    def constant(cls, value, order: int) -> "GradedSeries":
        return cls({(): Fraction(value)}, order)

    @classmethod
    def zero(cls, order: int) -> "GradedSeries":
        return cls({}, order)

    @classmethod
    def variable(cls, name: str, order: int) -> "GradedSeries":
        return cls({((name, 1),): Fraction(1)}, order)

    # ---- basic queries ----

    def coefficient(self, mono) -> Fraction:
        """Coefficient of a monomial, given as a Monomial tuple or text."""
        if isinstance(mono, str):
            mono = parse_monomial(mono)
        return self.coeffs.get(tuple(mono), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs.get((), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self):
        """Terms sorted by (degree, monomial)."""
        return sorted(self.coeffs.items(), key=lambda kv: _sort_key(kv[0]))

    def degrees(self):
        return sorted({monomial_degree(m) for m in self.coeffs})

    # ---- arithmetic ----

    def _coerce(self, other, order: int):
        if isinstance(other, GradedSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return GradedSeries.constant(other, order)
        return None

    def __add__(self, other):
        order = min(self.order, other.order) if isinstance(other, GradedSeries) else self.order
        rhs = self._coerce(other, order)
        if rhs is None:
            return NotImplemented
        out = dict(GradedSeries(self.coeffs, order).coeffs)
        for mono, val in rhs.coeffs.items():
            if monomial_degree(mono) <= order:
                out[mono] = out.get(mono, Fraction(0)) + val
        return GradedSeries(out, order)

    __radd__ = __add__

    def __neg__(self):
        return GradedSeries({m: -v for m, v in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        rhs = self._coerce(other, self.order)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other):
        lhs = self._coerce(other, self.order)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GradedSeries(
                {m: v * Fraction(other) for m, v in self.coeffs.items()}, self.order
            )
        if not isinstance(other, GradedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        out: dict = {}
        for m1, c1 in self.coeffs.items():
            d1 = monomial_degree(m1)
            if d1 > order:
                continue
            for m2, c2 in other.coeffs.items():
                if d1 + monomial_degree(m2) > order:
                    continue
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return GradedSeries(out, order)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers not supported; use inverse()")
        result = GradedSeries.constant(1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def extract_degree(self, degree: int) -> "GradedSeries":
        """Homogeneous part of the given cohomological degree."""
        return GradedSeries(
            {m: v for m, v in self.coeffs.items() if monomial_degree(m) == degree},
            self.order,
        )

    def truncate(self, order: int) -> "GradedSeries":
        return GradedSeries(self.coeffs, min(order, self.order))

    def inverse(self) -> "GradedSeries":
        """Multiplicative inverse of a unit (nonzero constant term).

        Geometric series in r = 1 - s/c, which has no constant term, so the
        loop terminates once r^m exceeds the truncation order.
        """
        c = self.constant_term
        if c == 0:
            raise ValueError("series is not a unit: zero constant term")
        scaled = self * (Fraction(1) / c)
        r = GradedSeries.constant(1, self.order) - scaled
        result = GradedSeries.constant(1, self.order)
        power = r
        while not power.is_zero():
            result = result + power
            power = power * r
        return result * (Fraction(1) / c)

    def substitute(self, mapping) -> "GradedSeries":
        """Replace variables by series; unmapped variables stay themselves."""
        result = GradedSeries.zero(self.order)
        for mono, coeff in self.coeffs.items():
            term = GradedSeries.constant(coeff, self.order)
            for var, exp in mono:
                repl = mapping.get(var)
                if repl is None:
                    repl = GradedSeries.variable(var, self.order)
                term = term * repl ** exp
            result = result + term
        return result

    # ---- comparison / display ----

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GradedSeries.constant(other, self.order)
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for mono, coeff in self.terms():
            text = f"{coeff.numerator}/{coeff.denominator}"
            if mono:
                text += f"*{format_monomial(mono)}"
            parts.append(text)
        return " + ".join(parts)

    def __repr__(self):
        return f"GradedSeries({self}, order={self.order})"


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _sinh_half_over_d(ell: int, order: int) -> GradedSeries:
    """The unit series sinh(l d / 2) / d = sum (l/2)^(2m+1) d^(2m) / (2m+1)!."""
    half = Fraction(ell, 2)
    coeffs = {}
    m = 0
    while 4 * m <= order:
        mono = () if m == 0 else (("d", 2 * m),)
        coeffs[mono] = half ** (2 * m + 1) / _factorial(2 * m + 1)
        m += 1
    return GradedSeries(coeffs, order)


def sinh_half(ell: int, order: int) -> GradedSeries:
    """sinh(l d / 2) as a truncated series (odd powers of d only)."""
    if ell < 1:
        raise ValueError("l must be a positive integer")
    return _sinh_half_over_d(ell, order) * GradedSeries.variable("d", order)


def sinh_ratio(ell: int, order: int) -> GradedSeries:
    """sinh(d/2) / sinh(l d/2) truncated at `order`.

    Both numerator and denominator are d times a unit, so the ratio is the
    quotient of the units; only even powers of d survive.  For l = 1 this
    is the constant 1.
    """
    if ell < 1:
        raise ValueError("l must be a positive integer")
    numerator = _sinh_half_over_d(1, order)
    denominator = _sinh_half_over_d(ell, order)
    return numerator * denominator.inverse()


@dataclass(frozen=True)
class AhatPolynomialTable:
    """A-hat polynomials A_0, ..., A_n; A_i homogeneous of degree 4i in p's."""

    polys: tuple

    @property
    def max_index(self) -> int:
        return len(self.polys) - 1

    def series(self, order: int | None = None) -> GradedSeries:
        """The full A-hat series 1 + A_1 + ... truncated at `order`."""
        if order is None:
            order = 4 * self.max_index
        total = GradedSeries.zero(order)
        for poly in self.polys:
            total = total + poly.truncate(order)
        return total


def _elementary_symmetric(nvars: int, order: int):
    """e_1, ..., e_nvars in the root variables z1..zn, as GradedSeries."""
    # build incrementally: prod (1 + z_j t) coefficients of t^i
    current = [GradedSeries.constant(1, order)]
    for j in range(1, nvars + 1):
        zj = GradedSeries.variable(f"z{j}", order)
        new = []
        for i in range(len(current) + 1):
            term = GradedSeries.zero(order)
            if i < len(current):
                term = term + current[i]
            if i > 0:
                term = term + current[i - 1] * zj
            new.append(term)
        current = new
    return current[1:]  # drop e_0


def _symmetric_to_pontryagin(part: GradedSeries, nvars: int, order: int) -> GradedSeries:
    """Rewrite a symmetric polynomial in z1..zn as a polynomial in p1..pn.

    Classical leading-term elimination: the lex-leading exponent vector of a
    symmetric polynomial is a partition L, and prod_i e_i^(L_i - L_{i+1})
    has the same leading term; subtract and repeat.
    """
    elems = _elementary_symmetric(nvars, order)
    zvars = [f"z{j}" for j in range(1, nvars + 1)]

    def exponents(mono):
        exps = dict(mono)
        return tuple(exps.get(v, 0) for v in zvars)

    residual = dict(part.coeffs)
    result = GradedSeries.zero(order)
    while residual:
        lead = max(residual, key=exponents)
        coeff = residual[lead]
        lam = exponents(lead)
        if any(lam[i] < lam[i + 1] for i in range(nvars - 1)):
            raise AssertionError("leading term of a symmetric polynomial "
                                 "must be a partition")
        e_product = GradedSeries.constant(coeff, order)
        p_mono: dict = {}
        padded = list(lam) + [0]
        for i in range(1, nvars + 1):
            mult = padded[i - 1] - padded[i]
            if mult:
                e_product = e_product * elems[i - 1] ** mult
                p_mono[f"p{i}"] = mult
        result = result + GradedSeries(
            {tuple(sorted(p_mono.items())): coeff}, order
        )
        for mono, val in e_product.coeffs.items():
            new = residual.get(mono, Fraction(0)) - val
            if new:
                residual[mono] = new
            else:
                residual.pop(mono, None)
    return result


def ahat_table(n: int) -> AhatPolynomialTable:
    """A-hat polynomials up to index n by the multiplicative-sequence algorithm."""
    if n < 0:
        raise ValueError("table index must be nonnegative")
    order = 4 * n
    if n == 0:
        return AhatPolynomialTable((GradedSeries.constant(1, 0),))
    # Q(z) = (sqrt(z)/2)/sinh(sqrt(z)/2): inverse of sum z^m / (4^m (2m+1)!)
    q_coeffs = {}
    for m in range(n + 1):
        mono = () if m == 0 else (("z1", m),)
        q_coeffs[mono] = Fraction(1, 4 ** m * _factorial(2 * m + 1))
    q_series = GradedSeries(q_coeffs, order).inverse()
    product = GradedSeries.constant(1, order)
    for j in range(1, n + 1):
        q_j = q_series.substitute({"z1": GradedSeries.variable(f"z{j}", order)})
        product = product * q_j
    polys = [GradedSeries.constant(1, order)]
    for i in range(1, n + 1):
        part = product.extract_degree(4 * i)
        polys.append(_symmetric_to_pontryagin(part, n, order))
    return AhatPolynomialTable(tuple(polys))
