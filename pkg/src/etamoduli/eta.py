"""Exact eta invariants of circle-invariant spin^c Dirac operators, and the
component counts they certify.

For a (4n+1)-manifold carrying a free isometric circle action with quotient
B, first Chern class l*d (l even), positive scalar curvature, vanishing real
Pontryagin classes, and a flat connection on the canonical bundle, the eta
invariant of the spin^c Dirac operator equals the characteristic number

    < sinh(d/2) Ahat(TB) / sinh(l d/2), [B] >.

`eta_series_general` evaluates exactly that pairing for any n from supplied
pairing data; `eta_closed_form_dim5` is the n = 1 case in closed form,

    eta = -((l^2 - 1) <d^2> + p1) / (24 l),     p1 = 3 sign(B),

which for l = 2 collapses to -(<d^2> + sign)/16.  All values are exact
rationals; nothing is ever evaluated in floating point.

Across the Chern family d_k = (1+2k, 1, ..., 1) on diag(+1^a, -1^b) the
self-pairing is 4k(k+1) + sign, so the l = 2 eta values

    eta_k = -(4k^2 + 4k + 2 sign) / 16

are pairwise distinct over k >= 0.  Counting distinct values across the
admissible family (`eta_family_table`) therefore certifies a lower bound on
the number of path components of the moduli space of positive-Ricci metrics
on the fixed total space (`moduli_component_lower_bound`): metrics lifted
from inequivalent circle actions with different eta values cannot be
connected through positive scalar curvature.

The geometric hypotheses (curvature positivity, freeness, flatness of the
connection, vanishing of real Pontryagin classes of the total space) are
analytic facts about the metrics in question, not properties of this data
model; they are documented preconditions, never checked here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .bundle import chern_family_typeIII
from .cobordism import EpsilonSign
from .errors import NonCharacteristicError, NonPrimitiveError
from .lattice import (
    CohomologyClass,
    IntersectionForm,
    is_characteristic,
    is_primitive,
    make_connected_sum,
    pairing,
    signature,
)
from .series import ahat_table, format_monomial, parse_monomial, sinh_ratio

__all__ = [
    "EtaValue",
    "EtaFamilyRow",
    "EtaFamilyReport",
    "eta_closed_form_dim5",
    "eta_series_general",
    "eta_family_table",
    "moduli_component_lower_bound",
]


class EtaValue(Fraction):
    """An exact rational eta invariant.

    For the n = 1 closed form the denominator divides 24 l (16 when l = 2);
    Fraction arithmetic keeps that automatic.
    """

    def __repr__(self) -> str:
        return f"EtaValue({self.numerator}/{self.denominator})"


def _require_even_multiplier(ell: int) -> None:
    if ell < 2 or ell % 2 != 0:
        raise ValueError("the fiber multiplier l must be a positive even integer")


def eta_closed_form_dim5(form: IntersectionForm, d, ell: int) -> EtaValue:
    """Eta invariant over a 4-dimensional base: -((l^2-1)<d^2> + 3 sign)/(24 l).

    Requires primitive characteristic d and even l >= 2; the Pontryagin
    number of the base is 3 sign(B) by the signature theorem and is not an
    independent input.
    """
    _require_even_multiplier(ell)
    coords = CohomologyClass(d)
    if all(c == 0 for c in coords) or not is_primitive(coords):
        raise NonPrimitiveError("eta computation requires a primitive class")
    if not is_characteristic(form, coords):
        raise NonCharacteristicError(
            "eta computation requires a characteristic class"
        )
    d_squared = pairing(form, coords, coords)
    sign = signature(form)
    return EtaValue(Fraction(-((ell * ell - 1) * d_squared + 3 * sign), 24 * ell))


def eta_series_general(ell: int, n: int, pairing_data) -> EtaValue:
    """Eta invariant over a 4n-dimensional base from explicit pairing data.

    `pairing_data` maps degree-4n monomials in d, p1, ..., pn (keys are
    monomial tuples or text like "d^2", "d^2*p1", "p1^2") to the integers
    <monomial, [B]>.  The sinh-ratio and Ahat series are multiplied out to
    degree 4n and contracted against the data; a monomial that appears with
    a nonzero coefficient but has no supplied pairing raises an error naming
    it.
    """
    _require_even_multiplier(ell)
    if n < 1:
        raise ValueError("base dimension parameter n must be >= 1")
    order = 4 * n
    data = {}
    for key, value in dict(pairing_data).items():
        mono = parse_monomial(key) if isinstance(key, str) else tuple(key)
        data[mono] = Fraction(value)
    series = sinh_ratio(ell, order) * ahat_table(n).series(order)
    top = series.extract_degree(order)
    total = Fraction(0)
    for mono, coeff in top.terms():
        if mono not in data:
            raise ValueError(
                f"missing pairing value for monomial {format_monomial(mono)}"
            )
        total += coeff * data[mono]
    return EtaValue(total)


class EtaFamilyRow(NamedTuple):
    k: int
    chern_class: CohomologyClass
    eta: EtaValue


@dataclass(frozen=True)
class EtaFamilyReport:
    """Eta values across one admissible Chern family on diag(+1^a, -1^b)."""

    base: tuple
    epsilon: int
    target_c: int
    rows: tuple
    distinct_count: int

    def __post_init__(self):
        if self.distinct_count != len({row.eta for row in self.rows}):
            raise ValueError("distinct_count does not match the rows")


def eta_family_table(
    a: int, b: int, count: int, epsilon, target_c: int = 0
) -> EtaFamilyReport:
    """Eta invariants of the first `count` admissible family members.

    The base is diag(+1^a, -1^b) with a + b >= 2; classes come from the
    Type III family for `target_c` and the given sign, and each eta value is
    the l = 2 closed form.
    """
    if a < 0 or b < 0 or a + b < 2:
        raise ValueError("family base requires a + b >= 2")
    eps = EpsilonSign.coerce(epsilon)
    form = make_connected_sum(a, b, 0)
    rows = []
    for d_k in chern_family_typeIII(form, count, eps, target_c):
        k = (d_k[0] - 1) // 2
        rows.append(EtaFamilyRow(k, d_k, eta_closed_form_dim5(form, d_k, 2)))
    rows = tuple(rows)
    return EtaFamilyReport(
        base=(a, b),
        epsilon=eps.value,
        target_c=target_c,
        rows=rows,
        distinct_count=len({row.eta for row in rows}),
    )


def moduli_component_lower_bound(
    a: int, b: int, count: int, epsilon, target_c: int = 0
) -> int:
    """Certified lower bound on moduli-space path components at this truncation.

    Distinct eta values across the admissible family force distinct path
    components of the positive-Ricci (and positive-scalar) moduli space of
    the common total space; this returns how many the first `count` family
    members exhibit.
    """
    return eta_family_table(a, b, count, epsilon, target_c).distinct_count
