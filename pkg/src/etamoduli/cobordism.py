"""Characteristic-number invariants of spin^c 4-manifolds and the pin+ image.

A simply connected spin^c 4-manifold with canonical class d is determined,
up to spin^c cobordism, by the pair of characteristic numbers

    <d^2, [B]>   and   ind(B, d) = (<d^2, [B]> - sign(B)) / 8,

the second being the index of the spin^c Dirac operator (an integer by the
van der Blij congruence).  The pair (1, 0) is realized by the projective
plane with its Hopf-class structure; (9, 1) by a connected sum of three
projective planes with canonical class (3, 1, 1).

The pin+ bordism group of 4-manifolds is cyclic of order 16, generated by
RP^4.  The homomorphism implemented by `beta_of_class` sends a spin^c class
to

    <d^2, [B]> + 4 e ind(B, d)   (mod 16)

where the sign e = +-1 is a genuinely open convention choice; every caller
must pass it explicitly, and classification code reports both branches when
it is not pinned.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonCharacteristicError, NonPrimitiveError
from .lattice import (
    CohomologyClass,
    IntersectionForm,
    is_characteristic,
    is_primitive,
    pairing,
    signature,
)

__all__ = [
    "EpsilonSign",
    "EPSILON_PLUS",
    "EPSILON_MINUS",
    "SpincClass",
    "PinPlusClass",
    "spinc_class",
    "beta",
    "beta_of_class",
]


@dataclass(frozen=True)
class EpsilonSign:
    """The unresolved +-1 sign in the pin+ value formula."""

    value: int

    def __post_init__(self):
        if self.value not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")

    @classmethod
    def coerce(cls, value) -> "EpsilonSign":
        if isinstance(value, EpsilonSign):
            return value
        if isinstance(value, str):
            value = int(value)
        return cls(int(value))

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return "+1" if self.value == 1 else "-1"


EPSILON_PLUS = EpsilonSign(1)
EPSILON_MINUS = EpsilonSign(-1)


@dataclass(frozen=True)
class SpincClass:
    """Coordinates (<d^2>, ind) of a spin^c 4-manifold in the cobordism group."""

    d_squared: int
    index: int


@dataclass(frozen=True)
class PinPlusClass:
    """A residue mod 16 in the pin+ bordism group of 4-manifolds."""

    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % 16)

    def canonical(self) -> int:
        """Representative of {value, -value} in {0, ..., 8}."""
        return min(self.value, (16 - self.value) % 16)

    def matches(self, other) -> bool:
        """Equality up to sign, the resolution at which the class is known."""
        other_value = other.value if isinstance(other, PinPlusClass) else int(other) % 16
        return self.value == other_value or self.value == (16 - other_value) % 16

    def __int__(self) -> int:
        return self.value


def spinc_class(form: IntersectionForm, d) -> SpincClass:
    """Characteristic numbers (<d^2>, ind) of (B, d); d must be characteristic.

    The index is (<d^2> - sign)/8; the division is exact for characteristic
    classes, and a failure of exactness is flagged as a bug rather than bad
    input.
    """
    if not is_characteristic(form, d):
        raise NonCharacteristicError(
            "class is not characteristic for the form (does not reduce to the "
            "Wu vector mod 2)"
        )
    d_squared = pairing(form, d, d)
    sign = signature(form)
    index, remainder = divmod(d_squared - sign, 8)
    assert remainder == 0, "van der Blij congruence violated for characteristic class"
    return SpincClass(d_squared, index)


def beta_of_class(cls: SpincClass, epsilon) -> PinPlusClass:
    """The pin+ value of a spin^c class: <d^2> + 4 e ind (mod 16)."""
    eps = EpsilonSign.coerce(epsilon)
    return PinPlusClass((cls.d_squared + 4 * eps.value * cls.index) % 16)


def beta(form: IntersectionForm, d, epsilon) -> PinPlusClass:
    """Pin+ value of (B, d) for primitive characteristic d.

    Raises NonPrimitiveError or NonCharacteristicError (distinct types) so
    callers can tell which precondition failed.
    """
    coords = CohomologyClass(d)
    if all(c == 0 for c in coords) or not is_primitive(coords):
        raise NonPrimitiveError(
            "pin+ value requires a primitive canonical class (gcd of "
            "coordinates must be 1)"
        )
    return beta_of_class(spinc_class(form, coords), epsilon)
