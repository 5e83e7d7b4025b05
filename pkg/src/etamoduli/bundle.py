"""Classification of total spaces of principal circle bundles over simply
connected 4-manifolds.

A bundle is specified by the base form, a primitive class d, and a positive
multiplier k: the first Chern class is k*d.  The total space M then has
pi_1(M) = Z/k generated by any fiber, is orientable with torsion-free H_2,
and b_2(M) = b_2(B) - 1.

For k = 2 the total space falls into one of three classes, decided by the
second Stiefel-Whitney classes of M and of its universal cover:

    Type I    universal cover non-spin   (d not characteristic, base non-spin)
    Type II   M spin                     (base spin)
    Type III  M non-spin, cover spin     (d characteristic, base non-spin)

Type III manifolds are determined up to diffeomorphism by b_2 and the class
of a characteristic submanifold in the pin+ bordism group, known up to sign
(`cobordism.beta`).  Every Type III manifold is a standard model
X(q) #_S1 (#^k (S^2 x S^2) x S^1) with q in {0, ..., 8}, where X(1) = RP^5
and b_2 = 2k + (1 + (-1)^q)/2.  For Type I the invariants carried are the
self-pairing of d mod 8 up to sign and a parity bit.

`quotient_membership` encodes which simply connected 4-manifolds arise as
quotients of a given total space by free circle actions:

    Type II    B spin,     b_2(B) = b_2(M) + 1
    Type III   B non-spin, b_2(B) = b_2(M) + 1, sign(B) = +-[P] (mod 4)
    Type I     B non-spin, b_2(B) = b_2(M) + 1, with two exceptional
               families (q in {0,4}, b_2(M) in {2,3}) that additionally
               constrain |sign(B)|.

The Chern-family constructors produce the infinite sets of classes d_k
realizing one diffeomorphism type by infinitely many inequivalent bundles;
for Type III these are d_k = (1+2k, 1, ..., 1) with k running through the
solution set of (4 + 2e) k (k+1) = 4c (mod 16).
"""

from __future__ import annotations

from dataclasses import dataclass

from .cobordism import EpsilonSign, PinPlusClass, beta
from .errors import (
    InternalInvariantError,
    NonPrimitiveError,
    UnsupportedFormError,
)
from .lattice import (
    CohomologyClass,
    IntersectionForm,
    is_characteristic,
    is_primitive,
    is_spin,
    make_connected_sum,
    pairing,
    require_diagonal_counts,
    signature,
)

__all__ = [
    "BundleSpec",
    "StandardName",
    "FiveManifoldClass",
    "QuotientModel",
    "CP2ConnectedSum",
    "S2xS2ConnectedSum",
    "CongruenceSolution",
    "classify_total_space",
    "count_typeIII_diffeo_types",
    "quotient_membership",
    "enumerate_standard_quotients",
    "chern_family_typeIII",
    "chern_family_typeI",
    "solve_k_congruence",
]


@dataclass(frozen=True)
class BundleSpec:
    """A principal circle bundle: first Chern class = multiplier * primitive_class."""

    base: IntersectionForm
    multiplier: int
    primitive_class: CohomologyClass

    def __post_init__(self):
        object.__setattr__(
            self, "primitive_class", CohomologyClass(self.primitive_class)
        )
        if self.multiplier < 1:
            raise ValueError("multiplier must be a positive integer")
        if len(self.primitive_class) != self.base.rank:
            raise ValueError("class length does not match base rank")
        if self.base.rank == 0:
            raise ValueError("bundle base must have b_2 >= 1")
        if all(c == 0 for c in self.primitive_class) or not is_primitive(
            self.primitive_class
        ):
            raise NonPrimitiveError("bundle class must be primitive")


@dataclass(frozen=True)
class StandardName:
    """Standard model X(q) #_S1 (#^k (S^2 x S^2) x S^1) of a Type III manifold."""

    q: int
    s2xs2_summands: int

    def __post_init__(self):
        if not 0 <= self.q <= 8:
            raise InternalInvariantError("standard-model label q must be in 0..8")
        if self.s2xs2_summands < 0:
            raise InternalInvariantError("summand count must be nonnegative")
        if self.s2xs2_summands == 0 and self.q in (3, 5, 7):
            # with no S^2 x S^2 summands only q = 1 occurs among odd labels
            raise InternalInvariantError(
                f"X({self.q}) with no summands is not a valid standard model"
            )

    @property
    def b2(self) -> int:
        return 2 * self.s2xs2_summands + (1 + (-1) ** self.q) // 2

    @property
    def label(self) -> str:
        base = f"X({self.q})"
        if self.s2xs2_summands > 0:
            base += f" #_S1 (#^{self.s2xs2_summands}(S2xS2) x S1)"
        if self.q == 1 and self.s2xs2_summands == 0:
            base += " = RP^5"
        return base


@dataclass(frozen=True)
class FiveManifoldClass:
    """Classification record of the total space of a circle bundle.

    `type` is "I", "II", "III" for two-fold multipliers and "not-applicable"
    otherwise.  Type III records the pin+ class up to sign (its canonical
    representative in 0..8) and the standard-model name; Type I records the
    self-pairing residue q mod 8 up to sign plus the parity bit s with
    q + s = b_2 + 1 (mod 2).
    """

    fundamental_group_order: int
    b2: int
    type: str
    pin_plus: PinPlusClass | None = None
    standard_name: StandardName | None = None
    typeI_q: int | None = None
    typeI_s: int | None = None
    orientable: bool = True
    h2_torsion_free: bool = True

    def __post_init__(self):
        if self.type not in ("I", "II", "III", "not-applicable"):
            raise ValueError(f"unknown type {self.type!r}")
        if self.type == "III":
            if self.pin_plus is None:
                raise InternalInvariantError("Type III record requires a pin+ class")
        if self.type == "I":
            if self.typeI_q is None or self.typeI_s is None:
                raise InternalInvariantError(
                    "Type I record requires the mod-8 residue and parity bit"
                )
            if (self.typeI_q + self.typeI_s) % 2 != (self.b2 + 1) % 2:
                raise InternalInvariantError(
                    "Type I parity relation q + s = b2 + 1 (mod 2) violated"
                )


def classify_total_space(spec: BundleSpec, epsilon) -> FiveManifoldClass:
    """Diffeomorphism invariants of the total space of `spec`.

    Multipliers other than 2 only record pi_1 = Z/k and b_2; the trichotomy
    and its invariants apply to k = 2.  The pin+ class of a Type III space
    depends on the open sign `epsilon`; the stored value is the canonical
    representative of the +- orbit.
    """
    eps = EpsilonSign.coerce(epsilon)
    base, d = spec.base, spec.primitive_class
    b2_total = base.rank - 1
    if spec.multiplier != 2:
        return FiveManifoldClass(
            fundamental_group_order=spec.multiplier,
            b2=b2_total,
            type="not-applicable",
        )
    if is_spin(base):
        return FiveManifoldClass(
            fundamental_group_order=2, b2=b2_total, type="II"
        )
    if is_characteristic(base, d):
        pin = beta(base, d, eps)
        q = pin.canonical()
        if q % 2 != (b2_total + 1) % 2:
            raise InternalInvariantError(
                "pin+ class parity disagrees with b2 + 1"
            )
        summands = (b2_total - (1 + (-1) ** q) // 2) // 2
        return FiveManifoldClass(
            fundamental_group_order=2,
            b2=b2_total,
            type="III",
            pin_plus=PinPlusClass(q),
            standard_name=StandardName(q, summands),
        )
    residue = pairing(base, d, d) % 8
    q = min(residue, (8 - residue) % 8)
    s = (b2_total + 1 + q) % 2
    return FiveManifoldClass(
        fundamental_group_order=2,
        b2=b2_total,
        type="I",
        typeI_q=q,
        typeI_s=s,
    )


def count_typeIII_diffeo_types(form: IntersectionForm) -> int:
    """Number of Type III total-space diffeomorphism types over a non-spin base.

    These are the labels q in {0,...,8} with q = +-sign (mod 4): two when
    the signature is 2 mod 4, three when it is 0, four when it is odd.
    """
    if is_spin(form):
        raise UnsupportedFormError("Type III total spaces require a non-spin base")
    s = signature(form) % 4
    return sum(1 for q in range(9) if q % 4 == s or (-q) % 4 == s)


def _is_exceptional_typeI(record: FiveManifoldClass) -> bool:
    return record.type == "I" and record.typeI_q in (0, 4) and record.b2 in (2, 3)


def quotient_membership(record: FiveManifoldClass, form: IntersectionForm) -> bool:
    """Whether `form` models a quotient of the classified manifold by a free
    circle action.

    Implements the row-by-row conditions described in the module docstring.
    """
    if record.fundamental_group_order != 2 or record.type == "not-applicable":
        raise ValueError("quotient test applies to two-fold multiplier records")
    if form.rank != record.b2 + 1:
        return False
    if record.type == "II":
        return is_spin(form)
    if is_spin(form):
        return False
    if record.type == "III":
        s = signature(form) % 4
        q = record.pin_plus.canonical()
        return s == q % 4 or s == (-q) % 4
    # Type I
    if _is_exceptional_typeI(record):
        s = abs(signature(form))
        if record.b2 == 2:
            return s == 1
        return s < 4
    return True


@dataclass(frozen=True)
class CP2ConnectedSum:
    """Quotient model #^a CP^2 # ^b CP~2."""

    a: int
    b: int

    def form(self) -> IntersectionForm:
        return make_connected_sum(self.a, self.b, 0)

    @property
    def label(self) -> str:
        return f"#^{self.a} CP^2 # ^{self.b} CP~2"


@dataclass(frozen=True)
class S2xS2ConnectedSum:
    """Quotient model #^c (S^2 x S^2)."""

    c: int

    def form(self) -> IntersectionForm:
        return make_connected_sum(0, 0, self.c)

    @property
    def label(self) -> str:
        return f"#^{self.c} (S^2 x S^2)"


QuotientModel = CP2ConnectedSum | S2xS2ConnectedSum


def enumerate_standard_quotients(record: FiveManifoldClass):
    """Standard connected-sum quotients of the classified manifold.

    Type II: a single #^c (S^2 x S^2) with c = (b2+1)/2.  Type I: the sum
    #^b2 CP^2 # CP~2.  Type III: every representative c of the pin+ class
    mod 16 (both signs) yields (a, b) with a - b = c - 4l, a + b = b2 + 1,
    0 <= c - 4l < 4; representatives producing negative counts are skipped.
    Each returned model is checked against `quotient_membership`.
    """
    if record.fundamental_group_order != 2 or record.type == "not-applicable":
        raise ValueError("quotient enumeration applies to two-fold multiplier records")
    results: list = []
    if record.type == "II":
        if (record.b2 + 1) % 2 != 0:
            raise InternalInvariantError("spin-quotient manifold must have odd b2")
        results.append(S2xS2ConnectedSum((record.b2 + 1) // 2))
    elif record.type == "I":
        results.append(CP2ConnectedSum(record.b2, 1))
    else:
        q = record.pin_plus.canonical()
        if q % 2 != (record.b2 + 1) % 2:
            raise InternalInvariantError(
                "pin+ class parity disagrees with b2 + 1"
            )
        for c in sorted({q, (16 - q) % 16}):
            l = c // 4
            a2 = record.b2 + 1 + c - 4 * l
            b2_ = record.b2 + 1 - c + 4 * l
            if a2 % 2 or b2_ % 2:
                raise InternalInvariantError("half-integral summand count")
            a, b = a2 // 2, b2_ // 2
            if a < 0 or b < 0:
                continue
            results.append(CP2ConnectedSum(a, b))
    for model in results:
        if not quotient_membership(record, model.form()):
            raise InternalInvariantError(
                f"constructed quotient {model.label} fails the membership test"
            )
    return results


@dataclass(frozen=True)
class CongruenceSolution:
    """Solution set of (4 + 2e) k (k+1) = 4c (mod 16): full residue classes."""

    smallest: int
    modulus: int
    residues: tuple

    def admits(self, k: int) -> bool:
        return k % self.modulus in self.residues

    def iter_solutions(self):
        k = 0
        while True:
            if self.admits(k):
                yield k
            k += 1


def solve_k_congruence(c: int, epsilon) -> CongruenceSolution:
    """Solve (4 + 2e) k (k+1) = 4c (mod 16) for k by scanning a full period.

    k(k+1) mod 8 has period dividing 8, so the left side has period dividing
    8; we scan k in [0, 16) anyway and compress to the smallest period.  The
    congruence is solvable for every c in {0,1,2,3} and both signs; if a gap
    ever appeared it would be reported loudly rather than guessed around.
    """
    if c not in (0, 1, 2, 3):
        raise ValueError("target residue c must be in {0, 1, 2, 3}")
    eps = EpsilonSign.coerce(epsilon)
    coefficient = 4 + 2 * eps.value
    hits = [k for k in range(16) if (coefficient * k * (k + 1)) % 16 == (4 * c) % 16]
    if not hits:
        raise InternalInvariantError(
            f"congruence (4+2e)k(k+1) = 4c mod 16 unsolvable for c={c}, e={eps}"
        )
    modulus = 16
    residues = tuple(hits)
    if all((h + 8) % 16 in hits for h in hits):
        modulus = 8
        residues = tuple(sorted({h % 8 for h in hits}))
    return CongruenceSolution(smallest=hits[0], modulus=modulus, residues=residues)


def _require_diagonal_pm1(form: IntersectionForm, context: str):
    n = form.rank
    for i in range(n):
        for j in range(n):
            if i != j and form.matrix[i][j] != 0:
                raise UnsupportedFormError(f"{context} requires a diagonal form")
    if any(form.matrix[i][i] not in (1, -1) for i in range(n)):
        raise UnsupportedFormError(f"{context} requires diagonal entries +-1")


def chern_family_typeIII(
    form: IntersectionForm, count: int, epsilon, target_c: int = 0
):
    """First `count` classes d_k = (1+2k, 1, ..., 1) with admissible k.

    Admissible k solve (4 + 2e) k (k+1) = 4 * target_c (mod 16); all bundles
    with these Chern classes share one Type III total space.  Every returned
    class is primitive and characteristic.  target_c = 0 gives the family
    through k = 0.
    """
    _require_diagonal_pm1(form, "Type III family construction")
    if form.rank < 2:
        raise UnsupportedFormError(
            "Type III family construction requires b_2 >= 2 (a + b >= 2)"
        )
    if count < 0:
        raise ValueError("count must be nonnegative")
    solution = solve_k_congruence(target_c, epsilon)
    classes = []
    for k in solution.iter_solutions():
        if len(classes) == count:
            break
        d_k = CohomologyClass((1 + 2 * k,) + (1,) * (form.rank - 1))
        if not (is_primitive(d_k) and is_characteristic(form, d_k)):
            raise InternalInvariantError(
                f"family member {tuple(d_k)} is not primitive characteristic"
            )
        classes.append(d_k)
    return classes


def _typeI_vector(q: int, a: int, b: int, k: int):
    """The displayed family vector for canonical residue q on diag(+1^a, -1^b).

    Returns None when (q, a, b) violates the constraints under which the
    family is defined; callers turn that into a named error.
    """
    rank = a + b
    if q == 0:
        if a >= 2 and b >= 1:
            return (1 + 8 * k,) + (0,) * (rank - 2) + (1,)
        if b == 0 and a >= 5:
            return (2 + 8 * k, 1, 1, 1, 1) + (0,) * (rank - 5)
        return None
    if q == 4:
        if a >= 2 and b >= 1:
            return (2 + 8 * k, 1) + (0,) * (rank - 3) + (1,)
        if b == 0 and a >= 5:
            return (1 + 8 * k, 1, 1, 1) + (0,) * (rank - 4)
        return None
    if q == 2:
        if a >= 2 and rank >= 3:
            return (1 + 8 * k, 1) + (0,) * (rank - 2)
        return None
    if q in (1, 3):
        if a >= 1 and rank >= 2:
            second = 4 if q == 1 else 2
            return (1 + 8 * k, second) + (0,) * (rank - 2)
        return None
    raise ValueError("q must reduce to a residue mod 8")


_TYPEI_CONSTRAINTS = {
    0: "q=0 requires a >= 2 with b >= 1, or b = 0 with a >= 5",
    1: "q=1 requires a >= 1 and a + b >= 2",
    2: "q=2 requires a >= 2 and a + b >= 3",
    3: "q=3 requires a >= 1 and a + b >= 2",
    4: "q=4 requires a >= 2 with b >= 1, or b = 0 with a >= 5",
}


def chern_family_typeI(q: int, form: IntersectionForm, count: int):
    """First `count` classes of the Type I family for residue q (mod 8, up to sign).

    The base must be the sorted diagonal diag(+1^a, -1^b); the vectors are
    positional.  Every returned class is primitive, non-characteristic, and
    has self-pairing congruent to +-q mod 8.  Infeasible (q, a, b) raise an
    error naming the violated constraint.
    """
    a, b = require_diagonal_counts(form, "Type I family construction")
    canonical = min(q % 8, (8 - q % 8) % 8)
    if count < 0:
        raise ValueError("count must be nonnegative")
    if _typeI_vector(canonical, a, b, 0) is None:
        raise UnsupportedFormError(
            f"Type I family undefined for q={canonical} on diag(+1^{a}, -1^{b}): "
            f"{_TYPEI_CONSTRAINTS[canonical]}"
        )
    classes = []
    for k in range(count):
        d_k = CohomologyClass(_typeI_vector(canonical, a, b, k))
        self_pairing = pairing(form, d_k, d_k) % 8
        ok = (
            is_primitive(d_k)
            and not is_characteristic(form, d_k)
            and self_pairing in (canonical % 8, (8 - canonical) % 8)
        )
        if not ok:
            raise InternalInvariantError(
                f"Type I family member {tuple(d_k)} violates its contract"
            )
        classes.append(d_k)
    return classes
