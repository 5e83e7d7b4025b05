"""Exact arithmetic on integral intersection forms and degree-2 classes.

A closed oriented simply connected 4-manifold is modelled here by its
intersection form: a symmetric unimodular bilinear form on Z^n, stored as an
integer matrix in a fixed basis of second cohomology.  Degree-2 cohomology
classes are integer coordinate vectors in that basis.  Everything below is
computed in exact arithmetic (integers and rationals); no operation ever
touches floating point.

The standard building blocks are

    <+1>, <-1>   rank-1 forms (complex projective plane, either orientation)
    H            the rank-2 hyperbolic block [[0,1],[1,0]]  (S^2 x S^2)

and `make_connected_sum(a, b, c)` assembles the block sum
diag(+1)^a + diag(-1)^b + H^c, the form of the corresponding connected sum.

Key invariants, all exact:

* `signature`      computed by congruence (Lagrange) diagonalization over Q;
* `is_spin`        parity of the form (all self-pairings even);
* `char_vector_mod2`  the Wu/characteristic vector, i.e. the unique v over
  Z/2 with v.x = x.x (mod 2) for all x, found by solving the linear system
  (solvable and unique because the determinant is odd);
* `is_characteristic` membership of an integral class in that mod-2 class,
  which for unimodular forms forces  <d^2> = signature (mod 8)
  (van der Blij congruence).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
import json
import re

from .errors import DimensionMismatchError, UnsupportedFormError

__all__ = [
    "CohomologyClass",
    "IntersectionForm",
    "make_connected_sum",
    "block_sum",
    "class_concat",
    "pairing",
    "signature",
    "is_spin",
    "char_vector_mod2",
    "is_primitive",
    "is_characteristic",
    "negate",
    "diagonal_entry_counts",
    "require_diagonal_counts",
    "parse_form",
    "parse_class",
    "format_form",
    "format_class",
]


class CohomologyClass(tuple):
    """An integral degree-2 class: a tuple of integer coordinates.

    Plain tuples (or any iterable of ints) are accepted everywhere a class
    is expected; this subclass only adds small conveniences.
    """

    def __new__(cls, coords=()):
        return super().__new__(cls, (int(c) for c in coords))

    def mod2(self) -> tuple:
        return tuple(c % 2 for c in self)

    def __neg__(self) -> "CohomologyClass":
        return CohomologyClass(-c for c in self)

    def __repr__(self) -> str:
        return f"CohomologyClass({tuple(self)!r})"


def _as_coords(x) -> tuple:
    if isinstance(x, CohomologyClass):
        return tuple(x)
    return tuple(int(c) for c in x)


def _det(matrix) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


class IntersectionForm:
    """A symmetric unimodular integral bilinear form.

    `matrix` is stored as a tuple of tuples of ints; instances are immutable
    and hashable.  `provenance` records how the matrix was built, one of
    ("diagonal", a, b), ("even", c), ("block-sum",), ("raw",).  It is pure
    bookkeeping: every operation recomputes what it needs from the matrix.
    """

    __slots__ = ("matrix", "provenance")

    def __init__(self, matrix, provenance=("raw",)):
        rows = tuple(tuple(int(v) for v in row) for row in matrix)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"matrix not symmetric at ({i},{j})")
        if abs(_det(rows)) != 1:
            raise ValueError("matrix is not unimodular (determinant must be +-1)")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "provenance", tuple(provenance))
        self._check_provenance()

    def _check_provenance(self):
        tag = self.provenance[0]
        if tag == "diagonal":
            a, b = self.provenance[1], self.provenance[2]
            expected = _diagonal_matrix(a, b)
            if self.matrix != expected:
                raise ValueError("provenance diagonal(a,b) does not match matrix")
        elif tag == "even":
            c = self.provenance[1]
            if self.matrix != _hyperbolic_matrix(c):
                raise ValueError("provenance even(c) does not match matrix")
        elif tag not in ("block-sum", "raw"):
            raise ValueError(f"unknown provenance tag {tag!r}")

    def __setattr__(self, name, value):
        raise AttributeError("IntersectionForm is immutable")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntersectionForm):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"IntersectionForm({format_form(self)!r})"


def _diagonal_matrix(a: int, b: int) -> tuple:
    n = a + b
    return tuple(
        tuple((1 if i < a else -1) if i == j else 0 for j in range(n))
        for i in range(n)
    )


def _hyperbolic_matrix(c: int) -> tuple:
    n = 2 * c
    rows = [[0] * n for _ in range(n)]
    for k in range(c):
        rows[2 * k][2 * k + 1] = 1
        rows[2 * k + 1][2 * k] = 1
    return tuple(tuple(row) for row in rows)


def make_connected_sum(a: int, b: int, c: int) -> IntersectionForm:
    """Form of #^a CP^2 # ^b CP~2 # ^c (S^2 x S^2): diag(+1)^a + diag(-1)^b + H^c.

    Rank 0 (a = b = c = 0) is allowed and models the 4-sphere.
    """
    if a < 0 or b < 0 or c < 0:
        raise ValueError("summand counts must be nonnegative")
    if c == 0:
        return IntersectionForm(_diagonal_matrix(a, b), ("diagonal", a, b))
    if a == 0 and b == 0:
        return IntersectionForm(_hyperbolic_matrix(c), ("even", c))
    blocks = _diagonal_matrix(a, b)
    hyper = _hyperbolic_matrix(c)
    return IntersectionForm(_block_sum_matrices(blocks, hyper), ("block-sum",))


def _block_sum_matrices(m1, m2):
    n1, n2 = len(m1), len(m2)
    out = []
    for i in range(n1):
        out.append(tuple(m1[i]) + (0,) * n2)
    for i in range(n2):
        out.append((0,) * n1 + tuple(m2[i]))
    return tuple(out)


def block_sum(f1: IntersectionForm, f2: IntersectionForm) -> IntersectionForm:
    """Orthogonal direct sum of two forms (disjoint-union / connected-sum model)."""
    tag = ("block-sum",)
    p1, p2 = f1.provenance, f2.provenance
    if p1[0] == "diagonal" and p2[0] == "diagonal" and (p1[2] == 0 or p2[1] == 0):
        tag = ("diagonal", p1[1] + p2[1], p1[2] + p2[2])
    elif p1[0] == "even" and p2[0] == "even":
        tag = ("even", p1[1] + p2[1])
    elif f1.rank == 0:
        tag = p2
    elif f2.rank == 0:
        tag = p1
    return IntersectionForm(_block_sum_matrices(f1.matrix, f2.matrix), tag)


def class_concat(x1, x2) -> CohomologyClass:
    """Concatenate coordinates; the class on a block sum restricting to x1, x2."""
    return CohomologyClass(_as_coords(x1) + _as_coords(x2))


def _require_length(form: IntersectionForm, x, name: str = "class") -> tuple:
    coords = _as_coords(x)
    if len(coords) != form.rank:
        raise DimensionMismatchError(
            f"{name} has length {len(coords)}, form has rank {form.rank}"
        )
    return coords


def pairing(form: IntersectionForm, x, y) -> int:
    """Evaluate the bilinear form: x^T M y."""
    xs = _require_length(form, x, "first class")
    ys = _require_length(form, y, "second class")
    total = 0
    for i, xi in enumerate(xs):
        if xi == 0:
            continue
        row = form.matrix[i]
        total += xi * sum(row[j] * yj for j, yj in enumerate(ys) if yj)
    return total


def signature(form: IntersectionForm) -> int:
    """Signature (positive minus negative inertia index), computed exactly.

    Congruence diagonalization over the rationals: repeatedly split off a
    nonzero diagonal entry, creating one with the substitution
    x_i -> x_i + x_j when the diagonal is identically zero.  Never uses
    floating-point eigenvalues.
    """
    m = [[Fraction(v) for v in row] for row in form.matrix]
    pos = neg = 0
    while m:
        n = len(m)
        k = next((i for i in range(n) if m[i][i] != 0), None)
        if k is None:
            found = next(
                ((i, j) for i in range(n) for j in range(i + 1, n) if m[i][j] != 0),
                None,
            )
            if found is None:
                break  # zero block contributes nothing
            i, j = found
            for t in range(n):
                m[i][t] += m[j][t]
            for t in range(n):
                m[t][i] += m[t][j]
            k = i
        p = m[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [r for r in range(n) if r != k]
        m = [[m[r][c] - m[r][k] * m[k][c] / p for c in rest] for r in rest]
    return pos - neg


def is_spin(form: IntersectionForm) -> bool:
    """True iff the form is even: x.x is even for every x.

    Since x^T M x = sum M_ii x_i^2 (mod 2) this is exactly "all diagonal
    entries even".  Rank 0 is vacuously spin.
    """
    return all(form.matrix[i][i] % 2 == 0 for i in range(form.rank))


def char_vector_mod2(form: IntersectionForm) -> CohomologyClass:
    """The characteristic (Wu) vector over Z/2: v with v.x = x.x (mod 2) for all x.

    Solves M v = diag(M) over GF(2) by Gaussian elimination; the solution
    exists and is unique because det(M) is odd.  Coordinates returned in
    {0, 1}.  In a basis diagonalizing an odd form this is (1, ..., 1); for
    an even form it is zero; for a raw matrix it is whatever the system
    gives (the function never pattern-matches provenance).
    """
    n = form.rank
    aug = [
        [form.matrix[i][j] & 1 for j in range(n)] + [form.matrix[i][i] & 1]
        for i in range(n)
    ]
    pivots = []
    row = 0
    for col in range(n):
        pr = next((r for r in range(row, n) if aug[r][col]), None)
        if pr is None:
            continue
        aug[row], aug[pr] = aug[pr], aug[row]
        for r in range(n):
            if r != row and aug[r][col]:
                aug[r] = [x ^ y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    if row < n:
        # det(M) odd makes M invertible over GF(2); unreachable for valid forms
        raise AssertionError("mod-2 system singular for a unimodular form")
    v = [0] * n
    for r, col in enumerate(pivots):
        v[col] = aug[r][n]
    return CohomologyClass(v)


def is_primitive(x) -> bool:
    """True iff the gcd of the coordinates is 1 (class not a proper multiple).

    The zero class is rejected: primitivity is undefined for it.
    """
    coords = _as_coords(x)
    g = gcd(*(abs(c) for c in coords)) if coords else 0
    if g == 0:
        raise ValueError("primitivity is undefined for the zero class")
    return g == 1


def is_characteristic(form: IntersectionForm, d) -> bool:
    """True iff d reduces mod 2 to the characteristic vector of the form."""
    coords = _require_length(form, d)
    return tuple(c % 2 for c in coords) == tuple(char_vector_mod2(form))


def negate(form: IntersectionForm) -> IntersectionForm:
    """Orientation reversal: the form with all pairings negated."""
    tag = form.provenance
    if tag[0] == "diagonal" and (tag[1] == 0 or tag[2] == 0):
        new_tag = ("diagonal", tag[2], tag[1])
    elif tag[0] == "even":
        new_tag = ("raw",)  # -H is even but not literally H blocks
    else:
        new_tag = ("raw",)
    return IntersectionForm(
        tuple(tuple(-v for v in row) for row in form.matrix), new_tag
    )


def diagonal_entry_counts(form: IntersectionForm):
    """(a, b) if the matrix is literally diag(+1 x a, -1 x b); otherwise None.

    Family constructors use this to insist on the sorted diagonal normal
    form, where coordinate positions (+1 block first) are meaningful.
    """
    n = form.rank
    diag = []
    for i in range(n):
        for j in range(n):
            if i != j and form.matrix[i][j] != 0:
                return None
        diag.append(form.matrix[i][i])
    if any(v not in (1, -1) for v in diag):
        return None
    a = sum(1 for v in diag if v == 1)
    if diag != [1] * a + [-1] * (n - a):
        return None
    return a, n - a


_DIAG_RE = re.compile(r"^diag\(\s*([-+]?\d+(?:\s*,\s*[-+]?\d+)*)?\s*\)$")
_EVEN_RE = re.compile(r"^even\(\s*(\d+)\s*\)$")


def parse_form(text: str) -> IntersectionForm:
    """Parse the textual form syntax used by the CLI.

    Accepted shapes:
      diag(1,1,-1)        explicit diagonal entries
      even(2)             2 hyperbolic blocks
      [[0,1],[1,0]]       explicit matrix, JSON row lists
      0,1;1,0             explicit matrix, semicolon-separated rows
    """
    text = text.strip()
    m = _DIAG_RE.match(text)
    if m:
        entries = [int(v) for v in m.group(1).split(",")] if m.group(1) else []
        n = len(entries)
        matrix = tuple(
            tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)
        )
        a = sum(1 for v in entries if v == 1)
        b = n - a
        if entries == [1] * a + [-1] * b:
            return IntersectionForm(matrix, ("diagonal", a, b))
        return IntersectionForm(matrix, ("raw",))
    m = _EVEN_RE.match(text)
    if m:
        return make_connected_sum(0, 0, int(m.group(1)))
    if text.startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"cannot parse form {text!r}: {exc}") from None
        return IntersectionForm(rows, ("raw",))
    if ";" in text:
        rows = [
            [int(v) for v in row.split(",")] for row in text.split(";") if row.strip()
        ]
        return IntersectionForm(rows, ("raw",))
    raise ValueError(
        f"cannot parse form {text!r}: expected diag(...), even(c), or matrix rows"
    )


def parse_class(text: str) -> CohomologyClass:
    """Parse a comma-separated coordinate list, e.g. '3,1,1'. Empty -> rank 0."""
    text = text.strip()
    if not text:
        return CohomologyClass(())
    return CohomologyClass(int(v) for v in text.split(","))


def format_form(form: IntersectionForm) -> str:
    """Canonical text for a form: diag(...), even(c), or semicolon rows."""
    n = form.rank
    if all(
        form.matrix[i][j] == 0 for i in range(n) for j in range(n) if i != j
    ):
        return "diag(" + ",".join(str(form.matrix[i][i]) for i in range(n)) + ")"
    if n % 2 == 0 and form.matrix == _hyperbolic_matrix(n // 2):
        return f"even({n // 2})"
    return ";".join(",".join(str(v) for v in row) for row in form.matrix)


def format_class(x) -> str:
    return ",".join(str(c) for c in _as_coords(x))


def require_diagonal_counts(form: IntersectionForm, context: str):
    """(a, b) of a sorted diag(+1^a, -1^b) matrix, or raise UnsupportedFormError."""
    counts = diagonal_entry_counts(form)
    if counts is None:
        raise UnsupportedFormError(
            f"{context} requires the form diag(+1 x a, -1 x b) "
            f"(+1 entries first); got {format_form(form)}"
        )
    return counts
