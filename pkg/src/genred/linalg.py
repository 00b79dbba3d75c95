"""Pointwise linear algebra on split-signature spaces ``E = V ⊕ V*``.

Vectors are coordinate tuples in the basis ``(∂_1..∂_n, e_1*..e_n*)``; the
pairing is ``⟨X+ξ, Y+η⟩ = ½(ξ(Y) + η(X))``.  Every operation works over an
exact field (Gaussian rationals by default, or any exact scalar type such as
:class:`~genred.scalars.QiLambda`) and, when requested, over complex floats
with a relative pivot threshold.

Quotients ``W/K`` (``K ⊆ W``) are spaces in their own right: a :class:`Space`
carries its Gram matrix and the kernel of its anchor, so reduced Dirac and
generalized complex structures are handled by the same code as the originals.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .errors import (
    ConditionViolated,
    InvariantError,
    NotReducible,
    RealIndexNonzero,
    SingularB,
)
from .scalars import GaussianRational, I, ONE, ZERO, format_scalar, parse_scalar

FLOAT_TOLERANCE = 1e-9


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Field:
    """Scalar field for row reduction: exact (default) or complex float."""

    exact: bool = True
    tolerance: float = FLOAT_TOLERANCE

    @property
    def name(self) -> str:
        return "exact" if self.exact else "float"

    def coerce(self, x):
        if not self.exact:
            return complex(x)
        if isinstance(x, (int, Fraction, str)):
            return parse_scalar(x) if isinstance(x, str) else GaussianRational(x)
        if isinstance(x, (float, complex)):
            raise InvariantError("floating-point scalar supplied to the exact field")
        return x

    def is_zero(self, x) -> bool:
        if self.exact:
            return not x
        return abs(x) <= self.tolerance

    def zero(self):
        return ZERO if self.exact else 0j

    def one(self):
        return ONE if self.exact else 1 + 0j

    def i(self):
        return I if self.exact else 1j

    def conj(self, x):
        return x.conjugate()


EXACT = Field(True)
FLOAT = Field(False)


def get_field(name: str | Field | None) -> Field:
    if isinstance(name, Field):
        return name
    if name in (None, "exact"):
        return EXACT
    if name == "float":
        return FLOAT
    raise InvariantError(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# matrices (lists of rows)
# ---------------------------------------------------------------------------


def identity(n: int, field: Field = EXACT) -> list:
    return [[field.one() if i == j else field.zero() for j in range(n)] for i in range(n)]


def zeros(r: int, c: int, field: Field = EXACT) -> list:
    return [[field.zero()] * c for _ in range(r)]


def transpose(a: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    bt = transpose(b)
    out = []
    for row in a:
        out.append([_dot(row, col) for col in bt])
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [_dot(row, v) for row in a]


def _dot(u: Sequence, v: Sequence):
    acc = u[0] * 0 if len(u) else ZERO
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return acc


def mat_add(a, b) -> list:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_sub(a, b) -> list:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(a, c) -> list:
    return [[c * x for x in r] for r in a]


def mat_conj(a) -> list:
    return [[x.conjugate() for x in r] for r in a]


def mat_equal(a, b, field: Field = EXACT) -> bool:
    if len(a) != len(b):
        return False
    for r, s in zip(a, b):
        if len(r) != len(s):
            return False
        for x, y in zip(r, s):
            if not field.is_zero(x - y):
                return False
    return True


def block(a, b, c, d) -> list:
    """Assemble ``[[a, b], [c, d]]`` from square blocks."""
    return [ra + rb for ra, rb in zip(a, b)] + [rc + rd for rc, rd in zip(c, d)]


def split_blocks(m) -> tuple:
    """Split a ``2n×2n`` matrix into ``(UL, UR, LL, LR)``."""
    n = len(m) // 2
    return (
        [r[:n] for r in m[:n]],
        [r[n:] for r in m[:n]],
        [r[:n] for r in m[n:]],
        [r[n:] for r in m[n:]],
    )


def rref(rows: Sequence[Sequence], field: Field = EXACT) -> tuple:
    """Reduced row echelon form: ``(nonzero rows, pivot columns)``.

    Exact fields pivot on the first nonzero entry, so the result is canonical.
    The float path scales each row to unit max-norm, pivots on the largest
    entry and treats entries below the tolerance as zero.
    """
    m = [list(map(field.coerce, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    if not field.exact:
        scaled = []
        for r in m:
            big = max((abs(x) for x in r), default=0.0)
            if big > 0:
                scaled.append([x / big for x in r])
        m = scaled
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        if field.exact:
            p = next((k for k in range(r, len(m)) if m[k][c]), None)
        else:
            best, p = field.tolerance, None
            for k in range(r, len(m)):
                if abs(m[k][c]) > best:
                    best, p = abs(m[k][c]), k
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = field.one() / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for k in range(len(m)):
            if k != r:
                f = m[k][c]
                if not field.is_zero(f):
                    m[k] = [x - f * y if y else x for x, y in zip(m[k], m[r])]
        if not field.exact:
            m[r][c] = field.one()
            for k in range(len(m)):
                if k != r:
                    m[k][c] = field.zero()
        pivots.append(c)
        r += 1
    out = m[:r]
    if not field.exact:
        out = [[0j if abs(x) <= field.tolerance else x for x in row] for row in out]
    return out, pivots


def rank(rows: Sequence[Sequence], field: Field = EXACT) -> int:
    return len(rref(rows, field)[1])


def nullspace(rows: Sequence[Sequence], ncols: int, field: Field = EXACT) -> list:
    """Basis of ``{x : rows·x = 0}``."""
    red, piv = rref(rows, field) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [field.zero()] * ncols
        v[f] = field.one()
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve_left(basis: Sequence[Sequence], v: Sequence, field: Field = EXACT):
    """Coefficients ``c`` with ``Σ c_i basis_i = v`` or ``None`` when ``v`` is outside the span."""
    k = len(basis)
    if k == 0:
        return [] if all(field.is_zero(x) for x in v) else None
    # columns are the basis vectors; augmented with v
    aug = [[basis[i][j] for i in range(k)] + [v[j]] for j in range(len(v))]
    red, piv = rref(aug, field)
    if k in piv:
        return None
    c = [field.zero()] * k
    for row, p in zip(red, piv):
        c[p] = row[k]
    return c


def inverse(m: Sequence[Sequence], field: Field = EXACT) -> list:
    n = len(m)
    aug = [list(r) + e for r, e in zip(m, identity(n, field))]
    red, piv = rref(aug, field)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularB("matrix is singular")
    return [r[n:] for r in red]


def is_invertible(m: Sequence[Sequence], field: Field = EXACT) -> bool:
    return rank(m, field) == len(m)


def leading_minors(m: Sequence[Sequence], field: Field = EXACT) -> list:
    """Leading principal minors, computed as running products of elimination pivots."""
    a = [list(map(field.coerce, r)) for r in m]
    n = len(a)
    minors = []
    det = field.one()
    for k in range(n):
        piv = a[k][k]
        if field.is_zero(piv):
            # the k-th minor vanishes; compute the rest directly
            minors.append(field.zero())
            for j in range(k + 1, n):
                minors.append(_det([r[: j + 1] for r in m[: j + 1]], field))
            return minors
        det = det * piv
        minors.append(det)
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if not field.is_zero(f):
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return minors


def _det(m, field: Field = EXACT):
    a = [list(map(field.coerce, r)) for r in m]
    n = len(a)
    det = field.one()
    for c in range(n):
        p = next((k for k in range(c, n) if not field.is_zero(a[k][c])), None)
        if p is None:
            return field.zero()
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det = det * a[c][c]
        for k in range(c + 1, n):
            f = a[k][c] / a[c][c]
            if not field.is_zero(f):
                a[k] = [x - f * y for x, y in zip(a[k], a[c])]
    return det


def _is_positive_real(x, field: Field) -> bool:
    if field.exact:
        if isinstance(x, GaussianRational):
            return x.im == 0 and x.re > 0
        c = complex(x)
        return c.imag == 0 and c.real > 0
    return abs(x.imag) <= field.tolerance and x.real > field.tolerance


# ---------------------------------------------------------------------------
# spaces and subspaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Space:
    """A finite-dimensional space with a symmetric pairing and an anchor kernel.

    ``gram[i][j] = ⟨b_i, b_j⟩``; ``cotangent`` spans the kernel of the anchor
    (``V*`` for a standard split space).  ``presentation`` is set for quotients.
    """

    dim: int
    gram: tuple
    cotangent: tuple
    field: Field = EXACT
    split: bool = False
    presentation: object = dc_field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.dim // 2

    def pair(self, v: Sequence, w: Sequence):
        acc = self.field.zero()
        for i, vi in enumerate(v):
            if self.field.is_zero(vi):
                continue
            row = self.gram[i]
            for j, wj in enumerate(w):
                g = row[j]
                if g and not self.field.is_zero(wj):
                    acc = acc + vi * g * wj
        return acc

    def gram_matrix(self) -> list:
        return [list(r) for r in self.gram]

    def zero_vector(self) -> list:
        return [self.field.zero()] * self.dim

    def basis_vector(self, i: int) -> list:
        v = self.zero_vector()
        v[i] = self.field.one()
        return v

    def same_as(self, other: "Space") -> bool:
        return self is other or (
            self.dim == other.dim
            and self.field == other.field
            and mat_equal(self.gram, other.gram, self.field)
            and Subspace(self, self.cotangent) == Subspace(other, other.cotangent).with_ambient(self)
        )


def SplitSpace(n: int, field: str | Field = "exact") -> Space:
    """Standard ``V ⊕ V*`` with ``dim V = n``."""
    f = get_field(field)
    half = f.one() / 2 if f.exact else 0.5 + 0j
    gram = []
    for i in range(2 * n):
        row = []
        for j in range(2 * n):
            row.append(half if abs(i - j) == n else f.zero())
        gram.append(tuple(row))
    cot = tuple(tuple(f.one() if j == n + i else f.zero() for j in range(2 * n)) for i in range(n))
    return Space(2 * n, tuple(gram), cot, f, True)


class Subspace:
    """Subspace of a :class:`Space`, stored as a canonical RREF basis."""

    __slots__ = ("ambient", "rows", "pivots")

    def __init__(self, ambient: Space, vectors: Sequence[Sequence] = ()):
        self.ambient = ambient
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient.dim:
                raise InvariantError(f"vector of length {len(v)} in a space of dimension {ambient.dim}")
        rows, piv = rref(vecs, ambient.field) if vecs else ([], [])
        self.rows = [tuple(r) for r in rows]
        self.pivots = piv

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def field(self) -> Field:
        return self.ambient.field

    def basis(self) -> list:
        return [list(r) for r in self.rows]

    def with_ambient(self, ambient: Space) -> "Subspace":
        return Subspace(ambient, self.rows)

    def contains(self, v: Sequence) -> bool:
        return rank(self.basis() + [list(v)], self.field) == self.rank

    def contains_subspace(self, other: "Subspace") -> bool:
        return rank(self.basis() + other.basis(), self.field) == self.rank

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.rank != other.rank or self.ambient.dim != other.ambient.dim:
            return False
        if self.field.exact:
            return self.rows == other.rows
        return self.contains_subspace(other)

    __hash__ = None

    def is_zero(self) -> bool:
        return self.rank == 0

    def conj(self) -> "Subspace":
        return Subspace(self.ambient, [[x.conjugate() for x in r] for r in self.rows])

    def image(self, m: Sequence[Sequence]) -> "Subspace":
        """Image under the linear map with matrix ``m`` acting on column vectors."""
        return Subspace(self.ambient, [matvec(m, r) for r in self.rows])

    def to_json(self) -> dict:
        if not self.field.exact:
            rows = [[_format_float(x) for x in r] for r in self.rows]
        else:
            rows = [[format_scalar(x) for x in r] for r in self.rows]
        return {
            "ambient_n": self.ambient.n,
            "complex": any(_nonreal(x) for r in self.rows for x in r),
            "rows": rows,
        }

    @classmethod
    def from_json(cls, data, field: str | Field = "exact") -> "Subspace":
        try:
            n = int(data["ambient_n"])
            rows = data.get("rows", [])
        except (KeyError, TypeError, ValueError) as exc:
            from .errors import ParseError

            raise ParseError(f"malformed subspace: {exc}") from exc
        sp = SplitSpace(n, field)
        f = sp.field
        vecs = [[f.coerce(parse_scalar(str(x))) if f.exact else complex(parse_scalar(str(x))) for x in r] for r in rows]
        return cls(sp, vecs)

    def __repr__(self):
        return f"Subspace(rank={self.rank}, dim={self.ambient.dim}, rows={[[str(x) for x in r] for r in self.rows]})"


def _nonreal(x) -> bool:
    if isinstance(x, GaussianRational):
        return x.im != 0
    return complex(x).imag != 0


def _format_float(x: complex) -> str:
    return repr(x.real) if x.imag == 0 else f"{x.real!r}+{x.imag!r}i"


def span(space: Space, vectors: Sequence[Sequence]) -> Subspace:
    return Subspace(space, [[space.field.coerce(x) for x in v] for v in vectors])


def tangent(space: Space) -> Subspace:
    """The tangent summand ``V`` of a standard split space."""
    if not space.split:
        raise InvariantError("tangent summand is only defined for standard split spaces")
    return Subspace(space, [space.basis_vector(i) for i in range(space.n)])


def cotangent(space: Space) -> Subspace:
    """Kernel of the anchor (``V*`` for a standard split space)."""
    return Subspace(space, space.cotangent)


def whole(space: Space) -> Subspace:
    return Subspace(space, identity(space.dim, space.field))


def _check_same(a: Subspace, b: Subspace):
    if a.ambient is not b.ambient and not a.ambient.same_as(b.ambient):
        raise InvariantError("subspaces live in different ambient spaces")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return Subspace(a.ambient, a.basis() + b.basis())


def annihilator_rows(a: Subspace) -> list:
    """Linear functionals (coordinate dot product) vanishing on ``a``."""
    return nullspace(a.basis(), a.ambient.dim, a.field)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """``a ∩ b`` as the nullspace of the stacked annihilator constraints."""
    _check_same(a, b)
    cons = annihilator_rows(a) + annihilator_rows(b)
    if not cons:
        return Subspace(a.ambient, identity(a.ambient.dim, a.field))
    return Subspace(a.ambient, nullspace(cons, a.ambient.dim, a.field))


def perp(a: Subspace) -> Subspace:
    """Orthogonal complement with respect to the ambient pairing."""
    sp = a.ambient
    cons = matmul(a.basis(), sp.gram_matrix()) if a.rank else []
    if not cons:
        return whole(sp)
    return Subspace(sp, nullspace(cons, sp.dim, sp.field))


def quotient_basis(sub: Subspace, kern: Subspace) -> list:
    """Canonical representatives of ``sub/kern``: the echelon complement of ``kern`` in ``sub``."""
    _check_same(sub, kern)
    if not sub.contains_subspace(kern):
        raise InvariantError("quotient requires kern ⊆ sub")
    f = sub.field
    reduced = []
    for row in sub.rows:
        r = list(row)
        for krow, p in zip(kern.rows, kern.pivots):
            c = r[p]
            if not f.is_zero(c):
                r = [x - c * y for x, y in zip(r, krow)]
        reduced.append(r)
    red, _ = rref(reduced, f)
    return [list(r) for r in red]


def lattice(a: Subspace, b: Subspace | None, op: str):
    """Dispatch ``sum``, ``intersect``, ``perp`` (of ``a``) and ``quotient_basis`` (``a/b``)."""
    if op == "sum":
        return subspace_sum(a, b)
    if op == "intersect":
        return intersect(a, b)
    if op == "perp":
        return perp(a)
    if op == "quotient_basis":
        return quotient_basis(a, b)
    raise InvariantError(f"unknown lattice operation {op!r}")


def is_isotropic(w: Subspace) -> bool:
    sp = w.ambient
    b = w.basis()
    for i in range(len(b)):
        for j in range(i, len(b)):
            if not sp.field.is_zero(sp.pair(b[i], b[j])):
                return False
    return True


def isotropy_check(w: Subspace) -> str:
    """``maximal_isotropic``, ``isotropic`` or ``neither``."""
    if not is_isotropic(w):
        return "neither"
    return "maximal_isotropic" if 2 * w.rank == w.ambient.dim else "isotropic"


def anchor_image(w: Subspace) -> Subspace:
    """``π(W)`` inside ``V`` (cotangent coordinates zeroed); standard split spaces only."""
    sp = w.ambient
    if not sp.split:
        raise InvariantError("anchor projection needs a standard split space")
    n = sp.n
    return Subspace(sp, [list(r[:n]) + [sp.field.zero()] * n for r in w.rows])


def k_tilde(K: Subspace) -> Subspace:
    """``K̃ = K ∩ (K^⊥ + V*)``."""
    return intersect(K, subspace_sum(perp(K), cotangent(K.ambient)))


def exactness_check(K: Subspace) -> bool:
    """``π(K) ∩ π(K^⊥) = π(K ∩ K^⊥)`` — the reduced algebroid is exact."""
    Kp = perp(K)
    return intersect(anchor_image(K), anchor_image(Kp)) == anchor_image(intersect(K, Kp))


# ---------------------------------------------------------------------------
# quotients and Dirac reduction
# ---------------------------------------------------------------------------


class ReducedPresentation:
    """The quotient ``sub/kern`` with canonical echelon-complement representatives."""

    def __init__(self, sub: Subspace, kern: Subspace):
        self.sub = sub
        self.kern = kern
        self.reps = quotient_basis(sub, kern)
        self.ambient = sub.ambient
        f = sub.field
        gram = tuple(tuple(self.ambient.pair(r, s) for s in self.reps) for r in self.reps)
        # kernel of the induced anchor: classes whose anchor lies in π(kern)
        cot_amb = Subspace(self.ambient, self.ambient.cotangent)
        low = intersect(sub, subspace_sum(cot_amb, kern))
        cot = [self.coords(v) for v in quotient_basis(low, kern)] if low.rank > kern.rank else []
        self.space = Space(len(self.reps), gram, tuple(tuple(c) for c in cot), f, False, self)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, v: Sequence) -> list:
        """Coordinates of the class of ``v ∈ sub`` in the representative basis."""
        c = solve_left(self.reps + self.kern.basis(), v, self.sub.field)
        if c is None:
            raise InvariantError("vector is not in the subspace being reduced")
        return c[: len(self.reps)]

    def lift(self, coords: Sequence) -> list:
        f = self.sub.field
        v = [f.zero()] * self.ambient.dim
        for c, r in zip(coords, self.reps):
            if not f.is_zero(c):
                v = [x + c * y for x, y in zip(v, r)]
        return v

    def reduce(self, W: Subspace) -> Subspace:
        """Image of ``(W ∩ sub) + kern`` in the quotient."""
        core = subspace_sum(intersect(W, self.sub), self.kern)
        vecs = [self.coords(v) for v in core.basis()]
        return Subspace(self.space, vecs)


def reduce_dirac(D: Subspace, K: Subspace) -> Subspace:
    """``D_red = (D ∩ K̃^⊥ + K̃)/K̃`` in the canonical quotient of ``K̃^⊥`` by ``K̃``.

    The returned subspace's ``ambient.presentation`` is the
    :class:`ReducedPresentation` used.
    """
    Kt = k_tilde(K)
    if not is_isotropic(Kt):
        raise NotReducible("K̃ is not isotropic; the reduced algebroid is not exact")
    pres = ReducedPresentation(perp(Kt), Kt)
    return pres.reduce(D)


# ---------------------------------------------------------------------------
# generalized complex structures
# ---------------------------------------------------------------------------


class LinearGCS:
    """An orthogonal complex structure ``J`` (``J² = −1``) on a :class:`Space`."""

    __slots__ = ("J", "space")

    def __init__(self, J: Sequence[Sequence], space: Space | None = None, check: bool = True):
        n2 = len(J)
        self.space = space if space is not None else SplitSpace(n2 // 2)
        f = self.space.field
        self.J = [[f.coerce(x) for x in r] for r in J]
        if check:
            if n2 != self.space.dim or any(len(r) != n2 for r in self.J):
                raise InvariantError("J has the wrong shape for its space")
            if not mat_equal(matmul(self.J, self.J), mat_scale(identity(n2, f), -f.one()), f):
                raise InvariantError("J² ≠ −1")
            G = self.space.gram_matrix()
            if not mat_equal(matmul(matmul(transpose(self.J), G), self.J), G, f):
                raise InvariantError("J is not orthogonal for the pairing")

    @property
    def field(self) -> Field:
        return self.space.field

    def apply(self, v: Sequence) -> list:
        return matvec(self.J, v)

    def image(self, W: Subspace) -> Subspace:
        return W.image(self.J)

    def __eq__(self, other):
        if not isinstance(other, LinearGCS):
            return NotImplemented
        return mat_equal(self.J, other.J, self.field)

    __hash__ = None

    def to_json(self) -> list:
        return [[format_scalar(x) if self.field.exact else _format_float(x) for x in r] for r in self.J]


def two_form_matrix(W: Sequence[Sequence], field: Field = EXACT) -> list:
    """Matrix of ``X ↦ i_X ω`` for ``W[a][b] = ω(∂_a, ∂_b)``."""
    return [[field.coerce(x) for x in r] for r in transpose(W)]


def J_symplectic(W: Sequence[Sequence], field: str | Field = "exact") -> LinearGCS:
    """``J_ω = [[0, −ω♭⁻¹], [ω♭, 0]]``, whose +i eigenspace is ``{X − iω(X)}``."""
    f = get_field(field)
    n = len(W)
    wf = two_form_matrix(W, f)
    winv = inverse(wf, f)
    J = block(zeros(n, n, f), mat_scale(winv, -f.one()), wf, zeros(n, n, f))
    return LinearGCS(J, SplitSpace(n, f))


def J_complex(Imat: Sequence[Sequence], field: str | Field = "exact") -> LinearGCS:
    """``J_I = [[−I, 0], [0, I*]]`` for a complex structure ``I`` on ``V``."""
    f = get_field(field)
    n = len(Imat)
    Im = [[f.coerce(x) for x in r] for r in Imat]
    J = block(mat_scale(Im, -f.one()), zeros(n, n, f), zeros(n, n, f), transpose(Im))
    return LinearGCS(J, SplitSpace(n, f))


def b_field_matrix(B: Sequence[Sequence], field: Field = EXACT) -> list:
    """``e^B = [[1, 0], [B♭, 1]]`` acting as ``X + ξ ↦ X + ξ + i_X B``."""
    n = len(B)
    return block(identity(n, field), zeros(n, n, field), two_form_matrix(B, field), identity(n, field))


def b_transform_gcs(J: LinearGCS, B: Sequence[Sequence]) -> LinearGCS:
    f = J.field
    e = b_field_matrix(B, f)
    einv = b_field_matrix([[-x for x in r] for r in B], f)
    return LinearGCS(matmul(matmul(e, J.J), einv), J.space)


def standard_complex_structure(n: int, field: Field = EXACT) -> list:
    """``I ∂x_k = ∂y_k`` in the basis ``(x_1, y_1, x_2, y_2, …)``."""
    Imat = zeros(n, n, field)
    for k in range(0, n, 2):
        Imat[k + 1][k] = field.one()
        Imat[k][k + 1] = -field.one()
    return Imat


def standard_symplectic(n: int, field: Field = EXACT) -> list:
    """``ω = Σ dx_k ∧ dy_k`` as ``W[a][b] = ω(∂_a, ∂_b)``."""
    W = zeros(n, n, field)
    for k in range(0, n, 2):
        W[k][k + 1] = field.one()
        W[k + 1][k] = -field.one()
    return W


@dataclass
class GCSReport:
    L: Subspace
    type: int
    real_index_zero: bool
    maximal_isotropic: bool


def plus_i_eigenspace(J: LinearGCS) -> Subspace:
    f = J.field
    n2 = J.space.dim
    shifted = mat_sub(J.J, mat_scale(identity(n2, f), f.i()))
    return Subspace(J.space, nullspace(shifted, n2, f))


def type_of(L: Subspace) -> int:
    """Complex dimension of the kernel of the anchor restricted to ``L``."""
    return intersect(L, cotangent(L.ambient)).rank


def gcs_check(J: LinearGCS) -> GCSReport:
    L = plus_i_eigenspace(J)
    return GCSReport(
        L=L,
        type=type_of(L),
        real_index_zero=intersect(L, L.conj()).is_zero(),
        maximal_isotropic=isotropy_check(L) == "maximal_isotropic",
    )


def gcs_from_dirac(L: Subspace, Lbar: Subspace | None = None) -> LinearGCS:
    """The structure that is ``+i`` on ``L`` and ``−i`` on ``L̄``."""
    sp = L.ambient
    f = sp.field
    Lb = Lbar if Lbar is not None else L.conj()
    if L.rank + Lb.rank != sp.dim or not intersect(L, Lb).is_zero():
        raise RealIndexNonzero("L ∩ L̄ ≠ 0", witness=_first_vector(intersect(L, Lb)))
    P = transpose(L.basis() + Lb.basis())
    Dg = zeros(sp.dim, sp.dim, f)
    for k in range(sp.dim):
        Dg[k][k] = f.i() if k < L.rank else -f.i()
    return LinearGCS(matmul(matmul(P, Dg), inverse(P, f)), sp)


def _first_vector(W: Subspace):
    return list(W.rows[0]) if W.rank else None


@dataclass
class ReducedGCS:
    J: LinearGCS
    type: int
    condition: str
    presentation: ReducedPresentation


def _pairing_nondegenerate(K: Subspace, JK: Subspace) -> bool:
    sp = K.ambient
    if K.rank != JK.rank:
        return False
    M = [[sp.pair(k, j) for j in JK.basis()] for k in K.basis()]
    return not M or is_invertible(M, sp.field)


def real_index_criterion(J: LinearGCS, K: Subspace):
    """Returns ``(holds, witness)`` for ``J K̃ ∩ K̃^⊥ ⊆ K̃``."""
    Kt = k_tilde(K)
    X = intersect(J.image(Kt), perp(Kt))
    for v in X.basis():
        if not Kt.contains(v):
            return False, v
    return True, None


def gcs_reduce(J: LinearGCS, K: Subspace) -> ReducedGCS:
    """Reduce ``J`` by ``K`` through its +i eigenspace.

    The real-index criterion ``J K̃ ∩ K̃^⊥ ⊆ K̃`` decides success; the report
    also names which sufficient condition applied (``JK=K``, ``nondegenerate``
    or ``criterion``).
    """
    Kt = k_tilde(K)
    if not is_isotropic(Kt):
        raise NotReducible("K̃ is not isotropic; the reduced algebroid is not exact")
    holds, witness = real_index_criterion(J, K)
    if not holds:
        raise RealIndexNonzero("J K̃ ∩ K̃^⊥ is not contained in K̃", witness=witness)
    JK = J.image(K)
    if JK == K:
        cond = "JK=K"
    elif _pairing_nondegenerate(K, JK):
        cond = "nondegenerate"
    else:
        cond = "criterion"
    L = plus_i_eigenspace(J)
    pres = ReducedPresentation(perp(Kt), Kt)
    Lr = pres.reduce(L)
    Lbr = pres.reduce(L.conj())
    Jr = gcs_from_dirac(Lr, Lbr)
    return ReducedGCS(Jr, type_of(Lr), cond, pres)


# ---------------------------------------------------------------------------
# generalized Kähler structures
# ---------------------------------------------------------------------------


@dataclass
class GKReport:
    commute: bool
    G: list
    positive: bool
    minors: list


def metric_form(G: Sequence[Sequence], space: Space) -> list:
    """Matrix of the bilinear form ``(v, w) ↦ ⟨Gv, w⟩``."""
    return matmul(transpose(G), space.gram_matrix())


def is_positive_definite(S: Sequence[Sequence], field: Field = EXACT):
    """Hermitian positivity: exact via leading principal minors, float via eigenvalues."""
    n = len(S)
    herm = all(field.is_zero(S[i][j] - S[j][i].conjugate()) for i in range(n) for j in range(n))
    if not herm:
        return False, []
    if field.exact:
        minors = leading_minors(S, field)
        return all(_is_positive_real(m, field) for m in minors), minors
    import numpy as np

    ev = np.linalg.eigvalsh(np.array([[complex(x) for x in r] for r in S]))
    return bool(ev.min() > field.tolerance), [float(x) for x in ev]


def gk_check(J1: LinearGCS, J2: LinearGCS) -> GKReport:
    f = J1.field
    A = matmul(J1.J, J2.J)
    B = matmul(J2.J, J1.J)
    commute = mat_equal(A, B, f)
    pos, minors = is_positive_definite(metric_form(A, J1.space), f) if commute else (False, [])
    return GKReport(commute, A, pos, minors)


@dataclass
class ReducedGK:
    J1: LinearGCS
    J2: LinearGCS
    report: GKReport
    presentation: ReducedPresentation


def g_orthogonal(K: Subspace, G: Sequence[Sequence]) -> Subspace:
    """``K^G = {v : ⟨G v, k⟩ = 0 for all k ∈ K}``."""
    sp = K.ambient
    S = metric_form(G, sp)
    cons = [[_dot([S[i][j] for j in range(sp.dim)], k) for i in range(sp.dim)] for k in K.basis()]
    if not cons:
        return whole(sp)
    return Subspace(sp, nullspace(cons, sp.dim, sp.field))


def gk_reduce(J1: LinearGCS, J2: LinearGCS, K: Subspace) -> ReducedGK:
    """Reduce a generalized Kähler pair by an isotropic ``K`` with ``J₁K = K``.

    The quotient ``K^⊥/K`` is identified with ``K^G ∩ K^⊥`` (``G = J₁J₂``),
    where ``J₂`` is restricted; ``J₁`` is reduced by :func:`gcs_reduce`.
    """
    f = J1.field
    if not is_isotropic(K):
        raise ConditionViolated("K is not isotropic", which="isotropic")
    if J1.image(K) != K:
        raise ConditionViolated("J1 K ≠ K", which="J1K=K")
    G = matmul(J1.J, J2.J)
    Kp = perp(K)
    Q = intersect(g_orthogonal(K, G), Kp)
    if Q.rank + K.rank != Kp.rank or not intersect(Q, K).is_zero():
        raise ConditionViolated("K^⊥ ≠ K ⊕ (K^G ∩ K^⊥)", which="orthogonal-splitting")
    if J2.image(Q) != Q:
        raise ConditionViolated("J2 does not preserve K^G ∩ K^⊥", which="J2-invariant")
    red1 = gcs_reduce(J1, K)
    pres = red1.presentation
    # J2 on the quotient via the complement Q
    cols = []
    for r in pres.reps:
        q = _project_into(Q, pres.kern, r, f)
        cols.append(pres.coords(J2.apply(q)))
    J2r = LinearGCS(transpose(cols), pres.space)
    return ReducedGK(red1.J, J2r, gk_check(red1.J, J2r), pres)


def _project_into(Q: Subspace, K: Subspace, v: Sequence, f: Field) -> list:
    """The unique ``q ∈ Q`` with ``v − q ∈ K``."""
    c = solve_left(Q.basis() + K.basis(), v, f)
    if c is None:
        raise InvariantError("vector outside Q ⊕ K")
    q = [f.zero()] * len(v)
    for ci, b in zip(c[: Q.rank], Q.basis()):
        if not f.is_zero(ci):
            q = [x + ci * y for x, y in zip(q, b)]
    return q


@dataclass
class BiHermitian:
    g: list
    b: list
    cross_check: bool | None


def bihermitian_blocks(J1: LinearGCS, J2: LinearGCS, omega1=None, omega2=None, b_form=None) -> BiHermitian:
    """Metric and B-field from the blocks of ``G = J₁J₂``.

    ``g`` inverts the ``V* → V`` block and ``b = −g·(V → V block)``.  When the
    caller supplies the 2-forms of ``φ_A = e^{iω₁}`` and ``φ_B = e^{b+iω₂}``
    (as ``W[a][b] = ω(∂_a, ∂_b)``), the metric is recomputed as
    ``g = −ω₂ b⁻¹ ω₁`` (maps ``X ↦ i_X ω``) and compared.  ``b_form`` defaults
    to the extracted ``b``; a singular ``b`` raises :class:`SingularB`.
    """
    f = J1.field
    G = matmul(J1.J, J2.J)
    UL, UR, _, _ = split_blocks(G)
    g = inverse(UR, f)
    b = mat_scale(matmul(g, UL), -f.one())
    check = None
    if omega1 is not None and omega2 is not None:
        bm = two_form_matrix(b_form, f) if b_form is not None else b
        if not is_invertible(bm, f):
            raise SingularB("b is singular; the second extraction route does not apply")
        w1 = two_form_matrix(omega1, f)
        w2 = two_form_matrix(omega2, f)
        g2 = mat_scale(matmul(matmul(w2, inverse(bm, f)), w1), -f.one())
        check = mat_equal(g, g2, f)
    return BiHermitian(g, b, check)


# ---------------------------------------------------------------------------
# spinors at a point and coordinate changes
# ---------------------------------------------------------------------------


def clifford_matrix(spinor: dict, N: int, field: Field = EXACT) -> tuple:
    """Matrix of ``v ↦ v·φ`` for a constant-coefficient form ``φ`` on ``V = K^N``.

    ``spinor`` maps bitmasks over the ``N`` coframe generators to scalars.
    Returns ``(rows, masks)``: one row per basis vector of ``V ⊕ V*``.
    """
    out_rows = []
    masks = set()
    images = []
    for a in range(2 * N):
        img = {}
        if a < N:
            bit = 1 << a
            for m, c in spinor.items():
                if m & bit:
                    sign = -1 if bin(m & (bit - 1)).count("1") & 1 else 1
                    k = m ^ bit
                    img[k] = img.get(k, field.zero()) + (c if sign > 0 else -c)
        else:
            bit = 1 << (a - N)
            for m, c in spinor.items():
                if not m & bit:
                    sign = -1 if bin(m & (bit - 1)).count("1") & 1 else 1
                    k = m | bit
                    img[k] = img.get(k, field.zero()) + (c if sign > 0 else -c)
        images.append(img)
        masks.update(img)
    order = sorted(masks)
    for img in images:
        out_rows.append([img.get(m, field.zero()) for m in order])
    return out_rows, order


def annihilator(spinor: dict, N: int, field: Field = EXACT) -> Subspace:
    """``L = {v ∈ V ⊕ V* : v·φ = 0}`` for a constant-coefficient form."""
    rows, order = clifford_matrix(spinor, N, field)
    sp = SplitSpace(N, field)
    if not order:
        return whole(sp)
    # v·φ = Σ v_a (row a); kernel of the transpose map
    return Subspace(sp, nullspace(transpose(rows), 2 * N, field))


def spinor_type(spinor: dict) -> int:
    """Lowest degree present in a nonzero form (the type of a pure spinor)."""
    nz = [bin(m).count("1") for m, c in spinor.items() if c]
    if not nz:
        raise InvariantError("zero spinor has no type")
    return min(nz)


def wirtinger_to_real(m: int, field: Field = EXACT) -> list:
    """Change of coordinates from the Wirtinger basis to the real basis.

    Input coordinates: ``(∂z_1..∂z_m, ∂zb_1..∂zb_m, dz_1..dz_m, dzb_1..dzb_m)``;
    output: ``(∂x_1, ∂y_1, …, dx_1, dy_1, …)``.  Uses ``∂z = ½(∂x − i∂y)``,
    ``dz = dx + i dy``.
    """
    n = 2 * m
    T = zeros(2 * n, 2 * n, field)
    half = field.one() / 2
    i = field.i()
    for k in range(m):
        zx, zy = 2 * k, 2 * k + 1
        # vector part
        T[zx][k] = half
        T[zx][m + k] = half
        T[zy][k] = -i * half
        T[zy][m + k] = i * half
        # covector part
        T[n + zx][n + k] = field.one()
        T[n + zx][n + m + k] = field.one()
        T[n + zy][n + k] = i
        T[n + zy][n + m + k] = -i
    return T


def to_real_basis(J: LinearGCS, m: int) -> LinearGCS:
    """Re-express a structure given in Wirtinger coordinates in the real basis."""
    f = J.field
    T = wirtinger_to_real(m, f)
    Jr = matmul(matmul(T, J.J), inverse(T, f))
    return LinearGCS(Jr, SplitSpace(2 * m, f))
