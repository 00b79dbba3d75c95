"""Courant algebras, extended actions on a chart, and their certificates.

A Courant algebra is a finite-dimensional Leibniz algebra ``a`` with a bracket
morphism ``π: a → g`` onto a Lie algebra; an extended action sends a basis of
``a`` to generalized fields ``ρ(a) = X_a + ξ_a`` so that ``ρ`` is a bracket
morphism into the twisted Courant bracket and ``h = ker π`` acts by closed
1-forms.  All identities are checked exactly on basis elements, which suffices
by bilinearity.  Integrability of the infinitesimal action to a group action is
not checkable on a chart and is reported as an assumption.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .errors import (
    InconsistentConnection,
    InvariantError,
    ModuleAxiomViolation,
    NotEquivariant,
    NotHamiltonian,
    NotSymplectic,
    ParseError,
)
from .forms import (
    D_of,
    D_operator,
    Form,
    GeneralizedField,
    TwistForm,
    apply_vector,
    coords_to_field,
    courant_bracket,
    expand_aux,
    expand_aux_scalar,
    ext_d,
    field_to_coords,
    interior,
    lie_bracket,
    lie_derivative,
    pairing,
    wedge,
    _twist,
)
from .linalg import (
    EXACT,
    SplitSpace,
    Subspace,
    anchor_image,
    intersect,
    matmul,
    nullspace,
    perp,
    rank,
    solve_left,
    subspace_sum,
    tangent,
)
from .poly import RatFun, VarTable, parse_expr
from .scalars import GaussianRational, parse_scalar

__all__ = [
    "LieAlgebraData",
    "CourantAlgebraData",
    "adjoint_module",
    "hemisemidirect",
    "ExtendedAction",
    "Verdict",
    "check_extended_action",
    "symplectic_extension",
    "action_equivalence",
    "EquivariantForm",
    "cartan_d",
    "moment_check",
    "Distributions",
    "distributions",
    "distribution_ranks",
    "lie_cocycle",
    "SeveraResult",
    "severa_pushdown",
    "hamiltonian_complexify",
    "jk_invariant",
    "adjoint_annihilates",
    "action_from_json",
    "action_to_json",
]

ZERO = GaussianRational(0)
ONE = GaussianRational(1)
ASSUMPTIONS = {"integrability": "assumed (infinitesimal conditions verified on the chart)"}


def _scalar(x) -> GaussianRational:
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, float):
        raise ParseError("floating-point structure constants are not accepted; use strings like '1/2'")
    return GaussianRational.coerce(x)


def _vec(values: Sequence, n: int, what: str) -> list:
    if len(values) != n:
        raise InvariantError(f"{what} has length {len(values)}, expected {n}")
    return [_scalar(x) for x in values]


def _unit(n: int, i: int) -> list:
    return [ONE if j == i else ZERO for j in range(n)]


def _add(u: Sequence, v: Sequence) -> list:
    return [a + b for a, b in zip(u, v)]


def _sub(u: Sequence, v: Sequence) -> list:
    return [a - b for a, b in zip(u, v)]


def _scale(c, u: Sequence) -> list:
    return [c * a for a in u]


def _is_zero_vec(u: Sequence) -> bool:
    return not any(u)


def _fmt_vec(u: Sequence) -> list:
    return [str(x) for x in u]


# ---------------------------------------------------------------------------
# Lie and Courant algebras
# ---------------------------------------------------------------------------


class LieAlgebraData:
    """Lie algebra given by structure constants ``[e_i, e_j] = Σ_k c[i][j][k] e_k``."""

    __slots__ = ("dim", "c")

    def __init__(self, dim: int, constants: Sequence | None = None, check: bool = True):
        if dim < 0:
            raise InvariantError("dimension must be non-negative")
        self.dim = dim
        if constants is None:
            self.c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        else:
            if len(constants) != dim or any(len(row) != dim for row in constants):
                raise InvariantError("structure constants must form a dim × dim table of vectors")
            self.c = [[_vec(constants[i][j], dim, f"[e{i},e{j}]") for j in range(dim)] for i in range(dim)]
        if check:
            self._check()

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebraData":
        return cls(dim)

    def bracket(self, x: Sequence, y: Sequence) -> list:
        out = [ZERO] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    out = _add(out, _scale(xi * yj, self.c[i][j]))
        return out

    def _check(self):
        n = self.dim
        for i in range(n):
            for j in range(n):
                if not _is_zero_vec(_add(self.c[i][j], self.c[j][i])):
                    raise InvariantError(f"structure constants are not antisymmetric at ({i},{j})")
        e = [_unit(n, i) for i in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    jac = _add(
                        _add(self.bracket(e[i], self.bracket(e[j], e[k])), self.bracket(e[j], self.bracket(e[k], e[i]))),
                        self.bracket(e[k], self.bracket(e[i], e[j])),
                    )
                    if not _is_zero_vec(jac):
                        raise InvariantError(f"Jacobi identity fails on ({i},{j},{k})")

    def is_abelian(self) -> bool:
        return all(_is_zero_vec(v) for row in self.c for v in row)

    def to_json(self) -> dict:
        return {"dim": self.dim, "constants": [[_fmt_vec(v) for v in row] for row in self.c]}

    @classmethod
    def from_json(cls, data) -> "LieAlgebraData":
        if not isinstance(data, dict) or "dim" not in data:
            raise ParseError("Lie algebra needs 'dim'")
        return cls(int(data["dim"]), data.get("constants"))


def adjoint_module(g: LieAlgebraData) -> list:
    """Matrices of ``ad_{e_i}``: column ``j`` holds ``[e_i, e_j]``."""
    n = g.dim
    return [[[g.c[i][j][k] for j in range(n)] for k in range(n)] for i in range(n)]


class CourantAlgebraData:
    """Leibniz algebra ``a`` with a bracket morphism ``π: a → g``.

    ``pi`` is a ``dim_g × dim_a`` matrix (column ``j`` is ``π(a_j)``) and
    ``bracket[i][j]`` the coefficient vector of ``[a_i, a_j]``.  When ``g`` is
    omitted the bracket on ``g`` is induced through a section of ``π``
    (which must then be surjective).
    """

    def __init__(self, dim_a: int, pi: Sequence, bracket: Sequence | None = None, g: LieAlgebraData | None = None,
                 check: bool = True):
        self.dim_a = dim_a
        if len(pi) and any(len(row) != dim_a for row in pi):
            raise InvariantError("π must have dim_a columns")
        self.pi = [[_scalar(x) for x in row] for row in pi]
        self.dim_g = len(self.pi)
        if bracket is None:
            self.table = [[[ZERO] * dim_a for _ in range(dim_a)] for _ in range(dim_a)]
        else:
            if len(bracket) != dim_a or any(len(row) != dim_a for row in bracket):
                raise InvariantError("bracket table must be dim_a × dim_a")
            self.table = [[_vec(bracket[i][j], dim_a, f"[a{i},a{j}]") for j in range(dim_a)] for i in range(dim_a)]
        self.g = g if g is not None else self._induced_g()
        if self.g.dim != self.dim_g:
            raise InvariantError("π target dimension does not match g")
        self.h = nullspace(self.pi, dim_a, EXACT) if self.dim_g else [_unit(dim_a, i) for i in range(dim_a)]
        if check:
            ok1, _ = self.leibniz_check()
            if not ok1:
                raise InvariantError("bracket violates the Leibniz identity")
            ok2, _ = self.morphism_check()
            if not ok2:
                raise InvariantError("π is not a bracket morphism")

    # structure ----------------------------------------------------------
    def _induced_g(self) -> LieAlgebraData:
        n = self.dim_g
        if n == 0:
            return LieAlgebraData(0)
        if rank(self.pi, EXACT) < n:
            raise InvariantError("g must be supplied when π is not surjective")
        cols = [[self.pi[r][j] for r in range(n)] for j in range(self.dim_a)]
        sections = []
        for k in range(n):
            c = solve_left(cols, _unit(n, k), EXACT)
            sections.append(c)
        consts = [[self.project(self.bracket(sections[i], sections[j])) for j in range(n)] for i in range(n)]
        return LieAlgebraData(n, consts, check=False)

    def basis(self) -> list:
        return [_unit(self.dim_a, i) for i in range(self.dim_a)]

    def bracket(self, x: Sequence, y: Sequence) -> list:
        out = [ZERO] * self.dim_a
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    out = _add(out, _scale(xi * yj, self.table[i][j]))
        return out

    def project(self, x: Sequence) -> list:
        return [sum((row[j] * x[j] for j in range(self.dim_a)), ZERO) for row in self.pi]

    # checks -------------------------------------------------------------
    def leibniz_check(self):
        """``[a,[b,c]] = [[a,b],c] + [b,[a,c]]`` on basis triples."""
        e = self.basis()
        bad = []
        for i in range(self.dim_a):
            for j in range(self.dim_a):
                for k in range(self.dim_a):
                    r = _sub(
                        self.bracket(e[i], self.bracket(e[j], e[k])),
                        _add(self.bracket(self.bracket(e[i], e[j]), e[k]), self.bracket(e[j], self.bracket(e[i], e[k]))),
                    )
                    if not _is_zero_vec(r):
                        bad.append(((i, j, k), r))
        return not bad, bad

    def morphism_check(self):
        """``π[a,b] = [πa, πb]_g`` on basis pairs."""
        e = self.basis()
        bad = []
        for i in range(self.dim_a):
            for j in range(self.dim_a):
                r = _sub(self.project(self.bracket(e[i], e[j])), self.g.bracket(self.project(e[i]), self.project(e[j])))
                if not _is_zero_vec(r):
                    bad.append(((i, j), r))
        return not bad, bad

    def is_exact(self) -> bool:
        """``π`` surjective and ``h = ker π`` abelian."""
        if self.dim_g and rank(self.pi, EXACT) < self.dim_g:
            return False
        return all(_is_zero_vec(self.bracket(x, y)) for x in self.h for y in self.h)

    def to_json(self) -> dict:
        return {
            "dim_a": self.dim_a,
            "dim_g": self.dim_g,
            "pi": [_fmt_vec(r) for r in self.pi],
            "bracket": [[_fmt_vec(v) for v in row] for row in self.table],
            "g": self.g.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "CourantAlgebraData":
        if not isinstance(data, dict):
            raise ParseError("algebra must be a JSON object")
        try:
            dim_a = int(data["dim_a"])
        except (KeyError, TypeError, ValueError):
            raise ParseError("algebra.dim_a must be an integer") from None
        pi = data.get("pi", [])
        if "dim_g" in data and int(data["dim_g"]) != len(pi):
            raise ParseError("algebra.dim_g does not match the number of rows of π")
        g = LieAlgebraData.from_json(data["g"]) if "g" in data else None
        return cls(dim_a, pi, data.get("bracket"), g)


def hemisemidirect(g: LieAlgebraData, module: Sequence) -> CourantAlgebraData:
    """``g ⊕ h`` with ``[(g₁,h₁),(g₂,h₂)] = ([g₁,g₂], g₁·h₂)``.

    ``module[i]`` is the matrix of the action of ``e_i`` on ``h``.
    """
    if len(module) != g.dim:
        raise ModuleAxiomViolation("one module matrix per basis element of g is required")
    mats = [[[_scalar(x) for x in row] for row in m] for m in module]
    dh = len(mats[0]) if mats else 0
    for m in mats:
        if len(m) != dh or any(len(row) != dh for row in m):
            raise ModuleAxiomViolation("module matrices must be square of a common size")
    for i in range(g.dim):
        for j in range(g.dim):
            comm = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(matmul(mats[i], mats[j]), matmul(mats[j], mats[i]))]
            rhs = [[ZERO] * dh for _ in range(dh)]
            for k in range(g.dim):
                c = g.c[i][j][k]
                if c:
                    rhs = [[x + c * y for x, y in zip(r, s)] for r, s in zip(rhs, mats[k])]
            if any(x != y for r, s in zip(comm, rhs) for x, y in zip(r, s)):
                raise ModuleAxiomViolation(f"[ρ(e{i}), ρ(e{j})] ≠ ρ([e{i}, e{j}])")
    dg = g.dim
    n = dg + dh
    table = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(dg):
        for j in range(dg):
            table[i][j][:dg] = list(g.c[i][j])
        for j in range(dh):
            col = [mats[i][r][j] for r in range(dh)]
            table[i][dg + j][dg:] = col
    pi = [[ONE if c == r else ZERO for c in range(n)] for r in range(dg)]
    return CourantAlgebraData(n, pi, table, g)


# ---------------------------------------------------------------------------
# extended actions
# ---------------------------------------------------------------------------


@dataclass
class Verdict:
    """Outcome of one named check with its nonzero residuals (label → value)."""

    ok: bool
    residuals: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "residuals": [{"at": lab, "value": _residual_json(v)} for lab, v in self.residuals]}


def _residual_json(v):
    if isinstance(v, (Form, GeneralizedField)):
        return v.to_json()
    if isinstance(v, (list, tuple)):
        return [_residual_json(x) for x in v]
    return str(v)


class ExtendedAction:
    """Courant algebra ``a`` acting through ``ρ(a_i) = X_i + ξ_i`` on a chart.

    ``moment`` optionally carries an ``h``-indexed list of functions.
    """

    def __init__(self, algebra: CourantAlgebraData, rho: Sequence[GeneralizedField], H=None, moment=None):
        if len(rho) != algebra.dim_a:
            raise InvariantError(f"ρ needs {algebra.dim_a} sections, got {len(rho)}")
        if not rho:
            raise InvariantError("an extended action needs at least one section (use a zero section)")
        self.algebra = algebra
        self.rho = list(rho)
        self.table = rho[0].table
        if H is None:
            H = TwistForm.zero(self.table)
        elif isinstance(H, Form):
            H = TwistForm(H)
        self.H = H
        self.moment = moment

    def section(self, a: Sequence) -> GeneralizedField:
        """``ρ(a)`` for a coefficient vector ``a``."""
        out = GeneralizedField(self.table)
        for c, r in zip(a, self.rho):
            if c:
                out = out + r.scale(c)
        return out

    def X(self, a: Sequence) -> GeneralizedField:
        return self.section(a).vector_part()

    def xi(self, a: Sequence) -> Form:
        return self.section(a).cov

    def h_basis(self) -> list:
        return self.algebra.h


def check_extended_action(A: ExtendedAction) -> dict:
    """Run the four defining checks; failures are data, never exceptions.

    ``morphism``: ``ρ[a,b] = [ρa, ρb]_H``; ``closed_h``: ``ρ(h)`` is a closed
    1-form; ``invariant_splitting``: ``i_{X_a}H − dξ_a = 0``;
    ``equivariance``: ``ξ_[a,b] = L_{X_a} ξ_b``.
    """
    alg = A.algebra
    e = alg.basis()
    H = _twist(A.H)
    morph, equi, actex, closed = [], [], [], []
    for i in range(alg.dim_a):
        for j in range(alg.dim_a):
            ab = alg.bracket(e[i], e[j])
            r = A.section(ab) - courant_bracket(A.rho[i], A.rho[j], A.H)
            if not r.is_zero():
                morph.append(((i, j), r))
            r4 = A.xi(ab) - lie_derivative(A.rho[i], A.rho[j].cov)
            if not r4.is_zero():
                actex.append(((i, j), r4))
    for i in range(alg.dim_a):
        r3 = -ext_d(A.rho[i].cov)
        if H is not None and H:
            r3 = r3 + interior(A.rho[i], H)
        if not r3.is_zero():
            equi.append((i, r3))
    for k, hv in enumerate(alg.h):
        s = A.section(hv)
        vec = s.vector_part()
        dnu = ext_d(s.cov)
        if not vec.is_zero() or not dnu.is_zero():
            closed.append((k, [vec, dnu]))
    return {
        "morphism": Verdict(not morph, morph),
        "closed_h": Verdict(not closed, closed),
        "invariant_splitting": Verdict(not equi, equi),
        "equivariance": Verdict(not actex, actex),
        "assumptions": dict(ASSUMPTIONS),
    }


def _wedge_power(a: Form, k: int) -> Form:
    out = Form.scalar(a.table, 1)
    for _ in range(k):
        out = wedge(out, a)
    return out


def symplectic_extension(omega: Form, psi: Sequence[GeneralizedField], g: LieAlgebraData | None = None) -> ExtendedAction:
    """Extended action of ``g ⊕ g`` (adjoint module): ``ρ(g,h) = X_g + i_{X_h}ω``, ``H = 0``."""
    t = omega.table
    if not omega.is_homogeneous(2):
        raise NotSymplectic("ω must be a 2-form")
    if not ext_d(omega).is_zero():
        raise NotSymplectic("ω is not closed")
    m = len(t.base_names())
    if m % 2:
        raise NotSymplectic("odd-dimensional chart carries no symplectic form")
    top = _wedge_power(expand_aux(omega), m // 2)
    if top.is_zero():
        raise NotSymplectic("ω is degenerate on the chart")
    psi = list(psi)
    g = g if g is not None else LieAlgebraData.abelian(len(psi))
    if g.dim != len(psi):
        raise InvariantError("one vector field per basis element of g is required")
    for k, X in enumerate(psi):
        if not X.is_vector():
            raise InvariantError("the infinitesimal action must consist of vector fields")
        L = lie_derivative(X, omega)
        if not L.is_zero():
            raise NotSymplectic(f"L_X ω ≠ 0 for generator {k}")
    for i in range(g.dim):
        for j in range(g.dim):
            lhs = GeneralizedField(t, lie_bracket(psi[i], psi[j]), None, False)
            rhs = GeneralizedField(t)
            for k, c in enumerate(g.c[i][j]):
                if c:
                    rhs = rhs + psi[k].vector_part().scale(c)
            if not (lhs - rhs).is_zero():
                raise InvariantError(f"ψ is not a Lie algebra morphism on ({i},{j})")
    alg = hemisemidirect(g, adjoint_module(g))
    rho = [X.vector_part() for X in psi] + [GeneralizedField(t, {}, interior(X, omega), False) for X in psi]
    return ExtendedAction(alg, rho, TwistForm.zero(t))


def _pair_f(f: Sequence[RatFun], gvec: Sequence) -> RatFun:
    t = f[0].table
    out = RatFun.zero(t)
    for c, fk in zip(gvec, f):
        if c:
            out = out + fk.scale(c)
    return out


def action_equivalence(A: ExtendedAction, f: Sequence) -> ExtendedAction:
    """Shift ``ρ'(a) = ρ(a) + D⟨f, π(a)⟩`` by an equivariant ``f: M → g*``.

    ``f`` lists the components ``f_k = ⟨f, e_k⟩`` over the basis of ``g``.
    Equivariance ``X_a⟨f, πb⟩ = ⟨f, π[a,b]⟩`` is checked on basis pairs.
    """
    alg = A.algebra
    t = A.table
    f = [_to_ratfun(t, x) for x in f]
    if len(f) != alg.dim_g:
        raise InvariantError(f"f needs {alg.dim_g} components")
    if alg.dim_g == 0:
        return ExtendedAction(alg, A.rho, A.H, A.moment)
    e = alg.basis()
    for i in range(alg.dim_a):
        for j in range(alg.dim_a):
            lhs = apply_vector(A.rho[i], _pair_f(f, alg.project(e[j])))
            rhs = _pair_f(f, alg.project(alg.bracket(e[i], e[j])))
            if not (lhs - rhs).is_zero():
                raise NotEquivariant(f"X_a⟨f,πb⟩ ≠ ⟨f,π[a,b]⟩ for basis pair ({i},{j}): residual {lhs - rhs}")
    rho = [r + D_of(_pair_f(f, alg.project(e[i]))) for i, r in enumerate(A.rho)]
    return ExtendedAction(alg, rho, A.H, A.moment)


def _to_ratfun(t: VarTable, x) -> RatFun:
    if isinstance(x, RatFun):
        return x
    if isinstance(x, str):
        return parse_expr(x, t)
    return RatFun.const(t, x)


# ---------------------------------------------------------------------------
# equivariant forms and moment maps
# ---------------------------------------------------------------------------


@dataclass
class EquivariantForm:
    """``Φ(a) = H + ξ_a``, linear in ``a``."""

    H: Form
    xi: list

    @classmethod
    def from_action(cls, A: ExtendedAction) -> "EquivariantForm":
        return cls(_twist(A.H), [r.cov for r in A.rho])

    def at(self, a: Sequence) -> Form:
        out = self.H
        for c, x in zip(a, self.xi):
            if c:
                out = out + x.scale(c)
        return out


def cartan_d(Phi: EquivariantForm, A: ExtendedAction, elements: Sequence | None = None) -> list:
    """``(d_G Φ)(a) = d(Φ(a)) − i_{X_a} Φ(a)`` for each requested element (default: basis of ``a``)."""
    if len(Phi.xi) != A.algebra.dim_a:
        raise InvariantError("Φ must have one linear component per basis element of a")
    elements = elements if elements is not None else A.algebra.basis()
    out = []
    for a in elements:
        a = [_scalar(x) for x in a]
        phi = Phi.at(a)
        out.append(ext_d(phi) - interior(A.X(a), phi))
    return out


def moment_check(A: ExtendedAction, mu: Sequence) -> dict:
    """Check ``dμ_h = ν(h)`` and ``μ_{[a,h]} = X_a(μ_h)`` over the basis of ``h``."""
    t = A.table
    alg = A.algebra
    hb = alg.h
    mu = [_to_ratfun(t, m) for m in mu]
    if len(mu) != len(hb):
        raise InvariantError(f"μ needs {len(hb)} components (one per basis element of h)")
    dres, eres = [], []
    for k, hv in enumerate(hb):
        nu = A.section(hv)
        r = D_of(mu[k]) - nu
        if not r.is_zero():
            dres.append((k, r))
    for i, a in enumerate(alg.basis()):
        for k, hv in enumerate(hb):
            br = alg.bracket(a, hv)
            coeffs = solve_left(hb, br, EXACT) if hb else []
            if coeffs is None:
                eres.append(((i, k), "bracket leaves h"))
                continue
            lhs = RatFun.zero(t)
            for c, m in zip(coeffs, mu):
                if c:
                    lhs = lhs + m.scale(c)
            r = lhs - apply_vector(A.rho[i], mu[k])
            if not r.is_zero():
                eres.append(((i, k), r))
    return {"d_mu": Verdict(not dres, dres), "equivariance": Verdict(not eres, eres)}


# ---------------------------------------------------------------------------
# distributions at points
# ---------------------------------------------------------------------------


def _point_values(t: VarTable, point) -> list:
    if not isinstance(point, Mapping):
        base = [nm for nm, k in zip(t.names, t.kinds) if k in ("z", "real")]
        if len(point) != len(base):
            raise InvariantError(f"point needs {len(base)} coordinates")
        point = dict(zip(base, point))
    values = [None] * t.nvars
    for nm, v in point.items():
        j = t.index(nm)
        if t.kinds[j] not in ("z", "real"):
            raise InvariantError(f"give values for holomorphic or real coordinates only, not {nm}")
        values[j] = _scalar(v)
    for j, kind in enumerate(t.kinds):
        if kind == "zb":
            src = values[t.conj_index[j]]
            values[j] = None if src is None else src.conjugate()
    missing = [t.names[j] for j, v in enumerate(values) if v is None and t.kinds[j] != "aux"]
    if missing:
        raise InvariantError(f"no value for {', '.join(missing)}")
    for j, (nm, kind) in enumerate(zip(t.names, t.kinds)):
        if kind == "aux":
            d = t.aux_definition(nm)
            if d is not None:
                values[j] = d.evaluate([ZERO if v is None else v for v in values], ZERO, GaussianRational.coerce)
    return [ZERO if v is None else v for v in values]


def _eval_field(v: GeneralizedField, values: list) -> list:
    return [c.eval_exact(values, GaussianRational.coerce, ZERO) for c in field_to_coords(v)]


@dataclass
class Distributions:
    """``K``, ``K^⊥``, ``Δ_s = π(K^⊥)``, ``Δ_b = π(K + K^⊥)`` at one point.

    ``Delta_s_ann`` is ``Ann(ρ(h))`` computed directly; ``routes_agree``
    compares it with ``Δ_s``.
    """

    K: Subspace
    K_perp: Subspace
    Delta_s: Subspace
    Delta_b: Subspace
    Delta_s_ann: Subspace
    routes_agree: bool

    def ranks(self) -> dict:
        return {"K": self.K.rank, "K_perp": self.K_perp.rank, "Delta_s": self.Delta_s.rank, "Delta_b": self.Delta_b.rank}


def distributions(A: ExtendedAction, point) -> Distributions:
    t = A.table
    values = _point_values(t, point)
    m = len(t.base_names())
    sp = SplitSpace(m)
    K = Subspace(sp, [_eval_field(r, values) for r in A.rho])
    Kp = perp(K)
    ds = anchor_image(Kp)
    db = anchor_image(subspace_sum(K, Kp))
    nu = Subspace(sp, [_eval_field(A.section(h), values) for h in A.algebra.h])
    ann = intersect(tangent(sp), perp(nu))
    return Distributions(K, Kp, ds, db, ann, ann == ds)


def distribution_ranks(A: ExtendedAction, points: Sequence) -> dict:
    """Ranks of the four subspaces at each point, with a constancy flag per subspace."""
    rows = [distributions(A, p).ranks() for p in points]
    keys = ("K", "K_perp", "Delta_s", "Delta_b")
    return {
        "ranks": rows,
        "constant": {k: len({r[k] for r in rows}) <= 1 for k in keys},
    }


# ---------------------------------------------------------------------------
# cocycles and reduced curvature
# ---------------------------------------------------------------------------


def lie_cocycle(X: GeneralizedField, Y: GeneralizedField, H) -> Form:
    """``c(X, Y) = d i_X i_Y H``."""
    Hf = _twist(H)
    return ext_d(interior(X, interior(Y, Hf)))


@dataclass
class SeveraResult:
    """Chart-level representative ``h + ⟨F ∧ ξ⟩`` of the reduced curvature."""

    form: Form
    closed: bool
    scope: str = "chart-level representative"


def severa_pushdown(h_basic: Form, theta: Sequence[Form], F: Sequence[Form], xi: Sequence[Form],
                    g: LieAlgebraData | None = None, pairing_matrix: Sequence | None = None) -> SeveraResult:
    """Reduced curvature ``h + Σ P_{kl} F^k ∧ ξ_l`` with the curvature checked.

    ``F^k = dθ^k + ½ Σ c^k_{ij} θ^i ∧ θ^j`` must hold on the chart, otherwise
    :class:`InconsistentConnection` is raised.  ``pairing_matrix`` defaults to
    the identity.
    """
    n = len(theta)
    if len(F) != n or len(xi) != n:
        raise InvariantError("θ, F and ξ need one component per basis element")
    g = g if g is not None else LieAlgebraData.abelian(n)
    if g.dim != n:
        raise InvariantError("Lie algebra dimension does not match the connection")
    half = GaussianRational(1) / 2
    for k in range(n):
        expected = ext_d(theta[k])
        for i in range(n):
            for j in range(n):
                c = g.c[i][j][k]
                if c:
                    expected = expected + wedge(theta[i], theta[j]).scale(c * half)
        if not (expected - F[k]).is_zero():
            raise InconsistentConnection(f"F^{k} ≠ dθ^{k} + θ∧θ on the chart")
    P = [[_scalar(x) for x in row] for row in pairing_matrix] if pairing_matrix is not None else [_unit(n, i) for i in range(n)]
    out = h_basic
    for k in range(n):
        for l in range(n):
            c = P[k][l]
            if c:
                out = out + wedge(F[k], xi[l]).scale(c)
    return SeveraResult(out, ext_d(out).is_zero())


# ---------------------------------------------------------------------------
# Hamiltonian complexification
# ---------------------------------------------------------------------------


def _apply_matrix(J: Sequence[Sequence], v: GeneralizedField) -> GeneralizedField:
    t = v.table
    x = field_to_coords(v)
    out = []
    for row in J:
        acc = RatFun.zero(t)
        for a, b in zip(row, x):
            a = _to_ratfun(t, a) if not isinstance(a, RatFun) else a
            if not a.is_zero() and not b.is_zero():
                acc = acc + a * b
        out.append(acc)
    return coords_to_field(t, out)


def _re_im(f: RatFun) -> tuple:
    half = GaussianRational(1) / 2
    fc = f.conj()
    re = (f + fc).scale(half)
    im = (f - fc).scale(GaussianRational(0, -1) / 2)
    return re, im


def hamiltonian_complexify(A: ExtendedAction, f: Sequence, J: Sequence[Sequence]) -> ExtendedAction:
    """Extend a trivially extended isotropic Hamiltonian action to ``g ⊕ g``.

    Requires ``ρ(a) = D(f_a) = d Re f_a − J d Im f_a`` exactly and ``f``
    equivariant.  Returns ``ρ'(g, h) = ρ̃(g) + d(Im f_h)`` with
    ``ρ̃(a) = ρ(a) − d Re f_a`` and moment map ``Im f`` attached.
    """
    alg = A.algebra
    t = A.table
    if alg.h:
        raise InvariantError("the action must be trivially extended (h = 0)")
    f = [_to_ratfun(t, x) for x in f]
    if len(f) != alg.dim_a:
        raise InvariantError(f"f needs {alg.dim_a} components")
    Jr = [[_to_ratfun(t, x) for x in row] for row in J]
    parts = [_re_im(fk) for fk in f]
    residuals = []
    for k, (re, im) in enumerate(parts):
        r = A.rho[k] - D_operator(re, im, Jr)
        if not r.is_zero():
            residuals.append((k, r))
    if residuals:
        raise NotHamiltonian("ρ(a) ≠ D(f_a)", residual=residuals)
    e = alg.basis()
    for i in range(alg.dim_a):
        if not pairing(A.rho[i], A.rho[i]).is_zero():
            raise InvariantError("the action must be isotropic")
        for j in range(alg.dim_a):
            if not pairing(A.rho[i], A.rho[j]).is_zero():
                raise InvariantError("the action must be isotropic")
            lhs = apply_vector(A.rho[i], f[j])
            rhs = _pair_f(f, alg.bracket(e[i], e[j]))
            if not (lhs - rhs).is_zero():
                raise NotEquivariant(f"f is not equivariant on basis pair ({i},{j})")
    g = alg.g
    new_alg = hemisemidirect(g, adjoint_module(g))
    tilde = [r - D_of(expand_aux_scalar(re)) for r, (re, _) in zip(A.rho, parts)]
    dim_im = [D_of(expand_aux_scalar(im)) for _, im in parts]
    return ExtendedAction(new_alg, tilde + dim_im, A.H, moment=[im for _, im in parts])


def jk_invariant(A: ExtendedAction, J: Sequence[Sequence], points: Sequence | None = None) -> dict:
    """Whether ``J K ⊆ K``: symbolically on the frame when it closes, and at each sampled point."""
    t = A.table
    Jr = [[_to_ratfun(t, x) for x in row] for row in J]
    images = [_apply_matrix(Jr, r) for r in A.rho]
    symbolic = all(any((img - r).is_zero() or (img + r).is_zero() for r in A.rho) for img in images)
    at_points = []
    for p in points or ():
        values = _point_values(t, p)
        sp = SplitSpace(len(t.base_names()))
        K = Subspace(sp, [_eval_field(r, values) for r in A.rho])
        JK = Subspace(sp, [_eval_field(img, values) for img in images])
        at_points.append(K.contains_subspace(JK))
    return {"frame": symbolic, "points": at_points, "ok": all(at_points) and (symbolic or bool(at_points))}


# ---------------------------------------------------------------------------
# adjoint kernel
# ---------------------------------------------------------------------------


def adjoint_annihilates(v: GeneralizedField, H=None) -> tuple:
    """Whether ``[v, ·]_H`` kills the test sections ``∂_j, x_k ∂_j, dx_j, x_k dx_j``."""
    t = v.table
    names = t.base_names()
    tests = []
    for nm in names:
        tests.append(GeneralizedField.coordinate(t, nm))
        tests.append(GeneralizedField.covector(t, Form.gen(t, "d" + nm)))
        for xk in names:
            x = RatFun.var(t, xk)
            tests.append(GeneralizedField.coordinate(t, nm).scale(x))
            tests.append(GeneralizedField.covector(t, Form.gen(t, "d" + nm).scale(x)))
    bad = []
    for w in tests:
        r = courant_bracket(v, w, H)
        if not r.is_zero():
            bad.append((str(w), r))
    return not bad, bad


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def action_from_json(data) -> ExtendedAction:
    """``{"vars", "algebra": {...}, "rho": [GeneralizedField...], "H": Form}``."""
    if not isinstance(data, dict):
        raise ParseError("action must be a JSON object")
    for key in ("vars", "algebra", "rho"):
        if key not in data:
            raise ParseError(f"action is missing {key!r}")
    t = VarTable.from_json(data["vars"])
    alg = CourantAlgebraData.from_json(data["algebra"])
    if not isinstance(data["rho"], list):
        raise ParseError("rho must be a list of generalized fields")
    rho = [GeneralizedField.from_json(r, t) for r in data["rho"]]
    H = Form.from_json(data["H"], t) if data.get("H") is not None else None
    moment = [parse_expr(m, t) for m in data["moment"]] if data.get("moment") is not None else None
    return ExtendedAction(alg, rho, H, moment)


def action_to_json(A: ExtendedAction) -> dict:
    out = {
        "vars": A.table.to_json(),
        "algebra": A.algebra.to_json(),
        "rho": [r.to_json() for r in A.rho],
        "H": _twist(A.H).to_json(),
    }
    if A.moment is not None:
        out["moment"] = [str(m) for m in A.moment]
    return out
