"""Diagonal circle quotient of ℂⁿ at the level of pure spinors, and the two
generalized Kähler structures on ℂP² with cubic type-change loci.

Pipeline: deformed spinor on ℂ³ → contraction with the circle generator →
division by the leading scalar and bi-homogenization by powers of
``u = Σ z_k zb_k`` → subtraction of ``(du/2u) ∧ i_{e+ē}`` → affine chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import ChartDegenerate, DegenerateLeadingTerm, InvariantError, PointOnLocus, SingularB
from .forms import (
    Form,
    GeneralizedField,
    clifford,
    expand_aux,
    ext_d,
    form_exp,
    interior,
    lie_derivative,
    wedge,
    _wedge_sign,
)
from .linalg import (
    EXACT,
    Field,
    LinearGCS,
    SplitSpace,
    Subspace,
    annihilator,
    bihermitian_blocks,
    gcs_from_dirac,
    gk_check,
    matmul,
    matvec,
    transpose,
    type_of,
    wirtinger_to_real,
    zeros,
)
from .poly import Polynomial, RatFun, VarTable, parse_expr
from .scalars import GaussianRational, QiLambda

__all__ = [
    "CircleData",
    "SpinorLine",
    "build_example",
    "interior_theta",
    "projectivize",
    "projectivity_check",
    "affine_chart",
    "fubini_study_spinor",
    "form_log",
    "projectively_equal",
    "EXAMPLES",
    "example_pipeline",
    "example_chart",
    "evaluate_chart_form",
    "typemap",
    "default_grid",
    "gk_assemble",
    "TYPEMAP_HEADER",
    "triangle_factorization",
]

EXAMPLES = ("triple_line", "triangle")


@dataclass(frozen=True)
class CircleData:
    """Generators of the diagonal circle action on ℂⁿ with ``u = Σ z_k zb_k``."""

    table: VarTable

    @classmethod
    def standard(cls, n: int = 3) -> "CircleData":
        return cls(VarTable.complex(n))

    @property
    def n(self) -> int:
        return self.table.n

    @property
    def e(self) -> GeneralizedField:
        """Holomorphic Euler field ``Σ z_k ∂_{z_k}``."""
        return GeneralizedField.vector(self.table, {f"z{k}": f"z{k}" for k in range(self.n)})

    @property
    def ebar(self) -> GeneralizedField:
        return GeneralizedField.vector(self.table, {f"zb{k}": f"zb{k}" for k in range(self.n)})

    @property
    def theta(self) -> GeneralizedField:
        """Circle generator ``i Σ (z_k ∂_{z_k} − zb_k ∂_{zb_k})``."""
        comps = {}
        for k in range(self.n):
            comps[f"z{k}"] = f"i*z{k}"
            comps[f"zb{k}"] = f"-i*zb{k}"
        return GeneralizedField.vector(self.table, comps)

    @property
    def radial(self) -> GeneralizedField:
        return self.e + self.ebar

    def dlogR(self) -> Form:
        """``dR/R`` written as ``du/(2u)``."""
        return Form.from_terms(self.table, [(parse_expr("1/(2*u)", self.table), ["du"])])


@dataclass
class SpinorLine:
    """A form standing for the line it spans; ``tag`` records the scale convention."""

    rep: Form
    tag: str = ""

    def __post_init__(self):
        if self.rep.is_zero():
            raise InvariantError("a spinor line needs a nonzero representative")


def projectively_equal(a: Form, b: Form):
    """Return the common ratio ``a/b`` if ``a`` is a RatFun multiple of ``b``, else ``None``."""
    if a.is_zero() or b.is_zero():
        return None
    if set(a.terms) != set(b.terms):
        return None
    ratio = None
    for m, c in b.terms.items():
        r = a.terms[m] / c
        if ratio is None:
            ratio = r
        elif not (r == ratio):
            return None
    return ratio


# ---------------------------------------------------------------------------
# the two deformations
# ---------------------------------------------------------------------------


def _gf(table, vec, cov) -> GeneralizedField:
    return GeneralizedField(table, vec, Form.parse(table, cov))


def deformation_factors(which: str, table: VarTable):
    """The two orthogonal sections ``U, V`` with ``ε = c·U∧V`` and the constant ``c``."""
    if which == "triple_line":
        # ε = ½ z0² (∂1 + ½ dzb1) ∧ (∂2 − ½ dzb2)
        U = _gf(table, {"z1": 1}, {"dzb1": "1/2"})
        V = _gf(table, {"z2": 1}, {"dzb2": "-1/2"})
        return U, V, parse_expr("z0^2/2", table)
    if which == "triangle":
        U = _gf(table, {"z1": "z0", "z2": "z1", "z0": "z2"}, {"dzb1": "z0/2", "dzb2": "z1/2", "dzb0": "z2/2"})
        V = _gf(table, {"z2": "z0", "z0": "z1", "z1": "z2"}, {"dzb2": "-z0/2", "dzb0": "-z1/2", "dzb1": "-z2/2"})
        return U, V, parse_expr("1/2", table)
    raise ValueError(f"unknown example {which!r}; expected one of {EXAMPLES}")


def build_example(which: str, table: VarTable | None = None, zero_deformation: bool = False) -> SpinorLine:
    """Deformed holomorphic volume form ``(1+ε)·dz0dz1dz2`` on ℂ³.

    ``ε = c U∧V`` with ``U ⟂ V`` acts through the Clifford action as ``c U·V``.
    """
    table = table or VarTable.complex(3)
    omega = Form.parse(table, "dz0 dz1 dz2")
    if zero_deformation:
        return SpinorLine(omega, "holomorphic volume")
    U, V, c = deformation_factors(which, table)
    phi = omega + clifford(U, clifford(V, omega)).scale(c)
    return SpinorLine(phi, f"{which}: (1+eps) dz0dz1dz2")


# ---------------------------------------------------------------------------
# quotient steps
# ---------------------------------------------------------------------------


def form_log(phi: Form):
    """Split an even form as ``c · exp(A)``; returns ``(c, A)`` with ``A`` of positive degree.

    Raises :class:`DegenerateLeadingTerm` when the scalar part vanishes.
    """
    c = phi.scalar_part()
    if c.is_zero():
        raise DegenerateLeadingTerm("scalar part vanishes identically")
    x = phi.scale(RatFun.one(phi.table) / c) - Form.scalar(phi.table, 1)
    # log(1+x) = x − x²/2 + x³/3 − …  (x nilpotent)
    acc = Form.zero(phi.table)
    power = Form.scalar(phi.table, 1)
    k = 0
    while True:
        k += 1
        power = wedge(power, x)
        if power.is_zero():
            break
        term = power.scale(GaussianRational(Fraction((-1) ** (k + 1), k)))
        acc = acc + term
    return c, acc


def interior_theta(phi: SpinorLine | Form, C: CircleData | None = None) -> SpinorLine:
    """Contract with the circle generator ``∂θ``."""
    rep = phi.rep if isinstance(phi, SpinorLine) else phi
    C = C or CircleData(rep.table)
    out = interior(C.theta, rep)
    if out.is_zero():
        raise DegenerateLeadingTerm("contraction with the circle generator vanishes")
    return SpinorLine(out, "contracted")


def _weights(table: VarTable):
    hol = []
    anti = []
    for kind in table.kinds:
        hol.append(1 if kind in ("z", "aux") else 0)
        anti.append(1 if kind in ("zb", "aux") else 0)
    return hol, anti


def _poly_bihomogeneous_parts(p: Polynomial, hol, anti) -> dict:
    t = p.table
    parts: dict = {}
    for k, v in p.body.items():
        ex = t.unpack(k)
        w = (sum(a * b for a, b in zip(ex, hol)), sum(a * b for a, b in zip(ex, anti)))
        parts.setdefault(w, {})[k] = v
    return {w: Polynomial(t, b, p.den) for w, b in parts.items()}


def bihomogeneous_parts(phi: Form) -> dict:
    """Split a form into parts of definite bi-weight (holomorphic, antiholomorphic).

    ``z``, ``dz`` have weight (1,0); ``zb``, ``dzb`` weight (0,1); ``u``, ``du`` weight (1,1).
    """
    t = phi.table
    hol, anti = _weights(t)
    out: dict = {}
    for m, c in phi.terms.items():
        gw = [0, 0]
        for j in range(t.nvars):
            if m >> j & 1:
                gw[0] += hol[j]
                gw[1] += anti[j]
        dw = [0, 0]
        for f, e in c.den:
            fparts = _poly_bihomogeneous_parts(f, hol, anti)
            if len(fparts) != 1:
                raise InvariantError(f"denominator factor {f} is not bi-homogeneous")
            (w,) = fparts
            dw[0] += w[0] * e
            dw[1] += w[1] * e
        for w, part in _poly_bihomogeneous_parts(c.num, hol, anti).items():
            total = (w[0] + gw[0] - dw[0], w[1] + gw[1] - dw[1])
            piece = Form(t, {m: RatFun(part, c.den)})
            out[total] = out[total] + piece if total in out else piece
    return out


def homogenize(phi: Form) -> Form:
    """Multiply each bi-weight (k,k) part by ``u^{-k}`` so the result has weight (0,0)."""
    t = phi.table
    u = RatFun.var(t, "u")
    acc = Form.zero(t)
    for (p, q), part in bihomogeneous_parts(phi).items():
        if p != q:
            raise InvariantError(f"component of bi-weight {(p, q)} cannot be made projective")
        acc = acc + (part.scale(u ** (-p)) if p else part)
    return acc


def projectivize(phi_theta: SpinorLine | Form, C: CircleData | None = None, return_steps: bool = False):
    """Turn a contracted spinor into a basic (projective) representative.

    Steps: divide by the scalar part; make every term bi-homogeneous of
    weight (0,0) with powers of ``u`` (equal to 1 on the unit sphere); subtract
    ``(du/2u) ∧ i_{e+ē}``.
    """
    rep = phi_theta.rep if isinstance(phi_theta, SpinorLine) else phi_theta
    C = C or CircleData(rep.table)
    c = rep.scalar_part()
    if c.is_zero():
        raise DegenerateLeadingTerm("contracted spinor has no scalar part")
    tilde = homogenize(rep.scale(RatFun.one(rep.table) / c))
    correction = wedge(C.dlogR(), interior(C.radial, tilde))
    phi_B = tilde - correction
    if return_steps:
        return SpinorLine(phi_B, "projective"), {"leading": c, "tilde": tilde, "correction": correction}
    return SpinorLine(phi_B, "projective")


def projectivity_check(alpha: SpinorLine | Form, C: CircleData | None = None) -> dict:
    """The basic-form identities ``i_e α = i_ē α = L_e α = L_ē α = 0`` and ``dα = 0``.

    All identities are checked exactly after substituting ``u`` by its definition.
    Returns ``{name: (ok, residual)}``.
    """
    rep = alpha.rep if isinstance(alpha, SpinorLine) else alpha
    C = C or CircleData(rep.table)
    a = expand_aux(rep)
    report = {}
    for name, op in (
        ("i_e", lambda f: interior(C.e, f)),
        ("i_ebar", lambda f: interior(C.ebar, f)),
        ("L_e", lambda f: lie_derivative(C.e, f)),
        ("L_ebar", lambda f: lie_derivative(C.ebar, f)),
        ("d", ext_d),
    ):
        r = op(a)
        report[name] = (r.is_zero(), r)
    return report


def chart_assignment(table: VarTable, k: int) -> dict:
    """Substitution for the affine chart ``z_k = 1``."""
    n = table.n
    others = [j for j in range(n) if j != k]
    r2 = "+".join(f"z{j}*zb{j}" for j in others) or "0"
    return {f"z{k}": 1, f"zb{k}": 1, "u": parse_expr(f"1+{r2}", table)}


def affine_chart(alpha: SpinorLine | Form, k: int = 0) -> Form:
    """Restrict a projective form to the chart ``z_k = 1`` (``dz_k = dzb_k = 0``, ``u = 1 + r²``)."""
    rep = alpha.rep if isinstance(alpha, SpinorLine) else alpha
    out = rep.pullback(chart_assignment(rep.table, k))
    if out.is_zero():
        raise ChartDegenerate(f"form vanishes identically on the chart z{k}=1")
    return out


def fubini_study_spinor(table: VarTable | None = None) -> Form:
    """``exp(iω_FS)`` on the chart ``z0 = 1`` in the normalization used with the quotient forms:
    ``exp(−½((1+r²)(dz1 dzb1 + dz2 dzb2) − (zb1 dz1 + zb2 dz2)(z1 dzb1 + z2 dzb2))/(1+r²)²)``.
    """
    table = table or VarTable.complex(3)
    t = table
    s = parse_expr("1+z1*zb1+z2*zb2", t)
    a = Form.parse(t, {"dz1 dzb1": "1", "dz2 dzb2": "1"}).scale(s)
    left = Form.parse(t, {"dz1": "zb1", "dz2": "zb2"})
    right = Form.parse(t, {"dzb1": "z1", "dzb2": "z2"})
    two = (a - wedge(left, right)).scale(RatFun.const(t, GaussianRational(Fraction(-1, 2))) / (s * s))
    return form_exp(two)


# ---------------------------------------------------------------------------
# the triangle of lines over Q(i)(λ)
# ---------------------------------------------------------------------------


def _lambda_poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, QiLambda(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def triangle_factorization():
    """Multiply ``Π_k (z0 + λ^k z1 + λ^{2k} z2)`` over ℚ(i)(λ) and compare with the cubic.

    Returns ``(ok, product)`` where ``product`` maps exponent triples to
    :class:`QiLambda` coefficients and ``ok`` says it equals
    ``z0³ + z1³ + z2³ − 3 z0 z1 z2``.
    """
    lam = QiLambda.lam()
    prod = {(0, 0, 0): QiLambda(1)}
    for k in range(3):
        line = {(1, 0, 0): QiLambda(1), (0, 1, 0): lam ** k, (0, 0, 1): lam ** (2 * k)}
        prod = _lambda_poly_mul(prod, line)
    cubic = {(3, 0, 0): QiLambda(1), (0, 3, 0): QiLambda(1), (0, 0, 3): QiLambda(1), (1, 1, 1): QiLambda(-3)}
    return prod == cubic, prod


# ---------------------------------------------------------------------------
# cached pipeline
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def example_pipeline(which: str) -> dict:
    """Run build → contract → projectivize once per example and keep every stage."""
    table = VarTable.complex(3)
    phi = build_example(which, table)
    phi_theta = interior_theta(phi)
    phi_B, steps = projectivize(phi_theta, return_steps=True)
    return {"table": table, "phi": phi, "phi_theta": phi_theta, "phi_B": phi_B, "steps": steps}


@lru_cache(maxsize=None)
def example_chart(which: str, k: int = 0) -> Form:
    return affine_chart(example_pipeline(which)["phi_B"], k)


# ---------------------------------------------------------------------------
# pointwise evaluation in an affine chart
# ---------------------------------------------------------------------------


def chart_variables(table: VarTable, k: int) -> list:
    """Holomorphic coordinates of the chart ``z_k = 1`` in order."""
    return [f"z{j}" for j in range(table.n) if j != k]


def _local_positions(table: VarTable, k: int) -> dict:
    """Table generator index → position in the chart coframe ``(dw_1..dw_m, dwb_1..dwb_m)``."""
    ws = chart_variables(table, k)
    m = len(ws)
    pos = {}
    for p, w in enumerate(ws):
        pos[table.index(w)] = p
        pos[table.index("zb" + w[1:])] = m + p
    return pos


def _scalar_kind(coords: Sequence, field: Field):
    if not field.exact:
        return complex, 0j
    if any(isinstance(c, QiLambda) for c in coords):
        return QiLambda.coerce, QiLambda(0)
    return GaussianRational.coerce, GaussianRational(0)


def _chart_values(table: VarTable, k: int, coords: Sequence, field: Field):
    coerce, zero = _scalar_kind(coords, field)
    ws = chart_variables(table, k)
    if len(coords) != len(ws):
        raise InvariantError(f"chart z{k}=1 needs {len(ws)} coordinates")
    values = [None] * table.nvars
    one = coerce(1)
    values[table.index(f"z{k}")] = one
    values[table.index(f"zb{k}")] = one
    u = one
    for w, c in zip(ws, coords):
        c = coerce(c)
        values[table.index(w)] = c
        values[table.index("zb" + w[1:])] = c.conjugate()
        u = u + c * c.conjugate()
    if "u" in table.names:
        values[table.index("u")] = u
    return values, coerce, zero


@dataclass
class PointSpinor:
    """A chart form evaluated at a point, after dividing out vanishing denominators."""

    coeffs: dict
    N: int
    rescaled: bool
    vanishing: list


def _vanishes(x, field: Field, scale: float = 1.0) -> bool:
    if field.exact:
        return not x
    return abs(x) <= field.tolerance * max(1.0, scale)


def evaluate_chart_form(alpha: Form, k: int, coords: Sequence, field: Field = EXACT) -> PointSpinor:
    """Evaluate a chart form at ``coords``; coefficients keyed by chart-coframe bitmasks.

    When denominator factors vanish at the point, every coefficient is
    multiplied by ``Π f^{E_f}`` (``E_f`` the largest exponent of ``f``), i.e.
    the form is rescaled by the maximal common vanishing factor before
    evaluation.
    """
    t = alpha.table
    values, coerce, zero = _chart_values(t, k, coords, field)
    pos = _local_positions(t, k)
    fvals: dict = {}
    vanishing: dict = {}
    for m, c in alpha.terms.items():
        for f, e in c.den:
            if f not in fvals:
                fvals[f] = f.evaluate(values, zero, coerce)
            if _vanishes(fvals[f], field):
                vanishing[f] = max(vanishing.get(f, 0), e)
    out: dict = {}
    for m, c in alpha.terms.items():
        lm = 0
        for j in _mask_bits(m):
            if j not in pos:
                raise InvariantError(f"generator d{t.names[j]} is not a chart coordinate")
            lm |= 1 << pos[j]
        val = c.num.evaluate(values, zero, coerce)
        have = dict(c.den)
        for f, E in vanishing.items():
            extra = E - have.get(f, 0)
            if extra:
                val = val * fvals[f] ** extra
        for f, e in c.den:
            if f not in vanishing:
                val = val / fvals[f] ** e
        if not _vanishes(val, field):
            # chart coframe order may differ from the table order: fix the sign
            sign = _reorder_sign([pos[j] for j in _mask_bits(m)])
            out[lm] = out.get(lm, zero) + (val if sign > 0 else -val)
    return PointSpinor(out, 2 * len(chart_variables(t, k)), bool(vanishing), [str(f) for f in vanishing])


def _mask_bits(m: int):
    j = 0
    while m:
        if m & 1:
            yield j
        m >>= 1
        j += 1


def _reorder_sign(seq: Sequence[int]) -> int:
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return -1 if inv & 1 else 1


def pointwise_conj(spinor: dict, N: int) -> dict:
    """Complex conjugate of a constant form in the coframe ``(dw.., dwb..)``."""
    m = N // 2
    out = {}
    for mask, c in spinor.items():
        gens = []
        for j in _mask_bits(mask):
            gens.append(j + m if j < m else j - m)
        sign = _reorder_sign(gens)
        nm = 0
        for g in gens:
            nm |= 1 << g
        cc = c.conjugate()
        out[nm] = cc if sign > 0 else -cc
    return out


def pointwise_mukai(phi: dict, psi: dict, N: int):
    """Top coefficient of ``φ ∧ σ(ψ)`` for constant forms on an ``N``-dimensional space."""
    top = (1 << N) - 1
    acc = None
    for m1, c1 in phi.items():
        m2 = top ^ m1
        c2 = psi.get(m2)
        if c2 is None:
            continue
        k = bin(m2).count("1")
        s = _wedge_sign(m1, m2) * (-1 if (k * (k - 1) // 2) & 1 else 1)
        term = c1 * c2
        term = term if s > 0 else -term
        acc = term if acc is None else acc + term
    return acc if acc is not None else 0


def point_type(ps: PointSpinor, field: Field = EXACT) -> int:
    """Type from the annihilator ``L = Ann(φ)``: dimension of ``L ∩ V*``."""
    if not ps.coeffs:
        raise InvariantError("spinor vanishes at the point")
    return type_of(annihilator(ps.coeffs, ps.N, field))


# ---------------------------------------------------------------------------
# type maps
# ---------------------------------------------------------------------------

TYPEMAP_HEADER = ("re_z1", "im_z1", "re_z2", "im_z2", "type", "mukai_abs", "flag")


def default_grid(N: int) -> list:
    """``N×N`` grid of real chart points with coordinates ``−1 + 2j/(N−1)``."""
    if N <= 0:
        return []
    if N == 1:
        ticks = [Fraction(0)]
    else:
        ticks = [Fraction(-1) + Fraction(2 * j, N - 1) for j in range(N)]
    return [(GaussianRational(a), GaussianRational(b)) for a in ticks for b in ticks]


def _fmt_float(x: float) -> str:
    return format(x + 0.0, ".12g")


def typemap(alpha: Form, grid: Sequence[Sequence], chart: int = 0, field: Field = EXACT) -> list:
    """Per-point type and Mukai magnitude of a chart form.

    Rows follow :data:`TYPEMAP_HEADER`.  ``flag`` is ``ok`` away from
    denominators, ``locus`` where a vanishing factor had to be divided out,
    and ``pole`` when no nonzero rescaled spinor exists.
    """
    rows = []
    for pt in grid:
        zs = [complex(c) for c in pt]
        base = [_fmt_float(zs[0].real), _fmt_float(zs[0].imag), _fmt_float(zs[1].real), _fmt_float(zs[1].imag)]
        ps = evaluate_chart_form(alpha, chart, pt, field)
        if not ps.coeffs:
            rows.append(base + ["", "", "pole"])
            continue
        tp = point_type(ps, field)
        mk = pointwise_mukai(ps.coeffs, pointwise_conj(ps.coeffs, ps.N), ps.N)
        flag = "locus" if ps.rescaled else "ok"
        rows.append(base + [str(tp), _fmt_float(abs(complex(mk))), flag])
    return rows


# ---------------------------------------------------------------------------
# generalized Kähler assembly
# ---------------------------------------------------------------------------


def _two_form_matrix_real(two: dict, m: int, field: Field) -> list:
    """``W[a][b] = β(∂_a, ∂_b)`` in the real basis ``(∂x_1, ∂y_1, …)`` for a constant 2-form.

    ``two`` maps chart-coframe bitmasks ``(dw.., dwb..)`` to coefficients.
    """
    N = 2 * m
    Mw = zeros(N, N, field)
    for mask, c in two.items():
        a, b = list(_mask_bits(mask))
        Mw[a][b] = Mw[a][b] + c
        Mw[b][a] = Mw[b][a] - c
    # real basis vectors in Wirtinger components: ∂x = ∂z + ∂zb, ∂y = i(∂z − ∂zb)
    R = zeros(N, N, field)
    for k in range(m):
        R[2 * k][k] = field.one()
        R[2 * k][m + k] = field.one()
        R[2 * k + 1][k] = field.i()
        R[2 * k + 1][m + k] = -field.i()
    return matmul(matmul(R, Mw), transpose(R))


def _structure_from_spinor(ps: PointSpinor, field: Field) -> LinearGCS:
    m = ps.N // 2
    Lw = annihilator(ps.coeffs, ps.N, field)
    T = wirtinger_to_real(m, field)
    sp = SplitSpace(ps.N, field)
    Lr = Subspace(sp, [matvec(T, v) for v in Lw.basis()])
    return gcs_from_dirac(Lr)


def _real_part_matrix(M):
    return [[GaussianRational(x.re) if isinstance(x, GaussianRational) else complex(x).real for x in r] for r in M]


def _imag_part_matrix(M):
    return [[GaussianRational(x.im) if isinstance(x, GaussianRational) else complex(x).imag for x in r] for r in M]


def _format_matrix(M, field: Field):
    from .scalars import format_scalar

    if field.exact:
        return [[format_scalar(x) for x in r] for r in M]
    return [[_fmt_float(complex(x).real) for x in r] for r in M]


def gk_assemble(which: str, point: Sequence, field: Field = EXACT) -> dict:
    """Build ``J_A`` (Fubini–Study) and ``J_B`` (pipeline φ_B) at a chart ``z0 = 1`` point and check them.

    Raises :class:`PointOnLocus` when a denominator of either spinor vanishes.
    """
    phiA = fubini_study_spinor(VarTable.complex(3))
    phiB = example_chart(which, 0)
    psA = evaluate_chart_form(phiA, 0, point, field)
    psB = evaluate_chart_form(phiB, 0, point, field)
    if psA.rescaled or psB.rescaled:
        raise PointOnLocus(f"point {tuple(str(c) for c in point)} lies on the type-change locus of {which}")
    JA = _structure_from_spinor(psA, field)
    JB = _structure_from_spinor(psB, field)
    rep = gk_check(JA, JB)
    # exponents: φ_A = e^{iω₁}, φ_B = e^{b + iω₂}
    _, XA = form_log(phiA)
    _, XB = form_log(phiB)
    WA = _two_form_matrix_real(evaluate_chart_form(XA, 0, point, field).coeffs, 2, field)
    WB = _two_form_matrix_real(evaluate_chart_form(XB, 0, point, field).coeffs, 2, field)
    omega1 = _imag_part_matrix(WA)
    b_sp = _real_part_matrix(WB)
    omega2 = _imag_part_matrix(WB)
    out = {
        "example": which,
        "point": [str(c) for c in point],
        "commute": rep.commute,
        "positive": rep.positive,
    }
    try:
        bh = bihermitian_blocks(JA, JB, omega1, omega2, b_sp)
        out["routes_agree"] = bh.cross_check
    except SingularB:
        bh = bihermitian_blocks(JA, JB)
        out["routes_agree"] = None
    out["g"] = _format_matrix(bh.g, field)
    out["b"] = _format_matrix(bh.b, field)
    out["b_spinor"] = _format_matrix(b_sp, field)
    return out
