"""Exterior calculus on one chart: forms, generalized vector fields, spinor operations and
the twisted Courant bracket on TM ⊕ T*M.

Generators of the exterior algebra are the differentials ``d<var>`` of every
variable in the :class:`VarTable`, in table order (``dz0..dz_{n-1}``,
``dzb0..``, then auxiliaries such as ``du``).  A wedge monomial is stored as a
bitmask over generator indices with the generators in increasing order.

Vector fields carry a component for every variable.  For an auxiliary
variable with a definition (``u = Σ z_k zb_k``) the component is fixed by the
chain rule, ``X^u = X(Σ z_k zb_k)``, so ``i_X du = X(u)`` and all operations
commute with :func:`expand_aux`.
"""

from __future__ import annotations

from itertools import combinations
from math import factorial
from typing import Iterable, Mapping, Sequence

from .errors import FrameNotIsotropic, InvariantError, NotIsotropic, ParseError
from .poly import Polynomial, RatFun, VarTable, parse_expr
from .scalars import GaussianRational

__all__ = [
    "Form",
    "GeneralizedField",
    "TwistForm",
    "wedge",
    "ext_d",
    "interior",
    "lie_derivative",
    "clifford",
    "b_transform",
    "mukai",
    "mukai_sigma",
    "courant_bracket",
    "pairing",
    "lie_bracket",
    "verify_axioms",
    "curvature_of_splitting",
    "preserves_gcs",
    "D_operator",
    "expand_aux",
    "form_exp",
]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(m: int):
    j = 0
    while m:
        if m & 1:
            yield j
        m >>= 1
        j += 1


def _wedge_sign(m1: int, m2: int) -> int:
    """Sign of reordering (monomial m1)∧(monomial m2) into increasing order."""
    s = 0
    for b in _bits(m2):
        s += _popcount(m1 >> (b + 1))
    return -1 if s & 1 else 1


def _as_ratfun(table: VarTable, c) -> RatFun:
    if isinstance(c, RatFun):
        return c
    if isinstance(c, Polynomial):
        return RatFun.from_poly(c)
    if isinstance(c, str):
        return parse_expr(c, table)
    return RatFun.const(table, c)


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------


class Form:
    """Element of the exterior algebra with :class:`RatFun` coefficients."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: Mapping[int, RatFun] | None = None, _clean: bool = False):
        self.table = table
        if terms is None:
            terms = {}
        if not _clean:
            terms = {m: c for m, c in terms.items() if not c.is_zero()}
        self.terms = dict(terms)

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, table) -> "Form":
        return cls(table, {}, True)

    @classmethod
    def scalar(cls, table, c) -> "Form":
        return cls(table, {0: _as_ratfun(table, c)})

    @classmethod
    def gen(cls, table, name: str) -> "Form":
        """The 1-form ``d<name>`` (``name`` may be given with or without the leading ``d``)."""
        return cls(table, {1 << _gen_index(table, name): RatFun.one(table)}, True)

    @classmethod
    def from_terms(cls, table, items: Iterable) -> "Form":
        """Build from ``(coefficient, [generator names])`` pairs.

        Generators may appear in any order (the sign is normalized); a repeated
        generator raises :class:`InvariantError`.
        """
        acc: dict = {}
        for coeff, mono in items:
            mask, sign = _mono_mask(table, mono)
            c = _as_ratfun(table, coeff)
            if sign < 0:
                c = -c
            acc[mask] = acc[mask] + c if mask in acc else c
        return cls(table, acc)

    @classmethod
    def parse(cls, table, spec: Mapping[str, str] | str) -> "Form":
        """Convenience constructor: ``{"dz0 dz1": "z2", "": "1"}`` or ``"dz0 dz1"``."""
        if isinstance(spec, str):
            spec = {spec: "1"}
        return cls.from_terms(table, [(c, m.split()) for m, c in spec.items()])

    # queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set:
        return {_popcount(m) for m in self.terms}

    def part(self, k: int) -> "Form":
        return Form(self.table, {m: c for m, c in self.terms.items() if _popcount(m) == k}, True)

    def is_homogeneous(self, k: int | None = None) -> bool:
        ds = self.degrees()
        return len(ds) <= 1 and (k is None or not ds or ds == {k})

    def coeff(self, mono: Sequence[str] | str) -> RatFun:
        if isinstance(mono, str):
            mono = mono.split()
        mask, sign = _mono_mask(self.table, mono)
        c = self.terms.get(mask)
        if c is None:
            return RatFun.zero(self.table)
        return c if sign > 0 else -c

    def scalar_part(self) -> RatFun:
        return self.terms.get(0, RatFun.zero(self.table))

    def uses_generator(self, name: str) -> bool:
        bit = 1 << _gen_index(self.table, name)
        return any(m & bit for m in self.terms)

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "Form"):
        if other.table is not self.table and other.table != self.table:
            raise ValueError("forms over different variable tables")

    def __add__(self, other):
        if not isinstance(other, Form):
            other = Form.scalar(self.table, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = out[m] + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return Form(self.table, out, True)

    __radd__ = __add__

    def __neg__(self):
        return Form(self.table, {m: -c for m, c in self.terms.items()}, True)

    def __sub__(self, other):
        if not isinstance(other, Form):
            other = Form.scalar(self.table, other)
        return self + (-other)

    def __rsub__(self, other):
        return Form.scalar(self.table, other) - self

    def scale(self, c) -> "Form":
        c = _as_ratfun(self.table, c)
        if c.is_zero():
            return Form.zero(self.table)
        return Form(self.table, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Form):
            return wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Form):
            return wedge(other, self)
        return self.scale(other)

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, (int, RatFun, GaussianRational)):
            other = Form.scalar(self.table, other)
        if not isinstance(other, Form):
            return NotImplemented
        if self.table != other.table:
            return False
        keys = set(self.terms) | set(other.terms)
        z = RatFun.zero(self.table)
        return all(self.terms.get(m, z) == other.terms.get(m, z) for m in keys)

    __hash__ = None

    # coefficientwise maps -----------------------------------------------------
    def map_coeffs(self, fn) -> "Form":
        return Form(self.table, {m: fn(c) for m, c in self.terms.items()})

    def conj(self) -> "Form":
        t = self.table
        out: dict = {}
        for m, c in self.terms.items():
            gens = [t.conj_index[j] for j in _bits(m)]
            mask, sign = _sorted_mask(gens)
            cc = c.conj()
            out[mask] = -cc if sign < 0 else cc
        return Form(t, out, True)

    def d(self) -> "Form":
        return ext_d(self)

    def pullback(self, assignment: Mapping[str, object]) -> "Form":
        """Substitute variables by rational functions, with ``d(var) ↦ d(value)``."""
        return pullback(self, assignment)

    def subst_coeffs(self, assignment: Mapping[str, object]) -> "Form":
        """Substitute variables in the coefficients only (generators untouched)."""
        t = self.table
        vals = {k: _as_ratfun(t, v) for k, v in assignment.items()}
        return self.map_coeffs(lambda c: c.subst_many(vals))

    # text / json ----------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (_popcount(mc[0]), [-(b) for b in _bits(mc[0])]))

    def monomial_names(self, mask: int) -> list:
        return ["d" + self.table.names[j] for j in _bits(mask)]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in _canonical_order(self.terms):
            mono = " ".join(self.monomial_names(m))
            parts.append(f"({c})" + (f" {mono}" if mono else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"Form({self})"

    def to_json(self) -> dict:
        return {
            "vars": self.table.to_json(),
            "terms": [{"coeff": str(c), "mono": self.monomial_names(m)} for m, c in _canonical_order(self.terms)],
        }

    @classmethod
    def from_json(cls, data, table: VarTable | None = None) -> "Form":
        if not isinstance(data, dict):
            raise ParseError("form must be a JSON object")
        if table is None:
            if "vars" not in data:
                raise ParseError("form is missing 'vars'")
            table = VarTable.from_json(data["vars"])
        terms = data.get("terms")
        if not isinstance(terms, list):
            raise ParseError("form 'terms' must be a list")
        items = []
        for idx, term in enumerate(terms):
            if not isinstance(term, dict) or "coeff" not in term or "mono" not in term:
                raise ParseError(f"terms[{idx}] must have 'coeff' and 'mono'")
            if not isinstance(term["mono"], list):
                raise ParseError(f"terms[{idx}].mono must be a list")
            try:
                coeff = parse_expr(term["coeff"], table)
            except ParseError as exc:
                raise ParseError(f"terms[{idx}].coeff: {exc}") from None
            items.append((coeff, term["mono"]))
        return cls.from_terms(table, items)


def _canonical_order(terms: Mapping[int, RatFun]):
    def key(mc):
        m = mc[0]
        return (_popcount(m), list(_bits(m)))

    return sorted(terms.items(), key=key)


def _gen_index(table: VarTable, name: str) -> int:
    nm = name[1:] if name.startswith("d") and name[1:] in table.names else name
    if nm not in table.names:
        raise InvariantError(f"unknown generator {name!r}")
    return table.names.index(nm)


def _sorted_mask(gens: Sequence[int]):
    gens = list(gens)
    if len(set(gens)) != len(gens):
        return None, 0
    inv = sum(1 for a, b in combinations(range(len(gens)), 2) if gens[a] > gens[b])
    mask = 0
    for g in gens:
        mask |= 1 << g
    return mask, (-1 if inv & 1 else 1)


def _mono_mask(table: VarTable, mono: Sequence[str]):
    gens = [_gen_index(table, g) for g in mono]
    mask, sign = _sorted_mask(gens)
    if mask is None:
        raise InvariantError(f"repeated generator in monomial {list(mono)}")
    return mask, sign


# ---------------------------------------------------------------------------
# exterior algebra operations
# ---------------------------------------------------------------------------


def wedge(a: Form, b: Form) -> Form:
    """Graded product ``a ∧ b``."""
    a._check(b)
    out: dict = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            if m1 & m2:
                continue
            m = m1 | m2
            c = c1 * c2
            if _wedge_sign(m1, m2) < 0:
                c = -c
            if m in out:
                out[m] = out[m] + c
            else:
                out[m] = c
    return Form(a.table, out)


def ext_d(a: Form) -> Form:
    """Exterior derivative ``d = Σ_v dv ∧ ∂_v``."""
    t = a.table
    out: dict = {}
    nv = t.nvars
    for m, c in a.terms.items():
        if c.is_constant():
            continue
        used = c.num.variables()
        for f, _ in c.den:
            used |= f.variables()
        for j in range(nv):
            if m >> j & 1 or t.names[j] not in used:
                continue
            dc = c.diff(t.names[j])
            if dc.is_zero():
                continue
            if _popcount(m & ((1 << j) - 1)) & 1:
                dc = -dc
            mm = m | (1 << j)
            out[mm] = out[mm] + dc if mm in out else dc
    return Form(t, out)


def _vec_of(X) -> dict:
    if isinstance(X, GeneralizedField):
        return X.vec
    return X


def interior(X, a: Form) -> Form:
    """Contraction ``i_X a`` with the vector part of ``X`` (a degree −1 derivation)."""
    vec = _vec_of(X)
    t = a.table
    out: dict = {}
    for m, c in a.terms.items():
        for j in _bits(m):
            xj = vec.get(j)
            if xj is None or xj.is_zero():
                continue
            v = xj * c
            if _popcount(m & ((1 << j) - 1)) & 1:
                v = -v
            mm = m & ~(1 << j)
            out[mm] = out[mm] + v if mm in out else v
    return Form(t, out)


def lie_derivative(X, a: Form) -> Form:
    """Lie derivative by Cartan's formula ``L_X = d i_X + i_X d``."""
    return ext_d(interior(X, a)) + interior(X, ext_d(a))


def apply_vector(X, f: RatFun) -> RatFun:
    """Directional derivative ``X(f) = Σ_j X^j ∂_j f``."""
    vec = _vec_of(X)
    t = f.table
    acc = RatFun.zero(t)
    if f.is_constant():
        return acc
    for j, xj in vec.items():
        if xj.is_zero():
            continue
        df = f.diff(t.names[j])
        if not df.is_zero():
            acc = acc + xj * df
    return acc


def mukai_sigma(a: Form) -> Form:
    """The sign involution ``a ↦ (−1)^{k(k−1)/2} a`` on degree-k components."""
    out = {}
    for m, c in a.terms.items():
        k = _popcount(m)
        out[m] = -c if (k * (k - 1) // 2) & 1 else c
    return Form(a.table, out, True)


def _base_mask(table: VarTable) -> int:
    mask = 0
    for j, kind in enumerate(table.kinds):
        if kind != "aux":
            mask |= 1 << j
    return mask


def mukai(phi: Form, psi: Form) -> Form:
    """Mukai pairing ``(φ ∧ σ(ψ))_top``; top degree is over the non-auxiliary generators."""
    t = phi.table
    base = _base_mask(t)
    for f in (phi, psi):
        if any(m & ~base for m in f.terms):
            raise InvariantError("mukai pairing requires forms free of auxiliary differentials")
    prod = wedge(phi, mukai_sigma(psi))
    top = prod.terms.get(base)
    return Form(t, {base: top} if top is not None else {}, True)


def form_exp(a: Form, max_degree: int | None = None) -> Form:
    """``exp(a) = Σ a^k/k!`` for a form of even degree (finite sum)."""
    if any(k % 2 for k in a.degrees()):
        raise InvariantError("form_exp needs an even form")
    if 0 in a.terms:
        raise InvariantError("form_exp of a form with a scalar part is not a polynomial")
    t = a.table
    result = Form.scalar(t, 1)
    power = Form.scalar(t, 1)
    limit = max_degree if max_degree is not None else t.nvars
    k = 0
    while True:
        k += 1
        power = wedge(power, a)
        if not power or 2 * k > limit:
            break
        result = result + power.scale(GaussianRational(1, 0) / factorial(k))
    return result


def b_transform(B: Form, phi: Form) -> Form:
    """Spinor action of a B-field: ``e^B ∧ φ``."""
    if not B.is_homogeneous(2):
        raise InvariantError("B must be a 2-form")
    return wedge(form_exp(B), phi)


def pullback(a: Form, assignment: Mapping[str, object]) -> Form:
    """Pull back along ``var := value``; generators ``d var`` become ``d(value)``."""
    t = a.table
    vals = {t.names[t.index(k)]: _as_ratfun(t, v) for k, v in assignment.items()}
    dvals = {t.index(k): ext_d(Form.scalar(t, v)) for k, v in vals.items()}
    result = Form.zero(t)
    for m, c in a.terms.items():
        term = Form.scalar(t, c.subst_many(vals))
        for j in _bits(m):
            if j in dvals:
                term = wedge(term, dvals[j])
            else:
                term = wedge(term, Form(t, {1 << j: RatFun.one(t)}, True))
            if not term:
                break
        result = result + term
    return result


def expand_aux(a: Form) -> Form:
    """Replace every defined auxiliary variable by its definition (``u ↦ Σ z zb``, ``du ↦ d(Σ z zb)``)."""
    t = a.table
    assign = {}
    for nm, text in t.aux_defs:
        if text is not None:
            assign[nm] = parse_expr(text, t)
    return pullback(a, assign) if assign else a


def expand_aux_scalar(f: RatFun) -> RatFun:
    t = f.table
    for nm, text in t.aux_defs:
        if text is not None:
            f = f.subst(nm, parse_expr(text, t))
    return f


# ---------------------------------------------------------------------------
# generalized vector fields
# ---------------------------------------------------------------------------


class GeneralizedField:
    """Section ``X + ξ`` of TM ⊕ T*M: vector components and a 1-form."""

    __slots__ = ("table", "vec", "cov")

    def __init__(self, table: VarTable, vec: Mapping | None = None, cov: Form | None = None, complete_aux: bool = True):
        self.table = table
        v: dict = {}
        for k, c in (vec or {}).items():
            j = table.index(k) if not isinstance(k, int) else k
            r = _as_ratfun(table, c)
            if not r.is_zero():
                v[j] = r
        if complete_aux:
            for nm, text in table.aux_defs:
                j = table.index(nm)
                if text is not None and j not in v:
                    comp = apply_vector(v, parse_expr(text, table))
                    if not comp.is_zero():
                        v[j] = comp
        self.vec = v
        cov = cov if cov is not None else Form.zero(table)
        if not cov.is_homogeneous(1):
            raise InvariantError("covector part must be a 1-form")
        self.cov = cov

    @classmethod
    def vector(cls, table, comps: Mapping) -> "GeneralizedField":
        return cls(table, comps, None)

    @classmethod
    def covector(cls, table, xi: Form) -> "GeneralizedField":
        return cls(table, {}, xi)

    @classmethod
    def coordinate(cls, table, name: str) -> "GeneralizedField":
        return cls(table, {name: 1}, None)

    def is_vector(self) -> bool:
        return self.cov.is_zero()

    def vector_part(self) -> "GeneralizedField":
        return GeneralizedField(self.table, self.vec, None, False)

    def component(self, name) -> RatFun:
        return self.vec.get(self.table.index(name), RatFun.zero(self.table))

    def __add__(self, other: "GeneralizedField") -> "GeneralizedField":
        vec = dict(self.vec)
        for j, c in other.vec.items():
            vec[j] = vec[j] + c if j in vec else c
        return GeneralizedField(self.table, vec, self.cov + other.cov, False)

    def __neg__(self):
        return GeneralizedField(self.table, {j: -c for j, c in self.vec.items()}, -self.cov, False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "GeneralizedField":
        f = _as_ratfun(self.table, f)
        return GeneralizedField(self.table, {j: c * f for j, c in self.vec.items()}, self.cov.scale(f), False)

    def __mul__(self, f):
        return self.scale(f)

    __rmul__ = __mul__

    def conj(self) -> "GeneralizedField":
        t = self.table
        return GeneralizedField(t, {t.conj_index[j]: c.conj() for j, c in self.vec.items()}, self.cov.conj(), False)

    def __eq__(self, other):
        if not isinstance(other, GeneralizedField):
            return NotImplemented
        z = RatFun.zero(self.table)
        keys = set(self.vec) | set(other.vec)
        return all(self.vec.get(j, z) == other.vec.get(j, z) for j in keys) and self.cov == other.cov

    __hash__ = None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.vec.values()) and self.cov.is_zero()

    def __str__(self):
        parts = [f"({c}) d/d{self.table.names[j]}" for j, c in sorted(self.vec.items())]
        if self.cov:
            parts.append(str(self.cov))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"GeneralizedField({self})"

    def to_json(self, include_aux: bool = False) -> dict:
        t = self.table
        vec = {}
        for j, c in sorted(self.vec.items()):
            if t.kinds[j] == "aux" and not include_aux:
                continue
            vec[f"d{t.names[j]}-dual"] = str(c)
        return {"vec": vec, "cov": self.cov.to_json()}

    @classmethod
    def from_json(cls, data, table: VarTable | None = None) -> "GeneralizedField":
        if not isinstance(data, dict):
            raise ParseError("generalized field must be a JSON object")
        cov_data = data.get("cov")
        if table is None:
            if isinstance(cov_data, dict) and "vars" in cov_data:
                table = VarTable.from_json(cov_data["vars"])
            elif "vars" in data:
                table = VarTable.from_json(data["vars"])
            else:
                raise ParseError("generalized field needs 'vars' (directly or in 'cov')")
        vec = {}
        for key, val in (data.get("vec") or {}).items():
            if not key.endswith("-dual") or not key.startswith("d"):
                raise ParseError(f"bad vector key {key!r}; expected e.g. 'dz0-dual'")
            nm = key[1:-5]
            if nm not in table.names:
                raise ParseError(f"unknown vector component {key!r}")
            vec[nm] = parse_expr(val, table)
        cov = Form.from_json(cov_data, table) if cov_data is not None else Form.zero(table)
        return cls(table, vec, cov)


def lie_bracket(X, Y) -> dict:
    """Vector-field bracket ``[X,Y]^j = X(Y^j) − Y(X^j)``; returns a component dict."""
    vx, vy = _vec_of(X), _vec_of(Y)
    out: dict = {}
    for j in set(vx) | set(vy):
        c = RatFun.zero(next(iter((vx or vy).values())).table)
        if j in vy:
            c = c + apply_vector(vx, vy[j])
        if j in vx:
            c = c - apply_vector(vy, vx[j])
        if not c.is_zero():
            out[j] = c
    return out


class TwistForm:
    """Closed 3-form twisting the Courant bracket."""

    __slots__ = ("H",)

    def __init__(self, H: Form, check: bool = True):
        if not H.is_homogeneous(3):
            raise InvariantError("twisting form must have degree 3")
        if check and not ext_d(H).is_zero():
            raise InvariantError("twisting form is not closed")
        self.H = H

    @classmethod
    def zero(cls, table) -> "TwistForm":
        return cls(Form.zero(table), check=False)


def _twist(H) -> Form | None:
    if H is None:
        return None
    return H.H if isinstance(H, TwistForm) else H


def pairing(v: GeneralizedField, w: GeneralizedField) -> RatFun:
    """Split-signature pairing ``⟨X+ξ, Y+η⟩ = ½(η(X) + ξ(Y))``."""
    a = interior(v, w.cov).scalar_part()
    b = interior(w, v.cov).scalar_part()
    return (a + b).scale(GaussianRational(1, 0) / 2)


def courant_bracket(v: GeneralizedField, w: GeneralizedField, H=None) -> GeneralizedField:
    """Twisted bracket ``[X,Y] + L_X η − i_Y dξ + i_Y i_X H``."""
    t = v.table
    vec = lie_bracket(v, w)
    cov = lie_derivative(v, w.cov) - interior(w, ext_d(v.cov))
    Hf = _twist(H)
    if Hf is not None and Hf:
        cov = cov + interior(w, interior(v, Hf))
    return GeneralizedField(t, vec, cov, False)


def clifford(v: GeneralizedField, phi: Form) -> Form:
    """Clifford action on spinors: ``(X+ξ)·φ = i_X φ + ξ ∧ φ``."""
    return interior(v, phi) + wedge(v.cov, phi)


def b_transform_field(B: Form, v: GeneralizedField) -> GeneralizedField:
    """``e^B (X+ξ) = X + ξ + i_X B``."""
    return GeneralizedField(v.table, v.vec, v.cov + interior(v, B), False)


def D_of(f: RatFun) -> GeneralizedField:
    """The operator D on functions.

    With the pairing ``½(η(X)+ξ(Y))`` the identification E ≅ E* sends a
    1-form ξ to ``2ξ``, so ``½ π* d f`` is the section ``df``.
    """
    t = f.table
    return GeneralizedField(t, {}, ext_d(Form.scalar(t, f)), False)


# ---------------------------------------------------------------------------
# axioms and derived structures
# ---------------------------------------------------------------------------


def verify_axioms(sections: Sequence[GeneralizedField], H=None, f: RatFun | None = None) -> dict:
    """Check the Courant algebroid axioms C1–C5 as exact identities.

    Uses the first three sections ``e1, e2, e3`` and the function ``f``.
    Returns ``{"C1": (ok, residual), ...}``; residuals are GeneralizedFields
    (C1, C3, C5) or RatFuns (C2 as the vector defect, C4).
    """
    if len(sections) < 3:
        raise ValueError("verify_axioms needs at least three sections")
    e1, e2, e3 = sections[:3]
    t = e1.table
    if f is None:
        f = RatFun.var(t, t.names[0])
    br = lambda a, b: courant_bracket(a, b, H)  # noqa: E731
    report = {}
    # C1 Leibniz identity
    r1 = br(e1, br(e2, e3)) - br(br(e1, e2), e3) - br(e2, br(e1, e3))
    report["C1"] = (r1.is_zero(), r1)
    # C2 anchor is a morphism
    b12 = br(e1, e2)
    lb = lie_bracket(e1, e2)
    r2 = GeneralizedField(t, b12.vec, None, False) - GeneralizedField(t, lb, None, False)
    report["C2"] = (r2.is_zero(), r2)
    # C3 Leibniz rule in the second slot
    r3 = br(e1, e2.scale(f)) - br(e1, e2).scale(f) - e2.scale(apply_vector(e1, f))
    report["C3"] = (r3.is_zero(), r3)
    # C4 invariance of the pairing
    r4 = apply_vector(e1, pairing(e2, e3)) - pairing(br(e1, e2), e3) - pairing(e2, br(e1, e3))
    report["C4"] = (r4.is_zero(), r4)
    # C5 symmetric part
    r5 = br(e1, e1) - D_of(pairing(e1, e1))
    report["C5"] = (r5.is_zero(), r5)
    return report


def curvature_of_splitting(nabla: Mapping[str, GeneralizedField], H0=None, table: VarTable | None = None) -> Form:
    """Curvature 3-form of an isotropic right splitting of TM ⊕ T*M.

    ``nabla`` maps each coordinate name to the lift ``∇(∂_name)``, whose vector
    part must be ``∂_name``.  The induced left splitting
    ``s(X+ξ) = ½(ξ − β(X))`` (with ``β(∂_a)`` the 1-form part of ``∇∂_a``)
    satisfies ``s∘π* = id`` and kills the image of ∇; the curvature is
    ``H(∂a,∂b,∂c) = (2 s[∇∂a, ∇∂b])(∂c)``.  Raises :class:`NotIsotropic` if the
    lifts are not mutually orthogonal and ``ValueError`` if the computed
    tensor is not totally antisymmetric or not closed.
    """
    names = list(nabla)
    if not names:
        raise ValueError("empty splitting")
    t = table or nabla[names[0]].table
    coords = {nm: GeneralizedField.coordinate(t, nm) for nm in names}
    for nm in names:
        lift = nabla[nm]
        diff = GeneralizedField(t, lift.vec, None, False) - coords[nm]
        if not diff.is_zero():
            raise ValueError(f"lift of d/d{nm} has the wrong vector part")
    for i, a in enumerate(names):
        for b in names[i:]:
            if not pairing(nabla[a], nabla[b]).is_zero():
                raise NotIsotropic(f"<∇{a}, ∇{b}> is not zero")

    def beta(X: GeneralizedField) -> Form:
        out = Form.zero(t)
        for nm in names:
            c = X.vec.get(t.index(nm))
            if c is not None:
                out = out + nabla[nm].cov.scale(c)
        return out

    def two_s(e: GeneralizedField) -> Form:
        return e.cov - beta(e)

    values: dict = {}
    for a in names:
        for b in names:
            br = courant_bracket(nabla[a], nabla[b], H0)
            form = two_s(br)
            for c in names:
                values[(a, b, c)] = interior(coords[c], form).scalar_part()
    Hform = Form.zero(t)
    for a, b, c in combinations(names, 3):
        val = values[(a, b, c)]
        for (p, q, r), sgn in (((b, a, c), -1), ((a, c, b), -1), ((c, b, a), -1), ((b, c, a), 1), ((c, a, b), 1)):
            if not (values[(p, q, r)] == (val if sgn > 0 else -val)):
                raise ValueError("curvature tensor is not totally antisymmetric")
        Hform = Hform + Form.from_terms(t, [(val, ["d" + a, "d" + b, "d" + c])])
    for a in names:
        for b in names:
            for c in names:
                if len({a, b, c}) < 3 and not values[(a, b, c)].is_zero():
                    raise ValueError("curvature tensor is not totally antisymmetric")
    if not ext_d(Hform).is_zero():
        raise ValueError("curvature form is not closed")
    return Hform


def preserves_gcs(v: GeneralizedField, frame: Sequence[GeneralizedField], H=None, return_residuals: bool = False):
    """Whether ``v`` preserves the maximal isotropic L spanned by ``frame``.

    Since L is maximal isotropic, ``[v, w] ∈ L`` iff ``⟨[v, w_j], w_i⟩ = 0`` for
    all frame elements; these pairings are the residuals.
    """
    for i, wi in enumerate(frame):
        for wj in frame[i:]:
            if not pairing(wi, wj).is_zero():
                raise FrameNotIsotropic("frame elements are not mutually orthogonal")
    residuals = {}
    for j, wj in enumerate(frame):
        bj = courant_bracket(v, wj, H)
        for i, wi in enumerate(frame):
            r = pairing(bj, wi)
            if not r.is_zero():
                residuals[(j, i)] = r
    ok = not residuals
    return (ok, residuals) if return_residuals else ok


def field_to_coords(v: GeneralizedField, names: Sequence[str] | None = None) -> list:
    """Coordinates of ``v`` in the basis (∂_{v1}..∂_{vm}, dv1..dvm) over non-auxiliary variables."""
    t = v.table
    names = list(names) if names is not None else t.base_names()
    cov = expand_aux(v.cov) if any(k == "aux" for k in t.kinds) else v.cov
    z = RatFun.zero(t)
    out = [v.vec.get(t.index(nm), z) for nm in names]
    out += [cov.coeff(["d" + nm]) for nm in names]
    return out


def coords_to_field(table: VarTable, coords: Sequence[RatFun], names: Sequence[str] | None = None) -> GeneralizedField:
    names = list(names) if names is not None else table.base_names()
    m = len(names)
    vec = {nm: coords[i] for i, nm in enumerate(names)}
    cov = Form.from_terms(table, [(coords[m + i], ["d" + nm]) for i, nm in enumerate(names)])
    return GeneralizedField(table, vec, cov)


def D_operator(f_re: RatFun, f_im: RatFun, J: Sequence[Sequence[RatFun]], names: Sequence[str] | None = None) -> GeneralizedField:
    """``Df = d(Re f) − J d(Im f)`` with ``J`` a matrix on (vector, covector) coordinates."""
    t = f_re.table
    dre = D_of(expand_aux_scalar(f_re))
    dim = field_to_coords(D_of(expand_aux_scalar(f_im)), names)
    Jd = []
    for row in J:
        acc = RatFun.zero(t)
        for a, b in zip(row, dim):
            a = _as_ratfun(t, a)
            if not a.is_zero() and not b.is_zero():
                acc = acc + a * b
        Jd.append(acc)
    return dre - coords_to_field(t, Jd, names)
