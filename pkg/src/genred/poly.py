"""Multivariate polynomials and rational functions over ℚ(i) in Wirtinger variables.

Variables ``z_k`` and ``zb_k`` are independent commuting symbols; the relation
``zb_k = conj(z_k)`` is imposed only when evaluating numerically.  Auxiliary
variables (by default ``u``, standing for ``Σ z_k zb_k``) are self-conjugate.

Polynomials store Gaussian-integer coefficients over one common positive
denominator, normalized by the gcd, so equal values have equal representations.
Rational functions keep their denominator as a product of normalized
polynomial factors; common factors are cancelled by exact trial division
(no multivariate gcd), and equality is decided by cross-multiplication.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence

from . import kernels as K
from .errors import DivisionByZero, ParseError, PoleAtPoint
from .scalars import GaussianRational, format_scalar

__all__ = ["VarTable", "Polynomial", "RatFun", "parse_expr", "DEFAULT_TOLERANCE"]

DEFAULT_TOLERANCE = 1e-12
_BITS = K.BITS
_MASK = K.MASK


# ---------------------------------------------------------------------------
# variable tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VarTable:
    """Ordered variable names with their conjugation rule and auxiliary definitions.

    ``kinds[j]`` is ``"z"``, ``"zb"``, ``"real"`` or ``"aux"``; ``conj_index[j]``
    is the index of the conjugate variable; ``aux_defs`` maps auxiliary names to
    defining expressions in the other variables (or ``None``).
    """

    names: tuple
    kinds: tuple
    conj_index: tuple
    aux_defs: tuple = ()

    @classmethod
    def complex(cls, n: int, aux: Sequence[str] = ("u",)) -> "VarTable":
        names = [f"z{k}" for k in range(n)] + [f"zb{k}" for k in range(n)] + list(aux)
        kinds = ["z"] * n + ["zb"] * n + ["aux"] * len(aux)
        conj = list(range(n, 2 * n)) + list(range(n)) + [2 * n + j for j in range(len(aux))]
        defs = []
        for a in aux:
            defs.append((a, "+".join(f"z{k}*zb{k}" for k in range(n)) if a == "u" and n else None))
        return cls(tuple(names), tuple(kinds), tuple(conj), tuple(defs))

    @classmethod
    def real(cls, names: Sequence[str] | int, aux: Mapping[str, str | None] | None = None) -> "VarTable":
        """A table of real (self-conjugate) coordinates, e.g. ``["x1", "y1"]``."""
        if isinstance(names, int):
            names = [f"x{k}" for k in range(names)]
        aux = dict(aux or {})
        allnames = list(names) + list(aux)
        kinds = ["real"] * len(names) + ["aux"] * len(aux)
        return cls(tuple(allnames), tuple(kinds), tuple(range(len(allnames))), tuple(aux.items()))

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        for nm in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", nm) or nm == "i":
                raise ValueError(f"invalid variable name {nm!r}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def n(self) -> int:
        """Number of holomorphic variables (or real coordinates for a real table)."""
        return sum(1 for k in self.kinds if k in ("z", "real"))

    @property
    def is_real(self) -> bool:
        return "z" not in self.kinds

    def index(self, name) -> int:
        if isinstance(name, int):
            if not 0 <= name < len(self.names):
                raise KeyError(name)
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def shift(self, idx: int) -> int:
        # variable 0 occupies the most significant field, so integer order of
        # packed keys is lexicographic order with z0 > z1 > ...
        return _BITS * (len(self.names) - 1 - idx)

    def base_names(self) -> list:
        return [nm for nm, k in zip(self.names, self.kinds) if k != "aux"]

    def aux_names(self) -> list:
        return [nm for nm, k in zip(self.names, self.kinds) if k == "aux"]

    def aux_definition(self, name) -> "Polynomial | None":
        for nm, text in self.aux_defs:
            if nm == name:
                return None if text is None else parse_expr(text, self).as_polynomial()
        return None

    def pack(self, exps: Sequence[int]) -> int:
        key = 0
        for j, e in enumerate(exps):
            if e < 0 or e > _MASK:
                raise OverflowError("exponent out of range")
            key |= e << self.shift(j)
        return key

    def unpack(self, key: int) -> tuple:
        nv = len(self.names)
        return tuple((key >> (_BITS * (nv - 1 - j))) & _MASK for j in range(nv))

    def to_json(self) -> dict:
        if self.is_real:
            d = {"names": [nm for nm in self.base_names()], "real": True}
            if self.aux_defs:
                d["aux"] = {nm: t for nm, t in self.aux_defs}
            return d
        return {"n": self.n, "aux": self.aux_names()}

    @classmethod
    def from_json(cls, data) -> "VarTable":
        if not isinstance(data, dict):
            raise ParseError("vars must be an object")
        if data.get("real"):
            return cls.real(list(data["names"]), data.get("aux"))
        if "n" not in data or not isinstance(data["n"], int) or data["n"] < 0:
            raise ParseError("vars.n must be a non-negative integer")
        return cls.complex(data["n"], tuple(data.get("aux", ["u"])))


def _grlex(key: int):
    return (key % _MASK, key)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Sparse polynomial with Gaussian-rational coefficients.

    ``body`` maps packed exponent keys to Gaussian-integer pairs and ``den`` is
    a positive integer; the value is ``Σ body[k] x^k / den``.
    """

    __slots__ = ("table", "body", "den")

    def __init__(self, table: VarTable, body: dict, den: int = 1, _normalized: bool = False):
        self.table = table
        if not _normalized:
            body = {k: v for k, v in body.items() if v[0] or v[1]}
            if den < 0:
                body = K.scale(body, -1, 0)
                den = -den
            if den == 0:
                raise DivisionByZero("zero polynomial denominator")
            if not body:
                den = 1
            else:
                g = gcd(K.content(body), den)
                if g > 1:
                    body = K.divide_int(body, g)
                    den //= g
        self.body = body
        self.den = den

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, table):
        return cls(table, {}, 1, True)

    @classmethod
    def const(cls, table, c) -> "Polynomial":
        c = GaussianRational.coerce(c)
        if not c:
            return cls.zero(table)
        d = c.re.denominator * c.im.denominator // gcd(c.re.denominator, c.im.denominator)
        return cls(table, {0: (int(c.re * d), int(c.im * d))}, d)

    @classmethod
    def var(cls, table, name) -> "Polynomial":
        idx = table.index(name)
        return cls(table, {1 << table.shift(idx): (1, 0)}, 1, True)

    @classmethod
    def from_terms(cls, table, terms: Iterable) -> "Polynomial":
        """Build from ``(exponent tuple, scalar)`` pairs."""
        acc = cls.zero(table)
        for exps, c in terms:
            acc = acc + cls.const(table, c).mul_monomial(table.pack(exps))
        return acc

    # basic queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.body

    def __bool__(self):
        return bool(self.body)

    def is_constant(self) -> bool:
        return not self.body or (len(self.body) == 1 and 0 in self.body)

    def constant_value(self) -> GaussianRational:
        r, i = self.body.get(0, (0, 0))
        return GaussianRational(Fraction(r, self.den), Fraction(i, self.den))

    def total_degree(self) -> int:
        return max((k % _MASK for k in self.body), default=-1)

    def degree_in(self, name) -> int:
        sh = self.table.shift(self.table.index(name))
        return max(((k >> sh) & _MASK for k in self.body), default=-1)

    def lead_key(self) -> int:
        return max(self.body, key=_grlex)

    def trail_key(self) -> int:
        return min(self.body, key=_grlex)

    def terms(self):
        """Yield ``(exponent tuple, GaussianRational)`` in descending grlex order."""
        for k in sorted(self.body, key=_grlex, reverse=True):
            r, i = self.body[k]
            yield self.table.unpack(k), GaussianRational(Fraction(r, self.den), Fraction(i, self.den))

    def coeff(self, exps) -> GaussianRational:
        r, i = self.body.get(self.table.pack(exps), (0, 0))
        return GaussianRational(Fraction(r, self.den), Fraction(i, self.den))

    def variables(self) -> set:
        used = 0
        for k in self.body:
            used |= k
        return {nm for j, nm in enumerate(self.table.names) if (used >> self.table.shift(j)) & _MASK}

    # arithmetic --------------------------------------------------------
    def _check(self, other):
        if other.table is not self.table and other.table != self.table:
            raise ValueError("polynomials over different variable tables")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return Polynomial.const(self.table, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.body:
            return self
        if not self.body:
            return o
        g = gcd(self.den, o.den)
        return Polynomial(self.table, K.lincomb(self.body, o.den // g, o.body, self.den // g), self.den // g * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.table, K.scale(self.body, -1, 0), self.den, True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.body or not o.body:
            return Polynomial.zero(self.table)
        if self.total_degree() + o.total_degree() >= _MASK:
            raise OverflowError("polynomial degree exceeds packed exponent range")
        return Polynomial(self.table, K.mul(self.body, o.body), self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.const(self.table, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = GaussianRational.coerce(c)
        return self * Polynomial.const(self.table, c)

    def mul_monomial(self, key: int) -> "Polynomial":
        return Polynomial(self.table, {k + key: v for k, v in self.body.items()}, self.den, True)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.table == other.table and self.den == other.den and self.body == other.body
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == Polynomial.const(self.table, other)
        return NotImplemented

    def __hash__(self):
        return hash((frozenset(self.body.items()), self.den))

    # calculus / involutions -------------------------------------------
    def diff(self, name) -> "Polynomial":
        return Polynomial(self.table, K.diff(self.body, self.table.shift(self.table.index(name))), self.den)

    def conj(self) -> "Polynomial":
        t = self.table
        perm = t.conj_index
        identity = all(p == j for j, p in enumerate(perm))
        out = {}
        for k, (r, i) in self.body.items():
            if identity:
                nk = k
            else:
                nk = 0
                for j, e in enumerate(t.unpack(k)):
                    if e:
                        nk |= e << t.shift(perm[j])
            out[nk] = (r, -i)
        return Polynomial(t, out, self.den, True)

    def split_by(self, name) -> dict:
        """Group terms by the exponent of ``name``: returns ``{e: polynomial free of name}``."""
        sh = self.table.shift(self.table.index(name))
        groups: dict = {}
        for k, v in self.body.items():
            e = (k >> sh) & _MASK
            groups.setdefault(e, {})[k - (e << sh)] = v
        return {e: Polynomial(self.table, b, self.den) for e, b in groups.items()}

    def subst(self, name, value: "Polynomial") -> "Polynomial":
        """Replace the variable ``name`` by a polynomial."""
        groups = self.split_by(name)
        result = Polynomial.zero(self.table)
        for e in sorted(groups):
            result = result + groups[e] * value ** e
        return result

    def subst_fraction(self, name, num: "Polynomial", den: "Polynomial"):
        """Substitute ``name := num/den``; returns ``(P, m)`` with value ``P / den^m``."""
        groups = self.split_by(name)
        if not groups:
            return self, 0
        m = max(groups)
        result = Polynomial.zero(self.table)
        for e, g in groups.items():
            result = result + g * num ** e * den ** (m - e)
        return result, m

    def content_monomial(self) -> int:
        """Packed key of the largest monomial dividing every term."""
        if not self.body:
            return 0
        t = self.table
        mins = None
        for k in self.body:
            ex = t.unpack(k)
            mins = list(ex) if mins is None else [min(a, b) for a, b in zip(mins, ex)]
            if not any(mins):
                return 0
        return t.pack(mins)

    def exact_div(self, other: "Polynomial") -> "Polynomial | None":
        """Quotient ``self/other`` if it is a polynomial, else ``None``."""
        if not other.body:
            raise DivisionByZero("polynomial division by zero")
        if not self.body:
            return self
        t = self.table
        lg = other.lead_key()
        lg_exps = t.unpack(lg)
        tg_exps = t.unpack(other.trail_key())
        if any(a < b for a, b in zip(t.unpack(self.lead_key()), lg_exps)):
            return None
        if any(a < b for a, b in zip(t.unpack(self.trail_key()), tg_exps)):
            return None
        # make the divisor's leading coefficient a positive integer
        gr, gi = other.body[lg]
        gbody = other.body
        if gi or gr < 0:
            gbody = K.scale(gbody, gr, -gi)
        L = gbody[lg][0]
        neg_g = K.scale(gbody, -1, 0)
        r = dict(self.body)
        q: dict = {}
        acc = 1
        nv = t.nvars
        while r:
            k = max(r, key=_grlex)
            diff_key = k - lg
            # monomial divisibility: every field of k at least that of lg
            for j in range(nv):
                sh = _BITS * (nv - 1 - j)
                if ((k >> sh) & _MASK) < lg_exps[j]:
                    return None
            cr, ci = r[k]
            if cr % L or ci % L:
                r = K.scale(r, L, 0)
                q = K.scale(q, L, 0)
                acc *= L
                cr, ci = cr * L, ci * L
            tr, ti = cr // L, ci // L
            q[diff_key] = (tr, ti)
            for kg, (a, b) in neg_g.items():
                kk = kg + diff_key
                nr = a * tr - b * ti
                ni = a * ti + b * tr
                old = r.get(kk)
                if old is None:
                    r[kk] = (nr, ni)
                else:
                    nr += old[0]
                    ni += old[1]
                    if nr or ni:
                        r[kk] = (nr, ni)
                    else:
                        del r[kk]
        # self = (q/acc) * gbody / den ; other = gbody * s / other.den where gbody = other*other.den*conj
        quotient = Polynomial(t, q, acc * self.den)
        scale = Polynomial(t, gbody, 1).lead_ratio(other)
        return quotient * scale

    def lead_ratio(self, other: "Polynomial") -> "Polynomial":
        """The constant ``self/other`` for two proportional polynomials."""
        k = other.lead_key()
        a = GaussianRational(Fraction(self.body[k][0], self.den), Fraction(self.body[k][1], self.den))
        b = GaussianRational(Fraction(other.body[k][0], other.den), Fraction(other.body[k][1], other.den))
        return Polynomial.const(self.table, a / b)

    def normalized_factor(self):
        """Split ``self = s · m · f`` with ``s`` scalar, ``m`` monomial key and ``f`` canonical.

        ``f`` is primitive with a positive integer leading coefficient (or 1).
        Returns ``(s, m, f)``.
        """
        if not self.body:
            raise DivisionByZero("zero factor")
        m = self.content_monomial()
        body = {k - m: v for k, v in self.body.items()} if m else self.body
        lk = max(body, key=_grlex)
        lr, li = body[lk]
        if li or lr < 0:
            body = K.scale(body, lr, -li)
        c = K.content(body)
        body = K.divide_int(body, c)
        f = Polynomial(self.table, body, 1, True)
        # self = s * x^m * f  with  s = self/(x^m f) a constant
        lead_self = GaussianRational(Fraction(lr, self.den), Fraction(li, self.den))
        lead_f = body[lk][0]
        s = lead_self / lead_f
        return s, m, f

    # evaluation --------------------------------------------------------
    def evaluate(self, values: Sequence, zero=0, coerce: Callable | None = None):
        """Exact or numeric evaluation with ``values[j]`` assigned to variable ``j``.

        ``coerce`` maps a GaussianRational coefficient into the target field;
        it defaults to ``complex``.
        """
        if coerce is None:
            coerce = complex
        t = self.table
        nv = t.nvars
        cache: dict = {}
        total = zero
        for k, (r, i) in self.body.items():
            term = coerce(GaussianRational(Fraction(r, self.den), Fraction(i, self.den)))
            for j in range(nv):
                e = (k >> (_BITS * (nv - 1 - j))) & _MASK
                if e:
                    p = cache.get((j, e))
                    if p is None:
                        p = values[j] ** e
                        cache[(j, e)] = p
                    term = term * p
            total = total + term
        return total

    # printing ----------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self})"

    def as_polynomial(self) -> "Polynomial":
        return self


def _monomial_text(table: VarTable, exps) -> str:
    parts = []
    for nm, e in zip(table.names, exps):
        if e == 1:
            parts.append(nm)
        elif e > 1:
            parts.append(f"{nm}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    if not p.body:
        return "0"
    out = []
    for exps, c in p.terms():
        mono = _monomial_text(p.table, exps)
        neg = False
        if c.im == 0 and c.re < 0:
            neg, c = True, -c
        elif c.re == 0 and c.im < 0:
            neg, c = True, -c
        if c.re and c.im:
            cs = f"({format_scalar(c)})"
        else:
            cs = format_scalar(c)
        if mono:
            text = mono if cs == "1" else f"{cs}*{mono}"
        else:
            text = cs
        if not out:
            out.append(("-" if neg else "") + text)
        else:
            out.append((" - " if neg else " + ") + text)
    return "".join(out)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


def _factor_key(f: Polynomial):
    return tuple(sorted(f.body.items(), key=lambda kv: _grlex(kv[0]), reverse=True))


def _factor_sort_key(f: Polynomial):
    return (f.total_degree(), len(f.body), _factor_key(f))


class RatFun:
    """Rational function ``num / Π f^e`` with a factored, normalized denominator.

    ``den`` is a tuple of ``(factor, exponent)`` pairs with distinct canonical
    factors (primitive, positive leading coefficient, no monomial content
    unless the factor is a single variable), sorted canonically.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Iterable = (), _normalized: bool = False):
        if _normalized:
            self.num = num
            self.den = tuple(den)
            return
        den = list(den)
        if not den:
            self.num = num
            self.den = ()
            return
        self.num, self.den = _normalize(num, den)

    # constructors -------------------------------------------------------
    @classmethod
    def from_poly(cls, p: Polynomial) -> "RatFun":
        return cls(p, (), True)

    @classmethod
    def const(cls, table: VarTable, c) -> "RatFun":
        return cls(Polynomial.const(table, c), (), True)

    @classmethod
    def zero(cls, table: VarTable) -> "RatFun":
        return cls(Polynomial.zero(table), (), True)

    @classmethod
    def one(cls, table: VarTable) -> "RatFun":
        return cls.const(table, 1)

    @classmethod
    def var(cls, table: VarTable, name) -> "RatFun":
        return cls(Polynomial.var(table, name), (), True)

    @classmethod
    def parse(cls, text: str, table: VarTable) -> "RatFun":
        return parse_expr(text, table)

    @property
    def table(self) -> VarTable:
        return self.num.table

    # queries -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.body

    def __bool__(self):
        return bool(self.num.body)

    def is_polynomial(self) -> bool:
        return not self.den

    def is_constant(self) -> bool:
        return not self.den and self.num.is_constant()

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.constant_value()

    def as_polynomial(self) -> Polynomial:
        if self.den:
            raise ValueError(f"not a polynomial: {self}")
        return self.num

    def den_poly(self) -> Polynomial:
        d = Polynomial.const(self.table, 1)
        for f, e in self.den:
            d = d * f ** e
        return d

    # arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatFun):
            if other.table is not self.table and other.table != self.table:
                raise ValueError("rational functions over different variable tables")
            return other
        if isinstance(other, Polynomial):
            return RatFun(other, (), True)
        if isinstance(other, (int, Fraction, GaussianRational)):
            return RatFun.const(self.table, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num.body:
            return self
        if not self.num.body:
            return o
        if not self.den and not o.den:
            return RatFun(self.num + o.num, (), True)
        if self.den == o.den:
            return RatFun(self.num + o.num, self.den)
        lcm = dict(self.den)
        for f, e in o.den:
            lcm[f] = max(lcm.get(f, 0), e)
        a = self.num * _cofactor(lcm, self.den, self.table)
        b = o.num * _cofactor(lcm, o.den, self.table)
        return RatFun(a + b, lcm.items())

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.num.body or not o.num.body:
            return RatFun.zero(self.table)
        if not self.den and not o.den:
            return RatFun(self.num * o.num, (), True)
        den = dict(self.den)
        for f, e in o.den:
            den[f] = den.get(f, 0) + e
        if not o.den and o.num.is_constant():
            return RatFun(self.num * o.num, self.den, True)
        if not self.den and self.num.is_constant():
            return RatFun(self.num * o.num, o.den, True)
        return RatFun(self.num * o.num, den.items())

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        return RatFun.one(self.table) / self

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num.body:
            raise DivisionByZero("division by an identically zero rational function")
        # (a/A) / (b/B) = a*B / (A*b)
        num = self.num
        for f, e in o.den:
            num = num * f ** e
        den = list(self.den) + [(o.num, 1)]
        return RatFun(num, den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (RatFun.one(self.table) / self) ** (-k)
        if k == 0:
            return RatFun.one(self.table)
        return RatFun(self.num ** k, [(f, e * k) for f, e in self.den], not self.den)

    def scale(self, c) -> "RatFun":
        return RatFun(self.num.scale(c), self.den, True) if GaussianRational.coerce(c) else RatFun.zero(self.table)

    # equality ------------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, str) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return self.num == o.num
        lcm = dict(self.den)
        for f, e in o.den:
            lcm[f] = max(lcm.get(f, 0), e)
        a = self.num * _cofactor(lcm, self.den, self.table)
        b = o.num * _cofactor(lcm, o.den, self.table)
        return a == b

    __hash__ = None  # semantic equality is not compatible with hashing

    # calculus ------------------------------------------------------------
    def diff(self, name) -> "RatFun":
        if not self.den:
            return RatFun(self.num.diff(name), (), True)
        t = self.table
        idx = t.index(name)
        rad = Polynomial.const(t, 1)
        for f, _ in self.den:
            rad = rad * f
        num = self.num.diff(name) * rad
        for j, (f, e) in enumerate(self.den):
            df = f.diff(name)
            if not df.body:
                continue
            others = Polynomial.const(t, 1)
            for jj, (g, _) in enumerate(self.den):
                if jj != j:
                    others = others * g
            num = num - self.num * df * others * e
        del idx
        return RatFun(num, [(f, e + 1) for f, e in self.den])

    def conj(self) -> "RatFun":
        return RatFun(self.num.conj(), [(f.conj(), e) for f, e in self.den])

    def subst(self, name, value) -> "RatFun":
        """Substitute a variable by a rational function (or scalar)."""
        t = self.table
        value = self._coerce(value)
        vnum = value.num
        vden = value.den_poly()
        num, m = self.num.subst_fraction(name, vnum, vden)
        extra_num = Polynomial.const(t, 1)
        den: list = [(f, e * m) for f, e in value.den] if m else []
        for f, e in self.den:
            fn, mf = f.subst_fraction(name, vnum, vden)
            if not fn.body:
                raise DivisionByZero(f"denominator factor {f} vanishes after substituting {name}")
            den.append((fn, e))
            if mf:
                extra_num = extra_num * vden ** (mf * e)
        return RatFun(num * extra_num, den)

    def subst_many(self, assignment: Mapping) -> "RatFun":
        out = self
        for name, value in assignment.items():
            out = out.subst(name, value)
        return out

    # evaluation ----------------------------------------------------------
    def _numeric_values(self, point) -> list:
        values = numeric_assignment(self.table, point)
        used = self.num.variables()
        for f, _ in self.den:
            used |= f.variables()
        missing = [nm for j, nm in enumerate(self.table.names) if values[j] is None and nm in used]
        if missing:
            raise KeyError(f"no value for {', '.join(missing)}")
        return values

    def eval(self, point, tolerance: float = DEFAULT_TOLERANCE) -> complex:
        """Numeric value with ``zb_k := conj(z_k)`` and auxiliaries from their definitions."""
        values = self._numeric_values(point)
        d = 1 + 0j
        for f, e in self.den:
            d *= f.evaluate(values) ** e
        if abs(d) <= tolerance:
            raise PoleAtPoint(f"denominator vanishes at {point}")
        return self.num.evaluate(values) / d

    def eval_exact(self, values: Sequence, coerce: Callable, zero):
        """Exact evaluation into a field: ``values`` for every variable, ``coerce`` for coefficients."""
        d = coerce(GaussianRational(1))
        for f, e in self.den:
            d = d * f.evaluate(values, zero, coerce) ** e
        if not d:
            raise PoleAtPoint("denominator vanishes exactly at the point")
        return self.num.evaluate(values, zero, coerce) / d

    # printing ------------------------------------------------------------
    def __str__(self):
        return format_ratfun(self)

    def __repr__(self):
        return f"RatFun({self})"


def _cofactor(lcm: dict, den: Iterable, table: VarTable) -> Polynomial:
    have = dict(den)
    out = Polynomial.const(table, 1)
    for f, e in lcm.items():
        k = e - have.get(f, 0)
        if k:
            out = out * f ** k
    return out


def _single_var_factor(table: VarTable, idx: int) -> Polynomial:
    return Polynomial(table, {1 << table.shift(idx): (1, 0)}, 1, True)


def _normalize(num: Polynomial, den: list):
    table = num.table
    factors: dict = {}
    scalar = GaussianRational(1)
    for f, e in den:
        if e == 0:
            continue
        if not f.body:
            raise DivisionByZero("identically zero denominator")
        if f.is_constant():
            scalar = scalar * f.constant_value() ** e
            continue
        s, m, core = f.normalized_factor()
        scalar = scalar * s ** e
        if m:
            for j, ex in enumerate(table.unpack(m)):
                if ex:
                    v = _single_var_factor(table, j)
                    factors[v] = factors.get(v, 0) + ex * e
        if not core.is_constant():
            factors[core] = factors.get(core, 0) + e
    if scalar != 1:
        num = num.scale(scalar.inverse())
    if not num.body:
        return Polynomial.zero(table), ()
    # cancel common factors by exact trial division
    out = []
    for f, e in factors.items():
        if len(f.body) == 1:
            # single variable factor: cancel against the monomial content
            (fk,) = f.body
            j = next(j for j, ex in enumerate(table.unpack(fk)) if ex)
            sh = table.shift(j)
            avail = min((k >> sh) & _MASK for k in num.body)
            c = min(avail, e)
            if c:
                num = Polynomial(table, {k - (c << sh): v for k, v in num.body.items()}, num.den, True)
                e -= c
        else:
            while e:
                q = num.exact_div(f)
                if q is None:
                    break
                num = q
                e -= 1
        if e:
            out.append((f, e))
    out.sort(key=lambda fe: _factor_sort_key(fe[0]))
    return num, tuple(out)


def numeric_assignment(table: VarTable, point) -> list:
    """Complete numeric values for every variable of ``table``.

    ``point`` is a mapping from base variable names (``z0``..., or real names)
    to numbers, or a sequence of values for the holomorphic/real variables in
    order.  Antiholomorphic values are conjugates; auxiliaries come from their
    definitions unless given explicitly.
    """
    if not isinstance(point, Mapping):
        base = [nm for nm, k in zip(table.names, table.kinds) if k in ("z", "real")]
        point = dict(zip(base, point))
    values: list = [None] * table.nvars
    for j, (nm, kind) in enumerate(zip(table.names, table.kinds)):
        if nm in point:
            values[j] = complex(point[nm])
    for j, (nm, kind) in enumerate(zip(table.names, table.kinds)):
        if kind == "zb":
            src = values[table.conj_index[j]]
            if src is None:
                continue
            if nm in point and abs(values[j] - src.conjugate()) > 1e-12 * max(1.0, abs(src)):
                raise ValueError(f"{nm} must be the conjugate of {table.names[table.conj_index[j]]}")
            values[j] = src.conjugate()
    for j, (nm, kind) in enumerate(zip(table.names, table.kinds)):
        if kind == "aux" and values[j] is None:
            d = table.aux_definition(nm)
            if d is None:
                continue
            try:
                values[j] = d.evaluate(values)
            except TypeError:
                continue
    return values


def format_ratfun(r: RatFun) -> str:
    ns = format_polynomial(r.num)
    if not r.den:
        return ns
    parts = []
    for f, e in r.den:
        fs = format_polynomial(f)
        if len(f.body) > 1:
            fs = f"({fs})"
        parts.append(fs if e == 1 else f"{fs}^{e}")
    ds = "*".join(parts)
    if len(r.den) > 1 or r.den[0][1] > 1:
        ds = f"({ds})"
    return f"({ns})/{ds}"


# ---------------------------------------------------------------------------
# expression parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+/\d+i|\d+i?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos} in {text!r}")
        pos = m.end()
        if m.group("num") is not None:
            toks.append(("num", m.group("num"), m.start("num")))
        elif m.group("name") is not None:
            toks.append(("name", m.group("name"), m.start("name")))
        else:
            toks.append(("op", m.group("op"), m.start("op")))
    return toks


class _Node:
    """Parser value: a rational function plus, when it is a product of
    polynomial powers, that factorization (so printed denominators round-trip)."""

    __slots__ = ("rf", "factors")

    def __init__(self, rf: RatFun, factors=None):
        self.rf = rf
        self.factors = factors


class _Parser:
    def __init__(self, text: str, table: VarTable):
        self.text = text
        self.table = table
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg):
        raise ParseError(f"{msg} at position {self.peek()[2]} in {self.text!r}")

    def parse(self) -> RatFun:
        if not self.toks:
            raise ParseError("empty expression")
        node = self.expr()
        if self.i != len(self.toks):
            self.fail("unexpected token")
        return node.rf

    def expr(self) -> _Node:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = _Node(node.rf + rhs.rf if op == "+" else node.rf - rhs.rf)
        return node

    def term(self) -> _Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                fac = None
                if node.factors is not None and rhs.factors is not None:
                    fac = node.factors + rhs.factors
                node = _Node(node.rf * rhs.rf, fac)
            else:
                if rhs.rf.is_zero():
                    raise ParseError(f"division by zero in {self.text!r}")
                if rhs.factors is not None:
                    num = node.rf.num
                    den = list(node.rf.den) + list(rhs.factors)
                    node = _Node(RatFun(num, den))
                else:
                    node = _Node(node.rf / rhs.rf)
        return node

    def unary(self) -> _Node:
        if self.peek()[1] == "-":
            self.take()
            n = self.unary()
            return _Node(-n.rf)
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> _Node:
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind == "num" and "/" in val:
                # "z^2/3i" tokenizes the exponent together with a literal
                val, _, rest = val.partition("/")
                self.toks[self.i:self.i] = [("op", "/", pos + len(val)), ("num", rest, pos + len(val) + 1)]
            if kind != "num" or not val.isdigit():
                self.fail("exponent must be a non-negative integer")
            k = int(val)
            fac = [(f, e * k) for f, e in node.factors] if node.factors is not None else None
            node = _Node(node.rf ** k, fac)
        return node

    def atom(self) -> _Node:
        kind, val, pos = self.take()
        t = self.table
        if kind == "num":
            imag = val.endswith("i")
            body = val[:-1] if imag else val
            num, _, den = body.partition("/")
            if den and int(den) == 0:
                raise ParseError(f"zero denominator at position {pos} in {self.text!r}")
            q = Fraction(int(num), int(den) if den else 1)
            c = GaussianRational(0, q) if imag else GaussianRational(q)
            return _Node(RatFun.const(t, c), None)
        if kind == "name":
            if val == "i":
                return _Node(RatFun.const(t, GaussianRational(0, 1)))
            if val not in t.names:
                raise ParseError(f"unknown variable {val!r} at position {pos} in {self.text!r}")
            p = Polynomial.var(t, val)
            return _Node(RatFun.from_poly(p), [(p, 1)])
        if val == "(":
            node = self.expr()
            if self.take()[1] != ")":
                raise ParseError(f"missing ')' in {self.text!r}")
            if node.factors is None and node.rf.is_polynomial() and not node.rf.is_zero():
                node = _Node(node.rf, [(node.rf.num, 1)])
            return node
        self.i -= 1
        self.fail("unexpected token")
        raise AssertionError  # pragma: no cover


def parse_expr(text: str, table: VarTable) -> RatFun:
    """Parse ``+ - * / ^`` expressions over the variables of ``table``.

    Number literals are ``p`` or ``p/q`` optionally followed by ``i``
    (``1/2i`` is one half times i); ``i`` alone is the imaginary unit.
    """
    if not isinstance(text, str):
        raise ParseError(f"expression must be a string, got {type(text).__name__}")
    return _Parser(text, table).parse()
