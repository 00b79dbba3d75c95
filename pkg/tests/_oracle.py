"""Independent sympy model of the exterior algebra, used only as a test oracle.

Forms are dicts ``{tuple of generator names (sorted by table order): sympy expr}``;
nothing here calls the engine's algebra, only its data accessors.
"""

import sympy as sp

from genred.forms import Form
from genred.poly import Polynomial, RatFun


class Grassmann:
    def __init__(self, table):
        self.table = table
        self.syms = {nm: sp.Symbol(nm) for nm in table.names}
        self.gens = ["d" + nm for nm in table.names]

    # conversion ------------------------------------------------------------
    def poly(self, p: Polynomial):
        out = sp.Integer(0)
        for exps, c in p.terms():
            term = sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)
            for nm, e in zip(self.table.names, exps):
                term *= self.syms[nm] ** e
            out += term
        return out

    def ratfun(self, r: RatFun):
        den = sp.Integer(1)
        for f, e in r.den:
            den *= self.poly(f) ** e
        return self.poly(r.num) / den

    def form(self, a: Form) -> dict:
        out = {}
        for mask, c in a.terms.items():
            out[tuple(a.monomial_names(mask))] = self.ratfun(c)
        return out

    # algebra ----------------------------------------------------------------
    def canon(self, mono):
        idx = [self.gens.index(g) for g in mono]
        if len(set(idx)) < len(idx):
            return None, 0
        s = 1
        a = idx[:]
        for i in range(len(a)):
            for j in range(len(a) - 1 - i):
                if a[j] > a[j + 1]:
                    a[j], a[j + 1] = a[j + 1], a[j]
                    s = -s
        return tuple(self.gens[k] for k in a), s

    @staticmethod
    def clean(d):
        return {k: v for k, v in ((k, sp.simplify(v)) for k, v in d.items()) if v != 0}

    def add(self, *forms):
        out = {}
        for f in forms:
            for m, c in f.items():
                out[m] = out.get(m, 0) + c
        return self.clean(out)

    def scale(self, c, a):
        return self.clean({m: c * v for m, v in a.items()})

    def wedge(self, a, b):
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m, s = self.canon(m1 + m2)
                if m is not None:
                    out[m] = out.get(m, 0) + s * c1 * c2
        return self.clean(out)

    def interior(self, X, a):
        """``X`` maps variable names to sympy coefficients of ``∂/∂name``."""
        out = {}
        for m, c in a.items():
            for p, g in enumerate(m):
                if g[1:] in X:
                    key = m[:p] + m[p + 1:]
                    out[key] = out.get(key, 0) + (-1) ** p * X[g[1:]] * c
        return self.clean(out)

    def d(self, a):
        out = {}
        for m, c in a.items():
            for nm, s in self.syms.items():
                dc = sp.diff(c, s)
                if dc != 0:
                    mm, sign = self.canon(("d" + nm,) + m)
                    if mm is not None:
                        out[mm] = out.get(mm, 0) + sign * dc
        return self.clean(out)

    def top(self, a, k):
        return {m: c for m, c in a.items() if len(m) == k}

    def sigma(self, a):
        return {m: c * (-1) ** (len(m) * (len(m) - 1) // 2) for m, c in a.items()}

    def equal(self, a, b) -> bool:
        return not self.add(a, self.scale(-1, b))


# ---------------------------------------------------------------------------
# linear algebra on V ⊕ V* with sympy matrices
# ---------------------------------------------------------------------------


def to_sympy(x):
    """GaussianRational / QiLambda-free scalar → sympy number."""
    if hasattr(x, "re") and hasattr(x, "im"):
        return sp.Rational(x.re.numerator, x.re.denominator) + sp.I * sp.Rational(x.im.numerator, x.im.denominator)
    return sp.nsimplify(x)


def mat(rows, ncols):
    if not rows:
        return sp.zeros(0, ncols)
    return sp.Matrix([[to_sympy(x) for x in r] for r in rows])


def split_gram(n):
    G = sp.zeros(2 * n, 2 * n)
    for i in range(n):
        G[i, n + i] = G[n + i, i] = sp.Rational(1, 2)
    return G


def rank(M):
    return M.rank() if M.rows else 0


def basis(M):
    """Row basis of the row space of ``M``."""
    if not M.rows:
        return M
    R, piv = M.rref()
    return R[: len(piv), :]


def stack(A, B):
    if not A.rows:
        return B
    if not B.rows:
        return A
    return A.col_join(B)


def same_span(A, B):
    return rank(A) == rank(B) == rank(stack(A, B))


def perp(A, n):
    if not A.rows:
        return sp.eye(2 * n)
    ns = (A * split_gram(n)).nullspace()
    return sp.Matrix.vstack(*[v.T for v in ns]) if ns else sp.zeros(0, 2 * n)


def intersect(A, B, dim):
    if not A.rows or not B.rows:
        return sp.zeros(0, dim)
    A, B = basis(A), basis(B)
    M = A.T.row_join(-B.T)
    ns = M.nullspace()
    vecs = [(A.T * v[: A.rows, :]).T for v in ns]
    return basis(sp.Matrix.vstack(*vecs)) if vecs else sp.zeros(0, dim)


def cotangent(n):
    return sp.zeros(n, n).row_join(sp.eye(n))


def k_tilde(K, n):
    return intersect(K, stack(perp(K, n), cotangent(n)), 2 * n)


def compose_dirac(D, K, n):
    """The relation composite ``(D ∩ K̃^⊥) + K̃`` as a subspace of ``V ⊕ V*``."""
    Kt = k_tilde(K, n)
    return stack(intersect(D, perp(Kt, n), 2 * n), Kt), Kt
