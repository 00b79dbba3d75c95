"""Seeded random polynomials, forms and generalized fields for randomized checks."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .forms import Form, GeneralizedField, ext_d
from .poly import Polynomial, RatFun, VarTable
from .scalars import GaussianRational

__all__ = ["random_scalar", "random_poly", "random_form", "random_field", "random_closed_3form", "random_point"]


def random_scalar(rng: random.Random, complex_ok: bool = False, bound: int = 3) -> GaussianRational:
    re = Fraction(rng.randint(-bound, bound), rng.randint(1, 2))
    im = Fraction(rng.randint(-bound, bound), rng.randint(1, 2)) if complex_ok else 0
    return GaussianRational(re, im)


def random_poly(rng: random.Random, table: VarTable, degree: int = 2, terms: int = 3, complex_ok: bool = False) -> RatFun:
    names = table.base_names()
    out = Polynomial.zero(table)
    for _ in range(terms):
        mono = Polynomial.const(table, random_scalar(rng, complex_ok))
        for _ in range(rng.randint(0, degree)):
            mono = mono * Polynomial.var(table, rng.choice(names))
        out = out + mono
    return RatFun.from_poly(out)


def random_form(rng: random.Random, table: VarTable, k: int, density: float = 0.5, **kw) -> Form:
    """Random ``k``-form; each monomial appears with probability ``density``."""
    gens = ["d" + nm for nm in table.base_names()]
    items = []
    for mono in combinations(gens, k):
        if rng.random() < density:
            items.append((random_poly(rng, table, **kw), list(mono)))
    return Form.from_terms(table, items)


def random_field(rng: random.Random, table: VarTable, **kw) -> GeneralizedField:
    vec = {nm: random_poly(rng, table, **kw) for nm in table.base_names() if rng.random() < 0.7}
    return GeneralizedField(table, vec, random_form(rng, table, 1, 0.7, **kw))


def random_closed_3form(rng: random.Random, table: VarTable, nonzero: bool = True, **kw) -> Form:
    """``dB`` for a random 2-form ``B`` (closed by construction); resampled until nonzero."""
    while True:
        H = ext_d(random_form(rng, table, 2, **kw))
        if H or not nonzero:
            return H


def random_point(rng: random.Random, n: int, complex_ok: bool = True, bound: int = 4) -> list:
    return [random_scalar(rng, complex_ok, bound) for _ in range(n)]
