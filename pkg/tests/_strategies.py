"""Hypothesis strategies built on the package's seeded samplers.

Each strategy draws an integer seed and feeds it to :mod:`genred.sampling`,
so hypothesis controls (and can replay) every random object.
"""

import random

from hypothesis import strategies as st

from genred.poly import VarTable
from genred.sampling import random_field, random_form, random_poly

seeds = st.integers(min_value=0, max_value=2**32 - 1)

COMPLEX2 = VarTable.complex(2)
REAL3 = VarTable.real(["x1", "x2", "x3"])
REAL4 = VarTable.real(["x1", "x2", "x3", "x4"])


def rngs():
    return seeds.map(random.Random)


def polys(table, **kw):
    return rngs().map(lambda r: random_poly(r, table, **kw))


def ratfuns(table, complex_ok=True):
    """Quotients of random polynomials with a nonzero denominator."""

    def build(r):
        num = random_poly(r, table, complex_ok=complex_ok)
        while True:
            den = random_poly(r, table, degree=1, terms=2, complex_ok=complex_ok)
            if not den.is_zero():
                return num / den

    return rngs().map(build)


def forms(table, k, **kw):
    return rngs().map(lambda r: random_form(r, table, k, **kw))


def fields(table, **kw):
    return rngs().map(lambda r: random_field(r, table, **kw))
