"""Exact symbolic engine for generalized complex geometry and its reduction.

Subpackages by layer:

* :mod:`genred.scalars`, :mod:`genred.poly` — Gaussian rationals, sparse
  polynomials and rational functions;
* :mod:`genred.forms` — differential forms, generalized fields, the twisted
  Courant bracket, Clifford action and Mukai pairing;
* :mod:`genred.linalg` — exact linear algebra on ``V ⊕ V*``: Dirac and
  generalized complex structures and their reduction;
* :mod:`genred.actions` — Courant algebras, extended actions, moment maps and
  reduced distributions;
* :mod:`genred.quotient` — the circle quotient of ``ℂ³`` at the spinor level and
  the two generalized Kähler structures on ``ℂP²``;
* :mod:`genred.cli` — the ``genred`` command.
"""

from .errors import *  # noqa: F401,F403
from .forms import (
    D_of,
    Form,
    GeneralizedField,
    TwistForm,
    clifford,
    courant_bracket,
    expand_aux,
    ext_d,
    form_exp,
    interior,
    lie_derivative,
    mukai,
    pairing,
    verify_axioms,
    wedge,
)
from .kernels import BACKEND
from .poly import Polynomial, RatFun, VarTable, parse_expr
from .scalars import GaussianRational, QiLambda, parse_scalar

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "D_of",
    "Form",
    "GaussianRational",
    "GeneralizedField",
    "Polynomial",
    "QiLambda",
    "RatFun",
    "TwistForm",
    "VarTable",
    "clifford",
    "courant_bracket",
    "expand_aux",
    "ext_d",
    "form_exp",
    "interior",
    "lie_derivative",
    "mukai",
    "pairing",
    "parse_expr",
    "parse_scalar",
    "verify_axioms",
    "wedge",
]
