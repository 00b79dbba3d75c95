"""Named fixtures and the small JSON language used to write displayed formulas.

A display is one of

* ``{"terms": {"dz0 dz1": "expr", ...}, "cyclic": bool}`` — a sum of
  monomials; with ``cyclic`` the cyclic permutations ``0→1→2→0`` of every
  index are added (variables, differentials and coefficients alike);
* ``{"sum": [display, ...]}``, ``{"wedge": [display, ...]}``;
* ``{"exp": display}``, ``{"d": display}``;
* ``{"scale": "expr", "of": display}``.

Fixtures live in the package's ``fixtures`` directory and are referenced by
file stem, e.g. ``type_change_down``.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .errors import ParseError
from .forms import Form, ext_d, form_exp, wedge
from .linalg import (
    J_complex,
    J_symplectic,
    LinearGCS,
    SplitSpace,
    Subspace,
    b_transform_gcs,
    get_field,
)
from .poly import VarTable, parse_expr
from .scalars import parse_scalar

__all__ = [
    "FIXTURE_DIR",
    "list_fixtures",
    "load_fixture",
    "load_json_text",
    "display_form",
    "cyclic_shift",
    "gcs_from_spec",
    "subspace_from_spec",
    "matrix_from_spec",
]

FIXTURE_DIR = Path(__file__).with_name("fixtures")
_INDEX = re.compile(r"(dzb|dz|zb|z)(\d+)")


def list_fixtures() -> list:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


def load_json_text(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_fixture(name: str):
    """Load a fixture by stem (``type_change_down``) or by path."""
    p = Path(name)
    if not p.suffix:
        p = FIXTURE_DIR / f"{name}.json"
    if not p.is_file():
        raise ParseError(f"no fixture or file named {name!r}; known fixtures: {', '.join(list_fixtures())}")
    return load_json_text(p.read_text(), str(p))


def cyclic_shift(text: str, k: int, n: int = 3) -> str:
    """Shift every index of ``z``, ``zb``, ``dz``, ``dzb`` by ``k`` modulo ``n``."""
    return _INDEX.sub(lambda m: m.group(1) + str((int(m.group(2)) + k) % n), text)


def display_form(spec, table: VarTable) -> Form:
    if not isinstance(spec, dict):
        raise ParseError("display must be a JSON object")
    if "terms" in spec:
        terms = spec["terms"]
        if not isinstance(terms, dict):
            raise ParseError("display 'terms' must map monomials to coefficients")
        shifts = range(table.n) if spec.get("cyclic") else [0]
        items = []
        for k in shifts:
            for mono, coeff in terms.items():
                items.append((parse_expr(cyclic_shift(str(coeff), k, table.n), table), cyclic_shift(mono, k, table.n).split()))
        return Form.from_terms(table, items)
    if "sum" in spec:
        out = Form.zero(table)
        for s in spec["sum"]:
            out = out + display_form(s, table)
        return out
    if "wedge" in spec:
        parts = [display_form(s, table) for s in spec["wedge"]]
        out = Form.scalar(table, 1)
        for p in parts:
            out = wedge(out, p)
        return out
    if "exp" in spec:
        return form_exp(display_form(spec["exp"], table))
    if "d" in spec:
        return ext_d(display_form(spec["d"], table))
    if "scale" in spec:
        return display_form(spec["of"], table).scale(parse_expr(str(spec["scale"]), table))
    raise ParseError(f"unknown display node with keys {sorted(spec)}")


def matrix_from_spec(rows, field=None) -> list:
    f = get_field(field)
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("matrix must be a list of rows")
    if rows and len({len(r) for r in rows}) != 1:
        raise ParseError("matrix rows must have equal length")
    return [[f.coerce(parse_scalar(str(x))) for x in r] for r in rows]


def subspace_from_spec(spec, field=None) -> Subspace:
    """``{"ambient_n": n, "rows": [[...], ...]}`` in the basis ``(e_1..e_n, e^1..e^n)``."""
    if not isinstance(spec, dict):
        raise ParseError("subspace must be a JSON object")
    return Subspace.from_json(spec, get_field(field))


def gcs_from_spec(spec, field=None) -> LinearGCS:
    """Linear generalized complex structure from JSON.

    ``{"kind": "symplectic", "omega": W}`` with ``W[a][b] = ω(e_a, e_b)``;
    ``{"kind": "complex", "I": I}`` with ``I`` acting on column vectors;
    ``{"kind": "matrix", "J": J}``.  An optional ``"B"`` applies a B-transform.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ParseError("structure must be an object with a 'kind'")
    f = get_field(field)
    kind = spec["kind"]
    if kind == "symplectic":
        J = J_symplectic(matrix_from_spec(spec["omega"], f), f)
    elif kind == "complex":
        J = J_complex(matrix_from_spec(spec["I"], f), f)
    elif kind == "matrix":
        M = matrix_from_spec(spec["J"], f)
        J = LinearGCS(M, SplitSpace(len(M) // 2, f))
    else:
        raise ParseError(f"unknown structure kind {kind!r}")
    if "B" in spec:
        J = b_transform_gcs(J, matrix_from_spec(spec["B"], f))
    return J
