"""The ``genred`` command: JSON in, verdict reports and CSV out.

Every verb builds a report ``{"command", "options", "verdicts", "results",
"checksum", "timing"}``.  ``checksum`` is the SHA-256 of the canonical JSON
of everything before it, so repeated runs can be compared while ``timing``
(the only non-deterministic part) stays outside.

Exit status: 0 when every verdict passes, 1 when any fails, 2 on input or
I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import actions as act
from . import linalg as la
from . import quotient as qt
from .catalog import display_form, gcs_from_spec, load_fixture, load_json_text, subspace_from_spec
from .errors import GenredError, InputError, ParseError, PointOnLocus
from .forms import (
    Form,
    GeneralizedField,
    courant_bracket,
    expand_aux,
    ext_d,
    lie_bracket,
    mukai,
    pairing,
    verify_axioms,
)
from .poly import VarTable, parse_expr
from .sampling import random_closed_3form, random_field, random_poly
from .scalars import GaussianRational, QiLambda, parse_scalar

__all__ = ["main", "run", "build_parser", "VERBS", "CP2_STAGES"]

CP2_STAGES = ("build", "contract", "projectivize", "affine", "closedness", "mukai", "typemap", "gk")
_CP2_EXAMPLES = {"triple-line": "triple_line", "triangle": "triangle"}


class Report:
    """Ordered verdicts plus free-form results; verdicts are never dropped."""

    def __init__(self, command: str, options: dict):
        self.command = command
        self.options = options
        self.verdicts: list = []
        self.results: dict = {}
        self.timing: dict = {}
        self.tables: dict = {}

    def verdict(self, name: str, ok: bool, detail=None) -> bool:
        self.verdicts.append({"name": name, "ok": bool(ok), "detail": detail})
        return bool(ok)

    def failed(self, name: str, exc: Exception) -> None:
        self.verdict(name, False, f"{type(exc).__name__}: {exc}")

    @property
    def ok(self) -> bool:
        return all(v["ok"] for v in self.verdicts)

    def body(self) -> dict:
        return {"command": self.command, "options": self.options, "verdicts": self.verdicts, "results": self.results}

    def to_json(self) -> dict:
        body = self.body()
        canon = json.dumps(body, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
        body["checksum"] = hashlib.sha256(canon.encode()).hexdigest()
        body["timing"] = {k: round(v, 6) for k, v in self.timing.items()}
        return body


def _progress(msg: str) -> None:
    print(f"[genred] {msg}", file=sys.stderr, flush=True)


class _Timer:
    def __init__(self, report: Report, name: str):
        self.report, self.name = report, name

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.report.timing[self.name] = self.report.timing.get(self.name, 0.0) + time.perf_counter() - self.t0
        return False


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------


def _read_input(spec: str | None, required: bool = True):
    if spec is None:
        if required:
            raise ParseError("this command needs --input (a file, a fixture name, or '-' for stdin)")
        return None
    if spec == "-":
        return load_json_text(sys.stdin.read(), "<stdin>")
    p = Path(spec)
    if p.is_file():
        return load_json_text(p.read_text(), str(p))
    return load_fixture(spec)


def _need(data: dict, key: str):
    if not isinstance(data, dict):
        raise ParseError("input must be a JSON object")
    if key not in data:
        raise ParseError(f"input is missing field {key!r}")
    return data[key]


def _table(data: dict) -> VarTable:
    return VarTable.from_json(_need(data, "vars"))


def _form(spec, table: VarTable, where: str = "form") -> Form:
    """A form given as Form JSON (``terms`` list), a display node, or ``{"dz0 dz1": "coeff"}``."""
    if isinstance(spec, str):
        return Form.parse(table, {spec: "1"}) if spec.strip() else Form.scalar(table, 1)
    if not isinstance(spec, dict):
        raise ParseError(f"{where} must be a JSON object")
    if isinstance(spec.get("terms"), list):
        return Form.from_json(spec, table)
    if any(k in spec for k in ("terms", "sum", "wedge", "exp", "d", "scale")):
        return display_form(spec, table)
    return Form.parse(table, {k: str(v) for k, v in spec.items()})


def _field(spec, table: VarTable, where: str = "field") -> GeneralizedField:
    """``{"vec": {"x1": "expr"} or {"dx1-dual": "expr"}, "cov": form}``."""
    if not isinstance(spec, dict):
        raise ParseError(f"{where} must be a JSON object")
    vec = {}
    for key, val in (spec.get("vec") or {}).items():
        nm = key[1:-5] if key.startswith("d") and key.endswith("-dual") else key
        if nm not in table.names:
            raise ParseError(f"{where}: unknown vector component {key!r}")
        vec[nm] = parse_expr(str(val), table)
    cov = _form(spec["cov"], table, f"{where}.cov") if spec.get("cov") is not None else None
    return GeneralizedField(table, vec, cov)


def _scalar_list(seq, where: str) -> list:
    if not isinstance(seq, list):
        raise ParseError(f"{where} must be a list")
    return [parse_scalar(str(x)) for x in seq]


_LAMBDA = re.compile(r"^(?:(?P<c>[^*]+)\*)?lambda(?:\^(?P<k>[12]))?$")


def parse_point_coordinate(text: str):
    """A Gaussian rational or ``[c*]lambda[^2]`` with λ a primitive cube root of unity."""
    t = str(text).replace(" ", "")
    m = _LAMBDA.match(t)
    if m is None:
        return parse_scalar(t)
    val = QiLambda.lam() ** int(m.group("k") or 1)
    if m.group("c"):
        val = val * parse_scalar(m.group("c"))
    return val


def _field_mode(args):
    if args.tolerance is not None:
        if args.exact:
            raise ParseError("--tolerance selects float mode and cannot be combined with --exact")
        if not args.tolerance > 0:
            raise ParseError("--tolerance must be positive")
        return la.Field(False, args.tolerance)
    return la.EXACT


def _exact_only(args, verb: str):
    if args.tolerance is not None:
        raise ParseError(f"{verb} is exact-only; --tolerance is not accepted")


def _fmt_matrix(M, field) -> list:
    if field.exact:
        return [[str(x) for x in r] for r in M]
    return [[repr(complex(x)) for x in r] for r in M]


def _sub_json(W: la.Subspace) -> dict:
    return W.to_json()


def _threads() -> int:
    try:
        n = int(os.environ.get("GENRED_NUM_THREADS", "1"))
    except ValueError:
        raise ParseError("GENRED_NUM_THREADS must be an integer") from None
    return max(1, n)


def _chunks(items: list, k: int) -> list:
    size = max(1, -(-len(items) // k))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _pmap(fn, chunks: list) -> list:
    """Ordered map over chunks, in worker processes when GENRED_NUM_THREADS > 1."""
    n = min(_threads(), len(chunks))
    if n <= 1:
        return [fn(c) for c in chunks]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, chunks))


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------


def cmd_verify_axioms(args, rep: Report):
    _exact_only(args, "verify-axioms")
    data = _read_input(args.input, required=False)
    names = ("C1", "C2", "C3", "C4", "C5")
    if data is not None:
        t = _table(data)
        secs = [_field(s, t, f"sections[{i}]") for i, s in enumerate(_need(data, "sections"))]
        if len(secs) < 3:
            raise ParseError("verify-axioms needs at least three sections")
        H = _form(data["H"], t, "H") if data.get("H") is not None else None
        f = parse_expr(str(data["f"]), t) if data.get("f") is not None else None
        if H is not None:
            rep.verdict("H_closed", ext_d(H).is_zero())
        with _Timer(rep, "axioms"):
            res = verify_axioms(secs, H, f)
        for k in names:
            ok, r = res[k]
            rep.verdict(k, ok)
            if not ok:
                rep.results.setdefault("residuals", {})[k] = r.to_json() if hasattr(r, "to_json") else str(r)
        return
    rng = random.Random(args.seed)
    t = VarTable.real(["x1", "x2", "x3", "x4"])
    fails = {k: 0 for k in names}
    first = {}
    with _Timer(rep, "axioms"):
        for trial in range(args.trials):
            H = random_closed_3form(rng, t, degree=2, terms=2)
            secs = [random_field(rng, t, degree=2, terms=2) for _ in range(3)]
            f = random_poly(rng, t, degree=2, terms=2)
            res = verify_axioms(secs, H, f)
            for k in names:
                if not res[k][0]:
                    fails[k] += 1
                    first.setdefault(k, trial)
            if (trial + 1) % 100 == 0:
                _progress(f"verify-axioms: {trial + 1}/{args.trials} trials")
    for k in names:
        rep.verdict(k, fails[k] == 0, f"{args.trials - fails[k]}/{args.trials} trials passed")
    rep.results = {"seed": args.seed, "trials": args.trials, "vars": t.to_json(), "failures": fails, "first_failure": first}


def cmd_bracket(args, rep: Report):
    _exact_only(args, "bracket")
    data = _read_input(args.input)
    t = _table(data)
    a = _field(_need(data, "a"), t, "a")
    b = _field(_need(data, "b"), t, "b")
    H = _form(data["H"], t, "H") if data.get("H") is not None else None
    if H is not None:
        rep.verdict("H_closed", ext_d(H).is_zero())
    br = courant_bracket(a, b, H)
    rep.results = {"bracket": br.to_json(), "pairing": str(pairing(a, b))}
    lb = GeneralizedField(t, lie_bracket(a, b), None, False)
    rep.verdict("anchor_is_morphism", (br.vector_part() - lb).is_zero())
    if data.get("expected") is not None:
        rep.verdict("matches_expected", (br - _field(data["expected"], t, "expected")).is_zero())


def cmd_mukai(args, rep: Report):
    _exact_only(args, "mukai")
    data = _read_input(args.input)
    t = _table(data)
    phi = expand_aux(_form(_need(data, "phi"), t, "phi"))
    psi = expand_aux(_form(data["psi"], t, "psi")) if data.get("psi") is not None else phi.conj()
    m = mukai(phi, psi)
    rep.results = {"mukai": m.to_json()}
    if data.get("expected") is not None:
        exp = expand_aux(_form(data["expected"], t, "expected"))
        rep.verdict("matches_expected", (m - exp).is_zero())


def cmd_reduce_linear(args, rep: Report):
    field = _field_mode(args)
    data = _read_input(args.input)
    K = subspace_from_spec(_need(data, "K"), field)
    Kp = la.perp(K)
    KK = la.intersect(K, Kp)
    Kt = la.k_tilde(K)
    exact = la.exactness_check(K)
    reduced_rank = Kp.rank - KK.rank
    rep.results = {
        "K": _sub_json(K),
        "K_isotropy": la.isotropy_check(K),
        "K_perp": _sub_json(Kp),
        "K_tilde": _sub_json(Kt),
        "exact": exact,
        "reduced_rank": reduced_rank,
        "reduced_rank_parity": "even" if reduced_rank % 2 == 0 else "odd",
    }
    if data.get("D") is not None:
        D = subspace_from_spec(data["D"], field)
        try:
            Dr = la.reduce_dirac(D, K)
        except GenredError as exc:
            rep.failed("reducible", exc)
        else:
            rep.verdict("reducible", True)
            iso = la.isotropy_check(Dr)
            rep.results["D_red"] = {"dim": Dr.ambient.dim, "rows": _sub_json(Dr)["rows"], "isotropy": iso}
            rep.verdict("D_red_maximal_isotropic", iso == "maximal_isotropic")
    _expectations(rep, data.get("expected"), rep.results)


def _expectations(rep: Report, expected, actual: dict, field=la.EXACT):
    if expected is None:
        return
    if not isinstance(expected, dict):
        raise ParseError("'expected' must be a JSON object")
    for key, want in expected.items():
        if key not in actual:
            raise ParseError(f"unknown expectation {key!r}")
        got = actual[key]
        if isinstance(want, dict) and "rows" in want:
            ok = isinstance(got, dict) and subspace_from_spec(want, field) == subspace_from_spec(got, field)
        else:
            ok = got == want
        rep.verdict(f"expected_{key}", ok, None if ok else f"got {got!r}")


def cmd_reduce_gcs(args, rep: Report):
    field = _field_mode(args)
    data = _read_input(args.input)
    J = gcs_from_spec(_need(data, "J"), field)
    K = subspace_from_spec(_need(data, "K"), field)
    chk = la.gcs_check(J)
    rep.verdict("input_is_gcs", chk.maximal_isotropic and chk.real_index_zero)
    L = chk.L
    LK = la.intersect(L, la.perp(K))
    LKK = la.intersect(LK, K)
    actual = {
        "input_type": chk.type,
        "L_cap_Kperp": _sub_json(LK),
        "L_cap_Kperp_cap_K_zero": LKK.is_zero(),
    }
    try:
        red = la.gcs_reduce(J, K)
    except GenredError as exc:
        rep.failed("reducible", exc)
        rep.results = actual
        _expectations(rep, data.get("expected"), actual, field)
        return
    rep.verdict("reducible", True)
    rchk = la.gcs_check(red.J)
    rep.verdict("reduced_is_gcs", rchk.maximal_isotropic and rchk.real_index_zero)
    actual.update({
        "condition": red.condition,
        "type": red.type,
        "reduced_dim": red.presentation.dim,
        "reduced_J": _fmt_matrix(red.J.J, field),
        "summary": f"reduced type {red.type}",
    })
    rep.results = actual
    _progress(actual["summary"])
    _expectations(rep, data.get("expected"), actual, field)


def cmd_gk_check(args, rep: Report):
    field = _field_mode(args)
    data = _read_input(args.input)
    if isinstance(data, dict) and "example" in data:
        which = _CP2_EXAMPLES.get(data["example"], data["example"])
        if which not in qt.EXAMPLES:
            raise ParseError(f"unknown example {data['example']!r}")
        pt = [parse_point_coordinate(c) for c in _need(data, "point")]
        try:
            res = qt.gk_assemble(which, pt, field)
        except PointOnLocus as exc:
            rep.failed("off_locus", exc)
            return
        rep.verdict("commute", res["commute"])
        rep.verdict("positive", res["positive"])
        if res["routes_agree"] is not None:
            rep.verdict("routes_agree", res["routes_agree"])
        rep.results = res
        return
    J1 = gcs_from_spec(_need(data, "J1"), field)
    J2 = gcs_from_spec(_need(data, "J2"), field)
    r = la.gk_check(J1, J2)
    rep.verdict("commute", r.commute)
    rep.verdict("positive", r.positive)
    rep.results = {"G": _fmt_matrix(r.G, field), "minors": [str(m) for m in r.minors]}
    if r.commute:
        bh = la.bihermitian_blocks(J1, J2)
        rep.results.update({"g": _fmt_matrix(bh.g, field), "b": _fmt_matrix(bh.b, field)})


def _action(data) -> act.ExtendedAction:
    """``{"vars", "algebra", "rho", "H"?, "moment"?}`` or ``{"symplectic": {"vars", "omega", "psi", "g"?}}``.

    Fields and forms accept the same shorthand as every other verb.
    """
    if isinstance(data, dict) and "symplectic" in data:
        s = data["symplectic"]
        t = _table(s)
        omega = _form(_need(s, "omega"), t, "omega")
        psi = [_field(p, t, f"psi[{i}]") for i, p in enumerate(_need(s, "psi"))]
        g = act.LieAlgebraData.from_json(s["g"]) if s.get("g") is not None else None
        A = act.symplectic_extension(omega, psi, g)
        if data.get("moment") is not None:
            A.moment = [parse_expr(str(m), t) for m in data["moment"]]
        return A
    t = _table(data)
    alg = act.CourantAlgebraData.from_json(_need(data, "algebra"))
    rho = _need(data, "rho")
    if not isinstance(rho, list):
        raise ParseError("rho must be a list of generalized fields")
    fields = [_field(r, t, f"rho[{i}]") for i, r in enumerate(rho)]
    H = _form(data["H"], t, "H") if data.get("H") is not None else None
    moment = [parse_expr(str(m), t) for m in data["moment"]] if data.get("moment") is not None else None
    return act.ExtendedAction(alg, fields, H, moment)


def _verdict_json(v: act.Verdict) -> dict:
    return v.to_json()


def cmd_action_check(args, rep: Report):
    _exact_only(args, "action-check")
    data = _read_input(args.input)
    A = _action(data)
    res = act.check_extended_action(A)
    for name in ("morphism", "closed_h", "invariant_splitting", "equivariance"):
        rep.verdict(name, res[name].ok)
    rep.results = {name: _verdict_json(res[name]) for name in ("morphism", "closed_h", "invariant_splitting", "equivariance")}
    rep.results["assumptions"] = res["assumptions"]
    if data.get("points"):
        pts = [[parse_point_coordinate(c) for c in p] for p in data["points"]]
        dr = act.distribution_ranks(A, pts)
        agree = all(act.distributions(A, p).routes_agree for p in pts)
        rep.verdict("Delta_s_routes_agree", agree)
        rep.results["distributions"] = dr


def _elements(data, A) -> list:
    if data.get("elements") is None:
        return A.algebra.basis()
    return [_scalar_list(e, "elements[]") for e in data["elements"]]


def cmd_cartan(args, rep: Report):
    _exact_only(args, "cartan")
    data = _read_input(args.input)
    A = _action(data)
    Phi = act.EquivariantForm.from_action(A)
    els = _elements(data, A)
    vals = act.cartan_d(Phi, A, els)
    out = []
    for a, v in zip(els, vals):
        s = A.section(a)
        rhs = Form.scalar(A.table, -pairing(s, s))
        label = "[" + ",".join(str(x) for x in a) + "]"
        rep.verdict(f"cartan{label}", (v - rhs).is_zero())
        out.append({"element": [str(x) for x in a], "d_G_Phi": v.to_json(), "minus_pairing": str(-pairing(s, s)), "zero": v.is_zero()})
    rep.results = {"elements": out}


def cmd_moment_check(args, rep: Report):
    _exact_only(args, "moment-check")
    data = _read_input(args.input)
    A = _action(data)
    mu = A.moment if A.moment is not None else None
    if data.get("mu") is not None:
        mu = [parse_expr(str(m), A.table) for m in data["mu"]]
    if mu is None:
        raise ParseError("moment-check needs 'moment' (or 'mu') in the input")
    res = act.moment_check(A, mu)
    for name in ("d_mu", "equivariance"):
        rep.verdict(name, res[name].ok)
    rep.results = {name: _verdict_json(res[name]) for name in ("d_mu", "equivariance")}


def cmd_severa(args, rep: Report):
    _exact_only(args, "severa")
    data = _read_input(args.input)
    t = _table(data)
    h = _form(data.get("h") or {}, t, "h")
    forms = {k: [_form(x, t, f"{k}[{i}]") for i, x in enumerate(_need(data, k))] for k in ("theta", "F", "xi")}
    g = act.LieAlgebraData.from_json(data["g"]) if data.get("g") is not None else None
    P = [_scalar_list(r, "pairing[]") for r in data["pairing"]] if data.get("pairing") is not None else None
    try:
        res = act.severa_pushdown(h, forms["theta"], forms["F"], forms["xi"], g, P)
    except GenredError as exc:
        if isinstance(exc, InputError):
            raise
        rep.failed("connection_consistent", exc)
        return
    rep.verdict("connection_consistent", True)
    rep.verdict("closed", res.closed)
    rep.results = {"form": res.form.to_json(), "nonzero": not res.form.is_zero(), "scope": res.scope}
    if data.get("expected") is not None:
        rep.verdict("matches_expected", (res.form - _form(data["expected"], t, "expected")).is_zero())


# ---------------------------------------------------------------------------
# cp2
# ---------------------------------------------------------------------------


def _typemap_chunk(job):
    which, chart, points, exact, tol = job
    field = la.EXACT if exact else la.Field(False, tol)
    return qt.typemap(qt.example_chart(which, chart), points, chart, field)


def _gk_chunk(job):
    which, points, exact, tol = job
    field = la.EXACT if exact else la.Field(False, tol)
    return [qt.gk_assemble(which, p, field) for p in points]


def gk_sample_points(which: str, count: int = 20, seed: int = 0) -> list:
    """``count`` rational chart points in ``[−1,1]²`` (real and imaginary parts) off the locus and poles."""
    rng = random.Random(seed)
    pts = []
    table = VarTable.complex(3)
    phiA = qt.fubini_study_spinor(table)
    phiB = qt.example_chart(which, 0)
    while len(pts) < count:
        p = tuple(GaussianRational(Fraction(rng.randint(-4, 4), 4), Fraction(rng.randint(-4, 4), 4)) for _ in range(2))
        if p in pts:
            continue
        if qt.evaluate_chart_form(phiA, 0, p).rescaled or qt.evaluate_chart_form(phiB, 0, p).rescaled:
            continue
        pts.append(p)
    return pts


def cmd_cp2(args, rep: Report):
    which = _CP2_EXAMPLES[args.example]
    field = _field_mode(args)
    fixture = load_fixture(f"cp2_{which}")
    t = VarTable.from_json(fixture["vars"])
    disp = {k: display_form(v, t) for k, v in fixture["displays"].items()}
    stages = CP2_STAGES if args.check == "all" else (args.check,)
    grid_n = args.grid if args.grid is not None else 11
    chart = args.chart if args.chart is not None else 0
    if chart not in range(3):
        raise ParseError("--chart must be 0, 1 or 2")
    rep.results["example"] = which
    pipe = None

    def pipeline():
        nonlocal pipe
        if pipe is None:
            with _Timer(rep, "pipeline"):
                pipe = qt.example_pipeline(which)
        return pipe

    for stage in stages:
        _progress(f"cp2 {which}: {stage}")
        with _Timer(rep, stage):
            try:
                _CP2_HANDLERS[stage](which, pipeline, disp, rep, field, grid_n, chart, args)
            except GenredError as exc:
                if isinstance(exc, InputError):
                    raise
                rep.failed(f"{stage}", exc)


def _stage_build(which, pipeline, disp, rep, *rest):
    phi = pipeline()["phi"].rep
    for key in ("phi", "phi_expanded"):
        if key in disp:
            rep.verdict(f"build.{key}_matches_display", (phi - disp[key]).is_zero())
    if "dphi" in disp:
        rep.verdict("build.dphi_matches_display", (ext_d(phi) - disp["dphi"]).is_zero())


def _stage_contract(which, pipeline, disp, rep, *rest):
    p = pipeline()
    rep.verdict("contract.matches_display", (p["phi_theta"].rep - disp["contraction"]).is_zero())
    c, _ = qt.form_log(p["phi_theta"].rep)
    rep.results["leading_scalar"] = str(c)


def _stage_projectivize(which, pipeline, disp, rep, *rest):
    phiB = pipeline()["phi_B"].rep
    for name, (ok, _r) in qt.projectivity_check(phiB).items():
        rep.verdict(f"projectivize.{name}", ok)
    ratio = qt.projectively_equal(expand_aux(phiB), expand_aux(disp["homogeneous"]))
    rep.verdict("projectivize.matches_display", ratio is not None, None if ratio is None else f"ratio {ratio}")


def _stage_affine(which, pipeline, disp, rep, *rest):
    pipeline()
    chart = qt.example_chart(which, 0)
    ratio = qt.projectively_equal(chart, disp["affine"])
    rep.verdict("affine.matches_display", ratio is not None, None if ratio is None else f"ratio {ratio}")
    fs = qt.fubini_study_spinor(chart.table)
    rep.verdict("affine.fubini_study_matches_display", (fs - disp["fubini_study"]).is_zero())


def _stage_closedness(which, pipeline, disp, rep, *rest):
    pipeline()
    rep.verdict("closedness.d_phi_B_chart_zero", ext_d(qt.example_chart(which, 0)).is_zero())


def _stage_mukai(which, pipeline, disp, rep, *rest):
    phi = expand_aux(pipeline()["phi"].rep)
    m = mukai(phi, phi.conj())
    target = expand_aux(disp["mukai"])
    resid = m - target
    rep.verdict("mukai.matches_display", resid.is_zero())
    rep.results["mukai"] = m.to_json()
    rep.results["mukai_residual"] = resid.to_json()


def _stage_typemap(which, pipeline, disp, rep, field, grid_n, chart, args):
    pipeline()
    grid = qt.default_grid(grid_n)
    jobs = [(which, chart, c, field.exact, field.tolerance) for c in _chunks(grid, _threads())] if grid else []
    rows = [r for part in _pmap(_typemap_chunk, jobs) for r in part]
    rep.tables["typemap"] = (list(qt.TYPEMAP_HEADER), rows)
    ok_rows = [r for r in rows if r[6] == "ok"]
    locus_rows = [r for r in rows if r[6] == "locus"]
    rep.verdict("typemap.off_locus_type_0", all(r[4] == "0" for r in ok_rows), f"{len(ok_rows)} off-locus grid points")
    rep.verdict("typemap.grid_locus_type_2", all(r[4] == "2" for r in locus_rows), f"{len(locus_rows)} grid points on the locus")
    fx = load_fixture(f"cp2_{which}")["locus_points"]
    lchart = fx["chart"]
    pts = [tuple(parse_point_coordinate(c) for c in p) for p in fx["points"]]
    lrows = qt.typemap(qt.example_chart(which, lchart), pts, lchart, la.EXACT)
    listed = []
    for p, r in zip(fx["points"], lrows):
        listed.append({"chart": lchart, "point": p, "type": r[4], "flag": r[6]})
        rep.verdict(f"typemap.listed_locus_point[{','.join(p)}]_type_2", r[4] == "2", f"flag {r[6]}")
    rep.results["typemap"] = {"grid": grid_n, "chart": chart, "rows": len(rows), "locus_points": listed}


def _stage_gk(which, pipeline, disp, rep, field, grid_n, chart, args):
    pipeline()
    pts = gk_sample_points(which, 20, args.seed)
    jobs = [(which, c, field.exact, field.tolerance) for c in _chunks(pts, _threads())]
    reports = [r for part in _pmap(_gk_chunk, jobs) for r in part]
    rep.verdict("gk.commute", all(r["commute"] for r in reports), f"{len(reports)} points")
    rep.verdict("gk.positive", all(r["positive"] for r in reports), f"{len(reports)} points")
    checked = [r["routes_agree"] for r in reports if r["routes_agree"] is not None]
    rep.verdict("gk.routes_agree", all(checked), f"{len(checked)} points with invertible b")
    rep.results["gk"] = reports
    if which == "triangle":
        # [1:1:1] lies on the triangle of lines and is visible in the chart z0 = 1
        try:
            qt.gk_assemble(which, (GaussianRational(1), GaussianRational(1)), field)
            rep.verdict("gk.locus_point_rejected", False, "no PointOnLocus raised at (1,1)")
        except PointOnLocus:
            rep.verdict("gk.locus_point_rejected", True)


_CP2_HANDLERS = {
    "build": _stage_build,
    "contract": _stage_contract,
    "projectivize": _stage_projectivize,
    "affine": _stage_affine,
    "closedness": _stage_closedness,
    "mukai": _stage_mukai,
    "typemap": _stage_typemap,
    "gk": _stage_gk,
}


VERBS = {
    "verify-axioms": (cmd_verify_axioms, "check the Courant algebroid axioms C1-C5 (input sections, or seeded random trials)"),
    "bracket": (cmd_bracket, "twisted Courant bracket and pairing of two generalized fields"),
    "mukai": (cmd_mukai, "Mukai pairing of two forms (default: a form with its conjugate)"),
    "reduce-linear": (cmd_reduce_linear, "linear reduction data: K^perp, K~, exactness, reduced Dirac structure"),
    "reduce-gcs": (cmd_reduce_gcs, "reduce a linear generalized complex structure"),
    "gk-check": (cmd_gk_check, "generalized Kahler check of a linear pair or a CP^2 example point"),
    "action-check": (cmd_action_check, "check an extended action (and its distributions at points)"),
    "cartan": (cmd_cartan, "equivariant Cartan differential of H + xi"),
    "moment-check": (cmd_moment_check, "check a moment map"),
    "severa": (cmd_severa, "push the curvature down to the quotient of a principal bundle chart"),
    "cp2": (cmd_cp2, "reproduce a generalized Kahler structure on CP^2 end to end"),
}


# ---------------------------------------------------------------------------
# parser, output, entry point
# ---------------------------------------------------------------------------


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genred", description="Exact generalized-geometry checks and reproductions.")
    sub = p.add_subparsers(dest="verb", metavar="VERB", required=True)
    for verb, (_fn, help_text) in VERBS.items():
        sp = sub.add_parser(verb, help=help_text, description=help_text)
        sp.add_argument("--input", help="JSON file, fixture name, or '-' for stdin")
        sp.add_argument("--out", help="directory for report.json (and typemap.csv)")
        sp.add_argument("--format", choices=("json", "csv"), default="json", help="stdout format (default json)")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
        sp.add_argument("--trials", type=_nonneg_int, default=1000, help="randomized trials (default 1000)")
        sp.add_argument("--grid", type=_nonneg_int, default=None, help="N for an N x N type-map grid (default 11)")
        sp.add_argument("--chart", type=int, default=None, help="affine chart index k (z_k = 1; default 0)")
        sp.add_argument("--tolerance", type=float, default=None, help="float mode with this zero tolerance")
        sp.add_argument("--exact", action="store_true", help="exact arithmetic (the default)")
        if verb == "cp2":
            sp.add_argument("--example", choices=tuple(_CP2_EXAMPLES), required=True)
            sp.add_argument("--check", choices=("all",) + CP2_STAGES, default="all")
    return p


def _options(args) -> dict:
    keys = ("input", "seed", "trials", "grid", "chart", "tolerance", "example", "check")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def render(rep: Report, fmt: str) -> str:
    if fmt == "csv":
        if "typemap" in rep.tables:
            return _csv_text(*rep.tables["typemap"])
        return _csv_text(["name", "ok", "detail"], [[v["name"], "pass" if v["ok"] else "fail", v["detail"] or ""] for v in rep.verdicts])
    return json.dumps(rep.to_json(), indent=2, ensure_ascii=False) + "\n"


def run(argv=None) -> tuple:
    """Parse ``argv`` and execute; returns ``(exit status, report or None)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report(args.verb, _options(args))
    try:
        with _Timer(rep, "total"):
            VERBS[args.verb][0](args, rep)
    except InputError as exc:
        print(f"genred: input error: {exc}", file=sys.stderr)
        return 2, None
    except GenredError as exc:
        rep.failed(args.verb, exc)
    except OSError as exc:
        print(f"genred: I/O error: {exc}", file=sys.stderr)
        return 2, None
    try:
        sys.stdout.write(render(rep, args.format))
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / "report.json").write_text(render(rep, "json"))
            if "typemap" in rep.tables:
                (out / "typemap.csv").write_text(_csv_text(*rep.tables["typemap"]))
    except OSError as exc:
        print(f"genred: I/O error: {exc}", file=sys.stderr)
        return 2, rep
    for v in rep.verdicts:
        if not v["ok"]:
            _progress(f"FAIL {v['name']}" + (f": {v['detail']}" if v["detail"] else ""))
    return (0 if rep.ok else 1), rep


def main(argv=None) -> int:
    status, _ = run(argv)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
