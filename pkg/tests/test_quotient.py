from fractions import Fraction

import pytest

from genred.catalog import display_form, load_fixture
from genred.errors import ChartDegenerate, DegenerateLeadingTerm, PointOnLocus
from genred.forms import Form, expand_aux, ext_d, interior, mukai_sigma, wedge
from genred.linalg import FLOAT
from genred.poly import RatFun, VarTable, parse_expr
from genred.quotient import (
    TYPEMAP_HEADER,
    CircleData,
    affine_chart,
    build_example,
    default_grid,
    example_chart,
    example_pipeline,
    fubini_study_spinor,
    gk_assemble,
    interior_theta,
    projectivity_check,
    projectively_equal,
    typemap,
)
from genred.scalars import GaussianRational, QiLambda

T = VarTable.complex(3)
OMEGA = Form.parse(T, "dz0 dz1 dz2")


def G(x):
    return GaussianRational(Fraction(x))


def _displays(which):
    fx = load_fixture(f"cp2_{which}")
    t = VarTable.from_json(fx["vars"])
    return {k: display_form(v, t) for k, v in fx["displays"].items()}


# circle data -------------------------------------------------------------------

def test_circle_identities():
    C = CircleData.standard(3)
    phi = build_example("triangle").rep
    i = RatFun.const(T, GaussianRational(0, 1))
    assert interior(C.theta, phi) == (interior(C.e, phi) - interior(C.ebar, phi)).scale(i)
    dlog = Form.parse(T, {"du": "1/(2*u)"})
    assert expand_aux(interior(C.radial, dlog)) == Form.scalar(T, 1)


# build / contract --------------------------------------------------------------

def test_zero_deformation_is_volume_form():
    assert build_example("triple_line", zero_deformation=True).rep == OMEGA


def test_contract_volume_form():
    got = interior_theta(OMEGA).rep
    assert got == Form.parse(T, {"dz1 dz2": "i*z0", "dz0 dz2": "-i*z1", "dz0 dz1": "i*z2"})


def test_contract_twice_vanishes():
    for which in ("triple_line", "triangle"):
        once = interior_theta(build_example(which))
        assert interior(CircleData.standard(3).theta, once.rep).is_zero()
    with pytest.raises(DegenerateLeadingTerm):
        interior_theta(Form.scalar(T, 1))


def test_triple_line_build_and_contraction_match_displays():
    d = _displays("triple_line")
    p = example_pipeline("triple_line")
    assert p["phi"].rep == d["phi"]
    assert p["phi"].rep == d["phi_expanded"]
    assert p["phi_theta"].rep == d["contraction"]


def test_triangle_leading_term():
    # degree-one part: ½(−z0² + z1z2) dz0 + cyclic permutations
    phi = build_example("triangle").rep
    lead = phi.part(1)
    expected = Form.parse(T, {"dz0": "(-z0^2+z1*z2)/2", "dz1": "(-z1^2+z2*z0)/2", "dz2": "(-z2^2+z0*z1)/2"})
    assert lead == expected


def test_triangle_leading_scalar_of_contraction():
    # the scalar part of i_∂θ φ is −(i/2)(z0³+z1³+z2³−3z0z1z2)
    theta_phi = example_pipeline("triangle")["phi_theta"].rep
    assert theta_phi.scalar_part() == parse_expr("-i/2*(z0^3+z1^3+z2^3-3*z0*z1*z2)", T)
    lead = example_pipeline("triple_line")["phi_theta"].rep.scalar_part()
    assert lead == parse_expr("-i/2*z0^3", T)


# projectivization --------------------------------------------------------------

@pytest.mark.parametrize("which", ["triple_line", "triangle"])
def test_projectivity_identities(which):
    rep = projectivity_check(example_pipeline(which)["phi_B"])
    for name in ("i_e", "i_ebar", "L_e", "L_ebar"):
        assert rep[name][0], name


def test_volume_form_is_not_projective():
    assert not projectivity_check(OMEGA)["i_e"][0]


def test_projective_equality_is_up_to_scale():
    a = example_pipeline("triple_line")["phi_B"].rep
    f = parse_expr("(1+z1*zb1)/(2-z0)", T)
    assert projectively_equal(a.scale(f), a) == f
    assert projectively_equal(a + Form.parse(T, {"dz0 dzb0": "1"}), a) is None


def test_triple_line_homogeneous_matches_display():
    d = _displays("triple_line")
    phiB = example_pipeline("triple_line")["phi_B"].rep
    assert projectively_equal(expand_aux(phiB), expand_aux(d["homogeneous"])) is not None


# affine chart ------------------------------------------------------------------

@pytest.mark.parametrize("which", ["triple_line", "triangle"])
def test_chart_form_closed(which):
    assert ext_d(example_chart(which, 0)).is_zero()


def test_triple_line_affine_matches_display():
    d = _displays("triple_line")
    assert projectively_equal(example_chart("triple_line", 0), d["affine"]) is not None


def test_fubini_study_matches_display():
    for which in ("triple_line", "triangle"):
        d = _displays(which)
        assert fubini_study_spinor(d["fubini_study"].table) == d["fubini_study"]


def test_chart_degenerate():
    with pytest.raises(ChartDegenerate):
        affine_chart(Form.parse(T, {"dz0": "1"}), 0)


def test_mukai_in_chart_has_cubic_factor():
    a = example_chart("triangle", 0)
    top = wedge(a, mukai_sigma(a.conj())).coeff(["dz1", "dz2", "dzb1", "dzb2"])
    assert not top.is_zero()
    cubic = parse_expr("1+z1^3+z2^3-3*z1*z2", T).as_polynomial()
    factors = [f for f, _ in top.den]
    assert cubic in factors or -cubic in factors
    assert cubic.conj() in factors or -cubic.conj() in factors


# type maps ---------------------------------------------------------------------

def test_default_grid():
    assert default_grid(0) == []
    assert len(default_grid(11)) == 121
    assert default_grid(1) == [(G(0), G(0))]
    assert default_grid(3)[0] == (G(-1), G(-1))


def test_typemap_triangle_points():
    a = example_chart("triangle", 0)
    lam = QiLambda.lam()
    rows = typemap(a, [(G(0), G(0)), (G(1), G(1)), (lam, lam ** 2), (lam ** 2, lam)], 0)
    assert len(rows[0]) == len(TYPEMAP_HEADER)
    assert rows[0][4] == "0" and rows[0][6] == "ok"
    assert [r[4] for r in rows[1:]] == ["2", "2", "2"]
    assert all(r[6] == "locus" for r in rows[1:])


def test_typemap_triple_line_chart1():
    a = example_chart("triple_line", 1)
    rows = typemap(a, [(G(0), G(0)), (G(0), GaussianRational(Fraction(1, 2), 1)), (G(1), G(0)), (GaussianRational(0, 1), G(2))], 1)
    assert [r[4] for r in rows] == ["2", "2", "0", "0"]


def test_typemap_invariant_under_rescaling():
    a = example_chart("triangle", 0)
    pts = [(G(0), G(0)), (G(1), G(1)), (G(Fraction(1, 2)), G(-1))]
    scaled = a.scale(parse_expr("3*(2+z1*zb1)", a.table))
    assert [r[4] for r in typemap(a, pts)] == [r[4] for r in typemap(scaled, pts)]


def test_typemap_float_mode_agrees():
    a = example_chart("triangle", 0)
    pts = default_grid(5)
    exact = [r[4] for r in typemap(a, pts)]
    approx = [r[4] for r in typemap(a, pts, 0, FLOAT)]
    assert exact == approx


# generalized Kähler assembly ---------------------------------------------------

def test_gk_triple_line_origin():
    rep = gk_assemble("triple_line", (G(0), G(0)))
    assert rep["commute"] and rep["positive"]
    assert rep["routes_agree"] is True


def test_gk_triangle_origin_and_locus():
    rep = gk_assemble("triangle", (G(0), G(0)))
    assert rep["commute"] and rep["positive"]
    with pytest.raises(PointOnLocus):
        gk_assemble("triangle", (G(1), G(1)))


def test_gk_metric_symmetric():
    rep = gk_assemble("triple_line", (G(Fraction(1, 2)), GaussianRational(0, -1)))
    g = rep["g"]
    assert all(g[i][j] == g[j][i] for i in range(4) for j in range(4))
