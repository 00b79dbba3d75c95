import pytest

from _oracle import Grassmann
from genred.actions import (
    CourantAlgebraData,
    EquivariantForm,
    ExtendedAction,
    LieAlgebraData,
    action_equivalence,
    action_from_json,
    action_to_json,
    adjoint_annihilates,
    adjoint_module,
    cartan_d,
    check_extended_action,
    distribution_ranks,
    distributions,
    hamiltonian_complexify,
    hemisemidirect,
    jk_invariant,
    lie_cocycle,
    moment_check,
    severa_pushdown,
    symplectic_extension,
)
from genred.catalog import load_fixture
from genred.errors import (
    InconsistentConnection,
    InvariantError,
    ModuleAxiomViolation,
    NotEquivariant,
    NotHamiltonian,
    NotSymplectic,
)
from genred.forms import Form, GeneralizedField, TwistForm, pairing
from genred.linalg import SplitSpace, Subspace, tangent
from genred.poly import RatFun, VarTable, parse_expr
from genred.scalars import GaussianRational

R2 = VarTable.real(["x", "y"])
R4 = VarTable.real(["x1", "y1", "x2", "y2"])
T3 = VarTable.complex(3, aux=())


def F(spec, t):
    return Form.parse(t, spec)


def V(t, comps, cov=None):
    return GeneralizedField(t, {k: parse_expr(v, t) for k, v in comps.items()}, F(cov, t) if cov else None)


def vec(*xs):
    return [GaussianRational(x) for x in xs]


OMEGA4 = F({"dx1 dy1": "1", "dx2 dy2": "1"}, R4)


# Courant algebras --------------------------------------------------------------

def test_hemisemidirect_scaling_module():
    g = LieAlgebraData.abelian(1)
    a = hemisemidirect(g, [[[1]]])
    assert a.bracket(vec(1, 0), vec(0, 1)) == vec(0, 1)
    assert a.bracket(vec(0, 1), vec(1, 0)) == vec(0, 0)
    assert a.leibniz_check()[0] and a.morphism_check()[0]
    assert a.is_exact()


def test_hemisemidirect_trivial_module():
    a = hemisemidirect(LieAlgebraData.abelian(2), [[[0]], [[0]]])
    for x in a.basis():
        for y in a.basis():
            assert a.bracket(x, y) == vec(0, 0, 0)


def test_hemisemidirect_adjoint():
    # [e0, e1] = e1
    g = LieAlgebraData(2, [[[0, 0], [0, 1]], [[0, -1], [0, 0]]])
    a = hemisemidirect(g, adjoint_module(g))
    g1, h1, g2, h2 = vec(1, 2), vec(3, -1), vec(0, 5), vec(2, 7)
    got = a.bracket(g1 + h1, g2 + h2)
    assert got == g.bracket(g1, g2) + g.bracket(g1, h2)


def test_module_axiom_violation():
    g = LieAlgebraData(2, [[[0, 0], [0, 1]], [[0, -1], [0, 0]]])
    with pytest.raises(ModuleAxiomViolation):
        hemisemidirect(g, [[[1]], [[1]]])


def test_lie_algebra_checks_jacobi_and_antisymmetry():
    with pytest.raises(InvariantError):
        LieAlgebraData(1, [[[1]]])


def test_courant_algebra_json_roundtrip():
    a = hemisemidirect(LieAlgebraData.abelian(1), [[[1]]])
    b = CourantAlgebraData.from_json(a.to_json())
    assert b.bracket(vec(1, 0), vec(0, 1)) == vec(0, 1)


# extended actions --------------------------------------------------------------

def test_trivial_action_passes():
    alg = CourantAlgebraData(1, [[1]])
    A = ExtendedAction(alg, [GeneralizedField(R2)])
    rep = check_extended_action(A)
    assert all(rep[k].ok for k in ("morphism", "closed_h", "invariant_splitting", "equivariance"))
    assert "integrability" in rep["assumptions"]


def test_symplectic_extension_r4_passes():
    A = symplectic_extension(OMEGA4, [V(R4, {"x1": "1"}), V(R4, {"x2": "1"})])
    rep = check_extended_action(A)
    assert all(rep[k].ok for k in ("morphism", "closed_h", "invariant_splitting", "equivariance"))


def test_nonclosed_one_form_fails_closed_h():
    alg = CourantAlgebraData(1, [])
    A = ExtendedAction(alg, [V(R2, {}, {"dy": "x"})])
    rep = check_extended_action(A)
    assert not rep["closed_h"].ok
    assert rep["morphism"].ok


def test_symplectic_extension_plane():
    A = symplectic_extension(F({"dx dy": "1"}, R2), [V(R2, {"x": "1"})])
    assert A.rho[0] == V(R2, {"x": "1"})
    assert A.rho[1] == V(R2, {}, {"dy": "1"})


def test_symplectic_extension_rejects():
    w = F({"dx dy": "1"}, R2)
    with pytest.raises(NotSymplectic):
        symplectic_extension(w, [V(R2, {"x": "x"})])
    with pytest.raises(NotSymplectic):
        symplectic_extension(F({"dx dy": "x"}, R2).scale(0), [V(R2, {"x": "1"})])


def test_action_equivalence():
    A = symplectic_extension(OMEGA4, [V(R4, {"x1": "1"}), V(R4, {"x2": "1"})])
    same = action_equivalence(A, [0, 0])
    assert all(a == b for a, b in zip(same.rho, A.rho))
    const = action_equivalence(A, [3, "1/2"])
    assert all(a == b for a, b in zip(const.rho, A.rho))
    shifted = action_equivalence(A, ["y1", "y2"])
    assert shifted.rho[0] == A.rho[0] + V(R4, {}, {"dy1": "1"})
    assert shifted.rho[2] == A.rho[2] and shifted.rho[3] == A.rho[3]
    rep = check_extended_action(shifted)
    assert all(rep[k].ok for k in ("morphism", "closed_h", "invariant_splitting", "equivariance"))
    with pytest.raises(NotEquivariant):
        action_equivalence(A, ["x1", 0])


# Cartan certificate ------------------------------------------------------------

def _mixed():
    return symplectic_extension(OMEGA4, [V(R4, {"x1": "1"}), V(R4, {"y1": "1"})])


def test_cartan_mixed_translations():
    A = _mixed()
    elements = [vec(1, 0, 0, 1), vec(0, 1, 1, 0), vec(2, -1, 3, 5)]
    got = cartan_d(EquivariantForm.from_action(A), A, elements)
    # [DERIVED] ρ(a) = a1∂x1 + a2∂y1 + b1 dy1 − b2 dx1, so −⟨ρa,ρa⟩ = a1 b2 − a2 b1
    assert [g.scalar_part() for g in got] == [RatFun.const(R4, 1), RatFun.const(R4, -1), RatFun.const(R4, 13)]
    for a, g in zip(elements, got):
        assert g == Form.scalar(R4, -pairing(A.section(a), A.section(a)))


def test_cartan_basis_and_isotropic():
    A = _mixed()
    for a, g in zip(A.algebra.basis(), cartan_d(EquivariantForm.from_action(A), A)):
        assert g == Form.scalar(R4, -pairing(A.section(a), A.section(a)))
    # isotropic circle: ρ = ∂t + ds on ℝ² with H = 0
    t = VarTable.real(["t", "s"])
    B = ExtendedAction(CourantAlgebraData(1, [[1]]), [V(t, {"t": "1"}, {"ds": "1"})])
    assert pairing(B.rho[0], B.rho[0]).is_zero()
    assert all(g.is_zero() for g in cartan_d(EquivariantForm.from_action(B), B))


def test_cartan_trivial():
    alg = CourantAlgebraData(1, [[1]])
    H = F({"dx1 dx2 dy2": "1"}, R4)
    A = ExtendedAction(alg, [GeneralizedField(R4)], H)
    assert cartan_d(EquivariantForm.from_action(A), A)[0].is_zero()


# moment maps -------------------------------------------------------------------

def test_moment_check():
    A = symplectic_extension(OMEGA4, [V(R4, {"x1": "1"}), V(R4, {"x2": "1"})])
    rep = moment_check(A, ["y1", "y2"])
    assert rep["d_mu"].ok and rep["equivariance"].ok
    rep = moment_check(A, ["y1+5", "y2-1/3"])
    assert rep["d_mu"].ok and rep["equivariance"].ok
    rep = moment_check(A, ["y1+x2", "y2"])
    assert not rep["d_mu"].ok


def test_moment_check_wrong_length():
    A = symplectic_extension(OMEGA4, [V(R4, {"x1": "1"})])
    with pytest.raises(InvariantError):
        moment_check(A, ["y1", "y2"])


# distributions -----------------------------------------------------------------

def test_distributions_symplectic():
    A = symplectic_extension(OMEGA4, [V(R4, {"x1": "1"}), V(R4, {"x2": "1"})])
    d = distributions(A, [1, 2, 3, 4])
    sp = d.Delta_s.ambient
    lag = Subspace(sp, [sp.basis_vector(0), sp.basis_vector(2)])
    assert d.Delta_s == lag and d.Delta_b == lag
    assert d.routes_agree
    ranks = distribution_ranks(A, [[0, 0, 0, 0], [1, 2, 3, 4]])
    assert all(ranks["constant"].values())


def test_distributions_trivially_extended():
    alg = CourantAlgebraData(1, [[1]])
    A = ExtendedAction(alg, [V(R2, {"x": "1"})])
    d = distributions(A, [0, 0])
    assert d.Delta_s == tangent(SplitSpace(2)) == d.Delta_b


def test_distributions_closed_one_form():
    A = ExtendedAction(CourantAlgebraData(1, []), [V(R2, {}, {"dx": "1"})])
    d = distributions(A, ["1/2", 3])
    sp = d.Delta_s.ambient
    assert d.Delta_s == Subspace(sp, [sp.basis_vector(1)]) == d.Delta_b
    assert d.routes_agree


# cocycle -----------------------------------------------------------------------

def test_lie_cocycle():
    H = TwistForm(F({"dz0 dz1 dz2": "1"}, T3))
    X0, Y = V(T3, {"z0": "1"}), V(T3, {"z1": "1"})
    assert lie_cocycle(X0, Y, TwistForm.zero(T3)).is_zero()
    assert lie_cocycle(X0, Y, H).is_zero()
    assert lie_cocycle(V(T3, {"z0": "z2"}), Y, H).is_zero()
    got = lie_cocycle(V(T3, {"z0": "z1"}), Y, H)
    assert got == F({"dz1 dz2": "-1"}, T3)
    # [DERIVED] the same contraction in the sympy Grassmann model
    G = Grassmann(T3)
    z1 = G.syms["z1"]
    inner = G.interior({"z0": z1}, G.interior({"z1": 1}, {("dz0", "dz1", "dz2"): 1}))
    assert G.equal(G.form(got), G.d(inner))
    z2 = G.syms["z2"]
    assert not G.d(G.interior({"z0": z2}, G.interior({"z1": 1}, {("dz0", "dz1", "dz2"): 1})))


# Ševera pushdown ---------------------------------------------------------------

HOPF = VarTable.real(["x", "y", "s", "t"])


def test_severa_hopf():
    fx = load_fixture("hopf_severa")
    t = VarTable.from_json(fx["vars"])
    res = severa_pushdown(F(fx["h"], t), [F(x, t) for x in fx["theta"]], [F(x, t) for x in fx["F"]], [F(x, t) for x in fx["xi"]])
    assert res.closed and not res.form.is_zero()
    assert res.form == F({"dx dy ds": "2/(1+x^2+y^2)^2"}, t)
    assert res.scope == "chart-level representative"


def test_severa_trivial_cases():
    t = HOPF
    h = F({"dx dy ds": "1+x^2"}, t)
    theta = [F({"dt": "1"}, t)]
    res = severa_pushdown(h, theta, [Form.zero(t)], [Form.zero(t)])
    assert res.form == h
    res = severa_pushdown(h, theta, [Form.zero(t)], [F({"ds": "1"}, t)])
    assert res.form == h


def test_severa_inconsistent_connection():
    t = HOPF
    with pytest.raises(InconsistentConnection):
        severa_pushdown(Form.zero(t), [F({"dt": "x"}, t)], [Form.zero(t)], [F({"ds": "1"}, t)])


# Hamiltonian complexification --------------------------------------------------

def _J_omega_r2():
    one, zero = RatFun.one(R2), RatFun.zero(R2)
    return [[zero, zero, zero, one], [zero, zero, -one, zero], [zero, -one, zero, zero], [one, zero, zero, zero]]


def test_hamiltonian_rotation():
    alg = CourantAlgebraData(1, [[1]])
    A = ExtendedAction(alg, [V(R2, {"x": "-y", "y": "x"})])
    B = hamiltonian_complexify(A, ["i*(x^2+y^2)/2"], _J_omega_r2())
    assert B.rho[0] == V(R2, {"x": "-y", "y": "x"})
    assert B.rho[1] == V(R2, {}, {"dx": "x", "dy": "y"})
    assert B.moment[0] == parse_expr("(x^2+y^2)/2", R2)
    rep = check_extended_action(B)
    assert all(rep[k].ok for k in ("morphism", "closed_h", "invariant_splitting", "equivariance"))
    assert moment_check(B, B.moment)["d_mu"].ok
    jk = jk_invariant(B, _J_omega_r2(), [[1, 2], ["1/2", -3]])
    assert jk["ok"] and all(jk["points"])


def test_hamiltonian_trivial_and_failure():
    alg = CourantAlgebraData(1, [[1]])
    Z = ExtendedAction(alg, [GeneralizedField(R2)])
    B = hamiltonian_complexify(Z, [0], _J_omega_r2())
    assert all(r.is_zero() for r in B.rho)
    A = ExtendedAction(alg, [V(R2, {"x": "1"})])
    with pytest.raises(NotHamiltonian) as exc:
        hamiltonian_complexify(A, [0], _J_omega_r2())
    assert exc.value.residual


# adjoint kernel ----------------------------------------------------------------

def test_adjoint_kernel_is_closed_one_forms():
    assert adjoint_annihilates(V(R2, {}, {"dx": "1", "dy": "2*y"}))[0]
    assert not adjoint_annihilates(V(R2, {}, {"dy": "x"}))[0]
    assert not adjoint_annihilates(V(R2, {"x": "1"}))[0]
    H = TwistForm(F({"dx1 dy1 dx2": "1"}, R4))
    assert adjoint_annihilates(V(R4, {}, {"dx1": "1"}), H)[0]


def test_action_json_roundtrip():
    A = symplectic_extension(OMEGA4, [V(R4, {"x1": "1"})])
    B = action_from_json(action_to_json(A))
    assert all(a == b for a, b in zip(A.rho, B.rho))
    assert B.algebra.dim_a == A.algebra.dim_a
