from fractions import Fraction

import pytest

import _oracle as O
from genred.catalog import gcs_from_spec, load_fixture, subspace_from_spec
from genred.errors import ConditionViolated, InvariantError, NotReducible, RealIndexNonzero, SingularB
from genred.linalg import (
    EXACT,
    FLOAT,
    J_complex,
    J_symplectic,
    LinearGCS,
    SplitSpace,
    Subspace,
    b_transform_gcs,
    bihermitian_blocks,
    cotangent,
    exactness_check,
    gcs_check,
    gcs_from_dirac,
    gcs_reduce,
    gk_check,
    gk_reduce,
    intersect,
    isotropy_check,
    k_tilde,
    lattice,
    perp,
    plus_i_eigenspace,
    reduce_dirac,
    standard_complex_structure,
    standard_symplectic,
    subspace_sum,
    tangent,
    two_form_matrix,
)
from genred.scalars import GaussianRational

I_ = GaussianRational(0, 1)


def S(space, *rows):
    return Subspace(space, [list(r) for r in rows])


def e(space, *idx_coeff):
    v = space.zero_vector()
    for i, c in idx_coeff:
        v[i] = space.field.coerce(c)
    return v


# lattice -----------------------------------------------------------------------

def test_perp_of_single_vector():
    V = SplitSpace(2)
    W = S(V, e(V, (0, 1)))
    P = perp(W)
    assert P.rank == 3
    # brute force: a basis vector lies in W^⊥ iff it pairs to zero with ∂1
    expected = [V.basis_vector(i) for i in range(4) if V.pair(V.basis_vector(i), V.basis_vector(0)) == 0]
    assert P == Subspace(V, expected)
    assert lattice(W, None, "perp") == P


def test_sum_intersect_idempotent():
    V = SplitSpace(3)
    W = S(V, e(V, (0, 1), (4, 2)), e(V, (2, 1), (3, -1)))
    assert subspace_sum(W, W) == W
    assert intersect(W, W) == W
    assert perp(perp(W)) == W
    assert W.rank + perp(W).rank == 6


def test_perp_of_tangent():
    V = SplitSpace(3)
    assert perp(tangent(V)) == tangent(V)


def test_quotient_basis_counts():
    V = SplitSpace(2)
    W = S(V, e(V, (0, 1)))
    reps = lattice(perp(W), W, "quotient_basis")
    assert len(reps) == 2


def test_lattice_unknown_op():
    V = SplitSpace(1)
    with pytest.raises(InvariantError):
        lattice(tangent(V), None, "nope")


# isotropy ----------------------------------------------------------------------

def test_isotropy_examples():
    V = SplitSpace(2)
    assert isotropy_check(tangent(V)) == "maximal_isotropic"
    # graph of ω = dx∧dy: ∂x − dy, ∂y + dx
    graph = S(V, e(V, (0, 1), (3, -1)), e(V, (1, 1), (2, 1)))
    assert isotropy_check(graph) == "maximal_isotropic"
    V1 = SplitSpace(1)
    assert isotropy_check(S(V1, [1, 1])) == "neither"
    assert isotropy_check(S(V, e(V, (0, 1)))) == "isotropic"


# K̃ and exactness ---------------------------------------------------------------

def test_k_tilde_examples():
    V = SplitSpace(2)
    K = S(V, e(V, (0, 1), (3, 1)))
    assert isotropy_check(K) == "isotropic"
    assert k_tilde(K) == K
    V1 = SplitSpace(1)
    K1 = S(V1, [1, 1])
    assert k_tilde(K1) == K1
    K2 = S(V, e(V, (0, 1)), e(V, (2, 1)))
    got = k_tilde(K2)
    assert got == S(V, e(V, (2, 1)))
    # [DERIVED] sympy oracle
    assert O.same_span(O.mat(got.basis(), 4), O.k_tilde(O.mat(K2.basis(), 4), 2))


def test_exactness_examples():
    V = SplitSpace(2)
    assert exactness_check(S(V, e(V, (0, 1), (3, 1))))
    V1 = SplitSpace(1)
    K = S(V1, [1, 1])
    assert not exactness_check(K)
    assert (perp(K).rank - intersect(K, perp(K)).rank) % 2 == 1
    assert exactness_check(cotangent(V))


# Dirac reduction ---------------------------------------------------------------

def test_reduce_tangent():
    V = SplitSpace(2)
    Dr = reduce_dirac(tangent(V), S(V, e(V, (0, 1))))
    assert isotropy_check(Dr) == "maximal_isotropic"
    assert Dr.ambient.dim == 2


def test_reduce_symplectic_graph():
    # ℝ⁴ basis (x1, y1, x2, y2), ω = dx1∧dy1 + dx2∧dy2, K = span{∂x1}
    V = SplitSpace(4)
    W = standard_symplectic(4)
    wf = two_form_matrix(W)
    graph = Subspace(V, [V.basis_vector(i)[:4] + [wf[r][i] for r in range(4)] for i in range(4)])
    assert isotropy_check(graph) == "maximal_isotropic"
    K = S(V, e(V, (0, 1)))
    Dr = reduce_dirac(graph, K)
    pres = Dr.ambient.presentation
    assert isotropy_check(Dr) == "maximal_isotropic"
    # level-set direction dy1 together with the graph of the reduced form dx2∧dy2
    expected = [e(V, (5, 1)), e(V, (2, 1), (7, 1)), e(V, (3, 1), (6, -1))]
    assert Dr == Subspace(Dr.ambient, [pres.coords(v) for v in expected])
    # [DERIVED] relation composition with sympy
    comp, _ = O.compose_dirac(O.mat(graph.basis(), 8), O.mat(K.basis(), 8), 4)
    lifted = [pres.lift(c) for c in Dr.basis()] + pres.kern.basis()
    assert O.same_span(O.mat(lifted, 8), comp)


def test_reduce_requires_isotropic_k_tilde():
    V = SplitSpace(2)
    K = S(V, e(V, (0, 1), (2, 1)), e(V, (1, 1)))
    with pytest.raises(NotReducible):
        reduce_dirac(tangent(V), K)


# generalized complex structures ------------------------------------------------

def test_gcs_types():
    W = standard_symplectic(4)
    I = standard_complex_structure(4)
    rep = gcs_check(J_symplectic(W))
    assert rep.type == 0 and rep.real_index_zero and rep.maximal_isotropic
    assert gcs_check(J_complex(I)).type == 2
    B = [[0, 1, 2, 0], [-1, 0, 0, 3], [-2, 0, 0, Fraction(1, 2)], [0, -3, Fraction(-1, 2), 0]]
    assert gcs_check(b_transform_gcs(J_symplectic(W), B)).type == 0
    assert gcs_check(b_transform_gcs(J_complex(I), B)).type == 2


def test_gcs_roundtrip_through_eigenbundle():
    J = J_symplectic(standard_symplectic(2))
    assert gcs_from_dirac(plus_i_eigenspace(J)) == J


def test_gcs_validation():
    with pytest.raises(InvariantError):
        LinearGCS([[1, 0], [0, 1]])
    with pytest.raises(InvariantError):
        LinearGCS([[0, -1], [1, 0]])  # J² = −1 but not orthogonal for the pairing


def test_type_change_down():
    fx = load_fixture("type_change_down")
    J = gcs_from_spec(fx["J"])
    K = subspace_from_spec(fx["K"])
    L = gcs_check(J).L
    LK = intersect(L, perp(K))
    assert LK.rank == 2
    assert intersect(LK, K).is_zero()
    red = gcs_reduce(J, K)
    assert red.type == 0


def test_type_change_up():
    fx = load_fixture("type_change_up")
    red = gcs_reduce(gcs_from_spec(fx["J"]), subspace_from_spec(fx["K"]))
    assert red.type == 1
    redf = gcs_reduce(gcs_from_spec(fx["J"], FLOAT), subspace_from_spec(fx["K"], FLOAT))
    assert redf.type == 1


def test_holomorphic_quotient_is_complex_type():
    V = SplitSpace(4)
    J = J_complex(standard_complex_structure(4))
    K = S(V, e(V, (0, 1)), e(V, (1, 1)))
    red = gcs_reduce(J, K)
    assert red.condition == "JK=K"
    assert red.type == 1
    assert red.presentation.dim == 4


def test_real_index_failure_reports_witness():
    # J_ω on ℝ² with K = span{∂x}: J∂x = dy lies in K^⊥ but not in K
    V = SplitSpace(2)
    J = J_symplectic(standard_symplectic(2))
    with pytest.raises(RealIndexNonzero) as exc:
        gcs_reduce(J, S(V, e(V, (0, 1))))
    w = exc.value.witness
    assert w is not None and perp(S(V, e(V, (0, 1)))).contains(w)
    # K = V is fine: J V = V* meets V^⊥ = V only in 0
    assert gcs_reduce(J, tangent(V)).presentation.dim == 0


# generalized Kähler -------------------------------------------------------------

def _kahler(n=2, field=EXACT):
    return J_symplectic(standard_symplectic(n), field), J_complex(standard_complex_structure(n), field)


def test_gk_examples():
    Jw, JI = _kahler()
    rep = gk_check(Jw, JI)
    assert rep.commute and rep.positive
    rep = gk_check(Jw, Jw)
    assert not rep.positive
    assert rep.G == [[-1 if i == j else 0 for j in range(4)] for i in range(4)]
    Jm = J_complex([[-x for x in r] for r in standard_complex_structure(2)])
    rep = gk_check(Jw, Jm)
    assert rep.commute and not rep.positive


def test_gk_float_mode_agrees():
    Jw, JI = _kahler(2, FLOAT)
    rep = gk_check(Jw, JI)
    assert rep.commute and rep.positive


def test_gk_reduce_kahler():
    Jw, JI = _kahler(4)
    V = JI.space
    K = S(V, e(V, (0, 1)), e(V, (1, 1)))
    red = gk_reduce(JI, Jw, K)
    assert red.report.commute and red.report.positive
    assert gcs_check(red.J1).type == 1
    assert gcs_check(red.J2).type == 0
    assert red.J1 == gcs_reduce(JI, K).J


def test_gk_reduce_condition():
    Jw, JI = _kahler(4)
    V = JI.space
    with pytest.raises(ConditionViolated) as exc:
        gk_reduce(JI, Jw, S(V, e(V, (0, 1))))
    assert exc.value.which == "J1K=K"


def test_bihermitian_standard_kahler():
    Jw, JI = _kahler()
    bh = bihermitian_blocks(Jw, JI)
    assert bh.g == [[1, 0], [0, 1]]
    assert all(x == 0 for r in bh.b for x in r)
    with pytest.raises(SingularB):
        bihermitian_blocks(Jw, JI, standard_symplectic(2), standard_symplectic(2))


def test_bihermitian_b_transform():
    Jw, JI = _kahler(4)
    B = [[0, 1, 2, 0], [-1, 0, 0, 3], [-2, 0, 0, 5], [0, -3, -5, 0]]
    bh = bihermitian_blocks(b_transform_gcs(Jw, B), b_transform_gcs(JI, B))
    assert bh.g == [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    assert bh.b == two_form_matrix(B)


def test_subspace_json_roundtrip():
    V = SplitSpace(2)
    W = S(V, [1, I_, 0, 0], [0, 0, 1, Fraction(1, 2)])
    assert Subspace.from_json(W.to_json()) == W
