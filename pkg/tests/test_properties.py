"""Randomized invariants driven by hypothesis.

Each property draws a seed and runs one trial from :mod:`_trials`; the
``acceptance`` profile (the default) runs 1000 examples per property.  The
fixed-seed 1000-trial runs live in the acceptance suite.
"""

import random

from hypothesis import given

import _trials as T
from _strategies import seeds


def _check(name, seed):
    assert T.SUITES[name](random.Random(seed)), f"{name} failed for seed {seed}"


@given(seeds)
def test_courant_axioms_for_closed_twist(seed):
    _check("courant_axioms", seed)


@given(seeds)
def test_d_squared_vanishes(seed):
    _check("d_squared", seed)


@given(seeds)
def test_cartan_magic_formula(seed):
    _check("cartan_magic", seed)


@given(seeds)
def test_clifford_square_is_pairing(seed):
    _check("clifford", seed)


@given(seeds)
def test_mukai_pairing_b_invariant(seed):
    _check("mukai_b_invariance", seed)


@given(seeds)
def test_reduce_dirac_maximal_and_matches_relation_composite(seed):
    _check("reduce_dirac", seed)


@given(seeds)
def test_jk_equals_k_implies_real_index_criterion(seed):
    _check("gcs_criterion", seed)


def test_trials_are_not_vacuous():
    from genred.linalg import SplitSpace, gcs_check, isotropy_check

    rng = random.Random(0)
    V = SplitSpace(3)
    assert isotropy_check(T.random_dirac(rng, V)) == "maximal_isotropic"
    ranks = {T.random_isotropic(rng, V).rank for _ in range(40)}
    assert ranks == {0, 1, 2, 3}
    types = {gcs_check(T.random_gcs(rng, 4)).type for _ in range(20)}
    assert types == {0, 2}
