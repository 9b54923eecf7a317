import pytest
from hypothesis import given
from hypothesis import strategies as st

from yangian_eval.loopalg import C, Z, E, LieElt, RankMismatch, bracket, bracket_gens, omega

N = 3
gens = st.builds(E, st.integers(1, N), st.integers(1, N), st.integers(-2, 2))
coefs = st.integers(-3, 3)
elts = st.lists(st.tuples(gens, coefs), max_size=3).map(lambda ts: sum((LieElt.gen(N, g, k) for g, k in ts), LieElt(N)))


@given(elts, elts, elts)
def test_jacobi(x, y, z):
    total = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert not total


@given(elts, elts)
def test_antisymmetry(x, y):
    assert bracket(x, y) == -bracket(y, x)


@given(elts, elts)
def test_omega_is_an_antiautomorphism(x, y):
    assert omega(bracket(x, y)) == bracket(omega(y), omega(x))


@given(elts)
def test_omega_is_an_involution(x):
    assert omega(omega(x)) == x


def test_bracket_central_terms():
    # [E_12 t, E_21 t^-1] = E_11 - E_22 + c
    br = bracket_gens(N, E(1, 2, 1), E(2, 1, -1))
    assert br == LieElt(N, {E(1, 1, 0): 1, E(2, 2, 0): -1, C: 1})
    # [E_11 t^2, E_22 t^-2] = 2 z
    assert bracket_gens(N, E(1, 1, 2), E(2, 2, -2)) == LieElt(N, {Z: 2})
    # zero modes have no central part
    assert bracket_gens(N, E(1, 2, 0), E(2, 1, 0)) == LieElt(N, {E(1, 1, 0): 1, E(2, 2, 0): -1})


def test_central_elements_commute():
    assert not bracket_gens(N, C, E(1, 2, 1))
    assert not bracket_gens(N, E(1, 1, 0), Z)


def test_rank_checks():
    with pytest.raises(ValueError):
        LieElt(2, {E(3, 1, 0): 1})
    with pytest.raises(RankMismatch):
        bracket(LieElt.gen(2, E(1, 2)), LieElt.gen(3, E(1, 2)))
