from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from yangian_eval.loopalg import C, Z, E, LieElt, RankMismatch, bracket_gens
from yangian_eval.vermamod import (
    InducedModule,
    VacuumSpec,
    add_into,
    check_zero_mode_relations,
    natural,
    natural2,
    trivial,
    vector_degree,
)

LEVEL, LAM = Fraction(-5, 4), Fraction(2, 3)
MODULES = {
    "trivial": InducedModule(trivial(3, LEVEL, LAM)),
    "natural": InducedModule(natural(3, LEVEL)),
    "natural2": InducedModule(natural2(2, LEVEL)),
}


def piece_dims_oracle(n, dim_w, D):
    # coefficients of dim_w * prod_{k>=1} (1 - q^k)^(-n^2)
    coeffs = [1] + [0] * D
    for k in range(1, D + 1):
        for _ in range(n * n):
            for d in range(k, D + 1):
                coeffs[d] += coeffs[d - k]
    return [dim_w * x for x in coeffs]


@pytest.mark.parametrize("name", list(MODULES))
def test_piece_dimensions(name):
    mod = MODULES[name]
    D = 3 if mod.n == 3 else 4
    assert [len(mod.piece(d)) for d in range(D + 1)] == piece_dims_oracle(mod.n, mod.spec.dim, D)


def test_trivial_piece_dimensions_frozen():
    assert [len(MODULES["trivial"].piece(d)) for d in range(5)] == [1, 9, 54, 255, 1035]


def _random_key(mod, data):
    d = data.draw(st.integers(0, 2))
    piece = mod.piece(d)
    return piece[data.draw(st.integers(0, len(piece) - 1))]


@pytest.mark.parametrize("name", list(MODULES))
@given(data=st.data())
def test_module_axiom(name, data):
    """g(h v) - h(g v) == [g, h] v for loop generators g, h."""
    mod = MODULES[name]
    n = mod.n
    gen = st.builds(E, st.integers(1, n), st.integers(1, n), st.integers(-2, 2))
    g, h = data.draw(gen), data.draw(gen)
    v = {_random_key(mod, data): 1}
    lhs = mod.act(g, mod.act(h, v))
    add_into(lhs, mod.act(h, mod.act(g, v)), -1)
    rhs = mod.act_elt(bracket_gens(n, g, h), v)
    assert lhs == rhs


def test_vacuum_conditions():
    mod = MODULES["trivial"]
    vac = mod.vacuum()
    assert mod.act(E(1, 2, 1), vac) == {}
    assert mod.act(E(2, 2, 0), vac) == {((), 0): LAM}
    assert mod.act(E(1, 2, 0), vac) == {}
    assert mod.act(C, vac) == {((), 0): LEVEL}
    assert mod.act(Z, vac) == vac
    # E_11 t^1 E_11 t^-1 |vac> = (c + z)|vac> since the bracket is c + z at s = 1
    v = mod.act(E(1, 1, -1), vac)
    assert mod.act(E(1, 1, 1), v) == {((), 0): LEVEL + 1}


def test_natural_zero_modes():
    mod = MODULES["natural"]
    assert mod.act(E(1, 2, 0), {((), 1): 1}) == {((), 0): 1}
    assert mod.act(E(1, 2, 0), {((), 0): 1}) == {}


def test_degrees_and_rank_checks():
    mod = MODULES["trivial"]
    v = mod.act(E(1, 2, -2), mod.act(E(2, 1, -1), mod.vacuum()))
    assert vector_degree(v) == -3
    with pytest.raises(RankMismatch):
        mod.act(E(4, 1, 0), mod.vacuum())
    with pytest.raises(RankMismatch):
        mod.act_elt(LieElt.gen(2, E(1, 2)), mod.vacuum())


def test_bad_vacuum_data_rejected():
    bad = VacuumSpec(2, 0, 1, {(1, 2): {(0, 0): 1}}, "bad")
    assert not check_zero_mode_relations(bad)
    with pytest.raises(ValueError):
        InducedModule(bad)
    assert check_zero_mode_relations(natural2(3, 1))


def test_dump_is_readable():
    mod = MODULES["trivial"]
    v = mod.act(E(1, 2, -1), mod.vacuum())
    assert mod.dump(v) == ["1 * E[1,2]t^-1 |vac:0>"]
