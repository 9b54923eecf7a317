import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from yangian_eval.scalars import (
    HBAR,
    LAMBDA,
    LEVEL,
    MissingParameter,
    ParameterMismatch,
    PolyQ,
    draw_parameters,
    poly_arith,
    rat_str,
    specialize,
)

PARAMS = ("hbar", "c")
small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polys(draw):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=4))
    return PolyQ(PARAMS, terms)


@given(polys(), polys(), small, small)
def test_ring_operations_commute_with_specialization(p, q, h, c):
    at = {"hbar": h, "c": c}
    assert (p + q).specialize(at) == p.specialize(at) + q.specialize(at)
    assert (p * q).specialize(at) == p.specialize(at) * q.specialize(at)
    assert (p - q).specialize(at) == p.specialize(at) - q.specialize(at)


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert p - p == PolyQ(PARAMS)


def test_constants_and_powers():
    h, c = PolyQ.gens(PARAMS)
    assert (h + 1) ** 2 == h * h + 2 * h + 1
    assert (2 * h).specialize({"hbar": Fraction(1, 2), "c": 0}) == 1
    assert PolyQ.const(PARAMS, 3).is_constant()
    assert (h / 2).specialize({"hbar": 1, "c": 0}) == Fraction(1, 2)


def test_specialize_errors():
    h, c = PolyQ.gens(PARAMS)
    with pytest.raises(MissingParameter):
        (h + c).specialize({"hbar": 1})
    other = PolyQ.var(("x",), "x")
    with pytest.raises(ParameterMismatch):
        h + other


def test_specialize_passes_rationals_through():
    assert specialize(Fraction(3, 4), {}) == Fraction(3, 4)
    h, _ = PolyQ.gens(PARAMS)
    assert poly_arith(h, h, "mul") == h * h


def test_draw_parameters_is_seeded_and_hbar_nonzero():
    a = [draw_parameters(random.Random(7), [HBAR, LEVEL, LAMBDA]) for _ in range(2)]
    assert a[0] == a[1]
    for seed in range(50):
        assert draw_parameters(random.Random(seed), [HBAR, LEVEL])[HBAR] != 0


def test_rat_str():
    assert rat_str(Fraction(-3, 4)) == "-3/4"
    assert rat_str(2) == "2/1"
