from fractions import Fraction

import pytest

from yangian_eval.images import (
    GenId,
    ImageBuilder,
    NotInPaper,
    UnsupportedGenerator,
    ev_minimalistic,
    ev_T,
    ev_T_template_list,
    higher_image,
    iota_image,
)
from yangian_eval.loopalg import C, E, LieElt
from yangian_eval.seriesop import MatrixEvaluator, SparseEvaluator, op_commutator, op_scale, op_sum
from yangian_eval.vermamod import InducedModule, natural, trivial

HB, LV, LAM = Fraction(3, 7), Fraction(-5, 4), Fraction(2, 3)
N = 3


@pytest.fixture(scope="module")
def trivial_module():
    return InducedModule(trivial(N, LV, LAM))


@pytest.fixture(scope="module")
def ib():
    return ImageBuilder(N, HB, LV, R=3)


def same_operator(module, a, b, D=2):
    ev = MatrixEvaluator(module)
    diff = op_sum([a, op_scale(-1, b)])
    return all(ev.is_zero(diff, d) for d in range(D + 1))


def test_ev_T_base_cases():
    assert ev_T(1, 1, 0, N).kind == "const" and ev_T(1, 1, 0, N).args[0] == 1
    assert ev_T(1, 2, 0, N).args[0] == 0
    t1 = ev_T(1, 2, 1, N)
    assert t1.kind == "leaf" and t1.args[0].dump() == "coef=1 :: E[1,2]t^(0)"
    with pytest.raises(IndexError):
        ev_T(0, 1, 1, N)
    with pytest.raises(IndexError):
        ev_T(1, 1, -1, N)


def test_ev_T_two_is_a_single_double_sum():
    (t,) = ev_T_template_list(N, 1, 2, 2, HB, LV)
    assert t.coef == HB and t.weight.deg == 0
    assert t.dump() == f"coef={HB} weight=h_0((z1+1)*c) :: sum[x1,z1>=0] E[1,x1]t^(-z1-1) E[x1,2]t^(z1+1)"


def test_ev_T_three_structure():
    # p counts factors: a 2-factor template weighted by h_1((z1+1)c) and a 3-factor one weighted by 1
    ts = ev_T_template_list(N, 2, 3, 3, HB, LV)
    assert [len(t.factors) for t in ts] == [2, 3]
    assert all(t.coef == HB**2 for t in ts)
    assert ts[0].weight.value({"z1": 4}) == 5 * LV
    assert ts[1].weight.value({"z1": 4, "z2": 1}) == 1


def test_minimalistic_zero_modes(trivial_module):
    x0 = ev_minimalistic(GenId("Xplus", 0), N, HB, LV)
    assert x0.args[0].dump() == "coef=1 :: E[3,1]t^(1)"
    y0 = ev_minimalistic(GenId("Xminus", 0), N, HB, LV)
    assert y0.args[0].dump() == "coef=1 :: E[1,3]t^(-1)"
    sp = SparseEvaluator(trivial_module)
    cases = {1: LieElt(N, {E(1, 1): 1, E(2, 2): -1}), 0: LieElt(N, {E(3, 3): 1, E(1, 1): -1, C: 1})}
    for i, elt in cases.items():
        h0 = ev_minimalistic(GenId("H", i), N, HB, LV)
        for d in range(3):
            for key in trivial_module.piece(d):
                assert sp.apply_key(h0, key) == trivial_module.act_elt(elt, {key: 1})


def test_minimalistic_x11_on_vacua():
    nat = InducedModule(natural(N, LV))
    x = ev_minimalistic(GenId("Xplus", 1, 0, 1), N, HB, LV)
    # only the s = 0, k = 1 term survives: hbar E_11 E_12 e_2 = hbar e_1
    assert SparseEvaluator(nat).apply(x, {((), 1): 1}) == {((), 0): HB}
    triv = InducedModule(trivial(N, LV, LAM))
    assert SparseEvaluator(triv).apply(x, triv.vacuum()) == {}


def test_not_in_paper_and_unsupported():
    with pytest.raises(NotInPaper):
        ev_minimalistic(GenId("H", 0, 0, 1), N, HB, LV)
    with pytest.raises(NotInPaper):
        ev_minimalistic(GenId("Xplus", 0, 0, 1), N, HB, LV)
    with pytest.raises(UnsupportedGenerator):
        ev_minimalistic(GenId("Xplus", 1, 0, 2), N, HB, LV)
    with pytest.raises(UnsupportedGenerator):
        iota_image(GenId("Xplus", 0, 0, 0), N, HB, LV)
    with pytest.raises(UnsupportedGenerator):
        ImageBuilder(N, HB, LV).gauss("+", N)
    with pytest.raises(ValueError):
        ImageBuilder(N, 0, LV)
    with pytest.raises(ValueError):
        ImageBuilder(N, HB, LV, convention="bogus")


def test_iota_images(trivial_module):
    assert iota_image(GenId("Xplus", 1), N, HB, LV).args[0].dump() == "coef=1 :: E[1,2]t^(0)"
    for i in (1, 2):
        a = iota_image(GenId("Htilde", i, 0, 1), N, HB, LV)
        b = ev_minimalistic(GenId("Htilde", i, 0, 1), N, HB, LV)
        assert same_operator(trivial_module, a, b)


def test_higher_images_match_closed_forms(trivial_module, ib):
    assert same_operator(trivial_module, ib.higher("+", 1, 0), ev_T(1, 2, 1, N))
    assert same_operator(trivial_module, ib.higher("-", 1, 0), ev_T(2, 1, 1, N))
    for sign, fam in (("+", "Xplus"), ("-", "Xminus")):
        for i in (1, 2):
            assert same_operator(trivial_module, ib.higher(sign, i, 1), ib.minimalistic(GenId(fam, i, 0, 1)))


def test_higher_image_wrapper_and_off_diagonal(trivial_module, ib):
    assert same_operator(trivial_module, higher_image("+", 2, 1, N, HB, LV), ib.higher("+", 2, 1))
    off = op_commutator(ib.higher("+", 1, 1), ib.higher("-", 2, 0))
    ev = MatrixEvaluator(trivial_module)
    assert all(ev.is_zero(off, d) for d in range(3))


def test_competing_conventions_disagree(trivial_module):
    plain = ImageBuilder(N, HB, LV, R=2, convention="plain")
    canon = ImageBuilder(N, HB, LV, R=2)
    assert not same_operator(trivial_module, plain.higher("+", 1, 1), canon.minimalistic(GenId("Xplus", 1, 0, 1)))
    printed_shift = ImageBuilder(N, HB, LV, R=2, shift="printed")
    assert not same_operator(trivial_module, printed_shift.higher("+", 2, 1),
                             canon.minimalistic(GenId("Xplus", 2, 0, 1)))
