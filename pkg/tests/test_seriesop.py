from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from yangian_eval.images import ev_T, ev_T_template_list
from yangian_eval.scalars import PolyQ
from yangian_eval.seriesop import (
    Affine,
    Factor,
    MatrixEvaluator,
    NonConformingTemplate,
    PowerSeriesOp,
    SeriesError,
    SeriesOpTemplate,
    SparseEvaluator,
    mat_is_zero,
    omega_template,
    op_commutator,
    op_compose,
    op_const,
    op_leaf,
    op_letter,
    op_scale,
    op_sum,
    parse_affine,
    parse_template,
    perm_sign,
    quantum_minor,
    series_invert,
    series_mul,
    series_shift,
)
from yangian_eval.vermamod import InducedModule, natural, trivial

HB, LV, LAM = Fraction(3, 7), Fraction(-5, 4), Fraction(2, 3)


@pytest.fixture(scope="module")
def module():
    return InducedModule(trivial(3, LV, LAM))


def test_affine_round_trip():
    for text in ["-z1-1", "z1-z2", "z2+1", "0", "2*z1-3", "s"]:
        assert parse_affine(str(parse_affine(text))) == parse_affine(text)
    assert (Affine.var("z", 1, 2) - Affine.var("z")).const == 2


def test_nonconforming_templates_are_rejected():
    with pytest.raises(NonConformingTemplate):
        # exponent sum depends on z
        SeriesOpTemplate(3, [Factor(1, 2, Affine.var("z"))])
    with pytest.raises(NonConformingTemplate):
        # z enters from the right with coefficient -1
        SeriesOpTemplate(3, [Factor(1, 2, Affine.var("z")), Factor(2, 1, Affine.var("z", -1))])
    with pytest.raises(NonConformingTemplate):
        SeriesOpTemplate(3, [Factor(1, 5, Affine())])
    with pytest.raises(NonConformingTemplate):
        SeriesOpTemplate(3, [])


def test_shift_mismatch_in_sums():
    with pytest.raises(SeriesError):
        op_sum([op_letter(3, 1, 2, 1), op_letter(3, 1, 2, 0)])


@pytest.mark.parametrize("r", [2, 3, 4])
def test_template_dump_round_trip(module, r):
    ev = MatrixEvaluator(module)
    for t in ev_T_template_list(3, 1, 2, r, HB, LV):
        back = parse_template(3, t.dump(), t.coef, LV)
        assert back.canonical() == t.canonical()
        for d in range(3):
            assert ev.block(op_leaf(back), d) == ev.block(op_leaf(t), d)


@pytest.mark.parametrize("i,j,r", [(1, 2, 2), (2, 2, 3), (3, 1, 4), (1, 1, 2)])
def test_sparse_and_matrix_routes_agree(module, i, j, r):
    op = op_commutator(ev_T(i, j, r, 3, HB, LV), op_letter(3, 2, 1, -1))
    sp, mx = SparseEvaluator(module), MatrixEvaluator(module)
    for d in range(3):
        m = mx.block(op, d)
        out_index = {k: a for a, k in enumerate(module.piece(d - op.shift))}
        for col, key in enumerate(module.piece(d)):
            vec = sp.apply_key(op, key)
            dense = [0] * m.nrows()
            for k, v in vec.items():
                dense[out_index[k]] = v
            assert [Fraction(int(m[a, col].p), int(m[a, col].q)) for a in range(m.nrows())] == dense


def test_ev_T_2_on_depth_one_vectors(module):
    """T2_ij E_ab t^-1|vac> = hbar (d_ja c E_ib t^-1 + d_ab E_ij t^-1)|vac> (hand computation)."""
    sp = SparseEvaluator(module)
    for (i, j, a, b) in [(1, 2, 2, 3), (1, 2, 3, 3), (2, 1, 1, 1), (3, 3, 3, 1)]:
        v = {(((-1, a, b),), 0): 1}
        got = sp.apply(ev_T(i, j, 2, 3, HB, LV), v)
        want = {}
        if j == a:
            want[(((-1, i, b),), 0)] = HB * LV
        if a == b:
            k = (((-1, i, j),), 0)
            want[k] = want.get(k, 0) + HB
        assert got == {k: x for k, x in want.items() if x}


def test_box_enlargement_changes_nothing(module):
    D = 3
    small, big, exact = MatrixEvaluator(module, box=D - 1), MatrixEvaluator(module, box=2 * D), MatrixEvaluator(module)
    for r in (2, 3, 4):
        op = ev_T(1, 3, r, 3, HB, LV)
        for d in range(D + 1):
            assert small.block(op, d) == big.block(op, d) == exact.block(op, d)


def test_symbolic_coefficients_with_sparse_backend():
    h, c = PolyQ.gens(("hbar", "c"))
    mod = InducedModule(natural(3, c))
    sp = SparseEvaluator(mod)
    # [T1_12, T2_21] = T2_11 - T2_22 on a depth-1 vector, with symbolic hbar and c
    lhs = op_commutator(ev_T(1, 2, 1, 3, h, c), ev_T(2, 1, 2, 3, h, c))
    rhs = op_sum([ev_T(1, 1, 2, 3, h, c), op_scale(-1, ev_T(2, 2, 2, 3, h, c))])
    for key in mod.piece(1):
        diff = sp.apply_key(lhs, key)
        for k, v in sp.apply_key(rhs, key).items():
            diff[k] = diff.get(k, 0) - v
        assert not any(diff.values())


def test_matrix_backend_identity_and_constants(module):
    ev = MatrixEvaluator(module)
    assert mat_is_zero(ev.block(op_sum([op_const(3, 2), op_scale(-2, op_const(3, 1))]), 2))
    # E_12 t E_21 t^-1 |vac> = (E_11 - E_22 + c)|vac> = c |vac>
    m = ev.block(op_compose(op_letter(3, 1, 2, 1), op_letter(3, 2, 1, -1)), 0)
    assert (m.nrows(), m.ncols()) == (1, 1)
    assert Fraction(int(m[0, 0].p), int(m[0, 0].q)) == LV


def _scalar_series(values):
    return PowerSeriesOp.scalar(3, len(values) - 1, values)


def _vals(s):
    return [x.args[0] if x.kind == "const" else 0 for x in s.coeffs]


coef_lists = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=4, max_size=4)


@given(coef_lists, st.fractions(min_value=-2, max_value=2, max_denominator=3), st.fractions(min_value=-2, max_value=2, max_denominator=3))
def test_series_shift_composes(vals, a, b):
    s = _scalar_series(vals)
    assert _vals(series_shift(series_shift(s, a), b)) == _vals(series_shift(s, a + b))


@given(coef_lists)
def test_series_invert_is_two_sided(vals):
    vals = [Fraction(1) + abs(vals[0])] + vals[1:]
    s = _scalar_series(vals)
    inv = series_invert(s)
    one = [Fraction(1)] + [Fraction(0)] * 3
    assert [Fraction(x) for x in _vals(series_mul(s, inv))] == one
    assert [Fraction(x) for x in _vals(series_mul(inv, s))] == one


def test_series_errors_and_truncation_flag():
    with pytest.raises(SeriesError):
        series_invert(_scalar_series([0, 1]))
    with pytest.raises(SeriesError):
        series_invert(PowerSeriesOp(3, [op_letter(3, 1, 1)]))
    prod = series_mul(_scalar_series([1, 2, 3]), _scalar_series([1, 1]))
    assert prod.order == 1 and prod.meta.get("truncated")


def test_perm_sign():
    assert perm_sign((0, 1, 2)) == 1
    assert perm_sign((1, 0, 2)) == -1
    assert perm_sign((1, 2, 0)) == 1


def test_quantum_minor_of_scalar_series():
    # t_ab(u) = d_ab: the l x l minor is l! on distinct equal lists and 0 otherwise
    def series(a, b):
        return _scalar_series([1 if a == b else 0, 0, 0])

    assert _vals(quantum_minor((1, 2), (1, 2), series, HB)) == [2, 0, 0]
    assert _vals(quantum_minor((1, 2), (2, 1), series, HB)) == [-2, 0, 0]
    assert _vals(quantum_minor((1, 1), (1, 2), series, HB)) == [0, 0, 0]


def test_omega_template_is_an_involution():
    for t in ev_T_template_list(3, 1, 3, 4, HB, LV):
        assert omega_template(omega_template(t)).canonical() == t.canonical()
