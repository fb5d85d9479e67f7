import random

import pytest

from braid import BraidWord, conjugate, parse_braid, permutation, stabilize, writhe
from conftest import LG1_FIGURE8, LG1_TREFOIL
from errors import ChargeMismatch
from laurent import ONE, Q, S, ChargedLaurent, LaurentPoly
from rmatrices import build_R_LG
from statesum import (SparseOperator, bring_to_front, check_inverse, check_yang_baxter,
                      eval_link, full_closure_is_zero, make_datum, partial_trace,
                      quantum_dimension, verify_datum)


@pytest.fixture(scope="module")
def r_lg():
    return build_R_LG()


def _scalar_operator(value):
    return SparseOperator((1, 1), {0: [(0, value)]})


def test_sparse_operator_drops_zero_entries():
    op = SparseOperator((2, 2), {0: [(0, S), (0, -S)], 1: [(1, Q)]})
    assert 0 not in op.columns
    assert op.nonzero_count() == 1
    assert op.entry_at((0, 1), (0, 1)) == Q


def test_sparse_operator_algebra():
    identity = SparseOperator.identity(2)
    assert identity.is_identity()
    op = SparseOperator((2, 2), {i: [(i, S)] for i in range(4)})
    assert op.compose(op.inverse()).is_identity()
    assert op.trace() == 4 * S
    assert op.subtract(identity.scale(S)).columns == {}
    charged = identity.scale(ChargedLaurent(2, ONE))
    assert charged.charge == 2
    with pytest.raises(ChargeMismatch):
        charged.add(identity)


def test_scalar_datum_absorbs_framing():
    datum = make_datum(_scalar_operator(Q), "scalar")
    assert datum.mu == [1]
    assert datum.twist == Q
    report = verify_datum(datum)
    assert report["yang_baxter"] and report["inverse"] and report["enhancement"]
    assert not report["quantum_dimension_zero"]
    assert not report["twist_is_one"]
    # q^3 from the crossings, q^-3 from the framing correction
    assert eval_link(parse_braid("2 | 1 1 1"), datum) == 1


def test_enhancement_sign_fixed_by_first_entry(r_lg):
    datum = make_datum(_scalar_operator(-Q), "negated scalar")
    assert datum.mu == [1]
    assert datum.twist == -Q
    assert eval_link(parse_braid("2 | 1 1 1"), datum) == 1
    assert r_lg.mu[0].is_monomial() and next(iter(r_lg.mu[0].terms.values())) == 1


def test_r_lg_datum(r_lg):
    assert r_lg.d == 4
    assert verify_datum(r_lg) == {
        "yang_baxter": True,
        "inverse": True,
        "enhancement": True,
        "quantum_dimension_zero": True,
        "twist_is_one": True,
    }
    expected = [S ** -2, -S ** -2, -S ** -2 * Q ** -2, S ** -2 * Q ** -2]
    assert sorted(m.format() for m in r_lg.mu) == sorted(m.format() for m in expected)
    assert quantum_dimension(r_lg).is_zero()


def test_r_lg_partial_trace_is_scalar(r_lg):
    forward = partial_trace(r_lg.R, r_lg.mu)
    assert forward == {(a, a): ONE for a in range(4)}


def test_checks_reject_broken_operators(r_lg):
    broken = r_lg.R.scale(S)
    assert check_yang_baxter(broken)  # scaling keeps Yang-Baxter
    assert not check_inverse(broken, r_lg.R_inv)
    lopsided = SparseOperator((2, 2), {0: [(0, S)], 1: [(1, ONE)], 2: [(2, ONE)], 3: [(3, ONE)]})
    assert not check_yang_baxter(lopsided)


def test_unknot(r_lg):
    assert eval_link(parse_braid("1 |"), r_lg) == 1
    assert eval_link(parse_braid("2 | 1"), r_lg) == 1
    assert eval_link(parse_braid("2 | -1"), r_lg) == 1


def test_trefoil_and_figure_eight(r_lg, knot):
    assert eval_link(knot("3_1"), r_lg).to_laurent() == LG1_TREFOIL
    assert eval_link(knot("4_1"), r_lg).to_laurent() == LG1_FIGURE8


def test_figure_eight_is_amphichiral(r_lg):
    assert eval_link(parse_braid("3 | -1 2 -1 2"), r_lg).to_laurent() == LG1_FIGURE8


def test_markov_invariance(r_lg, knot):
    trefoil = knot("3_1")
    for moved in (conjugate(trefoil, 1), stabilize(trefoil, 1), stabilize(trefoil, -1)):
        assert eval_link(moved, r_lg).to_laurent() == LG1_TREFOIL


@pytest.mark.parametrize("seed", range(4))
def test_random_conjugates_keep_the_value(r_lg, knot, seed):
    rng = random.Random(seed)
    b = knot("4_1")
    conjugator = tuple(rng.choice([1, -1]) * rng.randint(1, b.strands - 1)
                       for _ in range(rng.randint(1, 3)))
    inverse = tuple(-g for g in reversed(conjugator))
    moved = BraidWord(b.strands, conjugator + b.word + inverse)
    assert eval_link(moved, r_lg).to_laurent() == LG1_FIGURE8
    strand = rng.randint(1, b.strands)
    assert eval_link(moved, r_lg, open_strand=strand).to_laurent() == LG1_FIGURE8


@pytest.mark.parametrize("name, strand, expected", [
    ("3_1", 2, LG1_TREFOIL),
    ("4_1", 2, LG1_FIGURE8),
    ("4_1", 3, LG1_FIGURE8),
])
def test_open_strand_does_not_matter(r_lg, knot, name, strand, expected):
    b = knot(name)
    value = eval_link(b, r_lg, open_strand=strand)
    assert value == eval_link(b, r_lg, open_strand=1)
    assert value.to_laurent() == expected


def test_open_strand_out_of_range(r_lg, knot):
    with pytest.raises(ValueError):
        eval_link(knot("4_1"), r_lg, open_strand=4)
    with pytest.raises(ValueError):
        eval_link(knot("4_1"), r_lg, open_strand=0)


def test_bring_to_front_is_a_conjugate(knot):
    b = knot("4_1")
    moved = bring_to_front(b, 3)
    assert moved.word == (1, 2) + b.word + (-2, -1)
    shift = BraidWord(b.strands, moved.word[:2])
    assert permutation(shift)[0] == 2
    assert writhe(moved) == writhe(b)
    assert bring_to_front(b, 1) == b


def test_simplicity_check(r_lg, knot):
    assert eval_link(knot("3_1"), r_lg, check_simple=True).to_laurent() == LG1_TREFOIL


def test_full_closure_vanishes(r_lg, knot):
    assert full_closure_is_zero(knot("3_1"), r_lg)


def test_parallel_jobs_match_serial(r_lg, knot):
    b = knot("5_2")
    assert eval_link(b, r_lg, jobs=2) == eval_link(b, r_lg, jobs=1)
    assert eval_link(b, r_lg, jobs=1, progress=True) == eval_link(b, r_lg, jobs=1)


def test_eval_link_charge(r_lg, knot):
    value = eval_link(knot("3_1"), r_lg)
    assert isinstance(value, ChargedLaurent)
    assert value.charge == 0
    assert isinstance(value.to_laurent(), LaurentPoly)
