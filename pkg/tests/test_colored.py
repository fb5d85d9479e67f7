import pytest

import colored
from braid import parse_braid
from conftest import GENUS, LG1_FIGURE8, LG1_TREFOIL
from errors import NotAKnot
from laurent import LaurentPoly, Q, S, RatFunc, bracket
from rmatrices import lg_to_v_vars, v_vars_from_lg


@pytest.fixture(autouse=True)
def fresh_memo():
    colored.clear_memo()
    yield
    colored.clear_memo()


@pytest.mark.parametrize("n, table", [
    (1, [[1]]),
    (2, [[1, 1], [1]]),
    (3, [[1, 3, 1], [2, 2], [1]]),
    (4, [[1, 6, 6, 1], [3, 8, 3], [3, 3], [1]]),
    (5, [[1, 10, 20, 10, 1], [4, 20, 20, 4], [6, 15, 6], [4, 4], [1]]),
    (6, [[1, 15, 50, 50, 15, 1], [5, 40, 75, 40, 5], [10, 45, 45, 10], [10, 24, 10], [5, 5], [1]]),
])
def test_multiplicities(n, table):
    assert colored.multiplicities(n) == table
    dims = sum(m * 4 * (k + 1) for k, row in enumerate(table) for m in row)
    assert dims == 4 ** n


def test_multiplicities_need_positive_order():
    with pytest.raises(ValueError):
        colored.multiplicities(0)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_sum_rule_vanishes(n):
    assert colored.sum_rule(n) == 0


def test_sum_rule_for_one_copy():
    assert colored.sum_rule(1) == 1
    assert colored.coeff_A(1, 0, 0) == 1


def test_coeff_A_matches_modified_dimensions():
    for k in range(3):
        for l in range(3 - k):
            assert colored.coeff_A(3, k, l) == colored.coeff_A_from_dimensions(3, k, l)
            assert isinstance(colored.cleared_A(3, k, l), LaurentPoly)
    with pytest.raises(ValueError):
        colored.coeff_A(2, 2, 0)


def test_coeff_A_sign_alternates():
    magnitude = RatFunc(bracket(0, 2) * bracket(1, 0) * bracket(1, 1),
                        bracket(0, 1) * bracket(2, 0) * bracket(2, 2))
    assert colored.coeff_A(2, 1, 0) == -magnitude
    assert colored.coeff_A(2, 1, 0) * colored.common_denominator(2) == colored.cleared_A(2, 1, 0)


def test_b2_coefficients():
    b00, b01, b10 = colored.coeff_B2()
    a, c = colored.LAMBDA1, colored.LAMBDA2
    D = colored.b2_denominator()
    assert b00 == RatFunc(a * a * (c - 1) * (c + 1), D)
    assert b01 == RatFunc(c * c * (1 - a) * (1 + a), D)
    assert b10 == RatFunc(a * c + 1, (a + 1) * (c + 1))
    assert b00 + b01 + b10 == 1


def test_b2_coefficients_in_lg_variables():
    b00, b01, b10 = colored.coeff_B2()
    assert lg_to_v_vars(b00) == colored.coeff_A(2, 0, 0) * S ** 2
    assert lg_to_v_vars(b01) == colored.coeff_A(2, 0, 1) * S ** -2 * Q ** -2
    assert lg_to_v_vars(b10) == -colored.coeff_A(2, 1, 0)


@pytest.mark.parametrize("text, expected", [
    ("1 |", [[0, 0, "1"]]),
    ("2 | 1", [[0, 0, "1"]]),
    ("2 | 1 1 1", [[-1, 0, "1"], [0, 0, "-1"], [1, 0, "1"]]),
    ("3 | 1 -2 1 -2", [[-1, 0, "-1"], [0, 0, "3"], [1, 0, "-1"]]),
    ("2 | -1 -1 -1 -1 -1", [[-2, 0, "1"], [-1, 0, "-1"], [0, 0, "1"], [1, 0, "-1"], [2, 0, "1"]]),
])
def test_alexander_burau(text, expected):
    assert colored.alexander_burau(parse_braid(text)) == LaurentPoly.from_json(expected)


def test_alexander_needs_a_knot():
    with pytest.raises(NotAKnot):
        colored.alexander_burau(parse_braid("2 | 1 1"))


def test_lg1_values_and_memo(knot):
    trefoil = knot("3_1")
    assert colored.lg1(trefoil) == LG1_TREFOIL
    assert ("lg1", trefoil) in colored._memo
    assert colored.lg1(knot("4_1")) == LG1_FIGURE8
    assert colored.lg1(knot("0_1")) == 1


def test_v1_is_lg1_in_v_variables(knot):
    trefoil = knot("3_1")
    assert colored.v1(trefoil) == v_vars_from_lg(LG1_TREFOIL)
    assert colored.lg_v_agree(trefoil)


def test_unknot_colored_values(knot):
    unknot = knot("0_1")
    assert colored.lg2_direct(unknot) == 1
    assert colored.lg_via_cable(unknot, 2) == 1


def test_lg2_routes_agree_on_trefoil(knot):
    trefoil = knot("3_1")
    direct = colored.lg2_direct(trefoil)
    assert colored.lg2_via_cable(trefoil) == direct
    assert colored.check_thm_n0(trefoil, 2)
    assert all(es % 2 == 0 for es, _ in direct.terms)


def test_cable_identity_with_half_twist(knot):
    trefoil = knot("3_1")
    assert colored.check_LGn1_conjecture(trefoil)
    assert isinstance(colored.lgn1_printed_form_holds(trefoil), bool)


def test_v2_from_cable_maps_to_lg2(knot):
    trefoil = knot("3_1")
    v2 = colored.v2_via_cable(trefoil)
    assert colored.lg2_from_v2(v2) == colored.lg2_direct(trefoil)


@pytest.mark.parametrize("name, n", [
    ("3_1", 1), ("3_1", 2), ("4_1", 1),
    pytest.param("4_1", 2, marks=pytest.mark.slow),
])
def test_specializations(knot, name, n):
    rows = colored.verify_specializations(knot(name), n, genus=GENUS[name])
    failed = [row for row in rows if not row["pass"]]
    assert not failed
    names = {row["check"] for row in rows}
    assert f"lg{n}_genus_bound" in names
    if n == 2:
        assert "v2_genus_sharp" in names


def test_specializations_reject_other_orders(knot):
    with pytest.raises(ValueError):
        colored.verify_specializations(knot("3_1"), 3)


def test_cable_route_limits(knot):
    with pytest.raises(ValueError):
        colored.lg_via_cable(knot("3_1"), 4)
    with pytest.raises(NotAKnot):
        colored.lg2_via_cable(parse_braid("2 | 1 1"))


@pytest.mark.slow
@pytest.mark.parametrize("name", ["4_1", "5_1", "5_2"])
def test_lg2_routes_agree_slow(knot, name):
    b = knot(name)
    assert colored.lg2_via_cable(b) == colored.lg2_direct(b)
    assert colored.check_LGn1_conjecture(b)
    assert colored.lg2_from_v2(colored.v2_via_cable(b)) == colored.lg2_direct(b)


@pytest.mark.slow
def test_lg3_routes_agree_on_trefoil(knot):
    trefoil = knot("3_1")
    assert colored.lg3_direct(trefoil) == colored.lg_via_cable(trefoil, 3)
    assert colored.check_thm_n0(trefoil, 3)


def test_parity_of_highest_weight_vector_is_irrelevant(knot):
    trefoil = knot("3_1")
    assert colored.lg_direct(trefoil, 2, parity=1) == colored.lg_direct(trefoil, 2, parity=0)
