import json

import pytest

from braid import (BraidWord, cable, components, conjugate, format_braid, full_twist,
                   is_knot, linking_numbers, load_knot_table, parallel, parse_braid,
                   permutation, resolve_knot, self_framings, stabilize, writhe)
from errors import (BraidSyntaxError, GeneratorOutOfRange, NotAKnot, ParseError,
                    ValidationError)
from laurent import LaurentPoly


@pytest.mark.parametrize("text, strands, word, w", [
    ("2 | 1 1 1", 2, (1, 1, 1), 3),
    ("1 |", 1, (), 0),
    ("3 | 1 -2 1 -2", 3, (1, -2, 1, -2), 0),
    ("  4|2 -3   1 ", 4, (2, -3, 1), 1),
])
def test_parse_braid(text, strands, word, w):
    b = parse_braid(text)
    assert (b.strands, b.word) == (strands, word)
    assert writhe(b) == w


@pytest.mark.parametrize("text, error", [
    ("1 1 1", BraidSyntaxError),
    ("2 | 1 x", BraidSyntaxError),
    ("0 |", BraidSyntaxError),
    ("2 | 1 0", BraidSyntaxError),
    ("2 | 2", GeneratorOutOfRange),
    ("3 | -3", GeneratorOutOfRange),
])
def test_parse_braid_rejects(text, error):
    with pytest.raises(error):
        parse_braid(text)


def test_format_braid_is_parseable():
    assert format_braid(parse_braid("3|1  -2 1")) == "3 | 1 -2 1"
    assert format_braid(parse_braid("1 |")) == "1 |"
    assert str(BraidWord(2, (1,))) == "2 | 1"


def test_components():
    assert components(parse_braid("2 | 1 1 1")) == [[1, 2]]
    assert components(parse_braid("2 |")) == [[1], [2]]
    assert permutation(parse_braid("3 | 1 2")) == [2, 0, 1]
    assert is_knot(parse_braid("3 | 1 -2 1 -2"))
    assert not is_knot(parse_braid("2 | 1 1"))


def test_self_framings_and_linking(knot):
    trefoil = knot("3_1")
    assert self_framings(trefoil) == [3]
    hopf = parse_braid("2 | 1 1")
    assert self_framings(hopf) == [0, 0]
    assert linking_numbers(hopf) == {(0, 1): 1}


def test_cable():
    assert cable(parse_braid("2 | 1"), 2) == parse_braid("4 | 2 1 3 2")
    trefoil = parse_braid("2 | 1 1 1")
    assert cable(trefoil, 1) == trefoil
    cabled = cable(trefoil, 2)
    assert cabled.strands == 4 and len(cabled) == 12
    assert writhe(cabled) == 4 * writhe(trefoil)
    assert len(components(cabled)) == 2
    # blackboard copies link w times before the correction
    assert self_framings(cabled) == [3, 3]
    assert linking_numbers(cabled) == {(0, 1): 3}


def test_parallel_unlinks_the_copies(knot):
    p = parallel(knot("3_1"), 2, 0)
    assert p.word[:12] == cable(knot("3_1"), 2).word
    assert p.word[12:] == tuple(-g for g in full_twist(2)) * 3
    assert linking_numbers(p) == {(0, 1): 0}
    assert self_framings(p) == [3, 3]


def test_parallel_with_half_twist_is_a_knot(knot):
    p0 = parallel(knot("3_1"), 2, 0)
    p1 = parallel(knot("3_1"), 2, 1)
    assert p1.word == p0.word + (1,)
    assert is_knot(p1)


def test_parallel_of_unknot_and_three_copies(knot):
    assert parallel(knot("0_1"), 2, 0) == BraidWord(2, ())
    p = parallel(knot("4_1"), 3, 0)
    assert p.strands == 9
    assert len(components(p)) == 3
    assert set(linking_numbers(p).values()) == {0}


def test_parallel_requires_a_knot():
    with pytest.raises(NotAKnot):
        parallel(parse_braid("2 | 1 1"), 2, 0)


def test_full_twist():
    assert full_twist(3) == [1, 2, 1, 2, 1, 2]
    assert full_twist(1) == []


def test_markov_moves_keep_knot_type_data(knot):
    b = knot("4_1")
    assert is_knot(conjugate(b, 2))
    s = stabilize(b, -1)
    assert s.strands == 4 and s.word[-1] == -3
    assert is_knot(s)


def test_load_fixture_table(small_table):
    records = load_knot_table(small_table)
    assert [r.name for r in records] == ["0_1", "3_1", "4_1", "5_1", "5_2"]
    trefoil = records[1]
    assert trefoil.braid == parse_braid("2 | 1 1 1")
    assert trefoil.genus == 1
    assert trefoil.alexander == LaurentPoly.from_json([[-1, 0, "1"], [0, 0, "-1"], [1, 0, "1"]])


def test_shipped_census_validates():
    records = load_knot_table()
    assert len(records) == 36
    assert max(r.crossings for r in records) == 8
    assert all(r.genus is not None for r in records)


def _write(tmp_path, rows):
    path = tmp_path / "table.jsonl"
    path.write_text("\n".join(json.dumps(r) if isinstance(r, dict) else r for r in rows) + "\n")
    return str(path)


def test_table_rejects_links(tmp_path):
    path = _write(tmp_path, [{"name": "hopf", "strands": 2, "word": "1 1", "crossings": 2}])
    with pytest.raises(ValidationError) as info:
        load_knot_table(path)
    assert info.value.line == 1


def test_table_rejects_wrong_alexander(tmp_path):
    bad = {"name": "3_1", "strands": 2, "word": "1 1 1", "crossings": 3,
           "alexander": [[-1, 0, "-1"], [0, 0, "3"], [1, 0, "-1"]]}
    path = _write(tmp_path, ["# comment", bad])
    with pytest.raises(ValidationError) as info:
        load_knot_table(path)
    assert info.value.line == 2


def test_table_rejects_bad_json(tmp_path):
    path = _write(tmp_path, ["{not json"])
    with pytest.raises(ParseError):
        load_knot_table(path)


def test_resolve_knot(small_table):
    records = load_knot_table(small_table)
    assert resolve_knot("trefoil", records) == ("3_1", parse_braid("2 | 1 1 1"))
    assert resolve_knot("figure8", records)[0] == "4_1"
    assert resolve_knot("2 | 1 1 1")[1] == parse_braid("2 | 1 1 1")
    with pytest.raises(ParseError):
        resolve_knot("9_42", records)


@pytest.mark.parametrize("field, value", [("crossings", "three"), ("genus", "one"), ("crossings", None)])
def test_table_rejects_non_integer_fields(tmp_path, field, value):
    record = {"name": "3_1", "strands": 2, "word": "1 1 1", "crossings": 3, field: value}
    path = _write(tmp_path, [{"name": "0_1", "strands": 1, "word": "", "crossings": 0}, record])
    with pytest.raises(ValidationError) as info:
        load_knot_table(path)
    assert info.value.line == 2
