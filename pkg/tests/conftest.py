import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from braid import parse_braid  # noqa: E402
from laurent import LaurentPoly  # noqa: E402

FIXTURES = os.path.join(ROOT, "tests", "fixtures")
SMALL_TABLE = os.path.join(FIXTURES, "knots_small.jsonl")

BRAIDS = {
    "0_1": "1 |",
    "3_1": "2 | 1 1 1",
    "4_1": "3 | 1 -2 1 -2",
    "5_1": "2 | 1 1 1 1 1",
    "5_2": "3 | 1 1 1 2 -1 2",
}
GENUS = {"0_1": 0, "3_1": 1, "4_1": 1, "5_1": 2, "5_2": 1}

# LG^(1) in (s, q) exponents
LG1_TREFOIL = LaurentPoly.from_json([
    [-4, -4, "1"], [-2, -4, "-1"], [-2, -2, "-1"], [0, -2, "2"], [2, -2, "-1"],
    [0, 0, "1"], [2, 0, "-1"], [4, 0, "1"],
])
LG1_FIGURE8 = LaurentPoly.from_json([
    [-4, -2, "1"], [-2, -2, "-3"], [0, -2, "2"], [-2, 0, "-3"], [0, 0, "7"],
    [2, 0, "-3"], [0, 2, "2"], [2, 2, "-3"], [4, 2, "1"],
])


@pytest.fixture
def knot():
    return lambda name: parse_braid(BRAIDS[name])


@pytest.fixture
def small_table():
    return SMALL_TABLE


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    path = tmp_path / "cache"
    monkeypatch.setenv("LG_CACHE_DIR", str(path))
    import cache_service
    monkeypatch.setattr(cache_service, "cache_service", None)
    return str(path)
