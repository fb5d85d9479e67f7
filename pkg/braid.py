#!/usr/bin/env python3
"""
Braid words: parsing, closure components, framings, cabling and the knot table.

Text format is "n | g1 g2 ..." with signed 1-based generator indices.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from errors import (BraidSyntaxError, GeneratorOutOfRange, NotAKnot, ParseError,
                    ValidationError)
from laurent import LaurentPoly

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
DEFAULT_KNOT_TABLE = os.path.join(DATA_DIR, "knots.jsonl")

KNOT_ALIASES = {
    "unknot": "0_1",
    "trefoil": "3_1",
    "figure8": "4_1",
    "figure-eight": "4_1",
}


@dataclass(frozen=True)
class BraidWord:
    strands: int
    word: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise BraidSyntaxError(f"strand count must be positive, got {self.strands}")
        object.__setattr__(self, "word", tuple(int(g) for g in self.word))
        for g in self.word:
            if g == 0:
                raise BraidSyntaxError("generator 0 is not allowed")
            if abs(g) >= self.strands:
                raise GeneratorOutOfRange(
                    f"generator {g} needs more than {self.strands} strands")

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return format_braid(self)


@dataclass
class KnotRecord:
    name: str
    braid: BraidWord
    crossings: int
    genus: Optional[int] = None
    alexander: Optional[LaurentPoly] = None
    extra: Dict = field(default_factory=dict)


def parse_braid(text: str) -> BraidWord:
    if text.count("|") != 1:
        raise BraidSyntaxError(f"expected 'n | g1 g2 ...', got {text!r}")
    head, body = text.split("|")
    try:
        strands = int(head.strip())
    except ValueError:
        raise BraidSyntaxError(f"bad strand count {head.strip()!r}")
    word = []
    for token in body.split():
        try:
            word.append(int(token))
        except ValueError:
            raise BraidSyntaxError(f"bad generator {token!r}")
    return BraidWord(strands, tuple(word))


def format_braid(b: BraidWord) -> str:
    if not b.word:
        return f"{b.strands} |"
    return f"{b.strands} | " + " ".join(str(g) for g in b.word)


def writhe(b: BraidWord) -> int:
    return sum(1 if g > 0 else -1 for g in b.word)


def permutation(b: BraidWord) -> List[int]:
    """perm[i] = final position (0-based) of the strand starting at position i"""
    strand_at = list(range(b.strands))
    for g in b.word:
        i = abs(g) - 1
        strand_at[i], strand_at[i + 1] = strand_at[i + 1], strand_at[i]
    perm = [0] * b.strands
    for position, strand in enumerate(strand_at):
        perm[strand] = position
    return perm


def components(b: BraidWord) -> List[List[int]]:
    """Cycles of the closure permutation as sorted 1-based strand positions"""
    perm = permutation(b)
    seen = [False] * b.strands
    cycles = []
    for start in range(b.strands):
        if seen[start]:
            continue
        cycle = []
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i + 1)
            i = perm[i]
        cycles.append(sorted(cycle))
    return cycles


def is_knot(b: BraidWord) -> bool:
    return len(components(b)) == 1


def _crossing_components(b: BraidWord) -> List[Tuple[int, int, int]]:
    """(component of left strand, component of right strand, sign) per crossing"""
    owner = {}
    for index, cycle in enumerate(components(b)):
        for position in cycle:
            owner[position - 1] = index
    strand_at = list(range(b.strands))
    out = []
    for g in b.word:
        i = abs(g) - 1
        out.append((owner[strand_at[i]], owner[strand_at[i + 1]], 1 if g > 0 else -1))
        strand_at[i], strand_at[i + 1] = strand_at[i + 1], strand_at[i]
    return out


def self_framings(b: BraidWord) -> List[int]:
    """Blackboard framing of each component, ordered as components(b)"""
    framings = [0] * len(components(b))
    for left, right, sign in _crossing_components(b):
        if left == right:
            framings[left] += sign
    return framings


def linking_numbers(b: BraidWord) -> Dict[Tuple[int, int], int]:
    counts: Dict[Tuple[int, int], int] = {}
    n = len(components(b))
    for i in range(n):
        for j in range(i + 1, n):
            counts[(i, j)] = 0
    for left, right, sign in _crossing_components(b):
        if left != right:
            key = (min(left, right), max(left, right))
            counts[key] += sign
    return {key: total // 2 for key, total in counts.items()}


def block_crossing(index: int, n: int, sign: int) -> List[int]:
    """Word swapping block `index` with block `index + 1` when every block has n strands"""
    word = []
    for k in range(n):
        for r in range(n):
            word.append(sign * (n * index - r + k))
    return word


def cable(b: BraidWord, n: int) -> BraidWord:
    if n < 1:
        raise ValueError("cable needs n >= 1")
    if n == 1:
        return b
    word: List[int] = []
    for g in b.word:
        word.extend(block_crossing(abs(g), n, 1 if g > 0 else -1))
    return BraidWord(b.strands * n, tuple(word))


def half_twist(n: int) -> List[int]:
    return list(range(1, n))


def full_twist(n: int) -> List[int]:
    return half_twist(n) * n


def _power(word: Sequence[int], exponent: int) -> List[int]:
    if exponent >= 0:
        return list(word) * exponent
    inverse = [-g for g in reversed(word)]
    return inverse * (-exponent)


def parallel(b: BraidWord, n: int, extra_half_twists: int = 0) -> BraidWord:
    """(n, extra)-cable of a knot with the blackboard framing of the copies undone"""
    if not is_knot(b):
        raise NotAKnot(f"{format_braid(b)} closes to {len(components(b))} components")
    cabled = cable(b, n)
    word = list(cabled.word)
    word.extend(_power(full_twist(n), -writhe(b)))
    word.extend(_power(half_twist(n), extra_half_twists))
    return BraidWord(cabled.strands, tuple(word))


def conjugate(b: BraidWord, g: int) -> BraidWord:
    return BraidWord(b.strands, (g,) + b.word + (-g,))


def stabilize(b: BraidWord, sign: int = 1) -> BraidWord:
    return BraidWord(b.strands + 1, b.word + ((1 if sign > 0 else -1) * b.strands,))


def _parse_record(raw: Dict, line: int) -> KnotRecord:
    for key in ("name", "strands", "word", "crossings"):
        if key not in raw:
            raise ValidationError(f"missing field {key!r}", line)
    word = raw["word"]
    try:
        if isinstance(word, str):
            braid = parse_braid(f"{raw['strands']} | {word}")
        else:
            braid = BraidWord(int(raw["strands"]), tuple(int(g) for g in word))
    except (BraidSyntaxError, GeneratorOutOfRange, TypeError, ValueError) as e:
        raise ValidationError(f"bad braid for {raw['name']}: {e}", line)
    if not is_knot(braid):
        raise ValidationError(
            f"{raw['name']}: closure has {len(components(braid))} components", line)
    alexander = None
    if raw.get("alexander") is not None:
        try:
            alexander = LaurentPoly.from_json(raw["alexander"])
        except (TypeError, ValueError) as e:
            raise ValidationError(f"bad alexander polynomial for {raw['name']}: {e}", line)
    genus = raw.get("genus")
    try:
        crossings = int(raw["crossings"])
        genus = None if genus is None else int(genus)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"bad crossing number or genus for {raw['name']}: {e}", line)
    return KnotRecord(
        name=str(raw["name"]),
        braid=braid,
        crossings=crossings,
        genus=genus,
        alexander=alexander,
        extra={k: v for k, v in raw.items()
               if k not in ("name", "strands", "word", "crossings", "genus", "alexander")},
    )


def load_knot_table(path: str = DEFAULT_KNOT_TABLE, check_alexander: bool = True) -> List[KnotRecord]:
    """Read a JSON-lines knot table and validate every record"""
    from colored import alexander_burau

    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, text in enumerate(handle, start=1):
            text = text.strip()
            if not text or text.startswith("#"):
                continue
            try:
                raw = json.loads(text)
            except json.JSONDecodeError as e:
                raise ParseError(f"{path}:{line_no}: {e.msg}")
            if not isinstance(raw, dict):
                raise ParseError(f"{path}:{line_no}: expected a JSON object")
            record = _parse_record(raw, line_no)
            if check_alexander and record.alexander is not None:
                computed = alexander_burau(record.braid)
                if computed != record.alexander:
                    raise ValidationError(
                        f"{record.name}: Alexander polynomial {computed} does not match "
                        f"the table entry {record.alexander}", line_no)
            records.append(record)
    logger.info(f"✅ Loaded {len(records)} knots from {path}")
    return records


def resolve_knot(text: str, records: Optional[List[KnotRecord]] = None) -> Tuple[str, BraidWord]:
    """Name or braid text -> (label, braid)"""
    if "|" in text:
        return text.strip(), parse_braid(text)
    name = KNOT_ALIASES.get(text.strip().lower(), text.strip())
    if records is None:
        records = load_knot_table(check_alexander=False)
    for record in records:
        if record.name == name:
            return record.name, record.braid
    raise ParseError(f"unknown knot {text!r}")
