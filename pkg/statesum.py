#!/usr/bin/env python3
"""
State-sum evaluation of braid closures colored by a simple object.

A crossing operator acts on V (x) V. For every basis state of the closed
strands the braid word is applied gate by gate to a sparse state vector and
the diagonal entry is accumulated with the enhancement weights; the big
d^n x d^n operator is never built.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from tqdm import tqdm

from braid import BraidWord, self_framings
from errors import (AmbiguousEnhancement, ChargeMismatch, InvariantViolation, NoEnhancement,
                    NotDivisible)
from laurent import ChargedLaurent, LaurentPoly, Terms, add_product_into, prune_terms
from linalg import invert_sparse, nullspace

logger = logging.getLogger(__name__)

Columns = Dict[int, List[Tuple[int, LaurentPoly]]]
Label = Tuple[int, ...]


def _truthy(value: Optional[str]) -> bool:
    return (value or "").strip().lower() in ("1", "true", "yes", "on")


class SparseOperator:
    """Operator V (x) W -> W' (x) V' stored column-wise with a uniform charge"""

    def __init__(self, in_dims: Tuple[int, int], columns: Columns, charge: int = 0,
                 out_dims: Optional[Tuple[int, int]] = None, variables: str = "lg"):
        self.in_dims = tuple(in_dims)
        self.out_dims = tuple(out_dims) if out_dims is not None else tuple(in_dims)
        self.charge = charge
        self.variables = variables
        self.columns: Columns = {}
        for col, entries in columns.items():
            merged: Dict[int, LaurentPoly] = {}
            for row, value in entries:
                merged[row] = merged.get(row, LaurentPoly()) + value
            kept = [(row, value) for row, value in sorted(merged.items()) if not value.is_zero()]
            if kept:
                self.columns[col] = kept

    @property
    def d(self) -> int:
        if self.in_dims[0] != self.in_dims[1] or self.in_dims != self.out_dims:
            raise ValueError("operator is not an endomorphism of V (x) V")
        return self.in_dims[0]

    @property
    def size_in(self) -> int:
        return self.in_dims[0] * self.in_dims[1]

    @property
    def size_out(self) -> int:
        return self.out_dims[0] * self.out_dims[1]

    @classmethod
    def identity(cls, d: int, variables: str = "lg") -> "SparseOperator":
        return cls((d, d), {i: [(i, LaurentPoly.constant(1))] for i in range(d * d)},
                   variables=variables)

    def entry(self, col: int, row: int) -> LaurentPoly:
        for r, value in self.columns.get(col, ()):
            if r == row:
                return value
        return LaurentPoly()

    def entry_at(self, col_pair: Tuple[int, int], row_pair: Tuple[int, int]) -> LaurentPoly:
        col = col_pair[0] * self.in_dims[1] + col_pair[1]
        row = row_pair[0] * self.out_dims[1] + row_pair[1]
        return self.entry(col, row)

    def nonzero_count(self) -> int:
        return sum(len(entries) for entries in self.columns.values())

    def compose(self, other: "SparseOperator") -> "SparseOperator":
        """self after other"""
        if other.out_dims != self.in_dims:
            raise ValueError("dimension mismatch in composition")
        columns: Columns = {}
        for col, entries in other.columns.items():
            acc: Dict[int, Terms] = {}
            for mid, v in entries:
                for row, w in self.columns.get(mid, ()):
                    add_product_into(acc.setdefault(row, {}), v.terms, w.terms)
            columns[col] = [(row, LaurentPoly.from_raw(t)) for row, t in acc.items()]
        return SparseOperator(other.in_dims, columns, self.charge + other.charge,
                              self.out_dims, self.variables)

    def scale(self, factor) -> "SparseOperator":
        if isinstance(factor, ChargedLaurent):
            charge, poly = factor.charge, factor.poly
        else:
            charge, poly = 0, factor if isinstance(factor, LaurentPoly) else LaurentPoly.constant(factor)
        columns = {col: [(row, value * poly) for row, value in entries]
                   for col, entries in self.columns.items()}
        return SparseOperator(self.in_dims, columns, self.charge + charge, self.out_dims,
                              self.variables)

    def add(self, other: "SparseOperator") -> "SparseOperator":
        if self.columns and other.columns and self.charge != other.charge:
            raise ChargeMismatch(f"cannot add operators of charge {self.charge} and {other.charge}")
        charge = self.charge if self.columns else other.charge
        columns: Columns = {col: list(entries) for col, entries in self.columns.items()}
        for col, entries in other.columns.items():
            columns.setdefault(col, []).extend(entries)
        return SparseOperator(self.in_dims, columns, charge, self.out_dims, self.variables)

    def subtract(self, other: "SparseOperator") -> "SparseOperator":
        return self.add(other.scale(-1))

    def trace(self) -> LaurentPoly:
        total = LaurentPoly()
        for col, entries in self.columns.items():
            for row, value in entries:
                if row == col:
                    total = total + value
        return total

    def inverse(self) -> "SparseOperator":
        if self.size_in != self.size_out:
            raise ValueError("only square operators can be inverted")
        columns = invert_sparse(self.columns, self.size_in)
        return SparseOperator(self.out_dims, columns, -self.charge, self.in_dims, self.variables)

    def is_identity(self) -> bool:
        if self.size_in != self.size_out or self.charge and self.columns:
            return False
        for i in range(self.size_in):
            entries = self.columns.get(i, [])
            if len(entries) != 1 or entries[0][0] != i or entries[0][1] != 1:
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseOperator):
            return NotImplemented
        if self.in_dims != other.in_dims or self.out_dims != other.out_dims:
            return False
        if self.columns and self.charge != other.charge:
            return False
        return self.columns == other.columns

    __hash__ = None

    def gate_table(self) -> List[List[Tuple[int, int, Terms]]]:
        """Per input column: (left label, right label, raw terms) of every output"""
        d_right = self.out_dims[1]
        table: List[List[Tuple[int, int, Terms]]] = [[] for _ in range(self.size_in)]
        for col, entries in self.columns.items():
            table[col] = [(row // d_right, row % d_right, value.terms) for row, value in entries]
        return table

    def __repr__(self) -> str:
        return (f"SparseOperator(in={self.in_dims}, out={self.out_dims}, charge={self.charge}, "
                f"nonzero={self.nonzero_count()})")


@dataclass
class RMatrixDatum:
    d: int
    R: SparseOperator
    R_inv: SparseOperator
    mu: List[LaurentPoly]
    twist: ChargedLaurent
    label: str = ""
    variables: str = "lg"
    extra: Dict = field(default_factory=dict)


def apply_gate(vec: Dict[Label, Terms], table, pos: int, d: int) -> Dict[Label, Terms]:
    out: Dict[Label, Terms] = {}
    for key, terms in vec.items():
        column = table[key[pos] * d + key[pos + 1]]
        if not column:
            continue
        prefix = key[:pos]
        suffix = key[pos + 2:]
        for left, right, entry in column:
            target = prefix + (left, right) + suffix
            acc = out.get(target)
            if acc is None:
                acc = out[target] = {}
            add_product_into(acc, terms, entry)
    pruned = {}
    for key, terms in out.items():
        kept = prune_terms(terms)
        if kept:
            pruned[key] = kept
    return pruned


def _run_word(key: Label, gates, tables, d: int) -> Dict[Label, Terms]:
    vec: Dict[Label, Terms] = {key: {(0, 0): 1}}
    for pos, which in gates:
        vec = apply_gate(vec, tables[which], pos, d)
        if not vec:
            break
    return vec


def _monomial(poly: LaurentPoly) -> Tuple[int, int, int]:
    if not poly.is_monomial():
        raise NoEnhancement(f"enhancement entry {poly} is not a monomial")
    (es, eq), c = next(iter(poly.items()))
    return es, eq, c


def _trace_chunk(payload) -> Terms:
    d, gates, tables, mu, weighted_positions, states = payload
    total: Terms = {}
    for key in states:
        vec = _run_word(key, gates, tables, d)
        diagonal = vec.get(key)
        if not diagonal:
            continue
        es = eq = 0
        coeff = 1
        for pos in weighted_positions:
            me, mq, mc = mu[key[pos]]
            es += me
            eq += mq
            coeff *= mc
        for (te, tq), tc in diagonal.items():
            k = (te + es, tq + eq)
            total[k] = total.get(k, 0) + tc * coeff
    return prune_terms(total)


def _chunks(items: List, count: int) -> List[List]:
    count = max(1, min(count, len(items)))
    size = -(-len(items) // count)
    return [items[i:i + size] for i in range(0, len(items), size)]


def _resolve_jobs(jobs: Optional[int]) -> int:
    if jobs is None:
        try:
            jobs = int(os.getenv("LG_JOBS", "1"))
        except ValueError:
            jobs = 1
    return max(1, jobs)


def _contract(b: BraidWord, datum: RMatrixDatum, open_pos: Optional[int], open_label: int,
              jobs: Optional[int], progress: bool) -> LaurentPoly:
    d = datum.d
    n = b.strands
    tables = (datum.R.gate_table(), datum.R_inv.gate_table())
    gates = [(abs(g) - 1, 0 if g > 0 else 1) for g in b.word]
    mu = [_monomial(m) for m in datum.mu]
    weighted = [p for p in range(n) if p != open_pos]

    states: List[Label] = []
    for labels in product(range(d), repeat=len(weighted)):
        key = [open_label] * n
        for pos, label in zip(weighted, labels):
            key[pos] = label
        states.append(tuple(key))

    jobs = _resolve_jobs(jobs)
    workers = min(jobs, len(states))
    chunk_count = workers * 4 if workers > 1 else (16 if progress else 1)
    chunks = _chunks(states, chunk_count)
    payloads = [(d, gates, tables, mu, weighted, chunk) for chunk in chunks]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_trace_chunk, payloads)
            if progress:
                results = tqdm(results, total=len(payloads), desc=datum.label or "state sum",
                               leave=False)
            parts = list(results)
    else:
        iterator: Iterable = payloads
        if progress:
            iterator = tqdm(payloads, desc=datum.label or "state sum", leave=False)
        parts = [_trace_chunk(p) for p in iterator]

    total: Terms = {}
    for part in parts:
        for k, c in part.items():
            total[k] = total.get(k, 0) + c
    return LaurentPoly.from_raw(total)


def bring_to_front(b: BraidWord, strand: int) -> BraidWord:
    """Conjugate of b whose first strand enters b at position `strand`

    Only the leftmost strand of a right-hand closure can be cut without crossing
    the other closure arcs, so any other strand is first moved there.
    """
    shift = tuple(range(1, strand))
    return BraidWord(b.strands, shift + b.word + tuple(-g for g in reversed(shift)))


def eval_link(b: BraidWord, datum: RMatrixDatum, open_strand: int = 1,
              jobs: Optional[int] = None, progress: bool = False,
              check_simple: Optional[bool] = None) -> ChargedLaurent:
    """Cut-open invariant of the closure with strand `open_strand` (1-based) left open"""
    if not 1 <= open_strand <= b.strands:
        raise ValueError(f"open strand {open_strand} outside 1..{b.strands}")
    opened = bring_to_front(b, open_strand)
    poly = _contract(opened, datum, 0, 0, jobs, progress)

    if check_simple is None:
        check_simple = _truthy(os.getenv("LG_DEBUG_SIMPLE_CHECK"))
    if check_simple and b.strands <= 3 and datum.d > 1:
        again = _contract(opened, datum, 0, 1, 1, False)
        if again != poly:
            raise InvariantViolation(
                f"open label 1 gives {again} but label 0 gives {poly} for {b}")
        logger.debug("✅ simplicity check passed")

    positive = sum(1 for g in b.word if g > 0)
    negative = len(b.word) - positive
    charge = datum.R.charge * positive + datum.R_inv.charge * negative
    result = ChargedLaurent(charge, poly)
    framing = sum(self_framings(b))
    if framing:
        result = result * datum.twist ** (-framing)
    return result


def eval_tangle(b: BraidWord, datum: RMatrixDatum, jobs: Optional[int] = None,
                progress: bool = False, check_simple: Optional[bool] = None) -> ChargedLaurent:
    return eval_link(b, datum, 1, jobs=jobs, progress=progress, check_simple=check_simple)


def full_closure_is_zero(b: BraidWord, datum: RMatrixDatum, jobs: Optional[int] = None) -> bool:
    return _contract(b, datum, None, 0, jobs, False).is_zero()


def partial_trace(op: SparseOperator, mu: Sequence[LaurentPoly]) -> Dict[Tuple[int, int], LaurentPoly]:
    """ptr over the second factor of (id (x) mu) op, as {(a_out, a_in): value}"""
    d_in = op.in_dims[1]
    d_out = op.out_dims[1]
    result: Dict[Tuple[int, int], LaurentPoly] = {}
    for col, entries in op.columns.items():
        a, j = divmod(col, d_in)
        for row, value in entries:
            a2, j2 = divmod(row, d_out)
            if j2 != j:
                continue
            key = (a2, a)
            result[key] = result.get(key, LaurentPoly()) + mu[j] * value
    return {k: v for k, v in result.items() if not v.is_zero()}


def _is_scalar(matrix: Dict[Tuple[int, int], LaurentPoly], d: int, value: LaurentPoly) -> bool:
    for a in range(d):
        if matrix.get((a, a), LaurentPoly()) != value:
            return False
    return all(a == b for (a, b) in matrix)


def derive_enhancement(R: SparseOperator, R_inv: SparseOperator) -> Tuple[List[LaurentPoly], ChargedLaurent]:
    """Solve for mu and the twist from the Reidemeister-I and Markov constraints"""
    d = R.d
    unknowns = d + 2
    rows: List[List[LaurentPoly]] = []
    for op, slot in ((R, d), (R_inv, d + 1)):
        coeffs: Dict[Tuple[int, int], List[LaurentPoly]] = {}
        for col, entries in op.columns.items():
            a, j = divmod(col, d)
            for row, value in entries:
                a2, j2 = divmod(row, d)
                if j2 != j:
                    continue
                row_coeffs = coeffs.setdefault((a2, a), [LaurentPoly()] * unknowns)
                row_coeffs[j] = row_coeffs[j] + value
        for a2 in range(d):
            for a in range(d):
                row_coeffs = list(coeffs.get((a2, a), [LaurentPoly()] * unknowns))
                if a2 == a:
                    row_coeffs[slot] = LaurentPoly.constant(-1)
                if any(not x.is_zero() for x in row_coeffs):
                    rows.append(row_coeffs)

    kernel = nullspace(rows, unknowns)
    if not kernel:
        raise NoEnhancement("no diagonal enhancement solves the trace constraints")
    if len(kernel) > 1:
        raise AmbiguousEnhancement(f"enhancement solution space has dimension {len(kernel)}")
    vec = kernel[0]
    if vec[0].is_zero():
        raise NoEnhancement("first enhancement entry vanishes")
    try:
        ratios = [(x / vec[0]).to_laurent() for x in vec]
    except NotDivisible:
        raise NoEnhancement("enhancement entries are not Laurent monomials")
    mu_ratio, c, c_inv = ratios[:d], ratios[d], ratios[d + 1]
    if not all(m.is_unit() for m in mu_ratio):
        raise NoEnhancement(f"enhancement {mu_ratio} is not made of units")
    product_cc = c * c_inv
    if not product_cc.is_monomial():
        raise NoEnhancement(f"twist product {product_cc} is not a monomial")
    (es, eq), coeff = next(iter(product_cc.items()))
    if coeff != 1 or es % 2 or eq % 2:
        raise NoEnhancement(f"twist product {product_cc} has no square root")
    # of the two square roots, the one leaving mu[0] with coefficient +1
    lam = LaurentPoly.monomial(-es // 2, -eq // 2)
    mu = [lam * m for m in mu_ratio]
    twist = ChargedLaurent(R.charge, lam * c)
    if not commutes_with_mu(R, mu):
        raise NoEnhancement("mu (x) mu does not commute with R")
    return mu, twist


def commutes_with_mu(R: SparseOperator, mu: Sequence[LaurentPoly]) -> bool:
    d_in = R.in_dims[1]
    d_out = R.out_dims[1]
    for col, entries in R.columns.items():
        a, b = divmod(col, d_in)
        for row, _ in entries:
            a2, b2 = divmod(row, d_out)
            if mu[a] * mu[b] != mu[a2] * mu[b2]:
                return False
    return True


def check_yang_baxter(R: SparseOperator) -> bool:
    d = R.d
    table = R.gate_table()
    tables = (table,)
    for key in product(range(d), repeat=3):
        lhs = _run_word(key, [(0, 0), (1, 0), (0, 0)], tables, d)
        rhs = _run_word(key, [(1, 0), (0, 0), (1, 0)], tables, d)
        if lhs != rhs:
            logger.warning(f"⚠️ Yang-Baxter fails on basis state {key}")
            return False
    return True


def check_inverse(R: SparseOperator, R_inv: SparseOperator) -> bool:
    return R.compose(R_inv).is_identity() and R_inv.compose(R).is_identity()


def check_enhancement(datum: RMatrixDatum) -> bool:
    d = datum.d
    forward = partial_trace(datum.R, datum.mu)
    backward = partial_trace(datum.R_inv, datum.mu)
    twist_inv = datum.twist.inverse()
    return (_is_scalar(forward, d, datum.twist.poly)
            and _is_scalar(backward, d, twist_inv.poly)
            and commutes_with_mu(datum.R, datum.mu))


def quantum_dimension(datum: RMatrixDatum) -> LaurentPoly:
    total = LaurentPoly()
    for m in datum.mu:
        total = total + m
    return total


def verify_datum(datum: RMatrixDatum) -> Dict[str, bool]:
    report = {
        "yang_baxter": check_yang_baxter(datum.R),
        "inverse": check_inverse(datum.R, datum.R_inv),
        "enhancement": check_enhancement(datum),
        "quantum_dimension_zero": quantum_dimension(datum).is_zero(),
        "twist_is_one": datum.twist == 1,
    }
    status = "✅" if all(report.values()) else "❌"
    logger.info(f"{status} datum {datum.label}: {report}")
    return report


def make_datum(R: SparseOperator, label: str, R_inv: Optional[SparseOperator] = None) -> RMatrixDatum:
    """Attach inverse, enhancement and twist to a crossing operator"""
    if R_inv is None:
        R_inv = R.inverse()
    mu, twist = derive_enhancement(R, R_inv)
    logger.info(f"ℹ️ {label}: twist {twist}, mu {[m.format() for m in mu]}")
    return RMatrixDatum(R.d, R, R_inv, mu, twist, label, R.variables)
