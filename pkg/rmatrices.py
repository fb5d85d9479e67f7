#!/usr/bin/env python3
"""
The two transcribed R-matrices and the variable conventions around them.

R_LG lives in (s, q) with s = q^alpha. R_V1 is stored in its own variables
(t, qt) and mapped into (s, q) on load through the data file's exponent map
t -> s^-1, qt -> q^2, so both data share one engine and one ring.

V-polynomials are written in (t, h) with h^2 = qt; the maps below move them
in and out of (s, q):
    lg_to_v_vars:  t -> s^-2 q^-1, h -> q^-1   (V1 and LG1)
    lg_to_v2_vars: T -> s^-2 q^-2, H -> q^-1   (V2 and LG2)
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from errors import SpectralMismatch, TranscriptionError
from laurent import LaurentPoly, RatFunc, pull_back, substitute_monomial
from statesum import (RMatrixDatum, SparseOperator, check_inverse, check_yang_baxter,
                      make_datum)

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
R_LG_PATH = os.path.join(DATA_DIR, "r_lg.json")
R_V1_PATH = os.path.join(DATA_DIR, "r_v1.json")

LG_TO_V = ((-2, 0), (-1, -1))
LG_TO_V2 = ((-2, 0), (-2, -1))
V_NAMES = ("t", "h")

_r_lg_datum: Optional[RMatrixDatum] = None
_r_v1_datum: Optional[RMatrixDatum] = None
_spectral: Optional["SpectralDecomposition"] = None


def _map(p, M):
    if isinstance(p, RatFunc):
        return p.substitute(M)
    return substitute_monomial(p, M)


def lg_to_v_vars(p):
    """(t, h) -> (s, q) for V1-side quantities"""
    return _map(p, LG_TO_V)


def v_vars_from_lg(p: LaurentPoly) -> LaurentPoly:
    return pull_back(p, LG_TO_V)


def lg_to_v2_vars(p):
    """(T, H) -> (s, q): V2(q^{-2a-2}, q^{-2}) against LG2(q^a, q)"""
    return _map(p, LG_TO_V2)


def v2_vars_from_lg(p: LaurentPoly) -> LaurentPoly:
    return pull_back(p, LG_TO_V2)


def load_r_matrix(path: str) -> Tuple[SparseOperator, Dict]:
    """Read an R-matrix data file; entries come back in (s, q)"""
    with open(path, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    d = int(raw["dim"])
    exponent_map = raw.get("exponent_map")
    columns: Dict[int, List[Tuple[int, LaurentPoly]]] = {}
    for col, row, poly_json in raw["entries"]:
        if not (0 <= col < d * d and 0 <= row < d * d):
            raise TranscriptionError(f"{raw.get('name', path)}: entry ({col}, {row}) outside dim {d}")
        poly = LaurentPoly.from_json(poly_json)
        if exponent_map is not None:
            poly = substitute_monomial(poly, exponent_map)
        columns.setdefault(int(col), []).append((int(row), poly))
    meta = {k: v for k, v in raw.items() if k != "entries"}
    return SparseOperator((d, d), columns, variables="lg"), meta


def _build(path: str) -> RMatrixDatum:
    op, meta = load_r_matrix(path)
    label = meta.get("name", os.path.basename(path))
    logger.info(f"🔄 Building datum {label} from {path}")
    if not check_yang_baxter(op):
        raise TranscriptionError(f"{label} does not satisfy the Yang-Baxter equation")
    datum = make_datum(op, label)
    if not check_inverse(datum.R, datum.R_inv):
        raise TranscriptionError(f"{label}: computed inverse does not invert")
    datum.extra["source_variables"] = meta.get("variables", "lg")
    logger.info(f"✅ {label} ready")
    return datum


def build_R_LG() -> RMatrixDatum:
    global _r_lg_datum
    if _r_lg_datum is None:
        _r_lg_datum = _build(R_LG_PATH)
    return _r_lg_datum


def build_R_V1() -> RMatrixDatum:
    global _r_v1_datum
    if _r_v1_datum is None:
        _r_v1_datum = _build(R_V1_PATH)
    return _r_v1_datum


@dataclass
class SpectralDecomposition:
    """R = sum lambda_i P_i with P_i = numerators[i] / denominators[i]"""

    eigenvalues: List[LaurentPoly]
    numerators: List[SparseOperator]
    denominators: List[LaurentPoly]
    ranks: List[int]
    checks: Dict[str, bool] = field(default_factory=dict)

    def eigenvalues_v(self) -> List[LaurentPoly]:
        return [v_vars_from_lg(lam) for lam in self.eigenvalues]

    def projector_entry(self, i: int, col: int, row: int) -> RatFunc:
        return RatFunc(self.numerators[i].entry(col, row), self.denominators[i])


def r1_eigenvalues() -> List[LaurentPoly]:
    """t^-1 h, t h, -1 written in (s, q)"""
    return [lg_to_v_vars(LaurentPoly.monomial(-1, 1)),
            lg_to_v_vars(LaurentPoly.monomial(1, 1)),
            LaurentPoly.constant(-1)]


def spectral_decompose_R1() -> SpectralDecomposition:
    """Lagrange projectors of R1; every identity is checked with denominators cleared"""
    global _spectral
    if _spectral is not None:
        return _spectral
    R = build_R_V1().R
    d = R.d
    identity = SparseOperator.identity(d)
    lambdas = r1_eigenvalues()

    numerators = []
    denominators = []
    for i, lam in enumerate(lambdas):
        N = identity
        D = LaurentPoly.constant(1)
        for j, other in enumerate(lambdas):
            if j == i:
                continue
            N = R.subtract(identity.scale(other)).compose(N)
            D = D * (lam - other)
        numerators.append(N)
        denominators.append(D)

    checks: Dict[str, bool] = {}
    for i in range(3):
        N, D, lam = numerators[i], denominators[i], lambdas[i]
        checks[f"eigen_{i + 1}"] = R.compose(N) == N.scale(lam)
        checks[f"idempotent_{i + 1}"] = N.compose(N) == N.scale(D)
        for j in range(i + 1, 3):
            checks[f"orthogonal_{i + 1}{j + 1}"] = not N.compose(numerators[j]).columns

    total = LaurentPoly.constant(1)
    for D in denominators:
        total = total * D
    acc = None
    for i in range(3):
        cofactor = LaurentPoly.constant(1)
        for j in range(3):
            if j != i:
                cofactor = cofactor * denominators[j]
        term = numerators[i].scale(cofactor)
        acc = term if acc is None else acc.add(term)
    checks["sum_is_identity"] = acc == identity.scale(total)

    ranks = []
    for N, D in zip(numerators, denominators):
        ratio = RatFunc(N.trace(), D)
        exact = ratio.is_laurent() and ratio.num.is_constant()
        ranks.append(ratio.num.constant_value() if exact else -1)
    checks["ranks_4_4_8"] = ranks == [4, 4, 8]

    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise SpectralMismatch(f"spectral decomposition of R1 fails: {', '.join(failed)}")
    logger.info(f"✅ R1 spectral decomposition: ranks {ranks}")
    _spectral = SpectralDecomposition(lambdas, numerators, denominators, ranks, checks)
    return _spectral
