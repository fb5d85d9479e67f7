#!/usr/bin/env python3
"""
Typical modules V(n, alpha + j) of the unrolled quantum sl(2|1) with alpha kept
symbolic through s = q^alpha.

Basis vector (i, k) sits at index 4*i + k and stands for F_{i,k} v0 with
    F_{i,0} = F1^i, F_{i,1} = F2 F1^i, F_{i,2} = F1 F2 F1^i, F_{i,3} = F2 F1 F2 F1^i.
Weights are (lambda1, alpha + shift) with integer lambda1 and shift.

The braiding is c = tau o Upsilon o (R2 R12 R1); the alpha^2 part of Upsilon is
carried as the charge of the resulting operator.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from errors import CharacterResidue, HopfMismatch, NotDivisible, TwistMismatch
from laurent import (ChargedLaurent, LaurentPoly, RatFunc, bracket, exact_div,
                     quantum_integer)
from statesum import RMatrixDatum, SparseOperator, partial_trace

logger = logging.getLogger(__name__)

UPSILON_CHARGE = -2


def _qint(k: int) -> RatFunc:
    return quantum_integer(0, k)


class GenMatrix:
    """Sparse matrix over RatFunc, stored column -> {row: value}"""

    def __init__(self, rows: int, cols: int, odd: bool = False,
                 entries: Optional[Dict[int, Dict[int, RatFunc]]] = None):
        self.rows = rows
        self.cols = cols
        self.odd = odd
        self.entries: Dict[int, Dict[int, RatFunc]] = {}
        for col, column in (entries or {}).items():
            kept = {r: v for r, v in column.items() if not v.is_zero()}
            if kept:
                self.entries[col] = kept

    @classmethod
    def identity(cls, size: int) -> "GenMatrix":
        return cls(size, size, entries={i: {i: RatFunc(1)} for i in range(size)})

    def put(self, row: int, col: int, value) -> None:
        value = value if isinstance(value, RatFunc) else RatFunc(value)
        column = self.entries.setdefault(col, {})
        total = column.get(row, RatFunc(0)) + value
        if total.is_zero():
            column.pop(row, None)
            if not column:
                del self.entries[col]
        else:
            column[row] = total

    def get(self, row: int, col: int) -> RatFunc:
        return self.entries.get(col, {}).get(row, RatFunc(0))

    def is_zero(self) -> bool:
        return not self.entries

    def __matmul__(self, other: "GenMatrix") -> "GenMatrix":
        """self after other"""
        out: Dict[int, Dict[int, RatFunc]] = {}
        for col, column in other.entries.items():
            acc: Dict[int, RatFunc] = {}
            for mid, v in column.items():
                for row, w in self.entries.get(mid, {}).items():
                    acc[row] = acc.get(row, RatFunc(0)) + w * v
            out[col] = acc
        return GenMatrix(self.rows, other.cols, self.odd != other.odd, out)

    def __add__(self, other: "GenMatrix") -> "GenMatrix":
        out = {col: dict(column) for col, column in self.entries.items()}
        for col, column in other.entries.items():
            target = out.setdefault(col, {})
            for row, v in column.items():
                target[row] = target.get(row, RatFunc(0)) + v
        return GenMatrix(self.rows, self.cols, self.odd, out)

    def scale(self, factor) -> "GenMatrix":
        factor = factor if isinstance(factor, RatFunc) else RatFunc(factor)
        out = {col: {row: v * factor for row, v in column.items()}
               for col, column in self.entries.items()}
        return GenMatrix(self.rows, self.cols, self.odd, out)

    def __sub__(self, other: "GenMatrix") -> "GenMatrix":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenMatrix):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None


def tensor(X: GenMatrix, Y: GenMatrix, parities: List[int]) -> GenMatrix:
    """X (x) Y with the sign (-1)^{|Y| |v|} on input v (x) w"""
    dw_in, dw_out = Y.cols, Y.rows
    out: Dict[int, Dict[int, RatFunc]] = {}
    for a, x_col in X.entries.items():
        sign = -1 if Y.odd and parities[a] else 1
        for b, y_col in Y.entries.items():
            column = out.setdefault(a * dw_in + b, {})
            for a2, x in x_col.items():
                for b2, y in y_col.items():
                    value = x * y
                    column[a2 * dw_out + b2] = value if sign > 0 else -value
    return GenMatrix(X.rows * Y.rows, X.cols * Y.cols, X.odd != Y.odd, out)


@dataclass
class WeightModule:
    n: int
    offset: int
    parity: int
    lambda1: List[int]
    shift: List[int]
    parities: List[int]
    E1: GenMatrix
    F1: GenMatrix
    E2: GenMatrix
    F2: GenMatrix

    @property
    def dim(self) -> int:
        return 4 * (self.n + 1)

    @property
    def labels(self) -> List[Tuple[int, int]]:
        return [(i, k) for i in range(self.n + 1) for k in range(4)]

    def K1(self, index: int) -> LaurentPoly:
        return LaurentPoly.monomial(0, self.lambda1[index])

    def K2(self, index: int) -> LaurentPoly:
        return LaurentPoly.monomial(1, self.shift[index])

    def E12(self) -> GenMatrix:
        return self.E1 @ self.E2 - (self.E2 @ self.E1).scale(LaurentPoly.monomial(0, 1))

    def F12(self) -> GenMatrix:
        return self.F2 @ self.F1 - (self.F1 @ self.F2).scale(LaurentPoly.monomial(0, -1))


def build_module(n: int, offset: int = 0, parity: int = 0) -> WeightModule:
    if n < 0:
        raise ValueError("highest weight n must be non-negative")
    dim = 4 * (n + 1)
    lambda1, shift, parities = [], [], []
    for i in range(n + 1):
        lambda1 += [n - 2 * i, n - 2 * i + 1, n - 2 * i - 1, n - 2 * i]
        shift += [offset + i, offset + i, offset + i + 1, offset + i + 1]
        parities += [parity, 1 - parity, 1 - parity, parity]

    E1, F1 = GenMatrix(dim, dim), GenMatrix(dim, dim)
    E2, F2 = GenMatrix(dim, dim, odd=True), GenMatrix(dim, dim, odd=True)

    def put(M: GenMatrix, i: int, k: int, col: int, value) -> None:
        if 0 <= i <= n:
            M.put(4 * i + k, col, value)

    two = _qint(2)
    for i in range(n + 1):
        u, w, x, y = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        put(F1, i + 1, 0, u, 1)
        put(F1, i, 2, w, 1)
        put(F1, i + 1, 2, x, two)
        put(F1, i + 2, 1, x, -1)
        put(F1, i + 1, 3, y, 1)

        put(F2, i, 1, u, 1)
        put(F2, i, 3, x, 1)

        c = _qint(i) * _qint(n - i + 1)
        put(E1, i - 1, 0, u, c)
        put(E1, i - 1, 1, w, c)
        put(E1, i, 1, x, _qint(n + 1 - 2 * i))
        put(E1, i - 1, 2, x, c)
        put(E1, i - 1, 3, y, c)

        a_i = quantum_integer(1, offset + i)
        put(E2, i, 0, w, a_i)
        put(E2, i + 1, 0, x, a_i)
        put(E2, i, 2, y, quantum_integer(1, offset + i + 1))
        put(E2, i + 1, 1, y, -a_i)

    return WeightModule(n, offset, parity, lambda1, shift, parities, E1, F1, E2, F2)


def _diagonal(V: WeightModule, values: List[RatFunc]) -> GenMatrix:
    return GenMatrix(V.dim, V.dim, entries={i: {i: v} for i, v in enumerate(values)})


def _shifts_weight(V: WeightModule, M: GenMatrix, d1: int, d2: int) -> bool:
    for col, column in M.entries.items():
        for row in column:
            if (V.lambda1[row] - V.lambda1[col], V.shift[row] - V.shift[col]) != (d1, d2):
                return False
    return True


def relation_report(V: WeightModule) -> Dict[str, bool]:
    """Each defining relation of the algebra checked as a matrix identity on V"""
    E1, F1, E2, F2 = V.E1, V.F1, V.E2, V.F2
    zero = GenMatrix(V.dim, V.dim)
    k1 = _diagonal(V, [_qint(l) for l in V.lambda1])
    k2 = _diagonal(V, [quantum_integer(1, sh) for sh in V.shift])
    k12 = _diagonal(V, [quantum_integer(1, l + sh) for l, sh in zip(V.lambda1, V.shift)])
    two = _qint(2)
    q = LaurentPoly.monomial(0, 1)
    q_inv = LaurentPoly.monomial(0, -1)
    E12, F12 = V.E12(), V.F12()
    return {
        "E1F1-F1E1=[H1]": E1 @ F1 - F1 @ E1 == k1,
        "E2F2+F2E2=[H2]": E2 @ F2 + F2 @ E2 == k2,
        "E1F2=F2E1": E1 @ F2 == F2 @ E1,
        "E2F1=F1E2": E2 @ F1 == F1 @ E2,
        "E2^2=0": E2 @ E2 == zero,
        "F2^2=0": F2 @ F2 == zero,
        "serre_E": (E1 @ E1 @ E2 - (E1 @ E2 @ E1).scale(two) + E2 @ E1 @ E1) == zero,
        "serre_F": (F1 @ F1 @ F2 - (F1 @ F2 @ F1).scale(two) + F2 @ F1 @ F1) == zero,
        "weights_E1": _shifts_weight(V, E1, 2, -1),
        "weights_F1": _shifts_weight(V, F1, -2, 1),
        "weights_E2": _shifts_weight(V, E2, -1, 0),
        "weights_F2": _shifts_weight(V, F2, 1, 0),
        "E1E12=q^-1E12E1": E1 @ E12 == (E12 @ E1).scale(q_inv),
        "E12E2=-qE2E12": E12 @ E2 == (E2 @ E12).scale(-q),
        "F1F12=q^-1F12F1": F1 @ F12 == (F12 @ F1).scale(q_inv),
        "F12F2=-qF2F12": F12 @ F2 == (F2 @ F12).scale(-q),
        "E12F12+F12E12=[H1+H2]": E12 @ F12 + F12 @ E12 == k12,
    }


# ----------------------------------------------------------------------
# braiding


def _r1_coefficient(i: int, inverse: bool) -> RatFunc:
    """q^{+-i(i-1)/2} {1}^{2i} / prod_{k<=i} {k}, with (-1)^i for the inverse series"""
    num = bracket(0, 1) ** (2 * i) * LaurentPoly.monomial(0, (-1 if inverse else 1) * (i * (i - 1) // 2))
    den = LaurentPoly.constant(1)
    for k in range(1, i + 1):
        den = den * bracket(0, k)
    value = RatFunc(num, den)
    return -value if inverse and i % 2 else value


def _quasi_r(V: WeightModule, W: WeightModule, inverse: bool = False) -> GenMatrix:
    size = V.dim * W.dim
    one = GenMatrix.identity(size)
    r1 = one
    e_pow, f_pow = GenMatrix.identity(V.dim), GenMatrix.identity(W.dim)
    i = 0
    while True:
        i += 1
        e_pow = V.E1 @ e_pow
        f_pow = W.F1 @ f_pow
        if e_pow.is_zero() or f_pow.is_zero():
            break
        r1 = r1 + tensor(e_pow, f_pow, V.parities).scale(_r1_coefficient(i, inverse))
    b1 = RatFunc(bracket(0, 1))
    step = b1 if inverse else -b1
    r2 = one + tensor(V.E2, W.F2, V.parities).scale(step)
    r12 = one + tensor(V.E12(), W.F12(), V.parities).scale(step)
    if inverse:
        return r1 @ r12 @ r2
    return r2 @ r12 @ r1


def _upsilon(V: WeightModule, W: WeightModule, a: int, b: int) -> LaurentPoly:
    l1, A = V.lambda1[a], V.shift[a]
    m1, B = W.lambda1[b], W.shift[b]
    return LaurentPoly.monomial(-(l1 + m1) - 2 * (A + B), -(l1 * B + A * m1 + 2 * A * B))


def _to_operator(M: GenMatrix, in_dims, out_dims, charge: int) -> SparseOperator:
    columns = {col: [(row, v.to_laurent()) for row, v in column.items()]
               for col, column in M.entries.items()}
    return SparseOperator(in_dims, columns, charge, out_dims)


def build_braiding(V: WeightModule, W: WeightModule) -> SparseOperator:
    """c_{V,W}: V (x) W -> W (x) V"""
    dv, dw = V.dim, W.dim
    quasi = _quasi_r(V, W)
    out: Dict[int, Dict[int, RatFunc]] = {}
    for col, column in quasi.entries.items():
        target = out.setdefault(col, {})
        for row, value in column.items():
            a, b = divmod(row, dw)
            factor = _upsilon(V, W, a, b)
            if V.parities[a] and W.parities[b]:
                factor = -factor
            target[b * dv + a] = value * factor
    return _to_operator(GenMatrix(dw * dv, dv * dw, entries=out), (dv, dw), (dw, dv),
                        UPSILON_CHARGE)


def build_braiding_inverse(V: WeightModule, W: WeightModule) -> SparseOperator:
    """c_{V,W}^{-1}: W (x) V -> V (x) W"""
    dv, dw = V.dim, W.dim
    undo: Dict[int, Dict[int, RatFunc]] = {}
    for b in range(dw):
        for a in range(dv):
            factor = _upsilon(V, W, a, b).inverse()
            if V.parities[a] and W.parities[b]:
                factor = -factor
            undo[b * dv + a] = {a * dw + b: RatFunc(factor)}
    swap = GenMatrix(dv * dw, dw * dv, entries=undo)
    return _to_operator(_quasi_r(V, W, inverse=True) @ swap, (dw, dv), (dv, dw),
                        -UPSILON_CHARGE)


def twist_formula(V: WeightModule) -> ChargedLaurent:
    """q^{-2 a'(n + a' + 1)} with a' = alpha + offset"""
    n, j = V.n, V.offset
    return ChargedLaurent(-2, LaurentPoly.monomial(-2 * (n + 2 * j + 1), -2 * j * (n + j + 1)))


def pivotal_enhancement(V: WeightModule) -> List[LaurentPoly]:
    return [LaurentPoly.monomial(-2, -2 * sh, -1 if p else 1)
            for sh, p in zip(V.shift, V.parities)]


def twist_scalar(V: WeightModule, braiding: Optional[SparseOperator] = None) -> ChargedLaurent:
    """Right partial trace of c_{V,V}, checked against the closed formula"""
    c = braiding if braiding is not None else build_braiding(V, V)
    ptr = partial_trace(c, pivotal_enhancement(V))
    expected = twist_formula(V)
    diagonal_ok = all(ptr.get((a, a), LaurentPoly()) == expected.poly for a in range(V.dim))
    if not diagonal_ok or any(a != b for a, b in ptr):
        raise TwistMismatch(f"partial trace of c on V({V.n}, alpha+{V.offset}) is not {expected}")
    return ChargedLaurent(c.charge, expected.poly)


def normalized_braiding(V: WeightModule) -> SparseOperator:
    c = build_braiding(V, V)
    return c.scale(twist_scalar(V, c).inverse())


def modified_dimension(k: int, offset: int = 0, parity: int = 0, alpha: int = 1) -> RatFunc:
    """(-1)^{k+p} {k+1} / ({a alpha + offset} {a alpha + offset + k + 1})"""
    sign = -1 if (k + parity) % 2 else 1
    value = RatFunc(bracket(0, k + 1), bracket(alpha, offset) * bracket(alpha, offset + k + 1))
    return value if sign > 0 else -value


def open_hopf_formula(V: WeightModule, W: WeightModule) -> ChargedLaurent:
    n, i = V.n, V.offset
    m, j = W.n, W.offset
    a, b = n + 1 + 2 * i, m + 1 + 2 * j
    poly = LaurentPoly.monomial(-2 * (a + b), -a * b) * bracket(1, i) * bracket(1, n + i + 1)
    ratio = LaurentPoly()
    for k in range(m + 1):
        ratio = ratio + LaurentPoly.monomial(0, (n + 1) * (m - 2 * k))
    poly = poly * ratio
    return ChargedLaurent(-4, -poly if W.parity else poly)


def open_hopf(V: WeightModule, W: WeightModule) -> ChargedLaurent:
    """Scalar of the open Hopf link: V open, W closed"""
    double = build_braiding(W, V).compose(build_braiding(V, W))
    mu = pivotal_enhancement(W)
    dw = W.dim
    total = LaurentPoly()
    for w in range(dw):
        total = total + mu[w] * double.entry(w, w)
    value = ChargedLaurent(double.charge, total)
    expected = open_hopf_formula(V, W)
    if value != expected:
        raise HopfMismatch(f"open Hopf scalar {value} differs from closed formula {expected}")
    return value


# ----------------------------------------------------------------------
# characters and fusion


@dataclass(frozen=True, order=True)
class Typical:
    """V(n, alpha_mult * alpha + offset)"""

    n: int
    alpha: int = 1
    offset: int = 0

    @property
    def dim(self) -> int:
        return 4 * (self.n + 1)

    def __str__(self) -> str:
        a = "alpha" if self.alpha == 1 else f"{self.alpha}alpha"
        shift = f"+{self.offset}" if self.offset > 0 else (str(self.offset) if self.offset else "")
        return f"V({self.n},{a}{shift})"


@dataclass(frozen=True)
class Character:
    """Formal character: X tracks lambda1 (s slot), Y the integer part of lambda2 (q slot)"""

    alpha: int
    poly: LaurentPoly

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.alpha + other.alpha, self.poly * other.poly)

    def __pow__(self, k: int) -> "Character":
        result = Character(0, LaurentPoly.constant(1))
        for _ in range(k):
            result = result * self
        return result

    def __add__(self, other: "Character") -> "Character":
        if self.alpha != other.alpha and not (self.poly.is_zero() or other.poly.is_zero()):
            raise CharacterResidue("cannot add characters with different alpha multiples")
        return Character(self.alpha if not self.poly.is_zero() else other.alpha,
                         self.poly + other.poly)


TYPICAL_FACTOR = LaurentPoly({(0, 0): 1, (1, 0): 1, (-1, 1): 1, (0, 1): 1})


def _string(n: int, offset: int) -> LaurentPoly:
    return LaurentPoly({(n - 2 * i, offset + i): 1 for i in range(n + 1)})


def character(n: int, offset: int = 0, alpha: int = 1) -> Character:
    return Character(alpha, TYPICAL_FACTOR * _string(n, offset))


def character_of(V: Typical) -> Character:
    return character(V.n, V.offset, V.alpha)


def decompose(ch: Character) -> Dict[Typical, int]:
    """Greedy top-weight subtraction into typical characters"""
    try:
        rest = exact_div(ch.poly, TYPICAL_FACTOR)
    except NotDivisible:
        raise CharacterResidue("character is not a sum of typical characters")
    result: Counter = Counter()
    while not rest.is_zero():
        (top_x, top_y), mult = max(rest.items())
        if top_x < 0 or mult < 0:
            raise CharacterResidue(f"leftover character term X^{top_x} Y^{top_y} ({mult})")
        result[Typical(top_x, ch.alpha, top_y)] += mult
        rest = rest - _string(top_x, top_y) * mult
    return dict(sorted(result.items()))


def fuse(V: Typical, W: Typical) -> Dict[Typical, int]:
    return decompose(character_of(V) * character_of(W))


def fusion_formula(n: int, m: int, offset_v: int = 0, offset_w: int = 0,
                   alpha_v: int = 1, alpha_w: int = 1) -> Dict[Typical, int]:
    """Closed-form decomposition of V(n, a) (x) V(m, b)"""
    alpha = alpha_v + alpha_w
    base = offset_v + offset_w
    low = min(n, m)
    diff = abs(n - m)
    out: Counter = Counter()
    out[Typical(n + m + 1, alpha, base)] += 1
    for k in range(diff, n + m + 1):
        out[Typical(k, alpha, base + low + (2 + diff - k) // 2)] += 1
        out[Typical(k, alpha, base + low + (1 + diff - k) // 2)] += 1
    if n != m:
        out[Typical(diff - 1, alpha, base + 1 + low)] += 1
    return dict(sorted(out.items()))


def tensor_power_decomposition(n: int) -> Dict[Typical, int]:
    """V(0, alpha)^{(x) n}"""
    return decompose(character(0) ** n)


# ----------------------------------------------------------------------
# colored data


_datum_cache: Dict[Tuple[int, int, int], RMatrixDatum] = {}


def repcore_datum(n: int, parity: int = 0, offset: int = 0) -> RMatrixDatum:
    """Twist-normalized braiding on V(n, alpha + offset) with its pivotal enhancement"""
    key = (n, parity, offset)
    if key in _datum_cache:
        return _datum_cache[key]
    logger.info(f"🔄 Building braiding on V({n}, alpha+{offset}), parity {parity}")
    V = build_module(n, offset, parity)
    c = build_braiding(V, V)
    theta = twist_scalar(V, c)
    R = c.scale(theta.inverse())
    R_inv = build_braiding_inverse(V, V).scale(theta)
    datum = RMatrixDatum(V.dim, R, R_inv, pivotal_enhancement(V), ChargedLaurent(0, 1),
                         label=f"V({n})", extra={"module": V})
    _datum_cache[key] = datum
    logger.info(f"✅ V({n}) datum ready ({R.nonzero_count()} nonzero entries)")
    return datum
