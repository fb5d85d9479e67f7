#!/usr/bin/env python3
"""
Exact arithmetic in Z[s^{+-1}, q^{+-1}] where s stands for q^alpha.

Three value types live here:
  LaurentPoly    - sparse map (e_s, e_q) -> int, zero coefficients never stored
  ChargedLaurent - q^{c alpha^2} * poly, the scalar type of braidings and twists
  RatFunc        - fraction field element with a factored denominator

Everything is immutable once built. Hot loops in the state-sum engine work on
the raw term dictionaries through add_product_into / prune_terms.
"""

import heapq
from collections import Counter
from functools import reduce
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from errors import ChargeMismatch, NotDivisible, OddExponent, ZeroPolynomial

Exponent = Tuple[int, int]
Terms = Dict[Exponent, int]
Matrix2 = Sequence[Sequence[int]]


def add_product_into(acc: Terms, a: Terms, b: Terms) -> None:
    """acc += a * b on raw term maps; may leave zero coefficients behind"""
    get = acc.get
    for (ae, aq), ac in a.items():
        for (be, bq), bc in b.items():
            key = (ae + be, aq + bq)
            acc[key] = get(key, 0) + ac * bc


def prune_terms(terms: Terms) -> Terms:
    return {k: c for k, c in terms.items() if c}


class LaurentPoly:
    """Sparse Laurent polynomial in s and q with integer coefficients"""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Union[Terms, Iterable[Tuple[Exponent, int]]]] = None):
        clean: Terms = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for (es, eq), coeff in items:
                key = (int(es), int(eq))
                clean[key] = clean.get(key, 0) + int(coeff)
        self._terms = {k: c for k, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _wrap(cls, terms: Terms) -> "LaurentPoly":
        # terms must already be free of zero coefficients
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def from_raw(cls, terms: Terms) -> "LaurentPoly":
        return cls._wrap(prune_terms(terms))

    @classmethod
    def monomial(cls, es: int = 0, eq: int = 0, coeff: int = 1) -> "LaurentPoly":
        return cls._wrap({(es, eq): coeff} if coeff else {})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls.monomial(0, 0, c)

    # ------------------------------------------------------------------
    # inspection

    @property
    def terms(self) -> Terms:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0, 0) in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """Units of the Laurent ring are +-s^a q^b"""
        if len(self._terms) != 1:
            return False
        return abs(next(iter(self._terms.values()))) == 1

    def coefficient(self, es: int, eq: int) -> int:
        return self._terms.get((es, eq), 0)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._terms.get((0, 0), 0)

    def content(self) -> int:
        return reduce(gcd, (abs(c) for c in self._terms.values()), 0)

    def min_key(self) -> Exponent:
        return min(self._terms)

    def max_key(self) -> Exponent:
        return max(self._terms)

    # ------------------------------------------------------------------
    # arithmetic

    @staticmethod
    def _coerce(other) -> Optional["LaurentPoly"]:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return None

    def __eq__(self, other) -> bool:
        other_poly = self._coerce(other)
        if other_poly is None:
            return NotImplemented
        return self._terms == other_poly._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._wrap({k: -c for k, c in self._terms.items()})

    def __add__(self, other) -> "LaurentPoly":
        other_poly = self._coerce(other)
        if other_poly is None:
            return NotImplemented
        if not other_poly._terms:
            return self
        out = dict(self._terms)
        for k, c in other_poly._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly._wrap(out)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        other_poly = self._coerce(other)
        if other_poly is None:
            return NotImplemented
        return self + (-other_poly)

    def __rsub__(self, other) -> "LaurentPoly":
        other_poly = self._coerce(other)
        if other_poly is None:
            return NotImplemented
        return other_poly + (-self)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._wrap({k: c * other for k, c in self._terms.items()})
        other_poly = self._coerce(other)
        if other_poly is None:
            return NotImplemented
        acc: Terms = {}
        add_product_into(acc, self._terms, other_poly._terms)
        return LaurentPoly.from_raw(acc)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise NotDivisible(f"{self} is not a unit")
        (es, eq), c = next(iter(self._terms.items()))
        return LaurentPoly.monomial(-es, -eq, c)

    def div_int(self, n: int) -> "LaurentPoly":
        out = {}
        for k, c in self._terms.items():
            if c % n:
                raise NotDivisible(f"{self} is not divisible by {n}")
            out[k] = c // n
        return LaurentPoly._wrap(out)

    # ------------------------------------------------------------------
    # convenience wrappers around the module functions

    def substitute(self, M: Matrix2) -> "LaurentPoly":
        return substitute_monomial(self, M)

    def pull_back(self, M: Matrix2) -> "LaurentPoly":
        return pull_back(self, M)

    def degrees(self) -> Tuple[int, int, int, int]:
        return degrees(self)

    def span_s(self) -> int:
        hi, lo, _, _ = degrees(self)
        return hi - lo

    # ------------------------------------------------------------------
    # serialization

    def to_json(self) -> List[list]:
        """[[e_s, e_q, "coeff"], ...] sorted by (e_s, e_q)"""
        return [[es, eq, str(c)] for (es, eq), c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data: Iterable[Sequence]) -> "LaurentPoly":
        terms: Terms = {}
        for entry in data:
            if len(entry) != 3:
                raise ValueError(f"bad term {entry!r}")
            es, eq, coeff = entry
            if isinstance(es, bool) or isinstance(eq, bool):
                raise ValueError(f"bad exponent in {entry!r}")
            key = (int(es), int(eq))
            terms[key] = terms.get(key, 0) + int(coeff)
        return cls.from_raw(terms)

    def format(self, names: Tuple[str, str] = ("s", "q")) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for (es, eq), c in sorted(self._terms.items(), reverse=True):
            factors = []
            for name, e in zip(names, (es, eq)):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        head_sign, head = pieces[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"LaurentPoly({self.format()})"

    __str__ = format


ZERO = LaurentPoly._wrap({})
ONE = LaurentPoly.monomial(0, 0, 1)
S = LaurentPoly.monomial(1, 0)
Q = LaurentPoly.monomial(0, 1)


def as_poly(value) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, int):
        return LaurentPoly.constant(value)
    raise TypeError(f"cannot interpret {value!r} as a Laurent polynomial")


def bracket(a: int, b: int) -> LaurentPoly:
    """{a*alpha + b} = s^a q^b - s^-a q^-b"""
    if a == 0 and b == 0:
        return ZERO
    return LaurentPoly._wrap({(a, b): 1, (-a, -b): -1})


def substitute_monomial(p: LaurentPoly, M: Matrix2) -> LaurentPoly:
    """s -> s^M11 q^M21, q -> s^M12 q^M22; M may be singular"""
    (m11, m12), (m21, m22) = M
    acc: Terms = {}
    for (es, eq), c in as_poly(p).items():
        key = (m11 * es + m12 * eq, m21 * es + m22 * eq)
        acc[key] = acc.get(key, 0) + c
    return LaurentPoly.from_raw(acc)


def pull_back(p: LaurentPoly, M: Matrix2) -> LaurentPoly:
    """Inverse of substitute_monomial on the image lattice of an invertible M"""
    (m11, m12), (m21, m22) = M
    det = m11 * m22 - m12 * m21
    if det == 0:
        raise ValueError("pull_back needs an invertible exponent map")
    out: Terms = {}
    for (es, eq), c in as_poly(p).items():
        a_num = m22 * es - m12 * eq
        b_num = -m21 * es + m11 * eq
        if a_num % det or b_num % det:
            raise OddExponent(f"exponent ({es}, {eq}) is outside the image lattice")
        out[(a_num // det, b_num // det)] = c
    return LaurentPoly._wrap(out)


def divide_s_exponents(p: LaurentPoly, n: int) -> LaurentPoly:
    out: Terms = {}
    for (es, eq), c in as_poly(p).items():
        if es % n:
            raise OddExponent(f"s-exponent {es} is not divisible by {n}")
        out[(es // n, eq)] = c
    return LaurentPoly._wrap(out)


def halve_s_exponents(p: LaurentPoly) -> LaurentPoly:
    return divide_s_exponents(p, 2)


def degrees(p: LaurentPoly) -> Tuple[int, int, int, int]:
    """(max_e_s, min_e_s, max_e_q, min_e_q)"""
    p = as_poly(p)
    if p.is_zero():
        raise ZeroPolynomial("degrees of the zero polynomial")
    s_exps = [es for es, _ in p.terms]
    q_exps = [eq for _, eq in p.terms]
    return max(s_exps), min(s_exps), max(q_exps), min(q_exps)


def exact_div(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """Return r with r*d == p or raise NotDivisible"""
    p = as_poly(p)
    d = as_poly(d)
    if d.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    if p.is_zero():
        return ZERO
    dt = d.terms
    if len(dt) == 1:
        (de, dq), dc = next(iter(dt.items()))
        out = {}
        for (es, eq), c in p.items():
            if c % dc:
                raise NotDivisible(f"{p} is not divisible by {d}")
            out[(es - de, eq - dq)] = c // dc
        return LaurentPoly._wrap(out)

    p_hi_s, p_lo_s, p_hi_q, p_lo_q = degrees(p)
    d_hi_s, d_lo_s, d_hi_q, d_lo_q = degrees(d)
    s_lo, s_hi = p_lo_s - d_lo_s, p_hi_s - d_hi_s
    q_lo, q_hi = p_lo_q - d_lo_q, p_hi_q - d_hi_q
    if s_lo > s_hi or q_lo > q_hi:
        raise NotDivisible(f"{p} is not divisible by {d}")

    lead = max(dt)
    lead_coeff = dt[lead]
    rem = dict(p.terms)
    heap = [(-es, -eq) for es, eq in rem]
    heapq.heapify(heap)
    quotient: Terms = {}
    while rem:
        while True:
            ne, nq = heapq.heappop(heap)
            key = (-ne, -nq)
            if key in rem:
                break
        c = rem[key]
        qe, qq = key[0] - lead[0], key[1] - lead[1]
        if c % lead_coeff or not (s_lo <= qe <= s_hi and q_lo <= qq <= q_hi):
            raise NotDivisible(f"{p} is not divisible by {d}")
        qc = c // lead_coeff
        quotient[(qe, qq)] = qc
        for (es, eq), dc in dt.items():
            k = (es + qe, eq + qq)
            v = rem.get(k, 0) - qc * dc
            if v:
                if k not in rem:
                    heapq.heappush(heap, (-k[0], -k[1]))
                rem[k] = v
            else:
                rem.pop(k, None)
    return LaurentPoly._wrap(quotient)


class ChargedLaurent:
    """q^{charge * alpha^2} * poly"""

    __slots__ = ("charge", "poly")

    def __init__(self, charge: int = 0, poly=None):
        self.charge = int(charge)
        self.poly = ONE if poly is None else as_poly(poly)

    @staticmethod
    def _coerce(other) -> Optional["ChargedLaurent"]:
        if isinstance(other, ChargedLaurent):
            return other
        if isinstance(other, (int, LaurentPoly)):
            return ChargedLaurent(0, other)
        return None

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_unit(self) -> bool:
        return self.poly.is_unit()

    def __eq__(self, other) -> bool:
        other_c = self._coerce(other)
        if other_c is None:
            return NotImplemented
        if self.poly.is_zero() and other_c.poly.is_zero():
            return True
        return self.charge == other_c.charge and self.poly == other_c.poly

    def __hash__(self) -> int:
        if self.poly.is_zero():
            return hash(ZERO)
        return hash((self.charge, self.poly))

    def __add__(self, other) -> "ChargedLaurent":
        other_c = self._coerce(other)
        if other_c is None:
            return NotImplemented
        # a zero summand carries no charge
        if other_c.poly.is_zero():
            return self
        if self.poly.is_zero():
            return other_c
        if self.charge != other_c.charge:
            raise ChargeMismatch(f"cannot add charges {self.charge} and {other_c.charge}")
        return ChargedLaurent(self.charge, self.poly + other_c.poly)

    __radd__ = __add__

    def __neg__(self) -> "ChargedLaurent":
        return ChargedLaurent(self.charge, -self.poly)

    def __sub__(self, other) -> "ChargedLaurent":
        other_c = self._coerce(other)
        if other_c is None:
            return NotImplemented
        return self + (-other_c)

    def __rsub__(self, other) -> "ChargedLaurent":
        other_c = self._coerce(other)
        if other_c is None:
            return NotImplemented
        return other_c + (-self)

    def __mul__(self, other) -> "ChargedLaurent":
        other_c = self._coerce(other)
        if other_c is None:
            return NotImplemented
        return ChargedLaurent(self.charge + other_c.charge, self.poly * other_c.poly)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "ChargedLaurent":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return ChargedLaurent(self.charge * exponent, self.poly ** exponent)

    def inverse(self) -> "ChargedLaurent":
        return ChargedLaurent(-self.charge, self.poly.inverse())

    def to_laurent(self) -> LaurentPoly:
        if self.charge and not self.poly.is_zero():
            raise ChargeMismatch(f"charge {self.charge} does not embed in the Laurent ring")
        return self.poly

    def __repr__(self) -> str:
        if self.charge:
            return f"ChargedLaurent(q^({self.charge}a^2) * ({self.poly.format()}))"
        return f"ChargedLaurent({self.poly.format()})"


def _normalize_factor(f: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly, int]:
    """Split f = unit * content * g with g primitive, lex-smallest term at (0,0) and positive"""
    (e0, q0) = f.min_key()
    c0 = f.terms[(e0, q0)]
    sign = 1 if c0 > 0 else -1
    content = f.content()
    g = LaurentPoly._wrap({(es - e0, eq - q0): sign * c // content for (es, eq), c in f.items()})
    unit = LaurentPoly.monomial(e0, q0, sign)
    return unit, g, content


class RatFunc:
    """num / (scale * prod g^m) with each g primitive and normalized"""

    __slots__ = ("num", "scale", "factors")

    def __init__(self, num=0, den=None):
        self.num = as_poly(num)
        self.scale = 1
        self.factors: Dict[LaurentPoly, int] = {}
        if den is not None:
            den = as_poly(den)
            if den.is_zero():
                raise ZeroPolynomial("zero denominator")
            self._absorb(den, 1)
        self._cancel()

    @classmethod
    def _make(cls, num: LaurentPoly, scale: int, factors: Dict[LaurentPoly, int]) -> "RatFunc":
        r = cls.__new__(cls)
        r.num = num
        r.scale = scale
        r.factors = {g: m for g, m in factors.items() if m}
        r._cancel()
        return r

    def _absorb(self, den: LaurentPoly, mult: int) -> None:
        unit, g, content = _normalize_factor(den)
        self.num = self.num * unit.inverse() ** mult
        self.scale *= content ** mult
        if not g.is_constant():
            self.factors[g] = self.factors.get(g, 0) + mult

    def _cancel(self) -> None:
        if self.num.is_zero():
            self.scale = 1
            self.factors = {}
            return
        for g in list(self.factors):
            m = self.factors[g]
            while m:
                try:
                    self.num = exact_div(self.num, g)
                except NotDivisible:
                    break
                m -= 1
            if m:
                self.factors[g] = m
            else:
                del self.factors[g]
        if self.scale != 1:
            common = gcd(self.num.content(), self.scale)
            if common > 1:
                self.num = self.num.div_int(common)
                self.scale //= common

    @staticmethod
    def _coerce(other) -> Optional["RatFunc"]:
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, LaurentPoly)):
            return RatFunc(other)
        return None

    @property
    def den(self) -> LaurentPoly:
        out = LaurentPoly.constant(self.scale)
        for g, m in self.factors.items():
            out = out * g ** m
        return out

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return not self.factors and self.scale == 1

    def to_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise NotDivisible(f"{self} is not a Laurent polynomial")
        return self.num

    def __eq__(self, other) -> bool:
        other_r = self._coerce(other)
        if other_r is None:
            return NotImplemented
        return self.num * other_r.den == other_r.num * self.den

    __hash__ = None

    def __neg__(self) -> "RatFunc":
        return RatFunc._make(-self.num, self.scale, dict(self.factors))

    def __mul__(self, other) -> "RatFunc":
        other_r = self._coerce(other)
        if other_r is None:
            return NotImplemented
        factors = Counter(self.factors)
        factors.update(other_r.factors)
        return RatFunc._make(self.num * other_r.num, self.scale * other_r.scale, dict(factors))

    __rmul__ = __mul__

    def __add__(self, other) -> "RatFunc":
        other_r = self._coerce(other)
        if other_r is None:
            return NotImplemented
        if other_r.is_zero():
            return self
        if self.is_zero():
            return other_r
        common: Dict[LaurentPoly, int] = dict(self.factors)
        for g, m in other_r.factors.items():
            common[g] = max(common.get(g, 0), m)
        scale = self.scale * other_r.scale // gcd(self.scale, other_r.scale)

        def lift(r: "RatFunc") -> LaurentPoly:
            out = r.num * (scale // r.scale)
            for g, m in common.items():
                extra = m - r.factors.get(g, 0)
                if extra:
                    out = out * g ** extra
            return out

        return RatFunc._make(lift(self) + lift(other_r), scale, common)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        other_r = self._coerce(other)
        if other_r is None:
            return NotImplemented
        return self + (-other_r)

    def __rsub__(self, other) -> "RatFunc":
        other_r = self._coerce(other)
        if other_r is None:
            return NotImplemented
        return other_r + (-self)

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroPolynomial("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        other_r = self._coerce(other)
        if other_r is None:
            return NotImplemented
        return self * other_r.inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        other_r = self._coerce(other)
        if other_r is None:
            return NotImplemented
        return other_r * self.inverse()

    def __pow__(self, exponent: int) -> "RatFunc":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = RatFunc(1)
        for _ in range(exponent):
            result = result * self
        return result

    def substitute(self, M: Matrix2) -> "RatFunc":
        result = RatFunc(substitute_monomial(self.num, M), self.scale)
        for g, m in self.factors.items():
            result = result * RatFunc(1, substitute_monomial(g, M)) ** m
        return result

    def __repr__(self) -> str:
        if self.is_laurent():
            return f"RatFunc({self.num.format()})"
        return f"RatFunc(({self.num.format()}) / ({self.den.format()}))"


def quantum_integer(a: int, b: int) -> RatFunc:
    """[a*alpha + b] = {a*alpha + b} / {1}"""
    return RatFunc(bracket(a, b), bracket(0, 1))
