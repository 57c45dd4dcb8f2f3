"""Exact Laurent-polynomial arithmetic in the three parameters q0, q1, q.

Scalars are sparse integer Laurent polynomials in q0^(1/2), q1^(1/2), q^(1/2).
Half-integer exponents are stored doubled, so every exponent in this module is
an integer and arithmetic is exact.  A monomial's exponent triple (2*e0, 2*e1,
2*e) is packed into a single int key: field-wise addition of packed keys is
monomial multiplication, which keeps the hot paths (Hecke products, structure
constants) on fast int-keyed dicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

_SHIFT = 32
_OFF = 1 << (_SHIFT - 1)
_LIMIT = 1 << (_SHIFT - 4)  # sanity bound on doubled exponents
_MASK = (1 << _SHIFT) - 1

ZERO_KEY = (_OFF << (2 * _SHIFT)) | (_OFF << _SHIFT) | _OFF
_DOUBLE_ZERO = 2 * ZERO_KEY


def pack_key(e0: int, e1: int, e: int) -> int:
    """Pack a doubled exponent triple into one int (lex order preserved)."""
    if not (-_LIMIT < e0 < _LIMIT and -_LIMIT < e1 < _LIMIT and -_LIMIT < e < _LIMIT):
        raise OverflowError(f"exponent triple out of range: {(e0, e1, e)}")
    return ((e0 + _OFF) << (2 * _SHIFT)) | ((e1 + _OFF) << _SHIFT) | (e + _OFF)


def unpack_key(k: int) -> tuple[int, int, int]:
    return (
        (k >> (2 * _SHIFT)) - _OFF,
        ((k >> _SHIFT) & _MASK) - _OFF,
        (k & _MASK) - _OFF,
    )


class RingError(Exception):
    pass


class SpecializationError(RingError):
    pass


class Scalar:
    """Integer Laurent polynomial in q0^(1/2), q1^(1/2), q^(1/2)."""

    __slots__ = ("t",)

    def __init__(self, terms: dict[int, int]):
        # terms maps packed exponent key -> nonzero integer coefficient
        self.t = terms

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Scalar":
        return cls({})

    @classmethod
    def one(cls) -> "Scalar":
        return cls({ZERO_KEY: 1})

    @classmethod
    def from_int(cls, c: int) -> "Scalar":
        return cls({ZERO_KEY: c}) if c else cls({})

    @classmethod
    def mono(cls, e0: int = 0, e1: int = 0, e: int = 0, coeff: int = 1) -> "Scalar":
        """Monomial coeff * q0^(e0/2) q1^(e1/2) q^(e/2); exponents are doubled ints."""
        if coeff == 0:
            return cls({})
        return cls({pack_key(e0, e1, e): coeff})

    @classmethod
    def q(cls, k: int = 1) -> "Scalar":
        return cls.mono(e=2 * k)

    @classmethod
    def q0(cls, k: int = 1) -> "Scalar":
        return cls.mono(e0=2 * k)

    @classmethod
    def q1(cls, k: int = 1) -> "Scalar":
        return cls.mono(e1=2 * k)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.t

    def is_one(self) -> bool:
        return self.t == {ZERO_KEY: 1}

    def __bool__(self) -> bool:
        return bool(self.t)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.t == (Scalar.from_int(other).t)
        return isinstance(other, Scalar) and self.t == other.t

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    def terms(self):
        """Iterate (doubled exponent triple, coefficient)."""
        for k, c in self.t.items():
            yield unpack_key(k), c

    def n_terms(self) -> int:
        return len(self.t)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Scalar") -> "Scalar":
        if not other.t:
            return self
        if not self.t:
            return other
        out = dict(self.t)
        for k, c in other.t.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return Scalar(out)

    def __neg__(self) -> "Scalar":
        return Scalar({k: -c for k, c in self.t.items()})

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return Scalar({})
            return Scalar({k: c * other for k, c in self.t.items()})
        a, b = self.t, other.t
        if not a or not b:
            return Scalar({})
        if len(a) > len(b):
            a, b = b, a
        out: dict[int, int] = {}
        for k1, c1 in a.items():
            base = k1 - ZERO_KEY
            for k2, c2 in b.items():
                k = base + k2
                v = out.get(k, 0) + c1 * c2
                if v:
                    out[k] = v
                else:
                    del out[k]
        return Scalar(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            if len(self.t) == 1:
                ((k, c),) = self.t.items()
                if c in (1, -1):
                    e0, e1, e = unpack_key(k)
                    return Scalar.mono(n * e0, n * e1, n * e, c ** (n & 1))
            raise RingError("negative power of a non-unit scalar")
        out = Scalar.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def bar(self) -> "Scalar":
        """Invert all three parameters (exponent negation)."""
        return Scalar({_DOUBLE_ZERO - k: c for k, c in self.t.items()})

    # -- division -----------------------------------------------------------

    def leading(self) -> tuple[int, int]:
        """(packed key, coeff) of the lex-largest monomial."""
        k = max(self.t)
        return k, self.t[k]

    def _min_exponents(self) -> tuple[int, int, int]:
        triples = [unpack_key(k) for k in self.t]
        return tuple(min(t[i] for t in triples) for i in range(3))

    def exact_div(self, other: "Scalar") -> "Scalar":
        """Exact division; raises RingError when the remainder is nonzero.

        Both operands are shifted so all exponents are nonnegative; minimal
        exponents are additive over this domain, so a true quotient monomial
        never has a negative exponent and inexactness is detected quickly.
        """
        if not other.t:
            raise RingError("division by zero scalar")
        if not self.t:
            return Scalar({})
        mf = self._min_exponents()
        mg = other._min_exponents()
        shift_f = pack_key(-mf[0], -mf[1], -mf[2]) - ZERO_KEY
        shift_g = pack_key(-mg[0], -mg[1], -mg[2]) - ZERO_KEY
        rem = {k + shift_f: c for k, c in self.t.items()}
        og = {k + shift_g: c for k, c in other.t.items()}
        gk = max(og)
        gc = og[gk]
        out: dict[int, int] = {}
        while rem:
            fk = max(rem)
            fc = rem[fk]
            if fc % gc:
                raise RingError("inexact scalar division (coefficient)")
            qk = fk - gk + ZERO_KEY
            if any(x < 0 for x in unpack_key(qk)):
                raise RingError("inexact scalar division (monomial)")
            qc = fc // gc
            out[qk] = qc
            base = qk - ZERO_KEY
            for k2, c2 in og.items():
                k = base + k2
                v = rem.get(k, 0) - qc * c2
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        back = shift_g - shift_f
        return Scalar({k + back: c for k, c in out.items()})

    def divides(self, other: "Scalar") -> bool:
        try:
            other.exact_div(self)
            return True
        except RingError:
            return False

    # -- substitutions -------------------------------------------------------

    def subs_q0_q1(self, s0: int, s1: int) -> "Scalar":
        """Substitute q0 -> q^s0 and q1 -> q^s1 (integer powers of q)."""
        out: dict[int, int] = {}
        for k, c in self.t.items():
            e0, e1, e = unpack_key(k)
            k2 = pack_key(0, 0, e + e0 * s0 + e1 * s1)
            v = out.get(k2, 0) + c
            if v:
                out[k2] = v
            else:
                del out[k2]
        return Scalar(out)

    def specialize(self, L: "WeightFunction") -> "VScalar":
        """Exact substitution q -> v^-L1, q0 -> v^(Ld-L0), q1 -> v^(-L0-Ld)."""
        out: dict[int, int] = {}
        for k, c in self.t.items():
            e0, e1, e = unpack_key(k)
            num = e0 * (L.Ld - L.L0) + e1 * (-L.L0 - L.Ld) + e * (-L.L1)
            if num % 2:
                raise SpecializationError(
                    f"monomial (doubled {unpack_key(k)}) maps to a half power of v"
                )
            ve = num // 2
            if ve % L.c:
                raise SpecializationError(
                    f"v-exponent {ve} is not a multiple of c={L.c}"
                )
            v = out.get(ve, 0) + c
            if v:
                out[ve] = v
            else:
                del out[ve]
        return VScalar(out)

    # -- io -------------------------------------------------------------------

    def to_json(self):
        return sorted([*k2, c] for k2, c in ((unpack_key(k), c) for k, c in self.t.items()))

    @classmethod
    def from_json(cls, data) -> "Scalar":
        out: dict[int, int] = {}
        for e0, e1, e, c in data:
            if c:
                out[pack_key(e0, e1, e)] = c
        return cls(out)

    def __repr__(self):
        if not self.t:
            return "0"
        bits = []
        for k in sorted(self.t, reverse=True):
            e0, e1, e = unpack_key(k)
            c = self.t[k]
            mono = "".join(
                _fmt_pow(sym, ex) for sym, ex in (("q0", e0), ("q1", e1), ("q", e))
            )
            if mono:
                cs = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                bits.append(f"{cs}{mono}")
            else:
                bits.append(str(c))
        s = " + ".join(bits).replace("+ -", "- ")
        return s


def _fmt_pow(sym: str, doubled: int) -> str:
    if doubled == 0:
        return ""
    if doubled == 2:
        return sym
    if doubled % 2 == 0:
        return f"{sym}^{doubled // 2}"
    return f"{sym}^({doubled}/2)"


ONE = Scalar.one()
Q = Scalar.q()


# -- quantum combinatorics ----------------------------------------------------


@lru_cache(maxsize=None)
def qint(m: int) -> Scalar:
    """[m] = (q^-2m - 1)/(q^-2 - 1), exact for any integer m."""
    if m == 0:
        return Scalar.zero()
    if m > 0:
        return Scalar({pack_key(0, 0, -4 * k): 1 for k in range(m)})
    # [m] = -(q^2 + q^4 + ... + q^-2m) for m < 0
    return Scalar({pack_key(0, 0, 4 * k): -1 for k in range(1, -m + 1)})


@lru_cache(maxsize=None)
def qfact(n: int) -> Scalar:
    if n < 0:
        raise RingError("factorial of a negative index")
    if n == 0:
        return Scalar.one()
    return qfact(n - 1) * qint(n)


@lru_cache(maxsize=None)
def qbinom(m: int, n: int) -> Scalar:
    """[m choose n] for any integer m and n >= 0; a Laurent polynomial."""
    if n < 0:
        raise RingError("binomial with negative lower index")
    if n == 0:
        return Scalar.one()
    num = Scalar.one()
    for ell in range(1, n + 1):
        num = num * qint(m - n + ell)
    return num.exact_div(qfact(n))


@lru_cache(maxsize=None)
def c_bracket(k: int, kind: str) -> Scalar:
    """[2k]_{c0} or [2k]_{c1}: the end-node two-parameter quantum integer."""
    if kind == "c0":
        extra = Scalar.one() + Scalar.mono(e0=-2, e1=-2, e=-4 * (k - 1))
    elif kind == "c1":
        extra = Scalar.one() + Scalar.mono(e0=2, e1=-2, e=-4 * (k - 1))
    else:
        raise RingError(f"unknown end-node kind {kind!r}")
    return qint(k) * extra


@lru_cache(maxsize=None)
def cfact(m: int, kind: str) -> Scalar:
    """[m]_{c0}! or [m]_{c1}! = prod_{k=1..m} [2k]_{c_l}."""
    if m < 0:
        raise RingError("end-node factorial of a negative index")
    if m == 0:
        return Scalar.one()
    return cfact(m - 1, kind) * c_bracket(m, kind)


def balanced_qint(r: int) -> Scalar:
    """(q^r - q^-r)/(q - q^-1) = q^(r-1) + q^(r-3) + ... + q^(1-r), r >= 0."""
    if r < 0:
        raise RingError("balanced quantum integer needs r >= 0")
    return Scalar({pack_key(0, 0, 2 * (r - 1 - 2 * k)): 1 for k in range(r)})


QM2_MINUS_1 = Scalar.mono(e=-4) - Scalar.one()  # q^-2 - 1


# -- one-variable scalars (after specialization) -------------------------------


class VScalar:
    """Integer Laurent polynomial in the specialization variable v."""

    __slots__ = ("t",)

    def __init__(self, terms: dict[int, int]):
        self.t = terms

    @classmethod
    def zero(cls) -> "VScalar":
        return cls({})

    @classmethod
    def one(cls) -> "VScalar":
        return cls({0: 1})

    @classmethod
    def mono(cls, e: int, coeff: int = 1) -> "VScalar":
        return cls({e: coeff}) if coeff else cls({})

    def is_zero(self) -> bool:
        return not self.t

    def __bool__(self):
        return bool(self.t)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.t == ({0: other} if other else {})
        return isinstance(other, VScalar) and self.t == other.t

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    def __add__(self, other: "VScalar") -> "VScalar":
        out = dict(self.t)
        for k, c in other.t.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return VScalar(out)

    def __neg__(self):
        return VScalar({k: -c for k, c in self.t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return VScalar({k: c * other for k, c in self.t.items()}) if other else VScalar({})
        out: dict[int, int] = {}
        for k1, c1 in self.t.items():
            for k2, c2 in other.t.items():
                k = k1 + k2
                v = out.get(k, 0) + c1 * c2
                if v:
                    out[k] = v
                else:
                    del out[k]
        return VScalar(out)

    __rmul__ = __mul__

    def bar(self) -> "VScalar":
        return VScalar({-k: c for k, c in self.t.items()})

    def constant_term(self) -> int:
        return self.t.get(0, 0)

    def positive_part(self) -> "VScalar":
        """The part with strictly positive v-exponents."""
        return VScalar({k: c for k, c in self.t.items() if k > 0})

    def in_positive_span(self, c: int) -> bool:
        """All exponents positive multiples of c (membership in v^c Z[v^c])."""
        return all(k > 0 and k % c == 0 for k in self.t)

    def to_json(self):
        return sorted([k, c] for k, c in self.t.items())

    @classmethod
    def from_json(cls, data) -> "VScalar":
        return cls({k: c for k, c in data if c})

    def __repr__(self):
        if not self.t:
            return "0"
        bits = []
        for k in sorted(self.t, reverse=True):
            c = self.t[k]
            if k == 0:
                bits.append(str(c))
            else:
                vp = "v" if k == 1 else f"v^{k}"
                cs = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                bits.append(f"{cs}{vp}")
        return " + ".join(bits).replace("+ -", "- ")


@dataclass(frozen=True)
class WeightFunction:
    """Values of a weight function on the three generator classes (s0, interior, sd)."""

    L0: int
    L1: int
    Ld: int

    def __post_init__(self):
        if self.L0 < 0 or self.L1 < 0 or self.Ld < 0:
            raise RingError("weight function values must be natural numbers")
        if self.L0 == self.L1 == self.Ld == 0:
            raise RingError("the zero weight function is not allowed")

    @property
    def c(self) -> int:
        return math.gcd(abs(self.L0 - self.Ld), self.L0 + self.Ld, self.L1)


# -- linear-in-p integers -------------------------------------------------------


@dataclass(frozen=True)
class LinP:
    """Integer of the shape a + b*p with p a formal even parameter."""

    a: int = 0
    b: int = 0

    def __add__(self, other):
        if isinstance(other, int):
            return LinP(self.a + other, self.b)
        return LinP(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return LinP(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-other if isinstance(other, LinP) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LinP(self.a * other, self.b * other)
        if self.b and other.b:
            raise RingError("quadratic term in p is not representable")
        return LinP(self.a * other.a, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def at(self, p: int) -> int:
        return self.a + self.b * p

    def exact_half(self) -> "LinP":
        if self.a % 2 or self.b % 2:
            raise RingError(f"{self} is not even")
        return LinP(self.a // 2, self.b // 2)


def as_linp(x) -> LinP:
    return x if isinstance(x, LinP) else LinP(x, 0)


# -- exact fractions (needed only for displaying coideal generator scalars) -----


class ScalarFraction:
    """Exact fraction of scalars; comparisons go through cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: Scalar, den: Scalar = ONE):
        if den.is_zero():
            raise RingError("zero denominator")
        self.num = num
        self.den = den

    def __add__(self, other: "ScalarFraction") -> "ScalarFraction":
        return ScalarFraction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __mul__(self, other) -> "ScalarFraction":
        if isinstance(other, Scalar):
            return ScalarFraction(self.num * other, self.den)
        return ScalarFraction(self.num * other.num, self.den * other.den)

    def __neg__(self):
        return ScalarFraction(-self.num, self.den)

    def __eq__(self, other) -> bool:
        return self.num * other.den == other.num * self.den

    def as_scalar(self) -> Scalar:
        return self.num.exact_div(self.den)

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})"
