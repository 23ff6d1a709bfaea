"""Exact arithmetic in the rationals and in cyclotomic fields Q(zeta_m).

Elements of Q(zeta_m) are stored in the power basis 1, z, ..., z^(phi(m)-1)
after reduction modulo the m-th cyclotomic polynomial, so structural equality
is value equality.  Mixed-order arithmetic embeds both operands in
Q(zeta_lcm) first.

Rationals are ``gmpy2.mpq`` values (always reduced, positive denominator).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC

import gmpy2
import mpmath
from gmpy2 import mpq

from .arith import divisors, euler_phi, gcd, lcm, moebius

Rational = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)


def as_rational(x) -> mpq:
    """Coerce ints, Fractions, mpq and strings like "-3/4" to mpq.

    Floats are refused: every value in this package is exact.
    """
    if isinstance(x, Rational):
        return x
    if isinstance(x, (int, type(gmpy2.mpz(0)))):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, q = s.split("/")
            return mpq(int(p), int(q))
        return mpq(int(s))
    if isinstance(x, _RationalABC):
        return mpq(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rational_str(q) -> str:
    q = as_rational(q)
    return f"{int(q.numerator)}/{int(q.denominator)}"


def to_fraction(q) -> Fraction:
    q = as_rational(q)
    return Fraction(int(q.numerator), int(q.denominator))


def _cyclotomic_poly(m: int) -> list[int]:
    """Integer coefficients (low to high) of the m-th cyclotomic polynomial."""
    # x^m - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m):
        if d == m:
            continue
        den = _cyclotomic_poly_cached(d)
        # exact division by a monic integer polynomial
        num = list(num)
        deg_d = len(den) - 1
        quot = [0] * (len(num) - deg_d)
        for i in range(len(num) - 1, deg_d - 1, -1):
            c = num[i]
            if c:
                quot[i - deg_d] = c
                for j, dj in enumerate(den):
                    num[i - deg_d + j] -= c * dj
        assert not any(num[:deg_d]), "non-exact cyclotomic division"
        num = quot
    return num


@lru_cache(maxsize=None)
def _cyclotomic_poly_cached(m: int) -> tuple[int, ...]:
    return tuple(_cyclotomic_poly(m))


def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    return _cyclotomic_poly_cached(m)


class CycField:
    """Reduction tables for Q(zeta_m); one shared instance per m (see cyc_field)."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError(f"cyclotomic order must be positive, got {m}")
        self.m = m
        self.phi = euler_phi(m)
        self.poly = cyclotomic_polynomial(m)
        phi = self.phi
        top = max(m - 1, 2 * phi - 2)
        table = []
        v = [0] * phi
        v[0] = 1
        for _ in range(top + 1):
            table.append(tuple(v))
            # multiply by x, reduce the overflow with Phi_m (monic)
            lead = v[-1]
            v = [0] + v[:-1]
            if lead:
                for i in range(phi):
                    v[i] -= lead * self.poly[i]
        self._pow = table
        # sparse rows for the entries >= phi, used by reduce()
        self._tail = [
            [(i, c) for i, c in enumerate(table[k]) if c] for k in range(len(table))
        ]
        self.zero = (ZERO,) * phi
        self.one = (ONE,) + (ZERO,) * (phi - 1)
        ang = [2 * math.pi * j / m for j in range(phi)]
        self._cos = [math.cos(a) for a in ang]
        self._sin = [math.sin(a) for a in ang]

    def __repr__(self):
        return f"CycField({self.m})"

    def power(self, k: int) -> tuple[int, ...]:
        """Integer coordinates of zeta_m^k."""
        return self._pow[k % self.m]

    def reduce(self, acc) -> tuple:
        """Reduce a coefficient list indexed by powers of zeta (length <= table size)."""
        phi = self.phi
        out = list(acc[:phi])
        if len(out) < phi:
            out.extend([ZERO] * (phi - len(out)))
        tail = self._tail
        for k in range(phi, len(acc)):
            c = acc[k]
            if c:
                for i, t in tail[k]:
                    out[i] += c * t
        return tuple(out)

    def reduce_exponents(self, pairs) -> tuple:
        """Reduce sum of coeff * zeta^k given as (k, coeff) pairs, any k."""
        m = self.m
        acc = [ZERO] * self.phi
        for k, c in pairs:
            if c:
                for i, t in self._tail[k % m]:
                    acc[i] += c * t
        return tuple(acc)

    def mul(self, a, b) -> tuple:
        phi = self.phi
        if phi == 1:
            return (a[0] * b[0],)
        acc = [ZERO] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        acc[i + j] += ai * bj
        return self.reduce(acc)

    def scale(self, a, c) -> tuple:
        return tuple(x * c for x in a)

    def inv(self, a) -> tuple:
        phi = self.phi
        if phi == 1:
            if not a[0]:
                raise ZeroDivisionError("division by zero in Q")
            return (ONE / a[0],)
        if not any(a):
            raise ZeroDivisionError(f"division by zero in Q(zeta_{self.m})")
        # column j of the multiplication matrix is a * zeta^j
        cols = []
        col = list(a)
        for _ in range(phi):
            cols.append(col)
            lead = col[-1]
            col = [ZERO] + col[:-1]
            if lead:
                col = [col[i] - lead * self.poly[i] for i in range(phi)]
        rows = [[cols[j][i] for j in range(phi)] + [ONE if i == 0 else ZERO] for i in range(phi)]
        solved = _solve_augmented(rows, phi)
        return tuple(solved)

    def galois(self, a, k: int) -> tuple:
        """Apply zeta -> zeta^k (k a unit mod m)."""
        if self.phi == 1:
            return tuple(a)
        return self.reduce_exponents((j * k, c) for j, c in enumerate(a))

    def embed(self, a, m2: int) -> tuple:
        if m2 == self.m:
            return tuple(a)
        if m2 % self.m:
            raise ValueError(f"Q(zeta_{self.m}) does not embed in Q(zeta_{m2})")
        s = m2 // self.m
        return cyc_field(m2).reduce_exponents((j * s, c) for j, c in enumerate(a))

    def to_complex(self, a) -> complex:
        if self.phi == 1:
            return complex(float(a[0]), 0.0)
        re = math.fsum(float(c) * self._cos[j] for j, c in enumerate(a) if c)
        im = math.fsum(float(c) * self._sin[j] for j, c in enumerate(a) if c)
        return complex(re, im)


def _solve_augmented(rows, n):
    """Gauss-Jordan on an n x (n+1) mpq matrix; returns the solution vector."""
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rc = [x / p for x in rows[col]]
        rows[col] = rc
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rc)]
    return [rows[i][n] for i in range(n)]


@lru_cache(maxsize=None)
def cyc_field(m: int) -> CycField:
    return CycField(m)


class CycNum:
    """An exact element of Q(zeta_m).

    ``CycNum([c0, c1, ...], m)`` means sum c_j zeta_m^j; inputs of any length
    are reduced modulo Phi_m.  Instances are immutable.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs=(0,), order: int = 1):
        F = cyc_field(order)
        vals = [as_rational(c) for c in coeffs]
        if len(vals) == F.phi:
            vec = tuple(vals)
        else:
            vec = F.reduce_exponents(enumerate(vals))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", vec)

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    @classmethod
    def _make(cls, order: int, vec: tuple) -> "CycNum":
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", vec)
        return obj

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "CycNum":
        F = cyc_field(m)
        return cls._make(m, tuple(mpq(x) for x in F.power(k)))

    @classmethod
    def from_rational(cls, q) -> "CycNum":
        return cls._make(1, (as_rational(q),))

    @classmethod
    def from_exponents(cls, m: int, pairs) -> "CycNum":
        """sum of coeff * zeta_m^k over (k, coeff) pairs."""
        F = cyc_field(m)
        return cls._make(m, F.reduce_exponents((k, as_rational(c)) for k, c in pairs))

    @property
    def field(self) -> CycField:
        return cyc_field(self.order)

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- embedding -------------------------------------------------------
    def embed(self, m2: int) -> "CycNum":
        if m2 == self.order:
            return self
        return CycNum._make(m2, self.field.embed(self.coeffs, m2))

    @staticmethod
    def _common(a: "CycNum", b: "CycNum"):
        if a.order == b.order:
            return a.order, a.coeffs, b.coeffs
        m = lcm(a.order, b.order)
        return m, a.embed(m).coeffs, b.embed(m).coeffs

    @staticmethod
    def _coerce(x):
        if isinstance(x, CycNum):
            return x
        try:
            return CycNum._make(1, (as_rational(x),))
        except TypeError:
            return None

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.order == 1:
            v = list(self.coeffs)
            v[0] += o.coeffs[0]
            return CycNum._make(self.order, tuple(v))
        m, a, b = self._common(self, o)
        return CycNum._make(m, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum._make(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.order == 1:
            c = o.coeffs[0]
            return CycNum._make(self.order, tuple(x * c for x in self.coeffs))
        if self.order == 1:
            c = self.coeffs[0]
            return CycNum._make(o.order, tuple(x * c for x in o.coeffs))
        m, a, b = self._common(self, o)
        return CycNum._make(m, cyc_field(m).mul(a, b))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        return CycNum._make(self.order, self.field.inv(self.coeffs))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.order == 1:
            if not o.coeffs[0]:
                raise ZeroDivisionError("division by zero")
            c = ONE / o.coeffs[0]
            return CycNum._make(self.order, tuple(x * c for x in self.coeffs))
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = CycNum._make(self.order, self.field.one)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj(self) -> "CycNum":
        """Complex conjugation zeta -> zeta^-1."""
        return CycNum._make(self.order, self.field.galois(self.coeffs, -1))

    def galois(self, k: int) -> "CycNum":
        if gcd(k, self.order) != 1:
            raise ValueError(f"{k} is not a unit modulo {self.order}")
        return CycNum._make(self.order, self.field.galois(self.coeffs, k))

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.order == self.order:
            return o.coeffs == self.coeffs
        _, a, b = self._common(self, o)
        return a == b

    def normalized_trace(self) -> mpq:
        """Tr(x) / [Q(zeta_m):Q]; independent of the ambient cyclotomic field."""
        m = self.order
        total = ZERO
        for j, c in enumerate(self.coeffs):
            if c:
                d = m // gcd(j, m)
                mu = moebius(d)
                if mu:
                    total += c * mu / euler_phi(d)
        return total

    def __hash__(self):
        return hash(self.normalized_trace())

    # -- numerics / io ---------------------------------------------------
    def __complex__(self):
        return self.field.to_complex(self.coeffs)

    def to_complex(self) -> complex:
        return self.field.to_complex(self.coeffs)

    def to_json(self) -> dict:
        return {"zeta_order": self.order, "coeffs": [rational_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "CycNum":
        m = int(obj["zeta_order"])
        coeffs = [as_rational(c) for c in obj["coeffs"]]
        if len(coeffs) != euler_phi(m):
            raise ValueError(f"expected {euler_phi(m)} coefficients for zeta_order {m}")
        return cls._make(m, tuple(coeffs))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                mono = ""
            elif j == 1:
                mono = f"z{self.order}"
            else:
                mono = f"z{self.order}^{j}"
            cs = str(abs(c)) if c.denominator == 1 else f"{abs(c.numerator)}/{c.denominator}"
            if mono and abs(c) == 1:
                term = mono
            elif mono:
                term = f"{cs}*{mono}"
            else:
                term = cs
            parts.append(("-" if c < 0 else "+", term))
        s = " ".join(f"{sign} {t}" for sign, t in parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"CycNum({self})"


def cyc_embed(x: CycNum, m2: int) -> CycNum:
    return x.embed(m2)


def cyc_arith(a, b, op: str) -> CycNum:
    a, b = CycNum._coerce(a), CycNum._coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def cyc_to_complex(x, precision_bits: int = 53):
    """Numeric image of x under zeta_m -> exp(2 pi i / m).

    Returns a (re, im) pair: floats when precision_bits <= 53, mpmath mpf
    otherwise.  Absolute error is below 2**(-precision_bits + 4).
    """
    if precision_bits < 53:
        raise ValueError("precision_bits must be at least 53")
    x = CycNum._coerce(x)
    height = sum(abs(c) for c in x.coeffs) + 1
    extra = int(gmpy2.mpz(height.numerator // height.denominator + 1).bit_length())
    with mpmath.workprec(precision_bits + 20 + extra):
        re = mpmath.mpf(0)
        im = mpmath.mpf(0)
        for j, c in enumerate(x.coeffs):
            if c:
                v = mpmath.mpf(int(c.numerator)) / int(c.denominator)
                ang = 2 * mpmath.pi * j / x.order
                re += v * mpmath.cos(ang)
                im += v * mpmath.sin(ang)
    if precision_bits <= 53:
        return float(re), float(im)
    return re, im
