"""Cusps of Gamma_0(N) and exact orders of eta_chi at the cusps of Gamma_0(u^2)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from .arith import divisors, euler_phi, gcd
from .characters import DirChar, char_from_spec
from .eisenstein import L2_real

__all__ = [
    "Cusp",
    "parse_cusp",
    "cusp_count",
    "enumerate_cusps",
    "cusp_equivalent",
    "width",
    "canonical_cusp",
    "eta_chi_constant_term",
    "eta_chi_cusp_order",
    "eta_chi_order_table",
]


@dataclass(frozen=True)
class Cusp:
    """The cusp a/c on Gamma_0(level); infinity is 1/0."""

    a: int
    c: int
    level: int

    def __post_init__(self):
        a, c = self.a, self.c
        if c < 0:
            a, c = -a, -c
        if c == 0:
            a = 1
        elif gcd(a, c) != 1:
            raise ValueError(f"cusp {self.a}/{self.c} is not reduced")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)

    @property
    def width(self) -> int:
        return width(self)

    @property
    def is_infinity(self) -> bool:
        return self.c == 0

    def fraction(self) -> str:
        return f"{self.a}/{self.c}"

    def __str__(self):
        if self.c == 0:
            return "∞"
        if self.c == 1:
            return str(self.a)
        return f"{self.a}/{self.c}"


def parse_cusp(text: str, level: int) -> Cusp:
    s = text.strip()
    if s in ("∞", "oo", "inf", "infinity", "Infinity"):
        return Cusp(1, 0, level)
    if "/" in s:
        a, c = s.split("/")
        a, c = int(a), int(c)
        g = gcd(a, c) or 1
        return Cusp(a // g, c // g, level)
    return Cusp(int(s), 1, level)


def width(s: Cusp) -> int:
    """N / gcd(c^2, N)."""
    N = s.level
    return N // gcd(s.c * s.c, N)


def cusp_count(N: int) -> int:
    return sum(euler_phi(gcd(d, N // d)) for d in divisors(N))


def cusp_equivalent(s1: Cusp, s2: Cusp, N: int | None = None) -> bool:
    """Gamma_0(N)-equivalence of a/c and a'/c'.

    Criterion: c' = y c (mod N) and a = y a' (mod gcd(c, N)) for some unit y mod N.
    """
    if N is None:
        N = s1.level
    a1, c1, a2, c2 = s1.a, s1.c, s2.a, s2.c
    g1, g2 = gcd(c1, N), gcd(c2, N)
    if g1 != g2:
        return False
    for y in range(1, N + 1):
        if gcd(y, N) != 1:
            continue
        if (c2 - y * c1) % N == 0 and (a1 - y * a2) % g1 == 0:
            return True
    return False


def _canonical_candidates(N: int, d: int):
    if d == N:
        yield Cusp(1, 0, N)
        return
    if d == 1:
        yield Cusp(0, 1, N)
        return
    a = 1
    while True:
        if gcd(a, d) == 1:
            yield Cusp(a, d, N)
        a += 1


def enumerate_cusps(N: int) -> list[Cusp]:
    """One representative per cusp class: ∞, 0, then a/d by increasing d and a."""
    if N < 1:
        raise ValueError("level must be positive")
    reps: list[Cusp] = []
    order = sorted(divisors(N), key=lambda d: (d != N, d != 1, d))
    for d in order:
        need = euler_phi(gcd(d, N // d))
        found: list[Cusp] = []
        for cand in _canonical_candidates(N, d):
            if all(not cusp_equivalent(cand, s, N) for s in found):
                found.append(cand)
            if len(found) == need:
                break
        reps.extend(found)
    return reps


def canonical_cusp(s: Cusp) -> Cusp:
    """The enumerate_cusps representative equivalent to s."""
    for rep in enumerate_cusps(s.level):
        if cusp_equivalent(s, rep, s.level):
            return rep
    raise AssertionError(f"cusp {s} matched no class representative")


def _require_real_primitive(chi: DirChar):
    if not chi.is_real:
        raise ValueError(f"{chi.descriptor} is not real")
    if not chi.is_primitive or chi.modulus <= 1:
        raise ValueError(f"{chi.descriptor} must be primitive with conductor > 1")


def eta_chi_constant_term(chi, s: Cusp) -> tuple[Fraction, Cusp]:
    """Exact constant term of theta(eta_chi)/eta_chi at s, as a rational.

    At s ~ k/u (gcd(k, u) = 1) it is chi(k) (u / 2 pi)^2 L(2, chi^2), and
    L(2, chi^2) is a rational multiple of pi^2, so the pi's cancel.  Zero at
    every other cusp.  Also returns the k/u representative (or s itself).
    """
    chi = char_from_spec(chi)
    _require_real_primitive(chi)
    u = chi.modulus
    N = u * u
    if s.level != N:
        s = Cusp(s.a, s.c, N)
    for k in range(1, u):
        if gcd(k, u) != 1:
            continue
        rep = Cusp(k, u, N)
        if cusp_equivalent(s, rep, N):
            sign = 1 if chi.exponent(k) == 0 else -1
            value = sign * mpq(u * u, 4) * L2_real(chi)
            return Fraction(int(value.numerator), int(value.denominator)), rep
    return Fraction(0), s


def eta_chi_cusp_order(chi, s: Cusp) -> int:
    """Order l_s = w_s c^2 (constant term) of eta_chi at the cusp s of Gamma_0(u^2).

    c and w_s are read off the k/u representative.  Raises ArithmeticError
    if the result is not an integer.
    """
    const, rep = eta_chi_constant_term(chi, s)
    if not const:
        return 0
    l = width(rep) * rep.c * rep.c * const
    if l.denominator != 1:
        raise ArithmeticError(f"non-integral cusp order {l} for {chi} at {s}")
    return int(l)


def eta_chi_order_table(chi) -> list[dict]:
    chi = char_from_spec(chi)
    _require_real_primitive(chi)
    N = chi.modulus ** 2
    return [
        {"cusp": s.fraction(), "label": str(s), "width": width(s), "order": eta_chi_cusp_order(chi, s)}
        for s in enumerate_cusps(N)
    ]

