"""Dirichlet characters with exact cyclotomic values, Gauss sums, Moebius.

A character mod N with order r is stored as a table of exponents: chi(a) =
zeta_r^exps[a] for units a, and exps[a] is None when gcd(a, N) > 1.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .arith import divisors, euler_phi, gcd, is_prime, lcm, moebius, prime_divisors
from .exactfield import CycNum

__all__ = [
    "DirChar",
    "PrimitiveDecomposition",
    "CharacterError",
    "char_from_spec",
    "conductor",
    "primitive_core",
    "gauss_sum",
    "moebius",
    "eta_chi_level",
    "enumerate_characters",
    "enumerate_primitive_chars",
    "unit_generators",
    "principal",
]


class CharacterError(ValueError):
    pass


def _units(N: int) -> list[int]:
    if N == 1:
        return [0]
    return [a for a in range(1, N) if gcd(a, N) == 1]


@lru_cache(maxsize=None)
def unit_generators(N: int) -> tuple[int, ...]:
    """Greedy generating set of (Z/N)^*: smallest elements not yet generated."""
    if N <= 2:
        return ()
    seen = {1}
    gens = []
    for a in _units(N):
        if a in seen:
            continue
        gens.append(a)
        frontier = list(seen)
        # close the subgroup under multiplication by the new generator
        while frontier:
            nxt = []
            for x in frontier:
                y = x * a % N
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
            frontier = nxt
    return tuple(gens)


def _build_table(N: int, order: int, assignment) -> tuple:
    """Propagate chi(g) = zeta_order^k over the group generated by the g's."""
    if N == 1:
        return (0,)
    exps: list = [None] * N
    exps[1] = 0
    gens = []
    for g, k in assignment:
        g %= N
        if gcd(g, N) != 1:
            raise CharacterError(f"generator {g} is not a unit modulo {N}")
        gens.append((g, k % order))
    frontier = [1]
    while frontier:
        nxt = []
        for x in frontier:
            ex = exps[x]
            for g, k in gens:
                y = x * g % N
                ey = (ex + k) % order
                if exps[y] is None:
                    exps[y] = ey
                    nxt.append(y)
                elif exps[y] != ey:
                    raise CharacterError(f"inconsistent generator assignments modulo {N}")
        frontier = nxt
    missing = [a for a in _units(N) if exps[a] is None]
    if missing:
        raise CharacterError(f"generators do not generate (Z/{N})^*; {missing[0]} unreached")
    return tuple(exps)


class DirChar:
    """Dirichlet character modulo ``modulus`` with values in Q(zeta_order)."""

    def __init__(self, modulus: int, order: int, exps):
        if modulus < 1:
            raise CharacterError("modulus must be positive")
        exps = tuple(exps)
        if len(exps) != modulus:
            raise CharacterError("value table must cover every residue")
        # reduce to the true order
        live = [e for e in exps if e is not None]
        g = order
        for e in live:
            g = gcd(g, e)
        if g > 1:
            order //= g
            exps = tuple(None if e is None else e // g for e in exps)
        self.modulus = modulus
        self.order = order
        self.exps = exps

    @classmethod
    def from_generators(cls, modulus: int, order: int, assignment) -> "DirChar":
        return cls(modulus, order, _build_table(modulus, order, assignment))

    # -- values -------------------------------------------------------------
    def exponent(self, n: int):
        """k with chi(n) = zeta_order^k, or None when chi(n) = 0."""
        return self.exps[n % self.modulus]

    def __call__(self, n: int) -> CycNum:
        e = self.exps[n % self.modulus]
        if e is None:
            return CycNum.from_rational(0)
        if self.order <= 2:
            return CycNum.from_rational(1 if e == 0 else -1)
        return CycNum.zeta(self.order, e)

    def value_fraction(self, n: int):
        """chi(n) as a fraction of a full turn (chi(n) = exp(2 pi i f)), or None."""
        e = self.exps[n % self.modulus]
        return None if e is None else Fraction(e, self.order)

    @property
    def values(self) -> dict[int, CycNum]:
        return {a: self(a) for a in _units(self.modulus)}

    # -- structure ------------------------------------------------------------
    @cached_property
    def conductor(self) -> int:
        N = self.modulus
        for d in divisors(N):
            if all(self.exps[a] == 0 for a in _units(N) if a % d == 1 % d):
                return d
        return N

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @property
    def is_principal(self) -> bool:
        return self.order == 1

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    @property
    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        e = self.exps[(self.modulus - 1) % self.modulus]
        return 1 if e == 0 else -1

    def conj(self) -> "DirChar":
        return DirChar(
            self.modulus,
            self.order,
            tuple(None if e is None else (-e) % self.order for e in self.exps),
        )

    def __mul__(self, other: "DirChar") -> "DirChar":
        N = lcm(self.modulus, other.modulus)
        a, b = self.induce(N), other.induce(N)
        r = lcm(a.order, b.order)
        sa, sb = r // a.order, r // b.order
        exps = tuple(
            None if x is None or y is None else (x * sa + y * sb) % r
            for x, y in zip(a.exps, b.exps)
        )
        return DirChar(N, r, exps)

    def induce(self, M: int) -> "DirChar":
        """The character mod M (a multiple of the modulus) agreeing on units."""
        if M % self.modulus:
            raise CharacterError(f"cannot induce modulus {self.modulus} to {M}")
        if M == self.modulus:
            return self
        exps = tuple(
            self.exps[a % self.modulus] if gcd(a, M) == 1 else None for a in range(M)
        )
        return DirChar(M, self.order, exps)

    # -- identity -------------------------------------------------------------
    def _key(self):
        return (self.modulus, self.order, self.exps)

    def __eq__(self, other):
        if not isinstance(other, DirChar):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @cached_property
    def descriptor(self) -> str:
        """Canonical descriptor string, parseable by char_from_spec."""
        N = self.modulus
        if self.is_principal:
            return f"one:{N}"
        if N == 4:
            return "psi4"
        if self.is_real and is_prime(N) and N > 2 and self == _legendre(N):
            return f"kronecker:{N}"
        parts = ",".join(f"{g}={self.exps[g]}" for g in unit_generators(N))
        return f"mod:{N}:{self.order}:{parts}"

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "order": self.order,
            "gens": [[g, self.exps[g]] for g in unit_generators(self.modulus)],
        }

    def __repr__(self):
        return f"DirChar({self.descriptor})"

    def __str__(self):
        return self.descriptor


def principal(N: int) -> DirChar:
    return DirChar(N, 1, tuple(0 if gcd(a, N) == 1 else None for a in range(N)) if N > 1 else (0,))


@lru_cache(maxsize=None)
def _legendre(p: int) -> DirChar:
    exps = [None] * p
    for a in range(1, p):
        exps[a] = 0 if pow(a, (p - 1) // 2, p) == 1 else 1
    return DirChar(p, 2, exps)


def char_from_spec(spec) -> DirChar:
    """Parse a character descriptor.

    Accepted forms: ``kronecker:p`` (Legendre symbol, p odd prime), ``psi4``,
    ``one:N``, ``chi5:1`` / ``chi5:2`` (the order-4 characters mod 5 with
    chi(2) = i and -i), ``mod:N:r:g=k,...`` (chi(g) = zeta_r^k), a JSON
    string, or a dict {"modulus": N, "order": r, "gens": [[g, k], ...]}.
    """
    if isinstance(spec, DirChar):
        return spec
    if isinstance(spec, dict):
        return DirChar.from_generators(
            int(spec["modulus"]), int(spec["order"]), [(int(g), int(k)) for g, k in spec["gens"]]
        )
    if not isinstance(spec, str):
        raise CharacterError(f"bad character descriptor {spec!r}")
    s = spec.strip()
    if s.startswith("{"):
        return char_from_spec(json.loads(s))
    try:
        if s == "psi4":
            return DirChar(4, 2, (None, 0, None, 1))
        kind, _, rest = s.partition(":")
        if kind == "one":
            return principal(int(rest))
        if kind == "kronecker":
            p = int(rest)
            if p < 3 or not is_prime(p):
                raise CharacterError(f"kronecker:p needs an odd prime, got {p}")
            return _legendre(p)
        if kind == "chi5":
            which = int(rest)
            if which not in (1, 2):
                raise CharacterError("chi5 label must be 1 or 2")
            return DirChar.from_generators(5, 4, [(2, 1 if which == 1 else 3)])
        if kind == "mod":
            N, r, gens = rest.split(":", 2)
            assignment = []
            for item in filter(None, gens.split(",")):
                g, k = item.split("=")
                assignment.append((int(g), int(k)))
            return DirChar.from_generators(int(N), int(r), assignment)
    except CharacterError:
        raise
    except (ValueError, TypeError) as exc:
        raise CharacterError(f"bad character descriptor {spec!r}: {exc}") from exc
    raise CharacterError(f"bad character descriptor {spec!r}")


@dataclass(frozen=True)
class PrimitiveDecomposition:
    core: DirChar
    induced_modulus: int


def conductor(chi: DirChar) -> int:
    return chi.conductor


def primitive_core(chi: DirChar) -> PrimitiveDecomposition:
    """chi = chi_0 * 1_N with chi_0 primitive modulo the conductor."""
    u = chi.conductor
    N = chi.modulus
    if u == N:
        return PrimitiveDecomposition(chi, N)
    if u == 1:
        return PrimitiveDecomposition(principal(1), N)
    exps = [None] * u
    for a in _units(N):
        b = a % u
        if exps[b] is None:
            exps[b] = chi.exps[a]
    return PrimitiveDecomposition(DirChar(u, chi.order, exps), N)


def gauss_sum(chi, n=1) -> CycNum:
    """g(n, chi) = sum over units a mod u of chi(a) zeta_u^(a n).

    Also callable as gauss_sum(n, chi).
    """
    if isinstance(chi, int) and not isinstance(n, int):
        chi, n = n, chi
    chi = char_from_spec(chi)
    u = chi.modulus
    if u == 1:
        return CycNum.from_rational(1)
    r = chi.order
    M = lcm(u, r)
    su, sr = M // u, M // r
    return CycNum.from_exponents(M, ((chi.exps[a] * sr + a * n * su, 1) for a in _units(u)))


def eta_chi_level(chi: DirChar) -> int:
    """Level u^2 * prod_{p | N, p not dividing u} p of the generalized eta function."""
    if not chi.is_real:
        warnings.warn(f"{chi.descriptor} is not real; level formula is stated for real characters")
    u = chi.conductor
    Q = u * u
    for p in prime_divisors(chi.modulus):
        if u % p:
            Q *= p
    return Q


@lru_cache(maxsize=None)
def enumerate_characters(N: int) -> tuple[DirChar, ...]:
    """All phi(N) characters modulo N, by brute force over generator values."""
    if N <= 2:
        return (principal(N),)
    gens = unit_generators(N)
    units = _units(N)
    e = 1
    for a in units:
        k, x = 1, a
        while x != 1:
            x = x * a % N
            k += 1
        e = lcm(e, k)
    chars = []
    for ks in itertools.product(range(e), repeat=len(gens)):
        try:
            chars.append(DirChar.from_generators(N, e, list(zip(gens, ks))))
        except CharacterError:
            continue
    if len(chars) != euler_phi(N):
        raise AssertionError(f"found {len(chars)} characters mod {N}, expected {euler_phi(N)}")
    return tuple(chars)


def _sort_key(chi: DirChar):
    return (chi.order, tuple(chi.value_fraction(g) for g in unit_generators(chi.modulus)))


@lru_cache(maxsize=None)
def enumerate_primitive_chars(u: int) -> tuple[DirChar, ...]:
    """Primitive characters of conductor exactly u; (1_1,) for u = 1.

    Ordered by character order, then by the values on the canonical
    generators, so mod 5 gives ((./5), chi(2)=i, chi(2)=-i).
    """
    if u == 1:
        return (principal(1),)
    prim = [c for c in enumerate_characters(u) if c.conductor == u]
    return tuple(sorted(prim, key=_sort_key))
