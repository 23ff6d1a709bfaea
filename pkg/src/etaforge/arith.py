"""Small integer helpers shared by the other modules."""

from __future__ import annotations

from functools import lru_cache
from math import gcd, lcm


@lru_cache(maxsize=None)
def factorint(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of ``n >= 1`` as ((p, e), ...) in increasing p."""
    if n < 1:
        raise ValueError(f"factorint needs n >= 1, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorint(n)]


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    divs = [1]
    for p, e in factorint(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return tuple(sorted(divs))


def euler_phi(n: int) -> int:
    result = n
    for p in prime_divisors(n):
        result = result // p * (p - 1)
    return result


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError(f"moebius needs n >= 1, got {n}")
    f = factorint(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorint(n))


def is_prime(n: int) -> bool:
    return n > 1 and factorint(n) == ((n, 1),)


def gamma0_index(n: int) -> int:
    """Index of Gamma_0(n) in SL_2(Z): n * prod_{p | n} (1 + 1/p)."""
    idx = n
    for p in prime_divisors(n):
        idx = idx // p * (p + 1)
    return idx


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


__all__ = [
    "gcd",
    "lcm",
    "factorint",
    "prime_divisors",
    "divisors",
    "euler_phi",
    "moebius",
    "is_squarefree",
    "is_prime",
    "gamma0_index",
    "xgcd",
]
