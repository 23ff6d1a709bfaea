"""Generating sets of Gamma_0(N) with small lower-left entries.

Multiplier estimates need both tau and gamma(tau) high enough in the upper
half plane, which limits |c| of the matrices used.  `small_generators`
returns elements with |c| <= cmax, and `generates` checks that a set spans
Gamma_0(N) by rewriting every Schreier generator (which provably generate)
as a word in it.
"""

from __future__ import annotations

import math

from .analytic import UnimodularMatrix
from .arith import gcd, xgcd

__all__ = [
    "coset_reps",
    "schreier_generators",
    "small_c_elements",
    "reduce_to_translation",
    "generates",
    "small_generators",
]

S = UnimodularMatrix(0, -1, 1, 0)
T = UnimodularMatrix(1, 1, 0, 1)
MINUS_I = UnimodularMatrix(-1, 0, 0, -1)


def _p1_key(c: int, d: int, N: int):
    """Canonical form of (c : d) in P^1(Z/N), up to units."""
    c, d = c % N, d % N
    best = None
    for y in range(1, N + 1):
        if gcd(y, N) == 1:
            k = ((y * c) % N, (y * d) % N)
            if best is None or k < best:
                best = k
    return best


def _complete(c: int, d: int) -> UnimodularMatrix:
    g, x, y = xgcd(d, c)
    # d x + c y = 1 -> (x, -y; c, d)
    return UnimodularMatrix(x, -y, c, d)


def coset_reps(N: int) -> dict:
    """Right coset representatives of Gamma_0(N) in SL_2(Z), keyed by P^1 class.

    Each class gets the coprime bottom row of smallest size in it.
    """
    reps = {}
    B = N
    rows = [(c, d) for c in range(0, B + 1) for d in range(-B, B + 1) if gcd(c, d) == 1]
    rows.sort(key=lambda r: (r[0] * r[0] + r[1] * r[1], r))
    for c, d in rows:
        key = _p1_key(c, d, N)
        if key not in reps:
            reps[key] = _complete(c, d)
    return reps


def _rep_of(g: UnimodularMatrix, reps: dict, N: int) -> UnimodularMatrix:
    return reps[_p1_key(g.c, g.d, N)]


def schreier_generators(N: int) -> list[UnimodularMatrix]:
    """r g rep(r g)^-1 for coset reps r and g in {S, T}; these generate Gamma_0(N)."""
    reps = coset_reps(N)
    out = []
    seen = set()
    for r in reps.values():
        for g in (S, T):
            rg = r @ g
            h = rg @ _rep_of(rg, reps, N).inverse()
            assert h.c % N == 0
            key = h.as_tuple()
            if key not in seen:
                seen.add(key)
                out.append(h)
    return out


def small_c_elements(N: int, cmax: int) -> list[UnimodularMatrix]:
    """Elements (a b; c d) of Gamma_0(N) with 0 < c <= cmax, |d| <= c/2 and |a| <= c/2."""
    out = []
    for c in range(N, cmax + 1, N):
        for d in range(-(c // 2), c // 2 + 1):
            if gcd(c, d) != 1:
                continue
            for a in range(-(c // 2), c // 2 + 1):
                if (a * d - 1) % c == 0:
                    out.append(UnimodularMatrix(a, (a * d - 1) // c, c, d))
    return out


def _is_translation(g: UnimodularMatrix) -> bool:
    return g.c == 0 and g.a == g.d and abs(g.a) == 1


def reduce_to_translation(g: UnimodularMatrix, gens: list[UnimodularMatrix], max_steps: int = 200) -> bool:
    """Greedy check that g lies in the group generated by gens.

    Left-multiplies by generators (and inverses) to push g(z0) upward,
    translating the real part into [-1/2, 1/2), until g becomes +-T^k.
    """
    pool = []
    for h in gens:
        pool.append(h)
        pool.append(h.inverse())
    has_t = any(_is_translation(h) and h.b != 0 for h in gens)
    z0 = complex(0.1234, 3.0)
    cur = g
    for _ in range(max_steps):
        if _is_translation(cur):
            return True
        z = cur.apply(z0)
        if has_t:
            k = math.floor(z.real + 0.5)
            if k:
                cur = UnimodularMatrix(1, -k, 0, 1) @ cur
                z = cur.apply(z0)
        best, best_im = None, z.imag
        for h in pool:
            im = h.apply(z).imag
            if im > best_im * (1 + 1e-12):
                best, best_im = h, im
        if best is None:
            return _is_translation(cur)
        cur = best @ cur
    return False


def generates(gens: list[UnimodularMatrix], N: int) -> bool:
    if any(h.c % N for h in gens):
        return False
    return all(reduce_to_translation(h, gens) for h in schreier_generators(N))


def small_generators(N: int, cmax: int = 38) -> list[UnimodularMatrix]:
    """T, -I and the Gamma_0(N) elements with 0 < c <= cmax in a centered box."""
    return [T, MINUS_I] + small_c_elements(N, cmax)
