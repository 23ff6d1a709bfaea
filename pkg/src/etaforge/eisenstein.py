"""Weight-2 Eisenstein series E_2^{psi,phi}, E_{2,t} and the L-values they use."""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .arith import divisors, lcm, prime_divisors
from .characters import DirChar, principal
from .exactfield import ZERO, CycNum, cyc_field
from .qseries import QSeries, v_operator

__all__ = [
    "EisensteinE2",
    "sigma1",
    "L_minus_one",
    "bernoulli2",
    "e2_series",
    "e2t_series",
    "L2_real",
]


def _char_pair_field(psi: DirChar, phi: DirChar) -> int:
    return lcm(psi.order, phi.order)


def sigma1(psi: DirChar, phi: DirChar, n: int) -> CycNum:
    """sum_{d | n} psi(n/d) phi(d) d."""
    if n < 1:
        raise ValueError("sigma1 needs n >= 1")
    M = _char_pair_field(psi, phi)
    sp, sf = M // psi.order, M // phi.order
    pairs = []
    for d in divisors(n):
        x = psi.exponent(n // d)
        y = phi.exponent(d)
        if x is None or y is None:
            continue
        pairs.append((x * sp + y * sf, d))
    return CycNum.from_exponents(M, pairs)


def bernoulli2(x) -> mpq:
    """Second Bernoulli polynomial B_2(x) = x^2 - x + 1/6."""
    x = mpq(x)
    return x * x - x + mpq(1, 6)


def L_minus_one(phi: DirChar) -> CycNum:
    """L(-1, phi) = -B_{2,phi}/2 with B_{2,phi} = v sum_{a=1}^{v} phi(a) B_2(a/v)."""
    v = phi.modulus
    M = phi.order
    pairs = []
    for a in range(1, v + 1):
        e = phi.exponent(a)
        if e is not None:
            pairs.append((e, bernoulli2(mpq(a, v))))
    B = CycNum.from_exponents(M, pairs) * v
    return B * mpq(-1, 2)


@dataclass(frozen=True)
class EisensteinE2:
    psi: DirChar
    phi: DirChar
    series: QSeries

    @property
    def level(self) -> int:
        return self.psi.modulus * self.phi.modulus


def e2_series(psi: DirChar, phi: DirChar, precision: int) -> EisensteinE2:
    """delta(psi) L(-1, phi) + 2 sum_{n >= 1} sigma1^{psi,phi}(n) q^n."""
    if precision < 1:
        raise ValueError("precision must be at least 1")
    M = _char_pair_field(psi, phi)
    F = cyc_field(M)
    const = L_minus_one(phi).embed(M) if psi.is_principal else CycNum._make(M, F.zero)
    rows = [const.coeffs]
    for n in range(1, precision):
        rows.append(tuple(2 * x for x in sigma1(psi, phi, n).embed(M).coeffs))
    return EisensteinE2(psi, phi, QSeries._raw(M, ZERO, rows))


def e2t_series(t: int, precision: int) -> QSeries:
    """E_{2,t} = E_2 - t (E_2 | V_t) with E_2 = E_2^{1_1, 1_1}."""
    if t <= 1:
        raise ValueError("E_{2,t} needs t > 1")
    one = principal(1)
    E2 = e2_series(one, one, precision).series
    return E2 - v_operator(E2, t).truncate(precision).scale(t)


def L2_real(chi: DirChar) -> mpq:
    """Rational f with L(2, chi^2) = f * pi^2 for a real character chi.

    chi^2 is the principal character of the modulus, so
    L(2, chi^2) = zeta(2) prod_{p | modulus} (1 - p^-2) and zeta(2) = pi^2/6.
    """
    if not chi.is_real:
        raise ValueError(f"{chi.descriptor} is not a real character")
    if chi.conductor <= 1:
        raise ValueError("L2_real needs conductor > 1")
    f = mpq(1, 6)
    for p in prime_divisors(chi.modulus):
        f *= 1 - mpq(1, p * p)
    return f
