"""Floating-point side: shifted zeta values, G_2 constant terms at cusps,
numeric evaluation of series and products on the upper half plane, and
multiplier estimates.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .arith import gcd, xgcd
from .characters import DirChar, char_from_spec, primitive_core
from .cusps import Cusp, canonical_cusp, width
from .eta import EtaQuotientExpr, eta_chi_moebius_expand
from .exactfield import to_fraction
from .qseries import QSeries

__all__ = [
    "ResidueVector",
    "UnimodularMatrix",
    "TailBoundError",
    "hurwitz_zeta2",
    "zeta_shifted",
    "cusp_matrix",
    "g2_constant_term",
    "eta_chi_order_numeric",
    "eval_series",
    "log_eta_chi",
    "eval_quotient_log",
    "choose_tau",
    "estimate_multiplier",
]

TWO_PI_I = 2j * math.pi

# B_2, B_4, ..., B_20
_BERNOULLI_EVEN = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
]


class TailBoundError(ValueError):
    """An evaluation point is too close to the real axis for the requested truncation."""


@dataclass(frozen=True)
class ResidueVector:
    """A pair (cv, dv) in (Z/NZ)^2."""

    cv: int
    dv: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "cv", self.cv % self.modulus)
        object.__setattr__(self, "dv", self.dv % self.modulus)

    def act(self, g: "UnimodularMatrix") -> "ResidueVector":
        """Row vector times matrix."""
        return ResidueVector(self.cv * g.a + self.dv * g.c, self.cv * g.b + self.dv * g.d, self.modulus)


@dataclass(frozen=True)
class UnimodularMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of ({self.a} {self.b}; {self.c} {self.d}) is not 1")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def __matmul__(self, o: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def apply(self, tau: complex) -> complex:
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def in_gamma0(self, N: int) -> bool:
        return self.c % N == 0

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


def cusp_matrix(s: Cusp) -> UnimodularMatrix:
    """A matrix (a b; c d) with gamma(infinity) = a/c."""
    if s.c == 0:
        return UnimodularMatrix.identity()
    g, x, y = xgcd(s.a, s.c)
    # a x + c y = 1, so (a, -y; c, x) has determinant 1
    return UnimodularMatrix(s.a, -y, s.c, x)


def _em_tail(y: float, target: float) -> float:
    """sum_{n >= 0} 1/(y+n)^2 for y >= 10 by Euler-Maclaurin."""
    total = 1.0 / y + 0.5 / (y * y)
    for j, B in enumerate(_BERNOULLI_EVEN, start=1):
        term = float(B) / y ** (2 * j + 1)
        total += term
        if abs(term) < target / 100:
            break
    return total


def hurwitz_zeta2(x: float, target_abs_err: float = 1e-13) -> float:
    """Hurwitz zeta at s = 2: sum_{n >= 0} (n + x)^-2 for x > 0."""
    if x <= 0:
        raise ValueError("hurwitz_zeta2 needs x > 0")
    # direct part until the Euler-Maclaurin remainder term is tiny
    M = max(10, int(math.ceil(12 - x)))
    head = math.fsum(1.0 / ((n + x) * (n + x)) for n in range(M))
    return head + _em_tail(M + x, target_abs_err)


def zeta_shifted(d: int, N: int, target_abs_err: float = 1e-12) -> float:
    """sum over nonzero m = d (mod N), both signs, of 1/m^2."""
    if target_abs_err < 1e-12:
        raise ValueError("target_abs_err must be at least 1e-12")
    if N < 1:
        raise ValueError("modulus must be positive")
    d %= N
    if d == 0:
        return (math.pi * math.pi / 3) / (N * N)
    tol = target_abs_err * N * N / 2
    return (hurwitz_zeta2(d / N, tol) + hurwitz_zeta2(1 - d / N, tol)) / (N * N)


def _chi_values(chi: DirChar, u: int) -> list[complex]:
    return [chi(c).to_complex() if gcd(c, u) == 1 else 0j for c in range(u)]


def g2_constant_term(chi, gamma: UnimodularMatrix, target_abs_err: float = 1e-12) -> complex:
    """Constant term of G_2^{chi, conj chi} | gamma for primitive chi of conductor u.

    With gamma = (k b; s k') this is the finite sum over 0 <= c, d, e < u of
    chi(c) chi(d) [u(se + ck) + sd = 0 mod u^2] zeta^{u(bc + k'e) + k'd}(2)
    at modulus u^2.  The non-holomorphic correction of the weight-2
    transformation cancels because the chi-weighted sum of 1 is zero.
    """
    chi = char_from_spec(chi)
    if not chi.is_primitive or chi.modulus < 2:
        raise ValueError("g2_constant_term needs a primitive character of conductor > 1")
    u = chi.modulus
    N = u * u
    k, b, s, kp = gamma.a, gamma.b, gamma.c, gamma.d
    vals = _chi_values(chi, u)
    zcache: dict[int, float] = {}
    terms = []
    for c in range(u):
        if not vals[c]:
            continue
        for d in range(u):
            if not vals[d]:
                continue
            w = vals[c] * vals[d]
            for e in range(u):
                if (u * (s * e + c * k) + s * d) % N:
                    continue
                r = (u * (b * c + kp * e) + kp * d) % N
                if r not in zcache:
                    zcache[r] = zeta_shifted(r, N, max(target_abs_err / (u * u * u), 1e-12))
                terms.append(w * zcache[r])
    re = math.fsum(t.real for t in terms)
    im = math.fsum(t.imag for t in terms)
    return complex(re, im)


def eta_chi_order_numeric(chi, s: Cusp) -> float:
    """w_s c^2 (chi(-1) u^2 / 8 pi^2) g2_constant_term(chi, gamma_s) for real primitive chi."""
    chi = char_from_spec(chi)
    if not chi.is_real or not chi.is_primitive or chi.modulus < 2:
        raise ValueError(f"{chi.descriptor} must be real primitive with conductor > 1")
    u = chi.modulus
    s = canonical_cusp(Cusp(s.a, s.c, u * u))
    gamma = cusp_matrix(s)
    g2 = g2_constant_term(chi, gamma)
    sign = chi.parity
    return width(s) * s.c * s.c * sign * u * u / (8 * math.pi ** 2) * g2.real


# ---------------------------------------------------------------- evaluation


def eval_series(f: QSeries, tau: complex, terms: int | None = None, target_abs_err: float = 1e-10):
    """Partial sum q^r sum_{n < T} c_n q^n at q = e^{2 pi i tau}.

    Returns (value, tail) where tail bounds the omitted part by the largest of
    the last few coefficients times a geometric series.  Warns when the tail
    exceeds target_abs_err.
    """
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    T = f.precision if terms is None else terms
    if T > f.precision:
        raise ValueError(f"{T} terms requested but only {f.precision} are known")
    q = cmath.exp(TWO_PI_I * tau)
    rho = abs(q)
    coeffs = f.complex_coeffs()[:T]
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * q + c
    lead = cmath.exp(TWO_PI_I * float(to_fraction(f.leading_exponent)) * tau)
    window = coeffs[max(0, T - 5):]
    big = max((abs(c) for c in window), default=0.0)
    tail = big * rho ** T / (1 - rho) * abs(lead) if T else float("inf")
    if tail > target_abs_err:
        warnings.warn(
            f"series tail estimate {tail:.3g} exceeds {target_abs_err:.3g} at |q| = {rho:.4f}",
            RuntimeWarning,
            stacklevel=2,
        )
    return acc * lead, tail


def log_eta_chi(chi, tau: complex, factors: int = 500) -> complex:
    """A logarithm of eta_chi(tau) summed from the product form.

    Uses the same twist as the exact expansion, so exp of the result
    agrees with the q-series wherever both converge.
    """
    chi = char_from_spec(chi)
    q = cmath.exp(TWO_PI_I * tau)
    if abs(q) >= 1:
        raise ValueError("tau must lie in the upper half plane")
    if chi.is_principal:
        if chi.modulus == 1:
            acc = TWO_PI_I * tau / 24
            qn = 1.0 + 0j
            for _ in range(factors):
                qn *= q
                acc += cmath.log(1 - qn)
            return acc
        return eval_quotient_log(eta_chi_moebius_expand(chi), tau, factors)
    core = primitive_core(chi).core
    u = core.modulus
    roots = {}
    for a in range(1, u):
        e = core.exponent(a)
        if e is not None:
            roots[a] = (cmath.exp(TWO_PI_I * a / u), e)
    acc = 0j
    qn = 1.0 + 0j
    for n in range(1, factors + 1):
        qn *= q
        en = chi.exponent(n)
        if en is None:
            continue
        for a, (z, ea) in roots.items():
            # conj(chi_0(a) chi(n)) as a root of unity of order chi.order / core.order
            w = cmath.exp(-TWO_PI_I * (Fraction(ea, core.order) + Fraction(en, chi.order)))
            acc += w * cmath.log(1 - z * qn)
    return acc


def eval_quotient_log(e: EtaQuotientExpr, tau: complex, factors: int = 500) -> complex:
    """log c + sum a_{t,chi} log eta_chi(t tau)."""
    acc = cmath.log(e.constant.to_complex())
    for (t, chi), a in e.sorted_terms():
        acc += float(a) * log_eta_chi(chi, t * tau, factors)
    return acc


def _weight(e: EtaQuotientExpr) -> Fraction:
    return sum((a for (t, chi), a in e.terms.items() if chi.modulus == 1), Fraction(0)) / 2


def choose_tau(gamma: UnimodularMatrix) -> complex:
    """tau with c tau + d = i, so Im tau = Im gamma(tau) = 1/|c|."""
    if gamma.c == 0:
        return 1j
    return complex(-gamma.d / gamma.c, 1 / abs(gamma.c))


def _as_expr(f) -> EtaQuotientExpr:
    if isinstance(f, EtaQuotientExpr):
        return f
    chi = char_from_spec(f)
    return EtaQuotientExpr(terms={(1, chi): Fraction(1)})


def _max_abs_q(e: EtaQuotientExpr, tau: complex) -> float:
    ts = [t for t, _ in e.terms] or [1]
    return math.exp(-2 * math.pi * min(ts) * tau.imag)


def estimate_multiplier(
    f,
    gamma: UnimodularMatrix,
    tau: complex | None = None,
    truncation: int = 500,
    max_abs_q: float = 0.85,
) -> complex:
    """Numeric nu with f(gamma tau) = nu f(tau) for a weight-0 quotient f.

    f is an EtaQuotientExpr or a character descriptor standing for eta_chi.
    Both sides are evaluated from the product form with `truncation` factors.
    """
    e = _as_expr(f)
    if _weight(e) != 0:
        raise ValueError("estimate_multiplier needs a weight-0 expression")
    if tau is None:
        tau = choose_tau(gamma)
    gtau = gamma.apply(tau)
    for point in (tau, gtau):
        if point.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        rq = _max_abs_q(e, point)
        if rq > max_abs_q:
            raise TailBoundError(f"|q| = {rq:.4f} exceeds {max_abs_q} at tau = {point}")
    diff = eval_quotient_log(e, gtau, truncation) - eval_quotient_log(e, tau, truncation)
    return cmath.exp(diff)
