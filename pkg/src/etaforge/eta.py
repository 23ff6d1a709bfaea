"""The Dedekind eta function, its character-twisted generalizations eta_chi,
and (generalized) eta-quotients  c * prod (eta_chi | V_t)^a_{t,chi}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .arith import divisors, lcm, moebius
from .characters import DirChar, char_from_spec, eta_chi_level, primitive_core, principal
from .exactfield import ZERO, CycNum, as_rational, cyc_field, to_fraction
from .qseries import QSeries, q_log_derivative, series_exp, series_int_pow, v_operator

__all__ = [
    "EtaQuotientExpr",
    "eta_series",
    "eta_chi_series",
    "eta_chi_log_derivative",
    "eta_chi_moebius_expand",
    "expand_quotient",
    "quotient_log_derivative",
    "term_level",
]

ONE_1 = principal(1)

_series_cache: dict[str, QSeries] = {}
_logder_cache: dict[str, QSeries] = {}


def _cached(cache, key, P, build):
    hit = cache.get(key)
    if hit is not None and hit.precision >= P:
        return hit if hit.precision == P else hit.truncate(P)
    s = build(P)
    cache[key] = s
    return s


def eta_series(precision: int) -> QSeries:
    """q^(1/24) prod_{n >= 1} (1 - q^n), known through `precision` coefficients."""
    if precision < 1:
        raise ValueError("precision must be at least 1")

    def build(P):
        c = [0] * P
        c[0] = 1
        for n in range(1, P):
            # multiply in place by (1 - q^n), high indices first
            for k in range(P - 1, n - 1, -1):
                c[k] -= c[k - n]
        return QSeries._raw(1, mpq(1, 24), [(mpq(x),) for x in c])

    return _cached(_series_cache, "one:1", precision, build)


def _eta_chi_log(chi: DirChar, P: int) -> QSeries:
    """sum_n sum_a conj(chi_0(a) chi(n)) log(1 - zeta_u^a q^n), a over units mod u."""
    core = primitive_core(chi).core
    u = core.modulus
    r = chi.order
    M = lcm(u, r)
    F = cyc_field(M)
    su, sr = M // u, M // r
    units = [a for a in range(1, u) if core.exponent(a) is not None]
    buckets = [[] for _ in range(P)]
    for n in range(1, P):
        en = chi.exponent(n)
        if en is None:
            continue
        for a in units:
            base = -(core.exponent(a) + en) * sr
            # log(1 - x) = -sum_k x^k / k with x = zeta_u^a q^n
            for k in range(1, (P - 1) // n + 1):
                buckets[n * k].append((base + a * k * su, mpq(-1, k)))
    rows = [F.reduce_exponents(b) if b else F.zero for b in buckets]
    return QSeries._raw(M, ZERO, rows)


def eta_chi_series(chi, precision: int) -> QSeries:
    """Generalized eta function eta_chi as a q-series.

    1_1 gives the Dedekind eta function.  A non-principal chi is expanded
    from its product as exp of the character-weighted log sum; for an
    imprimitive chi the twist on the root of unity uses the primitive core,
    which is the reading under which the Moebius factorization holds.
    Principal characters of modulus N > 1 are defined through that
    factorization, prod_{t | N} (eta | V_t)^mu(t).
    """
    chi = char_from_spec(chi)
    if precision < 1:
        raise ValueError("precision must be at least 1")
    if chi.is_principal:
        if chi.modulus == 1:
            return eta_series(precision)
        return _cached(
            _series_cache,
            chi.descriptor,
            precision,
            lambda P: expand_quotient(eta_chi_moebius_expand(chi), P),
        )
    return _cached(
        _series_cache, chi.descriptor, precision, lambda P: series_exp(_eta_chi_log(chi, P))
    )


def eta_chi_log_derivative(chi, precision: int) -> QSeries:
    """theta(eta_chi)/eta_chi computed from the expanded product series."""
    chi = char_from_spec(chi)
    return _cached(
        _logder_cache,
        chi.descriptor,
        precision,
        lambda P: q_log_derivative(eta_chi_series(chi, P)),
    )


def term_level(t: int, chi: DirChar) -> int:
    """Smallest level a factor (eta_chi | V_t) belongs to: t * u^2 for primitive chi."""
    if chi.modulus == 1:
        return t
    if chi.is_primitive:
        return t * chi.modulus * chi.modulus
    return t * eta_chi_level(chi)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass
class EtaQuotientExpr:
    """constant * prod over (t, chi) of (eta_chi | V_t)^exponent."""

    terms: dict = field(default_factory=dict)
    constant: CycNum = field(default_factory=lambda: CycNum.from_rational(1))
    level: int | None = None

    def __post_init__(self):
        clean = {}
        for (t, chi), a in self.terms.items():
            chi = char_from_spec(chi)
            a = to_fraction(a) if not isinstance(a, Fraction) else a
            if int(t) < 1:
                raise ValueError(f"V_t needs t >= 1, got {t}")
            if a:
                key = (int(t), chi)
                clean[key] = clean.get(key, Fraction(0)) + a
        self.terms = {k: v for k, v in clean.items() if v}
        self.constant = CycNum._coerce(self.constant)
        if self.constant is None or self.constant.is_zero():
            raise ValueError("quotient constant must be a nonzero exact number")
        need = 1
        for t, chi in self.terms:
            need = lcm(need, term_level(t, chi))
        if self.level is None:
            self.level = need
        elif self.level % need:
            raise ValueError(f"terms need level divisible by {need}, declared {self.level}")

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.terms.values())

    def exponent(self, t: int, chi) -> Fraction:
        return self.terms.get((t, char_from_spec(chi)), Fraction(0))

    def sorted_terms(self):
        return sorted(
            self.terms.items(), key=lambda kv: (kv[0][1].modulus, kv[0][1].descriptor, kv[0][0])
        )

    def leading_exponent(self) -> Fraction:
        total = Fraction(0)
        for (t, chi), a in self.terms.items():
            r = eta_chi_series(chi, 1).leading_exponent
            total += to_fraction(r) * t * a
        return total

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "constant": self.constant.to_json(),
            "terms": [
                {"t": t, "char": chi.descriptor, "exp": f"{a.numerator}/{a.denominator}"}
                for (t, chi), a in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "EtaQuotientExpr":
        const = obj.get("constant", {"zeta_order": 1, "coeffs": ["1/1"]})
        if isinstance(const, dict):
            const = CycNum.from_json(const)
        terms = {}
        for item in obj.get("terms", []):
            key = (int(item["t"]), char_from_spec(item["char"]))
            terms[key] = terms.get(key, Fraction(0)) + to_fraction(as_rational(str(item["exp"])))
        return cls(terms=terms, constant=const, level=obj.get("level"))

    def __str__(self):
        parts = []
        for (t, chi), a in self.sorted_terms():
            name = "eta" if chi.modulus == 1 else f"eta[{chi.descriptor}]"
            parts.append(f"{name}({t}tau)^{a}" if t > 1 else f"{name}(tau)^{a}")
        c = str(self.constant)
        body = " * ".join(parts) if parts else "1"
        return body if c == "1" else f"({c}) * {body}"


def eta_chi_moebius_expand(chi) -> EtaQuotientExpr:
    """eta_chi = prod_{t | N} (eta_{chi_0} | V_t)^(chi_0(t) mu(t)) for real chi."""
    chi = char_from_spec(chi)
    if not chi.is_real:
        raise ValueError(
            f"{chi.descriptor} is not real; the Moebius factorization is only available for real characters"
        )
    dec = primitive_core(chi)
    core = dec.core
    terms = {}
    for t in divisors(dec.induced_modulus):
        mu = moebius(t)
        e = core.exponent(t)
        if mu == 0 or e is None:
            continue
        sign = 1 if e == 0 else -1
        terms[(t, core)] = Fraction(sign * mu)
    return EtaQuotientExpr(terms=terms, level=eta_chi_level(chi) if chi.modulus > 1 else 1)


def _factor_series(t: int, chi: DirChar, P: int) -> QSeries:
    base = eta_chi_series(chi, _ceil_div(P, t))
    return v_operator(base, t).truncate(P)


def expand_quotient(e: EtaQuotientExpr, precision: int) -> QSeries:
    """Exact q-expansion of an integer-exponent quotient through `precision` terms."""
    if not e.is_integral():
        raise ValueError("expand_quotient needs integer exponents")
    result = QSeries.constant(e.constant, precision)
    for (t, chi), a in e.sorted_terms():
        result = result * series_int_pow(_factor_series(t, chi, precision), int(a))
    return result


def quotient_log_derivative(e: EtaQuotientExpr, precision: int) -> QSeries:
    """sum a_{t,chi} t (theta eta_chi / eta_chi) | V_t; exponents may be rational."""
    M = 1
    for _, chi in e.terms:
        M = lcm(M, eta_chi_log_derivative(chi, 1).zeta_order)
    F = cyc_field(M)
    total = QSeries._raw(M, ZERO, [F.zero] * precision)
    for (t, chi), a in e.sorted_terms():
        ld = eta_chi_log_derivative(chi, _ceil_div(precision, t))
        piece = v_operator(ld, t).truncate(precision).scale(as_rational(a) * t)
        total = total + piece
    return total
