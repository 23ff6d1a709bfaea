import json
import math
from fractions import Fraction

import pytest

from etaforge.characters import char_from_spec, gauss_sum, principal
from etaforge.eisenstein import e2_series
from etaforge.eta import (
    EtaQuotientExpr,
    eta_chi_log_derivative,
    eta_chi_moebius_expand,
    eta_chi_series,
    eta_series,
    expand_quotient,
    quotient_log_derivative,
)
from etaforge.exactfield import CycNum
from etaforge.qseries import QSeries, q_log_derivative, series_div, series_mul, v_operator

z = CycNum.zeta
one = principal(1)
k3 = char_from_spec("kronecker:3")
psi = char_from_spec("psi4")
k5 = char_from_spec("kronecker:5")

RAMANUJAN_TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def test_pentagonal_numbers():
    P = 60
    e = eta_series(P)
    assert e.leading_exponent == Fraction(1, 24)
    pent = {}
    for k in range(-10, 11):
        pent[k * (3 * k - 1) // 2] = 1 if k % 2 == 0 else -1
    for n in range(P):
        assert e[n] == pent.get(n, 0)


def test_eta_log_derivative_constant():
    assert q_log_derivative(eta_series(10))[0] == Fraction(1, 24)


def test_delta_is_ramanujan_tau():
    d = expand_quotient(EtaQuotientExpr({(1, one): 24}), 10)
    assert d.leading_exponent == 1
    assert [d[n] for n in range(10)] == RAMANUJAN_TAU


def test_eta_chi_first_coefficients():
    s = eta_chi_series(k3, 10)
    assert s.leading_exponent == 0
    assert s[0] == 1
    assert s[1] == -z(3) + z(3, 2)
    for spec in ("psi4", "kronecker:5", "chi5:1", "chi5:2", "kronecker:7"):
        assert eta_chi_series(char_from_spec(spec), 5)[0] == 1


def _golden_product(P, middle=-1):
    """prod ((1 + m a q^n + q^2n) / (1 + m b q^n + q^2n))^chi(n), a, b = (1 -+ sqrt 5)/2."""
    r5 = math.sqrt(5)
    a, b = -middle * (1 - r5) / 2, -middle * (1 + r5) / 2
    log = [0.0] * P
    # log of (1 - x q^n + q^2n) via its two roots on the unit circle
    for n in range(1, P):
        e = k5.exponent(n)
        if e is None:
            continue
        sign = 1 if e == 0 else -1
        for x, s in ((a, sign), (b, -sign)):
            rts = [complex(x / 2, math.sqrt(1 - x * x / 4)), complex(x / 2, -math.sqrt(1 - x * x / 4))]
            for w in rts:
                k = 1
                while n * k < P:
                    log[n * k] -= s * (w ** k).real / k
                    k += 1
    out = [1.0] + [0.0] * (P - 1)
    # exp of a power series: n c_n = sum k l_k c_{n-k}
    for n in range(1, P):
        out[n] = sum(k * log[k] * out[n - k] for k in range(1, n + 1)) / n
    return out


def _close(series, want):
    got = series.complex_coeffs()
    for n, w in enumerate(want):
        assert abs(got[n].imag) < 1e-10
        assert abs(got[n].real - w) < 1e-10 * max(1.0, abs(w))


def test_golden_ratio_form_for_kronecker_5():
    P = 30
    # with + in the middle terms the product is eta_chi itself
    _close(eta_chi_series(k5, P), _golden_product(P, middle=+1))


def test_golden_ratio_form_with_minus_signs():
    # the same product with - in the middle terms is 1/(eta_chi(tau) eta_chi(2 tau))
    P = 30
    e = eta_chi_series(k5, P)
    inv = series_div(QSeries.one(P), e * v_operator(e, 2).truncate(P))
    _close(inv, _golden_product(P, middle=-1))


def test_real_character_coefficients():
    # even real chi: real coefficients
    for c in eta_chi_series(k5, 40).complex_coeffs():
        assert abs(c.imag) < 1e-12 * max(1.0, abs(c))
    # odd real chi: complex conjugation inverts the series
    for spec in ("kronecker:3", "psi4", "kronecker:7"):
        s = eta_chi_series(char_from_spec(spec), 40)
        conj = QSeries([x.conj() for x in s.coefficients()], 0, zeta_order=s.zeta_order)
        assert series_mul(conj, s) == QSeries.one(40)


@pytest.mark.parametrize("spec", ["one:1", "kronecker:3", "psi4", "kronecker:5", "chi5:1"])
def test_log_derivative_is_eisenstein(spec):
    chi = char_from_spec(spec)
    P = 200
    cc = chi.conj()
    rhs = e2_series(chi, cc, P).series.scale(gauss_sum(cc) * Fraction(-1, 2))
    assert eta_chi_log_derivative(chi, P) == rhs
    assert q_log_derivative(eta_chi_series(chi, 60)) == rhs.truncate(60)


@pytest.mark.parametrize(
    "spec,N", [("kronecker:3", 6), ("kronecker:3", 12), ("kronecker:3", 15), ("kronecker:5", 15),
               ("psi4", 12), ("psi4", 20), ("kronecker:5", 20), ("one:1", 6)]
)
def test_induced_character_matches_moebius_product(spec, N):
    chi = char_from_spec(spec).induce(N)
    lhs = eta_chi_series(chi, 100)
    rhs = expand_quotient(eta_chi_moebius_expand(chi), 100)
    assert lhs.leading_exponent == rhs.leading_exponent
    assert lhs == rhs


def test_moebius_expand_examples():
    assert eta_chi_moebius_expand(k3).terms == {(1, k3): 1}
    assert eta_chi_moebius_expand(k3.induce(6)).terms == {(1, k3): 1, (2, k3): 1}
    assert eta_chi_moebius_expand(principal(6)).terms == {(1, one): 1, (2, one): -1, (3, one): -1, (6, one): 1}
    with pytest.raises(ValueError):
        eta_chi_moebius_expand(char_from_spec("chi5:1"))


def test_delta_quotient():
    e = EtaQuotientExpr({(2, one): 24, (1, one): -24})
    s = expand_quotient(e, 5)
    assert s.leading_exponent == 1
    assert s[0] == 1 and s[1] == 24
    assert e.leading_exponent() == 1


def test_empty_quotient_is_constant():
    c = z(5) + 2
    assert expand_quotient(EtaQuotientExpr({}, constant=c), 4) == QSeries.constant(c, 4)


def test_expand_refuses_fractional_exponents():
    with pytest.raises(ValueError):
        expand_quotient(EtaQuotientExpr({(1, one): Fraction(1, 2)}), 5)


def test_quotient_log_derivative_examples():
    d = quotient_log_derivative(EtaQuotientExpr({(1, one): 24}), 4)
    assert [d[n] for n in range(4)] == [1, -24, -72, -96]
    s = quotient_log_derivative(EtaQuotientExpr({(1, k3): 1}), 4)
    i_sqrt3 = z(3) - z(3, 2)
    assert [s[n] for n in range(4)] == [0, -i_sqrt3, 3 * i_sqrt3, 0]
    a = EtaQuotientExpr({(1, one): Fraction(3, 2), (2, k3): 1})
    b = EtaQuotientExpr({(3, one): -5})
    both = EtaQuotientExpr({(1, one): Fraction(3, 2), (2, k3): 1, (3, one): -5})
    assert quotient_log_derivative(both, 30) == quotient_log_derivative(a, 30) + quotient_log_derivative(b, 30)


def test_level_check():
    with pytest.raises(ValueError):
        EtaQuotientExpr({(2, k3): 1}, level=9)
    assert EtaQuotientExpr({(2, k3): 1}).level == 18
    with pytest.raises(ValueError):
        EtaQuotientExpr({(1, one): 1}, constant=0)


def test_quotient_json_roundtrip():
    e = EtaQuotientExpr({(1, one): -24, (2, one): 24, (1, psi): Fraction(-3, 2)}, constant=z(4) - 3, level=32)
    back = EtaQuotientExpr.from_json(json.loads(json.dumps(e.to_json())))
    assert back.terms == e.terms and back.constant == e.constant and back.level == 32
