"""Verification batteries shared by the command line and the acceptance tests.

Each suite returns a SuiteReport whose checks carry observed value, expected
value and tolerance.  Exact checks use tolerance 0 and compare in Q(zeta).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources

from .analytic import UnimodularMatrix, eta_chi_order_numeric, estimate_multiplier
from .characters import char_from_spec, enumerate_primitive_chars, gauss_sum, principal
from .cusps import cusp_count, enumerate_cusps, eta_chi_cusp_order
from .decompose import basis_labels, basis_rank, sturm_bound, weight0_rank
from .eisenstein import e2_series
from .eta import eta_chi_log_derivative, eta_chi_moebius_expand, eta_chi_series, expand_quotient

__all__ = [
    "Check",
    "SuiteReport",
    "SUITES",
    "run_suite",
    "load_multiplier_fixture",
    "logderiv_suite",
    "induced_suite",
    "cusp_order_suite",
    "basis_suite",
    "multiplier_suite",
    "valence_suite",
]

LOGDERIV_CHARS = ("one:1", "kronecker:3", "psi4", "kronecker:5", "chi5:1")
INDUCED_CASES = (("kronecker:3", 6), ("kronecker:3", 12), ("kronecker:5", 10), ("psi4", 12))
CUSP_ORDER_CHARS = ("kronecker:3", "psi4", "kronecker:5")
BASIS_LEVELS = (9, 12, 16, 18, 25, 50)


@dataclass
class Check:
    name: str
    observed: object
    expected: object
    tolerance: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "observed": self.observed,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass
class SuiteReport:
    suite: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name, observed, expected, tolerance, passed):
        self.checks.append(Check(name, observed, expected, tolerance, bool(passed)))

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "checks": [c.to_json() for c in self.checks],
        }

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            out.append(f"  [{tag}] {c.name}: observed {c.observed}, expected {c.expected}, tol {c.tolerance}")
        out.append(f"{self.suite}: {'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks)")
        return out


def logderiv_suite(precision: int = 200, chars=LOGDERIV_CHARS) -> SuiteReport:
    """theta(eta_chi)/eta_chi = -(g(conj chi)/2) E_2^{chi, conj chi}, exactly."""
    rep = SuiteReport("lemma1")
    for spec in chars:
        chi = char_from_spec(spec)
        lhs = eta_chi_log_derivative(chi, precision)
        cc = chi.conj()
        rhs = e2_series(chi, cc, precision).series.scale(gauss_sum(cc) * (-1) / 2)
        diff = lhs.first_difference(rhs)
        rep.add(
            f"{chi.descriptor} through q^{precision - 1}",
            "equal" if diff is None else f"first difference at q^{diff}",
            "equal",
            0,
            diff is None,
        )
    return rep


def induced_suite(precision: int = 100, cases=INDUCED_CASES) -> SuiteReport:
    """eta_chi for an induced chi equals its Moebius product of primitive factors."""
    rep = SuiteReport("lemma2")
    for spec, N in cases:
        core = char_from_spec(spec)
        chi = core.induce(N)
        lhs = eta_chi_series(chi, precision)
        rhs = expand_quotient(eta_chi_moebius_expand(chi), precision)
        same = lhs.leading_exponent == rhs.leading_exponent and lhs.first_difference(rhs) is None
        rep.add(
            f"{core.descriptor} induced to {N}",
            "equal" if same else f"first difference at q^{lhs.first_difference(rhs)}",
            "equal",
            0,
            same,
        )
    return rep


def cusp_order_suite(chars=CUSP_ORDER_CHARS, tol: float = 1e-6) -> SuiteReport:
    """Numeric cusp orders from the G_2 triple sum against the exact closed form."""
    rep = SuiteReport("lemma3")
    for spec in chars:
        chi = char_from_spec(spec)
        N = chi.modulus ** 2
        for s in enumerate_cusps(N):
            exact = eta_chi_cusp_order(chi, s)
            num = eta_chi_order_numeric(chi, s)
            dev = abs(num - exact)
            rep.add(
                f"{chi.descriptor} at {s} on Gamma_0({N})",
                num,
                exact,
                tol,
                dev < tol and round(num) == exact,
            )
    return rep


def basis_suite(levels=BASIS_LEVELS) -> SuiteReport:
    """Basis size, weight-0 rank up to the Sturm bound, and full rank at solver precision."""
    rep = SuiteReport("basis")
    for N in levels:
        n = len(basis_labels(N))
        cusps = cusp_count(N)
        rows = sturm_bound(N) + 1
        rep.add(f"N={N}: basis size = #cusps", n, cusps, 0, n == cusps)
        w0 = weight0_rank(N, rows)
        rep.add(
            f"N={N}: weight-0 rank on q^0..q^{rows - 1} = #cusps - 1",
            w0,
            cusps - 1,
            0,
            w0 == cusps - 1,
        )
        full = basis_rank(N, sturm_bound(N) + 10)
        rep.add(f"N={N}: column rank at solver precision", full, n, 0, full == n)
    return rep


def load_multiplier_fixture() -> dict:
    text = resources.files("etaforge").joinpath("data/multiplier_generators.json").read_text()
    data = json.loads(text)
    out = {}
    for level, entry in data["levels"].items():
        out[int(level)] = (entry["char"], [UnimodularMatrix(*g) for g in entry["generators"]])
    return out


def multiplier_suite(tol: float = 1e-4, truncation: int = 500) -> SuiteReport:
    """|nu^12 - 1| on fixture generators of Gamma_0(9), Gamma_0(16), Gamma_0(25)."""
    rep = SuiteReport("multiplier")
    for N, (spec, gens) in sorted(load_multiplier_fixture().items()):
        worst = 0.0
        worst_g = None
        for g in gens:
            nu = estimate_multiplier(spec, g, truncation=truncation)
            dev = abs(nu ** 12 - 1)
            if dev >= worst:
                worst, worst_g = dev, g
        rep.add(
            f"eta[{spec}] on Gamma_0({N}), {len(gens)} generators (worst {worst_g})",
            worst,
            0.0,
            tol,
            worst < tol,
        )
    return rep


def valence_suite(max_conductor: int = 12) -> SuiteReport:
    """Integral cusp orders summing to zero for real primitive chi with u <= max_conductor."""
    rep = SuiteReport("valence")
    for u in range(3, max_conductor + 1):
        for chi in enumerate_primitive_chars(u):
            if not chi.is_real:
                continue
            try:
                orders = [eta_chi_cusp_order(chi, s) for s in enumerate_cusps(u * u)]
                integral = True
            except ArithmeticError:
                orders, integral = [], False
            rep.add(f"{chi.descriptor}: orders integral", integral, True, 0, integral)
            total = sum(orders)
            rep.add(f"{chi.descriptor}: sum over {len(orders)} cusps", total, 0, 0, integral and total == 0)
    return rep


SUITES = {
    "lemma1": logderiv_suite,
    "lemma2": induced_suite,
    "lemma3": cusp_order_suite,
    "basis": basis_suite,
    "multiplier": multiplier_suite,
    "valence": valence_suite,
}


def run_suite(name: str) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    t0 = time.perf_counter()
    rep = SUITES[name]()
    rep.seconds = time.perf_counter() - t0
    return rep
