import sys
import random
from fractions import Fraction

import pytest
from hypothesis import settings

from etaforge.exactfield import CycNum
from etaforge.qseries import QSeries

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ORDERS = (1, 3, 4, 5, 6, 8, 12, 20)


def random_cycnum(rng: random.Random, order: int | None = None, height: int = 9) -> CycNum:
    m = order if order is not None else rng.choice(ORDERS)
    pairs = [(rng.randrange(m), Fraction(rng.randint(-height, height), rng.randint(1, height))) for _ in range(3)]
    return CycNum.from_exponents(m, pairs)


def random_series(rng: random.Random, P: int, order: int | None = None, unit: bool = False) -> QSeries:
    m = order if order is not None else rng.choice(ORDERS)
    coeffs = [random_cycnum(rng, m) for _ in range(P)]
    if unit and coeffs[0].is_zero():
        coeffs[0] = CycNum.from_rational(1)
    r = Fraction(rng.randint(-5, 5), rng.choice([1, 2, 3, 24]))
    return QSeries(coeffs, r, zeta_order=m)


@pytest.fixture
def rng():
    return random.Random(20261019)


def random_quotient(rng: random.Random, N: int, height: int = 3):
    """A random integer-exponent quotient over the level-N basis labels, with its weight."""
    from etaforge.decompose import basis_labels
    from etaforge.eta import EtaQuotientExpr

    terms = {}
    for t, chi in basis_labels(N):
        a = rng.randint(-height, height)
        if a:
            terms[(t, chi)] = a
    classical = sum(a for (t, chi), a in terms.items() if chi.modulus == 1)
    if classical % 2:
        terms[(1, chi_one())] = terms.get((1, chi_one()), 0) + 1
        classical += 1
    c = random_cycnum(rng, rng.choice((1, 4)))
    if c.is_zero():
        c = CycNum.from_rational(1)
    return EtaQuotientExpr(terms=terms, constant=c, level=N), classical // 2


def chi_one():
    from etaforge.characters import principal

    return principal(1)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
