"""The nine acceptance criteria, at their stated tolerances.

Each criterion is a function returning (passed, detail).  The tests record a
PASS/FAIL line per criterion, printed in the pytest terminal summary and by
running this file directly.
"""

import json
import random
import sys
import time

import pytest

from etaforge.characters import char_from_spec, principal
from etaforge.cusps import cusp_count, enumerate_cusps, eta_chi_cusp_order
from etaforge.analytic import eta_chi_order_numeric
from etaforge.decompose import (
    DecompositionProblem,
    basis_labels,
    basis_rank,
    decompose,
    sturm_bound,
    weight0_rank,
)
from etaforge.eta import eta_chi_series, expand_quotient
from etaforge.exactfield import CycNum
from etaforge.qseries import QSeries, q_log_derivative, series_int_pow, theta_op, v_operator
from etaforge.verify import logderiv_suite, induced_suite, multiplier_suite, valence_suite

sys.path.insert(0, __file__.rsplit("/", 1)[0])
from conftest import random_cycnum, random_quotient, random_series  # noqa: E402

RESULTS = {}


def record(n, passed, detail, seconds):
    RESULTS[n] = f"criterion {n}: {'PASS' if passed else 'FAIL'} ({seconds:.1f} s) {detail}"
    print(RESULTS[n])


def _suite_detail(rep):
    bad = [c.name for c in rep.checks if not c.passed]
    return f"{len(rep.checks)} checks" + (f", failing: {bad}" if bad else "")


def criterion_1():
    rep = logderiv_suite(precision=200)
    return rep.passed, _suite_detail(rep)


def criterion_2():
    rep = induced_suite(precision=100)
    return rep.passed, _suite_detail(rep)


EXPECTED_NONZERO = {3: 3, 4: 8, 5: 25}


def criterion_3():
    worst, n, ok = 0.0, 0, True
    for spec in ("kronecker:3", "psi4", "kronecker:5"):
        chi = char_from_spec(spec)
        u = chi.modulus
        for s in enumerate_cusps(u * u):
            exact = eta_chi_cusp_order(chi, s)
            num = eta_chi_order_numeric(chi, s)
            dev = abs(num - exact)
            worst = max(worst, dev)
            n += 1
            at_k_over_u = s.c == u
            want = {EXPECTED_NONZERO[u], -EXPECTED_NONZERO[u]} if at_k_over_u else {0}
            ok &= dev < 1e-6 and round(num) == exact and exact in want
    return ok, f"{n} cusps, max deviation {worst:.2e}"


def criterion_4():
    rep = valence_suite(max_conductor=12)
    return rep.passed, _suite_detail(rep)


def criterion_5():
    one = principal(1)
    k3 = char_from_spec("kronecker:3")
    P = sturm_bound(9) + 10
    f = series_int_pow(eta_chi_series(k3, P), 12)
    classical = decompose(DecompositionProblem(9, f), labels=[(t, one) for t in (1, 3, 9)])
    full = decompose(DecompositionProblem(9, f))
    idx = classical.first_residual_index
    ok = (
        not classical.certified
        and idx is not None
        and idx <= sturm_bound(9)
        and full.certified
        and full.exponents == {(1, k3): 12}
    )
    return ok, f"classical-only residual from q^{idx} (sturm bound {sturm_bound(9)}); full basis certified: {full.certified}"


def criterion_6():
    rep = multiplier_suite(tol=1e-4, truncation=500)
    worst = max(c.observed for c in rep.checks)
    return rep.passed, f"{_suite_detail(rep)}, worst |nu^12 - 1| = {worst:.2e}"


ROUND_TRIP_LEVELS = (6, 8, 12, 24, 9, 18, 16, 25, 50)


def criterion_7(per_level=100):
    bad = []
    for N in ROUND_TRIP_LEVELS:
        rng = random.Random(1000 + N)
        P = sturm_bound(N) + 10
        for _ in range(per_level):
            e, k = random_quotient(rng, N)
            res = decompose(DecompositionProblem(N, expand_quotient(e, P), weight=k))
            if not (res.certified and res.residual_zero and res.exponents == e.terms and res.expr.constant == e.constant):
                bad.append(N)
    return not bad, f"{per_level * len(ROUND_TRIP_LEVELS)} round trips" + (f", failures at {sorted(set(bad))}" if bad else "")


BASIS_LEVELS = (9, 12, 16, 18, 25, 50)


def criterion_8_literal():
    """Full column rank on rows q^0..q^sturm, read literally."""
    short = {}
    for N in BASIS_LEVELS:
        r = basis_rank(N, sturm_bound(N) + 1)
        if r != len(basis_labels(N)):
            short[N] = (r, len(basis_labels(N)))
    detail = "rank/columns on q^0..q^sturm: " + ", ".join(f"N={N}: {r}/{n}" for N, (r, n) in short.items())
    return not short, detail if short else "full rank at every level"


def criterion_8_bookkeeping():
    """Basis size = #cusps, weight-0 rank #cusps - 1 to the Sturm bound, full rank at solver precision."""
    ok = True
    for N in BASIS_LEVELS:
        n = len(basis_labels(N))
        ok &= n == cusp_count(N)
        ok &= weight0_rank(N, sturm_bound(N) + 1) == cusp_count(N) - 1
        ok &= basis_rank(N, sturm_bound(N) + 10) == n
    return ok, "size = #cusps, weight-0 rank = #cusps - 1, full rank at sturm + 10"


def criterion_9():
    rng = random.Random(99)
    for _ in range(1000):
        x = random_cycnum(rng)
        if CycNum.from_json(json.loads(json.dumps(x.to_json()))) != x:
            return False, "CycNum round trip"
        s = random_series(rng, rng.randint(0, 6))
        if QSeries.from_json(json.loads(json.dumps(s.to_json()))) != s:
            return False, "QSeries round trip"
    for _ in range(40):
        m = rng.choice((1, 3, 4, 5, 12))
        a = random_series(rng, 20, m, unit=True)
        b = random_series(rng, 20, m, unit=True)
        b = QSeries._raw(b.zeta_order, a.leading_exponent, b._c)
        t = rng.randint(2, 4)
        if theta_op(a * b) != theta_op(a) * b + a * theta_op(b):
            return False, "theta derivation law"
        if q_log_derivative(a * b) != q_log_derivative(a) + q_log_derivative(b):
            return False, "log-derivative additivity"
        if v_operator(a * b, t) != v_operator(a, t) * v_operator(b, t) or v_operator(a + b, t) != v_operator(a, t) + v_operator(b, t):
            return False, "V_t homomorphism"
    return True, "1000 CycNum + 1000 QSeries JSON round trips, 40 random law checks"


def _run(n, fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    record(n, passed, detail, time.perf_counter() - t0)
    return passed, detail


@pytest.mark.parametrize(
    "n,fn",
    [(1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4), (5, criterion_5),
     (6, criterion_6), (7, criterion_7), (9, criterion_9)],
    ids=lambda v: str(v) if isinstance(v, int) else "",
)
def test_criterion(n, fn):
    passed, detail = _run(n, fn)
    assert passed, detail


@pytest.mark.xfail(
    strict=True,
    reason="rank over q^0..q^sturm is #cusps - 1 at N = 12, 16, 18, 50: B_{N,1_1} only separates from "
    "the constant row at q^N > sturm bound (see the decisions ledger)",
)
def test_criterion_8_literal_full_rank():
    passed, detail = criterion_8_literal()
    t0 = time.perf_counter()
    ok_b, detail_b = criterion_8_bookkeeping()
    record(8, passed and ok_b, f"literal full rank: {'yes' if passed else 'no'}, {detail}; bookkeeping: "
           f"{'PASS' if ok_b else 'FAIL'} ({detail_b})", time.perf_counter() - t0)
    assert passed, detail


def test_criterion_8_bookkeeping():
    ok, detail = criterion_8_bookkeeping()
    assert ok, detail


if __name__ == "__main__":
    t0 = time.perf_counter()
    for n, fn in [(1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4), (5, criterion_5),
                  (6, criterion_6), (7, criterion_7)]:
        _run(n, fn)
    p8, d8 = criterion_8_literal()
    b8, db8 = criterion_8_bookkeeping()
    record(8, p8 and b8, f"literal full rank: {'yes' if p8 else 'no'}, {d8}; bookkeeping: {'PASS' if b8 else 'FAIL'}", 0.0)
    _run(9, criterion_9)
    print(f"total {time.perf_counter() - t0:.1f} s")
