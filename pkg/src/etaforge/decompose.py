"""Recover (generalized) eta-quotient exponents from a q-expansion.

The q-logarithmic derivative turns a quotient prod (eta_chi | V_t)^a into the
linear combination sum a_{t,chi} B_{t,chi} with B_{t,chi} = t (theta eta_chi /
eta_chi) | V_t, so exponents come out of an exact linear solve.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import divisors, factorint, gamma0_index, is_squarefree, lcm
from .characters import DirChar, enumerate_primitive_chars, principal
from .exactfield import CycNum, cyc_field, to_fraction
from .eta import EtaQuotientExpr, eta_chi_log_derivative, eta_series, expand_quotient
from .qseries import QSeries, q_log_derivative, series_int_pow, v_operator

__all__ = [
    "LevelClass",
    "PreconditionError",
    "supported_level",
    "sturm_bound",
    "basis_labels",
    "build_basis",
    "basis_rank",
    "weight0_rank",
    "DecompositionProblem",
    "DecompositionResult",
    "decompose",
    "verify_quotient",
]

ONE_1 = principal(1)
SOLVE_MARGIN = 10


class PreconditionError(ValueError):
    """Input violates a precondition of the solver (precision, leading coefficient)."""


class LevelClass(enum.Enum):
    SquareFree = "SquareFree"
    Thm3 = "Thm3"
    Thm4_3 = "Thm4_3"
    Thm4_4 = "Thm4_4"
    Thm4_5 = "Thm4_5"
    Unsupported = "Unsupported"

    @property
    def guaranteed(self) -> bool:
        """Whether every cuspidal-divisor function at such a level is a quotient."""
        return self is not LevelClass.Unsupported


def _shape(N: int, p: int, exps: tuple[int, ...], odd_part_needs: int) -> bool:
    e = dict(factorint(N)).get(p, 0)
    if e not in exps:
        return False
    M = N // p**e
    return is_squarefree(M) and M % odd_part_needs != 0


def supported_level(N: int) -> LevelClass:
    if N < 1:
        raise ValueError("level must be positive")
    if is_squarefree(N):
        return LevelClass.SquareFree
    if _shape(N, 2, (2, 3), 2):
        return LevelClass.Thm3
    if _shape(N, 3, (2, 3), 3):
        return LevelClass.Thm4_3
    if _shape(N, 2, (4, 5), 2):
        return LevelClass.Thm4_4
    if _shape(N, 5, (2, 3), 5):
        return LevelClass.Thm4_5
    return LevelClass.Unsupported


def sturm_bound(N: int) -> int:
    """ceil(2 [SL_2(Z) : Gamma_0(N)] / 12) + 1."""
    return math.ceil(gamma0_index(N) * Fraction(2, 12)) + 1


def basis_labels(N: int) -> list[tuple[int, DirChar]]:
    """(t, chi) with chi primitive of conductor u (1_1 when u = 1) and t u^2 | N."""
    labels = [(t, ONE_1) for t in divisors(N)]
    for u in divisors(N):
        if u < 3 or N % (u * u):
            continue
        for chi in enumerate_primitive_chars(u):
            for t in divisors(N // (u * u)):
                labels.append((t, chi))
    return labels


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _basis_series(t: int, chi: DirChar, P: int) -> QSeries:
    ld = eta_chi_log_derivative(chi, _ceil_div(P, t))
    return v_operator(ld, t).truncate(P).scale(t)


def build_basis(N: int, precision: int, labels=None) -> list[tuple[tuple[int, DirChar], QSeries]]:
    """The series B_{t,chi} for every basis label at level N."""
    if precision < sturm_bound(N) + SOLVE_MARGIN:
        raise PreconditionError(
            f"precision {precision} is below sturm_bound({N}) + {SOLVE_MARGIN} = {sturm_bound(N) + SOLVE_MARGIN}"
        )
    labels = basis_labels(N) if labels is None else list(labels)
    return [((t, chi), _basis_series(t, chi, precision)) for t, chi in labels]


# ------------------------------------------------------------ linear algebra


def _field_order(series) -> int:
    m = 1
    for s in series:
        m = lcm(m, s.zeta_order)
    return m


class _Solver:
    """Pivot rows and the inverse of the pivot block for one basis.

    Row -1 is the weight-0 constraint: the exponents on classical eta
    factors sum to zero.  Only on that subspace are the combinations
    modular, which is what makes rows up to the Sturm bound sufficient.
    """

    def __init__(self, labels, columns: list[QSeries], weight_row: bool = True):
        self.labels = labels
        self.m = _field_order(columns)
        self.columns = [c.embed(self.m) for c in columns]
        self.P = min(c.precision for c in self.columns)
        n = len(columns)
        K = cyc_field(self.m)
        self.K = K
        self.weight_row = weight_row
        # greedy row selection in q-order, tracked with an echelon basis
        echelon: list[tuple[int, list]] = []  # (pivot column, reduced row)
        pivots = []
        order = ([-1] if weight_row else []) + list(range(self.P))
        for i in order:
            row = self._row(i)
            for pc, er in echelon:
                if any(row[pc]):
                    f = K.mul(row[pc], K.inv(er[pc]))
                    row = [_sub(K, a, K.mul(f, b)) for a, b in zip(row, er)]
            lead = next((j for j in range(n) if any(row[j])), None)
            if lead is None:
                continue
            echelon.append((lead, row))
            pivots.append(i)
            if len(pivots) == n:
                break
        self.pivots = pivots
        self.rank = len(pivots)
        # columns that received a pivot; others are free and set to zero
        self.bound = sorted(pc for pc, _ in echelon)
        A = [[self._row(i)[j] for j in self.bound] for i in pivots]
        self.inverse = _invert(K, A)

    def _row(self, i: int) -> list:
        K = self.K
        if i < 0:
            return [K.one if chi.modulus == 1 else K.zero for _, chi in self.labels]
        return [col._c[i] for col in self.columns]

    @property
    def series_pivots(self) -> list[int]:
        return [i for i in self.pivots if i >= 0]

    def solve(self, rhs: QSeries) -> list:
        rhs = rhs.embed(lcm(self.m, rhs.zeta_order))
        K = cyc_field(rhs.zeta_order)
        inv = [[self.K.embed(x, K.m) if K.m != self.K.m else x for x in row] for row in self.inverse]
        b = [K.zero if i < 0 else rhs._c[i] for i in self.pivots]
        x_bound = []
        for row in inv:
            acc = K.zero
            for a, bb in zip(row, b):
                if any(a) and any(bb):
                    acc = _add(K, acc, K.mul(a, bb))
            x_bound.append(acc)
        x = [K.zero] * len(self.columns)
        for j, v in zip(self.bound, x_bound):
            x[j] = v
        return [CycNum._make(K.m, v) for v in x]


def _add(K, a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(K, a, b):
    return tuple(x - y for x, y in zip(a, b))


def _invert(K, A):
    n = len(A)
    M = [list(row) + [K.one if i == j else K.zero for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next(r for r in range(col, n) if any(M[r][col]))
        M[col], M[piv] = M[piv], M[col]
        f = K.inv(M[col][col])
        M[col] = [K.mul(f, x) if any(x) else x for x in M[col]]
        for r in range(n):
            if r != col and any(M[r][col]):
                g = M[r][col]
                M[r] = [_sub(K, x, K.mul(g, y)) if any(y) else x for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


_solver_cache: dict = {}


def _solver(N: int, P: int, labels) -> _Solver:
    key = (N, P, tuple((t, chi.descriptor) for t, chi in labels))
    s = _solver_cache.get(key)
    if s is None:
        basis = build_basis(N, P, labels)
        s = _Solver([lab for lab, _ in basis], [ser for _, ser in basis])
        _solver_cache[key] = s
    return s


def basis_rank(N: int, rows: int | None = None, weight_row: bool = False) -> int:
    """Rank of the B_{t,chi} coefficient matrix over rows q^0 .. q^(rows-1).

    With weight_row the weight-0 constraint row is added, so the result is
    1 + the rank of the modular (weight-0) combinations on those rows.
    """
    rows = sturm_bound(N) + 1 if rows is None else rows
    P = max(rows, sturm_bound(N) + SOLVE_MARGIN)
    basis = build_basis(N, P)
    cols = [ser.truncate(rows) for _, ser in basis]
    return _Solver([lab for lab, _ in basis], cols, weight_row).rank


def weight0_rank(N: int, rows: int | None = None) -> int:
    """Dimension of the weight-0 combinations of the basis seen on rows q^0 .. q^(rows-1)."""
    return basis_rank(N, rows, weight_row=True) - 1


# ------------------------------------------------------------ problem/result


@dataclass
class DecompositionProblem:
    level: int
    input_series: QSeries
    weight: int = 0
    precision: int | None = None

    def __post_init__(self):
        if self.precision is None:
            self.precision = self.input_series.precision
        if self.precision > self.input_series.precision:
            raise PreconditionError(
                f"precision {self.precision} exceeds the {self.input_series.precision} known coefficients"
            )
        need = sturm_bound(self.level) + SOLVE_MARGIN
        if self.precision < need:
            raise PreconditionError(f"precision {self.precision} is below {need} needed at level {self.level}")
        if not self.input_series.precision or not any(self.input_series._c[0]):
            raise PreconditionError("input series must start with a nonzero coefficient")


@dataclass
class DecompositionResult:
    expr: EtaQuotientExpr | None
    exponents: dict
    residual: QSeries
    certified: bool
    level_class: LevelClass
    weight0_exponents: dict = field(default_factory=dict)
    pivot_rows: list = field(default_factory=list)
    rank: int = 0
    basis_size: int = 0
    power: int = 1
    notes: list = field(default_factory=list)

    @property
    def residual_zero(self) -> bool:
        return self.residual.is_zero()

    @property
    def first_residual_index(self) -> int | None:
        return self.residual.valuation()

    def to_json(self) -> dict:
        def fmt(ex):
            return [
                {"t": t, "char": chi.descriptor, "exp": _exp_str(a)}
                for (t, chi), a in sorted(ex.items(), key=lambda kv: (kv[0][1].modulus, kv[0][1].descriptor, kv[0][0]))
            ]

        return {
            "certified": self.certified,
            "level_class": self.level_class.value,
            "expr": None if self.expr is None else self.expr.to_json(),
            "exponents": fmt(self.exponents),
            "weight0_exponents": fmt(self.weight0_exponents),
            "power": self.power,
            "rank": self.rank,
            "basis_size": self.basis_size,
            "pivot_rows": self.pivot_rows,
            "residual_zero": self.residual_zero,
            "first_residual_index": self.first_residual_index,
            "residual": self.residual.to_json(),
            "notes": self.notes,
        }


def _exp_str(a) -> str:
    if isinstance(a, CycNum):
        if a.is_rational():
            a = to_fraction(a.to_rational())
        else:
            return str(a)
    return f"{a.numerator}/{a.denominator}"


def _lead(s: QSeries) -> CycNum:
    return s[0]


def decompose(problem: DecompositionProblem, labels=None) -> DecompositionResult:
    """Solve theta(f)/f = sum x_{t,chi} B_{t,chi} exactly and certify the answer.

    For weight k the solve runs on f^12 / Delta^k; exponents of f are
    (b + 24 k [t = 1, chi = 1_1]) / 12.  `labels` restricts the basis.
    """
    N, P, k = problem.level, problem.precision, problem.weight
    f = problem.input_series.truncate(P)
    labels = basis_labels(N) if labels is None else list(labels)
    solver = _solver(N, P, labels)
    L = q_log_derivative(f)
    notes = []
    if k:
        # theta(Delta)/Delta = 24 B_{1,1_1}
        eta_ld = _basis_series(1, ONE_1, P)
        L0 = L.scale(12) - eta_ld.scale(24 * k)
    else:
        L0 = L
    x0 = solver.solve(L0)
    fit = None
    for lab, col, xj in zip(solver.labels, solver.columns, x0):
        if xj:
            piece = col.scale(xj)
            fit = piece if fit is None else fit + piece
    residual = L0 - fit if fit is not None else L0
    if solver.rank < len(labels):
        notes.append(f"basis rank {solver.rank} < {len(labels)}; free exponents set to 0")

    weight0 = {}
    exps = {}
    rational = True
    for (t, chi), b in zip(solver.labels, x0):
        if b.is_zero():
            continue
        if not b.is_rational():
            rational = False
            weight0[(t, chi)] = b
            continue
        weight0[(t, chi)] = to_fraction(b.to_rational())
    if k:
        for key, b in list(weight0.items()):
            exps[key] = b / 12
        key = (1, ONE_1)
        exps[key] = exps.get(key, Fraction(0)) + Fraction(2 * k)
        exps = {key: a for key, a in exps.items() if a}
    else:
        exps = dict(weight0)

    level_class = supported_level(N)
    result = DecompositionResult(
        expr=None,
        exponents=exps,
        residual=residual,
        certified=False,
        level_class=level_class,
        weight0_exponents=weight0,
        pivot_rows=list(solver.series_pivots),
        rank=solver.rank,
        basis_size=len(labels),
        notes=notes,
    )
    if not rational:
        notes.append("non-rational exponents; no quotient to re-expand")
        return result
    if not residual.is_zero():
        notes.append(f"residual nonzero from q^{residual.valuation()}")
    if all(a.denominator == 1 for a in exps.values()):
        expr = EtaQuotientExpr(terms=exps, level=N)
        expanded = expand_quotient(expr, P)
        const = _lead(f) / _lead(expanded)
        expr = EtaQuotientExpr(terms=exps, constant=const, level=N)
        result.expr = expr
        match = _matches(expanded.scale(const), f)
        result.certified = residual.is_zero() and match
        if not match:
            notes.append("re-expanded quotient differs from the input")
        return result
    # rational exponents: certify the 12th power identity instead
    twelve = {key: a * 12 for key, a in exps.items()}
    if all(a.denominator == 1 for a in twelve.values()):
        expr12 = EtaQuotientExpr(terms=twelve, level=N)
        expanded = expand_quotient(expr12, P)
        f12 = series_int_pow(f, 12)
        const = _lead(f12) / _lead(expanded)
        result.expr = EtaQuotientExpr(terms=twelve, constant=const, level=N)
        result.power = 12
        match = _matches(expanded.scale(const), f12)
        result.certified = residual.is_zero() and match
        notes.append("exponents are not integral; certified the identity for f^12")
    else:
        notes.append("exponents are not integral even after the 12th power")
    return result


def _matches(a: QSeries, b: QSeries) -> bool:
    return a.leading_exponent == b.leading_exponent and a.first_difference(b) is None


def verify_quotient(e: EtaQuotientExpr, target: QSeries) -> bool:
    """Exact coefficient equality of expand_quotient(e) with target."""
    if not e.is_integral():
        raise ValueError("verify_quotient needs integer exponents")
    expanded = expand_quotient(e, target.precision)
    return _matches(expanded, target)


def first_mismatch(e: EtaQuotientExpr, target: QSeries) -> int | None:
    expanded = expand_quotient(e, target.precision)
    if expanded.leading_exponent != target.leading_exponent:
        return 0
    return expanded.first_difference(target)
