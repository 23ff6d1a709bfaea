"""Truncated Puiseux q-series  q^r * (c_0 + c_1 q + ... + c_{P-1} q^{P-1} + O(q^P))
with coefficients in a cyclotomic field Q(zeta_m).

The coefficient rows are kept as raw power-basis tuples of one common field
so the inner loops never allocate CycNum objects.  ``precision`` is the
number of known coefficients; binary operations keep the smaller one.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz
import gmpy2

from .arith import lcm
from .exactfield import ONE, ZERO, CycNum, as_rational, cyc_field, rational_str

_KERNELS = ("kronecker", "schoolbook")
_mul_kernel = "kronecker"


def set_mul_kernel(name: str) -> str:
    """Select the series multiplication kernel; returns the previous one.

    Both kernels are exact and produce identical results.
    """
    global _mul_kernel
    if name not in _KERNELS:
        raise ValueError(f"unknown kernel {name!r}; choose from {_KERNELS}")
    old, _mul_kernel = _mul_kernel, name
    return old


def get_mul_kernel() -> str:
    return _mul_kernel


class QSeries:
    __slots__ = ("zeta_order", "leading_exponent", "_c")

    def __init__(self, coeffs=(), leading_exponent=0, zeta_order: int | None = None):
        items = [CycNum._coerce(x) for x in coeffs]
        if any(x is None for x in items):
            raise TypeError("series coefficients must be exact numbers")
        m = zeta_order
        if m is None:
            m = 1
            for x in items:
                m = lcm(m, x.order)
        for x in items:
            if m % x.order:
                raise ValueError(f"coefficient in Q(zeta_{x.order}) does not fit Q(zeta_{m})")
        self.zeta_order = m
        self.leading_exponent = as_rational(leading_exponent)
        self._c = [x.embed(m).coeffs for x in items]

    @classmethod
    def _raw(cls, m: int, r, rows: list) -> "QSeries":
        obj = object.__new__(cls)
        obj.zeta_order = m
        obj.leading_exponent = r
        obj._c = rows
        return obj

    @classmethod
    def one(cls, precision: int, zeta_order: int = 1) -> "QSeries":
        F = cyc_field(zeta_order)
        rows = [F.zero] * precision
        if precision:
            rows[0] = F.one
        return cls._raw(zeta_order, ZERO, rows)

    @classmethod
    def constant(cls, c, precision: int) -> "QSeries":
        c = CycNum._coerce(c)
        F = cyc_field(c.order)
        rows = [F.zero] * precision
        if precision:
            rows[0] = c.coeffs
        return cls._raw(c.order, ZERO, rows)

    @classmethod
    def monomial(cls, exponent, precision: int, c=1) -> "QSeries":
        """c * q^exponent, known through q^(exponent + precision)."""
        s = cls.constant(c, precision)
        return cls._raw(s.zeta_order, as_rational(exponent), s._c)

    # -- basic accessors ---------------------------------------------------
    @property
    def precision(self) -> int:
        return len(self._c)

    @property
    def field(self):
        return cyc_field(self.zeta_order)

    def __len__(self):
        return len(self._c)

    def __getitem__(self, n: int) -> CycNum:
        if n < 0:
            raise IndexError("negative coefficient index")
        if n >= len(self._c):
            raise IndexError(f"coefficient {n} unknown at precision {len(self._c)}")
        return CycNum._make(self.zeta_order, self._c[n])

    coeff = __getitem__

    def coefficients(self) -> list[CycNum]:
        m = self.zeta_order
        return [CycNum._make(m, row) for row in self._c]

    def rows(self) -> list[tuple]:
        return list(self._c)

    def complex_coeffs(self) -> list[complex]:
        F = self.field
        return [F.to_complex(row) for row in self._c]

    def valuation(self) -> int | None:
        """Index of the first nonzero known coefficient, None if all vanish."""
        for n, row in enumerate(self._c):
            if any(row):
                return n
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def embed(self, m: int) -> "QSeries":
        if m == self.zeta_order:
            return self
        F = self.field
        return QSeries._raw(m, self.leading_exponent, [F.embed(row, m) for row in self._c])

    def truncate(self, precision: int) -> "QSeries":
        if precision > self.precision:
            raise ValueError(f"cannot raise precision {self.precision} to {precision}")
        return QSeries._raw(self.zeta_order, self.leading_exponent, self._c[:precision])

    def normalized(self) -> "QSeries":
        """Move leading zero coefficients into the exponent (precision drops)."""
        v = self.valuation()
        if not v:
            return self
        return QSeries._raw(self.zeta_order, self.leading_exponent + v, self._c[v:])

    def shift(self, e) -> "QSeries":
        """Multiply by q^e."""
        return QSeries._raw(self.zeta_order, self.leading_exponent + as_rational(e), self._c)

    # -- ring operations ---------------------------------------------------
    def _common_with(self, other: "QSeries"):
        if self.zeta_order == other.zeta_order:
            return self, other
        m = lcm(self.zeta_order, other.zeta_order)
        return self.embed(m), other.embed(m)

    def _addsub(self, other, sign):
        if not isinstance(other, QSeries):
            c = CycNum._coerce(other)
            if c is None:
                return NotImplemented
            if self.leading_exponent != 0:
                raise ValueError("adding a constant to a series with nonzero leading exponent")
            other = QSeries.constant(c, self.precision)
        a, b = self._common_with(other)
        ra, rb = a.leading_exponent, b.leading_exponent
        diff = ra - rb
        if diff.denominator != 1:
            raise ValueError(f"leading exponents {ra} and {rb} differ by a non-integer")
        r = min(ra, rb)
        top = min(ra + a.precision, rb + b.precision)
        P = int(top - r)
        if P < 0:
            P = 0
        F = a.field
        sa, sb = int(ra - r), int(rb - r)
        rows = []
        for n in range(P):
            x = a._c[n - sa] if 0 <= n - sa < a.precision else F.zero
            y = b._c[n - sb] if 0 <= n - sb < b.precision else F.zero
            if sign > 0:
                rows.append(tuple(u + v for u, v in zip(x, y)))
            else:
                rows.append(tuple(u - v for u, v in zip(x, y)))
        return QSeries._raw(a.zeta_order, r, rows)

    def __add__(self, other):
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self)._addsub(other, 1)

    def __neg__(self):
        return QSeries._raw(
            self.zeta_order, self.leading_exponent, [tuple(-x for x in row) for row in self._c]
        )

    def scale(self, c) -> "QSeries":
        c = CycNum._coerce(c)
        if c is None:
            raise TypeError("scalar must be an exact number")
        m = lcm(self.zeta_order, c.order)
        s = self.embed(m)
        F = s.field
        cv = c.embed(m).coeffs
        if c.order == 1 or not any(cv[1:]):
            k = cv[0]
            rows = [tuple(x * k for x in row) for row in s._c]
        else:
            rows = [F.mul(row, cv) if any(row) else row for row in s._c]
        return QSeries._raw(m, self.leading_exponent, rows)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            if CycNum._coerce(other) is None:
                return NotImplemented
            return self.scale(other)
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, QSeries):
            c = CycNum._coerce(other)
            if c is None:
                return NotImplemented
            return self.scale(ONE / c if c.order == 1 else c.inverse())
        return series_div(self, other)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return series_int_pow(self, k)

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.leading_exponent != other.leading_exponent or self.precision != other.precision:
            return False
        a, b = self._common_with(other)
        return a._c == b._c

    __hash__ = None

    def agrees_with(self, other: "QSeries") -> bool:
        """Exact agreement on every coefficient known to both series."""
        return self.first_difference(other) is None

    def first_difference(self, other: "QSeries") -> int | None:
        """Smallest index (relative to self's exponent) where the two differ."""
        d = self - other
        return d.valuation()

    # -- operators of the theory --------------------------------------------
    def theta(self) -> "QSeries":
        return theta_op(self)

    def q_log_derivative(self) -> "QSeries":
        return q_log_derivative(self)

    def v(self, t: int) -> "QSeries":
        return v_operator(self, t)

    def log(self) -> "QSeries":
        return series_log(self)

    def exp(self) -> "QSeries":
        return series_exp(self)

    # -- io ------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "zeta_order": self.zeta_order,
            "leading_exponent": rational_str(self.leading_exponent),
            "precision": self.precision,
            "coeffs": [[rational_str(x) for x in row] for row in self._c],
        }

    @classmethod
    def from_json(cls, obj) -> "QSeries":
        m = int(obj["zeta_order"])
        F = cyc_field(m)
        rows = []
        for row in obj["coeffs"]:
            vals = tuple(as_rational(x) for x in row)
            if len(vals) != F.phi:
                raise ValueError(f"coefficient rows must have length {F.phi}")
            rows.append(vals)
        if "precision" in obj and int(obj["precision"]) != len(rows):
            raise ValueError("precision field disagrees with number of coefficients")
        return cls._raw(m, as_rational(obj.get("leading_exponent", "0")), rows)

    def __str__(self):
        terms = []
        for n, c in enumerate(self.coefficients()[:8]):
            if c.is_zero():
                continue
            cs = str(c)
            if n == 0:
                terms.append(cs)
            else:
                mono = "q" if n == 1 else f"q^{n}"
                if cs == "1":
                    terms.append(mono)
                elif cs == "-1":
                    terms.append("-" + mono)
                else:
                    terms.append(f"({cs})*{mono}")
        body = " + ".join(terms) if terms else "0"
        body += f" + O(q^{self.precision})"
        r = self.leading_exponent
        if r:
            return f"q^({r})*({body})"
        return body

    def __repr__(self):
        return f"QSeries({self})"


# ---------------------------------------------------------------------------
# multiplication kernels


def _mul_schoolbook(F, A, B, P):
    phi = F.phi
    nzA = [(k, a) for k, a in enumerate(A[:P]) if any(a)]
    nzB = [(k, b) for k, b in enumerate(B[:P]) if any(b)]
    if phi == 1:
        res = [ZERO] * P
        for i, (a,) in nzA:
            for j, (b,) in nzB:
                n = i + j
                if n >= P:
                    break
                res[n] += a * b
        return [(x,) for x in res]
    accs = [[ZERO] * (2 * phi - 1) for _ in range(P)]
    for i, a in nzA:
        for j, b in nzB:
            n = i + j
            if n >= P:
                break
            acc = accs[n]
            for p, ap in enumerate(a):
                if ap:
                    for q, bq in enumerate(b):
                        if bq:
                            acc[p + q] += ap * bq
    return [F.reduce(acc) for acc in accs]


def _to_integer_rows(rows):
    """Scale rows by the lcm D of all denominators; return (int rows, D, max |entry|)."""
    D = mpz(1)
    for row in rows:
        for x in row:
            if x:
                den = x.denominator
                if den != 1:
                    D = gmpy2.lcm(D, den)
    out = []
    big = 0
    for row in rows:
        r = []
        for x in row:
            if x:
                v = int(x.numerator * (D // x.denominator))
                r.append(v)
                if abs(v) > big:
                    big = abs(v)
            else:
                r.append(0)
        out.append(r)
    return out, D, big


def _pack(int_rows, stride, nbytes, nslots):
    buf = bytearray((nslots + 1) * nbytes)
    neg = bytearray((nslots + 1) * nbytes)
    mod = 1 << (8 * nbytes)
    for n, row in enumerate(int_rows):
        base = n * stride
        for i, v in enumerate(row):
            if v:
                slot = base + i
                if v < 0:
                    v += mod
                    neg[(slot + 1) * nbytes] = 1
                buf[slot * nbytes:(slot + 1) * nbytes] = v.to_bytes(nbytes, "little")
    return int.from_bytes(buf, "little") - int.from_bytes(neg, "little")


def _mul_kronecker(F, A, B, P):
    """Kronecker substitution: pack (q, zeta) bivariate integer data into one
    big integer per operand and let the bignum multiply do the convolution."""
    phi = F.phi
    IA, DA, ma = _to_integer_rows(A[:P])
    IB, DB, mb = _to_integer_rows(B[:P])
    if not ma or not mb:
        return [F.zero] * P
    stride = 2 * phi - 1
    bound = P * phi * ma * mb
    bits = bound.bit_length() + 2
    nbytes = (bits + 7) // 8
    nslots = P * stride
    x = _pack(IA, stride, nbytes, nslots)
    y = _pack(IB, stride, nbytes, nslots)
    half = 1 << (8 * nbytes - 1)
    offset = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * nslots, "little")
    prod = (x * y + offset) & ((1 << (8 * nbytes * nslots)) - 1)
    raw = prod.to_bytes(nslots * nbytes, "little")
    D = DA * DB
    out = []
    for n in range(P):
        base = n * stride
        acc = [
            int.from_bytes(raw[(base + i) * nbytes:(base + i + 1) * nbytes], "little") - half
            for i in range(stride)
        ]
        red = F.reduce(acc) if phi > 1 else acc
        out.append(tuple(mpq(v, D) if v else ZERO for v in red))
    return out


def _mul_rows(F, A, B, P):
    if _mul_kernel == "kronecker":
        return _mul_kronecker(F, A, B, P)
    return _mul_schoolbook(F, A, B, P)


# ---------------------------------------------------------------------------
# public operations


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    a, b = a._common_with(b)
    P = min(a.precision, b.precision)
    rows = _mul_rows(a.field, a._c, b._c, P)
    return QSeries._raw(a.zeta_order, a.leading_exponent + b.leading_exponent, rows)


def _require_unit(b: QSeries, what: str):
    if not b.precision or not any(b._c[0]):
        raise ZeroDivisionError(f"{what}: leading series coefficient is zero (not a unit)")


def series_div(a: QSeries, b: QSeries) -> QSeries:
    """a / b for b with nonzero first series coefficient."""
    _require_unit(b, "series_div")
    a, b = a._common_with(b)
    F = a.field
    phi = F.phi
    P = min(a.precision, b.precision)
    A, B = a._c, b._c
    inv0 = F.inv(B[0])
    nzB = [(k, B[k]) for k in range(1, P) if any(B[k])]
    Q = []
    if phi == 1:
        i0 = inv0[0]
        for n in range(P):
            s = A[n][0]
            for k, (bk,) in nzB:
                if k > n:
                    break
                s -= bk * Q[n - k][0]
            Q.append((s * i0,))
    else:
        for n in range(P):
            acc = [ZERO] * (2 * phi - 1)
            for k, bk in nzB:
                if k > n:
                    break
                qv = Q[n - k]
                for p, bp in enumerate(bk):
                    if bp:
                        for s, qs in enumerate(qv):
                            if qs:
                                acc[p + s] += bp * qs
            red = F.reduce(acc)
            num = tuple(x - y for x, y in zip(A[n], red))
            Q.append(F.mul(num, inv0) if any(num) else F.zero)
    return QSeries._raw(a.zeta_order, a.leading_exponent - b.leading_exponent, Q)


def series_inverse(a: QSeries) -> QSeries:
    return series_div(QSeries.one(a.precision, a.zeta_order), a)


def series_int_pow(a: QSeries, k: int) -> QSeries:
    """a^k by square-and-multiply; k < 0 needs a unit first coefficient."""
    if k == 0:
        return QSeries.one(a.precision, a.zeta_order)
    base = a if k > 0 else series_inverse(a)
    k = abs(k)
    result = None
    while k:
        if k & 1:
            result = base if result is None else series_mul(result, base)
        k >>= 1
        if k:
            base = series_mul(base, base)
    return result


def theta_op(a: QSeries) -> QSeries:
    """theta = q d/dq:  q^r sum c_n q^n  ->  q^r sum (n + r) c_n q^n."""
    r = a.leading_exponent
    rows = []
    for n, row in enumerate(a._c):
        f = r + n
        rows.append(tuple(x * f for x in row) if f else tuple(ZERO for _ in row))
    return QSeries._raw(a.zeta_order, r, rows)


def q_log_derivative(f: QSeries) -> QSeries:
    """theta(f)/f.  For f = q^r S this is r + theta(S)/S, a series with exponent 0."""
    _require_unit(f, "q_log_derivative")
    S = QSeries._raw(f.zeta_order, ZERO, f._c)
    g = series_div(theta_op(S), S)
    r = f.leading_exponent
    if r and g.precision:
        rows = list(g._c)
        rows[0] = (rows[0][0] + r,) + tuple(rows[0][1:])
        g = QSeries._raw(g.zeta_order, ZERO, rows)
    return g


def series_log(a: QSeries) -> QSeries:
    """Formal log of a series 1 + O(q)."""
    if a.leading_exponent != 0:
        raise ValueError("series_log needs leading exponent 0")
    if not a.precision or a._c[0] != a.field.one:
        raise ValueError("series_log needs constant term 1")
    g = q_log_derivative(a)
    rows = [a.field.zero]
    for n in range(1, g.precision):
        rows.append(tuple(x / n for x in g._c[n]))
    return QSeries._raw(a.zeta_order, ZERO, rows)


def series_exp(h: QSeries) -> QSeries:
    """Formal exp of a series O(q):  n g_n = sum_{k=1}^n k h_k g_{n-k}."""
    if h.leading_exponent != 0:
        raise ValueError("series_exp needs leading exponent 0")
    F = h.field
    if h.precision and any(h._c[0]):
        raise ValueError("series_exp needs zero constant term")
    phi = F.phi
    P = h.precision
    H = [(k, tuple(x * k for x in h._c[k])) for k in range(1, P) if any(h._c[k])]
    G = [F.one] if P else []
    if phi == 1:
        for n in range(1, P):
            s = ZERO
            for k, (hk,) in H:
                if k > n:
                    break
                s += hk * G[n - k][0]
            G.append((s / n,))
    else:
        for n in range(1, P):
            acc = [ZERO] * (2 * phi - 1)
            for k, hk in H:
                if k > n:
                    break
                gv = G[n - k]
                for p, hp in enumerate(hk):
                    if hp:
                        for s, gs in enumerate(gv):
                            if gs:
                                acc[p + s] += hp * gs
            G.append(tuple(x / n for x in F.reduce(acc)))
    return QSeries._raw(h.zeta_order, ZERO, G)


def series_cyc_pow(a: QSeries, w) -> QSeries:
    """a^w := exp(w log a) for a = 1 + O(q) and w in a cyclotomic field."""
    return series_exp(series_log(a).scale(w))


def v_operator(a: QSeries, t: int) -> QSeries:
    """(f | V_t)(tau) = f(t tau): q -> q^t.  Precision becomes t * P."""
    if t < 1:
        raise ValueError(f"V_t needs t >= 1, got {t}")
    if t == 1:
        return a
    F = a.field
    rows = [F.zero] * (t * a.precision)
    for n, row in enumerate(a._c):
        rows[t * n] = row
    return QSeries._raw(a.zeta_order, a.leading_exponent * t, rows)
