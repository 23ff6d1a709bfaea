"""Command line interface: expand, orders, decompose, verify, multiplier."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from .analytic import TailBoundError, UnimodularMatrix, choose_tau, estimate_multiplier
from .characters import CharacterError, char_from_spec, eta_chi_level
from .cusps import eta_chi_order_table
from .decompose import DecompositionProblem, PreconditionError, decompose, sturm_bound
from .eisenstein import e2_series, e2t_series
from .eta import EtaQuotientExpr, eta_chi_series, eta_series, expand_quotient
from .qseries import QSeries
from .verify import SUITES, load_multiplier_fixture, run_suite

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DESCRIPTOR = 3
EXIT_FILE = 4
EXIT_PRECONDITION = 5
EXIT_NONREAL = 6
EXIT_TAIL = 7

EXIT_TABLE = """exit codes:
  0  success (decompose: certified; verify: all checks pass)
  1  decomposition not certified, or a verification check failed
  2  usage error (bad flags, bad ETAFORGE_PREC_DEFAULT)
  3  bad character or quotient descriptor
  4  input file missing or not parseable
  5  precondition failed (precision below Sturm bound + 10, zero leading coefficient)
  6  non-real character where a real one is required
  7  evaluation point outside the convergence reach (|q| > 0.85)"""


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------- output


def _encode(obj, indent: int = 0) -> str:
    """Deterministic JSON with floats printed to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps(str(obj))
        return format(obj, ".17g")
    if isinstance(obj, complex):
        return _encode({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return json.dumps(f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if len(obj) <= 6 and all(isinstance(v, (str, int, float, bool, Fraction)) or v is None for v in obj.values()):
            return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(x, (str, int, float, bool)) for x in obj):
            return "[" + ", ".join(_encode(x) for x in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(x, indent + 1) for x in obj) + "\n" + end + "]"
    return json.dumps(str(obj))


def _emit(args, payload, text: str):
    out = _encode(payload) if args.json else text
    if getattr(args, "output", None):
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(out + "\n")
        except OSError as exc:
            raise CliError(EXIT_FILE, f"cannot write {args.output}: {exc}")
    else:
        print(out)


def _default_precision() -> int:
    raw = os.environ.get("ETAFORGE_PREC_DEFAULT", "120")
    try:
        P = int(raw)
    except ValueError:
        raise CliError(EXIT_USAGE, f"ETAFORGE_PREC_DEFAULT must be an integer, got {raw!r}")
    if P < 1:
        raise CliError(EXIT_USAGE, "ETAFORGE_PREC_DEFAULT must be positive")
    return P


def _char(spec: str):
    try:
        return char_from_spec(spec)
    except (CharacterError, ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_DESCRIPTOR, str(exc) if spec in str(exc) else f"bad character descriptor {spec!r}: {exc}")


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_FILE, f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_FILE, f"{path} is not valid JSON: {exc}")


def _read_quotient(path: str) -> EtaQuotientExpr:
    obj = _read_json(path)
    try:
        return EtaQuotientExpr.from_json(obj)
    except (CharacterError, ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_DESCRIPTOR, f"bad quotient in {path}: {exc}")


def _read_series(path: str) -> QSeries:
    obj = _read_json(path)
    try:
        return QSeries.from_json(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_FILE, f"bad series in {path}: {exc}")


def _series_text(s: QSeries, limit: int = 20) -> str:
    lines = [f"leading exponent {s.leading_exponent}, precision {s.precision}, field Q(zeta_{s.zeta_order})"]
    for n, c in enumerate(s.coefficients()[:limit]):
        lines.append(f"  q^{n}: {c}")
    if s.precision > limit:
        lines.append(f"  ... {s.precision - limit} more")
    return "\n".join(lines)


# ---------------------------------------------------------------- commands


def cmd_expand(args) -> int:
    P = args.prec if args.prec is not None else _default_precision()
    if P < 1:
        raise CliError(EXIT_USAGE, "--prec must be positive")
    obj = args.object
    if obj == "eta":
        s = eta_series(P)
    elif obj == "eta-chi":
        if not args.char:
            raise CliError(EXIT_USAGE, "expand eta-chi needs --char")
        s = eta_chi_series(_char(args.char), P)
    elif obj == "e2":
        s = e2_series(_char(args.psi), _char(args.phi), P).series
    elif obj == "e2t":
        if args.t is None or args.t < 2:
            raise CliError(EXIT_USAGE, "expand e2t needs --t >= 2")
        s = e2t_series(args.t, P)
    else:
        if not args.quotient:
            raise CliError(EXIT_USAGE, "expand quotient needs --quotient FILE")
        e = _read_quotient(args.quotient)
        if not e.is_integral():
            raise CliError(EXIT_PRECONDITION, "expand needs integer exponents")
        s = expand_quotient(e, P)
    _emit(args, s.to_json(), _series_text(s, args.show))
    return EXIT_OK


def cmd_orders(args) -> int:
    chi = _char(args.char)
    if not chi.is_real:
        raise CliError(
            EXIT_NONREAL,
            f"{chi.descriptor} is not real: exact cusp orders are only available for real primitive characters",
        )
    if not chi.is_primitive or chi.modulus < 2:
        raise CliError(EXIT_PRECONDITION, f"{chi.descriptor} must be primitive with conductor > 1")
    table = eta_chi_order_table(chi)
    Q = eta_chi_level(chi)
    payload = {
        "char": chi.descriptor,
        "level": Q,
        "cusps": [{"cusp": r["cusp"], "width": r["width"], "order": r["order"]} for r in table],
    }
    lines = [f"eta[{chi.descriptor}] on Gamma_0({Q}), Q = {Q}", f"{'cusp':>8} {'width':>6} {'order':>7}"]
    for r in table:
        lines.append(f"{r['label']:>8} {r['width']:>6} {r['order']:>7}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_decompose(args) -> int:
    N = args.level
    if N < 1:
        raise CliError(EXIT_USAGE, "--level must be positive")
    if bool(args.series) == bool(args.quotient):
        raise CliError(EXIT_USAGE, "give exactly one of --series or --quotient")
    if args.series:
        f = _read_series(args.series)
        if args.prec is not None:
            if args.prec > f.precision:
                raise CliError(EXIT_PRECONDITION, f"--prec {args.prec} exceeds the {f.precision} coefficients in the file")
            f = f.truncate(args.prec)
    else:
        e = _read_quotient(args.quotient)
        if not e.is_integral():
            raise CliError(EXIT_PRECONDITION, "quotient input needs integer exponents")
        P = args.prec if args.prec is not None else max(_default_precision(), sturm_bound(N) + 10)
        f = expand_quotient(e, P)
    try:
        problem = DecompositionProblem(N, f, weight=args.weight)
        result = decompose(problem)
    except PreconditionError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc))
    payload = result.to_json()
    payload["level"] = N
    payload["weight"] = args.weight
    payload["precision"] = problem.precision
    payload["sturm_bound"] = sturm_bound(N)
    lines = [
        f"level {N} ({result.level_class.value}), weight {args.weight}, precision {problem.precision}, "
        f"sturm bound {sturm_bound(N)}",
        f"basis {result.basis_size}, rank {result.rank}, pivot rows {result.pivot_rows}",
    ]
    for item in payload["exponents"]:
        lines.append(f"  t={item['t']:<4} {item['char']:<22} exponent {item['exp']}")
    if result.expr is not None:
        lines.append(f"constant {result.expr.constant}" + (" (identity for f^12)" if result.power == 12 else ""))
    idx = result.first_residual_index
    lines.append("residual 0" if idx is None else f"residual nonzero from q^{idx}")
    lines.extend(f"note: {n}" for n in result.notes)
    lines.append(f"certified: {'yes' if result.certified else 'no'}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if result.certified else EXIT_FAILED


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = [run_suite(n) for n in names]
    payload = {"passed": all(r.passed for r in reports), "suites": [r.to_json() for r in reports]}
    lines = []
    for r in reports:
        lines.extend(r.lines())
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if payload["passed"] else EXIT_FAILED


def _parse_gamma(text: str) -> UnimodularMatrix:
    try:
        a, b, c, d = (int(x) for x in text.replace(" ", "").split(","))
        return UnimodularMatrix(a, b, c, d)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, f"--gamma wants a,b,c,d with ad - bc = 1: {exc}")


def _parse_tau(text: str) -> complex:
    try:
        re, im = (float(x) for x in text.split(","))
    except ValueError:
        raise CliError(EXIT_USAGE, "--tau wants re,im")
    if im <= 0:
        raise CliError(EXIT_USAGE, "--tau must have positive imaginary part")
    return complex(re, im)


def cmd_multiplier(args) -> int:
    if bool(args.char) == bool(args.quotient):
        raise CliError(EXIT_USAGE, "give exactly one of --char or --quotient")
    if args.char:
        subject = _char(args.char)
        label = f"eta[{subject.descriptor}]"
    else:
        subject = _read_quotient(args.quotient)
        label = str(subject)
    if args.fixture:
        fixture = load_multiplier_fixture()
        if args.fixture not in fixture:
            raise CliError(EXIT_USAGE, f"no fixture for level {args.fixture}; have {sorted(fixture)}")
        gammas = fixture[args.fixture][1]
    elif args.gamma:
        gammas = [_parse_gamma(args.gamma)]
    else:
        raise CliError(EXIT_USAGE, "give --gamma a,b,c,d or --fixture N")
    tau = _parse_tau(args.tau) if args.tau else None
    rows = []
    worst = 0.0
    for g in gammas:
        t = tau if tau is not None else choose_tau(g)
        try:
            nu = estimate_multiplier(subject, g, tau=t, truncation=args.truncation)
        except TailBoundError as exc:
            raise CliError(EXIT_TAIL, str(exc))
        except ValueError as exc:
            raise CliError(EXIT_PRECONDITION, str(exc))
        dev = abs(nu ** 12 - 1)
        worst = max(worst, dev)
        rows.append({"gamma": list(g.as_tuple()), "tau": t, "nu": nu, "nu12_deviation": dev})
    passed = worst < args.tol
    payload = {"subject": label, "truncation": args.truncation, "tolerance": args.tol, "results": rows,
               "max_nu12_deviation": worst, "passed": passed}
    lines = [f"{label}, truncation {args.truncation}"]
    for r in rows:
        nu = r["nu"]
        lines.append(f"  gamma {r['gamma']}: nu = {nu.real:+.12f}{nu.imag:+.12f}i, |nu^12 - 1| = {r['nu12_deviation']:.3e}")
    lines.append(f"max |nu^12 - 1| = {worst:.3e} ({'PASS' if passed else 'FAIL'} at {args.tol:g})")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if passed else EXIT_FAILED


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="etaforge",
        description="Generalized eta functions, cusp orders and eta-quotient decomposition.",
        epilog=EXIT_TABLE + "\n\nenvironment:\n  ETAFORGE_PREC_DEFAULT  default precision (integer, default 120)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--output", "-o", help="write output to a file instead of stdout")

    e = sub.add_parser("expand", help="print a q-expansion")
    e.add_argument("object", choices=["eta", "eta-chi", "e2", "e2t", "quotient"])
    e.add_argument("--char", help="character descriptor for eta-chi")
    e.add_argument("--psi", default="one:1", help="first character of E_2 (default one:1)")
    e.add_argument("--phi", default="one:1", help="second character of E_2 (default one:1)")
    e.add_argument("--t", type=int, help="t for E_{2,t}")
    e.add_argument("--quotient", help="quotient JSON file")
    e.add_argument("--prec", type=int, help="number of coefficients (default ETAFORGE_PREC_DEFAULT)")
    e.add_argument("--show", type=int, default=20, help="coefficients shown in text mode")
    common(e)
    e.set_defaults(func=cmd_expand)

    o = sub.add_parser("orders", help="cusp orders of eta_chi on Gamma_0(u^2)")
    o.add_argument("--char", required=True)
    common(o)
    o.set_defaults(func=cmd_orders)

    d = sub.add_parser("decompose", help="recover eta-quotient exponents", epilog=EXIT_TABLE,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    d.add_argument("--level", type=int, required=True)
    d.add_argument("--weight", type=int, default=0)
    d.add_argument("--series", help="QSeries JSON file")
    d.add_argument("--quotient", help="quotient JSON file, expanded first")
    d.add_argument("--prec", type=int, help="precision to use")
    common(d)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    common(v)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("multiplier", help="estimate multipliers numerically")
    m.add_argument("--char", help="eta_chi for this character")
    m.add_argument("--quotient", help="weight-0 quotient JSON file")
    m.add_argument("--gamma", help="matrix entries a,b,c,d (write --gamma=-7,1,-64,9 when a is negative)")
    m.add_argument("--fixture", type=int, help="use the stored generators of Gamma_0(N) (9, 16, 25)")
    m.add_argument("--tau", help="evaluation point re,im, e.g. --tau=-0.1,0.3 (default: c tau + d = i)")
    m.add_argument("--truncation", type=int, default=500)
    m.add_argument("--tol", type=float, default=1e-4)
    common(m)
    m.set_defaults(func=cmd_multiplier)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"etaforge: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
