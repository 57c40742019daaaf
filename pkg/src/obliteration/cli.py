"""Command-line front end.

Exit codes: 0 on success, 1 when a computation fails (retries exhausted,
verification failed, certificate unstable), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import bounds, typecalc
from .polarcone import (
    FormSystem,
    PolarConeError,
    SpanningTuple,
    iterated_polar,
    parse_points,
    restrict_to_complement,
)
from .polyring import PolySyntaxError, poly_format, poly_parse
from .solver import SolveFailure, find_linear_subspace, find_point, verify_point
from .solvfield import CertificateError, CertStore, TowerCapExceeded, eval_certificate, make_field

PRECISION_ENV = "OBLITERATION_PRECISION"
FORMATS = ("json", "csv", "markdown", "text")


class UsageError(Exception):
    """Bad flags or unreadable input; reported with exit code 2."""


class ComputationFailed(Exception):
    """The computation ran but did not succeed; exit code 1."""


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return 50
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV}={raw!r} is not an integer") from None


# ---------------------------------------------------------------------------
# output helpers


def _frac(v: Any) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _emit_record(rec: dict, fmt: str) -> str:
    """Flat records in any format; nested values are JSON-encoded in csv/markdown."""
    if fmt == "json":
        return json.dumps(rec, indent=2, default=str)
    flat = {k: v if isinstance(v, (int, str, float, bool)) or v is None else json.dumps(v, default=str) for k, v in rec.items()}
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(flat))
        w.writerow(list(flat.values()))
        return buf.getvalue().rstrip("\n")
    if fmt == "markdown":
        lines = ["| key | value |", "|---|---|"]
        lines += [f"| {k} | {v} |" for k, v in flat.items()]
        return "\n".join(lines)
    return "\n".join(f"{k}: {v}" for k, v in flat.items())


def _load_json(path: str, flag: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{flag}: cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{flag}: {path} is not valid JSON ({exc.msg} at line {exc.lineno})") from None


def _load_system(path: str) -> FormSystem:
    data = _load_json(path, "--system")
    try:
        return FormSystem.from_json(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"--system: missing or malformed field {exc}") from None
    except (PolySyntaxError, PolarConeError, ValueError) as exc:
        raise UsageError(f"--system: {exc}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_type(args) -> tuple[str, int]:
    try:
        vecs = [typecalc.parse_vector(v) for v in args.vectors]
    except ValueError as exc:
        raise UsageError(f"vectors: {exc}") from None
    op = args.op
    need = {"add": 2, "concat": 2}.get(op, 1)
    if len(vecs) != need:
        raise UsageError(f"type {op} takes {need} vector(s), got {len(vecs)}")
    j = args.j
    if op == "add":
        res = typecalc.type_add(typecalc.TypeVector(vecs[0]), typecalc.TypeVector(vecs[1]))
    elif op == "concat":
        res = typecalc.deg_concat(typecalc.DegreeVector(vecs[0]), typecalc.DegreeVector(vecs[1]))
    elif op == "of":
        res = typecalc.type_of(typecalc.DegreeVector(vecs[0]))
    elif op == "raise":
        res = typecalc.raise_type(typecalc.TypeVector(vecs[0]), j)
    elif op == "raise-deg":
        res = typecalc.raise_deg(typecalc.DegreeVector(vecs[0]), j)
    else:
        res = typecalc.norm1(typecalc.TypeVector(vecs[0]))
    value = res if isinstance(res, int) else list(res.entries)
    if args.format == "text":
        return (str(res) if isinstance(res, int) else "(" + ",".join(map(str, value)) + ")"), 0
    return _emit_record({"op": op, "j": j, "result": value}, args.format), 0


def cmd_bound(args) -> tuple[str, int]:
    try:
        q = bounds.BoundQuery(args.j, args.m2, args.m3, args.m4)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = bounds.fj_bound(q) if args.mode == "closed" else bounds.fj_search(q)
    if args.format == "text":
        out = [str(res.value)]
        if args.trace:
            for s in res.trace:
                tail = f" -> {s.reduces_to}" if s.reduces_to else ""
                out.append(f"  {s.rule}: {s.query} = {s.offset}{tail}")
        return "\n".join(out), 0
    rec = res.as_dict()
    if not args.trace:
        rec.pop("trace")
    return _emit_record(rec, args.format), 0


def cmd_table(args) -> tuple[str, int]:
    fmt = "markdown" if args.format == "text" else args.format
    if args.j_max < 0 or args.m_max < 1:
        raise UsageError("--j-max must be >= 0 and --m-max >= 1")
    return bounds.emit_table(args.kind, args.j_max, args.m_max, fmt).rstrip("\n"), 0


def _monomial_exp(text: str, vars: Sequence[str]) -> tuple[int, ...]:
    try:
        mono = poly_parse(text, vars)
    except PolySyntaxError as exc:
        raise UsageError(f"--coeff: {exc}") from None
    if len(mono.terms) != 1:
        raise UsageError(f"--coeff: {text!r} is not a single monomial")
    return next(iter(mono.terms))


def cmd_qpoly(args) -> tuple[str, int]:
    if args.which == "p":
        poly, vars = bounds.p_polynomial(), bounds.Q_VARS[1:]
    elif args.which == "printed":
        poly, vars = bounds.printed_q_polynomial(), bounds.Q_VARS
    else:
        poly, vars = bounds.q_polynomial(), bounds.Q_VARS
    if args.compare:
        diffs = bounds.compare_with_printed()
        rec = {
            "terms": len(bounds.q_polynomial().terms),
            "mismatches": [
                {"monomial": poly_format(_mono(d["exp"])), "composed": _frac(d["composed"]), "printed": _frac(d["printed"])}
                for d in diffs
            ],
        }
        text = "identical" if not diffs else "\n".join(f"{m['monomial']}: composed {m['composed']}, printed {m['printed']}" for m in rec["mismatches"])
        return (text if args.format == "text" else _emit_record(rec, args.format)), 0
    if args.coeff is not None:
        c = poly.coeff(_monomial_exp(args.coeff, vars))
        val = _frac(c)
        return (val if args.format == "text" else _emit_record({"monomial": args.coeff, "coeff": val}, args.format)), 0
    if args.at is not None:
        try:
            pt = [Fraction(t) for t in args.at.split(",")]
        except ValueError:
            raise UsageError(f"--at: cannot parse {args.at!r}") from None
        if len(pt) != len(vars):
            raise UsageError(f"--at needs {len(vars)} values ({','.join(vars)}), got {len(pt)}")
        val = _frac(poly.evaluate(pt))
        return (val if args.format == "text" else _emit_record({"at": dict(zip(vars, map(_frac, pt))), "value": val}, args.format)), 0
    if args.format == "text":
        return poly_format(poly), 0
    if args.format == "json":
        return json.dumps(poly.to_json(), indent=2), 0
    rows = [{"monomial": poly_format(_mono(e, vars)), "coeff": _frac(c)} for e, c in poly.sorted_terms()]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, ["monomial", "coeff"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue().rstrip("\n"), 0
    lines = ["| monomial | coeff |", "|---|---|"] + [f"| {r['monomial']} | {r['coeff']} |" for r in rows]
    return "\n".join(lines), 0


def _mono(exp: Sequence[int], vars: Sequence[str] = bounds.Q_VARS):
    from .polyring import MultiPoly

    return MultiPoly(vars, {tuple(exp): 1})


def cmd_compare(args) -> tuple[str, int]:
    try:
        rec = bounds.comparison_bounds(args.degree, args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rec = {"degree": args.degree, "m": args.m, **rec}
    return _emit_record(rec, args.format), 0


def _system_text(S: FormSystem) -> str:
    lines = [f"ambient_dim: {S.ambient_dim}", f"degrees: {S.degrees}", f"type: {S.type}"]
    lines += [f"  [{d}] {poly_format(f)}" for f, d in zip(S.forms, S.degrees)]
    return "\n".join(lines)


def cmd_polar(args) -> tuple[str, int]:
    S = _load_system(args.system)
    try:
        pts = parse_points(args.points)
    except ValueError:
        raise UsageError(f"--points: cannot parse {args.points!r}") from None
    j = len(pts) if args.iterate is None else args.iterate
    if j > len(pts) or j < 0:
        raise UsageError(f"--iterate {j} needs at least {j} points, got {len(pts)}")
    try:
        cone = iterated_polar(S, pts[:j])
        out = restrict_to_complement(cone, SpanningTuple.of(pts[:j])) if args.restrict and j else cone
    except PolarConeError as exc:
        raise UsageError(f"--points: {exc}") from None
    if args.format == "json":
        rec = out.to_json()
        rec["type"] = list(out.type.entries)
        return json.dumps(rec, indent=2), 0
    return _system_text(out), 0


def cmd_solve(args) -> tuple[str, int]:
    S = _load_system(args.system)
    try:
        field = make_field(args.mode, p=args.p, precision=args.precision, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t0 = time.perf_counter()
    try:
        if args.plane:
            outcome = find_linear_subspace(S, args.plane, field, seed=args.seed, retries=args.retries)
        else:
            outcome = find_point(S, field, seed=args.seed, retries=args.retries)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except (SolveFailure, TowerCapExceeded, CertificateError) as exc:
        raise ComputationFailed(f"solve failed: {exc}") from None
    report = verify_point(S, outcome, tolerance=args.tolerance)
    rec = outcome.to_json()
    rec["verification"] = report.as_dict()
    rec["seconds"] = round(time.perf_counter() - t0, 3)
    code = 0 if report.passed else 1
    if args.format == "json":
        return json.dumps(rec, indent=2, default=str), code
    lines = [
        f"mode: {rec['mode']}",
        f"points: {len(outcome.points)}",
    ]
    for p in rec["points"]:
        lines.append("  (" + ", ".join(c["approx"] if isinstance(c, dict) else str(c) for c in p) + ")")
    lines.append("type sequence: " + " -> ".join("(" + ",".join(map(str, t)) + ")" for t in rec["type_sequence"]))
    lines.append(f"outside guaranteed range: {rec['outside_guaranteed_range']}")
    lines.append(f"verified: {report.passed}")
    return "\n".join(lines), code


def cmd_verify(args) -> tuple[str, int]:
    data = _load_json(args.cert, "--cert")
    cert = data.get("certificate", data) if isinstance(data, dict) else data
    try:
        store, outputs = CertStore.from_json(cert)
        vals = eval_certificate(store, outputs, args.precision)
    except CertificateError as exc:
        raise ComputationFailed(f"certificate: {exc}") from None
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"--cert: malformed certificate ({exc})") from None
    import mpmath

    rec: dict = {"precision": args.precision, "values": [_fmt_value(v, args.precision) for v in vals]}
    code = 0
    if args.system:
        S = _load_system(args.system)
        shape = data.get("shape") if isinstance(data, dict) else None
        if not shape:
            shape = [1, len(vals)]
        if shape[0] * shape[1] != len(vals) or shape[1] != S.ambient_dim + 1:
            raise UsageError("--system: certificate outputs do not match the ambient dimension")
        pts = [vals[i * shape[1]:(i + 1) * shape[1]] for i in range(shape[0])]
        rec["residuals"] = _residuals(S, pts, args.precision)
        worst = max((Fraction(0) if r == "0" else mpmath.mpf(r) for r in rec["residuals"]), default=0)
        rec["passed"] = bool(worst <= mpmath.mpf(args.tolerance))
        code = 0 if rec["passed"] else 1
    if args.format == "text":
        return "\n".join(rec["values"] + ([f"passed: {rec['passed']}"] if "passed" in rec else [])), code
    return _emit_record(rec, args.format), code


def _fmt_value(v, digits: int) -> str:
    import mpmath

    # drop an imaginary part that is zero to working precision
    if abs(v.imag) <= mpmath.mpf(10) ** (5 - digits) * max(1, abs(v)):
        return mpmath.nstr(v.real, digits)
    return mpmath.nstr(v, digits)


def _residuals(S: FormSystem, pts, precision: int) -> list[str]:
    import mpmath

    from .solver import _restrict_span

    ctx = mpmath.MPContext()
    ctx.dps = precision + 20
    tv = tuple(f"t{i}" for i in range(len(pts)))
    xnorm = max(abs(v) for p in pts for v in p)
    out = []
    for f, d in zip(S.forms, S.degrees):
        if f.is_zero():
            out.append("0")
            continue
        fm = f.map_coeffs(lambda c: ctx.mpf(Fraction(c).numerator) / Fraction(c).denominator)
        g = _restrict_span(fm, pts, tv)
        worst = max((abs(c) for c in g.terms.values()), default=ctx.mpf(0))
        l1 = sum(abs(ctx.mpf(Fraction(c).numerator) / Fraction(c).denominator) for c in f.terms.values())
        out.append(mpmath.nstr(worst / (l1 * xnorm**d), 5))
    return out


def cmd_selftest(args) -> tuple[str, int]:
    from ._appendix import TABLES

    checks: list[tuple[str, Callable[[], bool]]] = [
        ("quadric table", lambda: _same_table("quadric", TABLES)),
        ("cubic table", lambda: _same_table("cubic", TABLES)),
        ("quartic table", lambda: _same_table("quartic", TABLES)),
        ("printed polynomial identity", lambda: bounds.compare_with_printed() == []),
        ("q restricted to j=0 is p", lambda: bounds.p_polynomial().total_degree() == 8),
        ("search never beats tables on small grid", _search_check),
        ("raise_type closed form = iterated", _raise_check),
        ("quadric in P^3 contains a line", _line_check),
    ]
    rows = []
    ok_all = True
    for name, fn in checks:
        try:
            ok = bool(fn())
        except Exception as exc:  # report, do not crash the suite
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok_all = ok_all and ok
        rows.append({"check": name, "passed": ok})
    if args.format == "json":
        return json.dumps({"passed": ok_all, "checks": rows}, indent=2), 0 if ok_all else 1
    text = "\n".join(f"{'PASS' if r['passed'] else 'FAIL'}  {r['check']}" for r in rows)
    return text, 0 if ok_all else 1


def _same_table(kind: str, tables) -> bool:
    return [list(r) for r in bounds.table_values(kind)] == [list(r) for r in tables[kind]]


def _search_check() -> bool:
    for m2 in range(5):
        for m3 in range(4):
            for m4 in range(3):
                q = bounds.BoundQuery(0, m2, m3, m4)
                if bounds.fj_search(q).value > bounds.fj_bound(q).value:
                    return False
    return True


def _raise_check() -> bool:
    for m in [(0, 1), (0, 0, 1, 1), (2, 3, 1), (1, 0, 0, 2)]:
        for j in range(5):
            t = typecalc.TypeVector(m)
            if typecalc.raise_type(t, j) != typecalc.raise_type_once_iterated(t, j):
                return False
    return True


def _line_check() -> bool:
    S = FormSystem.from_json({"ambient_dim": 3, "forms": ["z0*z3 - z1*z2"]})
    field = make_field("finite", p=7)
    out = find_linear_subspace(S, 1, field, seed=0)
    return verify_point(S, out).passed


# ---------------------------------------------------------------------------
# parser


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS, help="output format (default text)")
    common.add_argument("--seed", type=_nonneg, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument(
        "--precision", type=_positive, default=argparse.SUPPRESS,
        help=f"decimal digits for numeric work (default ${PRECISION_ENV} or 50)",
    )

    parser = argparse.ArgumentParser(
        prog="obliteration",
        description="Bounds, polar cones and solvable points for systems of forms of degree <= 4.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("type", parents=[common], help="type / degree vector operations")
    p.add_argument("op", choices=["add", "concat", "of", "raise", "raise-deg", "norm"])
    p.add_argument("vectors", nargs="+", help='vectors like "(0,1,1)" or "2,3"')
    p.add_argument("--j", type=_nonneg, default=1)
    p.set_defaults(func=cmd_type)

    p = sub.add_parser("bound", parents=[common], help="bound f_j(m2,m3,m4)")
    for name in ("j", "m2", "m3", "m4"):
        p.add_argument(f"--{name}", type=_nonneg, default=0)
    p.add_argument("--mode", choices=["closed", "search"], default="closed")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("table", parents=[common], help="bound tables by form degree")
    p.add_argument("--kind", choices=list(bounds.KINDS), required=True)
    p.add_argument("--j-max", type=_nonneg, default=8)
    p.add_argument("--m-max", type=_positive, default=8)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("qpoly", parents=[common], help="the bounding polynomial q (or p)")
    p.add_argument("--which", choices=["q", "p", "printed"], default="q")
    p.add_argument("--at", help="evaluate at comma-separated values")
    p.add_argument("--coeff", help="coefficient of a monomial such as m4^8 or j*m4^7")
    p.add_argument("--compare", action="store_true", help="compare the expansion with the printed polynomial")
    p.set_defaults(func=cmd_qpoly)

    p = sub.add_parser("compare", parents=[common], help="compare with earlier bounds")
    p.add_argument("--degree", type=int, choices=[2, 3, 4], required=True)
    p.add_argument("--m", type=_positive, required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("polar", parents=[common], help="iterated polar cone of a system")
    p.add_argument("--system", required=True, help="FormSystem JSON file")
    p.add_argument("--points", required=True, help='points like "1,0,0,0; 0,1,0,0"')
    p.add_argument("--iterate", type=_nonneg, help="number of points to use (default all)")
    p.add_argument("--restrict", action="store_true", help="cut with a complementary plane and eliminate linear forms")
    p.set_defaults(func=cmd_polar)

    p = sub.add_parser("solve", parents=[common], help="find a point or j-plane")
    p.add_argument("--system", required=True)
    p.add_argument("--mode", choices=["numeric", "finite"], default="numeric")
    p.add_argument("--p", type=int, default=5, help="characteristic in finite mode")
    p.add_argument("--plane", type=_nonneg, default=0, help="find a j-plane instead of a point")
    p.add_argument("--retries", type=_positive, default=10)
    p.add_argument("--tolerance", type=float, default=None, help="relative residual bound (default 10^-(precision/2))")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="evaluate a radical certificate")
    p.add_argument("--cert", required=True, help="certificate JSON or a solve output")
    p.add_argument("--system", help="also check the points against this system")
    p.add_argument("--tolerance", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", parents=[common], help="golden tables and identities")
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.format = getattr(args, "format", "text")
        args.seed = getattr(args, "seed", 0)
        if not hasattr(args, "precision"):
            args.precision = _default_precision()
        if args.precision < 10:
            raise UsageError("--precision must be at least 10")
        if hasattr(args, "tolerance") and args.tolerance is None:
            args.tolerance = 10.0 ** (-(args.precision // 2))
        text, code = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except ComputationFailed as exc:
        print(f"error: {exc}", file=err)
        return 1
    print(text, file=out)
    return code


def main() -> None:
    sys.exit(run())
