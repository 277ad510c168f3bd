"""Command line interface: ``oss solve | compare | check-axioms | search-counterexample | demo``.

Exit codes: 0 success, 1 usage or input error, 2 non-convergence,
verification failure, or demo mismatch.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import knuth_yao, lawcheck, solver
from .errors import OSSError
from .fileformat import parse_distribution, parse_file
from .freemod import hh_compare
from .lawcheck import LawReport
from .semiring import parse_semiring

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _color(stream) -> bool:
    return os.environ.get("OSS_COLOR", "1") != "0" and hasattr(stream, "isatty") and stream.isatty()


def render_table(headers, rows, stream=None) -> str:
    stream = stream or sys.stdout
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    fmt = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()  # noqa: E731
    head = fmt(cells[0])
    if _color(stream):
        head = f"\x1b[1m{head}\x1b[0m"
    lines = [head, "  ".join("-" * w for w in widths)]
    lines += [fmt(r) for r in cells[1:]]
    return "\n".join(lines)


def _decimal(w) -> str:
    if isinstance(w, tuple):
        return "(" + ",".join(_decimal(c) for c in w) + ")"
    if isinstance(w, Fraction) or isinstance(w, int):
        return f"{float(w):.12g}"
    return str(w)


def _tol(text: str) -> Fraction:
    try:
        t = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if t < 0:
        raise argparse.ArgumentTypeError("tolerance must be nonnegative")
    return t


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _solution_rows(report: solver.SolveReport, outputs, decimals: bool):
    P = report.semiring
    show = _decimal if decimals else P.format
    rows = []
    for x, theta in zip(report.states, report.solution):
        rows.append([x] + [show(theta(y)) for y in outputs])
    return rows


def _print_report(report, outputs, decimals, out):
    print(render_table(["state", *outputs], _solution_rows(report, outputs, decimals), out), file=out)
    info = [f"method: {report.method}", f"converged: {'yes' if report.converged else 'no'}"]
    if report.iterations is not None:
        info.append(f"iterations: {report.iterations}")
    if report.tol is not None:
        info.append(f"tol: {_decimal(report.tol)}")
    info.append(f"residual: {'exact' if report.max_residual == 0 else _decimal(report.max_residual)}")
    print("  ".join(info), file=out)
    if report.pivot_trace:
        print("pivots: " + ", ".join(f"{x}:{c}" for x, c in report.pivot_trace), file=out)


def cmd_solve(args, out) -> int:
    f = parse_file(_read(args.file))
    sysm = f.system if f.system is not None else solver.UnguardedSystem(f.semiring, (), f.outputs, (), ())
    report = solver.solve(sysm, args.method, tol=args.tol, max_iter=args.max_iter)
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=2), file=out)
    else:
        decimals = args.decimals or (report.method == "kleene" and not report.semiring.exact_iteration)
        _print_report(report, [str(y) for y in f.outputs.elements], decimals, out)
    return EXIT_OK if report.converged and report.residual_ok else EXIT_NUMERIC


def _upset(U) -> str:
    return "{" + ", ".join(sorted(map(str, U))) + "}"


def cmd_compare(args, out) -> int:
    f = parse_file(_read(args.file))
    left = parse_distribution(args.left, f.semiring, f.outputs)
    right = parse_distribution(args.right, f.semiring, f.outputs)
    relation, fwd, bwd = hh_compare(left, right, f.outputs)
    if args.format == "json":
        doc = {
            "relation": relation,
            "left_below_right": fwd.holds,
            "right_below_left": bwd.holds,
            "witnesses": {
                "left_not_below_right": sorted(map(str, fwd.witness)) if fwd.witness is not None else None,
                "right_not_below_left": sorted(map(str, bwd.witness)) if bwd.witness is not None else None,
            },
        }
        print(json.dumps(doc, indent=2), file=out)
        return EXIT_OK
    print(relation, file=out)
    if not fwd:
        print(f"  left not below right, witness up-set {_upset(fwd.witness)}", file=out)
    if not bwd:
        print(f"  right not below left, witness up-set {_upset(bwd.witness)}", file=out)
    return EXIT_OK


def _status(rep: LawReport, expect) -> str:
    if expect is None:
        return "info"
    return "ok" if rep.passed == expect else "FAIL"


def axiom_reports(instances, samples, seed):
    """All law reports plus expectations (True pass, False fail, None informational)."""
    rows = []
    for P in instances:
        for rep in lawcheck.run_all([P], samples, seed):
            rows.append((rep, True))
        anti = lawcheck.check_antisymmetry(P, None, samples, seed)
        if P.capabilities.cancellative:
            rows.append((anti, True))
        elif P.name == "bool2":
            rows.append((anti, False))
        else:
            rows.append((anti, None))
        if P.capabilities.idempotent:
            rows.append((lawcheck.check_idempotent_module(P, samples, seed), True))
    probe = lawcheck.check_fact3(instances[0], None, None, samples, seed, bind_fn=lawcheck.mutant_bind)
    probe.law = "fact3-under-mutant-bind"
    rows.append((probe, False if instances[0].capabilities.cancellative else None))
    return rows


def cmd_check_axioms(args, out) -> int:
    names = args.instances or list(lawcheck.SHIPPED)
    instances = [parse_semiring(n) for n in names]
    rows = axiom_reports(instances, args.samples, args.seed)
    if args.format == "json":
        doc = [r.to_json() | {"expected_pass": e, "status": _status(r, e)} for r, e in rows]
        print(json.dumps(doc, indent=2), file=out)
    else:
        table = [
            [r.law, r.instance, r.cases, r.failed, _status(r, e)] for r, e in rows
        ]
        print(render_table(["law", "instance", "cases", "failures", "status"], table, out), file=out)
    return EXIT_NUMERIC if any(_status(r, e) == "FAIL" for r, e in rows) else EXIT_OK


def cmd_search(args, out) -> int:
    result = lawcheck.search_counterexample(
        args.max_size, args.max_poset, args.max_support, probe_all=not args.only_unclassified
    )
    if args.format == "json":
        print(json.dumps(result.to_json(), indent=2), file=out)
        return EXIT_OK
    rows = [
        [s["name"], s["alias"] or "", s["size"], s["class"], s["cases"] if s["probed"] else "-", s["violations"]]
        for s in result.structures
    ]
    print(render_table(["structure", "alias", "size", "class", "cases", "violations"], rows, out), file=out)
    if result.certificate:
        print(
            f"exhausted: no violation over {len(result.structures)} structures "
            f"(size <= {args.max_size}, posets <= {args.max_poset}, support <= {args.max_support})",
            file=out,
        )
    for s in result.findings:
        print(f"finding {s['name']}: add={s['add']} mul={s['mul']} order={s['order']}", file=out)
        for w in s["witnesses"]:
            print(
                f"  poset {w['poset']} f={w['f']} theta1={w['theta1']} theta2={w['theta2']}"
                f" -> {w['ext1']} vs {w['ext2']}",
                file=out,
            )
    return EXIT_OK


def run_knuth_yao_demo(tol=Fraction(1, 10**9)):
    sysm = knuth_yao.build_system()
    t0 = time.perf_counter()
    exact = solver.solve_eliminate(sysm)
    elapsed = time.perf_counter() - t0
    approx = solver.solve_kleene(sysm, tol=tol)
    expected = knuth_yao.expected_solution()
    match = exact.solution == expected
    gap = max(
        abs(a(y) - b(y)) for a, b in zip(approx.solution, expected) for y in knuth_yao.FACES
    )
    agree = approx.converged and gap <= tol
    return exact, approx, match, agree, gap, elapsed


def cmd_demo(args, out) -> int:
    if args.name != "knuth-yao":
        print(f"unknown demo {args.name!r}", file=sys.stderr)
        return EXIT_INPUT
    exact, approx, match, agree, gap, elapsed = run_knuth_yao_demo()
    if args.format == "json":
        doc = {
            "eliminate": exact.to_json(),
            "kleene": approx.to_json(),
            "matches_table": match,
            "methods_agree": agree,
            "max_gap": str(gap),
        }
        print(json.dumps(doc, indent=2), file=out)
    else:
        print("Knuth-Yao die from fair coin flips, least solution (eliminate):", file=out)
        _print_report(exact, list(knuth_yao.FACES), False, out)
        masses = ", ".join(f"{x}={exact.semiring.format(sum(t.weights()))}" for x, t in zip(exact.states, exact.solution))
        print(f"row masses: {masses}", file=out)
        print(f"eliminate time: {elapsed * 1000:.2f} ms", file=out)
        print(
            f"kleene (tol 1e-9): {approx.iterations} iterations, max gap {_decimal(gap)}", file=out
        )
        print(f"exact table match: {'yes' if match else 'NO'}", file=out)
        print(f"methods agree: {'yes' if agree else 'NO'}", file=out)
    return EXIT_OK if match and agree else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="oss", description="Free modules over ordered semirings and least solutions of unguarded systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="least solution of a system file")
    s.add_argument("file")
    s.add_argument("--method", choices=("auto", "eliminate", "kleene"), default="auto")
    s.add_argument("--tol", type=_tol, default=None, help="Kleene stopping tolerance, e.g. 1e-9")
    s.add_argument("--max-iter", type=int, default=solver.DEFAULT_MAX_ITER)
    s.add_argument("--format", choices=("table", "json"), default="table")
    s.add_argument("--decimals", action="store_true", help="show weights as decimals")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("compare", help="heavier-higher comparison of two distributions")
    c.add_argument("file")
    c.add_argument("left")
    c.add_argument("right")
    c.add_argument("--format", choices=("table", "json"), default="table")
    c.set_defaults(func=cmd_compare)

    a = sub.add_parser("check-axioms", help="run the law suites")
    a.add_argument("instances", nargs="*", help=f"semirings (default: {', '.join(lawcheck.SHIPPED)})")
    a.add_argument("--samples", type=int, default=1000)
    a.add_argument("--seed", type=lambda t: int(t, 0), default=0xC0FFEE)
    a.add_argument("--format", choices=("table", "json"), default="table")
    a.set_defaults(func=cmd_check_axioms)

    q = sub.add_parser("search-counterexample", help="probe small finite ordered semirings")
    q.add_argument("--max-size", type=int, default=3)
    q.add_argument("--max-poset", type=int, default=4)
    q.add_argument("--max-support", type=int, default=3)
    q.add_argument("--only-unclassified", action="store_true")
    q.add_argument("--format", choices=("table", "json"), default="table")
    q.set_defaults(func=cmd_search)

    d = sub.add_parser("demo", help="built-in demonstrations")
    d.add_argument("name", choices=("knuth-yao",))
    d.add_argument("--format", choices=("table", "json"), default="table")
    d.set_defaults(func=cmd_demo)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except OSSError as exc:
        print(f"oss: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"oss: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
