"""Command-line entry point.

Output is machine-first: JSON documents, CSV tables and graph6 lines.
``--pretty`` switches to short human-readable summaries.  Exit codes:
0 success, 2 bad flags or input, 3 capacity or budget exhausted, 4 internal
invariant breach.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Iterable, TextIO

from .analyze import audit
from .enumerate import EnumSpec, enumerate_connected, records_to_csv, verify_table
from .errors import FanFreeError, ParameterError
from .graph import Graph, GraphFamily, construct, extremal_graph, from_graph6, read_graph6_lines, to_graph6
from .optimize import local_search
from .patterns import contains_fan
from .spectral import DEFAULT_TOL, conjecture_bound, spectral_radius


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse already exits with 2; keep that but route through our handler
        raise ParameterError(f"{self.prog}: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, allow_nan=False)


def _graphs(args) -> list[Graph]:
    if args.g6 is not None and args.input is not None:
        raise ParameterError("give either --g6 or --input, not both")
    if args.g6 is not None:
        return [from_graph6(args.g6)]
    if args.input is None:
        raise ParameterError("one of --g6 or --input is required")
    if args.input == "-":
        return read_graph6_lines(sys.stdin)
    try:
        with open(args.input) as fh:
            return read_graph6_lines(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read {args.input}: {exc}") from None


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise ParameterError(f"--tol must be positive, got {tol}")


def _check_jobs(jobs: int) -> None:
    if jobs < 1:
        raise ParameterError(f"--jobs must be >= 1, got {jobs}")


# -- commands -----------------------------------------------------------


def cmd_construct(args, out: TextIO) -> None:
    if args.family == "extremal":
        if len(args.params) != 2:
            raise ParameterError("extremal takes 2 parameters: k,m")
        g = extremal_graph(*args.params)
    else:
        g = construct(GraphFamily(args.family, tuple(args.params)))
    if args.pretty:
        out.write(f"{args.family}({','.join(map(str, args.params))}): n={g.n} m={g.m}\n")
    out.write(to_graph6(g) + "\n")


def cmd_lambda(args, out: TextIO) -> None:
    _check_tol(args.tol)
    for g in _graphs(args):
        cert = spectral_radius(g, args.tol)
        if args.pretty:
            out.write(f"lambda in [{cert.lambda_lo!r}, {cert.lambda_hi!r}] "
                      f"(width {cert.width:.3g}, {cert.iterations} iterations)\n")
        else:
            out.write(_dump(cert.to_dict()) + "\n")


def cmd_fanfree(args, out: TextIO) -> None:
    if args.k < 3:
        raise ParameterError(f"--k must be >= 3, got {args.k}")
    for g in _graphs(args):
        w = contains_fan(g, args.k)
        doc = {"k": args.k, "verdict": "contains" if w else "free",
               "witness": w.to_dict() if w else None}
        if args.pretty:
            line = f"F_{args.k}: {doc['verdict']}"
            if w:
                line += f" (hub {w.hub}, path {'-'.join(map(str, w.path))})"
            out.write(line + "\n")
        else:
            out.write(_dump(doc) + "\n")


def cmd_bound(args, out: TextIO) -> None:
    value = conjecture_bound(args.k, args.m)
    if args.pretty:
        out.write(f"bound(k={args.k}, m={args.m}) = {value!r}\n")
    else:
        out.write(repr(value) + "\n")


def cmd_enumerate(args, out: TextIO) -> None:
    _check_jobs(args.jobs)
    spec = EnumSpec(m=args.m, k=args.k, n_min=args.n_min, n_max=args.n_max,
                    connected_only=not args.disconnected)
    sink = out if args.output is None else open(args.output, "w")
    try:
        count = enumerate_connected(spec, lambda g: sink.write(to_graph6(g) + "\n"), jobs=args.jobs)
    finally:
        if sink is not out:
            sink.close()
    if args.pretty:
        sys.stderr.write(f"{count} classes\n")


def cmd_search(args, out: TextIO) -> None:
    _check_jobs(args.jobs)
    _check_tol(args.tol)
    rep = local_search(args.m, args.k, restarts=args.restarts, budget=args.budget,
                       seed=args.seed, jobs=args.jobs, tol=args.tol)
    if args.pretty:
        out.write(f"m={rep.m} F_{rep.k}-free best {to_graph6(rep.best)} (n={rep.best.n}) "
                  f"lambda in [{rep.certificate.lambda_lo!r}, {rep.certificate.lambda_hi!r}]; "
                  f"{rep.restarts_used} restarts, {rep.moves_accepted} moves\n")
    else:
        out.write(_dump(rep.to_dict()) + "\n")


def cmd_analyze(args, out: TextIO) -> None:
    _check_tol(args.tol)
    if args.k < 3:
        raise ParameterError(f"--k must be >= 3, got {args.k}")
    for g in _graphs(args):
        a = audit(g, args.k, args.tol)
        if args.pretty:
            d = a.decomposition
            out.write(f"m={a.m} lambda in [{a.lambda_lo!r}, {a.lambda_hi!r}] u*={d.u_star} "
                      f"|U|={len(d.U)} |W|={len(d.W)} e(U)={d.e_U} e(W)={d.e_W}\n")
            for c in d.components:
                out.write(f"  {c.shape} on {c.vertices}: gamma={c.gamma:.6g}\n")
            for c in a.lemmas:
                out.write(f"  {'ok  ' if c.holds else 'FAIL'} {c.name} ({c.residual:.6g})\n")
        else:
            out.write(_dump(a.to_dict()) + "\n")


def cmd_verify(args, out: TextIO) -> None:
    _check_jobs(args.jobs)
    if not args.m:
        raise ParameterError("--m needs at least one value")
    records = verify_table(args.k, args.m, fan=args.fan, jobs=args.jobs, restarts=args.restarts,
                           budget=args.budget, seed=args.seed)
    if args.format == "json":
        out.write(_dump([r.to_dict() for r in records]) + "\n")
    elif args.pretty:
        for r in records:
            mx = ", ".join(x.graph6 for x in r.maximizers)
            out.write(f"m={r.m}: lambda <= {r.lambda_hi:.10f} vs bound {r.bound:.10f} "
                      f"[{'ok' if r.satisfies_bound else 'EXCEEDS'}] {r.method}: {mx}\n")
    else:
        out.write(records_to_csv(records))


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output")

    graph_in = _Parser(add_help=False)
    graph_in.add_argument("--g6", help="graph in graph6 format")
    graph_in.add_argument("--input", help="file of graph6 lines ('-' for stdin)")

    p = _Parser(prog="fanfree", description="Spectral Turan workbench for fan-free graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="build a named graph")
    c.add_argument("--family", required=True,
                   help="complete, path, cycle, star, star_plus_edge, double_star, fan, empty, "
                        "complete_bipartite, or extremal (params k,m)")
    c.add_argument("--params", type=_int_list, default=[], help="comma-separated integers")
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("lambda", parents=[common, graph_in], help="certified spectral radius")
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.set_defaults(func=cmd_lambda)

    c = sub.add_parser("fanfree", parents=[common, graph_in], help="test for an F_k subgraph")
    c.add_argument("--k", type=int, required=True, help="fan order")
    c.set_defaults(func=cmd_fanfree)

    c = sub.add_parser("bound", parents=[common], help="(k-1+sqrt(4m-k^2+1))/2")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.set_defaults(func=cmd_bound)

    c = sub.add_parser("enumerate", parents=[common], help="graph6 of each isomorphism class")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--k", type=int, default=None, help="restrict to F_k-free graphs")
    c.add_argument("--n-min", type=int, default=None)
    c.add_argument("--n-max", type=int, default=None)
    c.add_argument("--disconnected", action="store_true", help="include disconnected graphs")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--output", help="write graph6 lines here instead of stdout")
    c.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("search", parents=[common], help="hill climbing over F_k-free graphs")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--k", type=int, required=True, help="fan order")
    c.add_argument("--restarts", type=int, default=20)
    c.add_argument("--budget", type=int, default=500)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.set_defaults(func=cmd_search)

    c = sub.add_parser("analyze", parents=[common, graph_in], help="decomposition and audit")
    c.add_argument("--k", type=int, default=6, help="fan order")
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.set_defaults(func=cmd_analyze)

    c = sub.add_parser("verify", parents=[common], help="bound check table")
    c.add_argument("--k", type=int, required=True, help="bound index; fan order defaults to 2k+2")
    c.add_argument("--m", type=_int_list, required=True, help="comma-separated edge counts")
    c.add_argument("--fan", type=int, default=None, help="fan order (2k+1 or 2k+2)")
    c.add_argument("--format", choices=["csv", "json"], default="csv")
    c.add_argument("--restarts", type=int, default=20)
    c.add_argument("--budget", type=int, default=500)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--jobs", type=int, default=1)
    c.set_defaults(func=cmd_verify)
    return p


def run(argv: Iterable[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(None if argv is None else list(argv))
        args.func(args, out)
    except FanFreeError as exc:
        err.write(f"fanfree: error: {exc}\n")
        return exc.exit_code
    return 0


def main(argv: Iterable[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
