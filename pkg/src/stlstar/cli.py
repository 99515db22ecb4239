"""``stlstar`` command-line tool.

Exit codes: 0 SAT, 1 UNSAT, 2 BOUNDARY, 3 signal too short, 4 formula error,
5 usage error, 6 bad input file or other failure.  ``oracle-diff`` exits 0
when engine and oracle agree and 1 otherwise.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import geometry as geo
from .formula import FormulaError, SignalSchema, depth, desugar, parse, pretty, required_length, size
from .oracle import GridSpec, compare, default_grid, dump_json, dump_pgm, grid_eval
from .satset import MonitorReport, ShortSignalError, Verdict, monitor
from .signal import SignalError, check_length, load_csv
from .simulate import IntegrationError, RepressilatorParams, integrate, load_grid, sweep, sweep_csv
from .svg import render_region

EXIT = {Verdict.SAT: 0, Verdict.UNSAT: 1, Verdict.BOUNDARY: 2}
EXIT_SHORT, EXIT_FORMULA, EXIT_USAGE, EXIT_INPUT = 3, 4, 5, 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _formula_text(args) -> str:
    if args.formula_file:
        lines = Path(args.formula_file).read_text().splitlines()
        return " ".join(ln for ln in lines if not ln.lstrip().startswith("#")).strip()
    return args.expr


def _add_formula(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("-e", "--expr", help="formula text")
    g.add_argument("-f", "--formula-file", help="file holding the formula")


def _write(out: str | None, data: str | bytes) -> None:
    if out is None or out == "-":
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
        else:
            sys.stdout.write(data)
        return
    Path(out).write_bytes(data if isinstance(data, bytes) else data.encode())


def _load(args):
    s = load_csv(args.signal)
    f = parse(_formula_text(args), s.schema)
    return s, f


def _report_json(rep: MonitorReport, s, f, timing: bool, regions: bool) -> dict:
    stats = {k: v for k, v in rep.stats.items() if timing or k != "wall_ms"}
    out = {
        "verdict": rep.verdict.value,
        "closed_membership": rep.closed_verdict,
        "required_length": float(required_length(f)),
        "signal_length": float(s.length),
        "stats": stats,
    }
    if rep.short is not None:
        out["warning"] = str(rep.short)
    if regions:
        out["nodes"] = [n.to_json() for n in rep.nodes]
    return out


def cmd_check(args) -> int:
    text = _formula_text(args)
    s = load_csv(args.signal) if args.signal else None
    if s is not None:
        schema = s.schema
    else:
        schema = SignalSchema(args.vars.split(",") if args.vars else _guess_schema(text))
    f = parse(text, schema)
    info = {
        "formula": pretty(f, schema),
        "core": pretty(desugar(f), schema),
        "required_length": float(required_length(f)),
        "size": size(f),
        "depth": depth(f),
    }
    code = 0
    if s is not None:
        ok = check_length(s, f)
        info["signal_length"] = float(s.length)
        info["long_enough"] = bool(ok)
        if not ok:
            code = EXIT_SHORT
    if args.json:
        print(json.dumps(info, indent=2, sort_keys=True))
    else:
        for k, v in info.items():
            print(f"{k}: {v}")
    return code


def _guess_schema(text: str) -> list[str]:
    names = []
    for tok in re.findall(r"[A-Za-z_][A-Za-z0-9_]*", text):
        if tok not in ("F", "G", "U", "true", "false") and tok not in names:
            names.append(tok)
    return names or ["x"]


def cmd_monitor(args) -> int:
    s, f = _load(args)
    rep = monitor(s, f, keep_intermediate=args.regions, eps=args.eps, allow_short=args.allow_short)
    if args.json:
        print(json.dumps(_report_json(rep, s, f, args.timing, args.regions), indent=2, sort_keys=True))
    else:
        print(f"verdict: {rep.verdict.value}")
        print(f"required length: {float(required_length(f)):g} (signal {float(s.length):g})")
        print(f"polygons (peak): {rep.stats['polygons_peak']}")
        if args.timing:
            print(f"wall time: {rep.stats['wall_ms']:.1f} ms")
    return EXIT[rep.verdict]


def cmd_simulate(args) -> int:
    p = RepressilatorParams(alpha=args.alpha, alpha0=args.alpha0, beta=args.beta, n=args.n,
                            t_end=args.t_end, dt=args.dt, samples=args.samples,
                            init=tuple(float(v) for v in args.init.split(",")))
    _write(args.output, integrate(p).to_csv())
    return 0


def cmd_sweep(args) -> int:
    formulas = [ln.strip() for ln in Path(args.formulas).read_text().splitlines()
                if ln.strip() and not ln.lstrip().startswith("#")]
    rows = sweep(load_grid(args.grid), formulas)
    _write(args.output, sweep_csv(rows))
    return 0


def cmd_render(args) -> int:
    s, f = _load(args)
    rep = monitor(s, f, keep_intermediate=True, eps=args.eps, allow_short=args.allow_short, prune=False)
    if args.list_nodes:
        for n in rep.nodes:
            print(f"{n.id}\t{n.text}")
        return 0
    try:
        node = rep.node(args.node)
    except (KeyError, ValueError):
        raise UsageError(f"unknown node {args.node!r}; use --list-nodes") from None
    _write(args.output, render_region(node.region, node.text))
    return 0


def cmd_refine(args) -> int:
    if args.factor < 1:
        raise UsageError("--factor must be at least 1")
    _write(args.output, load_csv(args.signal).refine(args.factor).to_csv())
    return 0


def _corrupt(region: geo.Region) -> geo.Region:
    # test hook: flip the set so the oracle comparison must fail
    return geo.complement(region)


def cmd_oracle_diff(args) -> int:
    s, f = _load(args)
    if args.delta is not None and args.delta <= 0:
        raise UsageError("--delta must be positive")
    g = GridSpec(args.delta) if args.delta is not None else default_grid(s)
    rep = monitor(s, f, eps=args.eps, prune=False)
    region = _corrupt(rep.root) if args.corrupt else rep.root
    diffs = compare(s, f, g, region)
    if args.dump:
        m, ts = grid_eval(s, f, g)
        _write(args.dump, dump_pgm(m) if args.dump.endswith(".pgm") else dump_json(m, ts))
    if args.json:
        print(json.dumps({"delta": str(g.delta), "disagreements": len(diffs),
                          "points": [list(d) for d in diffs[: args.limit]]}, indent=2))
    else:
        print(f"lattice step {float(g.delta):g}: {len(diffs)} disagreement(s)")
        for t, ts_, o, e in diffs[: args.limit]:
            print(f"  t={t:g} t*={ts_:g} oracle={o} engine={e}")
    return 0 if not diffs else 1


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="stlstar", description="Offline monitoring of STL* formulas over piecewise-linear signals.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def signal_cmd(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("-s", "--signal", required=True, help="signal CSV (time,var1,...)")
        _add_formula(p)
        p.add_argument("--eps", type=float, default=None, help="geometric tolerance (default 1e-9 * length)")
        return p

    p = sub.add_parser("check", help="parse a formula and report its static properties")
    _add_formula(p)
    p.add_argument("-s", "--signal", help="signal CSV to check the formula against")
    p.add_argument("--vars", help="comma-separated variable names when no signal is given")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = signal_cmd("monitor", "decide whether the signal satisfies the formula")
    p.add_argument("--allow-short", action="store_true", help="monitor a too-short signal with a warning")
    p.add_argument("--json", action="store_true")
    p.add_argument("--regions", action="store_true", help="include every node's set in the JSON report")
    p.add_argument("--timing", action="store_true", help="report wall-clock time")
    p.set_defaults(func=cmd_monitor)

    p = sub.add_parser("simulate", help="integrate the repressilator model to a signal CSV")
    p.add_argument("--alpha", type=float, default=400.0)
    p.add_argument("--alpha0", type=float, default=0.2)
    p.add_argument("--beta", type=float, default=0.2)
    p.add_argument("--n", type=float, default=2.0)
    p.add_argument("--t-end", type=float, default=300.0)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--samples", type=int, default=80)
    p.add_argument("--init", default="0.1,0.3,0.2,0.2,0.1,0.3", help="m1,m2,m3,p1,p2,p3")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="monitor formulas over a grid of model parameters")
    p.add_argument("--grid", required=True, help="CSV with columns among alpha,alpha0,beta,n,t_end,dt,samples")
    p.add_argument("--formulas", required=True, help="text file with one formula per line")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = signal_cmd("render", "plot a node's satisfaction set as SVG")
    p.add_argument("--node", default="root", help="node id or 'root'")
    p.add_argument("--list-nodes", action="store_true")
    p.add_argument("--allow-short", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("refine", help="insert interpolated samples into every segment")
    p.add_argument("-s", "--signal", required=True)
    p.add_argument("--factor", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_refine)

    p = signal_cmd("oracle-diff", "compare the engine against the lattice oracle")
    p.add_argument("--delta", type=Fraction, default=None, help="lattice step (default: shortest segment / 8)")
    p.add_argument("--dump", help="write the oracle matrix to FILE (.pgm or .json)")
    p.add_argument("--limit", type=int, default=20, help="disagreements to print")
    p.add_argument("--json", action="store_true")
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_oracle_diff)
    return ap


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _show_warning
            return args.func(args)
    except ShortSignalError as exc:
        print(f"error: {exc} (use --allow-short to monitor anyway)", file=sys.stderr)
        return EXIT_SHORT
    except FormulaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMULA
    except UsageError as exc:
        print(f"stlstar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SignalError, IntegrationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
