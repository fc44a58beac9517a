"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 convergence failure.
"""

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .dea import INPUT, OUTPUT, evaluate_all
from .exceptions import ConvergenceFailure, DataError, DEAError, InputError
from .improve import KEPT, improve_frontier
from .io import RunConfig, dataset_to_csv, load_config, load_csv, table_text, write_csv
from .sections import KINDS, S1, S2, SectionSpec, format_polyline, projections, section_polyline
from .synth import SynthSpec, generate_synthetic
from .terminal import find_terminal_units

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CONVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_eff(args):
    data = load_csv(args.input)
    evals = evaluate_all(data)
    header = ["id", "score"] + [f"s_x{k + 1}" for k in range(data.m)] + [f"s_y{i + 1}" for i in range(data.r)] + ["class"]
    rows = []
    for ev in evals:
        res = ev.input if args.orientation == INPUT else ev.output
        if res is None:
            rows.append([ev.unit_id, "nan"] + ["nan"] * (data.m + data.r) + [ev.unit_class])
            continue
        rows.append([ev.unit_id, res.score, *res.input_slacks, *res.output_slacks, ev.unit_class])
    _emit(table_text(header, rows), args.out)
    return EXIT_OK


def cmd_classify(args):
    data = load_csv(args.input)
    evals = evaluate_all(data)
    header = ["id", "class", "theta", "eta", "weak_input", "weak_output", "zero_output"]
    zero = set(data.zero_output_rows.tolist())
    rows = [
        [ev.unit_id, ev.unit_class, ev.theta, ev.eta, ev.weak_input, ev.weak_output, j in zero]
        for j, ev in enumerate(evals)
    ]
    _emit(table_text(header, rows), args.out)
    counts = {}
    for ev in evals:
        counts[str(ev.unit_class)] = counts.get(str(ev.unit_class), 0) + 1
    inefficient = [ev for ev in evals if not ev.unit_class.efficient]
    weak = sum(ev.weak_projection for ev in inefficient)
    summary = " ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    print(f"# {summary} weak_projections={weak}/{len(inefficient)}", file=sys.stderr)
    return EXIT_OK


def cmd_terminal(args):
    data = load_csv(args.input)
    report = find_terminal_units(data)
    rows = [[uid, bool(dirs), ";".join(str(d) for d in dirs)] for uid, dirs in report.directions.items()]
    _emit(table_text(["id", "terminal", "directions"], rows), args.out)
    return EXIT_OK


def _parse_axes(text, kind, m, r):
    try:
        a, b = (int(v) - 1 for v in text.split(","))
    except ValueError:
        raise UsageError(f"--axes expects two 1-based indices like '1,2', got {text!r}") from None
    spec_axes = (a, b)
    limits = {S1: (m, m), S2: (r, r)}.get(kind, (m, r))
    if not (0 <= a < limits[0] and 0 <= b < limits[1]):
        raise UsageError(f"--axes {text} out of range for {kind} with {m} inputs and {r} outputs")
    return spec_axes


def cmd_section(args):
    data = load_csv(args.input)
    try:
        j = data.index(args.base)
    except InputError as exc:
        raise UsageError(str(exc)) from None
    a, b = _parse_axes(args.axes, args.kind, data.m, data.r)
    spec = SectionSpec(data.point(j), args.kind, a, b)
    poly = section_polyline(data, spec, args.samples)
    annex = projections(data, spec, exclude={args.base}) if args.annex else None
    _emit(format_polyline(poly, args.base, data.m, annex), args.out)
    return EXIT_OK


def _report_rows(result):
    rows = []
    for uid, b in result.before.items():
        a = result.after.get(uid)
        rows.append([uid, b.unit_class, b.theta, b.eta, b.weak_projection, a.unit_class, a.theta, a.eta, a.weak_projection])
    return rows


_REPORT_HEADER = [
    "id", "class_before", "theta_before", "eta_before", "weak_before",
    "class_after", "theta_after", "eta_after", "weak_after",
]


def _write_improve_outputs(out_dir, result):
    out_dir.mkdir(parents=True, exist_ok=True)
    prov = {a.unit_id: a.provenance for a in result.artificials if a.status == KEPT}
    (out_dir / "improved.csv").write_text(dataset_to_csv(result.improved, prov))
    (out_dir / "run.log").write_text("".join(f"{rec}\n" for rec in result.logs))
    (out_dir / "report.csv").write_text(table_text(_REPORT_HEADER, _report_rows(result)))
    art_rows = [[a.unit_id, a.provenance, a.offset, a.status, *a.point.x, *a.point.y] for a in result.artificials]
    m = result.improved.m
    r = result.improved.r
    header = ["id", "provenance", "offset", "status"] + [f"x{k + 1}" for k in range(m)] + [f"y{i + 1}" for i in range(r)]
    (out_dir / "artificials.csv").write_text(table_text(header, art_rows))


def cmd_improve(args):
    data = load_csv(args.input)
    config = load_config(args.config) if args.config else RunConfig()
    out_dir = Path(args.out_dir)
    try:
        result = improve_frontier(data, config.params)
    except ConvergenceFailure as exc:
        if exc.partial is not None:
            _write_improve_outputs(out_dir, exc.partial)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    _write_improve_outputs(out_dir, result)
    kept = len(result.kept)
    weak = sum(s.weak_projection for s in result.after.values())
    print(f"# inserted={kept} remaining_weak_projections={weak} candidates={result.candidates}", file=sys.stderr)
    return EXIT_OK


def cmd_synth(args):
    spec = SynthSpec(n=args.units, m=args.inputs, r=args.outputs, seed=args.seed, rho=args.rho)
    write_csv(generate_synthetic(spec), args.out)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="dea-frontier", description="BCC efficiency analysis and frontier improvement.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eff", help="efficiency scores and slacks")
    p.add_argument("--input", required=True)
    p.add_argument("--orientation", choices=(INPUT, OUTPUT), default=INPUT)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eff)

    p = sub.add_parser("classify", help="unit classes and weak-projection flags")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("terminal", help="terminal units and their directions")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_terminal)

    p = sub.add_parser("section", help="two-dimensional section of the frontier")
    p.add_argument("--input", required=True)
    p.add_argument("--base", required=True, help="id of the unit the plane passes through")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--axes", required=True, help="1-based axes, e.g. 1,2 (S3: input,output)")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--annex", action="store_true", help="append projections of the other units")
    p.add_argument("--out")
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("improve", help="insert artificial units and certify the result")
    p.add_argument("--input", required=True)
    p.add_argument("--config")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_improve)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--units", type=int, required=True)
    p.add_argument("--inputs", type=int, required=True)
    p.add_argument("--outputs", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--rho", type=float, default=0.8)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def run_command(argv=None):
    """Run the CLI and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
        if getattr(args, "samples", 2) < 2:
            raise UsageError("--samples must be at least 2")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InputError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except DEAError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
