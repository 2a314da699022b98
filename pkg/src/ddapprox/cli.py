"""Command-line benchmark harness.

Subcommands: generate (write a random circuit file), sweep (trade-off
curve CSV for one strategy), compare-lsh (exhaustive vs LSH matching on
the same grid), plot (gnuplot script from sweep CSV). Exit codes: 0 on
success, 2 for circuit/CSV parse problems, 3 for simulation failures,
4 for file I/O failures.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import circuits, simulate
from .contribution import compute_contributions
from .dd import DecisionDiagram
from .replace import MATCH_EXHAUSTIVE, MATCH_LSH
from .sweep import (CSV_HEADER, MATCHER_REMOVAL, SweepRecord, csv_text,
                    default_fractions, lsh_comparable_fractions, rmse,
                    sweep_removal, sweep_strategy)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SIM = 3
EXIT_IO = 4


def _read_text(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_circuit(args) -> circuits.Circuit:
    if args.circuit:
        return circuits.parse_grcs(_read_text(args.circuit))
    if args.rows is None or args.cols is None or args.depth is None:
        raise argparse.ArgumentTypeError("need --circuit or --rows/--cols/--depth")
    return circuits.generate_supremacy(args.rows, args.cols, args.depth, args.seed)


def _base_state(circuit: circuits.Circuit):
    """Simulate once; return (diagram, dense reference or None)."""
    dd = simulate.simulate_circuit(circuit)
    reference = None
    if circuit.qubit_count <= simulate.MAX_DENSE_QUBITS:
        reference = dd.to_statevector()
    else:
        print(f"note: {circuit.qubit_count} qubits, reporting predicted fidelity only",
              file=sys.stderr)
    return dd, reference


def _fractions(args) -> list[float]:
    if args.fractions:
        return [float(tok) for tok in args.fractions.split(",") if tok.strip()]
    return default_fractions(args.points)


def cmd_generate(args) -> int:
    circuit = circuits.generate_supremacy(args.rows, args.cols, args.depth, args.seed)
    _write_text(args.out, circuits.serialize_grcs(circuit))
    return EXIT_OK


def cmd_sweep(args) -> int:
    circuit = _load_circuit(args)
    name = args.circuit or f"{args.rows}x{args.cols}_{args.depth}_{args.seed}"
    dd, reference = _base_state(circuit)
    fracs = _fractions(args)
    if args.strategy == MATCHER_REMOVAL:
        records = sweep_removal(dd, fracs, reference=reference,
                                benchmark=name, seed=args.seed)
    else:
        from .replace import StrategySpec
        spec = StrategySpec.from_label(args.strategy, 0.0, args.matcher)
        records = sweep_strategy(dd, spec.block_size, spec.block_count,
                                 args.matcher, fracs, reference=reference,
                                 benchmark=name, seed=args.seed)
    _write_text(args.out, csv_text(records))
    return EXIT_OK


def cmd_compare_lsh(args) -> int:
    circuit = _load_circuit(args)
    name = args.circuit or f"{args.rows}x{args.cols}_{args.depth}_{args.seed}"
    dd, reference = _base_state(circuit)
    fracs = _fractions(args)
    from .replace import StrategySpec
    spec = StrategySpec.from_label(args.strategy, 0.0)
    contributions = compute_contributions(dd)
    t0 = time.perf_counter()
    exh = sweep_strategy(dd, spec.block_size, spec.block_count, MATCH_EXHAUSTIVE,
                         fracs, reference=reference, benchmark=name,
                         seed=args.seed, contributions=contributions)
    t_exh = time.perf_counter() - t0
    t0 = time.perf_counter()
    lsh = sweep_strategy(dd, spec.block_size, spec.block_count, MATCH_LSH,
                         fracs, reference=reference, benchmark=name,
                         seed=args.seed, contributions=contributions)
    t_lsh = time.perf_counter() - t0
    lines = ["f,mem_ratio_exhaustive,mem_ratio_lsh,fid_exhaustive,fid_lsh"]
    for a, b in zip(exh, lsh):
        fid_a = a.fid_measured if a.fid_measured is not None else a.fid_predicted
        fid_b = b.fid_measured if b.fid_measured is not None else b.fid_predicted
        lines.append(f"{a.f:.12g},{a.mem_ratio:.12g},{b.mem_ratio:.12g},"
                     f"{fid_a:.12g},{fid_b:.12g}")
    feasible = set(lsh_comparable_fractions(dd, spec.block_size, fracs))
    kept = [(a, b) for a, b in zip(exh, lsh) if a.f in feasible]
    if kept:
        ratio_rmse = rmse([a.mem_ratio for a, _ in kept],
                          [b.mem_ratio for _, b in kept])
    else:
        ratio_rmse = float("nan")
    match_exh = sum(r.match_ms for r in exh)
    match_lsh = sum(r.match_ms for r in lsh)
    speedup = match_exh / match_lsh if match_lsh > 0 else float("inf")
    lines.append(f"# mem_ratio_rmse={ratio_rmse:.6g}")
    if len(kept) < len(exh):
        dropped = ",".join(f"{r.f:.12g}" for r in exh if r.f not in feasible)
        lines.append(f"# rmse_excluded_fractions={dropped} "
                     "(candidate pool smaller than the bucket cap)")
    lines.append(f"# match_ms_exhaustive={match_exh:.3f} match_ms_lsh={match_lsh:.3f} "
                 f"match_speedup={speedup:.3g}")
    lines.append(f"# wall_s_exhaustive={t_exh:.3f} wall_s_lsh={t_lsh:.3f}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _parse_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("input is not a sweep CSV (bad or missing header)")
    cols = CSV_HEADER.split(",")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(cols):
            raise ValueError(f"bad CSV row: {ln!r}")
        rows.append(dict(zip(cols, parts)))
    if not rows:
        raise ValueError("CSV contains no data rows")
    return rows


def cmd_plot(args) -> int:
    rows = _parse_csv(_read_text(args.csv))
    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        key = f"{row['N']}x{row['X']}/{row['matcher']}"
        if row["matcher"] == MATCHER_REMOVAL:
            key = MATCHER_REMOVAL
        fid = row["fid_measured"] or row["fid_predicted"]
        series.setdefault(key, []).append((float(fid), float(row["mem_ratio"])))
    lines = [
        "# ddapprox trade-off plot",
        "set xlabel 'fidelity'",
        "set ylabel 'memory ratio'",
        "set key left top",
        "set grid",
    ]
    names = sorted(series)
    for i, name in enumerate(names):
        lines.append(f"$data{i} << EOD")
        for fid, ratio in sorted(series[name]):
            lines.append(f"{fid:.12g} {ratio:.12g}")
        lines.append("EOD")
    plot_parts = [f"$data{i} using 1:2 with linespoints title '{name}'"
                  for i, name in enumerate(names)]
    lines.append("plot " + ", \\\n     ".join(plot_parts))
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddapprox",
        description="Decision-diagram simulation with node-replacement compression.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_grid(p):
        p.add_argument("--rows", type=int)
        p.add_argument("--cols", type=int)
        p.add_argument("--depth", type=int)
        p.add_argument("--seed", type=int, default=0)

    gen = sub.add_parser("generate", help="write a random circuit file")
    add_grid(gen)
    gen.add_argument("--out", default="-")
    gen.set_defaults(func=cmd_generate, rows=4, cols=4, depth=10)

    sweep = sub.add_parser("sweep", help="trade-off curve CSV for one strategy")
    add_grid(sweep)
    sweep.add_argument("--circuit", help="GRCS file (instead of --rows/--cols/--depth)")
    sweep.add_argument("--strategy", default="1x1",
                       help="NxX replacement strategy, or 'removal' for the baseline")
    sweep.add_argument("--matcher", choices=[MATCH_EXHAUSTIVE, MATCH_LSH],
                       default=MATCH_EXHAUSTIVE)
    sweep.add_argument("--fractions", help="comma-separated fractions (or budgets)")
    sweep.add_argument("--points", type=int, default=40,
                       help="grid size when --fractions is not given")
    sweep.add_argument("--out", default="-")
    sweep.set_defaults(func=cmd_sweep)

    cmp_ = sub.add_parser("compare-lsh", help="exhaustive vs LSH matching report")
    add_grid(cmp_)
    cmp_.add_argument("--circuit")
    cmp_.add_argument("--strategy", default="1x1")
    cmp_.add_argument("--fractions")
    cmp_.add_argument("--points", type=int, default=40)
    cmp_.add_argument("--out", default="-")
    cmp_.set_defaults(func=cmd_compare_lsh)

    plot = sub.add_parser("plot", help="gnuplot script from a sweep CSV")
    plot.add_argument("--csv", required=True)
    plot.add_argument("--out", default="-")
    plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (simulate.ApproximatedDDError, simulate.TooManyQubitsError,
            RecursionError, MemoryError) as exc:
        # Before the ValueError clause: TooManyQubitsError is a ValueError.
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_SIM
    except (circuits.GrcsError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
