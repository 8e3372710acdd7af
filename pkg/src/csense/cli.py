"""Command-line interface.

Subcommands: gen-matrix (construct and save a measurement matrix),
coherence (analyze a saved matrix), recover (run matching pursuit on saved
measurements, optionally cross-checked against the exhaustive search),
figure (emit the CSV data behind the bundled demo scenarios), and
experiment (drive a Monte Carlo config).

Exit codes: 0 ok, 2 usage or input error, 3 construction failure,
4 infeasible combinatorial scan, 5 pursuit did not converge.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from importlib import resources

import numpy as np

from . import coherence, experiments, matrices, recovery
from .errors import (
    InfeasibleScanError,
    RankDeficientError,
    UnsupportedSizeError,
    ZeroColumnError,
)

_SCENARIO_SUPPORTS = {"fig2": (2, 7), "fig3": (2, 7), "fig4": (2, 5, 19)}


def figure_scenario(name: str):
    """Bundled demo scenario: (matrix, support), unit-valued nonzeros.

    fig2: 7x14 ETF, support (2, 7). fig3: 12x16 partial DFT built from the
    committed row subset in data/fig3_rows.json, support (2, 7). fig4:
    15x30 ETF, support (2, 5, 19).
    """
    if name not in _SCENARIO_SUPPORTS:
        raise ValueError(f"unknown scenario {name!r}")
    if name == "fig2":
        mat = matrices.build_etf(7, 14)
    elif name == "fig4":
        mat = matrices.build_etf(15, 30)
    else:
        cfg = json.loads(resources.files("csense").joinpath("data/fig3_rows.json").read_text())
        rows = matrices.RowIndexSet(int(cfg["n"]), tuple(cfg["rows"]))
        mat = matrices.build_partial_dft(int(cfg["n"]), rows)
    return mat, _SCENARIO_SUPPORTS[name]


def _thread_cap() -> int:
    """Parallelism cap from CSENSE_THREADS (0 or unset: default).

    Execution here is sequential by design, so any cap is honored as-is;
    the variable is validated for forward compatibility.
    """
    raw = os.environ.get("CSENSE_THREADS", "").strip()
    if not raw:
        return 0
    try:
        return max(int(raw), 0)
    except ValueError:
        print(f"warning: ignoring non-integer CSENSE_THREADS={raw!r}", file=sys.stderr)
        return 0


def _parse_rows(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ValueError(f"--rows expects comma-separated integers, got {text!r}") from exc


def _fmt_k_max(k_max) -> str:
    return "unbounded" if k_max is None else str(k_max)


def _print_matrix_summary(mat: matrices.MeasurementMatrix) -> None:
    rep = coherence.coherence_index(mat)
    if "rows" in mat.meta:
        print("rows = " + ",".join(str(i) for i in mat.meta["rows"]))
    print(f"mu = {rep.mu!r}")
    print(f"welch = {rep.welch!r}")
    print(f"k_max = {_fmt_k_max(rep.k_max)}")


def _cmd_gen_matrix(args) -> int:
    rows = _parse_rows(args.rows) if args.rows is not None else None
    mat = matrices.from_spec(args.family, m=args.m, n=args.n, seed=args.seed, rows=rows, p=args.p)
    matrices.save_matrix(mat, args.out)
    _print_matrix_summary(mat)
    return 0


def _cmd_coherence(args) -> int:
    mat = matrices.load_matrix(args.matrix)
    payload = {"coherence": coherence.coherence_index(mat).to_dict()}
    if args.uniqueness_k is not None:
        report = coherence.uniqueness_rank_scan(
            mat, args.uniqueness_k, max_subsets=args.max_subsets, strict=True
        )
        payload["uniqueness"] = report.to_dict()
    if args.rip_k is not None:
        report = coherence.rip_constant(mat, args.rip_k, max_subsets=args.max_subsets, strict=True)
        payload["rip"] = report.to_dict()
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_recover(args) -> int:
    mat = matrices.load_matrix(args.matrix)
    y = recovery.load_measurement(args.measurements)
    result = recovery.matching_pursuit(mat, y, epsilon=args.epsilon, max_iter=args.max_iter)
    payload = {"recovery": result.to_dict()}
    if args.oracle:
        y_norm = float(np.linalg.norm(y))
        if args.epsilon is not None and y_norm > 0.0:
            rel_epsilon = args.epsilon / y_norm
        else:
            rel_epsilon = recovery.DEFAULT_RELATIVE_EPSILON
        solutions = recovery.exhaustive_l0_search(mat, y, max(1, len(result.support)), rel_epsilon)
        minimal_size = len(solutions[0].support) if solutions else 0
        minimal = [s for s in solutions if len(s.support) == minimal_size]
        payload["oracle"] = {
            "solutions": [
                {
                    "support": list(s.support),
                    "values": [[v.real, v.imag] for v in s.values],
                    "residual": s.residual,
                }
                for s in solutions
            ],
            "ambiguous": len(minimal) > 1,
            "agrees_with_pursuit": tuple(sorted(result.support)) in {s.support for s in minimal},
        }
    print(json.dumps(payload, indent=2))
    return 0 if result.converged else 5


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_figure(args) -> int:
    mat, support = figure_scenario(args.name)
    os.makedirs(args.outdir, exist_ok=True)
    x = recovery.SparseSignal(mat.n, support, np.ones(len(support), dtype=np.complex128))
    estimate = recovery.decompose_initial_estimate(mat, x)
    rep = coherence.coherence_index(mat)
    margin = recovery.worst_case_margin(rep.mu, len(support))

    comp_header = ["index"]
    for i in range(len(support)):
        comp_header += [f"component_{i + 1}_re", f"component_{i + 1}_im"]
    comp_rows = []
    for idx in range(mat.n):
        row = [idx]
        for i in range(len(support)):
            z = estimate.components[idx, i]
            row += [float(z.real), float(z.imag)]
        comp_rows.append(row)
    _write_csv(os.path.join(args.outdir, "components.csv"), comp_header, comp_rows)

    est_rows = [[idx, float(abs(estimate.x0[idx]))] for idx in range(mat.n)]
    _write_csv(os.path.join(args.outdir, "estimate.csv"), ["index", "abs_x0"], est_rows)

    _write_csv(
        os.path.join(args.outdir, "margins.csv"),
        ["signal_floor", "disturbance_ceiling"],
        [[float(margin.signal_floor), float(margin.disturbance_ceiling)]],
    )
    return 0


def _cmd_experiment(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        cfg = experiments.ExperimentConfig.from_dict(json.load(fh))
    report = experiments.run_experiment(cfg)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")
    csv_path = os.path.splitext(args.out)[0] + ".csv"
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(report.csv_lines()) + "\n")
    print(f"wrote {args.out} and {csv_path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csense", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-matrix", help="construct a measurement matrix and save it as JSON")
    p.add_argument("--family", required=True, choices=["etf", "partial-dft", "gaussian", "subsampling"])
    p.add_argument("--m", type=int, default=None, help="measurement count")
    p.add_argument("--n", type=int, required=True, help="signal length")
    p.add_argument("--seed", type=int, default=0, help="seed for random families")
    p.add_argument("--rows", default=None, help="explicit partial-DFT rows, e.g. 0,2,4,6")
    p.add_argument("--p", type=int, default=None, help="subsampling period")
    p.add_argument("--out", required=True, help="output matrix JSON path")
    p.set_defaults(func=_cmd_gen_matrix)

    p = sub.add_parser("coherence", help="coherence report plus optional rank/RIP scans")
    p.add_argument("--matrix", required=True, help="matrix JSON path")
    p.add_argument("--uniqueness-k", type=int, default=None, help="scan all 2k-column subsets for full rank")
    p.add_argument("--rip-k", type=int, default=None, help="brute-force isometry constant at sparsity k")
    p.add_argument("--max-subsets", type=int, default=coherence.DEFAULT_MAX_SUBSETS)
    p.set_defaults(func=_cmd_coherence)

    p = sub.add_parser("recover", help="matching pursuit on saved measurements")
    p.add_argument("--matrix", required=True)
    p.add_argument("--measurements", required=True)
    p.add_argument("--epsilon", type=float, default=None, help="absolute residual stop threshold")
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--oracle", action="store_true", help="cross-check against the exhaustive search")
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser("figure", help="write the CSV data behind a bundled demo scenario")
    p.add_argument("--name", required=True, choices=sorted(_SCENARIO_SUPPORTS))
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("experiment", help="run a Monte Carlo recovery-rate config")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out", required=True, help="report JSON path (CSV lands next to it)")
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    _thread_cap()
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleScanError as exc:
        print(f"error: infeasible scan: {exc}", file=sys.stderr)
        return 4
    except (UnsupportedSizeError, ZeroColumnError, RankDeficientError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
