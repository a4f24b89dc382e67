"""Command-line interface.

Subcommands:

* ``solve``  -- run one solver on a matrix/observation pair from CSV,
                writing the result as JSON.
* ``bench``  -- run a Monte-Carlo sweep, writing trial records (and
                optionally a summary or pivot table) as CSV.
* ``rip``    -- exact or sampled restricted-isometry constants.
* ``oracle`` -- brute-force sparsest solution at toy scale.
* ``report`` -- render figures and a summary table from a records CSV.

Exit codes: 0 on success, 2 on invalid arguments, 3 when a subset budget
would be exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import (
    ExperimentSpec,
    emit_csv,
    emit_pivot_csv,
    emit_summary_csv,
    read_records,
    run_experiment,
    summarize,
)
from .reconstruct import ADAPTIVE, ALGORITHMS, SolverConfig, solve
from .rip import BudgetExceededError, rip_constant_exact, rip_constant_sampled, l0_oracle
from .sensing import load_matrix_csv, load_vector_csv, save_sparse_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3

PRESETS = {
    # The 50x400 sparsity-estimate sweep (success percentages per cell);
    # gamma calibrated so success peaks at estimates above the true sparsity.
    "table-50x400": dict(n=400, m=50, s="4,8,12,16", s_hat="4,8,12,16,20,30,40",
                         algo="mfr_ls", gamma="0.145", trials=500),
    # Full-scale success-rate curves; slow, opt-in.
    "n800-success": dict(n=800, m=400, s="10,20,30,40,50,60,70,80",
                         s_hat="10,20,30,40,50,60,70,80",
                         algo="mfr,mfr_accel,mfr_ls,mfr_ls_accel,mfr_adaptive",
                         gamma="0.65", trials=1000),
}


def _parse_gamma(text: str):
    if text == ADAPTIVE:
        return ADAPTIVE
    return float(text)


def _parse_list(text: str, cast):
    return tuple(cast(tok) for tok in text.split(",") if tok.strip())


def _cmd_solve(args) -> int:
    phi = load_matrix_csv(args.matrix)
    y = load_vector_csv(args.y)
    cfg = SolverConfig(s_hat=args.s_hat, gamma=_parse_gamma(args.gamma),
                       tol=args.tol, max_iter=args.max_iter)
    result = solve(phi, y, cfg, algorithm=args.algo)
    payload = json.dumps(result.to_json_dict(), indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.preset:
        for key, value in PRESETS[args.preset].items():
            if getattr(args, key) is None:
                setattr(args, key, value)
    missing = [name for name in ("n", "m", "s", "s_hat", "algo", "gamma", "trials")
               if getattr(args, name) is None]
    if missing:
        raise ValueError(f"missing required bench options: {missing}")
    gamma_values = (ADAPTIVE if args.gamma == ADAPTIVE
                    else _parse_list(args.gamma, float))
    spec = ExperimentSpec(
        n=int(args.n), m=int(args.m),
        s_values=_parse_list(str(args.s), int),
        s_hat_values=_parse_list(str(args.s_hat), int),
        algorithms=_parse_list(args.algo, str),
        gamma_values=gamma_values,
        trials=int(args.trials), base_seed=args.seed,
        tol=args.tol, max_iter=args.max_iter, noise_sigma=args.noise_sigma,
    )
    records = run_experiment(spec, workers=args.workers)
    emit_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    if args.summary:
        summaries = summarize(records)
        if args.pivot:
            emit_pivot_csv(summaries, args.summary)
        else:
            emit_summary_csv(summaries, args.summary)
        print(f"wrote summary to {args.summary}")
    return EXIT_OK


def _cmd_rip(args) -> int:
    phi = load_matrix_csv(args.matrix)
    print("order,delta,exact,subsets_examined")
    for order in args.order:
        if args.sampled:
            est = rip_constant_sampled(phi, order, trials=args.sampled,
                                       seed=args.seed)
        else:
            est = rip_constant_exact(phi, order, subset_budget=args.exact_budget)
        print(f"{est.order},{est.delta:.17g},{str(est.exact).lower()},"
              f"{est.subsets_examined}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    phi = load_matrix_csv(args.matrix)
    y = load_vector_csv(args.y)
    found = l0_oracle(phi, y, s_max=args.s_max, residual_tol=args.tol,
                      subset_budget=args.budget)
    if found is None:
        print("none")
        return EXIT_OK
    if args.out:
        save_sparse_csv(found, args.out)
    else:
        print(f"dim,{found.dimension}")
        for i, v in zip(found.support, found.values):
            print(f"{int(i) + 1},{v:.17g}")
    return EXIT_OK


def _cmd_report(args) -> int:
    from .report import render_report

    records = read_records(args.records)
    for path in render_report(records, args.out_dir, dpi=args.dpi):
        print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfrkit",
        description="Sparse recovery by iterative hard thresholding: "
                    "solvers, RIP analysis, and a benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one solver on CSV inputs")
    p.add_argument("--matrix", required=True, help="measurement matrix CSV")
    p.add_argument("--y", required=True, help="observation vector CSV")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--s-hat", dest="s_hat", type=int, required=True,
                   help="sparsity estimate kept by the threshold")
    p.add_argument("--gamma", default="0.65",
                   help="step-length, or 'adaptive' (default 0.65)")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=1000)
    p.add_argument("--out", help="result JSON path (default: stdout)")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", help="run a Monte-Carlo sweep")
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="fill unset options from a canned sweep")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--s", help="comma-separated true sparsities")
    p.add_argument("--s-hat", dest="s_hat", help="comma-separated estimates")
    p.add_argument("--algo", help=f"comma-separated subset of {ALGORITHMS}")
    p.add_argument("--gamma", help="comma-separated step-lengths, or 'adaptive'")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=1000)
    p.add_argument("--noise-sigma", dest="noise_sigma", type=float)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="records CSV path")
    p.add_argument("--summary", help="summary CSV path")
    p.add_argument("--pivot", action="store_true",
                   help="write the summary as an s_hat x s success table")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("rip", help="restricted-isometry constants")
    p.add_argument("--matrix", required=True)
    p.add_argument("--order", required=True,
                   type=lambda t: _parse_list(t, int),
                   help="order s, or a comma-separated list of orders")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact-budget", dest="exact_budget", type=int,
                       default=1_000_000,
                       help="max subsets the exact enumeration may touch")
    group.add_argument("--sampled", type=int,
                       help="sample this many subsets instead (lower bound)")
    p.add_argument("--seed", type=int, default=0, help="seed for --sampled")
    p.set_defaults(func=_cmd_rip)

    p = sub.add_parser("oracle", help="brute-force sparsest solution")
    p.add_argument("--matrix", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--s-max", dest="s_max", type=int, required=True)
    p.add_argument("--tol", type=float, default=None,
                   help="residual tolerance (default 1e-8 * ||y||)")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--out", help="write the solution as sparse CSV")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("report", help="render figures from a records CSV")
    p.add_argument("--records", required=True)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--dpi", type=int, default=150)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
