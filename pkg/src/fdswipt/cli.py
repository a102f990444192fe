"""Command-line entry points.

``solve`` runs a single seeded realization against a parameter config and
prints the resulting operating point; ``sweep`` runs a Monte Carlo sweep
config and writes the result table.  Exit codes: 0 on success, 2 for
configuration problems, 3 when every requested solve is infeasible.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .errors import InfeasibleError, ParameterError
from .harness import (SCHEME_FRBV, SCHEME_JOINT, emit, load_config_file,
                      run_single, run_sweep, summarize,
                      sweep_config_from_config, system_params_from_config)


def _cmd_solve(args) -> int:
    raw = load_config_file(args.config)
    params = system_params_from_config(raw)
    frbv_alpha = float(raw.get("frbv_alpha", 0.583))
    scheme = SCHEME_JOINT if args.scheme == "joint" else SCHEME_FRBV
    try:
        js = run_single(params, args.seed, scheme, frbv_alpha=frbv_alpha)
    except InfeasibleError as err:
        print(f"infeasible ({err.binding}): {err}", file=sys.stderr)
        return 3
    rep = js.report
    payload = {
        "scheme": scheme,
        "seed": args.seed,
        "alpha": js.alpha_star,
        "rho": js.solution.rho,
        "sum_rate": rep.sum_rate,
        "rate_a": rep.rate_a,
        "rate_b": rep.rate_b,
        "sinr_a": rep.sinr_a,
        "sinr_b": rep.sinr_b,
        "q_harvest": rep.q_harvest,
        "p_relay": rep.p_relay,
        "iterations": js.iterations_outer,
        "converged": js.converged,
    }
    if args.json:
        print(json.dumps(payload, indent=1))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")
    return 0


def _cmd_sweep(args) -> int:
    raw = load_config_file(args.config)
    cfg = sweep_config_from_config(raw)
    result = run_sweep(cfg, jobs=args.jobs, write=False)
    emit(result, args.out, args.format)
    feasible = sum(1 for r in result.rows if not r.infeasible)
    if feasible == 0:
        print("all rows infeasible", file=sys.stderr)
        return 3
    for line in summarize(result):
        rate = line["mean_sum_rate"]
        rate_s = f"{rate:.4f}" if not math.isnan(rate) else "n/a"
        print(f"{line['scheme']:9s} value={line['sweep_value_db']:g} dB "
              f"q_bar={line['q_bar']:g} mean_sum_rate={rate_s} "
              f"feasible={line['n_feasible']} infeasible={line['n_infeasible']}")
    print(f"wrote {len(result.rows)} rows to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fdswipt",
        description="Joint relay beamforming and power-splitting optimization")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one seeded realization")
    p_solve.add_argument("--config", required=True)
    p_solve.add_argument("--seed", type=int, required=True)
    p_solve.add_argument("--scheme", choices=["joint", "frbv"], default="joint")
    p_solve.add_argument("--json", action="store_true")

    p_sweep = sub.add_parser("sweep", help="run a Monte Carlo sweep")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sweep.add_argument("--jobs", type=int, default=1)

    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        return _cmd_sweep(args)
    except (ParameterError, OSError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
