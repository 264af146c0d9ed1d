"""Command-line front end.

Usage:
  fdx generate --family lb-asym --q 2 --copies 2 -o lb.json
  fdx allocate lb.json --method nonconsensus --solver local --seed 0 --out-dir run/
  fdx certify lb.json run/allocation.json
  fdx oracle lb.json
  fdx wdisc sets.json --p 1/5
  fdx bench --n 4 9 16 --seeds 0 1 -o bench.csv

Exit codes: 0 ok, 1 I/O failure, 2 invalid input, 3 enumeration budget exceeded.
Errors are reported as one JSON object on stderr.
"""

import argparse
import csv
import io as _io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import io
from .allocators import METHODS, SolverConfig, run_method
from .discrepancy import wdisc_brute
from .envy import brute_min_efc, certify_efc
from .errors import BudgetExceeded, FdxError, ValidationError
from .generators import lb_asym_instance, mm_sets, random_instance, star_extern_instance
from .model import AsymInstance, ExternInstance, format_rational, to_rational
from .reductions import lift_additive, lift_binary, to_asym

SOLVERS = {"exhaustive": "exhaustive", "random": "random_restarts", "local": "local_search"}
BENCH_COLUMNS = [
    "n", "m", "seed", "method", "solver", "T_final", "achieved_discrepancy",
    "certified_bound", "measured_c", "wall_ms", "c_over_sqrt_n",
]


def _emit(data, output):
    if output in (None, "-"):
        sys.stdout.write(io.dumps(data))
        return None
    return io.write_json(output, data)


def _as_asym(instance):
    return instance if isinstance(instance, AsymInstance) else to_asym(instance)


def cmd_generate(args):
    if args.family == "random":
        inst = random_instance(
            args.n, args.m, model=args.model, low=args.low, high=args.high, binary=args.binary,
            no_chores=args.no_chores, seed=args.seed, denominator=args.denominator,
        )
        _emit(io.instance_to_json(inst), args.output)
        return 0
    sets = mm_sets(args.q, args.copies)
    if args.family == "lb-asym":
        data = io.instance_to_json(lb_asym_instance(sets))
    elif args.family == "star":
        data = io.instance_to_json(star_extern_instance(sets))
    else:
        data = {"q": sets.q, "m": sets.m, "valuations": [[int(x) for x in v] for v in sets.indicators()]}
    _emit(data, args.output)
    return 0


def cmd_convert(args):
    inst = io.load_instance(args.input)
    if isinstance(inst, ExternInstance):
        out = to_asym(inst)
    elif args.lift == "binary":
        out = lift_binary(inst)
    else:
        out = lift_additive(inst)
    _emit(io.instance_to_json(out), args.output)
    return 0


def cmd_allocate(args):
    inst = io.load_instance(args.instance)
    config = SolverConfig(SOLVERS[args.solver], args.seed, args.budget)
    result = run_method(inst, args.method, config, seed=args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    alloc_hash = io.write_json(out / "allocation.json", io.allocation_to_json(result.allocation))
    cert_hash = io.write_json(out / "certificate.json", result.certificate.to_json())
    report = {
        "method": args.method,
        "seed": args.seed,
        "solver": config.to_json(),
        "T_final": result.t_final,
        "certified_bound": result.certified_bound,
        "achieved_discrepancy": format_rational(result.achieved),
        "measured_c": result.measured_c,
        "permutation": None if result.permutation is None else list(result.permutation),
        "artifacts": {
            "instance_sha256": io.sha256_file(args.instance),
            "allocation_sha256": alloc_hash,
            "certificate_sha256": cert_hash,
        },
    }
    io.write_json(out / "report.json", report)
    sys.stdout.write(io.dumps({k: report[k] for k in ("T_final", "certified_bound", "achieved_discrepancy", "measured_c")}))
    return 0


def cmd_certify(args):
    inst = io.load_instance(args.instance)
    alloc = io.allocation_from_json(io.read_json(args.allocation), inst.m)
    cert = certify_efc(_as_asym(inst), alloc)
    if args.output:
        io.write_json(args.output, cert.to_json())
    sys.stdout.write(io.dumps({"c": cert.c}))
    return 0


def cmd_oracle(args):
    inst = io.load_instance(args.instance)
    c_star, alloc = brute_min_efc(_as_asym(inst), budget=args.budget)
    _emit({"c_star": c_star, **io.allocation_to_json(alloc)}, args.output)
    return 0


def cmd_wdisc(args):
    vs = io.valuations_from_json(io.read_json(args.valuations))
    value, subset = wdisc_brute(vs, to_rational(args.p), budget=args.budget)
    _emit({"p": format_rational(to_rational(args.p)), "value": format_rational(value), "argmin": list(subset)}, args.output)
    return 0


def bench_row(n, m, seed, method, solver, budget, model, binary, timing=True):
    inst = random_instance(n, m, model=model, binary=binary, seed=seed)
    config = SolverConfig(SOLVERS[solver], seed, budget)
    start = time.perf_counter()
    result = run_method(inst, method, config, seed=seed)
    wall = (time.perf_counter() - start) * 1000
    return {
        "n": n,
        "m": m,
        "seed": seed,
        "method": method,
        "solver": solver,
        "T_final": result.t_final,
        "achieved_discrepancy": format_rational(result.achieved),
        "certified_bound": result.certified_bound,
        "measured_c": result.measured_c,
        "wall_ms": f"{wall:.1f}" if timing else "",
        "c_over_sqrt_n": f"{result.measured_c / math.sqrt(n):.4f}",
    }


def bench_rows(ns, seeds, method="nonconsensus", solver="local", budget=None, model="asym",
               binary=True, m_values=None, m_factor=2, jobs=1, timing=True):
    grid = []
    for n in ns:
        ms = m_values if m_values else [m_factor * n]
        for m in ms:
            for seed in seeds:
                grid.append((n, m, seed, method, solver, budget, model, binary, timing))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(bench_row, *zip(*grid)))
    else:
        rows = [bench_row(*g) for g in grid]
    rows.sort(key=lambda r: (r["n"], r["m"], r["seed"]))
    return rows


def cmd_bench(args):
    rows = bench_rows(
        args.n, args.seeds, args.method, args.solver, args.budget, args.model, args.binary,
        args.m, args.m_factor, args.jobs, timing=not args.no_timing,
    )
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.output in (None, "-"):
        sys.stdout.write(buf.getvalue())
    else:
        Path(args.output).write_text(buf.getvalue(), encoding="utf-8")
    bad = [r for r in rows if r["measured_c"] > r["certified_bound"]]
    return 1 if bad else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="fdx", description="Fair division with externalities toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write an instance (or set-indicator) JSON file")
    p.add_argument("--family", choices=["lb-asym", "star", "random", "mm-sets"], required=True)
    p.add_argument("--q", type=int, default=2, help="number of sets, a power of two")
    p.add_argument("--copies", type=int, default=None, help="stacked Hadamard copies (default 2q)")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--model", choices=["externalities", "asym"], default="externalities")
    p.add_argument("--low", type=int, default=-5)
    p.add_argument("--high", type=int, default=5)
    p.add_argument("--denominator", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--binary", action="store_true")
    p.add_argument("--no-chores", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("convert", help="translate between the externalities and asymmetric models")
    p.add_argument("input")
    p.add_argument("--lift", choices=["additive", "binary"], default="additive")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("allocate", help="run an allocation pipeline and write artifacts")
    p.add_argument("instance")
    p.add_argument("--method", choices=METHODS, default="nonconsensus")
    p.add_argument("--solver", choices=list(SOLVERS), default="local")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("certify", help="compute the EF-c certificate of an allocation")
    p.add_argument("instance")
    p.add_argument("allocation")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("oracle", help="brute-force the smallest attainable c")
    p.add_argument("instance")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("wdisc", help="brute-force weighted discrepancy")
    p.add_argument("valuations")
    p.add_argument("--p", required=True, help='weight as "p/q"')
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_wdisc)

    p = sub.add_parser("bench", help="run allocations over a size/seed grid and write CSV")
    p.add_argument("--n", type=int, nargs="+", default=[4, 9, 16, 25, 36])
    p.add_argument("--m", type=int, nargs="+", default=None, help="item counts (default: m-factor * n)")
    p.add_argument("--m-factor", type=int, default=2)
    p.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    p.add_argument("--method", choices=METHODS, default="nonconsensus")
    p.add_argument("--solver", choices=list(SOLVERS), default="local")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--model", choices=["externalities", "asym"], default="asym")
    p.add_argument("--binary", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="leave wall_ms empty for byte-stable output")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return parser


def _fail(code, exc):
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        return _fail(3, exc)
    except (ValidationError, json.JSONDecodeError) as exc:
        return _fail(2, exc)
    except (OSError, FdxError) as exc:
        return _fail(1, exc)


if __name__ == "__main__":
    sys.exit(main())
