"""Command-line frontend.

Subcommands: `rta compute`, `mix solve`, `gen extreme|tight-mix|random`,
`sim run`, `blockip solve|encode-rtc`, `bench`.  Solvers emit a JSON report
{result, algorithm, certificates, timings, instance}; `--verify` re-checks the
result against the brute-force oracle and fails the run on mismatch.

Exit codes: 0 success, 1 infeasible/unbounded/not-schedulable, 2 invalid
input, 3 overflow or budget exhaustion.  The magnitude cap honours the
RTMIX_LIMIT_BITS environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import blockip, counters, gen, jsonio, mixing, reverse, rta, sim
from .core import magnitude_cap
from .errors import (
    BudgetExceeded,
    Infeasible,
    InvalidInstance,
    OverflowLimit,
    PreconditionViolated,
    RTMixError,
    Unbounded,
    UtilizationExceeded,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1      # infeasible / unbounded / not schedulable / verify mismatch
EXIT_INVALID = 2
EXIT_RESOURCE = 3


class _VerifyMismatch(RTMixError):
    pass


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2))
        return
    def walk(obj, indent=0):
        pad = "  " * indent
        if isinstance(obj, dict):
            for key, val in obj.items():
                if isinstance(val, (dict, list)):
                    print(f"{pad}{key}:")
                    walk(val, indent + 1)
                else:
                    print(f"{pad}{key}: {val}")
        elif isinstance(obj, list):
            for val in obj:
                walk(val, indent)
        else:
            print(f"{pad}{obj}")
    walk(report)


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, {"seconds": time.perf_counter() - start}


def _cmd_rta_compute(args) -> tuple[int, dict]:
    ts = jsonio.task_system_from_dict(jsonio.load_json(args.input))
    with counters.collect() as ops:
        verdicts, timing = _timed(lambda: rta.analyze_system(ts, args.algorithm))
    if args.verify:
        for tv in verdicts.tasks:
            q = rta.ResponseQuery(ts, range(tv.index), ts.tasks[tv.index].c)
            if rta.response_bruteforce(q) != tv.response:
                raise _VerifyMismatch(
                    f"task {tv.index}: {tv.response} disagrees with the brute-force oracle"
                )
    report = {
        "result": {
            "responses": list(verdicts.responses()),
            "schedulable": verdicts.schedulable,
            "tasks": [
                {
                    "index": tv.index,
                    "response": tv.response,
                    "deadline_budget": tv.deadline_budget,
                    "schedulable": tv.schedulable,
                }
                for tv in verdicts.tasks
            ],
        },
        "algorithm": args.algorithm,
        "certificates": {"verified_against_bruteforce": bool(args.verify)},
        "timings": timing,
        "counters": ops.as_dict(),
        "instance": jsonio.task_system_to_dict(ts),
    }
    code = EXIT_OK
    if args.require_schedulable and not verdicts.schedulable:
        code = EXIT_NEGATIVE
    return code, report


_MIX_SOLVERS = {
    "bruteforce": lambda inst: mixing.solve_bruteforce(inst),
    "harmonic": lambda inst: mixing.solve_harmonic(inst),
    "shift": lambda inst: reverse.solve_general_via_shift(inst),
    "via-rtc": lambda inst: reverse.solve_crowded(inst),
}


def _cmd_mix_solve(args) -> tuple[int, dict]:
    inst = jsonio.mix_instance_from_dict(jsonio.load_json(args.input))
    solver = _MIX_SOLVERS[args.algorithm]
    with counters.collect() as ops:
        sol, timing = _timed(lambda: solver(inst))
    if args.verify:
        oracle = mixing.solve_bruteforce(inst)
        if oracle.objective != sol.objective:
            raise _VerifyMismatch(
                f"objective {sol.objective} disagrees with brute force {oracle.objective}"
            )
    report = {
        "result": jsonio.mix_solution_to_dict(sol),
        "algorithm": args.algorithm,
        "certificates": {
            "feasible": True,
            "verified_against_bruteforce": bool(args.verify),
        },
        "timings": timing,
        "counters": ops.as_dict(),
        "instance": jsonio.mix_instance_to_dict(inst),
    }
    return EXIT_OK, report


def _write_instance(payload: dict, args) -> tuple[int, dict]:
    text = json.dumps(payload, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        return EXIT_OK, {"written": args.output}
    print(text)
    return EXIT_OK, {}


def _cmd_gen_extreme(args) -> tuple[int, dict]:
    cs = [int(v) for v in args.c.split(",")] if args.c else []
    if args.n != len(cs) + 2:
        raise InvalidInstance(
            f"--n {args.n} is inconsistent with {len(cs)} leading costs "
            f"(need n - 2 = {args.n - 2})"
        )
    jitters = args.jitter if args.jitter in ("p", "zero") else [
        int(v) for v in args.jitter.split(",")
    ]
    ts = gen.construct_extreme(cs, args.p1, jitters, deadlines=args.deadline)
    return _write_instance(jsonio.task_system_to_dict(ts), args)


def _cmd_gen_tight_mix(args) -> tuple[int, dict]:
    inst = gen.tight_mixing_instance(args.n)
    return _write_instance(jsonio.mix_instance_to_dict(inst), args)


def _cmd_gen_random(args) -> tuple[int, dict]:
    ts = gen.random_system(
        args.seed,
        args.n,
        args.p_max,
        harmonic=args.harmonic,
        jitter_mode=args.jitter_mode,
        require_schedulable=args.require_schedulable,
    )
    return _write_instance(jsonio.task_system_to_dict(ts), args)


def _cmd_sim_run(args) -> tuple[int, dict]:
    ts = jsonio.task_system_from_dict(jsonio.load_json(args.input))
    rp = jsonio.release_pattern_from_dict(jsonio.load_json(args.releases))
    trace, timing = _timed(lambda: sim.simulate(ts, rp, args.horizon))
    if args.gantt:
        print(sim.render_gantt(trace, ts))
    report = {
        "result": jsonio.trace_to_dict(trace),
        "algorithm": "event-loop",
        "certificates": {
            "responses_from_release": sim.observed_responses(trace, "release"),
            "responses_from_arrival": sim.observed_responses(trace, "arrival"),
        },
        "timings": timing,
        "instance": jsonio.task_system_to_dict(ts),
    }
    return EXIT_OK, report


def _cmd_blockip_solve(args) -> tuple[int, dict]:
    prog = jsonio.four_block_from_dict(jsonio.load_json(args.input))
    value, timing = _timed(lambda: blockip.solve_simple_4block(prog, args.H))
    report = {
        "result": {"objective": value},
        "algorithm": "dualized-binary-search",
        "certificates": {},
        "timings": timing,
        "instance": jsonio.four_block_to_dict(prog),
    }
    return EXIT_OK, report


def _cmd_blockip_encode(args) -> tuple[int, dict]:
    ts = jsonio.task_system_from_dict(jsonio.load_json(args.input))
    prog = blockip.encode_rtc_as_4block(ts)
    return _write_instance(jsonio.four_block_to_dict(prog), args)


def _bench_rta_harmonic(seed: int) -> list[dict]:
    rows = []
    for n in (3, 5, 7):
        for p_max in (16, 64, 256):
            ts = gen.random_system(seed + 7 * n + p_max, n, p_max, harmonic=True)
            q = rta.ResponseQuery(ts, range(len(ts.tasks) - 1), ts.tasks[-1].c)
            with counters.collect() as ops:
                start = time.perf_counter()
                result = rta.response_harmonic(q)
                wall = time.perf_counter() - start
            rows.append(
                {
                    "suite": "rta-harmonic",
                    "n": n,
                    "p_max": p_max,
                    "result": result,
                    "counters": ops.as_dict(),
                    "seconds": wall,
                }
            )
    return rows


def _bench_mix_harmonic(seed: int) -> list[dict]:
    rows = []
    for n in (2, 4, 6, 8):
        inst = gen.random_mix_instance(seed + n, n=n, a_max=256)
        with counters.collect() as ops:
            start = time.perf_counter()
            sol = mixing.solve_harmonic(inst)
            wall = time.perf_counter() - start
        rows.append(
            {
                "suite": "mix-harmonic",
                "n": n,
                "objective": sol.objective,
                "counters": ops.as_dict(),
                "seconds": wall,
            }
        )
    return rows


_BENCH_SUITES = {
    "rta-harmonic": _bench_rta_harmonic,
    "mix-harmonic": _bench_mix_harmonic,
}


def _cmd_bench(args) -> tuple[int, dict]:
    rows = _BENCH_SUITES[args.suite](args.seed)
    return EXIT_OK, {
        "result": rows,
        "algorithm": args.suite,
        "certificates": {},
        "timings": {"seconds": sum(r["seconds"] for r in rows)},
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtmix",
        description="Exact response-time analysis and mixing set solvers "
        f"(magnitude cap: {magnitude_cap()}; override via RTMIX_LIMIT_BITS)",
    )
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rta = sub.add_parser("rta", help="response-time analysis")
    rta_sub = p_rta.add_subparsers(dest="subcommand", required=True)
    p_compute = rta_sub.add_parser("compute", help="per-task responses and verdicts")
    p_compute.add_argument("--input", required=True)
    p_compute.add_argument("--algorithm", choices=rta.ALGORITHMS, default="auto")
    p_compute.add_argument("--verify", action="store_true")
    p_compute.add_argument("--require-schedulable", action="store_true")
    p_compute.set_defaults(handler=_cmd_rta_compute)

    p_mix = sub.add_parser("mix", help="mixing set solvers")
    mix_sub = p_mix.add_subparsers(dest="subcommand", required=True)
    p_solve = mix_sub.add_parser("solve")
    p_solve.add_argument("--input", required=True)
    p_solve.add_argument(
        "--algorithm", choices=sorted(_MIX_SOLVERS), default="bruteforce"
    )
    p_solve.add_argument("--verify", action="store_true")
    p_solve.set_defaults(handler=_cmd_mix_solve)

    p_gen = sub.add_parser("gen", help="instance generators")
    gen_sub = p_gen.add_subparsers(dest="subcommand", required=True)
    p_ext = gen_sub.add_parser("extreme", help="full-utilization harmonic family")
    p_ext.add_argument("--n", type=int, required=True)
    p_ext.add_argument("--p1", type=int, required=True)
    p_ext.add_argument("--c", default="", help="comma-separated leading costs (n-2 of them)")
    p_ext.add_argument("--jitter", default="p", help="'p', 'zero', or comma-separated values")
    p_ext.add_argument("--deadline", choices=("none", "p"), default="none")
    p_ext.add_argument("--output")
    p_ext.set_defaults(handler=_cmd_gen_extreme)
    p_tight = gen_sub.add_parser("tight-mix", help="tight mixing family")
    p_tight.add_argument("--n", type=int, required=True)
    p_tight.add_argument("--output")
    p_tight.set_defaults(handler=_cmd_gen_tight_mix)
    p_rand = gen_sub.add_parser("random", help="seeded random task system")
    p_rand.add_argument("--seed", type=int, required=True)
    p_rand.add_argument("--n", type=int, required=True)
    p_rand.add_argument("--p-max", type=int, required=True)
    p_rand.add_argument("--harmonic", action="store_true")
    p_rand.add_argument("--jitter-mode", choices=("zero", "upto-p"), default="upto-p")
    p_rand.add_argument("--require-schedulable", action="store_true")
    p_rand.add_argument("--output")
    p_rand.set_defaults(handler=_cmd_gen_random)

    p_sim = sub.add_parser("sim", help="schedule simulator")
    sim_sub = p_sim.add_subparsers(dest="subcommand", required=True)
    p_run = sim_sub.add_parser("run")
    p_run.add_argument("--input", required=True)
    p_run.add_argument("--releases", required=True)
    p_run.add_argument("--horizon", type=int, required=True)
    p_run.add_argument("--gantt", action="store_true")
    p_run.set_defaults(handler=_cmd_sim_run)

    p_blk = sub.add_parser("blockip", help="simple 4-block programs")
    blk_sub = p_blk.add_subparsers(dest="subcommand", required=True)
    p_bsolve = blk_sub.add_parser("solve")
    p_bsolve.add_argument("--input", required=True)
    p_bsolve.add_argument("--H", type=int, default=None)
    p_bsolve.set_defaults(handler=_cmd_blockip_solve)
    p_benc = blk_sub.add_parser("encode-rtc")
    p_benc.add_argument("--input", required=True)
    p_benc.add_argument("--output")
    p_benc.set_defaults(handler=_cmd_blockip_encode)

    p_bench = sub.add_parser("bench", help="operation-counter benchmarks")
    p_bench.add_argument("--suite", choices=sorted(_BENCH_SUITES), required=True)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.set_defaults(handler=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, report = args.handler(args)
    except (Unbounded, Infeasible, UtilizationExceeded, _VerifyMismatch) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.format)
        return EXIT_NEGATIVE
    except (OverflowLimit, BudgetExceeded) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.format)
        return EXIT_RESOURCE
    except (InvalidInstance, PreconditionViolated) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.format)
        return EXIT_INVALID
    if report:
        _emit(report, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
