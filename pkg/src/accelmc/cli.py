"""Command line entry point.

Subcommands: check (run one engine on one file), dump (print the parsed or
CHC-encoded problem in native form), bench (run engines over a directory,
write CSV).  Exit codes of check: 20 safe, 10 unsafe, 30 unknown, 2 for
usage or input errors, 1 for internal failures.
"""

from __future__ import annotations

import argparse
import json
import shlex
import signal
import sys
import traceback
from pathlib import Path
from typing import Mapping, Optional, Sequence

from . import bench as benchmod
from .cex import CexError
from .engine import Engine, EngineConfig, EngineResult, Verdict, run
from .frontend import dump_native, load_problem
from .sexp import SexpError
from .solver import SolverConfig
from .terms import Var

EXIT_SAFE = 20
EXIT_UNSAFE = 10
EXIT_UNKNOWN = 30
EXIT_USAGE = 2
EXIT_INTERNAL = 1

_VERDICT_EXIT = {
    Verdict.SAFE: EXIT_SAFE,
    Verdict.UNSAFE: EXIT_UNSAFE,
    Verdict.UNKNOWN: EXIT_UNKNOWN,
}


def _add_run_flags(sp: argparse.ArgumentParser, with_engine: bool) -> None:
    if with_engine:
        sp.add_argument("--engine", choices=[e.value for e in Engine],
                        default=Engine.ABMC_B.value,
                        help="checking loop to run (default: abmc-b)")
    sp.add_argument("--max-bound", type=int, default=1000, metavar="N",
                    help="give up beyond this unrolling depth (default: 1000)")
    sp.add_argument("--timeout-ms", type=int, default=None, metavar="MS",
                    help="wall clock budget, also applied per solver query")
    sp.add_argument("--solver-cmd", default=None, metavar="CMD",
                    help='solver command, e.g. "z3 -in" (default: z3 on PATH, '
                         "else the bundled WASM shim)")
    sp.add_argument("--seed", type=int, default=None,
                    help="random seed passed to the solver")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="accelmc",
        description="bounded model checking with on-the-fly loop acceleration",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    check = sub.add_parser("check", help="check one .sp or .smt2 file")
    check.add_argument("file")
    _add_run_flags(check, with_engine=True)
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--validate", action=argparse.BooleanOptionalAction,
                       default=True,
                       help="expand and re-check unsafe counterexamples "
                            "(default: on)")
    check.add_argument("--dump-smt2", metavar="DIR", default=None,
                       help="write the solver transcript into DIR")
    check.add_argument("--dot", metavar="DIR", default=None,
                       help="write the dependency graph into DIR")
    check.set_defaults(fn=_cmd_check)

    dump = sub.add_parser("dump", help="print a problem in native form")
    dump.add_argument("file")
    dump.set_defaults(fn=_cmd_dump)

    bench = sub.add_parser("bench", help="run engines over a directory")
    bench.add_argument("dir")
    bench.add_argument("--engines", default="bmc,abmc,abmc-b", metavar="LIST",
                       help="comma-separated engine list "
                            "(default: bmc,abmc,abmc-b)")
    _add_run_flags(bench, with_engine=False)
    bench.add_argument("--jobs", type=int, default=1,
                       help="parallel instance runs (default: 1)")
    bench.add_argument("--out", default="results.csv", metavar="CSV",
                       help="result table path (default: results.csv)")
    bench.add_argument("--validate", action=argparse.BooleanOptionalAction,
                       default=True)
    bench.set_defaults(fn=_cmd_bench)
    return ap


def _solver_config(args: argparse.Namespace,
                   transcript: Optional[str] = None) -> SolverConfig:
    return SolverConfig(
        command=shlex.split(args.solver_cmd) if args.solver_cmd else None,
        per_query_timeout_ms=args.timeout_ms,
        random_seed=args.seed,
        transcript_path=transcript,
    )


def _fmt_state(s: Mapping[Var, int]) -> str:
    items = sorted(s.items(), key=lambda p: p[0].sort_key())
    return " ".join(f"{v.name}={c}" for v, c in items)


def _print_text(res: EngineResult, name: str) -> None:
    head = f"{name}: {res.verdict.value}"
    if res.bound is not None:
        what = "counterexample steps" if res.verdict is Verdict.UNSAFE else "bound"
        head += f" ({what}: {res.bound})"
    print(head)
    if res.reason is not None:
        line = f"reason: {res.reason.value}"
        if res.detail:
            line += f" ({res.detail})"
        print(line)
    print(f"engine: {res.engine.value}, learned: {res.learned}, "
          f"queries: {res.queries}, wall: {res.wall_ms:.0f} ms")
    cex = res.cex
    if cex is not None:
        print(f"counterexample ({len(cex.states)} states):")
        for i, st in enumerate(cex.states):
            print(f"  {i}: {_fmt_state(st)}")
            if cex.steps is not None and i < len(cex.steps):
                t = cex.steps[i]
                if t.is_learned:
                    n = cex.assignments[i].get(t.provenance.info.counter)
                    print(f"     --[accelerated #{t.provenance.id}, n={n}]-->")
    if res.expanded is not None:
        print(f"expanded counterexample: {len(res.expanded)} states, validated")
        if len(res.expanded) <= 30:
            for i, st in enumerate(res.expanded):
                print(f"  {i}: {_fmt_state(st)}")


def _cmd_check(args: argparse.Namespace) -> int:
    problem = load_problem(args.file)
    transcript = None
    if args.dump_smt2:
        d = Path(args.dump_smt2)
        d.mkdir(parents=True, exist_ok=True)
        transcript = str(d / f"{problem.name}.{args.engine}.smt2")
    cfg = EngineConfig(
        max_bound=args.max_bound,
        timeout_ms=args.timeout_ms,
        solver=_solver_config(args, transcript),
        validate=args.validate,
    )
    res = run(problem, Engine(args.engine), cfg)
    if args.dot and res.graph is not None:
        d = Path(args.dot)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{problem.name}.{args.engine}.dot").write_text(res.graph.to_dot())
    if args.format == "json":
        out = {"file": args.file, "problem": problem.name, **res.to_dict()}
        print(json.dumps(out, indent=2))
    else:
        _print_text(res, problem.name)
    return _VERDICT_EXIT[res.verdict]


def _cmd_dump(args: argparse.Namespace) -> int:
    sys.stdout.write(dump_native(load_problem(args.file)))
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    try:
        engines = [Engine(e.strip()) for e in args.engines.split(",") if e.strip()]
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    files = benchmod.discover(args.dir)
    if not files:
        print(f"error: no .sp or .smt2 files under {args.dir}", file=sys.stderr)
        return EXIT_USAGE
    solver_cmd = shlex.split(args.solver_cmd) if args.solver_cmd else None
    rows = benchmod.run_bench(files, engines, args.max_bound, args.timeout_ms,
                              solver_cmd, args.seed, jobs=args.jobs,
                              validate=args.validate)
    benchmod.write_csv(rows, args.out)
    if Engine.BMC in engines and Engine.ABMC_B in engines:
        scatter = str(Path(args.out).with_suffix("")) + "_scatter.csv"
        benchmod.write_scatter_csv(rows, scatter)
    print(benchmod.summarize(rows))
    print(f"wrote {args.out}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        signal.signal(signal.SIGPIPE, signal.SIG_DFL)  # die quietly under head
    except (AttributeError, ValueError):
        pass
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except SexpError as e:
        print(f"error: {getattr(args, 'file', '?')}:{e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        # problems rejected outside the parsers (bad structure, not syntax)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CexError as e:
        print(f"internal error: counterexample failed validation: {e}",
              file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
