"""Command-line front end: check, run, compile, simulate, verify, bench."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pbpc.analysis import classify_program
from pbpc.circuit import CircuitError, SimulationError, deserialize, run_circuit, serialize
from pbpc.compiler import STRATEGIES, CompileError, compile_program
from pbpc.frontend import DesugarError, ParseError, load_program
from pbpc.harness.bench import bench_scaling, parse_range
from pbpc.harness.corpus import UnknownExample, example_source
from pbpc.harness.verify import DEFAULT_SEED, RunError, verify_equivalence
from pbpc.semantics import run_program
from pbpc.statevec import format_state, parse_state

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_WF_WIDTH = 2
EXIT_UNSUPPORTED = 3
EXIT_VERIFY_FAILED = 4
EXIT_COMPILE = 5
EXIT_RUN = 6
EXIT_USAGE = 64
EXIT_PARSE = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _source(spec: str) -> tuple[str, str]:
    """Program text from a file, or from a built-in id (``pairs``, ``sum(3)``, ``builtin:qft``)."""
    path = Path(spec)
    if path.is_file():
        return path.stem, path.read_text()
    ident = spec[len("builtin:") :] if spec.startswith("builtin:") else spec
    for cand in (ident, path.stem):
        try:
            return cand, example_source(cand)
        except UnknownExample:
            continue
    raise UsageError(f"no such file or built-in example: {spec}")


def _load(spec: str):
    name, text = _source(spec)
    return name, load_program(text)


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, sort_keys=True) if args.json else text)


def cmd_check(args) -> int:
    name, p = _load(args.program)
    rep = classify_program(p)
    lines = [f"{name}: {rep.label}"]
    lines += [f"  {k}: width={v.width} rank={v.rank} recursive={v.recursive}" for k, v in rep.procs.items()]
    lines += [f"  {d}" for d in rep.diagnostics]
    _emit(args, {"program": name, **rep.to_dict()}, "\n".join(lines))
    if rep.pbp:
        return EXIT_OK
    return EXIT_WF_WIDTH if rep.wf and rep.width_le_1 else EXIT_UNSUPPORTED


def cmd_run(args) -> int:
    name, p = _load(args.program)
    psi = parse_state(args.input)
    r = run_program(p, psi)
    payload = {"program": name, "outcome": r.outcome.value, "time": r.time, "state": format_state(r.state)}
    text = f"{r.outcome.value} (time {r.time})\n" + "\n".join(
        f"  {a['basis']}: {a['re']:+.12g} {a['im']:+.12g}i" for a in payload["state"]
    )
    _emit(args, payload, text)
    return EXIT_OK if r.ok else EXIT_RUN


def cmd_compile(args) -> int:
    name, p = _load(args.program)
    out = compile_program(p, args.n, args.strategy)
    if args.out:
        Path(args.out).write_text(serialize(out.circuit) + "\n")
    s = out.stats
    stats = {
        "size": s["size"],
        "depth": s["depth"],
        "wires": out.circuit.wires,
        "ancillas": out.circuit.ancillas,
        "anchors": s["anchor_events"],
        "merges": s["merge_events"],
        "lowered_size": s["lowered_size"],
    }
    if args.stats or args.json or not args.out:
        _emit(args, stats, " ".join(f"{k}={v}" for k, v in stats.items()))
    return EXIT_OK


def cmd_simulate(args) -> int:
    circ = deserialize(Path(args.circuit).read_text())
    psi = parse_state(args.input)
    out, leak = run_circuit(circ, psi)
    payload = {"state": format_state(out), "ancilla_leak": leak}
    text = "\n".join(f"  {a['basis']}: {a['re']:+.12g} {a['im']:+.12g}i" for a in payload["state"])
    _emit(args, payload, text + f"\nancilla leak {leak:.3g}")
    return EXIT_OK


def cmd_verify(args) -> int:
    name, p = _load(args.program)
    rep = verify_equivalence(p, args.n, args.trials, args.tol, args.strategy, args.seed, program_id=name)
    _emit(
        args,
        rep.to_dict(),
        f"{name} n={rep.n} {rep.strategy}: max deviation {rep.max_deviation:.3g} "
        f"over {rep.trials} random + {rep.basis_states} basis states -> {'pass' if rep.passed else 'FAIL'}",
    )
    return EXIT_OK if rep.passed else EXIT_VERIFY_FAILED


def cmd_bench(args) -> int:
    if bool(args.program) == bool(args.builtin):
        raise UsageError("give exactly one of a program file or --builtin")
    name, p = _load(args.program or f"builtin:{args.builtin}")
    try:
        ns = parse_range(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = bench_scaling(p, args.strategy, ns, name, jobs=args.jobs, check_orthogonality=args.check)
    if args.json:
        text = json.dumps(rep.to_dict(timing=args.timing), sort_keys=True)
    elif args.csv:
        text = rep.to_csv().rstrip("\n")
    else:
        lines = [f"{r.n:>6} size={r.size} depth={r.depth} time={r.time} ancillas={r.ancillas}" for r in rep.rows]
        if rep.slope is not None:
            lines.append(f"slope {rep.slope:.3f} (residual {rep.residual:.3g})")
        text = "\n".join(lines)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pbpc", description="Compiler toolkit for recursive programs with quantum control.")
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="cmd", parser_class=_Parser)
    sub.required = True

    def common(sp):
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.add_argument("--seed", type=lambda s: int(s, 0), default=argparse.SUPPRESS)

    sp = sub.add_parser("check", help="classify a program")
    sp.add_argument("program")
    common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("run", help="run the reference interpreter")
    sp.add_argument("program")
    sp.add_argument("--input", required=True, help="bitstring or JSON [[re, im], ...]")
    common(sp)
    sp.set_defaults(fn=cmd_run)

    sp = sub.add_parser("compile", help="compile to a circuit")
    sp.add_argument("program")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--strategy", choices=STRATEGIES, default="merge")
    sp.add_argument("--out")
    sp.add_argument("--stats", action="store_true")
    common(sp)
    sp.set_defaults(fn=cmd_compile)

    sp = sub.add_parser("simulate", help="simulate a serialized circuit")
    sp.add_argument("circuit")
    sp.add_argument("--input", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("verify", help="compare compiled circuit and interpreter")
    sp.add_argument("program")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--strategy", choices=STRATEGIES, default="merge")
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("bench", help="size scaling over a range of n")
    sp.add_argument("program", nargs="?")
    sp.add_argument("--builtin")
    sp.add_argument("--strategy", choices=STRATEGIES, default="merge")
    sp.add_argument("--n", default="8:64:8", help="a:b:s inclusive, or a comma list")
    sp.add_argument("--csv", action="store_true")
    sp.add_argument("--out")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--check", action="store_true", help="assert orthogonality while compiling")
    sp.add_argument("--timing", action="store_true", help="include wall-clock seconds in JSON")
    common(sp)
    sp.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"pbpc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DesugarError) as exc:
        print(f"pbpc: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CompileError as exc:
        print(f"pbpc: compile error: {exc}", file=sys.stderr)
        return EXIT_COMPILE
    except (RunError, SimulationError, CircuitError, ValueError) as exc:
        print(f"pbpc: {exc}", file=sys.stderr)
        return EXIT_RUN
    except Exception as exc:  # noqa: BLE001
        print(f"pbpc: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
