"""Command-line surface.

JSON reports go to stdout; a short human summary goes to stderr.  Exit
codes: 0 success, 1 verification failure, 2 usage error.
"""

import argparse
import json
import sys

from .circuit import parse, serialize
from .classical import learn_classical
from .noise import NoiseProfile, estimate_asp
from .oracle import QueryLedger, SecretString, make_teacher, oracle_diagonal
from .quantum import run_quantum_learn
from .synth import build_full_circuit, synth_diagonal
from .transpile import CouplingGraph, QubitMapping, transpile
from .verify import SUITES, run_suites

SCHEMA_VERSION = 1


def _report(command: str, params: dict, payload: dict) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "parameters": params}
    doc.update(payload)
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _secret(parser: argparse.ArgumentParser, text: str) -> SecretString:
    if not text or any(c not in "01" for c in text):
        parser.error(f"--secret must be a nonempty binary string, got {text!r}")
    return SecretString.from_string(text)


def _amplitudes(vec) -> list:
    """Complex amplitudes as [re, im] pairs for the JSON trace."""
    return [[float(a.real), float(a.imag)] for a in vec]


def _cmd_learn(parser, args) -> int:
    s = _secret(parser, args.secret)
    if args.mode == "classical":
        ledger = QueryLedger()
        recovered, queries = learn_classical(make_teacher(s, ledger), s.n)
        payload = {
            "recovered": "".join(map(str, recovered)),
            "classical_queries": ledger.classical_queries,
            "quantum_oracle_uses": 0,
            "total_queries": queries,
        }
    else:
        result = run_quantum_learn(s, trace=args.trace)
        payload = {
            "recovered": "".join(map(str, result.recovered)),
            "classical_queries": result.classical_queries,
            "quantum_oracle_uses": result.quantum_uses,
            "total_queries": result.total_queries,
        }
        if args.trace:
            payload["trace"] = [
                {
                    "round": rt.round_index,
                    "q_prev": rt.q_prev,
                    "q_cur": rt.q_cur,
                    "prefix": "".join(map(str, rt.prefix)),
                    "candidates": ["".join(map(str, c)) for c in rt.candidates],
                    "alphas": {f"{k1}{k2}": a for (k1, k2), a in rt.alphas.items()},
                    "states": {
                        name: _amplitudes(vec)
                        for name, vec in (
                            ("superposed", rt.superposed),
                            ("phased", rt.phased),
                            ("collapsed", rt.collapsed),
                        )
                    },
                }
                for rt in result.traces
            ]
    ok = payload["recovered"] == str(s)
    _report("learn", {"secret": str(s), "mode": args.mode}, payload)
    print(
        f"learn: recovered {payload['recovered']} with {payload['total_queries']} queries",
        file=sys.stderr,
    )
    return 0 if ok else 1


def _cmd_synth(parser, args) -> int:
    s = _secret(parser, args.secret)
    if s.n < 2:
        parser.error("synth needs a secret of at least 2 bits")
    try:
        circuit = build_full_circuit(s, t=args.t, gray=not args.no_gray)
        layout_t = circuit.width - s.n
        oracle_block = synth_diagonal(oracle_diagonal(s, layout_t), gray=not args.no_gray)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        with open(args.out, "w") as handle:
            handle.write(serialize(circuit))
    except OSError as exc:
        print(f"synth: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    _report(
        "synth",
        {"secret": str(s), "t": args.t, "gray": not args.no_gray},
        {
            "out": args.out,
            "width": circuit.width,
            "gate_counts": circuit.gate_counts(),
            "oracle_gate_counts": oracle_block.gate_counts(),
            "depth": circuit.depth(),
        },
    )
    print(f"synth: wrote {circuit.width}-qubit circuit to {args.out}", file=sys.stderr)
    return 0


def _load_graph(parser, name: str) -> CouplingGraph:
    try:
        if name.endswith(".json"):
            return CouplingGraph.from_json(name)
        return CouplingGraph.named(name)
    except (OSError, KeyError, ValueError) as exc:
        parser.error(f"bad --target {name!r}: {exc}")


def _cmd_transpile(parser, args) -> int:
    try:
        with open(args.infile) as handle:
            circuit = parse(handle.read())
    except OSError as exc:
        parser.error(f"cannot read {args.infile}: {exc}")
    except ValueError as exc:
        print(f"transpile: parse failure: {exc}", file=sys.stderr)
        return 1
    graph = _load_graph(parser, args.target)
    mapping = None
    if args.mapping:
        try:
            mapping = QubitMapping(tuple(int(p) for p in args.mapping.split(",")))
        except ValueError as exc:
            parser.error(f"bad --mapping: {exc}")
    try:
        final, report = transpile(circuit, graph, mapping=mapping, opt=bool(args.opt))
    except ValueError as exc:
        parser.error(str(exc))
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(serialize(final))
    _report(
        "transpile",
        {"in": args.infile, "target": args.target, "opt": args.opt},
        {"out": args.out, "report": report.to_dict()},
    )
    counts = report.final_counts
    print(
        f"transpile: mapping {report.mapping}, cx {counts['cx']}, rz {counts['rz']}, "
        f"sx {counts['sx']}, x {counts['x']}, depth {report.final_depth}, "
        f"legal {report.legal}",
        file=sys.stderr,
    )
    return 0 if report.legal else 1


def _cmd_asp(parser, args) -> int:
    s = _secret(parser, args.secret)
    if args.noise == "default":
        profile = None  # zero noise
    elif args.noise == "quito":
        profile = NoiseProfile.quito()
    else:
        try:
            profile = NoiseProfile.from_json(args.noise)
        except (OSError, ValueError, KeyError) as exc:
            parser.error(f"bad --noise {args.noise!r}: {exc}")
    try:
        report = estimate_asp(s, profile, trials=args.trials, shots=args.shots, seed=args.seed)
    except ValueError as exc:
        parser.error(str(exc))
    _report(
        "asp",
        {"secret": str(s), "noise": args.noise, "trials": args.trials, "shots": args.shots, "seed": args.seed},
        {"asp": report.to_dict()},
    )
    print(f"asp: mean {report.mean:.4f} +- {report.stddev:.4f}", file=sys.stderr)
    return 0


def _cmd_verify(parser, args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    rows = run_suites(names, max_n=args.max_n)
    for row in rows:
        print(row.line(), file=sys.stderr)
    passed = sum(r.passed for r in rows)
    print(f"verify: {passed}/{len(rows)} checks passed", file=sys.stderr)
    _report(
        "verify",
        {"suite": args.suite, "max_n": args.max_n},
        {"checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in rows]},
    )
    return 0 if passed == len(rows) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lcplearn",
        description="Learn secret bit strings through a longest-common-prefix oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="run a learner against a simulated teacher")
    p.add_argument("--secret", required=True, help="the hidden bit string")
    p.add_argument("--mode", choices=("classical", "quantum"), default="quantum")
    p.add_argument("--trace", action="store_true", help="include per-round snapshots")

    p = sub.add_parser("synth", help="emit the full learner circuit as text")
    p.add_argument("--secret", required=True)
    p.add_argument("--t", type=int, default=None, help="override the q register width")
    p.add_argument("--no-gray", action="store_true", help="per-term compute/uncompute chains")
    p.add_argument("--out", required=True)

    p = sub.add_parser("transpile", help="fit a circuit file onto a coupling graph")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--target", required=True, help="linear3, quito, or a JSON graph file")
    p.add_argument("--opt", type=int, choices=(0, 1), default=1)
    p.add_argument("--mapping", default=None, help="comma-separated physical qubits, else auto")
    p.add_argument("--out", default=None)

    p = sub.add_parser("asp", help="Monte-Carlo success probability under noise")
    p.add_argument("--secret", required=True)
    p.add_argument("--noise", default="default", help="default (no noise), quito, or a JSON file")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--shots", type=int, default=8192)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--max-n", type=int, default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "learn": _cmd_learn,
        "synth": _cmd_synth,
        "transpile": _cmd_transpile,
        "asp": _cmd_asp,
        "verify": _cmd_verify,
    }
    return handlers[args.command](parser, args)


if __name__ == "__main__":
    sys.exit(main())
