"""Command line front-end.

Exit codes: 0 completed (whatever the verdicts), 2 bad input, 3 internal
inconsistency between independent decision routes.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .automata import Fsm, enumerate_paths, parse_word, trim, word_token
from .errors import InternalInconsistency, LcabsError
from .lcomplete import approximate, is_l_complete
from .quantizer import CompiledSystem, QuantizerSpec, compile_spec
from .relations import Relation, build_R0, build_Rl, build_RX, reach_past_any, reach_past_at
from .simcheck import FLAVORS, check_relation, theorem1_report
from .windows import extract_windows

log = logging.getLogger("lcabs")

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3


@dataclass
class LoadedSystem:
    fsm: Fsm
    compiled: CompiledSystem | None = None

    def concretization(self, states) -> dict | None:
        if self.compiled is None:
            return None
        return {s: self.compiled.concretize[s] for s in states}


def read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh, parse_float=Fraction)


def load_system(path: str, mode: str | None = None) -> LoadedSystem:
    """Read a machine or a quantizer spec; quantizer specs are compiled first."""
    data = read_json(path)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    if "symbols" in data and "domain" in data:
        spec = QuantizerSpec.from_json(data)
        compiled = compile_spec(spec, mode)
        return LoadedSystem(compiled.fsm, compiled)
    m = Fsm.from_json(data)
    trimmed = trim(m)
    if trimmed != m:
        log.warning("%s: removed %d unreachable or dead states", path, len(m.states - trimmed.states))
    return LoadedSystem(trimmed)


def _relations_json(system: LoadedSystem, l: int) -> dict:
    approx = approximate(extract_windows(system.fsm, l))
    out = {}
    for rel in (build_R0(system.fsm, approx), build_Rl(system.fsm, approx), build_RX(system.fsm, l)):
        left = {a for a, _ in rel.pairs} | ({b for _, b in rel.pairs} if rel.flavor == "RX" else set())
        rel = Relation(rel.pairs, rel.flavor, rel.l, system.concretization(left))
        out[rel.flavor] = rel.to_json()
    return out


def cmd_windows(args) -> dict:
    system = load_system(args.system, args.mode)
    return extract_windows(system.fsm, args.l).to_json()


def cmd_approximate(args) -> dict:
    system = load_system(args.system, args.mode)
    approx = approximate(extract_windows(system.fsm, args.l))
    if args.dot:
        Path(args.dot).write_text(approx.fsm.to_dot("approx"), encoding="utf-8")
    return approx.to_json()


def cmd_check_lcomplete(args) -> dict:
    system = load_system(args.system, args.mode)
    verdict = is_l_complete(system.fsm, args.l)
    return {"l": args.l, **verdict.to_json()}


def cmd_report(args) -> dict:
    system = load_system(args.system, args.mode)
    report = theorem1_report(system.fsm, args.l)
    return report.to_json()


def cmd_reach(args) -> dict:
    system = load_system(args.system, args.mode)
    zeta = parse_word(args.past)
    if args.k is None:
        states = reach_past_any(system.fsm, zeta)
    else:
        states = reach_past_at(system.fsm, args.k, zeta)
    out = {"past": word_token(zeta), "k": args.k, "states": sorted(states)}
    if system.compiled is not None:
        values = system.compiled.concretize_states(states)
        out["concretization"] = values.to_json()
        out["text"] = str(values)
    return out


def cmd_relations(args) -> dict:
    system = load_system(args.system, args.mode)
    return {"l": args.l, **_relations_json(system, args.l)}


def cmd_check_sim(args) -> dict:
    system = load_system(args.system, args.mode)
    rel = Relation.from_json(read_json(args.relation))
    approx = approximate(extract_windows(system.fsm, args.l)).fsm
    left, right = {
        "sys-approx": (system.fsm, approx),
        "approx-sys": (approx, system.fsm),
        "sys-sys": (system.fsm, system.fsm),
    }[args.direction]
    verdict = check_relation(rel, left, right, args.flavor, args.l)
    return {"flavor": args.flavor, "l": args.l, "direction": args.direction, **verdict.to_json()}


def cmd_paths(args) -> dict:
    system = load_system(args.system, args.mode)
    words = enumerate_paths(system.fsm, args.depth, args.budget)
    return {"depth": args.depth, "words": sorted(word_token(w) for w in words)}


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lcabs",
        description="Asynchronous l-complete abstraction and simulation checks for finite machines.",
    )
    parser.add_argument("-o", "--output", help="write JSON here instead of standard output")
    parser.add_argument("--budget", type=_positive, help="node budget for path enumeration (default: $LCABS_NODE_BUDGET or 2000000)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, with_l=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("system", help="machine JSON or quantizer spec JSON")
        p.add_argument("--mode", choices=("point", "set"), help="override the quantizer time-scale mode")
        if with_l:
            p.add_argument("--l", type=_nonneg, required=True)
        p.set_defaults(func=func)
        return p

    add("windows", cmd_windows, "initial and recurring windows of length l+1")
    p = add("approximate", cmd_approximate, "strongest asynchronous l-complete approximation")
    p.add_argument("--dot", help="also write the machine as a DOT graph")
    add("check-lcomplete", cmd_check_lcomplete, "decide asynchronous l-completeness")
    add("report", cmd_report, "evaluate every similarity claim against the approximation")
    p = add("reach", cmd_reach, "states compatible with a recent past", with_l=False)
    p.add_argument("--past", required=True, help='space-separated symbols, "^" for the empty word')
    p.add_argument("--k", type=_nonneg, help="restrict to external step k")
    add("relations", cmd_relations, "emit R0, Rl and RX")
    p = add("check-sim", cmd_check_sim, "check a relation file against a simulation flavor")
    p.add_argument("--relation", required=True)
    p.add_argument("--flavor", choices=FLAVORS, required=True)
    p.add_argument(
        "--direction",
        choices=("sys-approx", "approx-sys", "sys-sys"),
        default="sys-approx",
        help="which machines the relation goes between (approximation at level l)",
    )
    p = add("paths", cmd_paths, "enumerate path labels up to a depth", with_l=False)
    p.add_argument("--depth", type=_nonneg, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        result = args.func(args)
    except InternalInconsistency as exc:
        print(f"lcabs: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (LcabsError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"lcabs: {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = json.dumps(result, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
