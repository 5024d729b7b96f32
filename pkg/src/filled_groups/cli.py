"""Command-line front end.

Every invocation prints one JSON object on stdout (``--pretty`` indents it)
and exits with 0 when a decision was reached, 2 when the budget ran out
first, and 3 on bad input.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
import time
from typing import Any, Sequence

import numpy as np

from . import __version__
from .classifier import ClassifierFlags, classify_filled, known_filled_members
from .elemset import ElemSet
from .errors import ExhaustiveCapExceeded, FilledGroupsError, ParseError
from .groups import build_group
from .search import SearchConfig, Verdict, exhaustive_filled_check, random_nonfilling_lmpfs, verify_witness
from .specs import canonical, parse_group_spec, spec_order
from .witnesses import (
    central_c4_witness,
    d44_witness,
    dihedral_plan,
    dihedral_witness,
    extraspecial_witness,
    witness_record,
)

SCHEMA = 1
EXIT_DECIDED, EXIT_UNDECIDED, EXIT_INPUT = 0, 2, 3
LEDGER_ENV = "FILLED_GROUPS_LEDGER"


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which means "undecided" here
        raise InputError(message)


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed for random search")
    p.add_argument("--max-restarts", type=int, default=10_000)
    p.add_argument("--time-budget", type=float, default=60.0, help="seconds for random search")
    p.add_argument("--involution-seed", choices=("auto", "on", "off"), default="auto")
    p.add_argument("--no-2kp-shortcut", action="store_true")
    p.add_argument("--no-orbit-reduction", action="store_true")
    p.add_argument("--parallel", type=int, default=1, metavar="W")
    p.add_argument("--exhaustive-opt-in", action="store_true", help="allow exhaustive search at order >= 64")
    p.add_argument("--no-table", action="store_true", help="search groups of order <= 32 instead of using the table")
    p.add_argument("--pure-search", action="store_true", help="skip every shortcut rule")
    p.add_argument("--with-witness", action="store_true", help="attach a witness to rule-based negative verdicts")
    p.add_argument("--backend", choices=("compiled", "python"), default=None)
    p.add_argument("--ledger", default=None, help=f"JSON Lines file to append to (default ${LEDGER_ENV})")
    p.add_argument("--pretty", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="filled-groups", description="Decide whether finite groups are filled.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in (
        ("classify", "full decision procedure"),
        ("find-nfs", "random search for a non-filling locally maximal product-free set"),
        ("exhaustive", "exhaustive search"),
    ):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("spec")
    wit = sub.add_parser("witness", help="explicit non-filling sets")
    wsub = wit.add_subparsers(dest="family", required=True, parser_class=_Parser)
    wsub.add_parser("dihedral", parents=[common]).add_argument("n", type=int)
    wsub.add_parser("d44", parents=[common])
    wsub.add_parser("extraspecial", parents=[common]).add_argument("spec")
    wsub.add_parser("esc4", parents=[common]).add_argument("spec")
    ver = sub.add_parser("verify", parents=[common], help="check a set given as JSON")
    ver.add_argument("spec")
    ver.add_argument("--set", dest="set_json", required=True, help='JSON array of labels or indices, e.g. ["x^3","y"]')
    tab = sub.add_parser("table", parents=[common], help="known filled groups of an order <= 32")
    tab.add_argument("order", type=int)
    return parser


def _config(args) -> SearchConfig:
    try:
        return SearchConfig(
            rng_seed=args.seed,
            max_restarts=args.max_restarts,
            time_budget=args.time_budget,
            involution_seed=args.involution_seed,
            parallel_width=args.parallel,
            orbit_reduction=not args.no_orbit_reduction,
            exhaustive_opt_in=args.exhaustive_opt_in,
            backend=args.backend,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, ElemSet):
        return obj.labels()
    return obj


def _filled_value(v: Verdict) -> bool | str:
    return "undecided" if v.filled is None else v.filled


def _verdict_payload(group, v: Verdict) -> dict:
    out = {
        "spec": group.spec_string,
        "order": group.order,
        "filled": _filled_value(v),
        "rule_chain": list(v.rule_chain),
        "witness": v.witness.labels() if v.witness is not None else None,
        "stats": v.stats,
        "details": v.details,
    }
    if v.witness is not None:
        out["witness_checks"] = verify_witness(group, v.witness).as_dict()
    return out


def _parse_set(group, text: str) -> ElemSet:
    try:
        items = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--set is not valid JSON: {exc}") from exc
    if not isinstance(items, list) or not all(isinstance(i, (int, str)) and not isinstance(i, bool) for i in items):
        raise InputError("--set must be a JSON array of element labels or indices")
    try:
        return ElemSet.from_items(group, items)
    except (KeyError, ValueError) as exc:
        raise InputError(f"--set names an element not in {group.spec_string}: {exc}") from exc


def _run(args) -> tuple[int, dict]:
    cmd = args.command
    if cmd == "table":
        return EXIT_DECIDED, {"order": args.order, "members": known_filled_members(args.order)}
    if cmd == "witness":
        return _run_witness(args)
    group = build_group(args.spec)
    cfg = _config(args)
    if cmd == "classify":
        flags = ClassifierFlags(
            use_2kp_shortcut=not args.no_2kp_shortcut,
            exhaustive_opt_in=args.exhaustive_opt_in,
            budgets=cfg,
            table_bypass=args.no_table,
            pure_search=args.pure_search,
            attach_witness=args.with_witness,
        )
        v = classify_filled(group, flags)
        return (EXIT_UNDECIDED if v.filled is None else EXIT_DECIDED), _verdict_payload(group, v)
    if cmd == "find-nfs":
        stats: dict = {}
        w = random_nonfilling_lmpfs(group, cfg, stats)
        v = Verdict(False, w, ["nfs-witness"], stats) if w is not None else Verdict(None, None, ["nfs-exhausted", "undecided-at-budget"], stats)
        return (EXIT_DECIDED if w is not None else EXIT_UNDECIDED), _verdict_payload(group, v)
    if cmd == "exhaustive":
        try:
            v = exhaustive_filled_check(group, cfg)
        except ExhaustiveCapExceeded as exc:
            v = Verdict(None, None, ["undecided-at-budget"], {"undecided_reason": str(exc)})
            return EXIT_UNDECIDED, _verdict_payload(group, v)
        return EXIT_DECIDED, _verdict_payload(group, v)
    if cmd == "verify":
        s = _parse_set(group, args.set_json)
        return EXIT_DECIDED, {"spec": group.spec_string, "set": s.labels(), "checks": verify_witness(group, s).as_dict()}
    raise InputError(f"unknown command {cmd}")


def _run_witness(args) -> tuple[int, dict]:
    fam = args.family
    if fam == "dihedral":
        s = dihedral_witness(args.n)
        plan = dihedral_plan(args.n)
        x = s.group.index_of("x")
        rec = witness_record(
            s,
            s.group.power(x, 3 * plan.k),
            family=plan.family,
            k=plan.k,
            set_name=plan.set_name,
            source=plan.source,
        )
    elif fam == "d44":
        rec = witness_record(d44_witness())
    elif fam == "extraspecial":
        group = build_group(args.spec)
        s = extraspecial_witness(group)
        rec = witness_record(s, group.frame.Q_gens[0], K_kind=group.frame.K_kind)
    else:
        group = build_group(args.spec)
        s = central_c4_witness(group, args.seed)
        rec = witness_record(s, group.frame.c4_gen, seed=args.seed)
    return EXIT_DECIDED, rec


def _ledger_path(args) -> str | None:
    return getattr(args, "ledger", None) or os.environ.get(LEDGER_ENV) or None


def _append_ledger(path: str, record: dict) -> None:
    line = json.dumps(record, sort_keys=True) + "\n"
    fd = os.open(path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
    try:
        os.write(fd, line.encode())
    finally:
        os.close(fd)


def run_command(argv: Sequence[str] | None = None, stdout=None) -> int:
    """Run one CLI invocation; returns the exit code."""
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    t0 = time.monotonic()
    pretty = "--pretty" in argv
    args = None
    try:
        args = build_parser().parse_args(argv)
        code, payload = _run(args)
    except ParseError as exc:
        code, payload = EXIT_INPUT, {"error": "ParseError", "message": str(exc), "offset": exc.offset, "expected": list(exc.expected)}
    except (InputError, FilledGroupsError) as exc:
        code, payload = EXIT_INPUT, {"error": type(exc).__name__, "message": str(exc)}
    elapsed_ms = round((time.monotonic() - t0) * 1000, 3)
    out = {"schema": SCHEMA, "command": args.command if args is not None else None, **_jsonable(payload), "elapsed_ms": elapsed_ms}
    stdout.write(json.dumps(out, indent=2 if pretty else None) + "\n")
    if args is not None and code != EXIT_INPUT:
        path = _ledger_path(args)
        if path:
            _append_ledger(
                path,
                {
                    "spec_string": out.get("spec", out.get("group_spec")),
                    "order": out.get("order"),
                    "filled": out.get("filled"),
                    "rule_chain": out.get("rule_chain"),
                    "witness": out.get("witness", out.get("set")),
                    "seed": args.seed,
                    "argv": argv,
                    "elapsed_ms": elapsed_ms,
                    "tool_version": __version__,
                    "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
                },
            )
    return code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()


__all__ = ["build_parser", "canonical", "main", "parse_group_spec", "run_command", "spec_order"]
