"""Command-line front end: ``gpent <subcommand> ...``.

Output is JSON by default (``--format table`` for people). Exit codes:
0 success, 1 certified violation or infeasibility, 2 bad input,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .constraints import (
    ConstraintError,
    build_system,
    check_gen,
    required_labels,
    search_counterexamples,
    solve_feasibility,
)
from .ghz_calculus import CombinationError, combination_profile, label_value as ghz_label_value, parse_combination
from .measures import gre_state_profile, label_value
from .parties import (
    LabelError,
    classify_label,
    count_bi_gp_all,
    count_ghz,
    count_labels,
    enumerate_labels,
    parse_label,
)
from .separable import DEFAULT_SEED, Budget
from .simplex import NumericalStallError
from .states import StateError, load_state

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# --- helpers ----------------------------------------------------------------

def _budget(args) -> Budget:
    text = args.budget
    if text is None:
        data = {}
    else:
        if os.path.isfile(text):
            with open(text) as fh:
                text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--budget is neither a JSON object nor a file: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("--budget must be a JSON object")
    if args.seed is not None:
        data["seed"] = args.seed
    try:
        return Budget.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _seed(args) -> int:
    return DEFAULT_SEED if args.seed is None else args.seed


def _envelope(args, budget: Budget, body: dict) -> dict:
    return {"tool_version": __version__, "seed": budget.seed if args.seed is None else args.seed,
            "budget": budget.to_dict(), **body}


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [[str(c) for c in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(headers)]
    fmt = "  ".join("{:<%d}" % w for w in widths)
    lines = [fmt.format(*headers), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*r) for r in cells]
    return "\n".join(lines)


def _emit(args, obj: dict | None, table: str, lines: str | None = None) -> None:
    if args.format == "table":
        text = table + "\n"
    elif lines is not None:
        text = lines
    else:
        text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _profile_source(args, budget: Budget):
    """Profile, party count and a description from --state or --combination."""
    if (args.state is None) == (args.combination is None):
        raise UsageError("give exactly one of --state or --combination")
    if args.combination is not None:
        comb = parse_combination(args.combination, args.parties)
        return combination_profile(comb), comb.N, {"combination": comb.text()}
    psi = load_state(args.state)
    N = psi.n_parties
    if args.parties is not None and args.parties != N:
        raise UsageError(f"--parties {args.parties} does not match the {N}-party state")
    return gre_state_profile(psi, required_labels(N), budget), N, {"state": args.state}


# --- subcommands -------------------------------------------------------------

def cmd_enumerate(args) -> int:
    if args.parties is None:
        raise UsageError("--parties is required")
    N = args.parties
    labels = enumerate_labels(N)
    rows = [{"label": lab.text(), "class": str(classify_label(lab, N))} for lab in labels]
    summary = {"labels": count_labels(N), "ghz": count_ghz(N), "bGa": count_bi_gp_all(N)}
    budget = _budget(args)
    table = _table(["label", "class"], [[r["label"], r["class"]] for r in rows])
    table += "\n\n" + "  ".join(f"{k}={v}" for k, v in summary.items())
    _emit(args, _envelope(args, budget, {"N": N, "labels": rows, "summary": summary}), table)
    return EXIT_OK


def cmd_entanglement(args) -> int:
    if args.state is None or args.label is None:
        raise UsageError("--state and --label are required")
    budget = _budget(args)
    psi = load_state(args.state)
    label = parse_label(args.label)
    if max(label.parties) > psi.n_parties:
        raise UsageError(f"{label} refers to parties beyond {psi.n_parties}")
    v = label_value(psi, label, budget)
    body = {"label": label.text(), **v.to_dict()}
    table = _table(["label", "value", "kind", "raw_nats", "converged"],
                   [[label.text(), f"{v.value:.10g}", v.kind.value, f"{v.raw_nats:.10g}", v.converged]])
    _emit(args, _envelope(args, budget, body), table)
    return EXIT_OK


def cmd_ghz_calculus(args) -> int:
    if args.combination is None:
        raise UsageError("--combination is required")
    budget = _budget(args)
    comb = parse_combination(args.combination, args.parties)
    if args.label is not None:
        label = parse_label(args.label)
        if max(label.parties) > comb.N:
            raise UsageError(f"{label} refers to parties beyond N={comb.N}")
        values = {label: ghz_label_value(comb, label)}
    else:
        values = {lab: v.value for lab, v in combination_profile(comb).items()}
    body = {
        "combination": comb.text(),
        "N": comb.N,
        "values": {lab.text(): {"value": str(q), "float": float(q)} for lab, q in values.items()},
    }
    table = _table(["label", "value"], [[lab.text(), str(q)] for lab, q in values.items()])
    _emit(args, _envelope(args, budget, body), table)
    return EXIT_OK


def cmd_feasibility(args) -> int:
    budget = _budget(args)
    profile, N, source = _profile_source(args, budget)
    system = build_system(profile, N)
    result = solve_feasibility(system, exact_verify=args.exact_verify)
    res = result.to_dict(system)
    body = {**source, "N": N, "system": system.to_dict(), "result": res}
    if result.feasible:
        table = _table(["variable", "x"], sorted(res["x"].items()))
        table += f"\n\nfeasible  max_residual={res['max_residual']:.3g}"
    else:
        table = _table(["row", "y"], [[r, y] for r, y in zip(res["rows"], res["y"]) if y != 0])
        table += f"\n\ninfeasible  margin={res['margin']}"
    if result.verification is not None:
        table += f"  exact_verification={'ok' if result.verification.ok else result.verification.message}"
    _emit(args, _envelope(args, budget, body), table)
    if result.verification is not None and not result.verification.ok:
        return EXIT_NUMERICAL
    return EXIT_OK if result.feasible else EXIT_VIOLATION


def cmd_check_gen(args) -> int:
    budget = _budget(args)
    profile, N, source = _profile_source(args, budget)
    rows = check_gen(profile, N)
    body = {**source, "N": N, "rows": [r.to_dict() for r in rows]}
    table = _table(["bipartition", "lhs", "rhs", "verdict"],
                   [[r.bipartition.text(), f"{r.lhs:.10g}", f"{r.rhs:.10g}", r.verdict] for r in rows])
    _emit(args, _envelope(args, budget, body), table)
    return EXIT_VIOLATION if any(r.verdict == "VIOLATED" for r in rows) else EXIT_OK


def cmd_search(args) -> int:
    if args.parties is None:
        raise UsageError("--parties is required")
    budget = _budget(args)
    seed = _seed(args)
    trials = 10 if args.trials is None else args.trials
    report = search_counterexamples(args.parties, trials, seed, budget)
    s = report.summary()
    rows = []
    for r in report.records:
        kinds = ",".join(sorted({v["kind"] for v in r.violations})) or "-"
        feas = "-" if r.feasibility is None else ("feasible" if r.feasibility.feasible else "infeasible")
        rows.append([r.trial, "yes" if r.skipped else "no", feas, kinds])
    table = _table(["trial", "skipped", "system", "violations"], rows)
    table += f"\n\n{s['result']}: {s['violations']} violation(s) in {s['trials']} trial(s), {s['skipped']} skipped"
    _emit(args, None, table, lines=report.json_lines())
    return EXIT_VIOLATION if report.violations else EXIT_OK


COMMANDS = {
    "enumerate": (cmd_enumerate, "list all entanglement labels of N parties"),
    "entanglement": (cmd_entanglement, "entanglement of one label for a state file"),
    "ghz-calculus": (cmd_ghz_calculus, "exact label values of a GHZ combination"),
    "feasibility": (cmd_feasibility, "solve the copy-ratio system for a state or combination"),
    "check-gen": (cmd_check_gen, "per-bipartition inequalities for a state or combination"),
    "search": (cmd_search, "random search for states violating the constraints"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--parties", type=int, help="number of parties N")
    common.add_argument("--state", help="pure state JSON file ({dims, amplitudes})")
    common.add_argument("--label", help='entanglement label, e.g. "(12)(3)"')
    common.add_argument("--combination", help='GHZ combination, e.g. "g(12)=1, g(123)=1/2"')
    common.add_argument("--budget", help="optimizer budget as JSON text or a JSON file")
    common.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--trials", type=int, help="search trials (default 10)")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--exact-verify", action="store_true",
                        help="re-check the certificate in exact rational arithmetic")

    parser = argparse.ArgumentParser(prog="gpent", description="Multipartite entanglement labels and GHZ constraints.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    func = COMMANDS[args.command][0]
    try:
        return func(args)
    except (UsageError, LabelError, StateError, CombinationError, ConstraintError, OSError) as exc:
        print(f"gpent {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalStallError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"gpent {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
