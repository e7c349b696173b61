"""Command-line front end: ``ctd <verb> ...``.

Every verb builds a script (from ``--script`` and/or inline flags), appends
the query for that verb, and runs it.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .closure import check_derivation, format_derivation, load_derivation
from .dsl import ParseError, Query, parse
from .runner import EXIT_FAIL, EXIT_OK, EXIT_PARSE, Report, RunFlags, format_report, model_from_json, format_model, run


def data_path(name: str) -> Path:
    return Path(str(resources.files("ctdlab") / "data" / name))


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--script", help="read declarations from a .ctd file")
    p.add_argument("--worlds", help="world names, space separated (default w0..w{n-1})")
    p.add_argument("--n", type=int, help="number of worlds when --worlds is absent")
    p.add_argument("--system", help="preset name or axiom list, e.g. CJ97 or '5a 5b 5e'")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, help="node budget per search")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--fail-fast", action="store_true")


def _with_model(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", help="obliteral, constructor call, or @file.json")


def _with_premises(p: argparse.ArgumentParser) -> None:
    p.add_argument("--premise", action="append", default=[],
                   help="'ob {a} in {a b}' or 'ought {a} given {a b}' (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctd", description="Conditional obligation model checker.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("run", help="run every query in a script")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--fail-fast", action="store_true")

    for verb, helptext in [("check", "check the model against the system"),
                           ("classify", "classify the model")]:
        p = sub.add_parser(verb, help=helptext)
        _common(p)
        _with_model(p)

    p = sub.add_parser("closure", help="least model of the premises")
    _common(p)
    _with_premises(p)
    p.add_argument("--goal", help="'{prop} in {context}'")
    p.add_argument("--save", help="write the least model as JSON")

    p = sub.add_parser("enumerate", help="list all models of the system")
    _common(p)

    p = sub.add_parser("independence", help="find a model of --hold violating --fail")
    _common(p)
    p.add_argument("--hold", required=True, help="axioms that must hold, space separated")
    p.add_argument("--fail", required=True, help="axiom that must fail")

    p = sub.add_parser("lemma", help="verify registered lemmas")
    _common(p)
    p.add_argument("id", nargs="?", default="all")

    p = sub.add_parser("anomaly", help="replay the grade derivation")
    p.add_argument("--derivation", help="check a saved derivation instead of the shipped one")
    p.add_argument("--json", action="store_true")
    return parser


def _script_source(args: argparse.Namespace, query: str) -> str:
    lines: list[str] = []
    if args.script:
        lines.append(Path(args.script).read_text(encoding="utf-8"))
    if args.worlds is not None:
        lines.append("worlds " + args.worlds)
    elif not args.script:
        lines.append("worlds " + " ".join(f"w{i}" for i in range(args.n or 0)))
    if args.system:
        lines.append("system " + args.system)
    model = getattr(args, "model", None)
    if model and not model.startswith("@"):
        lines.append("model cli = " + model)
    for prem in getattr(args, "premise", []):
        lines.append("premise " + prem)
    lines.append(query)
    return "\n".join(lines) + "\n"


def _query_text(args: argparse.Namespace) -> str:
    if args.verb == "closure":
        return "closure" + (f" goal {args.goal}" if args.goal else "")
    if args.verb == "independence":
        return f"independence {args.hold} minus {args.fail}"
    if args.verb == "lemma":
        return f"lemma {args.id}"
    return args.verb


def _flags(args: argparse.Namespace) -> RunFlags:
    return RunFlags(json=args.json, seed=args.seed, budget=args.budget, max_n=args.max_n,
                    fail_fast=args.fail_fast, workers=args.workers)


def _emit(report: Report, as_json: bool, out) -> int:
    out.write(report.to_json() if as_json else format_report(report) + "\n")
    return report.exit_code


def _parse_failure(err: ParseError, as_json: bool, out) -> int:
    if as_json:
        out.write(json.dumps({"worlds": [], "system": "", "sections": [], "exit_code": EXIT_PARSE,
                              "error": err.as_dict()}, indent=2) + "\n")
    else:
        out.write(f"parse error: {err}\n")
    return EXIT_PARSE


def _keep_last_query(script):
    """Drop queries that came from --script; only the verb's query runs."""
    stmts = script.statements
    last = max(i for i, s in enumerate(stmts) if isinstance(s, Query))
    return type(script)(tuple(s for i, s in enumerate(stmts) if not isinstance(s, Query) or i == last))


def _run_verb(args: argparse.Namespace, out) -> int:
    source = _script_source(args, _query_text(args))
    try:
        script = _keep_last_query(parse(source))
    except ParseError as err:
        return _parse_failure(err, args.json, out)
    model = getattr(args, "model", None)
    if model and model.startswith("@"):
        script = _inject_model(script, Path(model[1:]))
    report = run(script, _flags(args))
    if args.verb == "closure" and args.save:
        section = report.sections[-1]
        if "model" in section.data:
            Path(args.save).write_text(
                json.dumps({"worlds": report.worlds, "model": section.data["model"]}, indent=2) + "\n",
                encoding="utf-8",
            )
    return _emit(report, args.json, out)


def _inject_model(script, path: Path):
    """Bind a JSON-saved model as the current model, via its obliteral text."""
    from .dsl import ModelDef, parse_model_literal

    obj = json.loads(path.read_text(encoding="utf-8"))
    worlds = script.worlds
    if list(obj["worlds"]) != list(worlds):
        raise SystemExit(f"model file worlds {obj['worlds']} differ from script worlds {list(worlds)}")
    m = model_from_json(obj["model"], worlds)
    lit = parse_model_literal(format_model(m, worlds), worlds)
    stmts = list(script.statements)
    qi = next(i for i, s in enumerate(stmts) if isinstance(s, Query))
    stmts.insert(qi, ModelDef("cli", lit))
    return type(script)(tuple(stmts))


def _run_file(args: argparse.Namespace, out) -> int:
    try:
        script = parse(Path(args.file).read_text(encoding="utf-8"))
    except ParseError as err:
        return _parse_failure(err, args.json, out)
    return _emit(run(script, _flags(args)), args.json, out)


def _anomaly(args: argparse.Namespace, out) -> int:
    path = Path(args.derivation) if args.derivation else data_path("grades_anomaly.json")
    d = load_derivation(path)
    verdict = check_derivation(d)
    if args.json:
        out.write(json.dumps({"valid": bool(verdict), "errors": [
            {"step": i, "message": msg} for i, msg in verdict.errors]}, indent=2) + "\n")
    else:
        out.write(format_derivation(d) + "\n")
        for i, msg in verdict.errors:
            out.write(f"step {i}: {msg}\n")
        out.write("valid\n" if verdict else "INVALID\n")
    return EXIT_OK if verdict else EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.verb == "run":
        return _run_file(args, out)
    if args.verb == "anomaly":
        return _anomaly(args, out)
    return _run_verb(args, out)


if __name__ == "__main__":
    sys.exit(main())
