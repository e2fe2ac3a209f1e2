"""Command-line front end.

Machine-readable JSON-lines on stdout by default, human tables behind
--pretty.  Exit codes: 0 success or true verdict, 1 false verdict,
2 usage error, 3 resource error.  Default caps come from INQKH_CAP and
INQKH_CLAUSE_LIMIT when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .decide import delkh_valid, entails, inqb_member, s5_valid, taut
from .errors import InqkhError, ParseError, ResourceError
from .formula import Formula, atoms, is_pl, parse_formula, render_formula
from .fuzz import ROUTES, FuzzConfig, fuzz_equivalence
from .model import Model, validate_model
from .proofs import check_proof
from .resolution import (
    DEFAULT_CAP, render_resolution, resolution_space_size,
    resolutions_at, uniform_resolutions,
)
from .semantics import alternatives, classify, satisfies, supports, valid_on_model
from .transform import (
    DEFAULT_CLAUSE_LIMIT, eliminate_box, eliminate_kh, rl, rl_translation,
    s5_normal_form,
)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"environment variable {name} must be an integer, got {raw!r}")


def _load_model(path: str) -> Model:
    with open(path, encoding="utf-8") as fh:
        return validate_model(json.load(fh))


def _parse_state(text: str) -> list[str]:
    return [w for w in (part.strip() for part in text.split(",")) if w]


def _emit(doc: dict, pretty: bool):
    if pretty:
        _emit_pretty(doc)
    else:
        print(json.dumps(doc, ensure_ascii=False))


def _emit_pretty(doc: dict, indent: str = ""):
    for key, value in doc.items():
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _emit_pretty(value, indent + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{indent}{key}:")
            for item in value:
                _emit_pretty(item, indent + "  ")
                print(f"{indent}  --")
        else:
            print(f"{indent}{key}: {value}")


def _verdict_exit(result: bool) -> int:
    return EXIT_TRUE if result else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inqkh",
        description="Inquisitive logic as an epistemic logic of knowing how",
    )
    parser.add_argument("--pretty", action="store_true", help="human-readable output")
    parser.add_argument("--cap", type=int, default=None,
                        help="resolution-space cap (default INQKH_CAP or 10^6)")
    parser.add_argument("--clause-limit", type=int, default=None,
                        help="normal-form clause limit (default INQKH_CLAUSE_LIMIT or 4096)")
    sub = parser.add_subparsers(dest="command", required=True)

    cmd = sub.add_parser("parse", help="parse and re-print a formula")
    cmd.add_argument("formula")

    cmd = sub.add_parser("eval", help="satisfaction at a pointed model")
    cmd.add_argument("--model", required=True)
    cmd.add_argument("--world", default=None)
    cmd.add_argument("--route", choices=("resolution", "rl", "reduced"), default=None,
                     help="force a Kh evaluation route")
    cmd.add_argument("formula")

    cmd = sub.add_parser("support", help="support of a formula at a state")
    cmd.add_argument("--model", required=True)
    cmd.add_argument("--state", required=True, help="comma-separated world ids (empty for the inconsistent state)")
    cmd.add_argument("formula")

    cmd = sub.add_parser("resolutions", help="resolution space and actual resolutions")
    cmd.add_argument("--model", required=True)
    cmd.add_argument("--world", default=None)
    cmd.add_argument("--state", default=None)
    cmd.add_argument("formula")

    cmd = sub.add_parser("alternatives", help="maximal supporting states")
    cmd.add_argument("--model", required=True)
    cmd.add_argument("formula")

    cmd = sub.add_parser("classify", help="informative/inquisitive/question/statement flags")
    cmd.add_argument("--model", required=True)
    cmd.add_argument("formula")

    cmd = sub.add_parser("reduce", help="eliminate Kh and/or box")
    cmd.add_argument("--target", choices=("del", "el", "nf"), required=True)
    cmd.add_argument("formula")

    cmd = sub.add_parser("translate-rl", help="disjunction of K over formula resolutions")
    cmd.add_argument("formula")

    cmd = sub.add_parser("decide", help="decision procedures")
    cmd.add_argument("--class", dest="klass", choices=("taut", "s5", "inqb", "delkh"),
                     required=True)
    cmd.add_argument("formula")

    cmd = sub.add_parser("entails", help="entailment from premises")
    cmd.add_argument("--mode", choices=("support", "knowhow"), required=True)
    cmd.add_argument("--gamma", required=True, help="file with one premise per line")
    cmd.add_argument("formula")

    cmd = sub.add_parser("check-proof", help="verify a derivation script")
    cmd.add_argument("script")

    cmd = sub.add_parser("fuzz", help="cross-semantics equivalence fuzzing")
    cmd.add_argument("--trials", type=int, default=100)
    cmd.add_argument("--seed", type=int, default=0)
    cmd.add_argument("--max-worlds", type=int, default=4)
    cmd.add_argument("--max-atoms", type=int, default=3)
    cmd.add_argument("--max-depth", type=int, default=4)
    cmd.add_argument("--max-imp-nesting", type=int, default=2)
    cmd.add_argument("--routes", default=",".join(ROUTES),
                     help="comma-separated subset of " + ",".join(ROUTES))
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cap = args.cap if args.cap is not None else _env_int("INQKH_CAP", DEFAULT_CAP)
    clause_limit = (args.clause_limit if args.clause_limit is not None
                    else _env_int("INQKH_CLAUSE_LIMIT", DEFAULT_CLAUSE_LIMIT))
    pretty = args.pretty

    if args.command == "parse":
        f = parse_formula(args.formula)
        _emit({"formula": render_formula(f), "pl": is_pl(f),
               "atoms": sorted(atoms(f))}, pretty)
        return EXIT_TRUE

    if args.command == "eval":
        m = _load_model(args.model)
        f = parse_formula(args.formula)
        route = args.route or "auto"
        if route == "reduced":
            f_eval: Formula = eliminate_box(eliminate_kh(f), clause_limit)
            route = "auto"
        else:
            f_eval = f
        if args.world is not None:
            verdict = satisfies(m, args.world, f_eval, cap, kh_route=route)
            doc = {"verdict": verdict, "world": args.world}
        else:
            per_world = {w: satisfies(m, w, f_eval, cap, kh_route=route) for w in m.worlds}
            verdict = all(per_world.values())
            doc = {"verdict": verdict, "per_world": per_world}
        doc["formula"] = render_formula(f)
        _emit(doc, pretty)
        return _verdict_exit(verdict)

    if args.command == "support":
        m = _load_model(args.model)
        f = parse_formula(args.formula)
        stats: dict = {}
        verdict = supports(m, _parse_state(args.state), f, stats)
        _emit({"verdict": verdict, "state": _parse_state(args.state),
               "formula": render_formula(f), "stats": stats}, pretty)
        return _verdict_exit(verdict)

    if args.command == "resolutions":
        m = _load_model(args.model)
        f = parse_formula(args.formula)
        doc = {"formula": render_formula(f), "space_size": str(resolution_space_size(f))}
        if args.world is not None:
            res = resolutions_at(m, args.world, f, cap)
            doc["world"] = args.world
        else:
            state = _parse_state(args.state) if args.state is not None else list(m.worlds)
            res = uniform_resolutions(m, state, f, cap)
            doc["state"] = state
        doc["resolutions"] = sorted(render_resolution(r) for r in res)
        _emit(doc, pretty)
        return _verdict_exit(bool(res))

    if args.command == "alternatives":
        m = _load_model(args.model)
        f = parse_formula(args.formula)
        alts = alternatives(m, f)
        _emit({"formula": render_formula(f),
               "alternatives": [sorted(a) for a in alts]}, pretty)
        return EXIT_TRUE

    if args.command == "classify":
        m = _load_model(args.model)
        f = parse_formula(args.formula)
        c = classify(m, f, cap)
        _emit({
            "formula": render_formula(f),
            "informative": c.informative, "inquisitive": c.inquisitive,
            "question": c.question, "statement": c.statement,
            "alternatives": [sorted(a) for a in c.alternatives],
            "uncovered_world": c.uncovered_world,
            "witness_submodel": sorted(c.witness_submodel) if c.witness_submodel else None,
        }, pretty)
        return EXIT_TRUE

    if args.command == "reduce":
        f = parse_formula(args.formula)
        trace: list = []
        if args.target == "del":
            out = eliminate_kh(f, trace)
        elif args.target == "el":
            out = eliminate_box(eliminate_kh(f, trace), clause_limit, trace)
        else:
            el = eliminate_box(eliminate_kh(f, trace), clause_limit, trace)
            out = s5_normal_form(el, clause_limit).to_formula()
        _emit({"formula": render_formula(out), "target": args.target, "trace": trace}, pretty)
        return EXIT_TRUE

    if args.command == "translate-rl":
        f = parse_formula(args.formula)
        members = rl(f, cap)
        _emit({"formula": render_formula(rl_translation(f, cap)),
               "members": [render_formula(rho) for rho in members]}, pretty)
        return EXIT_TRUE

    if args.command == "decide":
        f = parse_formula(args.formula)
        t0 = time.perf_counter()
        if args.klass == "taut":
            verdict = taut(f)
        elif args.klass == "s5":
            verdict = s5_valid(f, clause_limit)
        elif args.klass == "inqb":
            verdict = inqb_member(f, cap=cap, clause_limit=clause_limit)
        else:
            verdict = delkh_valid(f, cap, clause_limit)
        elapsed_ms = round(1000 * (time.perf_counter() - t0), 3)
        doc = verdict.to_doc()
        doc.update({"formula": render_formula(f), "class": args.klass,
                    "elapsed_ms": elapsed_ms})
        _emit(doc, pretty)
        return _verdict_exit(verdict.result)

    if args.command == "entails":
        f = parse_formula(args.formula)
        gamma = []
        with open(args.gamma, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    gamma.append(parse_formula(line))
        t0 = time.perf_counter()
        verdict = entails(gamma, f, args.mode, cap=cap, clause_limit=clause_limit)
        elapsed_ms = round(1000 * (time.perf_counter() - t0), 3)
        doc = verdict.to_doc()
        doc.update({"formula": render_formula(f), "mode": args.mode,
                    "gamma": [render_formula(g) for g in gamma], "elapsed_ms": elapsed_ms})
        _emit(doc, pretty)
        return _verdict_exit(verdict.result)

    if args.command == "check-proof":
        with open(args.script, encoding="utf-8") as fh:
            report = check_proof(fh.read())
        doc = {
            "ok": report.ok,
            "lines": [
                {"line": r.number, "ok": r.ok,
                 **({"code": r.code, "message": r.message} if not r.ok else {})}
                for r in report.lines
            ],
        }
        if report.theorem is not None:
            doc["theorem"] = render_formula(report.theorem)
        _emit(doc, pretty)
        return _verdict_exit(report.ok)

    if args.command == "fuzz":
        routes = tuple(r for r in args.routes.split(",") if r)
        cfg = FuzzConfig(
            seed=args.seed, trials=args.trials, max_worlds=args.max_worlds,
            max_atoms=args.max_atoms, max_depth=args.max_depth,
            max_imp_nesting=args.max_imp_nesting, routes=routes, cap=cap,
        )
        report = fuzz_equivalence(cfg)
        _emit(report.to_doc(), pretty)
        return _verdict_exit(report.ok)

    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv=None) -> int:
    try:
        return run(argv)
    except ResourceError as e:
        print(json.dumps({"error": "resource", "message": str(e)}), file=sys.stderr)
        return EXIT_RESOURCE
    except (ParseError, OSError, json.JSONDecodeError) as e:
        print(json.dumps({"error": "usage", "message": str(e)}), file=sys.stderr)
        return EXIT_USAGE
    except InqkhError as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
