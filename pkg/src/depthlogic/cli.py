"""Command-line front end: checking, updates, satisfiability, the muddy
experiments, axiom suites, benchmarks and DOT export.

Exit codes: 0 ok, 1 property-suite violation, 2 formula/flag parse error,
3 model validation error.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time

from . import dot as dotmod
from . import muddy as muddymod
from . import props
from .model import (Model, ModelError, load_model, model_size, save_model,
                    validate)
from .sat import sat_bruteforce
from .semantics import (FragmentError, ModeError, SemanticsKind, check,
                        update)
from .syntax import Formula, ParseError, parse, size, to_text

EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3


def _semantics(name: str) -> SemanticsKind:
    return SemanticsKind[name.upper()]


def _read_formula(args: argparse.Namespace) -> Formula:
    text = args.formula
    if args.formula_file:
        with open(args.formula_file) as fh:
            text = fh.read()
    if text is None:
        raise ParseError("no formula given (use --formula or --formula-file)")
    return parse(text)


def _load(path: str) -> Model:
    m = load_model(path)
    report = validate(m)
    if report is not None:
        raise ModelError(f"invalid model: {report.property} fails for agent "
                         f"{report.agent} at {report.witness}")
    return m


def _add_formula_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--formula", help="formula text")
    p.add_argument("--formula-file", help="file containing the formula")


def _add_semantics_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--semantics", default="DPAL",
                   choices=["DBEL", "DPAL", "EDPAL", "ADPAL"])


def cmd_check(args: argparse.Namespace) -> int:
    m = _load(args.model)
    f = _read_formula(args)
    result = check(m, args.state, f, _semantics(args.semantics))
    print("true" if result else "false")
    return 0


def cmd_update(args: argparse.Namespace) -> int:
    m = _load(args.model)
    f = _read_formula(args)
    upd = update(m, f, _semantics(args.semantics))
    if args.out:
        save_model(upd, args.out)
    else:
        from .model import canonical_json
        sys.stdout.write(canonical_json(upd))
    return 0


def cmd_sat(args: argparse.Namespace) -> int:
    f = _read_formula(args)
    found = sat_bruteforce(f, _semantics(args.semantics),
                           max_states=args.max_states,
                           max_depth=args.max_depth)
    if found is None:
        print("none-within-bounds")
        return 0
    from .model import canonical_json
    print(f"state: {found.state}")
    sys.stdout.write(canonical_json(found.model))
    return 0


def _depth_fn(spec_text: str, k: int) -> muddymod.DepthFn:
    if "," in spec_text or spec_text.strip().lstrip("-").isdigit():
        values = [int(x) for x in spec_text.split(",")]
        if len(values) == 1:
            values = values * k
        if len(values) != k:
            raise ParseError(f"--depths needs {k} values, got {len(values)}")
        return muddymod.constant_depths(values)
    expr = compile(spec_text, "<depths>", "eval")

    def fn(agent: int, state: str) -> int:
        env = {"i": agent, "k": k, "n": k, "max": max, "min": min}
        return int(eval(expr, {"__builtins__": {}}, env))

    return fn


_MUDDY_FORMULAS = ["phi_k", "upper", "lower", "amnesia", "leakage"]


def cmd_muddy(args: argparse.Namespace) -> int:
    k = args.k
    n = args.n or k
    depth_fn = (muddymod.canonical_depths(k) if args.depths is None
                else _depth_fn(args.depths, n))
    inst = muddymod.build_muddy(n, k, depth_fn)
    kind = _semantics(args.semantics)
    if args.which == "phi_k":
        f = muddymod.phi_k(k)
    elif args.which == "upper":
        f = muddymod.implies(muddymod.upper_bound_hypothesis(k),
                             muddymod.phi_k(k))
    elif args.which == "lower":
        f = muddymod.implies(muddymod.phi_k(k),
                             muddymod.lower_bound_conclusion(k))
    elif args.which == "amnesia":
        f = muddymod.amnesia_formula()
    else:
        f = muddymod.leakage_formula()
    result = check(inst.model, inst.initial, f, kind)
    print(f"{to_text(f)}")
    print("true" if result else "false")
    if args.dot:
        announcements = []
        g = f
        while hasattr(g, "announced"):
            announcements.append(g.announced)
            g = g.sub
        text = dotmod.sequence_to_dot(inst.model, announcements, kind,
                                      state=inst.initial)
        with open(args.dot, "w") as fh:
            fh.write(text)
    return 0


def cmd_axioms(args: argparse.Namespace) -> int:
    spec = props.RandomSpec(agents=2, max_depth=3, max_states=args.max_states,
                            seed=args.seed)
    kind = _semantics(args.semantics)
    if args.property:
        report = props.kp_ta_suite(kind, args.property, spec,
                                   cases=args.cases,
                                   direction=args.direction)
    else:
        report = props.soundness_suite(args.table, kind, spec,
                                       cases=args.cases, models=args.models,
                                       unambiguous=args.unambiguous)
    print(f"{report.name}: {report.cases} cases, {report.checks} checks, "
          f"{len(report.violations)} violations")
    for v in report.violations:
        print(f"  {v.describe()}")
    return EXIT_VIOLATION if report.violations else 0


def cmd_bench(args: argparse.Namespace) -> int:
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(out)
    w.writerow(["family", "case", "formula_size", "model_size",
                "wall_time_s", "updated_size"])
    if args.family in ("blowup", "all"):
        rng = random.Random(args.seed)
        spec = props.RandomSpec(seed=args.seed)
        for i in range(args.cases):
            m = props.random_model(rng, spec)
            f = props.random_formula(rng, spec, announce=True)
            t0 = time.perf_counter()
            upd = update(m, f, SemanticsKind.DPAL)
            dt = time.perf_counter() - t0
            w.writerow(["blowup", i, size(f), model_size(m),
                        f"{dt:.6f}", model_size(upd)])
    if args.family in ("3sat", "all"):
        for n in range(1, args.max_vars + 1):
            inst = muddymod.ThreeSatInstance(
                n, tuple((min(v + 1, n), min(v + 1, n), -min(v + 1, n))
                         for v in range(min(n, 3))))
            m, f = muddymod.reduce_3sat(inst)
            t0 = time.perf_counter()
            check(m, "s", f, SemanticsKind.DPAL)
            dt = time.perf_counter() - t0
            final = None
            for final in muddymod.reduction_steps(inst):
                pass
            w.writerow(["3sat", n, size(f), model_size(m),
                        f"{dt:.6f}", model_size(final)])
    if out is not sys.stdout:
        out.close()
    return 0


def cmd_export_dot(args: argparse.Namespace) -> int:
    m = _load(args.model)
    kind = _semantics(args.semantics)
    announcements = [parse(a) for a in args.announce or []]
    if announcements:
        text = dotmod.sequence_to_dot(m, announcements, kind,
                                      state=args.state)
    else:
        text = dotmod.model_to_dot(m, designated=args.state)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="depthlogic",
        description="Model checking for depth-bounded epistemic logics")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a formula at a state")
    p.add_argument("--model", required=True)
    p.add_argument("--state", required=True)
    _add_formula_flags(p)
    _add_semantics_flag(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("update", help="apply an announcement to a model")
    p.add_argument("--model", required=True)
    p.add_argument("--out")
    _add_formula_flags(p)
    _add_semantics_flag(p)
    p.set_defaults(fn=cmd_update)

    p = sub.add_parser("sat", help="bounded satisfiability search")
    _add_formula_flags(p)
    _add_semantics_flag(p)
    p.add_argument("--max-states", type=int, default=3)
    p.add_argument("--max-depth", type=int, default=None)
    p.set_defaults(fn=cmd_sat)

    p = sub.add_parser("muddy", help="muddy children experiments")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--depths", default=None,
                   help="comma list per child, or expression in i/k/n")
    p.add_argument("--formula", dest="which", default="phi_k",
                   choices=_MUDDY_FORMULAS)
    p.add_argument("--dot", default=None)
    _add_semantics_flag(p)
    p.set_defaults(fn=cmd_muddy)

    p = sub.add_parser("axioms", help="randomized soundness suites")
    p.add_argument("--table", default=props.TABLE_T1,
                   choices=list(props.TABLE_ROWS))
    p.add_argument("--property", default=None,
                   choices=["KP", "TA", "KPp", "TAp"])
    p.add_argument("--direction", default="both",
                   choices=["both", "forward", "reverse"])
    p.add_argument("--cases", type=int, default=300)
    p.add_argument("--models", type=int, default=50)
    p.add_argument("--max-states", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unambiguous", action="store_true",
                   help="draw only models with unambiguous depths")
    _add_semantics_flag(p)
    p.set_defaults(fn=cmd_axioms)

    p = sub.add_parser("bench", help="CSV benchmarks")
    p.add_argument("--family", default="all",
                   choices=["blowup", "3sat", "all"])
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--max-vars", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("export-dot", help="Graphviz export")
    p.add_argument("--model", required=True)
    p.add_argument("--state", default=None)
    p.add_argument("--announce", action="append",
                   help="announcement formula; repeat for a sequence")
    p.add_argument("--out")
    _add_semantics_flag(p)
    p.set_defaults(fn=cmd_export_dot)
    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ModelError, ModeError, FragmentError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
