"""Command-line front end.

Exit codes: 0 yes/success, 1 no (or verification disagreement), 2
usage/parse error, 3 node budget exceeded.  The environment variable
CQ_NODE_BUDGET overrides the default oracle node budget.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import fastpath, oracle, reductions, textio
from .model import (
    InvalidStructureError,
    build_template,
    clique,
    cycle,
    nae_boolean,
    parse_family_spec,
    parse_fragment_spec,
    reflexive_cycle,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidStructureError(f"cannot read {path}: {exc}") from exc


def _parse_params(tokens: list[str]) -> dict:
    params: dict = {}
    for tok in tokens:
        if "=" not in tok:
            raise InvalidStructureError(f"expected key=value parameter, got {tok!r}")
        key, value = tok.split("=", 1)
        if key == "h":
            params[key] = build_template(parse_family_spec(value))
        else:
            try:
                params[key] = int(value)
            except ValueError:
                raise InvalidStructureError(f"parameter {key!r} needs an integer") from None
    return params


def cmd_solve(args: argparse.Namespace) -> int:
    template = textio.parse_structure(_read(args.template))
    s = textio.parse_sentence(_read(args.sentence))
    budget = args.node_budget
    engine = "oracle"
    if args.engine == "auto":
        match = fastpath.dispatch(template, s)
        if match is not None:
            engine, thunk = match
            verdict = thunk()
        else:
            verdict = oracle.evaluate(template, s, budget=budget)
    else:
        verdict = oracle.evaluate(template, s, budget=budget)
    print("yes" if verdict else "no")
    print(f"engine: {engine}")
    if args.strategy_out:
        if verdict:
            strategy = oracle.extract_strategy(template, s, budget=budget)
            Path(args.strategy_out).write_text(textio.render_strategy(strategy))
        else:
            print("no strategy: no-instance", file=sys.stderr)
    return EXIT_YES if verdict else EXIT_NO


def cmd_classify(args: argparse.Namespace) -> int:
    family = parse_family_spec(args.family)
    fragment = parse_fragment_spec(" ".join(args.fragment))
    verdict = fastpath.classify(family, fragment)
    print(textio.render_verdict(verdict))
    return EXIT_YES


def cmd_gen(args: argparse.Namespace) -> int:
    family = parse_family_spec(args.family)
    text = textio.render_structure(build_template(family))
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_YES


def _rule_from_args(name: str, params: dict) -> reductions.ReductionRule:
    return reductions.ReductionRule(name, tuple(sorted(params.items())))


def rule_source_template(rule: reductions.ReductionRule):
    """The source template a rule's input sentences are evaluated on."""
    name = rule.name
    if name == "nae":
        return build_template(nae_boolean())
    if name == "clique-gj":
        j = rule.get("j")
        return build_template(clique(math.comb(2 * j + 1, j)))
    if name == "clique-pad":
        return build_template(clique(2 * rule.get("j") + 1))
    if name == "clique-1j":
        return build_template(clique(rule.get("n")))
    if name in ("even-cycle", "even-cycle-csp"):
        return build_template(clique(rule.get("n") // 2))
    if name == "girth-isolation":
        h = rule.get("h")
        if h is None:
            raise InvalidStructureError("girth isolation needs h=<family>")
        from .model import require_graph

        girth = require_graph(h).girth()
        if girth is None:
            raise InvalidStructureError("h is acyclic")
        return build_template(clique(girth // 2))
    if name == "reflexive-c4":
        return build_template(clique(4))
    if name == "c4star-macros":
        return build_template(reflexive_cycle(4))
    if name == "odd-cycle-path":
        return build_template(cycle(rule.get("n")))
    raise InvalidStructureError(f"unknown rule {name!r}")


def cmd_reduce(args: argparse.Namespace) -> int:
    params = _parse_params(args.params)
    rule = _rule_from_args(args.rule, params)
    source_template = rule_source_template(rule)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for source_path in args.sources:
        source = textio.parse_sentence(_read(source_path))
        compiled = reductions.compile_rule(rule, source_template, source)
        if args.inject_fault:
            compiled = reductions.corrupt_compiled(compiled)
        target_template, target_sentence = compiled
        stem = Path(source_path).stem
        (out_dir / f"{stem}.target.structure").write_text(
            textio.render_structure(target_template)
        )
        (out_dir / f"{stem}.target.sentence").write_text(
            textio.render_sentence(target_sentence) + "\n"
        )
    return EXIT_YES


def cmd_verify(args: argparse.Namespace) -> int:
    params = _parse_params(args.params)
    rule = _rule_from_args(args.rule, params)
    source_template = rule_source_template(rule)
    sources = reductions.default_sources(rule, trials=args.trials, seed=args.seed)
    report = reductions.verify_reduction(
        rule,
        source_template,
        sources,
        budget=args.node_budget,
        corrupt=args.inject_fault,
    )
    for line in report.lines():
        print(line)
    agree = sum(1 for c in report.cases if c.status == "agree")
    print(
        f"summary: {agree} agree, {len(report.disagreements())} disagree,"
        f" {len(report.skipped())} budget-skipped"
    )
    if report.disagreements():
        return EXIT_NO
    if report.cases and all(c.status == "budget-skipped" for c in report.cases):
        return EXIT_BUDGET
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqcsp",
        description="Decide, classify, and compile counting-quantifier constraint problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a sentence on a template")
    p.add_argument("template")
    p.add_argument("sentence")
    p.add_argument("--engine", choices=("oracle", "auto"), default="oracle")
    p.add_argument("--strategy-out", default=None)
    p.add_argument("--node-budget", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", help="complexity classification of a family/fragment pair")
    p.add_argument("family")
    p.add_argument("fragment", nargs="+")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gen", help="write a template family to a structure file")
    p.add_argument("family")
    p.add_argument("out", nargs="?", default="-")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="compile source sentences under a reduction rule")
    p.add_argument("rule", choices=reductions.RULE_NAMES)
    p.add_argument("params", nargs="*", default=[], metavar="key=value")
    p.add_argument("--sources", nargs="+", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="oracle-check a reduction rule on a source suite")
    p.add_argument("rule", choices=reductions.RULE_NAMES)
    p.add_argument("params", nargs="*", default=[], metavar="key=value")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--node-budget", type=int, default=None)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except oracle.BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (textio.ParseError, InvalidStructureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
