"""Command-line entry points.

Every command reads JSON documents, writes canonical JSON (or DOT text) to
stdout and reports problems on stderr.  Exit status 0 means success, 1 a
domain failure (a rule does not apply, steps are not independent, a replay
check failed), 2 a usage or document problem.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .documents import (
    Document,
    Scenario,
    document_to_obj,
    dumps,
    export_dot,
    graph_document,
    morphism_document,
    parse_document,
    rule_document,
)
from .errors import DocumentError, RewriteError
from .graphs import Graph, Morphism
from .harness import GenParams, run_property_suite
from .parallelism import (
    analyze,
    check_parallel_independence,
    check_sequential_independence,
    derived_rule,
    pair_pct,
    synthesize,
    verify_derived_application,
)
from .rewriting import (
    DirectTransformation,
    WeakSpan,
    build_pct,
    coherence_witness,
    derive,
    find_matches,
)


class _UsageError(Exception):
    pass


def _load(path: str, expect_kind: str) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc
    doc = parse_document(text)
    if doc.kind != expect_kind:
        raise _UsageError(f"{path}: expected a {expect_kind} document, got {doc.kind}")
    return doc


def _pick_match(rule: WeakSpan, host: Graph, index: int, where: str) -> Morphism:
    matches = find_matches(rule, host)
    if not 0 <= index < len(matches):
        raise _UsageError(
            f"{where}: match index {index} out of range ({len(matches)} matches)"
        )
    return matches[index]


def _parallel_steps(scenario: Scenario, count: int | None = None) -> list[DirectTransformation]:
    steps = scenario.steps if count is None else scenario.steps[:count]
    if count is not None and len(scenario.steps) < count:
        raise _UsageError(f"scenario needs at least {count} steps")
    out = []
    for idx, step in enumerate(steps):
        m = _pick_match(step.rule, scenario.host, step.match_index, f"step {idx}")
        out.append(derive(step.rule, scenario.host, m))
    return out


def _sequential_pair(scenario: Scenario) -> tuple[DirectTransformation, DirectTransformation]:
    if len(scenario.steps) < 2:
        raise _UsageError("sequential scenario needs two steps")
    first, second = scenario.steps[0], scenario.steps[1]
    m1 = _pick_match(first.rule, scenario.host, first.match_index, "step 0")
    gamma1 = derive(first.rule, scenario.host, m1)
    m2 = _pick_match(second.rule, gamma1.H, second.match_index, "step 1")
    return gamma1, derive(second.rule, gamma1.H, m2)


def _emit(text: str):
    sys.stdout.write(text)


def _cmd_match(args) -> int:
    rule = _load(args.rule, "rule").payload
    host = _load(args.graph, "graph").payload
    matches = find_matches(rule, host, mono_only=not args.any_match)
    _emit(dumps([document_to_obj(morphism_document(m)) for m in matches]))
    return 0


def _cmd_apply(args) -> int:
    rule = _load(args.rule, "rule").payload
    host = _load(args.graph, "graph").payload
    matches = find_matches(rule, host, mono_only=not args.any_match)
    if not 0 <= args.match < len(matches):
        raise _UsageError(
            f"match index {args.match} out of range ({len(matches)} matches)"
        )
    step = derive(rule, host, matches[args.match])
    _emit(dumps(document_to_obj(graph_document(step.H))))
    return 0


def _cmd_pct(args) -> int:
    scenario = _load(args.scenario, "scenario").payload
    gammas = _parallel_steps(scenario)
    pct = build_pct(coherence_witness(gammas))
    _emit(dumps(document_to_obj(graph_document(pct.H))))
    return 0


def _cmd_indep(args) -> int:
    scenario = _load(args.scenario, "scenario").payload
    if args.sequential:
        gamma1, gamma2p = _sequential_pair(scenario)
        w = check_sequential_independence(gamma1, gamma2p)
        legs = [w.j1p, w.j2p]
    else:
        gamma1, gamma2 = _parallel_steps(scenario, count=2)
        w = check_parallel_independence(gamma1, gamma2)
        legs = [w.j1, w.j2]
    _emit(dumps([document_to_obj(morphism_document(m)) for m in legs]))
    return 0


def _cmd_analyze(args) -> int:
    scenario = _load(args.scenario, "scenario").payload
    gamma1, gamma2 = _parallel_steps(scenario, count=2)
    w = check_parallel_independence(gamma1, gamma2)
    pp = pair_pct(gamma1, gamma2, w)
    gamma2p, _, _ = analyze(pp)
    _emit(
        dumps(
            [
                document_to_obj(graph_document(gamma1.H)),
                document_to_obj(morphism_document(gamma2p.m)),
                document_to_obj(graph_document(gamma2p.H)),
            ]
        )
    )
    return 0


def _cmd_synthesize(args) -> int:
    scenario = _load(args.scenario, "scenario").payload
    gamma1, gamma2p = _sequential_pair(scenario)
    w = check_sequential_independence(gamma1, gamma2p)
    gamma2, pp = synthesize(gamma1, gamma2p, w)
    _emit(
        dumps(
            [
                document_to_obj(morphism_document(gamma2.m)),
                document_to_obj(graph_document(pp.pct.H)),
            ]
        )
    )
    return 0


def _derived_from_scenario(scenario: Scenario):
    gammas = _parallel_steps(scenario)
    pct = build_pct(coherence_witness(gammas))
    return derived_rule(pct)


def _cmd_derive_rule(args) -> int:
    scenario = _load(args.scenario, "scenario").payload
    dr = _derived_from_scenario(scenario)
    _emit(dumps(document_to_obj(rule_document(dr.rule))))
    return 0


def _cmd_verify_derived(args) -> int:
    scenario = _load(args.scenario, "scenario").payload
    host = _load(args.graph, "graph").payload
    dr = _derived_from_scenario(scenario)
    m = _pick_match(dr.rule, host, args.match, "derived rule")
    applied = derive(dr.rule, host, m)
    transported = verify_derived_application(dr, applied)
    _emit(dumps(document_to_obj(graph_document(transported.result))))
    return 0


def _cmd_export_dot(args) -> int:
    host = _load(args.graph, "graph").payload
    _emit(export_dot(host))
    return 0


def _cmd_selfcheck(args) -> int:
    params = GenParams(
        seed=args.seed, max_nodes=args.max_nodes, max_edges=args.max_edges
    )
    report = run_property_suite(params, iterations=args.iterations)
    _emit(report.to_text() + "\n")
    print(f"elapsed: {report.elapsed_seconds:.2f}s", file=sys.stderr)
    return 0 if report.ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parcoh",
        description="Apply graph rewrite rules one at a time or simultaneously,"
        " check independence, and extract derived rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("match", help="list matches of a rule in a graph")
    p.add_argument("rule")
    p.add_argument("graph")
    p.add_argument("--any-match", action="store_true", help="include non-injective matches")
    p.set_defaults(handler=_cmd_match)

    p = sub.add_parser("apply", help="apply one rewrite step")
    p.add_argument("rule")
    p.add_argument("graph")
    p.add_argument("--match", type=int, default=0, help="match index (default 0)")
    p.add_argument("--any-match", action="store_true", help="include non-injective matches")
    p.set_defaults(handler=_cmd_apply)

    p = sub.add_parser("pct", help="run all scenario steps simultaneously")
    p.add_argument("scenario")
    p.set_defaults(handler=_cmd_pct)

    p = sub.add_parser("indep", help="check independence of the first two steps")
    p.add_argument("scenario")
    p.add_argument(
        "--sequential",
        action="store_true",
        help="second step runs on the first step's result",
    )
    p.set_defaults(handler=_cmd_indep)

    p = sub.add_parser(
        "analyze", help="turn a simultaneous independent pair into a sequence"
    )
    p.add_argument("scenario")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser(
        "synthesize", help="turn an independent sequence into a simultaneous pair"
    )
    p.add_argument("scenario")
    p.set_defaults(handler=_cmd_synthesize)

    p = sub.add_parser("derive-rule", help="extract the derived rule of a scenario")
    p.add_argument("scenario")
    p.set_defaults(handler=_cmd_derive_rule)

    p = sub.add_parser(
        "verify-derived",
        help="apply a scenario's derived rule to a host and re-verify the replay",
    )
    p.add_argument("scenario")
    p.add_argument("graph")
    p.add_argument("--match", type=int, default=0, help="match index (default 0)")
    p.set_defaults(handler=_cmd_verify_derived)

    p = sub.add_parser("export-dot", help="render a graph document as DOT")
    p.add_argument("graph")
    p.set_defaults(handler=_cmd_export_dot)

    p = sub.add_parser("selfcheck", help="run the property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-nodes", type=int, default=6)
    p.add_argument("--max-edges", type=int, default=8)
    p.add_argument("--iterations", type=int, default=10)
    p.set_defaults(handler=_cmd_selfcheck)

    return parser


def cli_dispatch(argv: list[str]) -> int:
    """Run one command; returns the exit status instead of exiting."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except (_UsageError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RewriteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
