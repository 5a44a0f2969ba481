"""Shared fixtures: the tiny graphs and rules the example-driven tests use."""

from __future__ import annotations

from parcoh import (
    EMPTY_GRAPH,
    Graph,
    Morphism,
    WeakSpan,
    identity,
    make_graph,
    plain_span,
)

EMPTY = EMPTY_GRAPH
N1 = make_graph([("a", "A")])
N1_W = make_graph([("w", "A")])
D2 = make_graph([("u", "A"), ("v", "A")])
E2 = make_graph([("u", "A"), ("v", "A")], [("e", "u", "v", "x")])
LP = make_graph([("u", "A")], [("l", "u", "u", "x")])


def loop_graph(edge_label: str) -> Graph:
    return make_graph([("u", "A")], [("l", "u", "u", edge_label)])


def identity_rule(g: Graph, name: str = "noop") -> WeakSpan:
    return WeakSpan(name, g, g, g, g, identity(g), identity(g), identity(g))


def delete_node_rule() -> WeakSpan:
    """Remove one node (L = single node, everything else empty)."""
    to_l = Morphism(EMPTY, N1, {}, {})
    return WeakSpan("delete-node", N1, EMPTY, EMPTY, EMPTY,
                    to_l, identity(EMPTY), identity(EMPTY))


def delete_node_with_loop_rule() -> WeakSpan:
    """Remove a looped node together with its loop."""
    to_l = Morphism(EMPTY, LP, {}, {})
    return WeakSpan("delete-looped-node", LP, EMPTY, EMPTY, EMPTY,
                    to_l, identity(EMPTY), identity(EMPTY))


def add_loop_rule(edge_label: str = "x") -> WeakSpan:
    """Attach a loop with the given label to a matched node."""
    target = loop_graph(edge_label)
    return WeakSpan(
        f"add-loop-{edge_label}", N1, N1, N1, target,
        identity(N1), identity(N1), Morphism(N1, target, {"a": "u"}, {}),
    )


def delete_loop_rule() -> WeakSpan:
    """Remove a loop but keep its node (a weak span with L = looped node)."""
    keep = Morphism(N1, LP, {"a": "u"}, {})
    return WeakSpan("delete-loop", LP, N1, N1, N1,
                    keep, identity(N1), identity(N1))


def match_at(rule: WeakSpan, host: Graph, node_images: dict[str, str],
             edge_images: dict[str, str] | None = None) -> Morphism:
    return Morphism(rule.L, host, node_images, edge_images or {})
