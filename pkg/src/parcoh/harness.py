"""Random instance generation, independent oracles and the property suite.

Everything random is driven by a seed alone: child generators are derived
from ``(seed, purpose, index)`` strings, so any failure can be replayed from
its reported seed and repeated runs are bit-for-bit identical.  The oracles
re-build pushouts, pullbacks and wide (co)limits by deliberately naive
algorithms that share no code with the production constructions, and results
are compared only up to isomorphism through mediating morphisms.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from . import category
from .category import (
    PullbackResult,
    PushoutResult,
    WideColimit,
    WideLimit,
    cocone_factor,
    cone_factor,
    is_pullback_square,
    is_pushout_square,
    pullback,
    pushout,
    wide_colimit,
    wide_limit,
)
from .errors import PreconditionError
from .graphs import (
    Edge,
    Graph,
    Morphism,
    Node,
    compose,
    enumerate_morphisms,
    factor_through_mono,
    find_isomorphism,
    graphs_isomorphic,
    identity,
    inclusion,
    is_isomorphism,
    is_monomorphism,
    validate_graph,
)
from .parallelism import (
    analyze,
    apply_derived_rule_to_source,
    check_parallel_independence,
    check_sequential_independence,
    derived_rule,
    pair_pct,
    roundtrip_check,
    synthesize,
    verify_derived_application,
)
from .rewriting import (
    DirectTransformation,
    PCTDiagram,
    WeakSpan,
    assoc_to_weak,
    build_pct,
    coherence_witness,
    derive,
    hat_gamma,
    validate_rule,
    verify_direct_transformation,
    verify_pct,
)


@dataclass(frozen=True)
class GenParams:
    """Bounds and proportions for random instances. Desk scale by default."""

    seed: int = 0
    max_nodes: int = 6
    max_edges: int = 8
    label_alphabet: tuple[str, ...] = ("A", "B")
    # relative weights of removed / weakly preserved / preserved / added items
    rule_shape: tuple[float, float, float, float] = (1.0, 1.0, 2.0, 1.0)


def _rng(seed: int, *path) -> random.Random:
    # String seeding hashes with sha512 under the hood, so children are
    # stable across runs and platforms and independent of global state.
    return random.Random(f"{seed}/" + "/".join(str(p) for p in path))


def _check_params(p: GenParams):
    if not p.label_alphabet:
        raise PreconditionError("label alphabet must not be empty")
    if sum(p.rule_shape[:3]) <= 0:
        raise PreconditionError("rule shape needs weight on kept or removed items")
    if min(p.rule_shape) < 0:
        raise PreconditionError("rule shape weights must be nonnegative")


# --------------------------------------------------------------------------
# generators
# --------------------------------------------------------------------------


def random_graph(rng: random.Random, p: GenParams) -> Graph:
    n = rng.randint(0, p.max_nodes)
    nodes = tuple(Node(f"n{i}", rng.choice(p.label_alphabet)) for i in range(n))
    edges: list[Edge] = []
    if n:
        for i in range(rng.randint(0, p.max_edges)):
            edges.append(
                Edge(
                    f"e{i}",
                    f"n{rng.randrange(n)}",
                    f"n{rng.randrange(n)}",
                    rng.choice(p.label_alphabet),
                )
            )
    return Graph(nodes, tuple(edges))


def gen_graph(p: GenParams) -> Graph:
    """A pseudo-random well-formed graph, a pure function of the params."""
    _check_params(p)
    return random_graph(_rng(p.seed, "graph"), p)


def random_rule(rng: random.Random, p: GenParams) -> WeakSpan:
    d_w, w_w, k_w, a_w = p.rule_shape
    lhs = random_graph(rng, p)
    # class 0: removed, 1: weakly preserved (kept but copied on collapse),
    # 2: preserved interface.  An edge is at most as preserved as its ends.
    node_class = {
        n.id: rng.choices((0, 1, 2), weights=(d_w, w_w, k_w))[0] for n in lhs.nodes
    }
    edge_class = {}
    for e in lhs.edges:
        c = rng.choices((0, 1, 2), weights=(d_w, w_w, k_w))[0]
        edge_class[e.id] = min(c, node_class[e.src], node_class[e.tgt])
    ctx = Graph(
        tuple(n for n in lhs.nodes if node_class[n.id] >= 1),
        tuple(e for e in lhs.edges if edge_class[e.id] >= 1),
    )
    iface = Graph(
        tuple(n for n in ctx.nodes if node_class[n.id] >= 2),
        tuple(e for e in ctx.edges if edge_class[e.id] >= 2),
    )
    total = d_w + w_w + k_w + a_w
    budget = max(0, round(p.max_nodes * a_w / total))
    added_nodes = tuple(
        Node(f"x{i}", rng.choice(p.label_alphabet))
        for i in range(rng.randint(0, budget))
    )
    rhs_nodes = iface.nodes + added_nodes
    rhs_edges = list(iface.edges)
    if rhs_nodes:
        pool = [n.id for n in rhs_nodes]
        for i in range(rng.randint(0, budget)):
            rhs_edges.append(
                Edge(f"y{i}", rng.choice(pool), rng.choice(pool), rng.choice(p.label_alphabet))
            )
    rhs = Graph(rhs_nodes, tuple(rhs_edges))
    return WeakSpan(
        name=f"rule{rng.randrange(10**6)}",
        L=lhs, K=ctx, I=iface, R=rhs,
        l=inclusion(ctx, lhs), i=inclusion(iface, ctx), r=inclusion(iface, rhs),
    )


def gen_rule(p: GenParams) -> WeakSpan:
    """A pseudo-random valid rule, a pure function of the params."""
    _check_params(p)
    return random_rule(_rng(p.seed, "rule"), p)


def random_morphism_from(rng: random.Random, dom: Graph, p: GenParams, tag: str = "b") -> Morphism:
    """A random morphism out of ``dom``: merge some same-label elements,
    then pad the codomain with fresh ones."""
    node_map: dict[str, str] = {}
    cod_nodes: list[Node] = []
    for n in dom.nodes:
        mergeable = [c.id for c in cod_nodes if c.label == n.label]
        if mergeable and rng.random() < 0.3:
            node_map[n.id] = rng.choice(mergeable)
        else:
            nid = f"{tag}{len(cod_nodes)}"
            cod_nodes.append(Node(nid, n.label))
            node_map[n.id] = nid
    cod_edges: list[Edge] = []
    edge_map: dict[str, str] = {}
    for e in dom.edges:
        s, t = node_map[e.src], node_map[e.tgt]
        mergeable = [
            c.id for c in cod_edges if (c.src, c.tgt, c.label) == (s, t, e.label)
        ]
        if mergeable and rng.random() < 0.3:
            edge_map[e.id] = rng.choice(mergeable)
        else:
            eid = f"{tag}e{len(cod_edges)}"
            cod_edges.append(Edge(eid, s, t, e.label))
            edge_map[e.id] = eid
    for i in range(rng.randint(0, 2)):
        cod_nodes.append(Node(f"{tag}+{i}", rng.choice(p.label_alphabet)))
    if cod_nodes:
        pool = [n.id for n in cod_nodes]
        for i in range(rng.randint(0, 2)):
            cod_edges.append(
                Edge(f"{tag}+e{i}", rng.choice(pool), rng.choice(pool), rng.choice(p.label_alphabet))
            )
    cod = Graph(tuple(cod_nodes), tuple(cod_edges))
    return Morphism(dom, cod, node_map, edge_map)


def random_morphism_into(rng: random.Random, cod: Graph, p: GenParams, tag: str = "w") -> Morphism:
    """A random morphism into ``cod``: pick image nodes (with repetition)
    and lift as many edges as the picks allow."""
    if cod.is_empty:
        return Morphism(Graph(), cod, {}, {})
    k = rng.randint(0, p.max_nodes)
    dom_nodes: list[Node] = []
    node_map: dict[str, str] = {}
    for i in range(k):
        target = rng.choice(cod.nodes)
        dom_nodes.append(Node(f"{tag}{i}", target.label))
        node_map[f"{tag}{i}"] = target.id
    dom_edges: list[Edge] = []
    edge_map: dict[str, str] = {}
    if dom_nodes and cod.edges:
        by_target: dict[str, list[str]] = {}
        for nid, img in node_map.items():
            by_target.setdefault(img, []).append(nid)
        for i in range(rng.randint(0, p.max_edges)):
            e = rng.choice(cod.edges)
            srcs = by_target.get(e.src)
            tgts = by_target.get(e.tgt)
            if not srcs or not tgts:
                continue
            eid = f"{tag}e{i}"
            dom_edges.append(Edge(eid, rng.choice(srcs), rng.choice(tgts), e.label))
            edge_map[eid] = e.id
    dom = Graph(tuple(dom_nodes), tuple(dom_edges))
    return Morphism(dom, cod, node_map, edge_map)


def random_mono_from(rng: random.Random, dom: Graph, p: GenParams, tag: str = "m") -> Morphism:
    """A random embedding out of ``dom``: a renamed copy plus padding."""
    node_map = {n.id: f"{tag}.{n.id}" for n in dom.nodes}
    edge_map = {e.id: f"{tag}.{e.id}" for e in dom.edges}
    nodes = [Node(node_map[n.id], n.label) for n in dom.nodes]
    edges = [
        Edge(edge_map[e.id], node_map[e.src], node_map[e.tgt], e.label)
        for e in dom.edges
    ]
    for i in range(rng.randint(0, 2)):
        nodes.append(Node(f"{tag}+{i}", rng.choice(p.label_alphabet)))
    if nodes:
        pool = [n.id for n in nodes]
        for i in range(rng.randint(0, 2)):
            edges.append(
                Edge(f"{tag}+e{i}", rng.choice(pool), rng.choice(pool), rng.choice(p.label_alphabet))
            )
    cod = Graph(tuple(nodes), tuple(edges))
    return Morphism(dom, cod, node_map, edge_map)


def random_mono_into(rng: random.Random, cod: Graph, tag: str = "s") -> Morphism:
    """A random renamed-subgraph embedding into ``cod``."""
    chosen_nodes = [n for n in cod.nodes if rng.random() < 0.7]
    chosen_ids = {n.id for n in chosen_nodes}
    chosen_edges = [
        e for e in cod.edges
        if e.src in chosen_ids and e.tgt in chosen_ids and rng.random() < 0.7
    ]
    node_map = {f"{tag}.{n.id}": n.id for n in chosen_nodes}
    edge_map = {f"{tag}.{e.id}": e.id for e in chosen_edges}
    dom = Graph(
        tuple(Node(f"{tag}.{n.id}", n.label) for n in chosen_nodes),
        tuple(Edge(f"{tag}.{e.id}", f"{tag}.{e.src}", f"{tag}.{e.tgt}", e.label) for e in chosen_edges),
    )
    return Morphism(dom, cod, node_map, edge_map)


def random_span(rng: random.Random, p: GenParams) -> tuple[Morphism, Morphism]:
    small = replace(p, max_nodes=min(p.max_nodes, 4), max_edges=min(p.max_edges, 5))
    apex = random_graph(rng, small)
    return (
        random_morphism_from(rng, apex, p, tag="b"),
        random_morphism_from(rng, apex, p, tag="c"),
    )


def random_sink(rng: random.Random, p: GenParams, arity: int) -> list[Morphism]:
    shared = random_graph(rng, p)
    legs = []
    for a in range(arity):
        if rng.random() < 0.5:
            legs.append(random_mono_into(rng, shared, tag=f"s{a}"))
        else:
            legs.append(random_morphism_into(rng, shared, p, tag=f"w{a}"))
    return legs


def random_source(rng: random.Random, p: GenParams, arity: int) -> list[Morphism]:
    small = replace(p, max_nodes=min(p.max_nodes, 4), max_edges=min(p.max_edges, 5))
    shared = random_graph(rng, small)
    return [random_morphism_from(rng, shared, p, tag=f"c{a}") for a in range(arity)]


# --------------------------------------------------------------------------
# hosts with guaranteed matches
# --------------------------------------------------------------------------


def _embedded_host(
    rng: random.Random,
    pieces: Sequence[tuple[Graph, set[str]]],
    p: GenParams,
) -> tuple[Graph, list[Morphism]]:
    """A host containing one disjoint renamed copy of every piece, plus
    noise.  Noise edges avoid the protected node images of every piece, so
    a step removing exactly those nodes never dangles."""
    nodes: list[Node] = []
    edges: list[Edge] = []
    maps: list[tuple[dict[str, str], dict[str, str]]] = []
    safe_pool: list[str] = []
    for idx, (g, protected) in enumerate(pieces):
        node_map = {n.id: f"h{idx}.{n.id}" for n in g.nodes}
        edge_map = {e.id: f"h{idx}.{e.id}" for e in g.edges}
        nodes.extend(Node(node_map[n.id], n.label) for n in g.nodes)
        edges.extend(
            Edge(edge_map[e.id], node_map[e.src], node_map[e.tgt], e.label)
            for e in g.edges
        )
        maps.append((node_map, edge_map))
        safe_pool.extend(node_map[n.id] for n in g.nodes if n.id not in protected)
    for i in range(rng.randint(0, 2)):
        nid = f"z{i}"
        nodes.append(Node(nid, rng.choice(p.label_alphabet)))
        safe_pool.append(nid)
    if safe_pool:
        for i in range(rng.randint(0, 3)):
            edges.append(
                Edge(
                    f"ze{i}",
                    rng.choice(safe_pool),
                    rng.choice(safe_pool),
                    rng.choice(p.label_alphabet),
                )
            )
    host = Graph(tuple(nodes), tuple(edges))
    matches = [
        Morphism(g, host, node_map, edge_map)
        for (g, _), (node_map, edge_map) in zip(pieces, maps)
    ]
    return host, matches


def _removable(rule: WeakSpan) -> set[str]:
    kept = set(rule.l.node_map.values())
    return {n.id for n in rule.L.nodes if n.id not in kept}


def random_weak_dpo(rng: random.Random, p: GenParams) -> DirectTransformation:
    """A random rule applied at a guaranteed-safe match in a noisy host."""
    rule_scale = replace(p, max_nodes=min(p.max_nodes, 4), max_edges=min(p.max_edges, 4))
    rule = random_rule(rng, rule_scale)
    host, (m,) = _embedded_host(rng, [(rule.L, _removable(rule))], p)
    return derive(rule, host, m)


def random_coherent_family(
    rng: random.Random, p: GenParams, width: int
) -> list[DirectTransformation]:
    """Steps at disjoint matches in one host; disjointness makes them both
    coherent and parallel independent."""
    rule_scale = replace(p, max_nodes=min(p.max_nodes, 3), max_edges=min(p.max_edges, 3))
    rules = [random_rule(rng, rule_scale) for _ in range(width)]
    host, matches = _embedded_host(
        rng, [(r.L, _removable(r)) for r in rules], p
    )
    return [derive(r, host, m) for r, m in zip(rules, matches)]


def random_parallel_pair(
    rng: random.Random, p: GenParams
) -> tuple[DirectTransformation, DirectTransformation]:
    first, second = random_coherent_family(rng, p, 2)
    return first, second


def random_sequential_pair(
    rng: random.Random, p: GenParams
) -> tuple[DirectTransformation, DirectTransformation]:
    """A step followed by an independent step on its result, built by
    relocating a disjoint parallel match through the first step."""
    gamma1, gamma2 = random_parallel_pair(rng, p)
    lifted = factor_through_mono(gamma2.m, gamma1.f)
    assert lifted is not None  # disjoint matches always lift
    gamma2p = derive(gamma2.rule, gamma1.H, compose(gamma1.g, lifted))
    return gamma1, gamma2p


def random_pct(rng: random.Random, p: GenParams, width: int) -> PCTDiagram:
    family = random_coherent_family(rng, p, width)
    return build_pct(coherence_witness(family))


def random_derived_host(
    rng: random.Random, p: GenParams, pct: PCTDiagram
) -> tuple[Graph, Morphism]:
    """Another host containing the simultaneous application's whole input,
    with noise kept clear of what the derived rule removes."""
    core_image = set(
        compose(pct.witness.gammas[0].f, pct.e[0]).node_map.values()
    )
    protected = {n.id for n in pct.G.nodes if n.id not in core_image}
    host, (m,) = _embedded_host(rng, [(pct.G, protected)], p)
    return host, m


# --------------------------------------------------------------------------
# oracles: naive constructions sharing no code with the production ones
# --------------------------------------------------------------------------


def _naive_partition(
    elements: list[tuple[int, str]], relations: list[tuple[tuple[int, str], tuple[int, str]]]
) -> dict[tuple[int, str], int]:
    """Equivalence closure by repeated merging of explicit class lists."""
    classes: list[list[tuple[int, str]]] = [[e] for e in sorted(elements)]
    where = {e: i for i, cls in enumerate(classes) for e in cls}
    for a, b in relations:
        ia, ib = where[a], where[b]
        if ia == ib:
            continue
        keep, absorb = min(ia, ib), max(ia, ib)
        for e in classes[absorb]:
            where[e] = keep
        classes[keep].extend(classes[absorb])
        classes[absorb] = []
    renumber: dict[int, int] = {}
    out: dict[tuple[int, str], int] = {}
    for e in sorted(elements):
        i = where[e]
        if i not in renumber:
            renumber[i] = len(renumber)
        out[e] = renumber[i]
    return out


def _naive_glue(
    graphs: Sequence[Graph],
    node_relations: list,
    edge_relations: list,
) -> tuple[Graph, list[Morphism]]:
    node_elems = [(i, n.id) for i, g in enumerate(graphs) for n in g.nodes]
    edge_elems = [(i, e.id) for i, g in enumerate(graphs) for e in g.edges]
    node_cls = _naive_partition(node_elems, node_relations)
    edge_cls = _naive_partition(edge_elems, edge_relations)
    nodes: dict[str, Node] = {}
    edges: dict[str, Edge] = {}
    for i, g in enumerate(graphs):
        for n in g.nodes:
            nid = f"glued{node_cls[(i, n.id)]}"
            nodes.setdefault(nid, Node(nid, n.label))
        for e in g.edges:
            eid = f"gluede{edge_cls[(i, e.id)]}"
            edges.setdefault(
                eid,
                Edge(eid, f"glued{node_cls[(i, e.src)]}", f"glued{node_cls[(i, e.tgt)]}", e.label),
            )
    apex = Graph(tuple(nodes.values()), tuple(edges.values()))
    injections = [
        Morphism(
            g,
            apex,
            {n.id: f"glued{node_cls[(i, n.id)]}" for n in g.nodes},
            {e.id: f"gluede{edge_cls[(i, e.id)]}" for e in g.edges},
        )
        for i, g in enumerate(graphs)
    ]
    return apex, injections


def brute_force_morphisms(dom: Graph, cod: Graph) -> list[Morphism]:
    """Every assignment tuple, filtered by validity; exponential, test-only."""
    out: list[Morphism] = []
    for nm_combo in itertools.product(cod.node_ids, repeat=len(dom.nodes)):
        nm = dict(zip(dom.node_ids, nm_combo))
        for em_combo in itertools.product(cod.edge_ids, repeat=len(dom.edges)):
            em = dict(zip(dom.edge_ids, em_combo))
            try:
                out.append(Morphism(dom, cod, nm, em))
            except ValueError:
                continue
    return out


def oracle_pushout(f: Morphism, g: Morphism) -> PushoutResult:
    """Naive pushout: explicit closure over the generated relation."""
    node_rel = [((0, f.node_map[x]), (1, g.node_map[x])) for x in f.dom.node_ids]
    edge_rel = [((0, f.edge_map[x]), (1, g.edge_map[x])) for x in f.dom.edge_ids]
    apex, (left, right) = _naive_glue([f.cod, g.cod], node_rel, edge_rel)
    return PushoutResult(apex, left, right)


def oracle_wide_colimit(source: Sequence[Morphism]) -> WideColimit:
    """Naive wide colimit: every pair of legs contributes its relations."""
    shared = source[0].dom
    node_rel = []
    edge_rel = []
    for a, b in itertools.combinations(range(len(source)), 2):
        node_rel.extend(
            ((a, source[a].node_map[x]), (b, source[b].node_map[x]))
            for x in shared.node_ids
        )
        edge_rel.extend(
            ((a, source[a].edge_map[x]), (b, source[b].edge_map[x]))
            for x in shared.edge_ids
        )
    apex, injections = _naive_glue([s.cod for s in source], node_rel, edge_rel)
    return WideColimit(apex, tuple(injections))


def oracle_pullback(f: Morphism, g: Morphism) -> PullbackResult:
    """Naive pullback: filter the full cartesian product of elements."""
    lim = oracle_wide_limit([f, g])
    return PullbackResult(lim.apex, lim.projections[0], lim.projections[1])


def oracle_wide_limit(sink: Sequence[Morphism]) -> WideLimit:
    """Naive wide limit: filter the full product of node and edge tuples."""
    node_rows = list(
        itertools.product(*[[n.id for n in f.dom.nodes] for f in sink])
    )
    node_keep = [
        combo
        for combo in node_rows
        if len({f.node_map[x] for f, x in zip(sink, combo)}) == 1
    ]
    node_id = {combo: f"tup{i}" for i, combo in enumerate(sorted(node_keep))}
    edge_rows = list(
        itertools.product(*[[e for e in f.dom.edges] for f in sink])
    )
    nodes = tuple(
        Node(node_id[combo], sink[0].dom.node_by_id[combo[0]].label)
        for combo in sorted(node_keep)
    )
    edges = []
    edge_id = {}
    for combo in edge_rows:
        if len({f.edge_map[e.id] for f, e in zip(sink, combo)}) != 1:
            continue
        key = tuple(e.id for e in combo)
        eid = f"tupe{len(edge_id)}"
        edge_id[key] = eid
        edges.append(
            Edge(
                eid,
                node_id[tuple(e.src for e in combo)],
                node_id[tuple(e.tgt for e in combo)],
                combo[0].label,
            )
        )
    apex = Graph(nodes, tuple(edges))
    projections = tuple(
        Morphism(
            apex,
            f.dom,
            {node_id[c]: c[a] for c in node_keep},
            {eid: key[a] for key, eid in edge_id.items()},
        )
        for a, f in enumerate(sink)
    )
    return WideLimit(apex, projections, ())


# --------------------------------------------------------------------------
# agreement up to isomorphism
# --------------------------------------------------------------------------


def same_colimit(canonical: Sequence[Morphism], other: Sequence[Morphism]) -> bool:
    """Whether two cocones over the same family are the same colimit: the
    mediator out of the (genuine) canonical one is an isomorphism."""
    mediator = cocone_factor(list(canonical), list(other))
    return mediator is not None and is_isomorphism(mediator)


def same_limit(canonical: Sequence[Morphism], other: Sequence[Morphism]) -> bool:
    """Dual of :func:`same_colimit` for cones over the same family."""
    mediator = cone_factor(list(canonical), list(other))
    return mediator is not None and is_isomorphism(mediator)


def pushout_agrees(a: PushoutResult, b: PushoutResult) -> bool:
    return same_colimit([a.left_inj, a.right_inj], [b.left_inj, b.right_inj])


def pullback_agrees(a: PullbackResult, b: PullbackResult) -> bool:
    return same_limit([a.proj_left, a.proj_right], [b.proj_left, b.proj_right])


# --------------------------------------------------------------------------
# the property suite
# --------------------------------------------------------------------------

PropertyFn = Callable[[random.Random, GenParams], str | None]
PROPERTIES: dict[str, PropertyFn] = {}


def _property(name: str):
    def register(fn: PropertyFn) -> PropertyFn:
        PROPERTIES[name] = fn
        return fn

    return register


@_property("generated_graphs_are_valid")
def _prop_graphs_valid(rng, p):
    problem = validate_graph(random_graph(rng, p))
    return problem


@_property("generated_rules_are_valid")
def _prop_rules_valid(rng, p):
    return validate_rule(random_rule(rng, p))


@_property("rule_generator_covers_all_item_classes")
def _prop_rule_coverage(rng, p):
    counts = {"removed": 0, "weak": 0, "preserved": 0, "added": 0}
    samples = 60
    for _ in range(samples):
        rule = random_rule(rng, p)
        if len(rule.L.nodes) + len(rule.L.edges) > len(rule.K.nodes) + len(rule.K.edges):
            counts["removed"] += 1
        if len(rule.K.nodes) + len(rule.K.edges) > len(rule.I.nodes) + len(rule.I.edges):
            counts["weak"] += 1
        if rule.I.nodes or rule.I.edges:
            counts["preserved"] += 1
        if len(rule.R.nodes) + len(rule.R.edges) > len(rule.I.nodes) + len(rule.I.edges):
            counts["added"] += 1
    lacking = {k: v for k, v in counts.items() if v < samples // 10}
    return f"classes below 10%: {lacking}" if lacking else None


@_property("composition_is_associative_and_unital")
def _prop_compose_assoc(rng, p):
    small = replace(p, max_nodes=3, max_edges=3)
    a = random_graph(rng, small)
    f = random_morphism_from(rng, a, small, tag="f")
    g = random_morphism_from(rng, f.cod, small, tag="g")
    h = random_morphism_from(rng, g.cod, small, tag="h")
    lhs = compose(h, compose(g, f))
    rhs = compose(compose(h, g), f)
    if lhs != rhs:
        return "associativity failed"
    oracle = Morphism(
        a,
        h.cod,
        {x: h.node_map[g.node_map[f.node_map[x]]] for x in a.node_ids},
        {x: h.edge_map[g.edge_map[f.edge_map[x]]] for x in a.edge_ids},
    )
    if lhs != oracle:
        return "composite disagrees with direct map composition"
    if compose(f, identity(a)) != f or compose(identity(f.cod), f) != f:
        return "identity laws failed"
    return None


@_property("monos_compose_and_decompose")
def _prop_mono_decomposition(rng, p):
    small = replace(p, max_nodes=3, max_edges=3)
    a = random_graph(rng, small)
    f = random_morphism_from(rng, a, small, tag="f")
    g = random_mono_from(rng, f.cod, small, tag="g")
    gf = compose(g, f)
    if is_monomorphism(f) != is_monomorphism(gf):
        return "mono composition/decomposition failed"
    return None


@_property("morphism_enumeration_matches_brute_force")
def _prop_enumeration_bruteforce(rng, p):
    tiny = replace(p, max_nodes=3, max_edges=2)
    dom = random_graph(rng, tiny)
    cod = random_graph(rng, replace(p, max_nodes=3, max_edges=3))
    found = enumerate_morphisms(dom, cod)
    brute = brute_force_morphisms(dom, cod)

    def key(m):
        return (sorted(m.node_map.items()), sorted(m.edge_map.items()))

    if sorted(map(key, found)) != sorted(map(key, brute)):
        return f"enumeration found {len(found)}, brute force {len(brute)}"
    monos = enumerate_morphisms(dom, cod, mono_only=True)
    if sorted(map(key, monos)) != sorted(
        key(m) for m in brute if is_monomorphism(m)
    ):
        return "injective enumeration disagrees with filtered brute force"
    return None


@_property("isomorphism_found_between_renamings")
def _prop_iso_renaming(rng, p):
    g = random_graph(rng, p)
    order = list(range(len(g.nodes)))
    rng.shuffle(order)
    renames = {n.id: f"r{order[i]}" for i, n in enumerate(g.nodes)}
    h = Graph(
        tuple(Node(renames[n.id], n.label) for n in g.nodes),
        tuple(
            Edge(f"re{i}", renames[e.src], renames[e.tgt], e.label)
            for i, e in enumerate(g.edges)
        ),
    )
    iso = find_isomorphism(g, h)
    if iso is None or not is_isomorphism(iso):
        return "no isomorphism found between renamed copies"
    bigger = Graph(h.nodes + (Node("spare", p.label_alphabet[0]),), h.edges)
    if find_isomorphism(g, bigger) is not None:
        return "isomorphism reported between graphs of different size"
    return None


@_property("pushout_matches_oracle")
def _prop_pushout_oracle(rng, p):
    f, g = random_span(rng, p)
    if not pushout_agrees(pushout(f, g), oracle_pushout(f, g)):
        return "pushout disagrees with naive closure"
    return None


@_property("pullback_matches_oracle")
def _prop_pullback_oracle(rng, p):
    legs = random_sink(rng, p, 2)
    if not pullback_agrees(pullback(legs[0], legs[1]), oracle_pullback(legs[0], legs[1])):
        return "pullback disagrees with naive product filter"
    return None


@_property("wide_limit_matches_oracle")
def _prop_wide_limit_oracle(rng, p):
    legs = random_sink(rng, p, rng.randint(1, 3))
    lim = wide_limit(legs)
    oracle = oracle_wide_limit(legs)
    if not same_limit(lim.projections, oracle.projections):
        return "wide limit disagrees with naive product filter"
    return None


@_property("wide_colimit_matches_oracle")
def _prop_wide_colimit_oracle(rng, p):
    legs = random_source(rng, p, rng.randint(1, 3))
    colim = wide_colimit(legs)
    oracle = oracle_wide_colimit(legs)
    if not same_colimit(colim.injections, oracle.injections):
        return "wide colimit disagrees with naive closure"
    return None


@_property("pushout_square_reverifies")
def _prop_pushout_reverify(rng, p):
    f, g = random_span(rng, p)
    po = pushout(f, g)
    if compose(po.left_inj, f) != compose(po.right_inj, g):
        return "pushout square does not commute"
    if not is_pushout_square(f, g, po.left_inj, po.right_inj):
        return "pushout fails its own universal property"
    return None


@_property("pushout_preserves_injectivity")
def _prop_pushout_mono(rng, p):
    base = random_graph(rng, p)
    f = random_mono_into(rng, base, tag="m")
    g = random_morphism_from(rng, f.dom, p, tag="c")
    po = pushout(f, g)
    if not is_monomorphism(po.right_inj):
        return "gluing along an embedding broke injectivity on the other side"
    return None


@_property("pullback_preserves_injectivity")
def _prop_pullback_mono(rng, p):
    shared = random_graph(rng, p)
    f = random_morphism_into(rng, shared, p, tag="f")
    g = random_mono_into(rng, shared, tag="g")
    pb = pullback(f, g)
    if not is_monomorphism(pb.proj_left):
        return "pairing against an embedding broke injectivity on the other side"
    return None


@_property("pushout_along_embedding_is_pullback")
def _prop_pushout_is_pullback(rng, p):
    base = random_graph(rng, replace(p, max_nodes=4, max_edges=4))
    f = random_mono_into(rng, base, tag="m")
    g = random_morphism_from(rng, f.dom, p, tag="c")
    po = pushout(f, g)
    if not is_pullback_square(f, g, po.left_inj, po.right_inj):
        return "gluing along an embedding did not read back as a pairing"
    return None


@_property("binary_wide_limit_equals_pullback")
def _prop_limit_pair(rng, p):
    legs = random_sink(rng, p, 2)
    lim = wide_limit(legs)
    pb = pullback(legs[0], legs[1])
    if lim.apex != pb.apex or lim.projections != (pb.proj_left, pb.proj_right):
        return "binary wide limit differs from pullback"
    return None


@_property("binary_wide_colimit_equals_pushout")
def _prop_colimit_pair(rng, p):
    legs = random_source(rng, p, 2)
    colim = wide_colimit(legs)
    po = pushout(legs[0], legs[1])
    if colim.apex != po.apex or colim.injections != (po.left_inj, po.right_inj):
        return "binary wide colimit differs from pushout"
    return None


@_property("context_extraction_reglues_to_host")
def _prop_complement_reconstructs(rng, p):
    rule_scale = replace(p, max_nodes=min(p.max_nodes, 4), max_edges=min(p.max_edges, 4))
    rule = random_rule(rng, rule_scale)
    host, (m,) = _embedded_host(rng, [(rule.L, _removable(rule))], p)
    k, f = category.pushout_complement(rule.l, m)
    if validate_graph(f.dom) is not None:
        return "extracted context is not a well-formed graph"
    if not is_monomorphism(f):
        return "context does not embed injectively"
    if not is_pushout_square(rule.l, k, m, f):
        return "regluing the removed part does not rebuild the host"
    return None


@_property("rewrite_steps_reverify")
def _prop_derive_reverify(rng, p):
    t = random_weak_dpo(rng, p)
    return verify_direct_transformation(t)


@_property("collapsed_rule_step_roundtrips")
def _prop_assoc_roundtrip(rng, p):
    t = random_weak_dpo(rng, p)
    hat = hat_gamma(t)
    problem = verify_direct_transformation(hat)
    if problem is not None:
        return f"collapsed step unsound: {problem}"
    back = assoc_to_weak(hat, t.rule)
    problem = verify_direct_transformation(back)
    if problem is not None:
        return f"read-back step unsound: {problem}"
    if back.H != t.H or find_isomorphism(back.H, t.H) is None:
        return "read-back step changed the result graph"
    return None


@_property("coherence_tracing_matches_search")
def _prop_coherence_search(rng, p):
    small = replace(p, max_nodes=min(p.max_nodes, 4), max_edges=min(p.max_edges, 4))
    gammas = random_coherent_family(rng, small, 2)
    w = coherence_witness(gammas)
    for a in range(2):
        anchor = compose(gammas[a].f, gammas[a].interface_embedding)
        for b in range(2):
            wanted = [
                m
                for m in enumerate_morphisms(gammas[a].rule.I, gammas[b].D)
                if compose(gammas[b].f, m) == anchor
            ]
            if len(wanted) != 1 or wanted[0] != w.j[a][b]:
                return f"tracing missed or duplicated placement {a}->{b}"
    return None


@_property("single_step_runs_simultaneously_unchanged")
def _prop_degenerate_pct(rng, p):
    t = random_weak_dpo(rng, p)
    pct = build_pct(coherence_witness([t]))
    problem = verify_pct(pct)
    if problem is not None:
        return problem
    if not graphs_isomorphic(pct.H, t.H):
        return "one-step simultaneous run changed the result"
    return None


@_property("simultaneous_runs_reverify")
def _prop_pct_reverify(rng, p):
    pct = random_pct(rng, p, rng.randint(1, 3))
    return verify_pct(pct)


@_property("independent_pairs_are_coherent")
def _prop_indep_coherent(rng, p):
    gamma1, gamma2 = random_parallel_pair(rng, p)
    w = check_parallel_independence(gamma1, gamma2)
    pp = pair_pct(gamma1, gamma2, w)
    return verify_pct(pp.pct)


@_property("sequentialization_is_sound")
def _prop_analysis(rng, p):
    gamma1, gamma2 = random_parallel_pair(rng, p)
    w = check_parallel_independence(gamma1, gamma2)
    pp = pair_pct(gamma1, gamma2, w)
    gamma2p, sw, _ = analyze(pp)
    if not graphs_isomorphic(gamma2p.H, pp.pct.H):
        return "sequentialized step does not reach the simultaneous result"
    accepted = check_sequential_independence(gamma1, gamma2p)
    if accepted.j1p != sw.j1p or accepted.j2p != sw.j2p:
        return "independence witness is not the unique traced one"
    return None


@_property("parallelization_is_sound")
def _prop_synthesis(rng, p):
    gamma1, gamma2p = random_sequential_pair(rng, p)
    sw = check_sequential_independence(gamma1, gamma2p)
    gamma2, pp = synthesize(gamma1, gamma2p, sw)
    if not graphs_isomorphic(pp.pct.H, gamma2p.H):
        return "simultaneous run does not reach the sequential result"
    check_parallel_independence(gamma1, gamma2)
    return None


@_property("sequentialize_then_parallelize_roundtrips")
def _prop_roundtrip(rng, p):
    gamma1, gamma2 = random_parallel_pair(rng, p)
    if not roundtrip_check(gamma1, gamma2, direction="parallel"):
        return "parallel pair not recovered"
    gamma1s, gamma2p = random_sequential_pair(rng, p)
    if not roundtrip_check(gamma1s, gamma2p, direction="sequential"):
        return "sequential pair not recovered"
    return None


@_property("independence_witnesses_are_unique")
def _prop_witness_unique(rng, p):
    small = replace(p, max_nodes=min(p.max_nodes, 4), max_edges=min(p.max_edges, 4))
    gamma1, gamma2 = random_parallel_pair(rng, small)
    w = check_parallel_independence(gamma1, gamma2)
    for lhs, ctx, expect in ((gamma1.m, gamma2, w.j1), (gamma2.m, gamma1, w.j2)):
        candidates = [
            m
            for m in enumerate_morphisms(lhs.dom, ctx.D)
            if compose(ctx.f, m) == lhs
        ]
        if candidates != [expect]:
            return "witness is not the unique commuting embedding"
    return None


@_property("derived_rule_replays_on_its_own_host")
def _prop_derived_self(rng, p):
    pct = random_pct(rng, p, rng.randint(1, 2))
    dr = derived_rule(pct)
    applied = apply_derived_rule_to_source(dr)
    if not graphs_isomorphic(applied.H, pct.H):
        return "derived rule does not reproduce its own result"
    verify_derived_application(dr, applied)
    return None


@_property("derived_rule_transports_to_new_hosts")
def _prop_derived_transport(rng, p):
    pct = random_pct(rng, replace(p, max_nodes=min(p.max_nodes, 4)), rng.randint(1, 2))
    dr = derived_rule(pct)
    host, m = random_derived_host(rng, p, pct)
    applied = derive(dr.rule, host, m)
    transported = verify_derived_application(dr, applied)
    if transported.result != applied.H:
        return "transported run does not land on the application's result"
    return None


@_property("colimit_mediators_are_unique")
def _prop_cocone_unique(rng, p):
    small = replace(p, max_nodes=3, max_edges=3)
    legs = random_source(rng, small, 2)
    colim = wide_colimit(legs)
    y = random_morphism_from(rng, colim.apex, small, tag="y")
    cocone = [compose(y, h) for h in colim.injections]
    mediated = category.factor_through_colimit(colim, cocone)
    if mediated != y:
        return "mediator out of the merge is not unique"
    return None


@_property("limit_mediators_are_unique")
def _prop_cone_unique(rng, p):
    small = replace(p, max_nodes=3, max_edges=3)
    legs = random_sink(rng, small, 2)
    lim = wide_limit(legs)
    u = random_morphism_into(rng, lim.apex, small, tag="u")
    cone = [compose(e, u) for e in lim.projections]
    mediated = category.factor_through_limit(lim, cone)
    if mediated != u:
        return "mediator into the shared core is not unique"
    return None


@dataclass
class PropertyResult:
    passes: int = 0
    failures: int = 0
    failure_seeds: list[str] = field(default_factory=list)
    first_message: str | None = None


@dataclass
class SuiteReport:
    seed: int
    iterations: int
    results: dict[str, PropertyResult]
    elapsed_seconds: float

    @property
    def ok(self) -> bool:
        return all(r.failures == 0 for r in self.results.values())

    @property
    def total_failures(self) -> int:
        return sum(r.failures for r in self.results.values())

    def to_text(self) -> str:
        """Deterministic report body (timing deliberately excluded)."""
        lines = [f"property suite: seed={self.seed} iterations={self.iterations}"]
        for name in sorted(self.results):
            r = self.results[name]
            if r.failures == 0:
                lines.append(f"PASS {name} ({r.passes} checks)")
            else:
                lines.append(
                    f"FAIL {name} ({r.passes} passed, {r.failures} failed;"
                    f" seeds {r.failure_seeds}; first: {r.first_message})"
                )
        verdict = "OK" if self.ok else "FAILED"
        lines.append(
            f"{verdict}: {len(self.results)} properties,"
            f" {sum(r.passes for r in self.results.values())} checks,"
            f" {self.total_failures} failures"
        )
        return "\n".join(lines)


def run_property_suite(
    p: GenParams,
    iterations: int = 10,
    names: Sequence[str] | None = None,
) -> SuiteReport:
    """Run every registered property ``iterations`` times over instances
    derived from the seed.  The report is deterministic given the params."""
    _check_params(p)
    chosen = sorted(PROPERTIES) if names is None else list(names)
    unknown = [n for n in chosen if n not in PROPERTIES]
    if unknown:
        raise PreconditionError(f"unknown properties: {unknown}")
    started = time.perf_counter()
    results: dict[str, PropertyResult] = {}
    for name in chosen:
        result = PropertyResult()
        for i in range(iterations):
            case_seed = f"{p.seed}/{name}/{i}"
            rng = random.Random(case_seed)
            try:
                message = PROPERTIES[name](rng, p)
            except Exception as exc:  # a crash is a failing case, with context
                message = f"{type(exc).__name__}: {exc}"
            if message is None:
                result.passes += 1
            else:
                result.failures += 1
                result.failure_seeds.append(case_seed)
                if result.first_message is None:
                    result.first_message = message
        results[name] = result
    return SuiteReport(
        seed=p.seed,
        iterations=iterations,
        results=results,
        elapsed_seconds=time.perf_counter() - started,
    )
