"""Categorical constructions over labeled multigraphs.

Colimit-side constructions (pushouts, wide colimits) glue graphs together:
they quotient a disjoint union by the equivalence generated by the input
morphisms.  Class representatives are the least tagged id, and quotient
elements are named ``"q:" + representative``, so every result is reproducible
bit for bit.  Limit-side constructions (pullbacks, wide limits) pair up
elements that agree in the shared codomain; apex elements are named by the
escaped, ``|``-joined component ids.

Wide limits are additionally rebuilt by peeling off one morphism at a time
and taking a pullback against the rest; the chain of intermediate stages is
returned with the limit, and each stage is checked against the direct
construction, so every call exercises the iterated-pullback decomposition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    ArityMismatchError,
    CodomainMismatchError,
    DomainMismatchError,
    EmptyFamilyError,
    GluingError,
    PreconditionError,
)
from .graphs import (
    Edge,
    Graph,
    Morphism,
    Node,
    compose,
    inclusion,
    is_isomorphism,
    is_monomorphism,
)


@dataclass(frozen=True)
class PushoutResult:
    apex: Graph
    left_inj: Morphism
    right_inj: Morphism


@dataclass(frozen=True)
class PullbackResult:
    apex: Graph
    proj_left: Morphism
    proj_right: Morphism


@dataclass(frozen=True)
class IteratedLimitStep:
    """One stage of the peel-one-morphism-off limit construction.

    ``partial_apex`` is the limit of the tail of the family,
    ``partial_projections`` its projections, and ``connector`` maps the full
    limit onto it.  Composing ``connector`` with a partial projection gives
    back the corresponding full projection.
    """

    partial_apex: Graph
    partial_projections: tuple[Morphism, ...]
    connector: Morphism


@dataclass(frozen=True)
class WideLimit:
    apex: Graph
    projections: tuple[Morphism, ...]
    steps: tuple[IteratedLimitStep, ...] = ()


@dataclass(frozen=True)
class WideColimit:
    apex: Graph
    injections: tuple[Morphism, ...]


# --------------------------------------------------------------------------
# quotients (colimit side)
# --------------------------------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def add(self, x: str):
        self.parent.setdefault(x, x)

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _tag(index: int, element_id: str) -> str:
    return f"{index}:{element_id}"


def _quotient(
    graphs: Sequence[Graph],
    node_pairs: Sequence[tuple[str, str]],
    edge_pairs: Sequence[tuple[str, str]],
) -> tuple[Graph, list[Morphism]]:
    """Glue a family of graphs along tagged-id equivalences.

    Pairs are tagged ids ``f"{index}:{id}"``.  The representative of a class
    is its least tagged id; quotient ids are ``"q:" + representative``.
    """
    nodes_uf, edges_uf = _UnionFind(), _UnionFind()
    for idx, g in enumerate(graphs):
        for nid in g.node_ids:
            nodes_uf.add(_tag(idx, nid))
        for eid in g.edge_ids:
            edges_uf.add(_tag(idx, eid))
    for a, b in node_pairs:
        nodes_uf.union(a, b)
    for a, b in edge_pairs:
        edges_uf.union(a, b)

    def classes(uf: _UnionFind) -> dict[str, str]:
        members: dict[str, list[str]] = {}
        for x in uf.parent:
            members.setdefault(uf.find(x), []).append(x)
        return {x: "q:" + min(group) for group in members.values() for x in group}

    node_q = classes(nodes_uf)
    edge_q = classes(edges_uf)

    out_nodes: dict[str, Node] = {}
    out_edges: dict[str, Edge] = {}
    for idx, g in enumerate(graphs):
        for n in g.nodes:
            qid = node_q[_tag(idx, n.id)]
            out_nodes.setdefault(qid, Node(qid, n.label))
        for e in g.edges:
            qid = edge_q[_tag(idx, e.id)]
            out_edges.setdefault(
                qid, Edge(qid, node_q[_tag(idx, e.src)], node_q[_tag(idx, e.tgt)], e.label)
            )
    apex = Graph(tuple(out_nodes.values()), tuple(out_edges.values()))
    injections = [
        Morphism(
            g,
            apex,
            {nid: node_q[_tag(idx, nid)] for nid in g.node_ids},
            {eid: edge_q[_tag(idx, eid)] for eid in g.edge_ids},
        )
        for idx, g in enumerate(graphs)
    ]
    return apex, injections


def wide_colimit(source: Sequence[Morphism]) -> WideColimit:
    """Glue the codomains of a family of morphisms out of a common domain,
    identifying the images of each shared element."""
    if not source:
        raise EmptyFamilyError("wide colimit of an empty source")
    shared = source[0].dom
    for s in source[1:]:
        if s.dom != shared:
            raise DomainMismatchError("wide colimit legs must share a domain")
    node_pairs = [
        (_tag(0, source[0].node_map[x]), _tag(a, s.node_map[x]))
        for a, s in enumerate(source)
        for x in shared.node_ids
    ]
    edge_pairs = [
        (_tag(0, source[0].edge_map[x]), _tag(a, s.edge_map[x]))
        for a, s in enumerate(source)
        for x in shared.edge_ids
    ]
    apex, injections = _quotient([s.cod for s in source], node_pairs, edge_pairs)
    return WideColimit(apex, tuple(injections))


def pushout(f: Morphism, g: Morphism) -> PushoutResult:
    """Pushout of the span ``cod(f) <- dom -> cod(g)``."""
    if f.dom != g.dom:
        raise DomainMismatchError("pushout legs must share a domain")
    colim = wide_colimit([f, g])
    return PushoutResult(colim.apex, colim.injections[0], colim.injections[1])


# --------------------------------------------------------------------------
# agreeing tuples (limit side)
# --------------------------------------------------------------------------


def _tuple_id(parts: Sequence[str]) -> str:
    escaped = [p.replace("\\", "\\\\").replace("|", "\\|") for p in parts]
    return "(" + "|".join(escaped) + ")"


def _agreeing_tuples(sink: Sequence[Morphism]) -> tuple[Graph, list[Morphism]]:
    """Apex of all element tuples, one per leg, with a common image."""
    shared = sink[0].cod
    nodes: list[Node] = []
    node_proj: list[dict[str, str]] = [{} for _ in sink]
    for gn in shared.nodes:
        rows = [
            [n.id for n in f.dom.nodes if f.node_map[n.id] == gn.id] for f in sink
        ]
        for combo in itertools.product(*rows):
            tid = _tuple_id(combo)
            nodes.append(Node(tid, gn.label))
            for a, part in enumerate(combo):
                node_proj[a][tid] = part
    edges: list[Edge] = []
    edge_proj: list[dict[str, str]] = [{} for _ in sink]
    for ge in shared.edges:
        rows = [
            [e for e in f.dom.edges if f.edge_map[e.id] == ge.id] for f in sink
        ]
        for combo in itertools.product(*rows):
            tid = _tuple_id([e.id for e in combo])
            src = _tuple_id([e.src for e in combo])
            tgt = _tuple_id([e.tgt for e in combo])
            edges.append(Edge(tid, src, tgt, ge.label))
            for a, part in enumerate(combo):
                edge_proj[a][tid] = part.id
    apex = Graph(tuple(nodes), tuple(edges))
    projections = [
        Morphism(apex, f.dom, node_proj[a], edge_proj[a]) for a, f in enumerate(sink)
    ]
    return apex, projections


def pullback(f: Morphism, g: Morphism) -> PullbackResult:
    """Pullback of the cospan ``dom(f) -> cod <- dom(g)``: pairs of elements
    with the same image."""
    if f.cod != g.cod:
        raise CodomainMismatchError("pullback legs must share a codomain")
    apex, projections = _agreeing_tuples([f, g])
    return PullbackResult(apex, projections[0], projections[1])


def wide_limit(sink: Sequence[Morphism]) -> WideLimit:
    """Limit of a family of morphisms into a common codomain.

    The apex consists of agreeing element tuples.  The same limit is rebuilt
    by peeling the first leg off and pulling back against the limit of the
    rest; each stage must land on the tuple apex exactly (up to the canonical
    pairing), which is re-checked on every call.
    """
    if not sink:
        raise EmptyFamilyError("wide limit of an empty sink")
    shared = sink[0].cod
    for f in sink[1:]:
        if f.cod != shared:
            raise CodomainMismatchError("wide limit legs must share a codomain")
    apex, projections = _agreeing_tuples(sink)
    if len(sink) == 1:
        return WideLimit(apex, tuple(projections), ())

    inner = wide_limit(list(sink[1:]))
    pb = pullback(sink[0], compose(sink[1], inner.projections[0]))
    connector = _rebase_onto_pullback(apex, projections, inner, pb)
    step = IteratedLimitStep(inner.apex, inner.projections, connector)
    return WideLimit(apex, tuple(projections), (step,) + inner.steps)


def _rebase_onto_pullback(
    apex: Graph,
    projections: Sequence[Morphism],
    inner: WideLimit,
    pb: PullbackResult,
) -> Morphism:
    """Identify the tuple apex with the peel-one-off pullback and return the
    connector onto the partial limit.  Any disagreement is an internal bug."""
    inner_node_key = {
        tuple(p.node_map[x] for p in inner.projections): x
        for x in inner.apex.node_ids
    }
    inner_edge_key = {
        tuple(p.edge_map[x] for p in inner.projections): x
        for x in inner.apex.edge_ids
    }
    node_map, edge_map = {}, {}
    for x in apex.node_ids:
        comps = tuple(p.node_map[x] for p in projections)
        node_map[x] = _tuple_id([comps[0], inner_node_key[comps[1:]]])
    for x in apex.edge_ids:
        comps = tuple(p.edge_map[x] for p in projections)
        edge_map[x] = _tuple_id([comps[0], inner_edge_key[comps[1:]]])
    pairing = Morphism(apex, pb.apex, node_map, edge_map)
    if not is_isomorphism(pairing):
        raise RuntimeError("internal: tuple limit and iterated pullback disagree")
    if compose(pb.proj_left, pairing) != projections[0]:
        raise RuntimeError("internal: iterated limit broke the first projection")
    connector = compose(pb.proj_right, pairing)
    for a, p in enumerate(inner.projections):
        if compose(p, connector) != projections[a + 1]:
            raise RuntimeError("internal: iterated limit broke a tail projection")
    return connector


# --------------------------------------------------------------------------
# pushout complement
# --------------------------------------------------------------------------


def pushout_complement(l: Morphism, m: Morphism) -> tuple[Morphism, Morphism]:
    """Carve the context out of a host graph.

    Given injective ``l: K -> L`` and a match ``m: L -> G``, remove the image
    of ``L`` minus ``l(K)`` from ``G`` and return ``(k: K -> D, f: D -> G)``
    completing the square.  Raises ``GluingError`` when the match merges a
    removed item with anything else (identification) or a removed node still
    touches an edge outside the match image (dangling).
    """
    return _pushout_complement(l, m, dangling_check=True)


def _pushout_complement(
    l: Morphism, m: Morphism, dangling_check: bool
) -> tuple[Morphism, Morphism]:
    # dangling_check=False over-deletes instead of failing; only the test
    # suite uses it, to confirm that the check is load-bearing.
    if not is_monomorphism(l):
        raise PreconditionError("pushout complement needs an injective rule leg")
    if l.cod != m.dom:
        raise DomainMismatchError("match domain must be the rule's left-hand side")
    L, G = m.dom, m.cod
    kept_nodes = set(l.node_map.values())
    kept_edges = set(l.edge_map.values())
    deleted_node_imgs = {m.node_map[x] for x in L.node_ids if x not in kept_nodes}
    deleted_edge_imgs = {m.edge_map[x] for x in L.edge_ids if x not in kept_edges}

    node_preimages: dict[str, list[str]] = {}
    for x in L.node_ids:
        node_preimages.setdefault(m.node_map[x], []).append(x)
    edge_preimages: dict[str, list[str]] = {}
    for x in L.edge_ids:
        edge_preimages.setdefault(m.edge_map[x], []).append(x)
    for x in L.node_ids:
        if x not in kept_nodes and len(node_preimages[m.node_map[x]]) > 1:
            raise GluingError(
                "identification",
                m.node_map[x],
                f"removed node {x!r} is merged with another preimage",
            )
    for x in L.edge_ids:
        if x not in kept_edges and len(edge_preimages[m.edge_map[x]]) > 1:
            raise GluingError(
                "identification",
                m.edge_map[x],
                f"removed edge {x!r} is merged with another preimage",
            )

    matched_edges = set(m.edge_map.values())
    for v in sorted(deleted_node_imgs):
        for eid in G.incident_edges[v]:
            if eid not in matched_edges:
                if dangling_check:
                    raise GluingError(
                        "dangling",
                        eid,
                        f"edge survives but its endpoint {v!r} is removed",
                    )
                deleted_edge_imgs.add(eid)

    context = Graph(
        tuple(n for n in G.nodes if n.id not in deleted_node_imgs),
        tuple(e for e in G.edges if e.id not in deleted_edge_imgs),
    )
    k = Morphism(
        l.dom,
        context,
        {z: m.node_map[l.node_map[z]] for z in l.dom.node_ids},
        {z: m.edge_map[l.edge_map[z]] for z in l.dom.edge_ids},
    )
    return k, inclusion(context, G)


# --------------------------------------------------------------------------
# mediating morphisms
# --------------------------------------------------------------------------


def cone_factor(
    projections: Sequence[Morphism], cone: Sequence[Morphism]
) -> Morphism | None:
    """Mediate a cone through jointly injective projections.

    ``projections`` map an apex onto the family; ``cone`` maps some object X
    onto the same family.  Returns the unique ``u: X -> apex`` with
    ``projection . u = cone leg`` for every leg, or None when no apex element
    matches some X element (the cone does not commute with the sink).
    """
    apex = projections[0].dom
    node_key: dict[tuple, str] = {}
    for x in apex.node_ids:
        key = tuple(p.node_map[x] for p in projections)
        if key in node_key:
            raise PreconditionError("projections are not jointly injective")
        node_key[key] = x
    edge_key: dict[tuple, str] = {}
    for x in apex.edge_ids:
        key = tuple(p.edge_map[x] for p in projections)
        if key in edge_key:
            raise PreconditionError("projections are not jointly injective")
        edge_key[key] = x

    X = cone[0].dom
    node_map, edge_map = {}, {}
    for x in X.node_ids:
        target = node_key.get(tuple(c.node_map[x] for c in cone))
        if target is None:
            return None
        node_map[x] = target
    for x in X.edge_ids:
        target = edge_key.get(tuple(c.edge_map[x] for c in cone))
        if target is None:
            return None
        edge_map[x] = target
    return Morphism(X, apex, node_map, edge_map)


def cocone_factor(
    injections: Sequence[Morphism], cocone: Sequence[Morphism]
) -> Morphism | None:
    """Mediate a cocone out of jointly surjective injections.

    ``injections`` map a family into an apex that they cover; ``cocone`` maps
    the same family into some object X.  Returns the unique ``u: apex -> X``
    with ``u . injection = cocone leg`` for every leg, or None when two legs
    disagree on a glued element (the cocone does not commute)."""
    apex = injections[0].cod
    node_map: dict[str, str] = {}
    edge_map: dict[str, str] = {}
    for inj, leg in zip(injections, cocone):
        for x, img in inj.node_map.items():
            val = leg.node_map[x]
            if node_map.setdefault(img, val) != val:
                return None
        for x, img in inj.edge_map.items():
            val = leg.edge_map[x]
            if edge_map.setdefault(img, val) != val:
                return None
    if len(node_map) != len(apex.nodes) or len(edge_map) != len(apex.edges):
        raise PreconditionError("injections do not jointly cover the apex")
    return Morphism(apex, cocone[0].cod, node_map, edge_map)


def factor_through_limit(
    lim: WideLimit, cone: Sequence[Morphism]
) -> Morphism | None:
    """The unique morphism into a limit apex matching a commuting cone, or
    None when the cone does not commute with the limit's family."""
    if len(cone) != len(lim.projections):
        raise ArityMismatchError(
            f"cone has {len(cone)} legs, limit has {len(lim.projections)}"
        )
    shared = cone[0].dom
    for c, p in zip(cone, lim.projections):
        if c.dom != shared:
            raise ArityMismatchError("cone legs must share a domain")
        if c.cod != p.cod:
            raise ArityMismatchError("cone leg codomain differs from projection")
    return cone_factor(lim.projections, cone)


def factor_through_colimit(
    colim: WideColimit, cocone: Sequence[Morphism]
) -> Morphism | None:
    """The unique morphism out of a colimit apex matching a commuting cocone,
    or None when the cocone does not commute with the colimit's family."""
    if len(cocone) != len(colim.injections):
        raise ArityMismatchError(
            f"cocone has {len(cocone)} legs, colimit has {len(colim.injections)}"
        )
    shared = cocone[0].cod
    for z, h in zip(cocone, colim.injections):
        if z.cod != shared:
            raise ArityMismatchError("cocone legs must share a codomain")
        if z.dom != h.dom:
            raise ArityMismatchError("cocone leg domain differs from injection")
    return cocone_factor(colim.injections, cocone)


# --------------------------------------------------------------------------
# re-verification of universal properties
# --------------------------------------------------------------------------


def is_pushout_square(
    f: Morphism, g: Morphism, p: Morphism, q: Morphism
) -> bool:
    """Whether ``(p, q)`` is a pushout of the span ``(f, g)``: the square
    commutes and the canonical gluing maps onto its corner by an iso."""
    if f.dom != g.dom or p.dom != f.cod or q.dom != g.cod or p.cod != q.cod:
        return False
    if compose(p, f) != compose(q, g):
        return False
    canonical = pushout(f, g)
    mediator = cocone_factor([canonical.left_inj, canonical.right_inj], [p, q])
    return mediator is not None and is_isomorphism(mediator)


def is_pullback_square(
    p: Morphism, q: Morphism, f: Morphism, g: Morphism
) -> bool:
    """Whether ``(p, q)`` is a pullback of the cospan ``(f, g)``."""
    if f.cod != g.cod or p.dom != q.dom or p.cod != f.dom or q.cod != g.dom:
        return False
    if compose(f, p) != compose(g, q):
        return False
    canonical = pullback(f, g)
    mediator = cone_factor([canonical.proj_left, canonical.proj_right], [p, q])
    return mediator is not None and is_isomorphism(mediator)


def is_limit_of(sink: Sequence[Morphism], projections: Sequence[Morphism]) -> bool:
    """Whether a source is a limit of the given sink."""
    if len(sink) != len(projections):
        return False
    apex = projections[0].dom
    composites = [compose(f, p) for f, p in zip(sink, projections)]
    if any(c != composites[0] for c in composites[1:]):
        return False
    if any(p.dom != apex or p.cod != f.dom for f, p in zip(sink, projections)):
        return False
    canonical_apex, canonical_projections = _agreeing_tuples(sink)
    mediator = cone_factor(canonical_projections, list(projections))
    return mediator is not None and is_isomorphism(mediator)


def is_colimit_of(source: Sequence[Morphism], injections: Sequence[Morphism]) -> bool:
    """Whether a sink is a colimit of the given source."""
    if len(source) != len(injections):
        return False
    apex = injections[0].cod
    composites = [compose(h, s) for s, h in zip(source, injections)]
    if any(c != composites[0] for c in composites[1:]):
        return False
    if any(h.cod != apex or h.dom != s.cod for s, h in zip(source, injections)):
        return False
    canonical = wide_colimit(source)
    mediator = cocone_factor(list(canonical.injections), list(injections))
    return mediator is not None and is_isomorphism(mediator)
