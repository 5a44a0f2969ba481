"""Finite labeled directed multigraphs and their structure-preserving maps.

A graph is an immutable value: labeled nodes and labeled directed edges, all
carrying stable string identifiers.  A morphism maps identifiers of one graph
to identifiers of another and must be total, send edge endpoints to endpoints
and preserve every label.  Everything here is a pure function over these
values, so all of it is safe to use from multiple threads.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import CodomainMismatchError, DomainMismatchError, PreconditionError


@dataclass(frozen=True, order=True)
class Node:
    id: str
    label: str


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    src: str
    tgt: str
    label: str


@dataclass(frozen=True)
class Graph:
    """A finite labeled directed multigraph with stable element ids.

    Nodes and edges are kept sorted by id, so equality and iteration order
    are canonical regardless of construction order.
    """

    nodes: tuple[Node, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @cached_property
    def node_by_id(self) -> dict[str, Node]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def edge_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    @cached_property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @cached_property
    def incident_edges(self) -> dict[str, tuple[str, ...]]:
        """Edge ids touching each node (as source, target or both)."""
        touch: dict[str, list[str]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            if e.src in touch:
                touch[e.src].append(e.id)
            if e.tgt in touch and e.tgt != e.src:
                touch[e.tgt].append(e.id)
        return {k: tuple(v) for k, v in touch.items()}

    @property
    def is_empty(self) -> bool:
        return not self.nodes and not self.edges

    def __repr__(self):
        ns = ",".join(f"{n.id}:{n.label}" for n in self.nodes)
        es = ",".join(f"{e.id}={e.src}>{e.tgt}:{e.label}" for e in self.edges)
        return f"Graph[{ns} | {es}]"


EMPTY_GRAPH = Graph()


def make_graph(
    nodes: Iterable[tuple[str, str]] = (),
    edges: Iterable[tuple[str, str, str, str]] = (),
) -> Graph:
    """Build a graph from ``(id, label)`` and ``(id, src, tgt, label)`` rows."""
    return Graph(
        tuple(Node(i, lab) for i, lab in nodes),
        tuple(Edge(i, s, t, lab) for i, s, t, lab in edges),
    )


def validate_graph(g: Graph) -> str | None:
    """Return None if ``g`` is well formed, else a report naming the first
    offending element (duplicate ids first, then edges with missing ends)."""
    seen: set[str] = set()
    for n in g.nodes:
        if n.id in seen:
            return f"duplicate node id {n.id!r}"
        seen.add(n.id)
    seen = set()
    for e in g.edges:
        if e.id in seen:
            return f"duplicate edge id {e.id!r}"
        seen.add(e.id)
    node_ids = {n.id for n in g.nodes}
    for e in g.edges:
        if e.src not in node_ids:
            return f"edge {e.id!r} has missing source {e.src!r}"
        if e.tgt not in node_ids:
            return f"edge {e.id!r} has missing target {e.tgt!r}"
    return None


@dataclass(frozen=True)
class Morphism:
    """A structure-preserving map between two graphs.

    ``node_map`` and ``edge_map`` send ids of ``dom`` to ids of ``cod``.
    Construction fails if the map is not total, hits a missing element, or
    breaks a source, target or label.
    """

    dom: Graph
    cod: Graph
    node_map: Mapping[str, str]
    edge_map: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "node_map", dict(self.node_map))
        object.__setattr__(self, "edge_map", dict(self.edge_map))
        problem = self._check()
        if problem is not None:
            raise ValueError(f"invalid morphism: {problem}")

    def _check(self) -> str | None:
        nm, em = self.node_map, self.edge_map
        cod_nodes, cod_edges = self.cod.node_by_id, self.cod.edge_by_id
        for n in self.dom.nodes:
            img = nm.get(n.id)
            if img is None:
                return f"node {n.id!r} has no image"
            target = cod_nodes.get(img)
            if target is None:
                return f"node {n.id!r} maps to missing node {img!r}"
            if target.label != n.label:
                return f"node {n.id!r} changes label {n.label!r} -> {target.label!r}"
        if len(nm) != len(self.dom.nodes):
            extra = sorted(set(nm) - set(self.dom.node_by_id))
            return f"map defined on foreign node {extra[0]!r}"
        for e in self.dom.edges:
            img = em.get(e.id)
            if img is None:
                return f"edge {e.id!r} has no image"
            target = cod_edges.get(img)
            if target is None:
                return f"edge {e.id!r} maps to missing edge {img!r}"
            if target.label != e.label:
                return f"edge {e.id!r} changes label {e.label!r} -> {target.label!r}"
            if target.src != nm[e.src]:
                return f"edge {e.id!r} breaks source: {target.src!r} != image of {e.src!r}"
            if target.tgt != nm[e.tgt]:
                return f"edge {e.id!r} breaks target: {target.tgt!r} != image of {e.tgt!r}"
        if len(em) != len(self.dom.edges):
            extra = sorted(set(em) - set(self.dom.edge_by_id))
            return f"map defined on foreign edge {extra[0]!r}"
        return None

    def node_image(self, node_id: str) -> str:
        return self.node_map[node_id]

    def edge_image(self, edge_id: str) -> str:
        return self.edge_map[edge_id]

    def __repr__(self):
        nm = ",".join(f"{k}>{v}" for k, v in sorted(self.node_map.items()))
        em = ",".join(f"{k}>{v}" for k, v in sorted(self.edge_map.items()))
        return f"Morphism{{{nm} | {em}}}"


def identity(g: Graph) -> Morphism:
    """The identity morphism on ``g``."""
    return Morphism(g, g, {i: i for i in g.node_ids}, {i: i for i in g.edge_ids})


def compose(f: Morphism, g: Morphism) -> Morphism:
    """The composite ``f after g`` (first apply ``g``, then ``f``)."""
    if g.cod != f.dom:
        raise DomainMismatchError(
            "cannot compose: codomain of inner morphism differs from domain of outer"
        )
    return Morphism(
        g.dom,
        f.cod,
        {x: f.node_map[y] for x, y in g.node_map.items()},
        {x: f.edge_map[y] for x, y in g.edge_map.items()},
    )


def is_monomorphism(f: Morphism) -> bool:
    """True iff ``f`` is injective on nodes and edges (monos in this
    category are exactly the componentwise injective maps)."""
    return len(set(f.node_map.values())) == len(f.node_map) and len(
        set(f.edge_map.values())
    ) == len(f.edge_map)


def is_isomorphism(f: Morphism) -> bool:
    """True iff ``f`` is bijective on nodes and edges."""
    return (
        is_monomorphism(f)
        and len(f.node_map) == len(f.cod.nodes)
        and len(f.edge_map) == len(f.cod.edges)
    )


def inverse(f: Morphism) -> Morphism:
    """Invert an isomorphism."""
    if not is_isomorphism(f):
        raise PreconditionError("cannot invert: morphism is not an isomorphism")
    return Morphism(
        f.cod,
        f.dom,
        {v: k for k, v in f.node_map.items()},
        {v: k for k, v in f.edge_map.items()},
    )


def inclusion(sub: Graph, sup: Graph) -> Morphism:
    """The identity-on-ids embedding of a subgraph into a larger graph."""
    return Morphism(sub, sup, {i: i for i in sub.node_ids}, {i: i for i in sub.edge_ids})


def factor_through_mono(m: Morphism, mono: Morphism) -> Morphism | None:
    """Given ``m: X -> G`` and injective ``mono: D -> G``, return the unique
    ``u: X -> D`` with ``mono . u = m``, or None if some item of the image of
    ``m`` lies outside the image of ``mono``."""
    if m.cod != mono.cod:
        raise CodomainMismatchError("morphisms do not share a codomain")
    if not is_monomorphism(mono):
        raise PreconditionError("cannot trace through a non-injective morphism")
    rev_nodes = {v: k for k, v in mono.node_map.items()}
    rev_edges = {v: k for k, v in mono.edge_map.items()}
    node_map = {}
    for x, img in m.node_map.items():
        pre = rev_nodes.get(img)
        if pre is None:
            return None
        node_map[x] = pre
    edge_map = {}
    for x, img in m.edge_map.items():
        pre = rev_edges.get(img)
        if pre is None:
            return None
        edge_map[x] = pre
    return Morphism(m.dom, mono.dom, node_map, edge_map)


def first_untraceable(m: Morphism, mono: Morphism) -> str:
    """Name the first item (in id order) of ``dom(m)`` whose image has no
    preimage under ``mono``.  Used for error reports after a failed trace."""
    rev_nodes = set(mono.node_map.values())
    rev_edges = set(mono.edge_map.values())
    for nid in m.dom.node_ids:
        if m.node_map[nid] not in rev_nodes:
            return nid
    for eid in m.dom.edge_ids:
        if m.edge_map[eid] not in rev_edges:
            return eid
    raise PreconditionError("trace did not fail: no untraceable item")


def _match_order(g: Graph) -> list[str]:
    # Most-connected nodes first so edge constraints prune early; the output
    # list of morphisms is re-sorted canonically afterwards, so any
    # deterministic order is fine here.
    degree = {n.id: len(g.incident_edges[n.id]) for n in g.nodes}
    return sorted(g.node_ids, key=lambda i: (-degree[i], i))


def enumerate_morphisms(dom: Graph, cod: Graph, mono_only: bool = False) -> list[Morphism]:
    """All morphisms ``dom -> cod`` (injective ones only if ``mono_only``),
    duplicate-free, sorted by their node and edge images in id order."""
    order = _match_order(dom)
    by_label: dict[str, list[str]] = {}
    for n in cod.nodes:
        by_label.setdefault(n.label, []).append(n.id)
    # Edges of dom whose endpoints are both assigned once we reach position i.
    placed: set[str] = set()
    edge_checks: list[list[Edge]] = []
    for nid in order:
        placed.add(nid)
        edge_checks.append(
            [e for e in dom.edges if e.src in placed and e.tgt in placed and nid in (e.src, e.tgt)]
        )

    cod_edge_index: dict[tuple[str, str, str], list[str]] = {}
    for e in cod.edges:
        cod_edge_index.setdefault((e.src, e.tgt, e.label), []).append(e.id)

    results: list[Morphism] = []
    assignment: dict[str, str] = {}
    used_nodes: set[str] = set()

    def edge_candidates(e: Edge) -> list[str]:
        return cod_edge_index.get((assignment[e.src], assignment[e.tgt], e.label), [])

    def assign_edges(i: int, edge_map: dict[str, str], used_edges: set[str]):
        if i == len(dom.edges):
            results.append(Morphism(dom, cod, dict(assignment), dict(edge_map)))
            return
        e = dom.edges[i]
        for cand in edge_candidates(e):
            if mono_only and cand in used_edges:
                continue
            edge_map[e.id] = cand
            used_edges.add(cand)
            assign_edges(i + 1, edge_map, used_edges)
            used_edges.discard(cand)
            del edge_map[e.id]

    def assign_nodes(i: int):
        if i == len(order):
            assign_edges(0, {}, set())
            return
        nid = order[i]
        label = dom.node_by_id[nid].label
        for cand in by_label.get(label, []):
            if mono_only and cand in used_nodes:
                continue
            assignment[nid] = cand
            if all(edge_candidates(e) for e in edge_checks[i]):
                used_nodes.add(cand)
                assign_nodes(i + 1)
                used_nodes.discard(cand)
            del assignment[nid]

    assign_nodes(0)
    results.sort(
        key=lambda m: (
            tuple(m.node_map[i] for i in dom.node_ids),
            tuple(m.edge_map[i] for i in dom.edge_ids),
        )
    )
    return results


def _node_signature(g: Graph, nid: str) -> tuple:
    outs = Counter(e.label for e in g.edges if e.src == nid and e.tgt != nid)
    ins = Counter(e.label for e in g.edges if e.tgt == nid and e.src != nid)
    loops = Counter(e.label for e in g.edges if e.src == nid and e.tgt == nid)
    return (
        g.node_by_id[nid].label,
        tuple(sorted(outs.items())),
        tuple(sorted(ins.items())),
        tuple(sorted(loops.items())),
    )


def find_isomorphism(a: Graph, b: Graph) -> Morphism | None:
    """A label-preserving bijective morphism ``a -> b`` if one exists, found
    deterministically (smallest candidate images first), else None."""
    if len(a.nodes) != len(b.nodes) or len(a.edges) != len(b.edges):
        return None
    sig_a = {nid: _node_signature(a, nid) for nid in a.node_ids}
    sig_b: dict[tuple, list[str]] = {}
    for nid in b.node_ids:
        sig_b.setdefault(_node_signature(b, nid), []).append(nid)
    if Counter(sig_a.values()) != Counter(
        sig for sig, ids in sig_b.items() for _ in ids
    ):
        return None

    def edge_groups(g: Graph) -> dict[tuple[str, str, str], list[str]]:
        groups: dict[tuple[str, str, str], list[str]] = {}
        for e in g.edges:
            groups.setdefault((e.src, e.tgt, e.label), []).append(e.id)
        return groups

    groups_a, groups_b = edge_groups(a), edge_groups(b)
    order = _match_order(a)
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def edges_match(node_map: dict[str, str]) -> dict[str, str] | None:
        edge_map: dict[str, str] = {}
        for (s, t, lab), ids in groups_a.items():
            partner = groups_b.get((node_map[s], node_map[t], lab))
            if partner is None or len(partner) != len(ids):
                return None
            for x, y in zip(sorted(ids), sorted(partner)):
                edge_map[x] = y
        return edge_map

    def search(i: int) -> Morphism | None:
        if i == len(order):
            edge_map = edges_match(assignment)
            if edge_map is None:
                return None
            return Morphism(a, b, dict(assignment), edge_map)
        nid = order[i]
        for cand in sig_b.get(sig_a[nid], []):
            if cand in used:
                continue
            assignment[nid] = cand
            used.add(cand)
            found = search(i + 1)
            if found is not None:
                return found
            used.discard(cand)
            del assignment[nid]
        return None

    return search(0)


def graphs_isomorphic(a: Graph, b: Graph) -> bool:
    return find_isomorphism(a, b) is not None
