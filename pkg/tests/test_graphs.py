"""Graphs, morphisms, enumeration and isomorphism search."""

from __future__ import annotations

import itertools

import pytest
from helpers import D2, E2, EMPTY, LP, N1

from parcoh import (
    DomainMismatchError,
    Graph,
    Morphism,
    compose,
    enumerate_morphisms,
    find_isomorphism,
    identity,
    inclusion,
    is_isomorphism,
    is_monomorphism,
    make_graph,
    validate_graph,
)
from parcoh.harness import brute_force_morphisms


def test_validate_empty_graph_is_ok():
    assert validate_graph(EMPTY) is None


def test_validate_reports_edge_with_missing_source():
    broken = make_graph([("b", "A")], [("e", "a", "b", "x")])
    report = validate_graph(broken)
    assert report is not None and "'e'" in report


def test_validate_reports_duplicate_ids():
    dup = Graph(nodes=(*N1.nodes, *N1.nodes))
    report = validate_graph(dup)
    assert report is not None and "'a'" in report


def test_validate_fixture_is_ok():
    assert validate_graph(E2) is None


def test_graph_equality_ignores_construction_order():
    flipped = make_graph([("v", "A"), ("u", "A")], [("e", "u", "v", "x")])
    assert flipped == E2


def test_morphism_construction_rejects_label_break():
    other = make_graph([("b", "B")])
    with pytest.raises(ValueError, match="label"):
        Morphism(N1, other, {"a": "b"}, {})


def test_morphism_construction_rejects_partial_map():
    with pytest.raises(ValueError, match="no image"):
        Morphism(D2, N1, {"u": "a"}, {})


def test_morphism_construction_rejects_broken_incidence():
    two_edges = make_graph(
        [("u", "A"), ("v", "A"), ("w", "A")],
        [("e", "u", "v", "x"), ("f", "v", "w", "x")],
    )
    with pytest.raises(ValueError, match="source|target"):
        Morphism(E2, two_edges, {"u": "u", "v": "v"}, {"e": "f"})


def test_identity_of_empty_graph_is_empty():
    ident = identity(EMPTY)
    assert ident.node_map == {} and ident.edge_map == {}


def test_identity_maps_each_element_to_itself():
    assert identity(N1).node_map == {"a": "a"}


def test_identities_are_monomorphisms():
    assert is_monomorphism(identity(E2))


def test_compose_identity_laws():
    f = Morphism(N1, D2, {"a": "u"}, {})
    assert compose(f, identity(N1)) == f
    assert compose(identity(D2), f) == f


def test_compose_rejects_mismatched_endpoints():
    f = Morphism(N1, D2, {"a": "u"}, {})
    with pytest.raises(DomainMismatchError):
        compose(f, f)


def test_compose_is_associative_on_enumerable_triples():
    # every composable triple among small fixture graphs
    stages = [(N1, D2), (D2, E2), (E2, E2)]
    for (a, b), (b2, c), (c2, d) in [(*stages,)]:
        assert b == b2 and c == c2
        for f in enumerate_morphisms(a, b):
            for g in enumerate_morphisms(b, c):
                for h in enumerate_morphisms(c, d):
                    assert compose(h, compose(g, f)) == compose(compose(h, g), f)


def test_constant_map_is_not_mono():
    squash = Morphism(D2, N1, {"u": "a", "v": "a"}, {})
    assert not is_monomorphism(squash)


def test_inclusion_is_mono():
    assert is_monomorphism(Morphism(N1, D2, {"a": "u"}, {}))


def test_mono_decomposition_over_enumerated_morphisms():
    # if g and g.f are injective then so is f; checked exhaustively
    for f in enumerate_morphisms(D2, D2):
        for g in enumerate_morphisms(D2, E2):
            gf = compose(g, f)
            if is_monomorphism(g) and is_monomorphism(gf):
                assert is_monomorphism(f)


def test_enumerate_two_embeddings_of_a_node_into_two_nodes():
    found = enumerate_morphisms(N1, D2, mono_only=True)
    assert [m.node_map for m in found] == [{"a": "u"}, {"a": "v"}]


def test_enumerate_no_morphism_when_edge_has_no_image():
    assert enumerate_morphisms(E2, D2) == []


def test_enumerate_empty_domain_gives_exactly_the_empty_morphism():
    for target in (EMPTY, N1, E2, LP):
        found = enumerate_morphisms(EMPTY, target, mono_only=True)
        assert len(found) == 1
        assert found[0].node_map == {} and found[0].edge_map == {}


def test_enumerate_agrees_with_brute_force_on_fixtures():
    def key(m):
        return (tuple(sorted(m.node_map.items())), tuple(sorted(m.edge_map.items())))

    for dom, cod in itertools.product((EMPTY, N1, D2, E2, LP), repeat=2):
        fast = {key(m) for m in enumerate_morphisms(dom, cod)}
        slow = {key(m) for m in brute_force_morphisms(dom, cod)}
        assert fast == slow, (dom, cod)


def test_enumeration_order_is_canonical():
    found = enumerate_morphisms(D2, D2)
    keys = [tuple(m.node_map[i] for i in ("u", "v")) for m in found]
    assert keys == sorted(keys)


def test_find_isomorphism_on_same_graph_is_identity_like():
    iso = find_isomorphism(E2, E2)
    assert iso is not None and is_isomorphism(iso)
    assert iso.node_map == {"u": "u", "v": "v"}


def test_no_isomorphism_when_node_counts_differ():
    assert find_isomorphism(N1, D2) is None


def test_isomorphism_between_renamings_maps_accordingly():
    renamed = make_graph([("p", "A"), ("q", "A")], [("f", "p", "q", "x")])
    iso = find_isomorphism(E2, renamed)
    assert iso is not None
    assert iso.node_map == {"u": "p", "v": "q"} and iso.edge_map == {"e": "f"}


def test_no_isomorphism_when_labels_differ():
    other = make_graph([("u", "A")], [("l", "u", "u", "y")])
    assert find_isomorphism(LP, other) is None


def test_isomorphism_respects_parallel_edge_multiplicity():
    two = make_graph(
        [("u", "A"), ("v", "A")], [("e1", "u", "v", "x"), ("e2", "u", "v", "x")]
    )
    one_each_way = make_graph(
        [("u", "A"), ("v", "A")], [("e1", "u", "v", "x"), ("e2", "v", "u", "x")]
    )
    assert find_isomorphism(two, two) is not None
    assert find_isomorphism(two, one_each_way) is None


def test_incident_edges_cover_loops_once():
    assert LP.incident_edges["u"] == ("l",)
