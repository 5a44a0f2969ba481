"""Pushouts, pullbacks, complements, wide (co)limits and mediators."""

from __future__ import annotations

import pytest
from helpers import D2, E2, EMPTY, LP, N1, N1_W, loop_graph

from parcoh import (
    ArityMismatchError,
    CodomainMismatchError,
    DomainMismatchError,
    EmptyFamilyError,
    GluingError,
    Morphism,
    compose,
    factor_through_colimit,
    factor_through_limit,
    find_isomorphism,
    graphs_isomorphic,
    identity,
    inclusion,
    is_isomorphism,
    is_monomorphism,
    is_pullback_square,
    is_pushout_square,
    make_graph,
    pullback,
    pushout,
    pushout_complement,
    wide_colimit,
    wide_limit,
)


def embed(a, b, nodes, edges=None):
    return Morphism(a, b, nodes, edges or {})


# -- pushouts ---------------------------------------------------------------

def test_pushout_over_empty_apex_is_disjoint_union():
    f = embed(EMPTY, E2, {})
    g = embed(EMPTY, LP, {})
    po = pushout(f, g)
    assert len(po.apex.nodes) == 3 and len(po.apex.edges) == 2
    assert is_pushout_square(f, g, po.left_inj, po.right_inj)


def test_pushout_along_identity_gives_isomorphic_apex():
    g = embed(N1, E2, {"a": "u"})
    po = pushout(identity(N1), g)
    assert is_isomorphism(po.right_inj)
    assert graphs_isomorphic(po.apex, E2)


def test_pushout_merges_shared_node():
    f = embed(N1, E2, {"a": "u"})
    g = embed(N1, N1_W, {"a": "w"})
    po = pushout(f, g)
    assert len(po.apex.nodes) == 2 and len(po.apex.edges) == 1
    assert compose(po.left_inj, f) == compose(po.right_inj, g)
    assert po.left_inj.node_map["u"] == po.right_inj.node_map["w"]


def test_pushout_requires_shared_domain():
    with pytest.raises(DomainMismatchError):
        pushout(embed(N1, D2, {"a": "u"}), embed(EMPTY, D2, {}))


def test_pushout_quotient_ids_are_deterministic():
    f = embed(N1, E2, {"a": "u"})
    g = embed(N1, N1_W, {"a": "w"})
    first, second = pushout(f, g), pushout(f, g)
    assert first.apex == second.apex
    assert {n.id for n in first.apex.nodes} == {"q:0:u", "q:0:v"}


# -- pullbacks --------------------------------------------------------------

def test_pullback_of_identities_is_isomorphic_to_base():
    pb = pullback(identity(E2), identity(E2))
    assert graphs_isomorphic(pb.apex, E2)
    assert is_isomorphism(pb.proj_left)


def test_pullback_of_disjoint_inclusions_is_empty():
    pb = pullback(embed(N1, D2, {"a": "u"}), embed(N1, D2, {"a": "v"}))
    assert pb.apex == EMPTY


def test_pullback_of_a_mono_with_itself_recovers_its_domain():
    m = embed(N1, E2, {"a": "u"})
    pb = pullback(m, m)
    assert graphs_isomorphic(pb.apex, N1)
    assert pb.proj_left == pb.proj_right


def test_pullback_requires_shared_codomain():
    with pytest.raises(CodomainMismatchError):
        pullback(embed(N1, D2, {"a": "u"}), embed(N1, E2, {"a": "u"}))


def test_pullback_pairs_agreeing_edges():
    # two copies of the edge graph over itself: the apex keeps one edge pair
    pb = pullback(identity(E2), identity(E2))
    assert len(pb.apex.edges) == 1


# -- pushout complement -----------------------------------------------------

def test_complement_of_identity_keeps_host():
    k, f = pushout_complement(identity(N1), embed(N1, D2, {"a": "u"}))
    assert f.dom == D2
    assert is_isomorphism(f)


def test_complement_removes_matched_node():
    to_l = embed(EMPTY, N1, {})
    k, f = pushout_complement(to_l, embed(N1, D2, {"a": "u"}))
    assert [n.id for n in f.dom.nodes] == ["v"]
    # regluing the removed part rebuilds the host
    assert is_pushout_square(to_l, k, embed(N1, D2, {"a": "u"}), f)


def test_complement_fails_on_dangling_edge():
    to_l = embed(EMPTY, N1, {})
    with pytest.raises(GluingError) as err:
        pushout_complement(to_l, embed(N1, E2, {"a": "u"}))
    assert err.value.kind == "dangling" and err.value.element == "e"


def test_complement_fails_when_removed_node_is_merged():
    to_l = embed(N1, D2, {"a": "u"})  # keep u, remove v
    squash = Morphism(D2, N1, {"u": "a", "v": "a"}, {})
    with pytest.raises(GluingError) as err:
        pushout_complement(to_l, squash)
    assert err.value.kind == "identification"


def test_complement_allows_merging_of_kept_items():
    keep_both = identity(D2)
    squash = Morphism(D2, N1, {"u": "a", "v": "a"}, {})
    k, f = pushout_complement(keep_both, squash)
    assert is_pushout_square(keep_both, k, squash, f)


# -- wide limits ------------------------------------------------------------

def test_wide_limit_of_one_leg_is_isomorphic_to_its_domain():
    m = embed(N1, D2, {"a": "u"})
    lim = wide_limit([m])
    assert graphs_isomorphic(lim.apex, N1)
    assert is_isomorphism(lim.projections[0])
    assert lim.steps == ()


def test_wide_limit_of_identical_monos_is_diagonal():
    m = embed(N1, E2, {"a": "u"})
    lim = wide_limit([m, m])
    assert graphs_isomorphic(lim.apex, N1)


def test_wide_limit_of_disjoint_inclusions_is_empty():
    lim = wide_limit([embed(N1, D2, {"a": "u"}), embed(N1, D2, {"a": "v"})])
    assert lim.apex == EMPTY


def test_wide_limit_rejects_empty_family():
    with pytest.raises(EmptyFamilyError):
        wide_limit([])


def test_wide_limit_exposes_the_peeling_chain():
    m = embed(N1, E2, {"a": "u"})
    lim = wide_limit([m, m, m])
    assert len(lim.steps) == 2
    first = lim.steps[0]
    # the connector reaches the partial limit and recovers tail projections
    assert first.connector.dom == lim.apex
    for a, partial in enumerate(first.partial_projections):
        assert compose(partial, first.connector) == lim.projections[a + 1]
    # the peeled square is a genuine pullback
    tail = compose(m, first.partial_projections[0])
    assert is_pullback_square(lim.projections[0], first.connector, m, tail)


def test_binary_wide_limit_equals_pullback():
    f = embed(N1, D2, {"a": "u"})
    g = identity(D2)
    lim = wide_limit([f, g])
    pb = pullback(f, g)
    assert lim.apex == pb.apex
    assert lim.projections == (pb.proj_left, pb.proj_right)


# -- wide colimits ----------------------------------------------------------

def test_wide_colimit_of_one_leg_is_isomorphic_to_its_codomain():
    colim = wide_colimit([embed(N1, E2, {"a": "u"})])
    assert graphs_isomorphic(colim.apex, E2)


def test_wide_colimit_glues_two_loops_on_one_node():
    lp1, lp2 = loop_graph("x"), loop_graph("y")
    legs = [embed(N1, lp1, {"a": "u"}), embed(N1, lp2, {"a": "u"})]
    colim = wide_colimit(legs)
    assert len(colim.apex.nodes) == 1 and len(colim.apex.edges) == 2
    assert {e.label for e in colim.apex.edges} == {"x", "y"}


def test_wide_colimit_of_identities_is_codiagonal():
    colim = wide_colimit([identity(E2), identity(E2), identity(E2)])
    assert graphs_isomorphic(colim.apex, E2)


def test_wide_colimit_rejects_mismatched_domains():
    with pytest.raises(DomainMismatchError):
        wide_colimit([identity(N1), identity(D2)])


def test_binary_wide_colimit_equals_pushout():
    f = embed(N1, E2, {"a": "u"})
    g = embed(N1, LP, {"a": "u"})
    colim = wide_colimit([f, g])
    po = pushout(f, g)
    assert colim.apex == po.apex
    assert colim.injections == (po.left_inj, po.right_inj)


# -- mediating morphisms ----------------------------------------------------

def test_factor_cone_of_own_projections_is_identity():
    m = embed(N1, E2, {"a": "u"})
    lim = wide_limit([m, identity(E2)])
    mediator = factor_through_limit(lim, list(lim.projections))
    assert mediator == identity(lim.apex)


def test_factor_cone_from_empty_graph_is_empty_morphism():
    lim = wide_limit([identity(D2), identity(D2)])
    cone = [embed(EMPTY, D2, {}), embed(EMPTY, D2, {})]
    mediator = factor_through_limit(lim, cone)
    assert mediator is not None and mediator.dom == EMPTY


def test_factor_cone_rejects_wrong_arity():
    lim = wide_limit([identity(D2), identity(D2)])
    with pytest.raises(ArityMismatchError):
        factor_through_limit(lim, [identity(D2)])


def test_factor_cone_returns_none_when_cone_disagrees():
    lim = wide_limit([embed(N1, D2, {"a": "u"}), embed(N1, D2, {"a": "u"})])
    # the legs point at different nodes, so no apex element matches
    cone = [identity(N1), identity(N1)]
    bad_cone = [
        Morphism(N1, N1, {"a": "a"}, {}),
        Morphism(N1, N1, {"a": "a"}, {}),
    ]
    assert factor_through_limit(lim, bad_cone) is not None  # diagonal works
    disjoint = wide_limit([embed(N1, D2, {"a": "u"}), embed(N1, D2, {"a": "v"})])
    assert factor_through_limit(disjoint, bad_cone) is None


def test_factor_cocone_of_own_injections_is_identity():
    colim = wide_colimit([embed(N1, E2, {"a": "u"}), embed(N1, LP, {"a": "u"})])
    mediator = factor_through_colimit(colim, list(colim.injections))
    assert mediator == identity(colim.apex)


def test_factor_cocone_collapse_onto_single_node():
    colim = wide_colimit([identity(D2), identity(D2)])
    squash = Morphism(D2, N1, {"u": "a", "v": "a"}, {})
    mediator = factor_through_colimit(colim, [squash, squash])
    assert mediator is not None
    assert set(mediator.node_map.values()) == {"a"}
    for inj in colim.injections:
        assert compose(mediator, inj) == squash


def test_factor_cocone_returns_none_when_cocone_disagrees():
    colim = wide_colimit([identity(N1), identity(N1)])
    into_u = embed(N1, D2, {"a": "u"})
    into_v = embed(N1, D2, {"a": "v"})
    assert factor_through_colimit(colim, [into_u, into_v]) is None


def test_factor_cocone_rejects_wrong_arity():
    colim = wide_colimit([identity(N1), identity(N1)])
    with pytest.raises(ArityMismatchError):
        factor_through_colimit(colim, [identity(N1)])


# -- square laws over fixtures ----------------------------------------------

def test_pushout_square_of_own_output_verifies():
    f = embed(N1, E2, {"a": "u"})
    g = embed(N1, LP, {"a": "u"})
    po = pushout(f, g)
    assert is_pushout_square(f, g, po.left_inj, po.right_inj)
    # a padded corner is not a pushout
    padded = pushout(f, g)
    bigger = make_graph(
        [(n.id, n.label) for n in padded.apex.nodes] + [("spare", "A")],
        [(e.id, e.src, e.tgt, e.label) for e in padded.apex.edges],
    )
    lifted_l = Morphism(E2, bigger, padded.left_inj.node_map, padded.left_inj.edge_map)
    lifted_r = Morphism(LP, bigger, padded.right_inj.node_map, padded.right_inj.edge_map)
    assert not is_pushout_square(f, g, lifted_l, lifted_r)


def test_pushout_along_mono_reads_back_as_pullback():
    f = embed(N1, E2, {"a": "u"})      # injective
    g = Morphism(N1, N1, {"a": "a"}, {})
    po = pushout(f, g)
    assert is_pullback_square(f, g, po.left_inj, po.right_inj)


def test_pushout_preserves_monos_on_fixtures():
    f = embed(N1, E2, {"a": "u"})
    squash = Morphism(D2, N1, {"u": "a", "v": "a"}, {})
    lifted = compose(f, squash)  # D2 -> E2, not injective
    po = pushout(embed(D2, E2, {"u": "u", "v": "v"}), lifted)
    assert is_monomorphism(po.right_inj)


def test_inclusion_helper_builds_subgraph_embedding():
    sub = make_graph([("u", "A")])
    emb = inclusion(sub, D2)
    assert is_monomorphism(emb) and emb.node_map == {"u": "u"}


def test_isomorphic_results_have_witnessing_morphism():
    lp_again = make_graph([("z", "A")], [("m", "z", "z", "x")])
    iso = find_isomorphism(LP, lp_again)
    assert iso is not None and iso.node_map == {"u": "z"}
