"""Rules, single rewrite steps, collapsed rules, coherence and
simultaneous application."""

from __future__ import annotations

import pytest
from helpers import (
    D2,
    E2,
    EMPTY,
    LP,
    N1,
    N1_W,
    add_loop_rule,
    delete_loop_rule,
    delete_node_rule,
    identity_rule,
    loop_graph,
    match_at,
)

from parcoh import (
    Graph,
    IncoherentError,
    Morphism,
    Node,
    SquareMismatchError,
    WeakSpan,
    assemble_direct_transformation,
    assoc_to_weak,
    associated_span,
    build_pct,
    coherence_witness,
    compose,
    derive,
    find_matches,
    graphs_isomorphic,
    hat_gamma,
    identity,
    inclusion,
    is_isomorphism,
    pushout,
    validate_rule,
    verify_coherence_witness,
    verify_direct_transformation,
    verify_pct,
)


# -- rules ------------------------------------------------------------------

def test_identity_rule_is_valid():
    assert validate_rule(identity_rule(N1)) is None


def test_rule_with_noninjective_leg_is_reported():
    squash = Morphism(D2, N1, {"u": "a", "v": "a"}, {})
    bad = WeakSpan("bad", N1, D2, D2, D2, squash, identity(D2), identity(D2))
    report = validate_rule(bad)
    assert report is not None and "'l'" in report


def test_delete_node_rule_is_valid():
    assert validate_rule(delete_node_rule()) is None


def test_rule_with_wrong_leg_endpoints_is_reported():
    stray = WeakSpan("stray", N1, N1, N1, N1,
                     identity(N1), identity(N1), Morphism(N1, D2, {"a": "u"}, {}))
    report = validate_rule(stray)
    assert report is not None and "'r'" in report


# -- matches ----------------------------------------------------------------

def test_empty_lhs_matches_exactly_once():
    rule = WeakSpan("spawn", EMPTY, EMPTY, EMPTY, EMPTY,
                    identity(EMPTY), identity(EMPTY), identity(EMPTY))
    for host in (EMPTY, N1, E2):
        assert len(find_matches(rule, host)) == 1


def test_single_node_lhs_has_two_matches_in_two_nodes():
    assert len(find_matches(delete_node_rule(), D2)) == 2


def test_edge_lhs_has_no_match_in_edgeless_graph():
    rule = identity_rule(E2)
    assert find_matches(rule, D2) == []


# -- single steps -----------------------------------------------------------

def test_identity_rule_leaves_host_isomorphic():
    rule = identity_rule(N1)
    step = derive(rule, D2, match_at(rule, D2, {"a": "u"}))
    assert graphs_isomorphic(step.H, D2)
    assert verify_direct_transformation(step) is None


def test_delete_node_step_removes_exactly_the_matched_node():
    rule = delete_node_rule()
    step = derive(rule, D2, match_at(rule, D2, {"a": "u"}))
    assert graphs_isomorphic(step.H, N1)
    assert verify_direct_transformation(step) is None


def test_add_loop_step_turns_node_into_looped_node():
    rule = add_loop_rule()
    step = derive(rule, N1, identity(N1))
    assert graphs_isomorphic(step.H, LP)
    assert verify_direct_transformation(step) is None


def test_derive_marks_step_as_full_double_gluing():
    rule = delete_node_rule()
    assert derive(rule, D2, match_at(rule, D2, {"a": "v"})).is_weak_dpo


def test_reassembling_a_derived_step_reproduces_it():
    rule = add_loop_rule()
    step = derive(rule, N1, identity(N1))
    again = assemble_direct_transformation(rule, N1, step.m, step.k, step.f)
    assert again == step
    assert again.is_weak_dpo


def test_assemble_with_padded_context_is_not_a_full_gluing():
    rule = identity_rule(N1)
    padded = Graph((Node("a", "A"), Node("spare", "A")))
    k = Morphism(N1, padded, {"a": "a"}, {})
    f = Morphism(padded, N1, {"a": "a", "spare": "a"}, {})
    step = assemble_direct_transformation(rule, N1, identity(N1), k, f)
    assert not step.is_weak_dpo
    assert verify_direct_transformation(step) is None


def test_assemble_rejects_noncommuting_square():
    rule = add_loop_rule()
    step = derive(rule, D2, match_at(rule, D2, {"a": "u"}))
    wrong_match = match_at(rule, D2, {"a": "v"})
    with pytest.raises(SquareMismatchError):
        assemble_direct_transformation(rule, D2, wrong_match, step.k, step.f)


# -- collapsed (associated) rules -------------------------------------------

def test_collapsing_a_plain_span_changes_nothing():
    rule = identity_rule(E2)
    asp = associated_span(rule)
    assert graphs_isomorphic(asp.Rp, rule.R)
    assert is_isomorphism(asp.ip)


def test_collapsing_rule_with_full_interface_keeps_replacement():
    asp = associated_span(add_loop_rule())
    assert graphs_isomorphic(asp.Rp, add_loop_rule().R)


def test_collapsing_weakly_preserved_context_copies_it():
    # interface empty, context one node, replacement one fresh node:
    # the collapsed right side holds both nodes
    rule = WeakSpan(
        "weak-copy", N1, N1, EMPTY, N1_W,
        identity(N1), Morphism(EMPTY, N1, {}, {}), Morphism(EMPTY, N1_W, {}, {}),
    )
    asp = associated_span(rule)
    assert len(asp.Rp.nodes) == 2
    assert graphs_isomorphic(asp.Rp, pushout(rule.i, rule.r).apex)


def test_rebuilt_step_over_collapsed_rule_keeps_all_shared_parts():
    rule = add_loop_rule()
    step = derive(rule, N1, identity(N1))
    hat = hat_gamma(step)
    assert (hat.G, hat.D, hat.H, hat.m, hat.k, hat.f, hat.g) == (
        step.G, step.D, step.H, step.m, step.k, step.f, step.g,
    )
    assert verify_direct_transformation(hat) is None


def test_rebuilt_step_read_back_recovers_the_original():
    rule = add_loop_rule()
    step = derive(rule, N1, identity(N1))
    back = assoc_to_weak(hat_gamma(step), rule)
    assert back == step


def test_read_back_of_delete_step_keeps_result():
    rule = delete_node_rule()
    step = derive(rule, D2, match_at(rule, D2, {"a": "u"}))
    back = assoc_to_weak(hat_gamma(step), rule)
    assert back.H == step.H
    assert verify_direct_transformation(back) is None


def test_rebuilt_plain_span_step_has_isomorphic_replacement_side():
    rule = identity_rule(N1)
    step = derive(rule, N1, identity(N1))
    hat = hat_gamma(step)
    assert graphs_isomorphic(hat.rule.R, rule.R)
    assert hat.H == step.H


# -- coherence --------------------------------------------------------------

def test_single_step_witness_uses_its_interface_embedding():
    rule = add_loop_rule()
    step = derive(rule, N1, identity(N1))
    w = coherence_witness([step])
    assert w.j[0][0] == step.interface_embedding
    assert verify_coherence_witness(w) is None


def test_two_loop_additions_at_same_node_are_coherent():
    a = derive(add_loop_rule("alpha"), N1, identity(N1))
    b = derive(add_loop_rule("beta"), N1, identity(N1))
    w = coherence_witness([a, b])
    assert verify_coherence_witness(w) is None


def test_deletion_against_dependence_is_incoherent():
    deleter = delete_node_rule()
    gamma1 = derive(deleter, D2, match_at(deleter, D2, {"a": "u"}))
    adder = add_loop_rule()
    gamma2 = derive(adder, D2, match_at(adder, D2, {"a": "u"}))
    with pytest.raises(IncoherentError) as err:
        coherence_witness([gamma2, gamma1])
    assert (err.value.first, err.value.second) == (0, 1)
    assert err.value.element == "a"


# -- simultaneous application -----------------------------------------------

def test_one_step_runs_simultaneously_to_the_same_result():
    rule = add_loop_rule()
    step = derive(rule, N1, identity(N1))
    pct = build_pct(coherence_witness([step]))
    assert graphs_isomorphic(pct.H, step.H)
    assert verify_pct(pct) is None


def test_two_loop_additions_merge_into_two_loops():
    a = derive(add_loop_rule("alpha"), N1, identity(N1))
    b = derive(add_loop_rule("beta"), N1, identity(N1))
    pct = build_pct(coherence_witness([a, b]))
    assert len(pct.H.nodes) == 1
    assert sorted(e.label for e in pct.H.edges) == ["alpha", "beta"]
    assert verify_pct(pct) is None


def test_double_deletion_of_one_loop_deletes_it_once():
    rule = delete_loop_rule()
    step = derive(rule, LP, identity(LP))
    w = coherence_witness([step, step])
    pct = build_pct(w)
    assert graphs_isomorphic(pct.H, N1)
    assert verify_pct(pct) is None


def test_simultaneous_runs_support_three_steps():
    steps = [
        derive(add_loop_rule(lab), N1, identity(N1)) for lab in ("p", "q", "r")
    ]
    pct = build_pct(coherence_witness(steps))
    assert sorted(e.label for e in pct.H.edges) == ["p", "q", "r"]
    assert verify_pct(pct) is None


def test_interfaces_place_into_the_shared_core():
    a = derive(delete_loop_rule(), LP, identity(LP))
    pct = build_pct(coherence_witness([a, a]))
    for c in range(2):
        for idx in range(2):
            assert compose(pct.e[idx], pct.d[c]) == pct.witness.j[c][idx]
