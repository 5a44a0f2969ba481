"""Rewrite rules and their application.

A rule here is a *weak span*: a left-hand side ``L``, a weakly preserved
context ``K`` embedded in it, a strictly preserved interface ``I`` inside
``K``, and a replacement ``R`` grown out of ``I``.  Applying a rule at a
match carves ``K``'s image out of the host and glues ``R`` onto what is
left.  Several applications that spare each other's interfaces can run
simultaneously: their contexts are intersected into a shared core, each
replacement is glued onto the core separately, and the glued results are
merged into a single output graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from . import category
from .category import (
    PushoutResult,
    cocone_factor,
    factor_through_limit,
    is_colimit_of,
    is_limit_of,
    is_pushout_square,
    pushout,
    wide_colimit,
    wide_limit,
)
from .errors import (
    IncoherentError,
    PreconditionError,
    ReconstructionError,
    SquareMismatchError,
)
from .graphs import (
    Graph,
    Morphism,
    compose,
    enumerate_morphisms,
    factor_through_mono,
    first_untraceable,
    identity,
    is_monomorphism,
)


@dataclass(frozen=True)
class WeakSpan:
    """A rule ``L <- K <- I -> R`` with all three legs injective."""

    name: str
    L: Graph
    K: Graph
    I: Graph
    R: Graph
    l: Morphism
    i: Morphism
    r: Morphism

    @property
    def is_plain_span(self) -> bool:
        """True when the interface is all of ``K`` (a classical rule)."""
        return self.I == self.K and self.i == identity(self.K)


def validate_rule(rule: WeakSpan) -> str | None:
    """Return None for a well-formed rule, else a report naming the first
    broken leg."""
    legs = (("l", rule.l, rule.K, rule.L), ("i", rule.i, rule.I, rule.K),
            ("r", rule.r, rule.I, rule.R))
    for name, leg, dom, cod in legs:
        if leg.dom != dom:
            return f"leg {name!r} has the wrong domain"
        if leg.cod != cod:
            return f"leg {name!r} has the wrong codomain"
        if not is_monomorphism(leg):
            return f"leg {name!r} is not injective"
    return None


def plain_span(name: str, L: Graph, K: Graph, R: Graph, l: Morphism, r: Morphism) -> WeakSpan:
    """A classical rule, i.e. a weak span whose interface is all of ``K``."""
    return WeakSpan(name, L, K, K, R, l, identity(K), r)


@dataclass(frozen=True)
class DirectTransformation:
    """One rewrite step: host ``G``, context ``D``, result ``H``.

    The context square ``f . k = m . l`` always commutes; the replacement
    side ``(g, n, H)`` is always a genuine gluing of ``R`` onto ``D`` along
    the interface.  ``is_weak_dpo`` records whether the context square is
    itself a gluing (so the step deletes exactly the matched non-context
    part, nothing more)."""

    rule: WeakSpan
    G: Graph
    D: Graph
    H: Graph
    m: Morphism
    k: Morphism
    f: Morphism
    g: Morphism
    n: Morphism
    is_weak_dpo: bool

    @cached_property
    def interface_embedding(self) -> Morphism:
        """The interface's placement in the context: ``k . i``."""
        return compose(self.k, self.rule.i)


def find_matches(rule: WeakSpan, host: Graph, mono_only: bool = True) -> list[Morphism]:
    """All matches of the rule's left-hand side in the host, canonically
    ordered.  Injective matches only unless ``mono_only`` is False."""
    return enumerate_morphisms(rule.L, host, mono_only=mono_only)


def derive(rule: WeakSpan, host: Graph, m: Morphism) -> DirectTransformation:
    """Apply one rewrite step at a match.

    Carves the non-context part out of the host (raising ``GluingError``
    when that is impossible), then glues the replacement onto the remainder
    along the interface."""
    problem = validate_rule(rule)
    if problem is not None:
        raise PreconditionError(f"invalid rule {rule.name!r}: {problem}")
    if m.dom != rule.L or m.cod != host:
        raise PreconditionError("match must map the rule's left-hand side into the host")
    k, f = category.pushout_complement(rule.l, m)
    po = pushout(rule.r, compose(k, rule.i))
    return DirectTransformation(
        rule=rule, G=host, D=k.cod, H=po.apex,
        m=m, k=k, f=f, g=po.right_inj, n=po.left_inj,
        is_weak_dpo=True,
    )


def assemble_direct_transformation(
    rule: WeakSpan, host: Graph, m: Morphism, k: Morphism, f: Morphism
) -> DirectTransformation:
    """Build a rewrite step from a hand-picked context square.

    Only the replacement side is constructed; the context square is merely
    required to commute, and ``is_weak_dpo`` records whether it happens to be
    a genuine gluing."""
    if f.cod != host or m.cod != host:
        raise PreconditionError("context and match must land in the host")
    if compose(f, k) != compose(m, rule.l):
        raise SquareMismatchError("context square does not commute: f.k != m.l")
    po = pushout(rule.r, compose(k, rule.i))
    return DirectTransformation(
        rule=rule, G=host, D=k.cod, H=po.apex,
        m=m, k=k, f=f, g=po.right_inj, n=po.left_inj,
        is_weak_dpo=is_pushout_square(rule.l, k, m, f),
    )


def verify_direct_transformation(t: DirectTransformation) -> str | None:
    """Re-check every invariant of a rewrite step from scratch.

    Returns None when the step is sound, else a description of the first
    failure.  Used by the test harness and by reconstruction checks."""
    problem = validate_rule(t.rule)
    if problem is not None:
        return f"rule: {problem}"
    endpoints = (
        (t.m, t.rule.L, t.G, "match"),
        (t.k, t.rule.K, t.D, "context map"),
        (t.f, t.D, t.G, "context embedding"),
        (t.g, t.D, t.H, "context-to-result map"),
        (t.n, t.rule.R, t.H, "replacement placement"),
    )
    for mor, dom, cod, what in endpoints:
        if mor.dom != dom or mor.cod != cod:
            return f"{what} has wrong endpoints"
    if compose(t.f, t.k) != compose(t.m, t.rule.l):
        return "context square does not commute"
    if not is_pushout_square(t.rule.r, t.interface_embedding, t.n, t.g):
        return "replacement side is not a gluing"
    if t.is_weak_dpo and not is_pushout_square(t.rule.l, t.k, t.m, t.f):
        return "context square claims to be a gluing but is not"
    return None


# --------------------------------------------------------------------------
# associated span
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AssociatedSpan:
    """The classical rule obtained by gluing ``R`` onto ``K`` along the
    interface: ``L <- K -> Rp`` with ``ip`` placing the original ``R``
    inside the combined right-hand side ``Rp``."""

    L: Graph
    K: Graph
    Rp: Graph
    l: Morphism
    rp: Morphism
    ip: Morphism

    def as_weak_span(self, name: str) -> WeakSpan:
        return plain_span(name, self.L, self.K, self.Rp, self.l, self.rp)


def associated_span(rule: WeakSpan) -> AssociatedSpan:
    """Collapse a weak span to a classical span with the same effect on
    every host (weakly preserved items become preserved-and-copied)."""
    problem = validate_rule(rule)
    if problem is not None:
        raise PreconditionError(f"invalid rule {rule.name!r}: {problem}")
    po = pushout(rule.i, rule.r)
    return AssociatedSpan(
        L=rule.L, K=rule.K, Rp=po.apex,
        l=rule.l, rp=po.left_inj, ip=po.right_inj,
    )


def _assoc_rule_name(rule: WeakSpan) -> str:
    return f"{rule.name}+collapsed"


def hat_gamma(t: DirectTransformation) -> DirectTransformation:
    """Rebuild a rewrite step over the rule's associated classical span.

    Host, context, result and all shared maps stay identical; only the
    replacement placement is re-derived through the combined right-hand
    side."""
    if not t.is_weak_dpo:
        raise PreconditionError("only full double-gluing steps can be rebuilt")
    asp = associated_span(t.rule)
    n_prime = cocone_factor([asp.rp, asp.ip], [compose(t.g, t.k), t.n])
    if n_prime is None:
        raise ReconstructionError("combined replacement does not mediate")
    return DirectTransformation(
        rule=asp.as_weak_span(_assoc_rule_name(t.rule)),
        G=t.G, D=t.D, H=t.H,
        m=t.m, k=t.k, f=t.f, g=t.g, n=n_prime,
        is_weak_dpo=True,
    )


def assoc_to_weak(t: DirectTransformation, rule: WeakSpan) -> DirectTransformation:
    """Read a step over the associated classical span back as a step over
    the original weak span (same host, context and result)."""
    if not t.is_weak_dpo:
        raise PreconditionError("only full double-gluing steps can be read back")
    asp = associated_span(rule)
    if t.rule != asp.as_weak_span(_assoc_rule_name(rule)):
        raise PreconditionError("step is not over this rule's associated span")
    return DirectTransformation(
        rule=rule, G=t.G, D=t.D, H=t.H,
        m=t.m, k=t.k, f=t.f, g=t.g, n=compose(t.n, asp.ip),
        is_weak_dpo=True,
    )


# --------------------------------------------------------------------------
# parallel coherence and simultaneous application
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CoherenceWitness:
    """A family of steps on one host together with, for every ordered pair,
    the placement of one step's interface inside the other step's context.

    ``j[a][b]`` maps the interface of step ``a`` into the context of step
    ``b``; the diagonal entries are the steps' own interface embeddings."""

    gammas: tuple[DirectTransformation, ...]
    j: tuple[tuple[Morphism, ...], ...]


def verify_coherence_witness(w: CoherenceWitness) -> str | None:
    """Re-check that a witness commutes; None when sound."""
    p = len(w.gammas)
    host = w.gammas[0].G
    for a, t in enumerate(w.gammas):
        if t.G != host:
            return f"step {a} has a different host"
    for a in range(p):
        anchor = compose(w.gammas[a].f, w.gammas[a].interface_embedding)
        if w.j[a][a] != w.gammas[a].interface_embedding:
            return f"diagonal placement {a} is not the interface embedding"
        for b in range(p):
            if compose(w.gammas[b].f, w.j[a][b]) != anchor:
                return f"placement of interface {a} in context {b} does not commute"
    return None


def coherence_witness(gammas: Sequence[DirectTransformation]) -> CoherenceWitness:
    """Check that a family of steps on one host can run simultaneously.

    For every pair, each interface item is traced through the host into the
    other step's context; the trace exists exactly when the other step does
    not destroy the item.  Raises ``IncoherentError`` naming the first pair
    and item for which it fails."""
    if not gammas:
        raise PreconditionError("need at least one step")
    host = gammas[0].G
    for idx, t in enumerate(gammas):
        if t.G != host:
            raise PreconditionError(f"step {idx} lives on a different host")
        if not is_monomorphism(t.f):
            raise PreconditionError(f"step {idx}'s context does not embed injectively")
    rows: list[tuple[Morphism, ...]] = []
    for a, ta in enumerate(gammas):
        anchor = compose(ta.f, ta.interface_embedding)
        row: list[Morphism] = []
        for b, tb in enumerate(gammas):
            if a == b:
                row.append(ta.interface_embedding)
                continue
            traced = factor_through_mono(anchor, tb.f)
            if traced is None:
                raise IncoherentError(a, b, first_untraceable(anchor, tb.f))
            row.append(traced)
        rows.append(tuple(row))
    return CoherenceWitness(tuple(gammas), tuple(rows))


@dataclass(frozen=True)
class PCTDiagram:
    """A simultaneous application of coherent steps.

    ``C`` is the shared core (the limit of all context embeddings), ``d[c]``
    places each interface in the core, each ``(s[a], o[a], F[a])`` glues one
    replacement onto the core, and ``H`` merges the glued results (the
    colimit of the ``s`` legs)."""

    witness: CoherenceWitness
    C: Graph
    e: tuple[Morphism, ...]
    d: tuple[Morphism, ...]
    s: tuple[Morphism, ...]
    o: tuple[Morphism, ...]
    F: tuple[Graph, ...]
    h: tuple[Morphism, ...]
    H: Graph

    @property
    def G(self) -> Graph:
        return self.witness.gammas[0].G

    @property
    def width(self) -> int:
        return len(self.witness.gammas)


def build_pct(w: CoherenceWitness) -> PCTDiagram:
    """Run all steps of a coherence witness simultaneously.

    Intersects the contexts into a shared core, places every interface in
    the core, glues each replacement on separately and merges the results."""
    problem = verify_coherence_witness(w)
    if problem is not None:
        raise PreconditionError(f"witness does not commute: {problem}")
    gammas = w.gammas
    lim = wide_limit([t.f for t in gammas])
    d: list[Morphism] = []
    for c in range(len(gammas)):
        mediator = factor_through_limit(lim, list(w.j[c]))
        if mediator is None:
            raise ReconstructionError(
                f"interface {c} does not factor through the shared core"
            )
        d.append(mediator)
    glued: list[PushoutResult] = [
        pushout(t.rule.r, d_c) for t, d_c in zip(gammas, d)
    ]
    colim = wide_colimit([po.right_inj for po in glued])
    return PCTDiagram(
        witness=w,
        C=lim.apex,
        e=lim.projections,
        d=tuple(d),
        s=tuple(po.right_inj for po in glued),
        o=tuple(po.left_inj for po in glued),
        F=tuple(po.apex for po in glued),
        h=colim.injections,
        H=colim.apex,
    )


def verify_pct(p: PCTDiagram) -> str | None:
    """Re-check every invariant of a simultaneous application from scratch;
    None when sound."""
    problem = verify_coherence_witness(p.witness)
    if problem is not None:
        return f"witness: {problem}"
    gammas = p.witness.gammas
    if not is_limit_of([t.f for t in gammas], p.e):
        return "shared core is not the limit of the context embeddings"
    for c in range(p.width):
        for a in range(p.width):
            if compose(p.e[a], p.d[c]) != p.witness.j[c][a]:
                return f"core placement of interface {c} disagrees with context {a}"
    for a, t in enumerate(gammas):
        if not is_pushout_square(t.rule.r, p.d[a], p.o[a], p.s[a]):
            return f"replacement {a} is not glued onto the core"
    if not is_colimit_of(list(p.s), list(p.h)):
        return "result does not merge the glued replacements"
    return None
