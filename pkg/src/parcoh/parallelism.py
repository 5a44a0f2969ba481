"""Independence of rewrite steps, and conversions between parallel and
sequential execution.

Two steps on one host are *parallel independent* when each left-hand side
survives inside the other step's context; a step followed by another is
*sequential independent* when the first step's combined replacement survives
the second step's context and the second left-hand side already existed
before the first step ran.  ``analyze`` turns a simultaneous application of
an independent pair into an equivalent two-step sequence; ``synthesize``
turns an independent sequence back into a simultaneous application.  The two
conversions are mutually inverse up to isomorphism, which
``roundtrip_check`` verifies instance by instance.

A simultaneous application also yields a *derived rule*: a classical span
from host to result whose every application to any other host can be
replayed, square by square, as a transported simultaneous application;
``verify_derived_application`` performs that replay and re-checks it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import (
    cocone_factor,
    cone_factor,
    is_colimit_of,
    is_limit_of,
    is_pushout_square,
    pullback,
    pushout,
)
from .errors import (
    NotIndependentError,
    PreconditionError,
    ReconstructionError,
)
from .graphs import (
    Graph,
    Morphism,
    compose,
    factor_through_mono,
    first_untraceable,
    identity,
    is_isomorphism,
    is_monomorphism,
)
from .rewriting import (
    CoherenceWitness,
    DirectTransformation,
    PCTDiagram,
    WeakSpan,
    associated_span,
    build_pct,
    derive,
    hat_gamma,
    plain_span,
    verify_direct_transformation,
    verify_pct,
)


@dataclass(frozen=True)
class ParallelIndependenceWitness:
    """Embeddings of each left-hand side into the other step's context:
    ``j1`` places the first rule's lhs in the second context, ``j2`` the
    second rule's lhs in the first context."""

    j1: Morphism
    j2: Morphism


@dataclass(frozen=True)
class SequentialIndependenceWitness:
    """``j1p`` places the first step's combined replacement in the second
    step's context; ``j2p`` places the second rule's lhs in the first
    step's context."""

    j1p: Morphism
    j2p: Morphism


@dataclass(frozen=True)
class PairPCT:
    """A simultaneous application of two parallel independent steps,
    remembering the independence witness that induced it."""

    pct: PCTDiagram
    indep: ParallelIndependenceWitness

    @property
    def gamma1(self) -> DirectTransformation:
        return self.pct.witness.gammas[0]

    @property
    def gamma2(self) -> DirectTransformation:
        return self.pct.witness.gammas[1]


@dataclass(frozen=True)
class AnalysisIntermediates:
    """The scaffolding built while sequentializing a simultaneous pair:
    core placements of both contexts (``d1p``, ``d2p``), the combined
    replacement's placement in the first glued result (``j1p``), the first
    glued result's embedding into the intermediate host (``f2p``), and the
    second step's relocated match, context map and placement."""

    d1p: Morphism
    d2p: Morphism
    j1p: Morphism
    f2p: Morphism
    m2p: Morphism
    k2p: Morphism
    n2p: Morphism


def _require_weak_dpo(t: DirectTransformation, what: str):
    if not t.is_weak_dpo:
        raise PreconditionError(f"{what} must be a full double-gluing step")


def check_parallel_independence(
    gamma1: DirectTransformation, gamma2: DirectTransformation
) -> ParallelIndependenceWitness:
    """Trace each match through the other step's context embedding.

    Both embeddings are injective, so the witness is unique when it exists;
    raises ``NotIndependentError`` naming the first item that one step
    destroys while the other step's match still needs it."""
    _require_weak_dpo(gamma1, "first step")
    _require_weak_dpo(gamma2, "second step")
    if gamma1.G != gamma2.G:
        raise PreconditionError("steps must share a host")
    j1 = factor_through_mono(gamma1.m, gamma2.f)
    if j1 is None:
        raise NotIndependentError(
            first_untraceable(gamma1.m, gamma2.f),
            "first match is destroyed by the second step",
        )
    j2 = factor_through_mono(gamma2.m, gamma1.f)
    if j2 is None:
        raise NotIndependentError(
            first_untraceable(gamma2.m, gamma1.f),
            "second match is destroyed by the first step",
        )
    return ParallelIndependenceWitness(j1, j2)


def check_sequential_independence(
    gamma1: DirectTransformation, gamma2p: DirectTransformation
) -> SequentialIndependenceWitness:
    """Witness that a second step on the first step's result is independent
    of the first: the first step's combined replacement must survive the
    second step's deletion, and the second match must avoid everything the
    first step created."""
    _require_weak_dpo(gamma1, "first step")
    _require_weak_dpo(gamma2p, "second step")
    if gamma2p.G != gamma1.H:
        raise PreconditionError("second step must run on the first step's result")
    hat1 = hat_gamma(gamma1)
    j1p = factor_through_mono(hat1.n, gamma2p.f)
    if j1p is None:
        raise NotIndependentError(
            first_untraceable(hat1.n, gamma2p.f),
            "first step's replacement is destroyed by the second step",
        )
    j2p = factor_through_mono(gamma2p.m, gamma1.g)
    if j2p is None:
        raise NotIndependentError(
            first_untraceable(gamma2p.m, gamma1.g),
            "second match uses items created by the first step",
        )
    return SequentialIndependenceWitness(j1p, j2p)


def pair_pct(
    gamma1: DirectTransformation,
    gamma2: DirectTransformation,
    w: ParallelIndependenceWitness,
) -> PairPCT:
    """Run a parallel independent pair simultaneously.

    Independence induces the interface placements directly (restrict each
    lhs embedding to the interface), so no tracing is repeated here."""
    r1, r2 = gamma1.rule, gamma2.rule
    if compose(gamma2.f, w.j1) != gamma1.m or compose(gamma1.f, w.j2) != gamma2.m:
        raise PreconditionError("witness does not commute with the matches")
    j12 = compose(w.j1, compose(r1.l, r1.i))
    j21 = compose(w.j2, compose(r2.l, r2.i))
    witness = CoherenceWitness(
        (gamma1, gamma2),
        (
            (gamma1.interface_embedding, j12),
            (j21, gamma2.interface_embedding),
        ),
    )
    return PairPCT(build_pct(witness), w)


def analyze(pp: PairPCT) -> tuple[
    DirectTransformation, SequentialIndependenceWitness, AnalysisIntermediates
]:
    """Sequentialize a simultaneous independent pair.

    Returns a second step relocated onto the first step's result, with the
    same final graph as the simultaneous application, plus the sequential
    independence witness and the intermediate morphisms."""
    gamma1, gamma2 = pp.gamma1, pp.gamma2
    j1, j2 = pp.indep.j1, pp.indep.j2
    pct = pp.pct
    e1, e2 = pct.e
    s1 = pct.s[0]
    asp1 = associated_span(gamma1.rule)
    hat1 = hat_gamma(gamma1)

    # Both contexts factor through the shared core: the first by its own
    # context map, the second through the relocated lhs.
    d1p = cone_factor(list(pct.e), [gamma1.k, compose(j1, gamma1.rule.l)])
    d2p = cone_factor(list(pct.e), [compose(j2, gamma2.rule.l), gamma2.k])
    if d1p is None or d2p is None:
        raise ReconstructionError("context does not factor through the shared core")
    if compose(d1p, gamma1.rule.i) != pct.d[0] or compose(d2p, gamma2.rule.i) != pct.d[1]:
        raise ReconstructionError("core placements disagree with the interfaces")

    # The combined replacement of the first rule lands in its glued result.
    j1p = cocone_factor([asp1.rp, asp1.ip], [compose(s1, d1p), pct.o[0]])
    if j1p is None:
        raise ReconstructionError("combined replacement does not land in the glued result")

    # The first glued result embeds into the intermediate host.
    f2p = cocone_factor([s1, j1p], [compose(gamma1.g, e1), hat1.n])
    if f2p is None:
        raise ReconstructionError("glued result does not embed into the intermediate host")

    m2p = compose(gamma1.g, j2)
    k2p = compose(s1, d2p)
    n2p = compose(pct.h[1], pct.o[1])
    gamma2p = DirectTransformation(
        rule=gamma2.rule, G=gamma1.H, D=pct.F[0], H=pct.H,
        m=m2p, k=k2p, f=f2p, g=pct.h[0], n=n2p,
        is_weak_dpo=True,
    )
    problem = verify_direct_transformation(gamma2p)
    if problem is not None:
        raise ReconstructionError(f"sequentialized step is unsound: {problem}")
    sw = SequentialIndependenceWitness(j1p=j1p, j2p=j2)
    inter = AnalysisIntermediates(d1p, d2p, j1p, f2p, m2p, k2p, n2p)
    return gamma2p, sw, inter


def synthesize(
    gamma1: DirectTransformation,
    gamma2p: DirectTransformation,
    sw: SequentialIndependenceWitness,
) -> tuple[DirectTransformation, PairPCT]:
    """Parallelize an independent two-step sequence.

    Rebuilds the second step directly on the original host and runs it
    simultaneously with the first; the simultaneous result is isomorphic to
    the sequence's final graph."""
    _require_weak_dpo(gamma1, "first step")
    _require_weak_dpo(gamma2p, "second step")
    if gamma2p.G != gamma1.H:
        raise PreconditionError("second step must run on the first step's result")
    asp1 = associated_span(gamma1.rule)
    hat1 = hat_gamma(gamma1)
    if compose(gamma2p.f, sw.j1p) != hat1.n or compose(gamma1.g, sw.j2p) != gamma2p.m:
        raise PreconditionError("witness does not commute with the sequence")

    # Shared core: everything that survives both the first step (seen in its
    # context) and the second step (seen in its context on the intermediate).
    pb = pullback(gamma1.g, gamma2p.f)
    e1, s1 = pb.proj_left, pb.proj_right

    d1p = cone_factor([e1, s1], [gamma1.k, compose(sw.j1p, asp1.rp)])
    d2p = cone_factor([e1, s1], [compose(sw.j2p, gamma2p.rule.l), gamma2p.k])
    if d1p is None or d2p is None:
        raise ReconstructionError("context does not factor through the shared core")

    # Rebuild the second step's context on the original host by gluing the
    # first lhs back onto the core.
    po = pushout(gamma1.rule.l, d1p)
    j1, e2 = po.left_inj, po.right_inj
    f2 = cocone_factor([j1, e2], [gamma1.m, compose(gamma1.f, e1)])
    if f2 is None:
        raise ReconstructionError("rebuilt context does not embed into the host")

    k2 = compose(e2, d2p)
    m2 = compose(gamma1.f, sw.j2p)
    rule2 = gamma2p.rule
    right = pushout(rule2.r, compose(k2, rule2.i))
    gamma2 = DirectTransformation(
        rule=rule2, G=gamma1.G, D=po.apex, H=right.apex,
        m=m2, k=k2, f=f2, g=right.right_inj, n=right.left_inj,
        is_weak_dpo=True,
    )
    problem = verify_direct_transformation(gamma2)
    if problem is not None:
        raise ReconstructionError(f"parallelized step is unsound: {problem}")
    w = ParallelIndependenceWitness(j1=j1, j2=sw.j2p)
    return gamma2, pair_pct(gamma1, gamma2, w)


def transformations_isomorphic(
    a: DirectTransformation, b: DirectTransformation
) -> bool:
    """Whether two steps over the same rule and host differ only by an
    isomorphism of their context and result (host and match fixed)."""
    if a.rule != b.rule or a.G != b.G or a.m != b.m:
        return False
    if len(a.D.nodes) != len(b.D.nodes) or len(a.D.edges) != len(b.D.edges):
        return False
    psi_d = factor_through_mono(a.f, b.f)
    if psi_d is None or not is_monomorphism(psi_d):
        return False
    if compose(psi_d, a.k) != b.k:
        return False
    # Result isos are forced: the context part follows psi_d, the
    # replacement part follows the placements.
    node_map: dict[str, str] = {}
    edge_map: dict[str, str] = {}
    for x, img in a.g.node_map.items():
        node_map[img] = b.g.node_map[psi_d.node_map[x]]
    for x, img in a.g.edge_map.items():
        edge_map[img] = b.g.edge_map[psi_d.edge_map[x]]
    for x, img in a.n.node_map.items():
        other = b.n.node_map[x]
        if node_map.setdefault(img, other) != other:
            return False
    for x, img in a.n.edge_map.items():
        other = b.n.edge_map[x]
        if edge_map.setdefault(img, other) != other:
            return False
    if len(node_map) != len(a.H.nodes) or len(edge_map) != len(a.H.edges):
        return False
    try:
        psi_h = Morphism(a.H, b.H, node_map, edge_map)
    except ValueError:
        return False
    return is_isomorphism(psi_h)


def roundtrip_check(
    gamma1: DirectTransformation,
    other: DirectTransformation,
    direction: str | None = None,
) -> bool:
    """Check that sequentializing then parallelizing (or the reverse)
    reproduces the given pair up to isomorphism.

    ``direction`` is ``"parallel"`` when ``other`` shares the host of
    ``gamma1`` and ``"sequential"`` when it runs on ``gamma1``'s result;
    inferred from the hosts when omitted."""
    if direction is None:
        direction = "parallel" if other.G == gamma1.G else "sequential"
    if direction == "parallel":
        w = check_parallel_independence(gamma1, other)
        pp = pair_pct(gamma1, other, w)
        gamma2p, sw, _ = analyze(pp)
        gamma2_back, _ = synthesize(gamma1, gamma2p, sw)
        return transformations_isomorphic(gamma2_back, other)
    if direction == "sequential":
        sw = check_sequential_independence(gamma1, other)
        _, pp = synthesize(gamma1, other, sw)
        gamma2p_back, _, _ = analyze(pp)
        return transformations_isomorphic(gamma2p_back, other)
    raise PreconditionError(f"unknown direction {direction!r}")


# --------------------------------------------------------------------------
# derived rules
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DerivedRule:
    """The classical span from host to result extracted from a simultaneous
    application: the shared core embeds into both."""

    rule: WeakSpan
    source: PCTDiagram


@dataclass(frozen=True)
class TransportedPCT:
    """A simultaneous application replayed on another host.

    ``g`` and ``c`` relocate the original host and core; per step ``a``,
    ``t[a]``/``tp[a]`` relocate its context and glued result, ``fp[a]``,
    ``ep[a]``, ``sp[a]``, ``hp[a]`` are the relocated embeddings, and
    ``np[a]``/``gp[a]`` rebuild its private result.  ``pct`` is the full
    relocated diagram; its merged result is the application's output."""

    g: Morphism
    c: Morphism
    t: tuple[Morphism, ...]
    tp: tuple[Morphism, ...]
    fp: tuple[Morphism, ...]
    ep: tuple[Morphism, ...]
    sp: tuple[Morphism, ...]
    hp: tuple[Morphism, ...]
    np: tuple[Morphism, ...]
    gp: tuple[Morphism, ...]
    dp: tuple[Morphism, ...]
    steps: tuple[DirectTransformation, ...]
    pct: PCTDiagram

    @property
    def result(self) -> Graph:
        return self.pct.H


def derived_rule(pct: PCTDiagram) -> DerivedRule:
    """Extract the host-to-result span of a simultaneous application.

    Both legs are injective because every intermediate embedding is, so the
    span is itself an applicable classical rule."""
    left = compose(pct.witness.gammas[0].f, pct.e[0])
    right = compose(pct.h[0], pct.s[0])
    if not (is_monomorphism(left) and is_monomorphism(right)):
        raise ReconstructionError("derived span legs are not injective")
    name = "+".join(t.rule.name for t in pct.witness.gammas)
    rule = plain_span(f"derived({name})", pct.G, pct.C, pct.H, left, right)
    return DerivedRule(rule, pct)


def apply_derived_rule_to_source(dr: DerivedRule) -> DirectTransformation:
    """Apply a derived rule back to its own host at the identity match."""
    return derive(dr.rule, dr.source.G, identity(dr.source.G))


def verify_derived_application(
    dr: DerivedRule, applied: DirectTransformation
) -> TransportedPCT:
    """Replay a derived-rule application as a transported simultaneous
    application and re-verify every square, the relocated core and the
    relocated merge.  Any failed check raises ``ReconstructionError`` (an
    engine bug, not bad input)."""
    if applied.rule != dr.rule:
        raise PreconditionError("application is not over this derived rule")
    _require_weak_dpo(applied, "application")
    pct = dr.source
    gammas = pct.witness.gammas
    width = pct.width
    g_mor, c = applied.m, applied.k
    f_ctx, g_ctx, h_res = applied.f, applied.g, applied.n

    t: list[Morphism] = []
    ep: list[Morphism] = []
    fp: list[Morphism] = []
    for a in range(width):
        po = pushout(pct.e[a], c)
        t.append(po.left_inj)
        ep.append(po.right_inj)
        mediator = cocone_factor(
            [po.left_inj, po.right_inj], [compose(g_mor, gammas[a].f), f_ctx]
        )
        if mediator is None:
            raise ReconstructionError(f"relocated context {a} does not embed")
        fp.append(mediator)
        if not is_pushout_square(gammas[a].f, t[a], g_mor, fp[a]):
            raise ReconstructionError(f"relocated context square {a} is not a gluing")
    if not is_limit_of(fp, ep):
        raise ReconstructionError("relocated core is not the limit of the contexts")

    tp: list[Morphism] = []
    sp: list[Morphism] = []
    hp: list[Morphism] = []
    for a in range(width):
        po = pushout(pct.s[a], c)
        tp.append(po.left_inj)
        sp.append(po.right_inj)
        mediator = cocone_factor(
            [po.left_inj, po.right_inj], [compose(h_res, pct.h[a]), g_ctx]
        )
        if mediator is None:
            raise ReconstructionError(f"relocated glued result {a} does not embed")
        hp.append(mediator)
        if not is_pushout_square(pct.h[a], tp[a], h_res, hp[a]):
            raise ReconstructionError(f"relocated merge square {a} is not a gluing")
    if not is_colimit_of(sp, hp):
        raise ReconstructionError("relocated result does not merge the glued parts")

    np_: list[Morphism] = []
    gp: list[Morphism] = []
    steps: list[DirectTransformation] = []
    for a in range(width):
        po = pushout(gammas[a].g, t[a])
        np_.append(po.left_inj)
        gp.append(po.right_inj)
        step = DirectTransformation(
            rule=gammas[a].rule, G=applied.G, D=t[a].cod, H=po.apex,
            m=compose(g_mor, gammas[a].m), k=compose(t[a], gammas[a].k),
            f=fp[a], g=gp[a], n=compose(np_[a], gammas[a].n),
            is_weak_dpo=True,
        )
        problem = verify_direct_transformation(step)
        if problem is not None:
            raise ReconstructionError(f"transported step {a} is unsound: {problem}")
        steps.append(step)

    j_rows = tuple(
        tuple(compose(t[b], pct.witness.j[a][b]) for b in range(width))
        for a in range(width)
    )
    witness = CoherenceWitness(tuple(steps), j_rows)
    dp = tuple(compose(c, pct.d[a]) for a in range(width))
    for a in range(width):
        for b in range(width):
            if compose(ep[b], dp[a]) != j_rows[a][b]:
                raise ReconstructionError("relocated interface placement disagrees")
        if not is_pushout_square(
            gammas[a].rule.r, dp[a], compose(tp[a], pct.o[a]), sp[a]
        ):
            raise ReconstructionError(f"relocated replacement {a} is not glued on")

    transported = PCTDiagram(
        witness=witness,
        C=c.cod,
        e=tuple(ep),
        d=dp,
        s=tuple(sp),
        o=tuple(compose(tp[a], pct.o[a]) for a in range(width)),
        F=tuple(s.cod for s in sp),
        h=tuple(hp),
        H=applied.H,
    )
    problem = verify_pct(transported)
    if problem is not None:
        raise ReconstructionError(f"transported application is unsound: {problem}")
    return TransportedPCT(
        g=g_mor, c=c,
        t=tuple(t), tp=tuple(tp), fp=tuple(fp), ep=tuple(ep),
        sp=tuple(sp), hp=tuple(hp), np=tuple(np_), gp=tuple(gp),
        dp=dp, steps=tuple(steps), pct=transported,
    )
