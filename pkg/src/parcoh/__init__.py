"""Graph rewriting with weak spans and parallel coherent transformations."""

from .errors import (
    ArityMismatchError,
    CodomainMismatchError,
    DocumentError,
    DocumentValidationError,
    DomainMismatchError,
    EmptyFamilyError,
    GluingError,
    IncoherentError,
    NotIndependentError,
    ParseError,
    PreconditionError,
    ReconstructionError,
    RewriteError,
    SquareMismatchError,
)
from .graphs import (
    EMPTY_GRAPH,
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
    inverse,
    is_isomorphism,
    is_monomorphism,
    make_graph,
    validate_graph,
)
from .category import (
    IteratedLimitStep,
    PullbackResult,
    PushoutResult,
    WideColimit,
    WideLimit,
    cocone_factor,
    cone_factor,
    factor_through_colimit,
    factor_through_limit,
    is_colimit_of,
    is_limit_of,
    is_pullback_square,
    is_pushout_square,
    pullback,
    pushout,
    pushout_complement,
    wide_colimit,
    wide_limit,
)
from .rewriting import (
    AssociatedSpan,
    CoherenceWitness,
    DirectTransformation,
    PCTDiagram,
    WeakSpan,
    assemble_direct_transformation,
    assoc_to_weak,
    associated_span,
    build_pct,
    coherence_witness,
    derive,
    find_matches,
    hat_gamma,
    plain_span,
    validate_rule,
    verify_coherence_witness,
    verify_direct_transformation,
    verify_pct,
)
from .parallelism import (
    AnalysisIntermediates,
    DerivedRule,
    PairPCT,
    ParallelIndependenceWitness,
    SequentialIndependenceWitness,
    TransportedPCT,
    analyze,
    apply_derived_rule_to_source,
    check_parallel_independence,
    check_sequential_independence,
    derived_rule,
    pair_pct,
    roundtrip_check,
    synthesize,
    transformations_isomorphic,
    verify_derived_application,
)
from .harness import (
    GenParams,
    SuiteReport,
    gen_graph,
    gen_rule,
    oracle_pullback,
    oracle_pushout,
    oracle_wide_colimit,
    oracle_wide_limit,
    run_property_suite,
)
from .documents import (
    Document,
    Scenario,
    ScenarioStep,
    export_dot,
    graph_document,
    morphism_document,
    parse_document,
    rule_document,
    scenario_document,
    serialize_document,
)
from .cli import cli_dispatch

__version__ = "0.1.0"
