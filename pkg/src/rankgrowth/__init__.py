"""Growth polynomials of finitary-matroid ranks under commuting operators."""

from .errors import (
    ContractError,
    HypothesisError,
    InputError,
    InvalidMatroidError,
    OperatorError,
    OutOfBoxError,
    RankGrowthError,
)
from .matroid import (
    BasisBuilder,
    LocalizedOracle,
    RankOracle,
    check_rank_axioms,
    extend_basis,
    localize,
    rank,
    relative_rank,
)
from .operators import (
    OperatorSystem,
    OrbitCache,
    Partition,
    QUASI_TRIANGULAR,
    TRIANGULAR,
    apply_word,
    augment,
    check_system,
    cumulative_orbit,
    graded_orbit,
    lex_compare,
    part_degree,
    total_degree,
)
from .engine import (
    BOX_TRUNCATED,
    CERTIFIED,
    ClosureDecision,
    DecreasingTable,
    GeneratingNumerator,
    GrowthPolynomial,
    PipelineResult,
    StabilizationConfig,
    StaircaseCertificate,
    VerifyReport,
    WINDOW_CERTIFIED,
    analyze_cumulative,
    analyze_graded,
    context_dimension_polynomial,
    cumulative_polynomial,
    default_box,
    detect_stabilization,
    dimension_polynomial,
    dominant_terms,
    eval_f,
    interpolate,
    numerator_from_table,
    phi_closure_member,
    phi_rank,
    realize_monomial_module,
    tabulate_f,
    verify_fit,
    word_count,
)
from .backends import (
    BettiResult,
    ChainBoundaryOracle,
    ChainFreeOracle,
    CircuitBackend,
    CounterexampleGraphicBackend,
    GraphicBackend,
    IdealCountBackend,
    LinearBackend,
    SimplicialComplex,
    TrivialBackend,
    betti_polynomials,
    make_circuit_backend,
    make_counterexample_graph,
    make_graphic_system,
    make_ideal_system,
    make_monomial_module_system,
    make_polynomial_ring_system,
    make_sumset_system,
    simplicial_operator,
    vertex_map_edge_operator,
)

__version__ = "0.1.0"
