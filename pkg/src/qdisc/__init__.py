"""qdisc: simulation and validation of sublinear-query digraph
frequency-estimation algorithms in the out-edges-only oracle model.

The package pairs every estimator with an exact brute-force oracle and a
query-cost ledger, so the estimators' accuracy and query scaling can be
checked empirically on generated instances.
"""

from .digraph import (
    BOTTOM,
    Digraph,
    EdgeRef,
    QueryLedger,
    RootedSubgraph,
    UnidirectionalView,
    bfs_disc,
    bfs_disc_queried,
    generate,
    parse_generator_spec,
)
from .isotypes import (
    CorrectionMatrix,
    DiscType,
    EnumerationCapError,
    RootedGraph,
    TupleClassTable,
    TypeCatalog,
    automorphisms,
    binomial_inverse_closed_form,
    binomial_matrix,
    build_matrix,
    build_tuple_table,
    canonical_encoding,
    canonicalize,
    enumerate_catalog,
    make_disc_type,
    make_star_type,
    mu,
    star_matrix,
    verify_factor_identity,
)
from .quantumsim import (
    COUNT_MODES,
    EXHAUSTED,
    BooleanOracle,
    CostModel,
    count_error_bound,
    grover_sample,
    median_amplify,
    quantum_count,
)
from .truth import (
    CatalogIncompleteError,
    TruthReport,
    count_disc_types,
    count_indegree,
    count_subgraph,
    disc_histogram,
    truth_report,
    verify_obs_identity,
)
from .estimators import (
    DiscConfig,
    EstimateReport,
    WarmupConfig,
    classify_type_vector,
    est_disc,
    est_disc_star,
    est_subgraph,
    est_vertices,
    squeeze_bounds,
)
from .testers import (
    DiscFamily,
    ReductionInstance,
    build_reduction_instance,
    classical_bidirectional_star_test,
    reduction_disc_catalog,
    star_family,
    test_property,
)
from .experiments import ExperimentSpec, fit_exponent, run

__version__ = "0.1.0"
