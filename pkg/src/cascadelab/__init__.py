"""Monte Carlo laboratory for cascading edge failures on random graphs."""

__version__ = "0.1.0"

from .graphs import (  # noqa: F401
    DegreeSequence,
    DegreeStats,
    MultiGraph,
    degree_stats,
    is_connected,
    pair_half_edges,
    validate_regularity,
)
from .generate import (  # noqa: F401
    ExplosionOutcome,
    chained_stars,
    er_giant,
    erased_connected_cm,
    explode,
    percolate,
    sample_connected_cm,
    square_lattice,
    star,
)
from .removal import (  # noqa: F401
    ComponentCensus,
    RemovalTrace,
    SplitForest,
    build_trace,
    census_at,
    first_disconnect_sample,
    kappa,
    upsilon,
    varrho,
)
from .cascade import (  # noqa: F401
    CascadeConfig,
    CascadeResult,
    SurplusAssignment,
    estimate_disconnection_hit,
    run_cascade,
    run_star_cascade,
)
from .walks import (  # noqa: F401
    Boundary,
    GiantIncrements,
    WalkPath,
    boundary_equivalence_ratio,
    first_passage,
    giant_increments,
    sample_bridge,
    sample_walk,
    tau_m,
    tau_tail_vs_bridge,
)
