"""Exact and Monte Carlo chromatic numbers of edge-percolated graphs."""

__version__ = "0.1.0"

from .graph import (  # noqa: E402
    DimacsFormatError,
    EdgeSubset,
    Graph,
    GraphError,
    Partition,
    complement_within,
    complete,
    complete_multipartite,
    cut,
    cycle,
    gnp,
    induced_edges,
    petersen,
    read_dimacs,
    write_dimacs,
)
from .solvers import (  # noqa: E402
    ColoringResult,
    chromatic_number,
    critical_subgraph,
    hadwiger_number,
    independence_number,
    is_d_colorable,
    min_monochromatic_edges,
)
from .percolation import (  # noqa: E402
    CapExceededError,
    Estimate,
    ExactDistribution,
    check_product_bound,
    exact_chi_distribution,
    exact_expected_chi,
    exact_tail,
    mc_tail,
    sample,
)
from .bounds import (  # noqa: E402
    BoundReport,
    DomainError,
    alpha_tail_bound,
    er_tail_bound,
    expectation_lower_bounds,
    frankl_tail_bound,
    thm_item2_bound,
    union_tail_bound,
    verify_bound,
)
from .families import (  # noqa: E402
    SetFamily,
    enumerate_partitions,
    frankl_check,
    min_r_wise_intersection,
    monotone_closure_count,
    uncut,
    uncut_family,
)
from .corpus import builtin_corpus  # noqa: E402
