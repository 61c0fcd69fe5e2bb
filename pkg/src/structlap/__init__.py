"""Structural genericity of graph Laplacian spectra.

Exact and floating-point tools to build, perturb and certify weighted
(di)graph Laplacians whose perturbations stay on the graph's edge support.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .graphs import (  # noqa: E402
    Attachment,
    Digraph,
    WeightedGraph,
    branch_schedule,
    components,
    diverging_spanning_tree,
    induced_subgraph,
    is_connected,
    is_tree,
    is_weakly_connected,
    longest_path,
    reorder_nodes,
    spanning_tree,
    underlying_graph,
)
from .laplacian import (  # noqa: E402
    LaplacianMatrix,
    apply_perturbation,
    digraph_laplacian,
    digraph_of,
    directed_structural_perturbation,
    graph_of,
    laplacian,
    matrix_norm,
    perturbation_norm,
    rationalize,
    structural_perturbation,
    support_equal,
)
from .spectral import (  # noqa: E402
    TAU_GAP,
    TAU_V,
    GapReport,
    SpectralDecomposition,
    canonical_sign,
    eigenvalue_weight_derivative,
    fiedler,
    gap_report,
    general_spectrum,
    min_abs_entry,
    min_spacing,
    path_closed_form,
    spectral_scale,
    spectrum,
    sym_spectrum,
    zero_multiplicity,
)
from .exact import (  # noqa: E402
    Certificate,
    Polynomial,
    bareiss_determinant,
    char_poly,
    discriminant,
    induced_laplacian,
    simplicity_certificate,
    subgraph_disjoint_certificate,
    sylvester_matrix,
    sylvester_resultant,
)
from .construct import (  # noqa: E402
    FiedlerCut,
    PerturbationResult,
    TraceStep,
    build_simple_support_digraph_laplacian,
    build_simple_support_laplacian,
    fiedler_cut,
    perturb_basis_nonzero,
    perturb_fiedler_nonzero,
    perturb_to_simple,
    perturb_to_simple_directed,
)
from .lab import (  # noqa: E402
    TrialConfig,
    TrialReport,
    mc_fiedler_distinct,
    mc_fiedler_zero,
    mc_simplicity,
    mc_subgraph_disjoint,
    report_serialize,
    write_trials_csv,
)
