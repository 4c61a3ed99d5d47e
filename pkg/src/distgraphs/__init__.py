"""Distance graphs over finite-field vector spaces and discretized
regular fractals, with exact extremal-graph oracles.

Submodules
----------
field        arithmetic in F_{p^k} and the quadratic-form norm
graphs       bitset graphs, the bipartite pattern catalog, embedding search
ffgeom       point sets in F_q^d, distance histograms, G-distance sets
extremal     exact ex(n, G) oracles and threshold-exponent arithmetic
adreg        Cantor-product clouds, greedy nets, approximate distance graphs
experiments  seeded sweeps, reports, and the CLI runners
"""

from .field import FieldElement, FieldSpec, Point, enumerate_field, make_field
from .graphs import (
    Bipartition,
    EmbeddingWitness,
    Graph,
    bipartition,
    complete_graph,
    contains_induced_subgraph,
    contains_subgraph,
    cycle_graph,
    graph_from_name,
    graph_from_text,
    graph_to_text,
    hypercube_graph,
    min_side_max_degree,
    path_graph,
    shattering_graph,
    verify_embedding,
)
from .ffgeom import (
    DistanceHistogram,
    GraphDistanceSet,
    IRReport,
    PointSet,
    all_points,
    distance_graph,
    distance_histogram,
    graph_distance_set,
    ir_check,
    pairwise_norms,
    random_subset,
    read_points_file,
    write_points_file,
)
from .extremal import (
    ExponentInfo,
    ExtremalResult,
    ThresholdResult,
    aks_exponent,
    best_known_exponent,
    ex_branch_bound,
    ex_exhaustive,
    threshold_exponent,
    verify_extremal_witness,
)
from .adreg import (
    AnnulusStats,
    ApproximationWitness,
    FractalSpec,
    Net,
    PointCloud,
    annulus_stats,
    approx_distance_graph,
    cantor_product,
    edge_scaling,
    find_approximation,
    greedy_net,
    verify_approximation,
    verify_net,
)
from .experiments import ExperimentConfig, ExperimentReport, run

__version__ = "0.1.0"
