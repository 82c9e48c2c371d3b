"""Community-detection evaluation toolkit.

Aligns computed community labels to ground-truth labels through an exact
assignment solve over symmetric-difference costs, scores the result with
chance-corrected kappa and per-community F-scores, and ships the standard
comparison suite (purity, Rand, NMI, rNMI, cNMI), internal indices
(modularity, partition density, sum of squares, Calinski-Harabasz,
silhouette) and seeded synthetic bias experiments.
"""

__version__ = "0.1.0"

from .alignment import (
    Alignment,
    CostMatrix,
    brute_force_assignment,
    build_cost_matrix,
    cost_matrix_from_entries,
    pad_square,
    solve_assignment,
)
from .errors import MismatchError, ParseError, ValidationError
from .experiments import (
    SweepResult,
    SweepRow,
    SweepSpec,
    flip_labels,
    random_partition,
    run_flip_sweep,
    run_independent_sweep,
    run_self_sweep,
    run_varying_b_sweep,
    theoretical_kappa,
)
from .external import (
    ClassReport,
    ClassStats,
    ConfusionMatrix,
    NullEnsembleConfig,
    align_partitions,
    class_report,
    cnmi,
    confusion_matrix,
    entropy,
    kappa,
    kappa_score,
    mutual_information,
    nmi,
    purity,
    rand_index,
    rnmi,
)
from .internal import (
    Graph,
    PointSet,
    calinski_harabasz,
    graph_from_edges,
    modularity,
    partition_density,
    silhouette,
    within_ss,
)
from .partition import (
    ContingencyTable,
    MultiPartition,
    Partition,
    contingency,
    multipartition_from_labels,
    partition_from_labels,
)

__all__ = [
    "Alignment",
    "ClassReport",
    "ClassStats",
    "ConfusionMatrix",
    "ContingencyTable",
    "CostMatrix",
    "Graph",
    "MismatchError",
    "MultiPartition",
    "NullEnsembleConfig",
    "ParseError",
    "Partition",
    "PointSet",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "ValidationError",
    "align_partitions",
    "brute_force_assignment",
    "build_cost_matrix",
    "calinski_harabasz",
    "class_report",
    "cnmi",
    "confusion_matrix",
    "contingency",
    "cost_matrix_from_entries",
    "entropy",
    "flip_labels",
    "graph_from_edges",
    "kappa",
    "kappa_score",
    "modularity",
    "multipartition_from_labels",
    "mutual_information",
    "nmi",
    "pad_square",
    "partition_density",
    "partition_from_labels",
    "purity",
    "rand_index",
    "random_partition",
    "rnmi",
    "run_flip_sweep",
    "run_independent_sweep",
    "run_self_sweep",
    "run_varying_b_sweep",
    "silhouette",
    "solve_assignment",
    "theoretical_kappa",
    "within_ss",
]
