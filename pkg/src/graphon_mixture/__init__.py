"""Graphon mixtures from motif moment vectors: estimation, augmentation,
contrastive objectives and concentration bounds."""

from .augment import MixedSample, gmam, graphon_augment, write_augmented
from .bounds import (
    BoundSpec,
    bound_comparison,
    classical_sampling_error,
    density_gap_bound,
    novel_sampling_error,
)
from .contrastive import (
    DegenerateBatchError,
    EmbeddingBatch,
    infonce_lower_bound,
    model_aware_infonce,
    tfr,
)
from .experiments import SynthConfig, clustering_accuracy, run_motif_ablation, run_synthetic
from .graphon import (
    AnalyticGraphon,
    Graphon,
    MixtureGraphon,
    StepGraphon,
    constant_graphon,
    ground_truth_graphon,
    hom_density,
    mix,
    sample_graph,
    theoretical_moment_vector,
)
from .graphs import (
    Graph,
    GraphFormatError,
    LabeledDataset,
    degree_sequence,
    parse_edge_list,
    parse_tu_dataset,
    read_edge_list,
    write_edge_list,
)
from .mixture import MixtureModel, estimate_step_graphon, kmeans, phi, theory_assign
from .motifs import (
    Motif,
    MomentVector,
    brute_force_density,
    empirical_density,
    moment_matrix,
    moment_vector,
    motif_family,
)

__version__ = "0.1.0"
