"""Synthetic clustering experiment and motif-count ablation.

Graphs are drawn from the seven benchmark graphons, embedded as motif moment
vectors and clustered two ways: k-means on the vectors (moment-based
clustering, MBC) and nearest ground-truth moment vector ("theory").
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graphon import (
    GROUND_TRUTH_COUNT,
    ground_truth_graphon,
    make_rng,
    sample_graph,
    theoretical_moment_vector,
)
from .mixture import kmeans, theory_assign
from .motifs import moment_matrix, motif_family

SIZE_MODES = ("varying", "fixed")


@dataclass(frozen=True)
class SynthConfig:
    graphs_per_class: int = 50
    size_mode: str = "varying"
    seed: int = 0
    n_clusters: int = 7
    max_k: int = 4
    min_size: int = 75
    max_size: int = 300
    fixed_size: int = 200
    mc_samples: int = 400_000

    def __post_init__(self):
        if self.graphs_per_class < 1:
            raise ValueError("graphs_per_class must be at least 1")
        if self.size_mode not in SIZE_MODES:
            raise ValueError(f"size_mode must be one of {SIZE_MODES}")
        if self.max_k not in (4, 5):
            raise ValueError("max_k must be 4 or 5")


def clustering_accuracy(predicted, truth) -> float:
    """Best fraction of agreement over one-to-one relabelings of ``predicted``."""
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ValueError("predicted and truth differ in length")
    if predicted.size == 0:
        return 0.0
    p_ids, p_idx = np.unique(predicted, return_inverse=True)
    t_ids, t_idx = np.unique(truth, return_inverse=True)
    size = max(len(p_ids), len(t_ids))
    table = np.zeros((size, size), dtype=np.int64)
    np.add.at(table, (p_idx, t_idx), 1)
    if size <= 8:
        perms = np.array(list(itertools.permutations(range(size))))
        best = table[np.arange(size), perms].sum(axis=1).max()
    else:
        rows, cols = linear_sum_assignment(table, maximize=True)
        best = table[rows, cols].sum()
    return float(best) / predicted.size


@lru_cache(maxsize=None)
def ground_truth_moments(max_k: int = 4, mc_samples: int = 400_000) -> np.ndarray:
    """Theoretical moment vectors of the seven benchmark graphons (rows).

    Motifs on five vertices use Monte Carlo with a fixed seed.
    """
    family = motif_family(max_k)
    small = [f for f in family if f.vertex_count <= 4]
    large = [f for f in family if f.vertex_count > 4]
    rows = []
    for i in range(GROUND_TRUTH_COUNT):
        w = ground_truth_graphon(i)
        vals = list(theoretical_moment_vector(w, small).values)
        if large:
            vals += list(theoretical_moment_vector(
                w, large, method="monte_carlo", budget=mc_samples, seed=1000 + i).values)
        rows.append(vals)
    out = np.array(rows)
    out.setflags(write=False)
    return out


def sample_synthetic(config: SynthConfig):
    """Graphs and ground-truth labels for one synthetic dataset."""
    root = np.random.SeedSequence(config.seed)
    size_seq, graph_seq = root.spawn(2)
    size_rng = make_rng(size_seq)
    seeds = graph_seq.spawn(GROUND_TRUTH_COUNT * config.graphs_per_class)
    graphs, labels = [], []
    for c in range(GROUND_TRUTH_COUNT):
        w = ground_truth_graphon(c)
        for i in range(config.graphs_per_class):
            if config.size_mode == "fixed":
                n = config.fixed_size
            else:
                n = int(size_rng.integers(config.min_size, config.max_size + 1))
            g, _ = sample_graph(w, n, seeds[c * config.graphs_per_class + i])
            graphs.append(g)
            labels.append(c)
    return graphs, np.array(labels)


@dataclass
class SynthReport:
    config: SynthConfig
    accuracy_mbc: float
    accuracy_theory: float
    confusion_mbc: np.ndarray
    confusion_theory: np.ndarray
    moments: np.ndarray
    labels: np.ndarray
    sizes: np.ndarray
    mean_distance_to_truth: float
    extra: dict = field(default_factory=dict)

    def summary(self) -> dict:
        c = self.config
        return {
            "size_mode": c.size_mode,
            "graphs_per_class": c.graphs_per_class,
            "seed": c.seed,
            "n_clusters": c.n_clusters,
            "max_k": c.max_k,
            "accuracy_mbc": self.accuracy_mbc,
            "accuracy_theory": self.accuracy_theory,
            "mean_distance_to_truth": self.mean_distance_to_truth,
            "confusion_mbc": self.confusion_mbc.tolist(),
            "confusion_theory": self.confusion_theory.tolist(),
        }


def _confusion(truth, predicted, k) -> np.ndarray:
    m = np.zeros((GROUND_TRUTH_COUNT, k), dtype=np.int64)
    np.add.at(m, (truth, predicted), 1)
    return m


def _score(V, labels, truth_vectors, n_clusters, seed):
    km = kmeans(V, min(n_clusters, len(V)), seed=seed)
    theory = theory_assign(V, truth_vectors)
    return km.assignment, theory


def run_synthetic(config: SynthConfig, graphs=None, labels=None) -> SynthReport:
    if graphs is None:
        graphs, labels = sample_synthetic(config)
    family = motif_family(config.max_k)
    V = moment_matrix(graphs, family)
    truth_vectors = ground_truth_moments(config.max_k, config.mc_samples)
    mbc, theory = _score(V, labels, truth_vectors, config.n_clusters, config.seed)
    dist = np.linalg.norm(V - truth_vectors[labels], axis=1).mean()
    return SynthReport(
        config=config,
        accuracy_mbc=clustering_accuracy(mbc, labels),
        accuracy_theory=clustering_accuracy(theory, labels),
        confusion_mbc=_confusion(labels, mbc, config.n_clusters),
        confusion_theory=_confusion(labels, theory, GROUND_TRUTH_COUNT),
        moments=V,
        labels=labels,
        sizes=np.array([g.node_count for g in graphs]),
        mean_distance_to_truth=float(dist),
    )


def run_motif_ablation(config: SynthConfig, max_motifs: int = 15, graphs=None, labels=None):
    """Accuracy of both clustering routes using the first 1..max_motifs motifs.

    Returns rows ``(motifs_used, accuracy_mbc, accuracy_theory)``.
    """
    if not 1 <= max_motifs <= 30:
        raise ValueError("max_motifs must be in 1..30")
    max_k = 4 if max_motifs <= 9 else 5
    if graphs is None:
        graphs, labels = sample_synthetic(config)
    family = motif_family(max_k)[:max_motifs]
    V = moment_matrix(graphs, family)
    truth_vectors = ground_truth_moments(max_k, config.mc_samples)[:, :max_motifs]
    rows = []
    for used in range(1, max_motifs + 1):
        mbc, theory = _score(V[:, :used], labels, truth_vectors[:, :used],
                             config.n_clusters, config.seed)
        rows.append((used, clustering_accuracy(mbc, labels), clustering_accuracy(theory, labels)))
    return rows
