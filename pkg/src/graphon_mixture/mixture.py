"""Graphon mixture estimation by clustering graphs in moment space.

Pipeline (:func:`phi`): motif moment vector per graph -> k-means -> for every
cluster, the graphs closest to the centroid -> degree-sorted, average-pooled
step graphon per cluster. Each graph's nodes receive latent positions from
their degree rank, which is how the step graphon was built.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .graphon import SeedLike, StepGraphon, make_rng
from .graphs import Graph, degree_sequence
from .motifs import Motif, format_float, moment_matrix, motif_family


@dataclass(frozen=True)
class KMeansResult:
    centroids: np.ndarray
    assignment: np.ndarray
    inertia: float
    n_iter: int
    inertia_history: tuple[float, ...] = ()


def _sq_dists(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("tkm,tkm->tk", diff, diff)


def _plus_plus(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    t = len(points)
    chosen = [int(rng.integers(t))]
    d2 = _sq_dists(points, points[chosen]).min(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(t, p=d2 / total))
        else:
            idx = int(rng.integers(t))
        chosen.append(idx)
        d2 = np.minimum(d2, _sq_dists(points, points[[idx]])[:, 0])
    return points[chosen].copy()


def _lloyd(points, centroids, max_iters):
    history = []
    assignment = None
    it = 0
    for it in range(1, max_iters + 1):
        d2 = _sq_dists(points, centroids)
        new = d2.argmin(axis=1)
        # empty clusters take over the point farthest from its centroid
        counts = np.bincount(new, minlength=len(centroids))
        for j in np.flatnonzero(counts == 0):
            far = int(d2[np.arange(len(points)), new].argmax())
            centroids[j] = points[far]
            d2 = _sq_dists(points, centroids)
            new = d2.argmin(axis=1)
        history.append(float(d2[np.arange(len(points)), new].sum()))
        if assignment is not None and np.array_equal(new, assignment):
            break
        assignment = new
        for j in range(len(centroids)):
            members = points[assignment == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
    d2 = _sq_dists(points, centroids)
    assignment = d2.argmin(axis=1)
    inertia = float(d2[np.arange(len(points)), assignment].sum())
    return centroids, assignment, inertia, it, tuple(history)


def kmeans(
    points,
    n_clusters: int,
    max_iters: int = 300,
    seed: SeedLike = None,
    n_init: int = 10,
) -> KMeansResult:
    """Lloyd's algorithm from k-means++ seeds, best of ``n_init`` restarts.

    Every point ends up assigned to its nearest centroid (lowest id on ties).
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    if n_clusters < 1:
        raise ValueError("n_clusters must be at least 1")
    if n_clusters > len(points):
        raise ValueError(f"n_clusters={n_clusters} exceeds number of points {len(points)}")
    rng = make_rng(seed)
    best = None
    for _ in range(max(1, n_init)):
        init = _plus_plus(points, n_clusters, rng)
        res = KMeansResult(*_lloyd(points, init, max_iters))
        if best is None or res.inertia < best.inertia:
            best = res
    return best


def default_cluster_count(dataset_size: int) -> int:
    """ceil(ln T), at least one."""
    if dataset_size < 1:
        raise ValueError("dataset size must be positive")
    return max(1, math.ceil(math.log(dataset_size)))


def degree_latents(g: Graph) -> np.ndarray:
    """Latent position per node: (rank + 0.5) / n by descending degree, ties by id."""
    n = g.node_count
    deg = np.asarray(degree_sequence(g))
    order = np.lexsort((np.arange(n), -deg))
    eta = np.empty(n)
    eta[order] = (np.arange(n) + 0.5) / n
    eta.setflags(write=False)
    return eta


def _pooled_histogram(g: Graph, latents: np.ndarray, r: int) -> np.ndarray:
    cells = np.minimum((latents * r).astype(np.int64), r - 1)
    sizes = np.bincount(cells, minlength=r).astype(np.float64)
    onehot = np.zeros((g.node_count, r))
    onehot[np.arange(g.node_count), cells] = 1.0
    sums = onehot.T @ g.adjacency.astype(np.float64) @ onehot
    pairs = np.outer(sizes, sizes) - np.diag(sizes)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(pairs > 0, sums / np.where(pairs > 0, pairs, 1), np.nan)


def estimate_step_graphon(
    graphs: Sequence[Graph], resolution: int = 30
) -> tuple[StepGraphon, list[np.ndarray]]:
    if not graphs:
        raise ValueError("cannot estimate a graphon from an empty graph list")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    latents = [degree_latents(g) for g in graphs]
    hists = np.stack([_pooled_histogram(g, eta, resolution) for g, eta in zip(graphs, latents)])
    defined = ~np.isnan(hists)
    counts = defined.sum(axis=0)
    total = np.where(defined, hists, 0.0).sum(axis=0)
    # cells no graph reaches (n < resolution) fall back to the overall edge density
    pairs = sum(g.node_count * (g.node_count - 1) / 2 for g in graphs)
    fallback = sum(g.edge_count for g in graphs) / pairs if pairs else 0.0
    est = np.where(counts > 0, total / np.maximum(counts, 1), fallback)
    est = np.clip(0.5 * (est + est.T), 0.0, 1.0)
    return StepGraphon(est), latents


@dataclass(frozen=True)
class MixtureModel:
    graphons: tuple[StepGraphon, ...]
    assignment: np.ndarray
    latents: tuple[np.ndarray, ...]
    centroids: np.ndarray
    representatives: tuple[np.ndarray, ...] = field(default=())

    @property
    def n_clusters(self) -> int:
        return len(self.graphons)

    def graphon_for(self, index: int) -> StepGraphon:
        return self.graphons[int(self.assignment[index])]

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for k, w in enumerate(self.graphons):
            w.save(directory / f"graphon_{k}.txt")
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["graph_index", "cluster", "latents"])
        for t, (c, eta) in enumerate(zip(self.assignment.tolist(), self.latents)):
            out.writerow([t, c, ";".join(format_float(x) for x in eta)])
        (directory / "assignment.csv").write_text(buf.getvalue())
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["cluster"] + [f"c{j}" for j in range(self.centroids.shape[1])])
        for k, row in enumerate(self.centroids):
            out.writerow([k] + [format_float(x) for x in row])
        (directory / "centroids.csv").write_text(buf.getvalue())

    @classmethod
    def load(cls, directory: str | Path) -> "MixtureModel":
        directory = Path(directory)
        with open(directory / "centroids.csv") as fh:
            rows = list(csv.reader(fh))[1:]
        centroids = np.array([[float(x) for x in row[1:]] for row in rows])
        graphons = tuple(
            StepGraphon.load(directory / f"graphon_{k}.txt") for k in range(len(rows))
        )
        assignment, latents = [], []
        with open(directory / "assignment.csv") as fh:
            for row in list(csv.reader(fh))[1:]:
                assignment.append(int(row[1]))
                latents.append(np.array([float(x) for x in row[2].split(";")]) if row[2] else np.zeros(0))
        return cls(graphons, np.array(assignment), tuple(latents), centroids)


def phi(
    graphs: Sequence[Graph],
    n_clusters: int | None = None,
    refinement_size: int = 10,
    resolution: int = 30,
    seed: SeedLike = 0,
    family: Sequence[Motif] | None = None,
    moments: np.ndarray | None = None,
    n_init: int = 10,
) -> MixtureModel:
    """Estimate a graphon mixture from ``graphs``.

    Points are put into a canonical (lexicographic) order before k-means so
    that shuffling the input only permutes the output.
    """
    if not graphs:
        raise ValueError("empty dataset")
    if refinement_size < 1:
        raise ValueError("refinement_size must be at least 1")
    family = motif_family(4) if family is None else family
    V = moment_matrix(graphs, family) if moments is None else np.asarray(moments, dtype=float)
    T = len(graphs)
    K = default_cluster_count(T) if n_clusters is None else n_clusters

    order = np.lexsort(V.T[::-1])
    km = kmeans(V[order], K, seed=seed, n_init=n_init)
    centroids = km.centroids
    d2 = _sq_dists(V, centroids)
    assignment = d2.argmin(axis=1)

    rank = np.empty(T, dtype=np.int64)
    rank[order] = np.arange(T)
    graphons, reps = [], []
    for k in range(K):
        members = np.flatnonzero(assignment == k)
        if len(members) == 0:
            members = np.arange(T)
        chosen = members[np.lexsort((rank[members], d2[members, k]))][:refinement_size]
        w, _ = estimate_step_graphon([graphs[i] for i in chosen], resolution)
        graphons.append(w)
        reps.append(chosen)
    latents = tuple(degree_latents(g) for g in graphs)
    return MixtureModel(tuple(graphons), assignment, latents, centroids, tuple(reps))


def theory_assign(moment_vectors, reference_vectors) -> np.ndarray:
    """Index of the nearest reference vector for each row (lowest on ties)."""
    V = np.atleast_2d(np.asarray(moment_vectors, dtype=float))
    R = np.atleast_2d(np.asarray(reference_vectors, dtype=float))
    if V.size == 0 or R.size == 0:
        raise ValueError("empty vector list")
    if V.shape[1] != R.shape[1]:
        raise ValueError(f"dimension mismatch: {V.shape[1]} vs {R.shape[1]}")
    return _sq_dists(V, R).argmin(axis=1)
