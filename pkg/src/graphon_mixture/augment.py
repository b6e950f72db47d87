"""Graphon-based augmentation: mixture-aware mixup and edge resampling.

:func:`gmam` estimates a graphon mixture per class, then repeatedly picks two
graphs from distinct classes, interpolates the graphons of their clusters and
samples a new graph with the matching soft label.

:func:`graphon_augment` resamples a random fraction of node pairs of one graph
from its cluster graphon and keeps every other pair unchanged.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graphon import Graphon, SeedLike, make_rng, mix, sample_graph
from .graphs import Graph, LabeledDataset, write_edge_list
from .mixture import MixtureModel, phi
from .motifs import format_float


@dataclass(frozen=True)
class MixedSample:
    graph: Graph
    soft_label: np.ndarray
    source_classes: tuple[int, int]
    weight: float


def _soft_label(class_count: int, i: int, j: int, lam: float) -> np.ndarray:
    y = np.zeros(class_count)
    y[i - 1] += lam
    y[j - 1] += 1.0 - lam
    return y


def fit_class_mixtures(
    dataset: LabeledDataset,
    refinement_size: int = 10,
    resolution: int = 30,
    seed: SeedLike = 0,
    n_clusters: int | None = None,
) -> dict[int, tuple[list[int], MixtureModel]]:
    """Graphon mixture per class: ``{class: (graph positions, model)}``."""
    root = np.random.SeedSequence(seed if isinstance(seed, int) else None)
    seeds = root.spawn(dataset.class_count)
    out = {}
    for c, members in dataset.by_class().items():
        if not members:
            raise ValueError(f"class {c} has no graphs")
        model = phi(
            [dataset.graphs[t] for t in members],
            n_clusters=n_clusters,
            refinement_size=refinement_size,
            resolution=resolution,
            seed=make_rng(seeds[c - 1]),
        )
        out[c] = (members, model)
    return out


def gmam(
    dataset: LabeledDataset,
    ratio: float = 0.2,
    target_n: int | None = None,
    refinement_size: int = 10,
    resolution: int = 30,
    seed: SeedLike = 0,
    weight_range: tuple[float, float] = (0.0, 0.2),
    fixed_weight: float | None = None,
    mixtures: dict | None = None,
) -> list[MixedSample]:
    """Mixture-aware mixup; returns ``ceil(ratio * T)`` soft-labeled graphs.

    ``fixed_weight`` replaces the uniform draw of the mixing weight (useful to
    probe the endpoints). The ordered class pair ``(i, j)`` gives weight
    ``lam`` to class ``i``.
    """
    if dataset.labels is None:
        raise ValueError("gmam needs a labeled dataset")
    if dataset.class_count < 2:
        raise ValueError("gmam needs at least two classes")
    if not 0.0 < ratio <= 1.0:
        raise ValueError("ratio must lie in (0, 1]")
    lo, hi = weight_range
    if not 0.0 <= lo <= hi <= 1.0:
        raise ValueError("weight_range must satisfy 0 <= lo <= hi <= 1")

    root = np.random.SeedSequence(seed if isinstance(seed, int) else None)
    fit_seq, draw_seq, sample_seq = root.spawn(3)
    if mixtures is None:
        mixtures = fit_class_mixtures(
            dataset, refinement_size, resolution, seed=int(fit_seq.generate_state(1)[0])
        )
    if target_n is None:
        target_n = int(round(np.mean([g.node_count for g in dataset.graphs])))
    target_n = max(1, target_n)

    count = math.ceil(ratio * len(dataset))
    rng = make_rng(draw_seq)
    sample_seeds = sample_seq.spawn(count)
    classes = sorted(mixtures)
    out = []
    for m in range(count):
        i, j = (classes[x] for x in rng.choice(len(classes), size=2, replace=False))
        members_i, model_i = mixtures[i]
        members_j, model_j = mixtures[j]
        a = int(rng.integers(len(members_i)))
        b = int(rng.integers(len(members_j)))
        lam = float(rng.uniform(lo, hi)) if fixed_weight is None else float(fixed_weight)
        w_mix = mix(model_i.graphon_for(a), model_j.graphon_for(b), lam)
        g, _ = sample_graph(w_mix, target_n, sample_seeds[m])
        out.append(MixedSample(g, _soft_label(dataset.class_count, i, j, lam), (i, j), lam))
    return out


def write_augmented(samples: list[MixedSample], directory: str | Path) -> None:
    """Edge-list file per sample plus ``manifest.csv``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    width = len(samples[0].soft_label) if samples else 0
    out.writerow(["file", "lambda", "class_i", "class_j"] + [f"y{c + 1}" for c in range(width)])
    for m, s in enumerate(samples):
        name = f"mixed_{m:05d}.edges"
        write_edge_list(s.graph, directory / name)
        out.writerow([name, format_float(s.weight), *s.source_classes]
                     + [format_float(v) for v in s.soft_label])
    (directory / "manifest.csv").write_text(buf.getvalue())


def graphon_augment(
    g: Graph, w: Graphon, latents, rate_percent: float, seed: SeedLike = None
) -> Graph:
    """Resample ``round(rate% * n(n-1)/2)`` uniformly chosen node pairs from
    ``w`` evaluated at the nodes' latent positions."""
    latents = np.asarray(latents, dtype=float)
    n = g.node_count
    if len(latents) != n:
        raise ValueError(f"{len(latents)} latents for a graph with {n} nodes")
    if not 0.0 <= rate_percent <= 100.0:
        raise ValueError("rate_percent must lie in [0, 100]")
    rng = make_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    n_sel = int(round(rate_percent / 100.0 * len(iu)))
    selected = np.sort(rng.choice(len(iu), size=n_sel, replace=False))
    state = g.adjacency[iu, ju].astype(bool)
    si, sj = iu[selected], ju[selected]
    state[selected] = rng.random(n_sel) < w(latents[si], latents[sj])
    return Graph(n, np.column_stack([iu[state], ju[state]]))


def selected_pairs_mask(n: int, rate_percent: float, seed: SeedLike = None) -> np.ndarray:
    """Boolean mask over upper-triangle pairs that :func:`graphon_augment`
    with the same ``seed`` would resample (first draw of the stream)."""
    rng = make_rng(seed)
    total = n * (n - 1) // 2
    n_sel = int(round(rate_percent / 100.0 * total))
    mask = np.zeros(total, dtype=bool)
    mask[rng.choice(total, size=n_sel, replace=False)] = True
    return mask
