"""Cluster-aware InfoNCE over precomputed embeddings, its Jensen lower bound,
and the true-negative to false-negative ratio (TFR)."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import logsumexp


class DegenerateBatchError(ValueError):
    """Every anchor in the batch lacks negatives from another cluster."""


@dataclass(frozen=True)
class EmbeddingBatch:
    anchors: np.ndarray
    positives: np.ndarray
    clusters: np.ndarray
    tau: float = 0.5
    labels: np.ndarray | None = None

    def __post_init__(self):
        z = np.atleast_2d(np.asarray(self.anchors, dtype=float))
        zt = np.atleast_2d(np.asarray(self.positives, dtype=float))
        c = np.asarray(self.clusters)
        if z.shape != zt.shape or len(c) != len(z):
            raise ValueError("anchors, positives and clusters must have equal lengths")
        if self.tau <= 0:
            raise ValueError("temperature must be positive")
        if np.any(np.linalg.norm(z, axis=1) == 0) or np.any(np.linalg.norm(zt, axis=1) == 0):
            raise ValueError("zero embedding vector: cosine similarity undefined")
        object.__setattr__(self, "anchors", z)
        object.__setattr__(self, "positives", zt)
        object.__setattr__(self, "clusters", c)
        if self.labels is not None:
            labels = np.asarray(self.labels)
            if len(labels) != len(z):
                raise ValueError("labels length mismatch")
            object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.anchors)

    def scores(self) -> np.ndarray:
        """``theta[t, k] = cos(z_t, z~_k) / tau``."""
        za = self.anchors / np.linalg.norm(self.anchors, axis=1, keepdims=True)
        zp = self.positives / np.linalg.norm(self.positives, axis=1, keepdims=True)
        return (za @ zp.T) / self.tau

    def negative_mask(self) -> np.ndarray:
        return self.clusters[:, None] != self.clusters[None, :]


@dataclass(frozen=True)
class LossResult:
    per_anchor: np.ndarray  # nan for skipped anchors
    skipped: np.ndarray
    mean: float

    @property
    def skip_count(self) -> int:
        return int(self.skipped.sum())


def model_aware_infonce(batch: EmbeddingBatch) -> LossResult:
    """InfoNCE whose negatives for anchor ``t`` are the positives of other
    clusters only. Anchors without such negatives are skipped."""
    theta = batch.scores()
    neg = batch.negative_mask()
    skipped = ~neg.any(axis=1)
    if skipped.all():
        raise DegenerateBatchError("no anchor has a negative from another cluster")
    masked = np.where(neg, theta, -np.inf)
    losses = np.full(len(batch), np.nan)
    keep = ~skipped
    losses[keep] = logsumexp(masked[keep], axis=1) - np.diag(theta)[keep]
    return LossResult(losses, skipped, float(losses[keep].mean()))


@dataclass(frozen=True)
class LowerBound:
    bound: np.ndarray  # nan for skipped anchors
    centroid_form: np.ndarray
    negatives: np.ndarray


def infonce_lower_bound(batch: EmbeddingBatch) -> LowerBound:
    """``ln m_t + mean_k theta(z_t, z~_k) - theta(z_t, z~_t)`` over the
    cross-cluster negatives ``k`` (Jensen on the log-sum-exp).

    ``centroid_form`` replaces the mean score by the score against the mean
    negative embedding; it is reported for inspection only and is not a
    guaranteed bound because cosine similarity is not linear.
    """
    theta = batch.scores()
    neg = batch.negative_mask()
    m = neg.sum(axis=1)
    keep = m > 0
    bound = np.full(len(batch), np.nan)
    centroid = np.full(len(batch), np.nan)
    pos = np.diag(theta)
    mean_score = np.where(keep, (theta * neg).sum(axis=1) / np.maximum(m, 1), np.nan)
    bound[keep] = np.log(m[keep]) + mean_score[keep] - pos[keep]
    za = batch.anchors / np.linalg.norm(batch.anchors, axis=1, keepdims=True)
    for t in np.flatnonzero(keep):
        c = batch.positives[neg[t]].mean(axis=0)
        norm = np.linalg.norm(c)
        cos = float(za[t] @ c / norm) if norm > 0 else 0.0
        centroid[t] = np.log(m[t]) + cos / batch.tau - pos[t]
    return LowerBound(bound, centroid, m)


def _anchor_ratios(labels, clusters, mode) -> np.ndarray:
    labels = np.asarray(labels)
    L = len(labels)
    others = ~np.eye(L, dtype=bool)
    if mode == "model_aware":
        clusters = np.asarray(clusters)
        others &= clusters[:, None] != clusters[None, :]
    elif mode != "baseline":
        raise ValueError(f"mode must be 'baseline' or 'model_aware', got {mode!r}")
    same = labels[:, None] == labels[None, :]
    tn = (others & ~same).sum(axis=1)
    fn = (others & same).sum(axis=1)
    return tn / np.maximum(1, fn)


def tfr(batches: Sequence[tuple], mode: str = "baseline") -> float:
    """Mean over batches of the per-anchor ``|TN| / max(1, |FN|)`` average.

    ``batches`` holds ``(class_labels, cluster_ids)`` pairs.
    """
    if not batches:
        raise ValueError("no batches")
    per_batch = []
    for labels, clusters in batches:
        if len(labels) == 0:
            raise ValueError("empty batch")
        per_batch.append(_anchor_ratios(labels, clusters, mode).mean())
    return float(np.mean(per_batch))


def read_embedding_csv(path: str | Path, tau: float = 0.5) -> EmbeddingBatch:
    """Columns: graph_index, cluster, [class], z_0..z_{F-1}, zt_0..zt_{F-1}."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    has_class = len(header) > 2 and header[2] == "class"
    start = 3 if has_class else 2
    width = len(header) - start
    if width <= 0 or width % 2:
        raise ValueError("expected an even number of embedding columns")
    F = width // 2
    data = np.array([[float(x) for x in row[start:]] for row in body]).reshape(-1, width)
    clusters = np.array([int(row[1]) for row in body])
    labels = np.array([int(row[2]) for row in body]) if has_class else None
    return EmbeddingBatch(data[:, :F], data[:, F:], clusters, tau, labels)
