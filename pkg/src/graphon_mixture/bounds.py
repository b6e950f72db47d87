"""Concentration bounds for empirical motif densities of W-random graphs.

All logarithms are natural.

The two-stage bound splits the deviation of ``t(F, G)`` from ``t(F, W)`` into
vertex noise (McDiarmid over ``m = n // k`` disjoint vertex blocks) and edge
noise given the latents (McDiarmid over ``n(n-1)/2`` edge indicators), each
at failure probability ``eta / 2``. The classical single-stage bound applies
McDiarmid directly to the ``n`` vertices.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .motifs import Motif, format_float, motif_family


@dataclass(frozen=True)
class BoundSpec:
    n: int
    k: int
    e: int
    eta: float = 0.05
    epsilon: float = 0.0

    def __post_init__(self):
        if self.k < 2 or self.n < self.k:
            raise ValueError(f"need n >= k >= 2, got n={self.n}, k={self.k}")
        if self.e < 1:
            raise ValueError("motif must have at least one edge")
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must lie in (0, 1)")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")

    @classmethod
    def for_motif(cls, f: Motif, n: int, eta: float = 0.05, epsilon: float = 0.0):
        return cls(n, f.vertex_count, f.edge_count, eta, epsilon)

    @property
    def blocks(self) -> int:
        return self.n // self.k


@dataclass(frozen=True)
class SamplingError:
    vertex: float
    edge: float

    @property
    def total(self) -> float:
        return self.vertex + self.edge


def novel_sampling_error(spec: BoundSpec) -> SamplingError:
    """Per-graph deviation radius holding with probability >= 1 - eta."""
    log_term = math.log(4.0 / spec.eta)
    vertex = math.sqrt(log_term / (2.0 * spec.blocks))
    edge = spec.e / math.sqrt(spec.n * (spec.n - 1)) * math.sqrt(2.0 * log_term)
    return SamplingError(vertex, edge)


def classical_sampling_error(n: int, k: int, eta: float = 0.05) -> float:
    if n < 1 or k < 2:
        raise ValueError("need n >= 1 and k >= 2")
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    return 2.0 * k * math.sqrt(math.log(2.0 / eta) / n)


def density_gap_bound(spec: BoundSpec) -> float:
    """Bound on ``|t(F, G1) - t(F, G2)|`` for graphs from graphons within cut
    distance ``epsilon``; holds with probability >= 1 - 2 eta."""
    return spec.e * spec.epsilon + 2.0 * novel_sampling_error(spec).total


@dataclass(frozen=True)
class ComparisonRow:
    motif_id: int
    k: int
    e: int
    n: int
    novel: float
    classical: float

    @property
    def ratio(self) -> float:
        return self.classical / self.novel


def bound_comparison(
    sizes: Iterable[int] = range(50, 1001, 50),
    family: Sequence[Motif] | None = None,
    eta: float = 0.05,
) -> list[ComparisonRow]:
    """Total two-graph sampling terms ``2 delta_s`` (novel) and
    ``2 delta_old`` (classical) for every motif and size."""
    family = motif_family(4) if family is None else family
    rows = []
    for f in family:
        for n in sizes:
            spec = BoundSpec.for_motif(f, n, eta)
            rows.append(ComparisonRow(
                f.id, f.vertex_count, f.edge_count, n,
                2.0 * novel_sampling_error(spec).total,
                2.0 * classical_sampling_error(n, f.vertex_count, eta),
            ))
    return rows


def min_ratio_per_motif(rows: Sequence[ComparisonRow]) -> dict[int, float]:
    out: dict[int, float] = {}
    for r in rows:
        out[r.motif_id] = min(out.get(r.motif_id, math.inf), r.ratio)
    return out


def comparison_csv(rows: Sequence[ComparisonRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["motif_id", "k", "e", "n", "novel", "classical"])
    for r in rows:
        w.writerow([r.motif_id, r.k, r.e, r.n, format_float(r.novel), format_float(r.classical)])
    return buf.getvalue()


def min_ratio_csv(rows: Sequence[ComparisonRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["motif_id", "min_classical_over_novel"])
    for motif_id, ratio in min_ratio_per_motif(rows).items():
        w.writerow([motif_id, format_float(ratio)])
    return buf.getvalue()
