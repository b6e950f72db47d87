"""Graphons, W-random graph sampling, and motif homomorphism densities.

A graphon is any symmetric measurable ``W: [0,1]^2 -> [0,1]``. Three concrete
kinds are provided: closed-form (:class:`AnalyticGraphon`), piecewise constant
on an ``r x r`` grid (:class:`StepGraphon`) and convex combinations of two
graphons (:class:`MixtureGraphon`).

Random draws follow a fixed order so that results are reproducible from the
seed alone: first the ``n`` latent positions, then one uniform per node pair
``(i, j)``, ``i < j``, in lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .graphs import Graph
from .motifs import Motif, MomentVector, format_float

SeedLike = int | np.random.Generator | np.random.SeedSequence | None


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


class Graphon:
    """Base class. Subclasses implement vectorised :meth:`__call__`."""

    name = "graphon"

    def __call__(self, x, y) -> np.ndarray:
        raise NotImplementedError

    def grid(self, resolution: int) -> np.ndarray:
        """Values at the midpoints of a uniform ``resolution x resolution`` grid."""
        mid = (np.arange(resolution) + 0.5) / resolution
        return np.asarray(self(mid[:, None], mid[None, :]), dtype=np.float64)

    def cell_values(self) -> np.ndarray | None:
        """Exact cell matrix when the graphon is a step function, else None."""
        return None


@dataclass(frozen=True, eq=False)
class AnalyticGraphon(Graphon):
    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str = "analytic"

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return np.asarray(self.func(x, y), dtype=float)


def constant_graphon(value: float) -> AnalyticGraphon:
    if not 0.0 <= value <= 1.0:
        raise ValueError("constant graphon value must lie in [0, 1]")
    return AnalyticGraphon(lambda x, y: np.full(np.shape(x), value), f"const({value:g})")


_GROUND_TRUTH = (
    ("xy", lambda x, y: x * y),
    ("exp(-(x^0.7+y^0.7))", lambda x, y: np.exp(-(x**0.7 + y**0.7))),
    ("(x^2+y^2+sqrt(x)+sqrt(y))/4", lambda x, y: 0.25 * (x**2 + y**2 + np.sqrt(x) + np.sqrt(y))),
    ("(x+y)/2", lambda x, y: 0.5 * (x + y)),
    ("1/(1+exp(-2(x^2+y^2)))", lambda x, y: 1.0 / (1.0 + np.exp(-2.0 * (x**2 + y**2)))),
    (
        "1/(1+exp(-max^2-min^4))",
        lambda x, y: 1.0 / (1.0 + np.exp(-np.maximum(x, y) ** 2 - np.minimum(x, y) ** 4)),
    ),
    ("exp(-max^0.75)", lambda x, y: np.exp(-np.maximum(x, y) ** 0.75)),
)

GROUND_TRUTH_COUNT = len(_GROUND_TRUTH)


def ground_truth_graphon(index: int) -> AnalyticGraphon:
    """One of the seven benchmark graphons used in the synthetic experiment."""
    if not 0 <= index < len(_GROUND_TRUTH):
        raise IndexError(f"ground-truth graphon index must be in 0..{len(_GROUND_TRUTH) - 1}")
    name, func = _GROUND_TRUTH[index]
    return AnalyticGraphon(func, f"W{index}: {name}")


class StepGraphon(Graphon):
    """Piecewise constant graphon; cell ``i`` covers ``[i/r, (i+1)/r)``, the
    last cell is closed at 1."""

    def __init__(self, values, name: str = "step"):
        vals = np.array(values, dtype=np.float64)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1] or vals.shape[0] < 1:
            raise ValueError("step graphon needs a square, nonempty value grid")
        if not np.allclose(vals, vals.T, atol=1e-12):
            raise ValueError("step graphon values must be symmetric")
        if vals.min() < -1e-12 or vals.max() > 1 + 1e-12:
            raise ValueError("step graphon values must lie in [0, 1]")
        vals = np.clip(vals, 0.0, 1.0)
        vals.setflags(write=False)
        self.values = vals
        self.name = name

    @property
    def resolution(self) -> int:
        return self.values.shape[0]

    def cell_index(self, x) -> np.ndarray:
        r = self.resolution
        return np.minimum((np.asarray(x, dtype=float) * r).astype(np.int64), r - 1)

    def __call__(self, x, y):
        return self.values[self.cell_index(x), self.cell_index(y)]

    def cell_values(self):
        return self.values

    def to_text(self) -> str:
        rows = [str(self.resolution)]
        rows += [" ".join(format_float(v) for v in row) for row in self.values]
        return "\n".join(rows) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "StepGraphon":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        r = int(lines[0])
        if len(lines) != r + 1:
            raise ValueError(f"expected {r} value rows, found {len(lines) - 1}")
        vals = np.array([[float(tok) for tok in ln.split()] for ln in lines[1:]])
        if vals.shape != (r, r):
            raise ValueError(f"expected a {r}x{r} matrix, got {vals.shape}")
        return cls(vals)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> "StepGraphon":
        return cls.from_text(Path(path).read_text())

    def __repr__(self):
        return f"StepGraphon(resolution={self.resolution}, mean={self.values.mean():.4f})"


@dataclass(frozen=True, eq=False)
class MixtureGraphon(Graphon):
    """``weight * first + (1 - weight) * second``."""

    first: Graphon
    second: Graphon
    weight: float

    @property
    def name(self):
        return f"mix({self.weight:g})"

    def __call__(self, x, y):
        return self.weight * self.first(x, y) + (1.0 - self.weight) * self.second(x, y)

    def cell_values(self):
        a, b = self.first.cell_values(), self.second.cell_values()
        if a is None or b is None or a.shape != b.shape:
            return None
        return self.weight * a + (1.0 - self.weight) * b


def mix(first: Graphon, second: Graphon, weight: float) -> MixtureGraphon:
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {weight}")
    return MixtureGraphon(first, second, float(weight))


def sample_graph(w: Graphon, n: int, seed: SeedLike = None) -> tuple[Graph, np.ndarray]:
    """Draw a W-random graph on ``n`` nodes; returns the graph and its latents."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = make_rng(seed)
    latents = rng.random(n)
    iu, ju = np.triu_indices(n, k=1)
    coins = rng.random(len(iu))
    keep = coins < w(latents[iu], latents[ju])
    graph = Graph(n, np.column_stack([iu[keep], ju[keep]]))
    latents.setflags(write=False)
    return graph, latents


# --------------------------------------------------------------------------
# homomorphism densities


_LETTERS = "abcdefghij"


def _contract(matrix: np.ndarray, f: Motif) -> float:
    spec = ",".join(_LETTERS[u] + _LETTERS[v] for u, v in f.edges) + "->"
    total = np.einsum(spec, *([matrix] * f.edge_count), optimize="greedy")
    return float(total) / matrix.shape[0] ** f.vertex_count


def quadrature_density(w: Graphon, f: Motif, grid: int = 64) -> float:
    """Midpoint-rule value of the homomorphism integral on a ``grid^k`` mesh.

    Step graphons (and mixtures of equal-resolution step graphons) are
    integrated exactly on their own cells instead.
    """
    if f.vertex_count > 4:
        raise ValueError("quadrature is limited to motifs with at most 4 vertices; "
                         "use method='monte_carlo'")
    if grid < 1:
        raise ValueError("grid must be positive")
    cells = w.cell_values()
    matrix = cells if cells is not None else w.grid(grid)
    return min(max(_contract(matrix, f), 0.0), 1.0)


def monte_carlo_density(
    w: Graphon, f: Motif, samples: int = 1_000_000, seed: SeedLike = 0, chunk: int = 1_000_000
) -> tuple[float, float]:
    """Sample mean of the edge product over uniform vertex positions, with
    its standard error."""
    if samples < 2:
        raise ValueError("need at least two Monte Carlo samples")
    rng = make_rng(seed)
    total = total_sq = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        eta = rng.random((f.vertex_count, m))
        prod = np.ones(m)
        for u, v in f.edges:
            prod *= w(eta[u], eta[v])
        total += prod.sum()
        total_sq += prod @ prod
        done += m
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return mean, float(np.sqrt(var / samples))


def hom_density(
    w: Graphon, f: Motif, method: str = "quadrature", budget: int | None = None, seed: SeedLike = 0
) -> float:
    if method == "quadrature":
        return quadrature_density(w, f, budget or 64)
    if method == "monte_carlo":
        return monte_carlo_density(w, f, budget or 1_000_000, seed)[0]
    raise ValueError(f"unknown method {method!r}")


def theoretical_moment_vector(
    w: Graphon, family, method: str = "quadrature", budget: int | None = None, seed: SeedLike = 0
) -> MomentVector:
    vals = np.array([hom_density(w, f, method, budget, seed) for f in family])
    vals.setflags(write=False)
    return MomentVector(vals, tuple(f.id for f in family), (False,) * len(family))
