"""Connected motifs on up to five vertices and their densities in graphs.

Densities are injective (non-induced) homomorphism densities::

    t(F, G) = inj(F, G) / n(n-1)...(n-k+1) = |Aut(F)| * copies(F, G) / (n)_k

Three independent routes compute ``inj(F, G)``:

* :func:`injective_counts_k4` -- closed-form combinatorial identities for all
  nine motifs on at most four vertices (degrees, codegrees, triangles per
  vertex, and cliques inside oriented neighbourhoods);
* :func:`injective_count_via_homs` -- homomorphism counts by tensor
  contraction followed by Moebius inversion over the partition lattice; exact
  and used for five-vertex motifs;
* :func:`brute_force_density` -- backtracking enumeration of ordered vertex
  tuples, the reference oracle.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .graphs import Graph


class DegenerateGraphWarning(UserWarning):
    """A graph has fewer nodes than the motif; its density is set to 0."""


@dataclass(frozen=True)
class Motif:
    id: int
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    automorphism_count: int
    code: int
    name: str = ""

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)


def _pair_index(k: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


def _code(edge_set: frozenset, k: int) -> int:
    # most significant bit first, pairs in row-major upper-triangle order
    code = 0
    for pair in _pair_index(k):
        code = (code << 1) | (pair in edge_set)
    return code


def _connected(k: int, edges: Iterable[tuple[int, int]]) -> bool:
    nbrs = {v: set() for v in range(k)}
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        for w in nbrs[stack.pop()] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == k


def _permute(edges, perm) -> frozenset:
    return frozenset(tuple(sorted((perm[u], perm[v]))) for u, v in edges)


_NAMES = {
    (2, 1, (1, 1)): "edge",
    (3, 2, (1, 1, 2)): "path3",
    (3, 3, (2, 2, 2)): "triangle",
    (4, 3, (1, 1, 2, 2)): "path4",
    (4, 3, (1, 1, 1, 3)): "star3",
    (4, 4, (2, 2, 2, 2)): "cycle4",
    (4, 4, (1, 2, 2, 3)): "paw",
    (4, 5, (2, 2, 3, 3)): "diamond",
    (4, 6, (3, 3, 3, 3)): "clique4",
}


@lru_cache(maxsize=None)
def _connected_patterns(k: int) -> tuple[tuple[int, tuple, int], ...]:
    """All connected graphs on ``k`` vertices as (code, edges, |Aut|)."""
    pairs = _pair_index(k)
    perms = list(itertools.permutations(range(k)))
    found: dict[int, tuple] = {}
    for mask in range(1, 1 << len(pairs)):
        edges = [pairs[b] for b in range(len(pairs)) if mask >> b & 1]
        if not _connected(k, edges):
            continue
        images = [_permute(edges, p) for p in perms]
        best = max(images, key=lambda s: _code(s, k))
        code = _code(best, k)
        if code in found:
            continue
        original = frozenset(edges)
        aut = sum(1 for s in images if s == original)
        found[code] = (tuple(sorted(best)), aut)
    return tuple(
        sorted(((code, e, a) for code, (e, a) in found.items()), key=lambda r: (len(r[1]), r[0]))
    )


@lru_cache(maxsize=None)
def _family(max_k: int) -> tuple[Motif, ...]:
    out = []
    for k in range(2, max_k + 1):
        for code, edges, aut in _connected_patterns(k):
            deg = [0] * k
            for u, v in edges:
                deg[u] += 1
                deg[v] += 1
            name = _NAMES.get((k, len(edges), tuple(sorted(deg))), f"k{k}_{code}")
            out.append(Motif(len(out), k, edges, aut, code, name))
    return tuple(out)


def motif_family(max_k: int = 4) -> list[Motif]:
    """Connected motifs with 2..max_k vertices ordered by (k, e(F), code).

    ``code`` is the largest upper-triangle adjacency bit string over vertex
    relabelings. ``max_k=4`` gives 9 motifs, ``max_k=5`` gives 30.
    """
    if max_k not in (4, 5):
        raise ValueError(f"max_k must be 4 or 5, got {max_k}")
    return list(_family(max_k))


def falling_factorial(n: int, k: int) -> int:
    return math.perm(n, k) if n >= k else 0


# --------------------------------------------------------------------------
# fast exact counts for k <= 4


def _as_float(g: Graph) -> np.ndarray:
    return g.adjacency.astype(np.float64)


def _cliques_in_oriented_neighbourhoods(a: np.ndarray, deg: np.ndarray) -> int:
    # orient each edge towards the endpoint later in (degree, id) order;
    # every K4 is counted once at its earliest vertex
    order = np.lexsort((np.arange(len(deg)), deg))
    b = a[np.ix_(order, order)]
    total = 0.0
    for v in range(len(order) - 3):
        out = np.flatnonzero(b[v, v + 1:]) + v + 1
        if len(out) < 3:
            continue
        sub = b[np.ix_(out, out)]
        total += float(np.sum((sub @ sub) * sub))
    return int(round(total)) // 6


def injective_counts_k4(g: Graph) -> dict[str, int]:
    """Injective homomorphism counts of the nine motifs on <= 4 vertices."""
    n = g.node_count
    if n == 0 or g.edge_count == 0:
        return {name: 0 for name in _NAMES.values()}
    a = _as_float(g)
    deg = a.sum(axis=1)
    a2 = a @ a
    a3_diag = np.einsum("ij,ji->i", a2, a)  # (A^3)_vv = 2 * triangles at v
    iu, ju = g.edges[:, 0], g.edges[:, 1]
    codeg_edges = a2[iu, ju]

    tri_inj = a3_diag.sum()  # ordered triangles = 6 T
    offdiag = a2.copy()
    np.fill_diagonal(offdiag, 0.0)

    counts = {
        "edge": 2 * g.edge_count,
        "path3": deg @ (deg - 1),
        "triangle": tri_inj,
        "star3": deg @ ((deg - 1) * (deg - 2)),
        "path4": 2 * ((deg[iu] - 1) @ (deg[ju] - 1)) - tri_inj,
        "cycle4": np.sum(offdiag * (offdiag - 1)),
        "paw": a3_diag @ (deg - 2),
        "diamond": 2 * (codeg_edges @ (codeg_edges - 1)),
        "clique4": 24 * _cliques_in_oriented_neighbourhoods(a, deg),
    }
    return {name: int(round(float(v))) for name, v in counts.items()}


# --------------------------------------------------------------------------
# homomorphism contraction + Moebius inversion (any k, used for k = 5)


def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@lru_cache(maxsize=None)
def _moebius_terms(k: int, edges: tuple) -> tuple[tuple[int, int, tuple], ...]:
    """(coefficient, quotient vertex count, quotient edges) for each partition
    of V(F) into independent sets; other partitions create loops and vanish."""
    terms: dict[tuple, int] = {}
    for part in _set_partitions(list(range(k))):
        block = {}
        for b, members in enumerate(part):
            for v in members:
                block[v] = b
        if any(block[u] == block[v] for u, v in edges):
            continue
        coeff = 1
        for members in part:
            s = len(members)
            coeff *= (-1) ** (s - 1) * math.factorial(s - 1)
        q_edges = tuple(sorted({tuple(sorted((block[u], block[v]))) for u, v in edges}))
        key = (len(part), q_edges)
        terms[key] = terms.get(key, 0) + coeff
    return tuple((c, kq, e) for (kq, e), c in terms.items() if c)


_LETTERS = "abcdefghij"


def _hom_count(a: np.ndarray, k: int, edges: tuple) -> int:
    if not edges:
        return a.shape[0] ** k
    spec = ",".join(_LETTERS[u] + _LETTERS[v] for u, v in edges) + "->"
    return int(round(float(np.einsum(spec, *([a] * len(edges)), optimize="greedy"))))


def injective_count_via_homs(g: Graph, f: Motif) -> int:
    a = _as_float(g)
    total = 0
    for coeff, kq, q_edges in _moebius_terms(f.vertex_count, f.edges):
        total += coeff * _hom_count(a, kq, q_edges)
    return total


# --------------------------------------------------------------------------
# densities


def _degenerate(g: Graph, f: Motif) -> bool:
    if g.node_count < f.vertex_count:
        warnings.warn(
            f"graph with {g.node_count} nodes is smaller than motif {f.name} "
            f"({f.vertex_count} vertices); density set to 0",
            DegenerateGraphWarning,
            stacklevel=3,
        )
        return True
    return False


def injective_count(g: Graph, f: Motif) -> int:
    if f.vertex_count <= 4:
        return injective_counts_k4(g)[f.name]
    return injective_count_via_homs(g, f)


def empirical_density(g: Graph, f: Motif) -> float:
    if _degenerate(g, f):
        return 0.0
    return injective_count(g, f) / falling_factorial(g.node_count, f.vertex_count)


def brute_force_count(g: Graph, f: Motif, max_nodes: int = 200) -> int:
    """Number of ordered tuples of distinct nodes realising every motif edge."""
    if f.vertex_count > 5:
        raise ValueError("brute force supports motifs with at most 5 vertices")
    if g.node_count > max_nodes:
        raise ValueError(f"graph has {g.node_count} nodes, cap is {max_nodes}")
    nbrs = [set() for _ in range(g.node_count)]
    for u, v in g.edges.tolist():
        nbrs[u].add(v)
        nbrs[v].add(u)
    # for each motif vertex, the earlier motif vertices it must be adjacent to
    back = [[u for u in range(i) if (u, i) in f.edges] for i in range(f.vertex_count)]
    count = 0
    image = []

    def extend(i):
        nonlocal count
        if i == f.vertex_count:
            count += 1
            return
        for x in range(g.node_count):
            if x in image:
                continue
            if all(x in nbrs[image[u]] for u in back[i]):
                image.append(x)
                extend(i + 1)
                image.pop()

    extend(0)
    return count


def brute_force_density(g: Graph, f: Motif, max_nodes: int = 200) -> float:
    count = brute_force_count(g, f, max_nodes)
    if g.node_count < f.vertex_count:
        return 0.0
    return float(Fraction(count, falling_factorial(g.node_count, f.vertex_count)))


@dataclass(frozen=True)
class MomentVector:
    values: np.ndarray
    motif_ids: tuple[int, ...]
    degenerate: tuple[bool, ...] = field(default=())

    def __len__(self):
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def moment_vector(g: Graph, family: Sequence[Motif]) -> MomentVector:
    """Densities of every motif in ``family``, in family order."""
    values = np.zeros(len(family))
    flags = []
    small = None
    for i, f in enumerate(family):
        if g.node_count < f.vertex_count:
            flags.append(True)
            continue
        flags.append(False)
        if f.vertex_count <= 4:
            if small is None:
                small = injective_counts_k4(g)
            count = small[f.name]
        else:
            count = injective_count_via_homs(g, f)
        values[i] = count / falling_factorial(g.node_count, f.vertex_count)
    if any(flags):
        warnings.warn(
            f"graph with {g.node_count} nodes is smaller than some motifs; "
            "those densities are 0",
            DegenerateGraphWarning,
            stacklevel=2,
        )
    values.setflags(write=False)
    return MomentVector(values, tuple(f.id for f in family), tuple(flags))


def moment_matrix(
    graphs: Sequence[Graph], family: Sequence[Motif], n_jobs: int = 1
) -> np.ndarray:
    """Stack of moment vectors, one row per graph (order preserved)."""
    if n_jobs == 1:
        rows = [moment_vector(g, family).values for g in graphs]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            rows = [mv.values for mv in pool.map(moment_vector, graphs,
                                                 itertools.repeat(family))]
    return np.vstack(rows) if rows else np.zeros((0, len(family)))


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def moments_to_csv(matrix: np.ndarray, family: Sequence[Motif]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"m{f.id}_{f.name}" for f in family])
    for row in np.atleast_2d(matrix):
        w.writerow([format_float(x) for x in row])
    return buf.getvalue()
