"""Simple undirected graphs, labeled datasets, and text-format parsers.

Two input formats are supported:

* edge lists: one ``u v`` pair per line, ``#`` starts a comment line;
* the TU raw format: ``DS_A.txt`` (comma separated 1-based global node pairs),
  ``DS_graph_indicator.txt`` (graph id per node) and ``DS_graph_labels.txt``.

Self-loops and repeated edges are dropped on ingest and counted in a
:class:`ParseDiagnostics` record when one is supplied.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class GraphFormatError(ValueError):
    """Raised for malformed or inconsistent graph input."""


@dataclass
class ParseDiagnostics:
    self_loops: int = 0
    duplicate_edges: int = 0

    def merge(self, other: "ParseDiagnostics") -> None:
        self.self_loops += other.self_loops
        self.duplicate_edges += other.duplicate_edges


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph on nodes ``0..node_count-1``.

    ``edges`` is an ``(E, 2)`` integer array of pairs ``u < v`` in
    lexicographic order without repeats. Use :meth:`from_edges` to build one
    from arbitrary pair input.
    """

    node_count: int
    edges: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if self.node_count < 0:
            raise GraphFormatError("node_count must be nonnegative")
        if len(edges):
            if np.any(edges[:, 0] >= edges[:, 1]):
                raise GraphFormatError("edges must satisfy u < v (no self-loops)")
            if edges.min() < 0 or edges.max() >= self.node_count:
                raise GraphFormatError("edge endpoint out of range")
            keys = edges[:, 0] * max(self.node_count, 1) + edges[:, 1]
            if np.any(np.diff(keys) <= 0):
                raise GraphFormatError("edges must be sorted and unique")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        pairs: Iterable[tuple[int, int]] | np.ndarray,
        diagnostics: ParseDiagnostics | None = None,
    ) -> "Graph":
        arr = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs,
                         dtype=np.int64).reshape(-1, 2)
        loops = arr[:, 0] == arr[:, 1]
        arr = np.sort(arr[~loops], axis=1)
        if len(arr) and (arr.min() < 0 or arr.max() >= node_count):
            raise GraphFormatError("edge endpoint out of range")
        uniq = np.unique(arr, axis=0) if len(arr) else arr
        if diagnostics is not None:
            diagnostics.self_loops += int(loops.sum())
            diagnostics.duplicate_edges += len(arr) - len(uniq)
        return cls(node_count, uniq)

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "Graph":
        adj = np.asarray(adj)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise GraphFormatError("adjacency must be square")
        iu, ju = np.nonzero(np.triu(adj, k=1))
        return cls(adj.shape[0], np.column_stack([iu, ju]))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        iu, ju = np.triu_indices(n, k=1)
        return cls(n, np.column_stack([iu, ju]))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros((0, 2), dtype=np.int64))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense symmetric 0/1 adjacency (read-only, uint8)."""
        a = np.zeros((self.node_count, self.node_count), dtype=np.uint8)
        if len(self.edges):
            a[self.edges[:, 0], self.edges[:, 1]] = 1
            a[self.edges[:, 1], self.edges[:, 0]] = 1
        a.setflags(write=False)
        return a

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i, j])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with node ``i`` renamed to ``perm[i]``."""
        p = np.asarray(perm, dtype=np.int64)
        return Graph.from_edges(self.node_count, p[self.edges])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.node_count, self.edges.tobytes()))

    def __repr__(self):
        return f"Graph(node_count={self.node_count}, edge_count={self.edge_count})"


def degree_sequence(g: Graph) -> list[int]:
    deg = np.zeros(g.node_count, dtype=np.int64)
    if g.edge_count:
        np.add.at(deg, g.edges.ravel(), 1)
    return deg.tolist()


@dataclass(frozen=True)
class LabeledDataset:
    graphs: tuple[Graph, ...]
    labels: tuple[int, ...] | None = None
    class_count: int = 0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        if self.labels is not None:
            labels = tuple(int(y) for y in self.labels)
            if len(labels) != len(self.graphs):
                raise GraphFormatError("labels and graphs differ in length")
            if labels and (min(labels) < 1 or max(labels) > self.class_count):
                raise GraphFormatError("labels must lie in 1..class_count")
            object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.graphs)

    def by_class(self) -> dict[int, list[int]]:
        """Map class index to the positions of its graphs."""
        if self.labels is None:
            raise GraphFormatError("dataset is unlabeled")
        out: dict[int, list[int]] = {c: [] for c in range(1, self.class_count + 1)}
        for t, y in enumerate(self.labels):
            out[y].append(t)
        return out


# --------------------------------------------------------------------------
# edge-list text format


def parse_edge_list(
    text: str | Iterable[str],
    node_count: int | None = None,
    diagnostics: ParseDiagnostics | None = None,
) -> Graph:
    lines = text.splitlines() if isinstance(text, str) else text
    pairs = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer token in {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative node index")
        if node_count is not None and max(u, v) >= node_count:
            raise GraphFormatError(
                f"line {lineno}: node index {max(u, v)} >= node_count {node_count}"
            )
        pairs.append((u, v))
    if node_count is None:
        node_count = 1 + max((max(p) for p in pairs), default=-1)
    diag = diagnostics if diagnostics is not None else ParseDiagnostics()
    return Graph.from_edges(node_count, pairs, diag)


def format_edge_list(g: Graph) -> str:
    lines = [f"# node_count {g.node_count}"]
    lines += [f"{u} {v}" for u, v in g.edges.tolist()]
    return "\n".join(lines) + "\n"


def read_edge_list(path: str | Path, node_count: int | None = None) -> Graph:
    """Read an edge-list file, honouring a ``# node_count N`` header."""
    text = Path(path).read_text()
    if node_count is None:
        for line in text.splitlines():
            parts = line.strip().lstrip("#").split()
            if line.startswith("#") and len(parts) == 2 and parts[0] == "node_count":
                node_count = int(parts[1])
                break
    return parse_edge_list(text, node_count)


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))


# --------------------------------------------------------------------------
# TU raw format


def _read_int_column(path: Path) -> np.ndarray:
    vals = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            vals.append(int(line))
        except ValueError:
            raise GraphFormatError(f"{path.name}:{lineno}: expected one integer") from None
    return np.asarray(vals, dtype=np.int64)


def parse_tu_dataset(
    directory: str | Path,
    name: str,
    diagnostics: ParseDiagnostics | None = None,
) -> LabeledDataset:
    directory = Path(directory)
    files = {
        key: directory / f"{name}_{key}.txt" for key in ("A", "graph_indicator", "graph_labels")
    }
    for path in files.values():
        if not path.exists():
            raise FileNotFoundError(path)

    indicator = _read_int_column(files["graph_indicator"])
    raw_labels = _read_int_column(files["graph_labels"])
    graph_count = int(indicator.max()) if len(indicator) else 0
    if len(raw_labels) != graph_count:
        raise GraphFormatError(
            f"{len(raw_labels)} graph labels for {graph_count} graphs in indicator"
        )
    if len(indicator) and np.any(np.diff(indicator) < 0):
        raise GraphFormatError("graph indicator must be non-decreasing")

    pairs = []
    for lineno, raw in enumerate(files["A"].read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = [tok.strip() for tok in line.split(",")]
        if len(tokens) != 2:
            raise GraphFormatError(f"{files['A'].name}:{lineno}: expected 'u, v'")
        try:
            pairs.append((int(tokens[0]), int(tokens[1])))
        except ValueError:
            raise GraphFormatError(f"{files['A'].name}:{lineno}: non-integer token") from None
    pairs_arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2) - 1
    if len(pairs_arr) and (pairs_arr.min() < 0 or pairs_arr.max() >= len(indicator)):
        raise GraphFormatError("edge references a node missing from the indicator file")

    # global 0-based node -> (graph, local index)
    gid = indicator - 1
    starts = np.searchsorted(gid, np.arange(graph_count))
    sizes = np.bincount(gid, minlength=graph_count)
    local = np.arange(len(gid)) - starts[gid]

    edge_gid = gid[pairs_arr[:, 0]] if len(pairs_arr) else np.zeros(0, dtype=np.int64)
    if len(pairs_arr) and np.any(edge_gid != gid[pairs_arr[:, 1]]):
        bad = int(np.argmax(edge_gid != gid[pairs_arr[:, 1]]))
        raise GraphFormatError(f"edge {bad + 1} joins nodes of different graphs")

    order = np.argsort(edge_gid, kind="stable")
    bounds = np.searchsorted(edge_gid[order], np.arange(graph_count + 1))
    diag = diagnostics if diagnostics is not None else ParseDiagnostics()
    graphs = []
    for t in range(graph_count):
        idx = order[bounds[t]:bounds[t + 1]]
        graphs.append(Graph.from_edges(int(sizes[t]), local[pairs_arr[idx]], diag))

    distinct = sorted(set(raw_labels.tolist()))
    remap = {lab: i + 1 for i, lab in enumerate(distinct)}
    labels = [remap[lab] for lab in raw_labels.tolist()]
    return LabeledDataset(tuple(graphs), tuple(labels), len(distinct), name)


def write_tu_dataset(dataset: LabeledDataset, directory: str | Path, name: str) -> None:
    """Write ``dataset`` in the TU raw format (inverse of :func:`parse_tu_dataset`)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    a_lines, ind_lines = [], []
    offset = 0
    for t, g in enumerate(dataset.graphs, start=1):
        ind_lines += [str(t)] * g.node_count
        for u, v in g.edges.tolist():
            a_lines.append(f"{u + offset + 1}, {v + offset + 1}")
            a_lines.append(f"{v + offset + 1}, {u + offset + 1}")
        offset += g.node_count
    labels = dataset.labels or (1,) * len(dataset.graphs)
    (directory / f"{name}_A.txt").write_text("\n".join(a_lines) + "\n")
    (directory / f"{name}_graph_indicator.txt").write_text("\n".join(ind_lines) + "\n")
    (directory / f"{name}_graph_labels.txt").write_text("\n".join(map(str, labels)) + "\n")
