"""Undirected simple graphs in compressed adjacency form.

Nodes carry arbitrary string labels; indices are assigned by order of first
appearance in the edge list, so loading a fixed file is deterministic.
Graphs are immutable after construction and safe to share across threads;
connectivity is computed once on first use and cached.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import InputFormatError, PreconditionError


@dataclass(frozen=True)
class Graph:
    """Compressed-row adjacency of an undirected simple graph.

    indptr/indices follow the CSR convention: neighbors of node i are
    ``indices[indptr[i]:indptr[i+1]]``, sorted strictly increasing.
    Degrees are row lengths; isolated nodes are rejected at construction.
    """

    n: int
    m: int
    node_labels: tuple[str, ...]
    indptr: np.ndarray
    indices: np.ndarray
    degrees: np.ndarray
    label_index: dict[str, int] = field(repr=False)

    def __post_init__(self):
        if self.n <= 0 or self.m <= 0:
            raise InputFormatError("graph must have at least one edge")
        if self.degrees.min() < 1:
            raise InputFormatError("isolated node (degree 0) is not allowed")
        if int(self.degrees.sum()) != 2 * self.m:
            raise InputFormatError("degree sum does not match edge count")

    @cached_property
    def connected(self) -> bool:
        return int(_reach(self, 0).sum()) == self.n

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def index_of(self, label: str) -> int:
        try:
            return self.label_index[label]
        except KeyError:
            raise InputFormatError(f"unknown node label {label!r}") from None

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each edge once as (i, j) with i < j, sorted by index pair."""
        for i in range(self.n):
            for j in self.neighbors(i):
                if i < j:
                    yield i, int(j)

    def __eq__(self, other) -> bool:
        # Graphs are equal as labeled structures: index assignment is a
        # loading artifact and may legitimately differ after a round trip.
        if not isinstance(other, Graph):
            return NotImplemented
        if self.n != other.n or self.m != other.m:
            return False
        if set(self.node_labels) != set(other.node_labels):
            return False
        mine = {tuple(sorted((self.node_labels[i], self.node_labels[j]))) for i, j in self.edges()}
        theirs = {
            tuple(sorted((other.node_labels[i], other.node_labels[j]))) for i, j in other.edges()
        }
        return mine == theirs

    @staticmethod
    def from_edges(pairs: Iterable[tuple[str, str]]) -> "Graph":
        """Build a Graph from labeled edges; duplicates collapse, self-loops reject."""
        return _build(pairs)


def _build(pairs: Iterable[tuple[str, str]], lineno_of=None) -> Graph:
    labels: list[str] = []
    index: dict[str, int] = {}
    edge_set: set[tuple[int, int]] = set()

    for k, (u, v) in enumerate(pairs):
        if u == v:
            where = f" at line {lineno_of[k]}" if lineno_of else ""
            raise InputFormatError(f"self-loop on node {u!r}{where}")
        for lab in (u, v):
            if lab not in index:
                index[lab] = len(labels)
                labels.append(lab)
        a, b = index[u], index[v]
        edge_set.add((min(a, b), max(a, b)))

    if not edge_set:
        raise InputFormatError("no edges found")

    n = len(labels)
    pair_arr = np.fromiter(
        (x for ab in edge_set for x in ab), dtype=np.int64, count=2 * len(edge_set)
    ).reshape(-1, 2)
    src = np.concatenate([pair_arr[:, 0], pair_arr[:, 1]])
    dst = np.concatenate([pair_arr[:, 1], pair_arr[:, 0]])
    order = np.lexsort((dst, src))
    indices = dst[order]
    deg = np.bincount(src, minlength=n).astype(np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])

    return Graph(
        n=n,
        m=len(edge_set),
        node_labels=tuple(labels),
        indptr=indptr,
        indices=indices,
        degrees=deg,
        label_index=index,
    )


def load_edge_list(source) -> Graph:
    """Parse an edge-list text stream into a Graph.

    Accepts raw text, a Path, a file-like object, or an iterable of lines.
    Lines are "u v" with whitespace-separated labels; '#' lines and blank
    lines are ignored. Duplicate edges collapse silently; self-loops are
    errors that name the offending line.
    """
    if isinstance(source, Path):
        with open(source, "r", encoding="utf-8", newline=None) as handle:
            return load_edge_list(handle)
    if isinstance(source, str):
        lines = iter(source.splitlines())
    elif isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        lines = source
    else:
        lines = iter(source)

    pairs: list[tuple[str, str]] = []
    linenos: list[int] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise InputFormatError(f"expected 'u v' at line {lineno}, got {line!r}")
        pairs.append((tokens[0], tokens[1]))
        linenos.append(lineno)
    return _build(pairs, lineno_of=linenos)


def dump_edge_list(graph: Graph) -> str:
    """Canonical writer: one "min_label max_label" line per edge, sorted by index pair."""
    out = []
    for i, j in graph.edges():
        out.append(f"{graph.node_labels[i]} {graph.node_labels[j]}")
    return "\n".join(out) + "\n"


def write_edge_list(graph: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(dump_edge_list(graph))


def _reach(graph: Graph, start: int, member: np.ndarray | None = None) -> np.ndarray:
    """Mask of nodes reachable from `start`; restricted to `member` if given.

    Level-synchronous BFS over numpy gathers, fast enough that connectivity
    checks stay negligible next to walk simulation even at 10^5 nodes.
    """
    seen = np.zeros(graph.n, dtype=bool)
    seen[start] = True
    frontier = np.array([start], dtype=np.int64)
    indptr, indices = graph.indptr, graph.indices
    while frontier.size:
        starts = indptr[frontier]
        lens = indptr[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        prev = np.cumsum(lens) - lens
        offsets = np.repeat(starts - prev, lens) + np.arange(total)
        nbrs = indices[offsets]
        fresh = ~seen[nbrs]
        if member is not None:
            fresh &= member[nbrs]
        new = nbrs[fresh]
        if new.size == 0:
            break
        seen[new] = True
        frontier = np.unique(new)
    return seen


def is_connected(graph: Graph) -> bool:
    """True iff one breadth-first search from node 0 reaches all n nodes."""
    return graph.connected


def require_connected(graph: Graph) -> None:
    if not graph.connected:
        raise PreconditionError("graph is not connected")


def validate_node_set(graph: Graph, nodes) -> np.ndarray:
    """Normalize a node subset to a strictly increasing int64 array in [0, n)."""
    arr = np.unique(np.asarray(list(nodes), dtype=np.int64))
    if arr.size == 0:
        raise InputFormatError("node set is empty")
    if arr[0] < 0 or arr[-1] >= graph.n:
        raise InputFormatError("node set contains out-of-range indices")
    return arr


def complement_node_set(graph: Graph, nodes: np.ndarray) -> np.ndarray:
    mask = np.ones(graph.n, dtype=bool)
    mask[nodes] = False
    return np.flatnonzero(mask).astype(np.int64)


def induced_index_maps(graph: Graph, follower) -> tuple[np.ndarray, np.ndarray]:
    """Bijection between a proper nonempty subset and [0, s).

    Returns (global_to_local, local_to_global); global_to_local holds -1 for
    nodes outside the subset.
    """
    local_to_global = validate_node_set(graph, follower)
    if local_to_global.size == graph.n:
        raise InputFormatError("subset must be proper (not all of V)")
    global_to_local = np.full(graph.n, -1, dtype=np.int64)
    global_to_local[local_to_global] = np.arange(local_to_global.size, dtype=np.int64)
    return global_to_local, local_to_global


def is_connected_subset(graph: Graph, nodes) -> bool:
    """True iff the subgraph induced by `nodes` is connected."""
    nodes = validate_node_set(graph, nodes)
    member = np.zeros(graph.n, dtype=bool)
    member[nodes] = True
    seen = _reach(graph, int(nodes[0]), member=member)
    return int(seen[nodes].sum()) == nodes.size
