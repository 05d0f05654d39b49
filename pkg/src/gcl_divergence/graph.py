"""Simple undirected graphs, edge-list I/O and dataset preprocessing.

Vertices are dense indices ``0..n-1``; the external labels read from an
edge list are kept in a side table (``Graph.labels``).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph.

    Parameters
    ----------
    labels : tuple of str
        External vertex identifiers, indexed by internal vertex index.
    neighbors : tuple of tuple of int
        Sorted neighbor indices for every vertex.
    """

    labels: tuple[str, ...]
    neighbors: tuple[tuple[int, ...], ...]
    edge_count: int = field(init=False)

    def __post_init__(self):
        if len(self.labels) != len(self.neighbors):
            raise ValueError("labels and neighbors must have the same length")
        total = sum(len(nb) for nb in self.neighbors)
        if total % 2:
            raise ValueError("adjacency is not symmetric")
        object.__setattr__(self, "edge_count", total // 2)

    @classmethod
    def from_edges(cls, labels: Sequence[str], edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from index pairs, dropping loops and duplicates."""
        n = len(labels)
        adj: list[set[int]] = [set() for _ in range(n)]
        for i, j in edges:
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                continue
            adj[i].add(j)
            adj[j].add(i)
        return cls(tuple(str(x) for x in labels), tuple(tuple(sorted(a)) for a in adj))

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f"unknown vertex {label!r}") from None

    @property
    def _label_index(self) -> dict[str, int]:
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = {lab: i for i, lab in enumerate(self.labels)}
            object.__setattr__(self, "_index_cache", cache)
        return cache

    def edges(self) -> np.ndarray:
        """Return an ``(m, 2)`` int array of edges with ``i < j``, sorted."""
        out = [(i, j) for i, nb in enumerate(self.neighbors) for j in nb if i < j]
        return np.array(out, dtype=np.int64).reshape(-1, 2)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        e = self.edges()
        a[e[:, 0], e[:, 1]] = 1.0
        a[e[:, 1], e[:, 0]] = 1.0
        return a

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors[i]
        k = np.searchsorted(nb, j)
        return k < len(nb) and nb[k] == j

    def subgraph(self, vertices: Sequence[int]) -> "Graph":
        """Vertex-induced subgraph; vertex order follows ``vertices``."""
        keep = {v: k for k, v in enumerate(vertices)}
        edges = [
            (keep[i], keep[j])
            for i in vertices
            for j in self.neighbors[i]
            if j in keep and i < j
        ]
        return Graph.from_edges([self.labels[v] for v in vertices], edges)

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.edge_count, "edges": self.edges().tolist()}

    def to_edge_list(self) -> str:
        return "".join(f"{self.labels[i]} {self.labels[j]}\n" for i, j in self.edges())


def parse_edge_list(text: str | TextIO, directed_hint: bool = False) -> Graph:
    """Parse a whitespace-separated edge list into a simple undirected graph.

    Lines starting with ``#`` and blank lines are skipped.  Self-loops and
    repeated edges are dropped; with ``directed_hint`` the arcs ``u v`` and
    ``v u`` collapse to one unweighted edge, which is what happens anyway,
    so the flag only documents intent.
    """
    if not isinstance(text, str):
        text = text.read()
    labels: list[str] = []
    index: dict[str, int] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise InputError(f"line {lineno}: expected 2 vertex tokens, got {len(tokens)}")
        ids = []
        for tok in tokens:
            if tok not in index:
                index[tok] = len(labels)
                labels.append(tok)
            ids.append(index[tok])
        edges.append((ids[0], ids[1]))
    return Graph.from_edges(labels, edges)


def read_edge_list(path, directed_hint: bool = False) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, directed_hint=directed_hint)


def write_graph_json(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(g.to_json(), fh)


def degree_sequence(g: Graph) -> np.ndarray:
    return np.array([len(nb) for nb in g.neighbors], dtype=np.int64)


def connected_components(g: Graph) -> list[list[int]]:
    """Components in order of their smallest vertex index, each sorted."""
    seen = np.zeros(g.n, dtype=bool)
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.neighbors[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n > 0 and len(connected_components(g)) == 1


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component.

    Ties go to the component holding the smallest vertex index.
    """
    if g.n == 0:
        raise InputError("graph is empty")
    comps = connected_components(g)
    # max() keeps the first maximal element, and comps are ordered by min index
    best = max(comps, key=len)
    return g.subgraph(best)
