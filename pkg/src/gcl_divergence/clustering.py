"""Graph clustering: Louvain, ECG consensus, and partition diagnostics.

The Louvain implementation works on weighted graphs so the ECG consensus
stage can reuse it.  Randomness enters only through the vertex visiting
order, drawn from a ``numpy.random.Generator`` seeded by the caller.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .errors import InputError
from .graph import Graph

W_MIN = 0.05
ENSEMBLE_SIZE = 16
_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Partition:
    """Disjoint clusters of the vertex set.

    ``assignment[v]`` is the cluster of vertex ``v``; cluster indices are
    ``0..cluster_count-1`` and every cluster is non-empty.
    """

    assignment: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64).copy()
        if a.ndim != 1 or a.size == 0:
            raise InputError("partition must assign at least one vertex")
        if a.min() < 0 or np.unique(a).size != a.max() + 1:
            raise InputError("cluster indices must cover 0..l-1 without gaps")
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Relabel arbitrary cluster ids to 0..l-1 in first-appearance order."""
        mapping: dict = {}
        out = [mapping.setdefault(lab, len(mapping)) for lab in labels]
        return cls(np.array(out, dtype=np.int64))

    @property
    def cluster_count(self) -> int:
        return int(self.assignment.max()) + 1

    @property
    def n(self) -> int:
        return self.assignment.size

    def clusters(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.assignment == c) for c in range(self.cluster_count)]

    def indicator(self) -> np.ndarray:
        """``(n, l)`` 0/1 membership matrix."""
        z = np.zeros((self.n, self.cluster_count))
        z[np.arange(self.n), self.assignment] = 1.0
        return z

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.assignment, other.assignment)

    def __hash__(self):
        return hash(self.assignment.tobytes())


# ---------------------------------------------------------------------------
# Louvain


def _one_level(nbrs, k, m2, rng):
    """Local moving phase; returns canonical community labels per node."""
    n = len(nbrs)
    comm = np.arange(n)
    tot = k.astype(float).copy()
    while True:
        moved = False
        for i in rng.permutation(n):
            ci = comm[i]
            links = defaultdict(float)
            for j, w in nbrs[i].items():
                links[comm[j]] += w
            tot[ci] -= k[i]
            best_c = ci
            best_gain = links.get(ci, 0.0) - tot[ci] * k[i] / m2
            for c in sorted(links):
                gain = links[c] - tot[c] * k[i] / m2
                if gain > best_gain + _TOL:
                    best_c, best_gain = c, gain
            comm[i] = best_c
            tot[best_c] += k[i]
            if best_c != ci:
                moved = True
        if not moved:
            break
    _, first = np.unique(comm, return_index=True)
    order = np.argsort(np.argsort(first))
    return order[np.searchsorted(np.unique(comm), comm)]


def _aggregate(nbrs, loops, comm, count):
    new_nbrs = [defaultdict(float) for _ in range(count)]
    new_loops = np.zeros(count)
    for i, nb in enumerate(nbrs):
        ci = comm[i]
        new_loops[ci] += loops[i]
        for j, w in nb.items():
            cj = comm[j]
            if ci == cj:
                new_loops[ci] += w / 2.0  # each internal edge is seen from both ends
            else:
                new_nbrs[ci][cj] += w
    return [dict(d) for d in new_nbrs], new_loops


def _weighted_adjacency(g: Graph, weights):
    edges = g.edges()
    if weights is None:
        weights = np.ones(len(edges))
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(edges),):
        raise InputError("need one weight per edge, aligned with Graph.edges()")
    if np.any(weights <= 0):
        raise InputError("edge weights must be positive")
    nbrs = [dict() for _ in range(g.n)]
    for (i, j), w in zip(edges, weights):
        nbrs[i][j] = w
        nbrs[j][i] = w
    return nbrs


def _louvain(g: Graph, weights, rng, single_level: bool) -> Partition:
    if g.edge_count == 0:
        raise InputError("Louvain needs at least one edge")
    nbrs = _weighted_adjacency(g, weights)
    loops = np.zeros(g.n)
    membership = np.arange(g.n)
    while True:
        k = np.array([sum(nb.values()) for nb in nbrs]) + 2.0 * loops
        comm = _one_level(nbrs, k, k.sum(), rng)
        count = int(comm.max()) + 1
        if count == len(nbrs):
            break
        membership = comm[membership]
        if single_level:
            break
        nbrs, loops = _aggregate(nbrs, loops, comm, count)
    return Partition.from_labels(membership)


def louvain(g: Graph, seed: int = 0, weights=None) -> Partition:
    """Multi-level modularity optimisation.

    Parameters
    ----------
    g : Graph
    seed : int
        Seeds the vertex visiting order; equal seeds give equal partitions.
    weights : array-like, optional
        Positive edge weights aligned with ``g.edges()``.

    Notes
    -----
    A vertex only moves when the gain beats staying put; among equally good
    targets the lowest community index wins.
    """
    return _louvain(g, weights, np.random.default_rng(seed), single_level=False)


def louvain_one_level(g: Graph, seed: int = 0, weights=None) -> Partition:
    """Only the first local-moving phase of Louvain (the ECG ensemble member)."""
    return _louvain(g, weights, np.random.default_rng(seed), single_level=True)


def _two_core_mask(g: Graph) -> np.ndarray:
    deg = np.array([len(nb) for nb in g.neighbors])
    alive = np.ones(g.n, dtype=bool)
    stack = list(np.flatnonzero(deg < 2))
    alive[stack] = False
    while stack:
        u = stack.pop()
        for v in g.neighbors[u]:
            if alive[v]:
                deg[v] -= 1
                if deg[v] < 2:
                    alive[v] = False
                    stack.append(v)
    return alive


def _seed_streams(seed: int, count: int):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def ecg_weights(g: Graph, ensemble_size: int = ENSEMBLE_SIZE, seed: int = 0,
                w_min: float = W_MIN) -> np.ndarray:
    """Consensus edge weights from an ensemble of one-level Louvain passes.

    Edges inside the 2-core get ``w_min + (1 - w_min) * votes / ensemble_size``;
    every other edge (trees hanging off the core, bridges to leaves) keeps
    ``w_min``.  Votes are summed per edge, so the result does not depend on
    the order in which passes finish.
    """
    if ensemble_size < 1:
        raise InputError("ensemble_size must be at least 1")
    if g.edge_count == 0:
        raise InputError("ECG needs at least one edge")
    edges = g.edges()
    votes = np.zeros(len(edges))
    for rng in _seed_streams(seed, ensemble_size + 1)[:ensemble_size]:
        a = _louvain(g, None, rng, single_level=True).assignment
        votes += a[edges[:, 0]] == a[edges[:, 1]]
    core = _two_core_mask(g)
    in_core = core[edges[:, 0]] & core[edges[:, 1]]
    return np.where(in_core, w_min + (1.0 - w_min) * votes / ensemble_size, w_min)


def ecg(g: Graph, ensemble_size: int = ENSEMBLE_SIZE, seed: int = 0,
        w_min: float = W_MIN) -> Partition:
    """Ensemble clustering for graphs: Louvain on consensus-reweighted edges."""
    weights = ecg_weights(g, ensemble_size, seed, w_min)
    final_rng = _seed_streams(seed, ensemble_size + 1)[ensemble_size]
    return _louvain(g, weights, final_rng, single_level=False)


# ---------------------------------------------------------------------------
# Diagnostics


def _check(g: Graph, p: Partition):
    if p.n != g.n:
        raise InputError(f"partition covers {p.n} vertices, graph has {g.n}")


def modularity(g: Graph, p: Partition, weights=None) -> float:
    """Newman modularity ``sum_c (L_c / m - (vol_c / 2m)^2)``."""
    _check(g, p)
    edges = g.edges()
    w = np.ones(len(edges)) if weights is None else np.asarray(weights, dtype=float)
    m = w.sum()
    if m == 0:
        return 0.0
    a = p.assignment
    ell = p.cluster_count
    internal = np.bincount(a[edges[:, 0]], weights=w * (a[edges[:, 0]] == a[edges[:, 1]]),
                           minlength=ell)
    vol = np.bincount(a[edges[:, 0]], weights=w, minlength=ell)
    vol += np.bincount(a[edges[:, 1]], weights=w, minlength=ell)
    return float(np.sum(internal / m - (vol / (2.0 * m)) ** 2))


def community_strength(g: Graph, p: Partition) -> np.ndarray:
    """Internal degree over total degree, per cluster.

    A cluster whose ratio exceeds 0.5 is a weak community in the
    Radicchi/Barabasi sense.  Clusters with no incident edges get 0.
    """
    _check(g, p)
    edges = g.edges()
    a = p.assignment
    ell = p.cluster_count
    same = a[edges[:, 0]] == a[edges[:, 1]]
    internal_deg = 2.0 * np.bincount(a[edges[same, 0]], minlength=ell)
    cross = edges[~same]
    external_deg = (np.bincount(a[cross[:, 0]], minlength=ell)
                    + np.bincount(a[cross[:, 1]], minlength=ell)).astype(float)
    total = internal_deg + external_deg
    return np.divide(internal_deg, total, out=np.zeros(ell), where=total > 0)


# ---------------------------------------------------------------------------
# Partition files


def parse_partition(text: str | TextIO, g: Graph) -> Partition:
    """Read ``label cluster_id`` lines; every graph vertex must appear."""
    if not isinstance(text, str):
        text = text.read()
    found = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise InputError(f"line {lineno}: expected 'label cluster_id'")
        found[tokens[0]] = tokens[1]
    missing = [lab for lab in g.labels if lab not in found]
    if missing:
        raise InputError(f"vertex {missing[0]} has no cluster")
    return Partition.from_labels([found[lab] for lab in g.labels])


def read_partition(path, g: Graph) -> Partition:
    with open(path, encoding="utf-8") as fh:
        return parse_partition(fh, g)


def format_partition(p: Partition, g: Graph) -> str:
    return "".join(f"{lab} {c}\n" for lab, c in zip(g.labels, p.assignment))
