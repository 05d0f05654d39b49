"""Seed-deterministic synthetic graphs and embeddings for demos and tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .clustering import Partition, parse_partition
from .embedding import Embedding
from .errors import InputError
from .graph import Graph, is_connected, parse_edge_list

MAX_ATTEMPTS = 20


@dataclass(frozen=True)
class PlantedSpec:
    n: int
    clusters: int
    p_in: float
    p_out: float
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.p_out < self.p_in <= 1:
            raise InputError("need 0 <= p_out < p_in <= 1")
        if not self.n >= self.clusters >= 1:
            raise InputError("need n >= clusters >= 1")


def planted_partition(spec: PlantedSpec) -> tuple[Graph, Partition]:
    """Planted-partition graph with near-equal clusters and its ground truth.

    Disconnected draws are retried with derived seeds, up to 20 attempts.
    """
    sizes = [len(c) for c in np.array_split(np.arange(spec.n), spec.clusters)]
    truth = np.repeat(np.arange(spec.clusters), sizes)
    iu, ju = np.triu_indices(spec.n, k=1)
    prob = np.where(truth[iu] == truth[ju], spec.p_in, spec.p_out)
    labels = [str(i) for i in range(spec.n)]
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng([spec.seed, attempt])
        keep = rng.random(iu.size) < prob
        g = Graph.from_edges(labels, zip(iu[keep], ju[keep]))
        if is_connected(g):
            return g, Partition(truth)
    raise InputError(f"no connected graph in {MAX_ATTEMPTS} attempts for {spec}")


def _centers(ell: int, dim: int, separation: float) -> np.ndarray:
    if ell <= dim:
        # scaled basis vectors: every pair exactly `separation` apart
        return np.eye(ell, dim) * (separation / math.sqrt(2.0))
    side = math.ceil(ell ** (1.0 / dim))
    grid = np.stack(np.meshgrid(*[np.arange(side)] * dim, indexing="ij"), -1).reshape(-1, dim)
    return grid[:ell].astype(float) * separation


def structured_embedding(p: Partition, dim: int = 2, separation: float = 10.0,
                         spread: float = 1.0, seed: int = 0, name: str | None = None) -> Embedding:
    """Clusters as Gaussian blobs around well-separated centers (a good embedding)."""
    if dim < 2:
        raise InputError("dim must be at least 2")
    rng = np.random.default_rng(seed)
    centers = _centers(p.cluster_count, dim, separation)
    coords = centers[p.assignment] + spread * rng.standard_normal((p.n, dim))
    return Embedding(coords, name or f"structured-s{spread:g}-{seed}")


def random_embedding(n: int, dim: int = 2, seed: int = 0, name: str | None = None) -> Embedding:
    """I.i.d. uniform points in the unit cube (an embedding that ignores the graph)."""
    if dim < 1:
        raise InputError("dim must be at least 1")
    rng = np.random.default_rng(seed)
    return Embedding(rng.random((n, dim)), name or f"random-{seed}")


def spectral_embedding(g: Graph, dim: int = 2, name: str | None = None) -> Embedding:
    """Laplacian eigenmap: the ``dim`` smallest non-trivial eigenvectors of the
    symmetric normalised Laplacian, rescaled by ``D^{-1/2}``."""
    a = g.adjacency_matrix()
    deg = a.sum(axis=1)
    if np.any(deg == 0):
        raise InputError("spectral embedding needs a graph without isolated vertices")
    s = 1.0 / np.sqrt(deg)
    lap = np.eye(g.n) - s[:, None] * a * s[None, :]
    _, vecs = np.linalg.eigh(lap)
    coords = vecs[:, 1:dim + 1] * s[:, None]
    # eigenvector signs are arbitrary; fix them for reproducible output
    flip = np.sign(coords[np.argmax(np.abs(coords), axis=0), np.arange(coords.shape[1])])
    return Embedding(coords * flip, name or f"spectral-{dim}")


def netmf_embedding(g: Graph, dim: int = 8, window: int = 10, negative: float = 1.0,
                    name: str | None = None) -> Embedding:
    """Deterministic random-walk embedding (NetMF closed form of DeepWalk).

    Factorises ``log max(1, vol(G) / (b T) * sum_{r<=T} (D^-1 A)^r D^-1)``
    with a truncated SVD; ``window`` is ``T`` and ``negative`` is ``b``.
    Dense, so meant for graphs of a few thousand vertices at most.
    """
    a = g.adjacency_matrix()
    deg = a.sum(axis=1)
    if np.any(deg == 0):
        raise InputError("NetMF needs a graph without isolated vertices")
    walk = a / deg[:, None]
    power = np.eye(g.n)
    acc = np.zeros_like(a)
    for _ in range(window):
        power = power @ walk
        acc += power
    m = np.log(np.maximum(deg.sum() / (negative * window) * acc / deg[None, :], 1.0))
    u, s, _ = np.linalg.svd(m)
    coords = u[:, :dim] * np.sqrt(s[:dim])
    flip = np.sign(coords[np.argmax(np.abs(coords), axis=0), np.arange(coords.shape[1])])
    flip[flip == 0] = 1.0
    return Embedding(coords * flip, name or f"netmf-T{window}-d{dim}")


def karate() -> tuple[Graph, Partition]:
    """Zachary's karate club and the two clubs formed after the split."""
    data = resources.files("gcl_divergence") / "data"
    g = parse_edge_list(data.joinpath("karate.edges").read_text(encoding="utf-8"))
    clubs = parse_partition(data.joinpath("karate.clubs").read_text(encoding="utf-8"), g)
    return g, clubs
