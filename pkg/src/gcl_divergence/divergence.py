"""Divergence score of an embedding and ranking of several embeddings.

For a fixed graph partition, the observed block proportions are compared
with those expected under the GCL model fitted at each ``alpha`` of a grid;
the score is the smallest weighted Jensen-Shannon divergence found.
"""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .blocks import BlockVectors
from .clustering import Partition
from .embedding import Embedding, distance_matrix
from .errors import ConvergenceError, GclError, InputError
from .gcl import (
    DELTA, EPS, G_FLOOR, MAX_ITER, FitReport, GclModel, expected_block_proportions,
    fit_weights, require_feasible,
)
from .graph import Graph, degree_sequence

logger = logging.getLogger(__name__)

DEFAULT_GRID = tuple(np.round(np.arange(41) * 0.25, 2).tolist())

__all__ = [
    "BlockVectors", "ScoreParams", "CurvePoint", "ScoreReport", "DEFAULT_GRID",
    "observed_block_proportions", "jsd", "jsd_terms", "jsd_components", "delta_alpha",
    "divergence_score", "rank_embeddings", "kendall_tau", "ranking_csv",
]


def alpha_grid(lo: float = 0.0, hi: float = 10.0, step: float = 0.25) -> tuple[float, ...]:
    if step <= 0 or lo > hi or lo < 0:
        raise ValueError("need 0 <= lo <= hi and step > 0")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(float(x) for x in np.round(lo + step * np.arange(count), 12))


def observed_block_proportions(g: Graph, p: Partition) -> BlockVectors:
    """Share of the graph's edges inside and between the clusters of ``p``.

    Depends on the graph and partition only, never on an embedding.
    """
    if p.n != g.n:
        raise InputError(f"partition covers {p.n} vertices, graph has {g.n}")
    if g.edge_count == 0:
        raise InputError("graph has no edges")
    ell = p.cluster_count
    e = g.edges()
    a, b = p.assignment[e[:, 0]], p.assignment[e[:, 1]]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    block = np.bincount(lo * ell + hi, minlength=ell * ell).reshape(ell, ell).astype(float)
    return BlockVectors.from_block_matrix(block)


def _as_distribution(p, name):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"{name} must be a vector")
    if np.any(p < 0):
        raise ValueError(f"{name} has negative entries")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"{name} sums to {p.sum()!r}, not 1")
    return p


def jsd(p, q) -> float:
    """Jensen-Shannon divergence in bits (so the result lies in [0, 1])."""
    p = _as_distribution(p, "p")
    q = _as_distribution(q, "q")
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.size} vs {q.size}")
    m = 0.5 * (p + q)

    def kl(x):
        nz = x > 0
        return float(np.sum(x[nz] * np.log2(x[nz] / m[nz])))

    return min(1.0, max(0.0, 0.5 * kl(p) + 0.5 * kl(q)))


def jsd_terms(p, q) -> float:
    """Jensen-Shannon terms summed over a slice of two distributions.

    ``p`` and ``q`` are the same entries taken from two probability vectors
    (here the internal or the external blocks); they need not sum to one.
    Every entry contributes ``(p log2(2p/(p+q)) + q log2(2q/(p+q))) / 2 >= 0``,
    so the internal and external slices add up to the JSD of the full vectors.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.size} vs {q.size}")
    if np.any(p < 0) or np.any(q < 0):
        raise ValueError("negative entries")
    m = 0.5 * (p + q)
    total = 0.0
    for x in (p, q):
        nz = x > 0
        total += 0.5 * float(np.sum(x[nz] * np.log2(x[nz] / m[nz])))
    return max(0.0, total)


def _renormalized_jsd(obs: np.ndarray, model: np.ndarray) -> float:
    # an empty half scores 0; one side empty while the other is not scores 1
    so, sm = obs.sum(), model.sum()
    if obs.size == 0 or (so == 0 and sm == 0):
        return 0.0
    if so == 0 or sm == 0:
        return 1.0
    return jsd(obs / so, model / sm)


def jsd_components(c: BlockVectors, b: BlockVectors,
                   renormalize: bool = False) -> tuple[float, float]:
    """``(internal divergence, external divergence)`` between block vectors.

    By default each part is `jsd_terms` over that half, so the two parts
    sum to the JSD of the full block vectors and the split between
    internal and external mass is scored.  With ``renormalize`` each half
    is rescaled to a distribution first, which compares only how mass is
    shared among the clusters (or among the cluster pairs).
    """
    if c.cluster_count != b.cluster_count:
        raise ValueError("block vectors are over different partitions")
    if renormalize:
        return (_renormalized_jsd(c.internal, b.internal),
                _renormalized_jsd(c.external, b.external))
    return jsd_terms(c.internal, b.internal), jsd_terms(c.external, b.external)


def delta_alpha(c: BlockVectors, b: BlockVectors, internal_weight: float = 0.5,
                renormalize: bool = False) -> float:
    """Weighted average of internal and external divergence (plain mean by default)."""
    if not 0.0 <= internal_weight <= 1.0:
        raise ValueError("internal_weight must lie in [0, 1]")
    ji, je = jsd_components(c, b, renormalize)
    return internal_weight * ji + (1.0 - internal_weight) * je


@dataclass(frozen=True)
class ScoreParams:
    eps: float = EPS
    delta: float = DELTA
    max_iter: int = MAX_ITER
    internal_weight: float = 0.5
    g_floor: float = G_FLOOR
    renormalize: bool = False

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if not 0 <= self.internal_weight <= 1:
            raise ValueError("internal_weight must lie in [0, 1]")


@dataclass(frozen=True)
class CurvePoint:
    alpha: float
    delta: float
    jsd_internal: float
    jsd_external: float
    fit_iters: int
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class ScoreReport:
    embedding: str
    best_alpha: float
    best_divergence: float
    curve: list[CurvePoint]
    fit_reports: list[FitReport | None] = field(default_factory=list)

    def to_json(self) -> dict:
        def num(x):
            return None if x is None or not np.isfinite(x) else float(x)

        return {
            "embedding": self.embedding,
            "best_alpha": self.best_alpha,
            "divergence": self.best_divergence,
            "curve": [
                {
                    "alpha": pt.alpha,
                    "delta": num(pt.delta),
                    "jsd_internal": num(pt.jsd_internal),
                    "jsd_external": num(pt.jsd_external),
                    "fit_iters": pt.fit_iters,
                    **({"error": pt.error} if pt.error else {}),
                }
                for pt in self.curve
            ],
        }


def divergence_score(g: Graph, p: Partition, e: Embedding, grid: Sequence[float] = DEFAULT_GRID,
                     params: ScoreParams | None = None,
                     observed: BlockVectors | None = None,
                     keep_models: list | None = None) -> ScoreReport:
    """Score embedding ``e`` of ``g`` against partition ``p``; lower is better.

    The GCL model is fitted at every ``alpha`` of ``grid`` and the divergence
    between observed and expected block proportions is minimised; ties go
    to the smaller ``alpha``.  Pass ``observed`` to reuse block vectors
    already computed for this ``(g, p)``.  A fit that fails to converge is
    recorded in the curve and skipped; if every fit fails the last error is
    raised.  ``keep_models``, when given, collects the fitted models.
    """
    params = params or ScoreParams()
    grid = [float(a) for a in grid]
    if not grid:
        raise ValueError("alpha grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("alpha grid must be strictly increasing")
    if e.n != g.n:
        raise InputError(f"embedding has {e.n} rows, graph has {g.n} vertices")
    w = degree_sequence(g)
    require_feasible(w)
    if observed is None:
        observed = observed_block_proportions(g, p)
    dist = distance_matrix(e)

    curve: list[CurvePoint] = []
    reports: list[FitReport | None] = []
    last_error: GclError | None = None
    for alpha in grid:
        try:
            model, rep = fit_weights(w, e, alpha, eps=params.eps, delta=params.delta,
                                     max_iter=params.max_iter, g_floor=params.g_floor, dist=dist)
        except ConvergenceError as exc:
            logger.warning("%s: %s", e.name, exc)
            last_error = exc
            curve.append(CurvePoint(alpha, np.nan, np.nan, np.nan, len(exc.residuals) - 1, str(exc)))
            reports.append(None)
            continue
        b = expected_block_proportions(model, p)
        ji, je = jsd_components(observed, b, params.renormalize)
        d = params.internal_weight * ji + (1.0 - params.internal_weight) * je
        curve.append(CurvePoint(alpha, d, ji, je, rep.iterations))
        reports.append(rep)
        if keep_models is not None:
            keep_models.append(model)

    good = [pt for pt in curve if pt.ok]
    if not good:
        raise last_error
    best = min(good, key=lambda pt: pt.delta)  # min keeps the first, i.e. smallest alpha
    return ScoreReport(e.name, best.alpha, best.delta, curve, reports)


def rank_embeddings(g: Graph, p: Partition, es: Sequence[Embedding],
                    grid: Sequence[float] = DEFAULT_GRID, params: ScoreParams | None = None,
                    workers: int = 1, failures: dict | None = None) -> list[tuple[str, ScoreReport]]:
    """Score every embedding against one partition and sort, best first.

    Observed block vectors are computed once and shared.  Ties keep input
    order.  Embeddings whose scoring fails are left out of the ranking and,
    if ``failures`` is given, recorded there by name.
    """
    if not es:
        raise ValueError("need at least one embedding")
    observed = observed_block_proportions(g, p)
    require_feasible(degree_sequence(g))

    def run(e):
        try:
            return divergence_score(g, p, e, grid, params, observed=observed)
        except GclError as exc:
            logger.warning("%s: scoring failed: %s", e.name, exc)
            return exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, es))
    else:
        results = [run(e) for e in es]

    ranked = []
    for e, res in zip(es, results):
        if isinstance(res, Exception):
            if failures is not None:
                failures[e.name] = res
        else:
            ranked.append((e.name, res))
    if not ranked:
        raise InputError("every embedding failed to score")
    # sorted() is stable, so equal scores keep input order
    return sorted(ranked, key=lambda item: item[1].best_divergence)


def kendall_tau(order_a: Sequence, order_b: Sequence) -> float:
    """Kendall tau-a between two strict rankings of the same ids."""
    if len(set(order_a)) != len(order_a) or len(set(order_b)) != len(order_b):
        raise ValueError("rankings must not repeat ids")
    if set(order_a) != set(order_b):
        raise ValueError("rankings are over different id sets")
    n = len(order_a)
    if n < 2:
        raise ValueError("need at least two ids")
    pos_b = {x: k for k, x in enumerate(order_b)}
    rb = np.array([pos_b[x] for x in order_a])
    # pairs (i < j) in order_a are concordant when order_b agrees
    signs = np.sign(rb[None, :] - rb[:, None])[np.triu_indices(n, k=1)]
    return float(signs.sum()) / (n * (n - 1) / 2)


def ranking_csv(ranking: Sequence[tuple[str, ScoreReport]]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["rank", "embedding", "best_alpha", "divergence"])
    for k, (name, rep) in enumerate(ranking, start=1):
        out.writerow([k, name, rep.best_alpha, repr(rep.best_divergence)])
    return buf.getvalue()
