"""Geometric Chung-Lu random graphs.

Vertex pair ``(i, j)`` is an edge with probability ``x_i * x_j * g(d_ij)``,
where ``d_ij`` is the embedding distance and

    g(d) = (1 - (d - d_min) / (d_max - d_min)) ** alpha

decays from 1 at the closest pair to 0 at the farthest.  The weights ``x``
are tuned so that every vertex has its observed degree as expected degree.
``alpha = 0`` ignores the embedding (classic Chung-Lu without loops).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .blocks import BlockVectors
from .clustering import Partition
from .embedding import DistanceExtremes, Embedding, distance_extremes, distance_matrix
from .errors import ConvergenceError, InfeasibleDegreeError, InputError
from .graph import Graph

logger = logging.getLogger(__name__)

G_FLOOR = 1e-7
EPS = 0.1
DELTA = 1e-3
MAX_ITER = 100_000
# consecutive residual increases tolerated before the iteration is declared divergent
DIVERGENCE_PATIENCE = 100
CAP_REFINE_ITER = 20_000
CAP_STALL_WINDOW = 1000


def g_alpha(d, ex: DistanceExtremes, alpha: float, g_floor: float = G_FLOOR):
    """Normalised distance decay, clipped below at ``g_floor``.

    Works on scalars or arrays.  Returns 1 everywhere when ``alpha == 0``
    or when all points coincide (``d_max == d_min``).
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    d = np.asarray(d, dtype=float)
    span = ex.d_max - ex.d_min
    slack = 1e-9 * max(1.0, abs(ex.d_max))
    if np.any(d < ex.d_min - slack) or np.any(d > ex.d_max + slack):
        raise ValueError(f"distance outside [{ex.d_min}, {ex.d_max}]")
    if alpha == 0 or span <= 0:
        out = np.ones_like(d)
    else:
        frac = np.clip((d - ex.d_min) / span, 0.0, 1.0)
        out = np.maximum((1.0 - frac) ** alpha, g_floor)
    return float(out) if out.ndim == 0 else out


def decay_matrix(dist: np.ndarray, ex: DistanceExtremes, alpha: float,
                 g_floor: float = G_FLOOR) -> np.ndarray:
    """``g(d_ij)`` for all pairs, zero on the diagonal (no loops)."""
    d = np.array(dist, dtype=float)
    np.fill_diagonal(d, ex.d_min)
    a = g_alpha(d, ex, alpha, g_floor)
    np.fill_diagonal(a, 0.0)
    return a


class Feasibility(NamedTuple):
    feasible: bool
    vertex: int | None
    total: float
    largest: float


def feasibility_check(w) -> Feasibility:
    """Whether ``w`` can be the expected degrees of a GCL model.

    A positive weight vector exists (and is unique) iff the largest degree
    is smaller than the sum of all the others, i.e. ``sum(w) > 2 max(w)``.
    On failure ``vertex`` names the offending vertex; stars fail with
    equality.
    """
    w = np.asarray(w, dtype=float)
    if w.size <= 2:
        raise InfeasibleDegreeError(
            "need n >= 3: with two vertices the weights are not unique "
            "(any (t, w_1 / t) solves the system)"
        )
    if np.any(w <= 0):
        v = int(np.flatnonzero(w <= 0)[0])
        raise InfeasibleDegreeError(f"vertex {v} has degree {w[v]:g}; need all degrees >= 1", v)
    top = int(np.argmax(w))
    total = float(w.sum())
    ok = total > 2.0 * w[top]
    return Feasibility(ok, None if ok else top, total, float(w[top]))


def require_feasible(w) -> None:
    f = feasibility_check(w)
    if not f.feasible:
        raise InfeasibleDegreeError(
            f"degree sequence infeasible: vertex {f.vertex} has degree {f.largest:g}, "
            f"not below the sum of the others ({f.total - f.largest:g})",
            f.vertex,
        )


@dataclass(frozen=True)
class FitReport:
    """Outcome of `fit_weights`.

    ``final_residual`` is the stopping criterion of the iteration that
    produced the weights.  ``degree_residual`` is ``max_i |w_i - sum_j p_ij|``
    for the returned model with probabilities capped at 1; it reaches
    ``delta`` or more only when ``cap_bound`` is true.
    """

    iterations: int
    final_residual: float
    converged: bool
    degree_residual: float = float("nan")
    cap_refined: bool = False
    cap_bound: bool = False


@dataclass(frozen=True, eq=False)
class GclModel:
    """Fitted GCL model; immutable once built.

    ``decay`` holds ``g(d_ij)`` with a zero diagonal.  ``residual`` is
    ``max_i |w_i - sum_j p_ij|`` for the capped probabilities.
    """

    alpha: float
    weights: np.ndarray
    extremes: DistanceExtremes
    decay: np.ndarray = field(repr=False)
    g_floor: float = G_FLOOR
    residual: float = float("nan")

    @property
    def n(self) -> int:
        return self.weights.size

    def expected_degrees(self) -> np.ndarray:
        return self.probabilities.sum(axis=1)

    @cached_property
    def probabilities(self) -> np.ndarray:
        """Edge probability matrix, capped at 1, zero diagonal."""
        p = np.outer(self.weights, self.weights) * self.decay
        np.minimum(p, 1.0, out=p)
        p.setflags(write=False)
        return p

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "d_min": self.extremes.d_min,
            "d_max": self.extremes.d_max,
            "weights": self.weights.tolist(),
            "residual": self.residual,
        }


def _iterate(w, a, t, eps, delta, max_iter, capped, stall_window=None):
    """Damped multiplicative updates; returns ``(t, trace, converged)``.

    With ``stall_window`` the iterate with the smallest residual is returned
    and the loop stops once a whole window improves it by less than 1%.
    """
    trace = []
    growing = 0
    best_r, best_t, mark = np.inf, t, np.inf
    for it in range(max_iter + 1):
        if capped:
            s = np.minimum(np.outer(t, t) * a, 1.0).sum(axis=1)
        else:
            s = t * (a @ t)
        r = float(np.max(np.abs(w - s)))
        trace.append(r)
        if r < best_r:
            best_r, best_t = r, t
        if r < delta:
            return t, trace, True
        if it == max_iter:
            break
        if it and r > trace[-2]:
            growing += 1
            if growing >= DIVERGENCE_PATIENCE:
                break
        else:
            growing = 0
        if stall_window and it % stall_window == 0:
            if best_r > 0.99 * mark:
                break
            mark = best_r
        t = t + eps * t * (w / s - 1.0)
    return (best_t if stall_window else t), trace, False


def fit_weights(w, e: Embedding, alpha: float, eps: float = EPS, delta: float = DELTA,
                max_iter: int = MAX_ITER, g_floor: float = G_FLOOR, initial=None,
                dist: np.ndarray | None = None,
                capped: bool = True) -> tuple[GclModel, FitReport]:
    """Tune vertex weights so expected degrees match ``w``.

    Starting from ``t = (1, ..., 1)`` (or ``initial``), every vertex takes a
    damped multiplicative step towards its target,

        t_i <- t_i + eps * t_i * (w_i / s_i - 1),   s_i = t_i sum_{j != i} t_j g(d_ij),

    with all ``s_i`` computed from the previous ``t`` (Jacobi update), until
    ``max_i |w_i - s_i| < delta``.

    Products ``t_i t_j g`` above 1 are not probabilities.  When the solution
    has such pairs and ``capped`` is true, the iteration is continued from it
    with every term of ``s_i`` replaced by ``min(1, t_i t_j g)``, so that the
    capped probabilities keep the target degrees.  Near the cap this phase
    can be slow, and some degree sequences (a vertex adjacent to almost
    everything, next to leaves) are only matched in the limit.  If it stops
    short of ``delta``, the best capped weights found are kept and
    ``FitReport.cap_bound`` is set.

    Parameters
    ----------
    w : array-like
        Target degrees; must pass `feasibility_check`.
    e : Embedding
    alpha : float
        Decay strength, ``alpha >= 0``.
    eps, delta : float
        Step size in (0, 1) and residual tolerance.
    max_iter : int
    g_floor : float
        Lower clip for ``g`` so every pair keeps a positive probability.
    initial : array-like, optional
        Positive starting weights.
    dist : ndarray, optional
        Precomputed distance matrix of ``e``.
    capped : bool
        Refine towards degrees of the capped probabilities when needed.

    Returns
    -------
    model : GclModel
    report : FitReport

    Raises
    ------
    InfeasibleDegreeError
        Before any iteration, if the degree sequence admits no solution.
    ConvergenceError
        If the tolerance is not met within ``max_iter`` steps or the residual
        keeps growing; carries the residual trace.
    """
    w = np.asarray(w, dtype=float)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if e.n != w.size:
        raise InputError(f"embedding has {e.n} rows for {w.size} vertices")
    require_feasible(w)

    ex = distance_extremes(e)
    if dist is None:
        dist = distance_matrix(e)
    a = decay_matrix(dist, ex, alpha, g_floor)

    t0 = np.ones_like(w) if initial is None else np.array(initial, dtype=float)
    if t0.shape != w.shape or np.any(t0 <= 0):
        raise ValueError("initial weights must be positive, one per vertex")

    t, trace, converged = _iterate(w, a, t0, eps, delta, max_iter, capped=False)
    if not converged:
        raise ConvergenceError(
            f"alpha={alpha:g}: residual {trace[-1]:.3g} after {len(trace) - 1} iterations "
            f"(tolerance {delta:g})",
            trace,
        )
    iterations = len(trace) - 1
    residual = trace[-1]
    refined = bound = False
    over = int(np.count_nonzero(np.outer(t, t) * a > 1.0)) // 2
    if over and capped:
        t2, trace2, ok = _iterate(w, a, t, eps, delta, CAP_REFINE_ITER, capped=True,
                                  stall_window=CAP_STALL_WINDOW)
        iterations += len(trace2) - 1
        if ok:
            t, residual, refined = t2, trace2[-1], True
        else:
            bound = True
            if min(trace2) < trace2[0]:
                t, refined = t2, True
    t.setflags(write=False)
    model = GclModel(alpha=float(alpha), weights=t, extremes=ex, decay=a, g_floor=g_floor)
    deg_res = float(np.max(np.abs(w - model.expected_degrees())))
    object.__setattr__(model, "residual", deg_res)
    if bound:
        logger.info("alpha=%g: %d vertex pairs have x_i x_j g > 1; capping shifts "
                    "expected degrees by up to %.3g", alpha, over, deg_res)
    return model, FitReport(iterations=iterations, final_residual=residual, converged=True,
                            degree_residual=deg_res, cap_refined=refined, cap_bound=bound)


def edge_probability(m: GclModel, i: int, j: int) -> float:
    if i == j:
        raise ValueError("the model has no loops; i and j must differ")
    return float(m.probabilities[i, j])


def expected_block_proportions(m: GclModel, p: Partition) -> BlockVectors:
    """Expected share of model edges inside and between the clusters of ``p``.

    Normalised by the model's total expected edge mass, so the entries sum
    to one regardless of how well the fit matched ``|E|``.
    """
    if p.n != m.n:
        raise InputError(f"partition covers {p.n} vertices, model has {m.n}")
    z = p.indicator()
    block = z.T @ m.probabilities @ z
    # diagonal counts each internal pair twice
    block[np.diag_indices_from(block)] /= 2.0
    return BlockVectors.from_block_matrix(block)


def sample_graph(m: GclModel, seed: int = 0, labels=None) -> Graph:
    """Draw each vertex pair independently with its model probability."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(m.n, k=1)
    keep = rng.random(iu.size) < m.probabilities[iu, ju]
    if labels is None:
        labels = [str(i) for i in range(m.n)]
    return Graph.from_edges(labels, zip(iu[keep], ju[keep]))
