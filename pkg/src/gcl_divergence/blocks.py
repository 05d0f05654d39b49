"""Cluster-block edge proportion vectors shared by the observed and model sides."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class BlockVectors:
    """Edge mass inside each cluster and between each pair of clusters.

    ``internal[i]`` is the proportion for cluster ``i``; ``external`` lists the
    pairs ``(0,1), (0,2), ..., (l-2,l-1)`` in row-major order.  Together the
    two vectors sum to one.
    """

    internal: np.ndarray
    external: np.ndarray

    def __post_init__(self):
        for name in ("internal", "external"):
            v = np.asarray(getattr(self, name), dtype=float)
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        ell = self.internal.size
        if self.external.size != ell * (ell - 1) // 2:
            raise ValueError(f"{ell} clusters need {ell * (ell - 1) // 2} external entries")

    @property
    def cluster_count(self) -> int:
        return self.internal.size

    def concatenated(self) -> np.ndarray:
        return np.concatenate([self.internal, self.external])

    @classmethod
    def from_block_matrix(cls, m: np.ndarray) -> "BlockVectors":
        """From a symmetric ``l x l`` matrix of block masses (diagonal = internal)."""
        ell = m.shape[0]
        iu = np.triu_indices(ell, k=1)
        internal = np.diag(m).copy()
        external = m[iu]
        total = internal.sum() + external.sum()
        return cls(internal / total, external / total)
