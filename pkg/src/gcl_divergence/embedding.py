"""Vertex embeddings: node2vec-style file parsing and pairwise distances."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, TextIO

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import InputError
from .graph import Graph


@dataclass(frozen=True, eq=False)
class Embedding:
    """Coordinates of every graph vertex, rows in internal index order."""

    coords: np.ndarray
    name: str = "embedding"

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        if c.ndim != 2 or c.shape[1] < 1:
            raise InputError("coordinates must be an (n, k) array with k >= 1")
        if not np.all(np.isfinite(c)):
            raise InputError("embedding contains non-finite coordinates")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def transformed(self, scale: float = 1.0, shift=0.0, name: str | None = None) -> "Embedding":
        return Embedding(self.coords * scale + shift, name or self.name)


class DistanceExtremes(NamedTuple):
    d_min: float
    d_max: float


def _is_header(tokens: list[str], next_tokens: list[str] | None) -> bool:
    if len(tokens) != 2:
        return False
    try:
        int(tokens[0])
        k = int(tokens[1])
    except ValueError:
        return False
    # "a 0" could be a one-dimensional row; only trust the header when the
    # next row has k coordinates after its label.
    return next_tokens is None or len(next_tokens) == k + 1


def parse_embedding(text: str | TextIO, g: Graph, name: str = "embedding") -> Embedding:
    """Read ``label c_1 ... c_k`` rows (optional ``n k`` header) for graph ``g``.

    Rows are reordered to the graph's internal vertex order.  Labels that
    are not graph vertices are ignored so an embedding of a larger graph
    can be scored on its largest component.
    """
    if not isinstance(text, str):
        text = text.read()
    rows = [
        (lineno, line.split())
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if rows and _is_header(rows[0][1], rows[1][1] if len(rows) > 1 else None):
        rows = rows[1:]
    coords = {}
    dim = None
    for lineno, tokens in rows:
        if len(tokens) < 2:
            raise InputError(f"line {lineno}: expected a label and at least one coordinate")
        label, values = tokens[0], tokens[1:]
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise InputError(
                f"line {lineno}: vertex {label} has {len(values)} coordinates, expected {dim}"
            )
        try:
            coords[label] = [float(v) for v in values]
        except ValueError:
            raise InputError(f"line {lineno}: non-numeric coordinate for vertex {label}") from None
    missing = [lab for lab in g.labels if lab not in coords]
    if missing:
        raise InputError(f"vertex {missing[0]} has no embedding")
    return Embedding(np.array([coords[lab] for lab in g.labels], dtype=float), name)


def read_embedding(path, g: Graph, name: str | None = None) -> Embedding:
    with open(path, encoding="utf-8") as fh:
        return parse_embedding(fh, g, name=name or str(path))


def format_embedding(e: Embedding, g: Graph) -> str:
    lines = [f"{e.n} {e.dim}"]
    for lab, row in zip(g.labels, e.coords):
        lines.append(lab + " " + " ".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def distance(e: Embedding, i: int, j: int) -> float:
    """Euclidean distance between the images of vertices ``i`` and ``j``."""
    return float(np.linalg.norm(e.coords[i] - e.coords[j]))


def distance_matrix(e: Embedding) -> np.ndarray:
    return squareform(pdist(e.coords))


def distance_extremes(e: Embedding) -> DistanceExtremes:
    if e.n < 2:
        raise InputError("distance extremes need at least two vertices")
    d = pdist(e.coords)
    return DistanceExtremes(float(d.min()), float(d.max()))
