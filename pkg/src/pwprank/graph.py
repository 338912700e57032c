"""Weighted digraphs as dense matrices of direct influences.

Orientation convention, used by every module in the package::

    D[i, j] = weight of the direct influence of vertex j on vertex i

so an edge ``source -> target`` of weight w is stored as ``D[target, source] = w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadWeight, BlockStructureError, DuplicateEdge, ParseError, ShapeError

LABELS_PREFIX = "#labels:"


def as_matrix(d, *, square: bool = True) -> np.ndarray:
    """Validate ``d`` and return it as a read-only float64 2-D array."""
    try:
        m = np.array(d, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"cannot convert to a real matrix: {exc}") from None
    if m.ndim != 2 or m.size == 0:
        raise ShapeError(f"expected a nonempty 2-D matrix, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ShapeError(f"matrix is not square: shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise BadWeight("matrix has NaN or infinite entries")
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class WeightedDigraph:
    """Vertex-labelled matrix of direct influences.

    ``d[i, j]`` is the influence of vertex ``labels[j]`` on vertex ``labels[i]``.
    """

    labels: tuple[str, ...]
    d: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "d", as_matrix(self.d))
        if len(self.labels) != self.d.shape[0]:
            raise ShapeError(
                f"{len(self.labels)} labels for a {self.d.shape[0]}x{self.d.shape[0]} matrix"
            )
        if len(set(self.labels)) != len(self.labels):
            raise ShapeError("vertex labels must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"unknown vertex {label!r}") from None

    def edges(self) -> list[tuple[str, str, float]]:
        """Nonzero entries as ``(source, target, weight)`` in row-major order."""
        rows, cols = np.nonzero(self.d)
        return [(self.labels[j], self.labels[i], float(self.d[i, j])) for i, j in zip(rows, cols)]

    def with_edge(self, source, target, weight: float) -> "WeightedDigraph":
        """Copy of the graph with ``weight`` added to the edge ``source -> target``."""
        if not math.isfinite(weight):
            raise BadWeight(f"non-finite weight {weight!r}")
        d = np.array(self.d)
        d[self.index(target), self.index(source)] += weight
        return WeightedDigraph(self.labels, d)

    def __eq__(self, other):
        if not isinstance(other, WeightedDigraph):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.d, other.d)

    __hash__ = None


def default_labels(n: int) -> tuple[str, ...]:
    return tuple(str(i + 1) for i in range(n))


def from_matrix(d, labels: Sequence[str] | None = None) -> WeightedDigraph:
    d = as_matrix(d)
    return WeightedDigraph(default_labels(d.shape[0]) if labels is None else labels, d)


def from_edge_list(lines: Iterable[tuple[str, str, float]]) -> WeightedDigraph:
    """Build a graph from ``(source, target, weight)`` triples.

    Vertices are numbered in order of first appearance. Absent pairs are 0.
    """
    labels: dict[str, int] = {}
    entries: dict[tuple[int, int], float] = {}
    for source, target, weight in lines:
        source, target = str(source), str(target)
        if not source or not target:
            raise ParseError("vertex labels must be nonempty")
        weight = float(weight)
        if not math.isfinite(weight):
            raise BadWeight(f"non-finite weight on {source}->{target}")
        s = labels.setdefault(source, len(labels))
        t = labels.setdefault(target, len(labels))
        if (t, s) in entries:
            raise DuplicateEdge(f"edge {source}->{target} given twice")
        entries[(t, s)] = weight
    if not labels:
        raise ShapeError("edge list is empty")
    d = np.zeros((len(labels), len(labels)))
    for (t, s), w in entries.items():
        d[t, s] = w
    return WeightedDigraph(tuple(labels), d)


def parse_edge_list(text: str) -> WeightedDigraph:
    """Parse ``source<TAB>target<TAB>weight`` lines; ``#`` lines are comments."""
    triples = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}")
        try:
            weight = float(parts[2])
        except ValueError:
            raise ParseError(f"line {lineno}: bad weight {parts[2]!r}") from None
        triples.append((parts[0].strip(), parts[1].strip(), weight))
    return from_edge_list(triples)


def from_matrix_csv(text: str) -> WeightedDigraph:
    """Parse a dense matrix CSV with an optional ``#labels:a,b,c`` header.

    Without a header the labels are ``"1" .. "n"``. Other ``#`` lines and
    blank lines are skipped.
    """
    labels = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(LABELS_PREFIX):
            labels = [x.strip() for x in line[len(LABELS_PREFIX):].split(",")]
            continue
        if line.startswith("#"):
            continue
        row = []
        for tok in line.split(","):
            try:
                row.append(float(tok))
            except ValueError:
                raise ParseError(f"line {lineno}: cannot parse {tok.strip()!r}") from None
        rows.append(row)
    if not rows:
        raise ShapeError("no matrix rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ShapeError("ragged rows: all rows must have the same length")
    if width != len(rows):
        raise ShapeError(f"matrix is not square: {len(rows)} rows x {width} columns")
    d = np.array(rows)
    if not np.all(np.isfinite(d)):
        raise BadWeight("matrix has NaN or infinite entries")
    return WeightedDigraph(default_labels(len(rows)) if labels is None else labels, d)


def render_matrix_csv(g: WeightedDigraph, digits: int | None = None) -> str:
    """Inverse of :func:`from_matrix_csv`.

    With ``digits=None`` each weight is written with ``repr`` so the round
    trip is bit-exact; otherwise ``digits`` significant digits are used.
    """
    fmt = repr if digits is None else (lambda x: f"{x:.{digits}g}")
    lines = [LABELS_PREFIX + ",".join(g.labels)]
    for row in g.d:
        lines.append(",".join(fmt(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def render_edge_list(g: WeightedDigraph) -> str:
    return "".join(f"{s}\t{t}\t{w!r}\n" for s, t, w in g.edges())


def process_matter_fold(block, n_processes: int) -> tuple[np.ndarray, np.ndarray]:
    """Collapse a process-matter network ``[[0, M], [P, 0]]`` onto each side.

    Indices ``0 .. n_processes-1`` are processes, the rest are materials.
    ``M`` holds influences of materials on processes and ``P`` of processes
    on materials. Returns ``(M @ P, P @ M)``: ``(M @ P)[q, p]`` aggregates
    the routes ``p -> material -> q``, and ``P @ M`` likewise for materials.
    """
    block = as_matrix(block)
    size = block.shape[0]
    if not 1 <= n_processes < size:
        raise ShapeError(f"n_processes must be in [1, {size - 1}], got {n_processes}")
    if np.any(block[:n_processes, :n_processes]) or np.any(block[n_processes:, n_processes:]):
        raise BlockStructureError("diagonal blocks of a process-matter matrix must be zero")
    m = block[:n_processes, n_processes:]
    p = block[n_processes:, :n_processes]
    return m @ p, p @ m


# Graph families used throughout the analysis.

def linear_graph(n: int) -> WeightedDigraph:
    """The directed path L_n: ``1 -> 2 -> ... -> n``."""
    if n < 2:
        raise ShapeError(f"L_n needs n >= 2, got {n}")
    return from_matrix(np.eye(n, k=-1))


def circuit_graph(n: int) -> WeightedDigraph:
    """The directed cycle Z_n ``1 -> 2 -> ... -> n -> 1`` (labels 1..n)."""
    if n < 2:
        raise ShapeError(f"Z_n needs n >= 2, got {n}")
    return from_matrix(np.roll(np.eye(n), 1, axis=0))


def process_matter_chain(n_processes: int) -> tuple[WeightedDigraph, int]:
    """A production line: process ``pk`` consumes ``mk`` and produces ``m(k+1)``.

    Returns the block graph and the number of processes.
    """
    if n_processes < 1:
        raise ShapeError("need at least one process")
    n_mat = n_processes + 1
    size = n_processes + n_mat
    d = np.zeros((size, size))
    for k in range(n_processes):
        d[k, n_processes + k] = 1.0          # material k feeds process k
        d[n_processes + k + 1, k] = 1.0      # process k outputs material k+1
    labels = [f"p{k + 1}" for k in range(n_processes)] + [f"m{k + 1}" for k in range(n_mat)]
    return WeightedDigraph(labels, d), n_processes
