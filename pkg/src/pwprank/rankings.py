"""Dependence, influence and importance scores, and rankings built from them.

For a matrix ``M`` (direct ``D`` or indirect ``T``):

* dependence of ``i`` is the row sum ``sum_j M[i, j]`` (what ``i`` receives),
* influence of ``i`` is the column sum ``sum_j M[j, i]`` (what ``i`` exerts),
* importance is their total.

A :class:`Ranking` is an ordered partition of the vertices, best first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .graph import as_matrix
from .series import InfluenceMatrix, canonical_sum

KINDS = ("dependence", "influence", "importance")
DEFAULT_TIE_TOL = 1e-9


def _check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise ValueError(f"score kind must be one of {KINDS}, got {kind!r}")
    return kind


@dataclass(frozen=True)
class ScoreVector:
    """Per-vertex scores of one kind.

    ``source`` is ``"direct"`` or the lambda of the indirect matrix.
    """

    kind: str
    values: np.ndarray
    source: Union[str, float] = "direct"

    def __post_init__(self):
        _check_kind(self.kind)
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or not np.all(np.isfinite(v)):
            raise ValueError("scores must be a finite 1-D vector")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)


def score_values(m: np.ndarray, kind: str) -> np.ndarray:
    """Raw score sums of ``m`` (order-independent summation)."""
    _check_kind(kind)
    rows = canonical_sum(m, axis=1)
    cols = canonical_sum(m, axis=0)
    if kind == "dependence":
        return rows
    if kind == "influence":
        return cols
    return rows + cols


def direct_scores(d, kind: str) -> ScoreVector:
    return ScoreVector(kind, score_values(as_matrix(d), kind), "direct")


def indirect_scores(t: InfluenceMatrix, kind: str) -> ScoreVector:
    return ScoreVector(kind, score_values(t.t, kind), float(t.lam))


def tie_scale(values: np.ndarray) -> float:
    """Magnitude that the tie tolerance is relative to."""
    return float(np.max(np.abs(values))) if len(values) else 0.0


@dataclass(frozen=True)
class Ranking:
    """Ordered partition of vertex indices, highest scores first."""

    groups: tuple[tuple[int, ...], ...]
    tie_tol: float = DEFAULT_TIE_TOL

    @property
    def n(self) -> int:
        return sum(len(g) for g in self.groups)

    def position(self) -> list[int]:
        """``position()[v]`` is the index of the group holding vertex ``v``."""
        pos = [0] * self.n
        for rank, g in enumerate(self.groups):
            for v in g:
                pos[v] = rank
        return pos

    def format(self, labels: Sequence[str] | None = None) -> str:
        """``"3,4 > 2,5 > 1,6"``; vertices default to 1-based numbers."""
        name = (lambda v: str(v + 1)) if labels is None else (lambda v: labels[v])
        return " > ".join(",".join(name(v) for v in g) for g in self.groups)

    def to_json(self, labels: Sequence[str] | None = None) -> list[list[str]]:
        name = (lambda v: str(v + 1)) if labels is None else (lambda v: labels[v])
        return [[name(v) for v in g] for g in self.groups]

    def __str__(self):
        return self.format()

    def __eq__(self, other):
        if not isinstance(other, Ranking):
            return NotImplemented
        return self.groups == other.groups

    def __hash__(self):
        return hash(self.groups)


def ranking_from_scores(s: ScoreVector | np.ndarray,
                        tie_tol: float = DEFAULT_TIE_TOL) -> Ranking:
    """Sort vertices by descending score, chaining near-equal neighbours into ties.

    Consecutive sorted scores whose gap is at most ``tie_tol * max|score|``
    share a group. Within a group vertices are in ascending index order.
    """
    if tie_tol < 0:
        raise ValueError("tie_tol must be nonnegative")
    values = s.values if isinstance(s, ScoreVector) else np.asarray(s, dtype=float)
    if len(values) == 0:
        return Ranking((), tie_tol)
    order = sorted(range(len(values)), key=lambda v: (-values[v], v))
    threshold = tie_tol * tie_scale(values)
    groups = [[order[0]]]
    for prev, cur in zip(order, order[1:]):
        if values[prev] - values[cur] <= threshold:
            groups[-1].append(cur)
        else:
            groups.append([cur])
    return Ranking(tuple(tuple(sorted(g)) for g in groups), tie_tol)


def ranking_equal(a: Ranking, b: Ranking) -> bool:
    if a.n != b.n:
        raise ValueError(f"rankings over different vertex counts ({a.n} vs {b.n})")
    return a.groups == b.groups


def parse_ranking(text: str, labels: Sequence[str] | None = None) -> Ranking:
    """Inverse of :meth:`Ranking.format`, e.g. ``"4>3>2>5>1>6"``."""
    lookup = None if labels is None else {lab: i for i, lab in enumerate(labels)}
    groups = []
    for chunk in text.split(">"):
        members = [tok.strip() for tok in chunk.split(",") if tok.strip()]
        if lookup is None:
            idx = [int(tok) - 1 for tok in members]
        else:
            idx = [lookup[tok] for tok in members]
        groups.append(tuple(sorted(idx)))
    flat = sorted(v for g in groups for v in g)
    if flat != list(range(len(flat))):
        raise ValueError(f"ranking {text!r} is not a partition of the vertices")
    return Ranking(tuple(groups))


def pair_relation(values: np.ndarray, a: int, b: int, tie_tol: float) -> int:
    """+1 if ``a`` outranks ``b``, -1 if ``b`` outranks ``a``, 0 if tied."""
    gap = values[a] - values[b]
    threshold = tie_tol * tie_scale(values)
    if gap > threshold:
        return 1
    if gap < -threshold:
        return -1
    return 0


def refines(fine: Ranking, coarse: Ranking) -> bool:
    """True if every strict order of ``coarse`` is kept by ``fine``."""
    pf, pc = fine.position(), coarse.position()
    n = len(pc)
    return all(pf[a] < pf[b] for a in range(n) for b in range(n) if pc[a] < pc[b])
