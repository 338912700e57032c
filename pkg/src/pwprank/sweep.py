"""Where do rankings change as lambda or an edge weight varies?

A sweep evaluates scores on a grid, finds the grid cells where the ranking
changes, and inside each such cell locates every pair of vertices whose
relative order changed:

* a strict swap (``a > b`` becomes ``b > a``) is refined by bracketing the
  root of ``score_a - score_b``;
* a pair entering or leaving a tie is refined by bisection on the tied /
  not-tied predicate.

Pair events closer than ``refine_tol`` merge into one crossing, and the
parameter axis is cut at the crossings into constant-ranking segments.
Pairs that swap twice inside one grid cell are invisible (resolution limit).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .analytic import exp_poly, half_size, importance_coefficients
from .errors import NoBracket, TruncationNotConverged
from .graph import WeightedDigraph, as_matrix, default_labels
from .rankings import (DEFAULT_TIE_TOL, KINDS, Ranking, pair_relation, ranking_from_scores,
                       score_values, tie_scale)
from .series import DEFAULT_MAX_TERMS, DEFAULT_TOL, PwpParams, PwpSeries, pwp_transform


def find_crossing(f: Callable[[float], float], bracket: tuple[float, float],
                  tol: float = 1e-12, maxiter: int = 400) -> float:
    """Root of ``f`` inside a sign-changing bracket, to bracket width ``tol``.

    Regula falsi steps are taken while they at least halve the bracket;
    otherwise the next step bisects, so convergence is never slower than
    one halving per two evaluations.

    Raises:
        NoBracket: if ``f(a)`` and ``f(b)`` have the same sign.
    """
    a, b = float(bracket[0]), float(bracket[1])
    if a > b:
        a, b = b, a
    fa, fb = f(a), f(b)
    if fa == 0:
        return a
    if fb == 0:
        return b
    if (fa > 0) == (fb > 0):
        raise NoBracket(f"no sign change on [{a}, {b}]: f = {fa:.3g}, {fb:.3g}")
    bisect_next = False
    for _ in range(maxiter):
        width = b - a
        if width <= tol:
            break
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        x = mid
        if not bisect_next:
            sec = b - fb * (b - a) / (fb - fa)
            if a < sec < b:
                x = sec
        fx = f(x)
        if fx == 0:
            return float(x)
        if (fx > 0) == (fa > 0):
            a, fa = x, fx
        else:
            b, fb = x, fx
        bisect_next = (b - a) > 0.5 * width
    return float(0.5 * (a + b))


def _bisect_predicate(pred: Callable[[float], bool], a: float, b: float, tol: float) -> float:
    """Boundary between ``pred == True`` at ``a`` and ``False`` at ``b``."""
    while b - a > tol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if pred(mid):
            a = mid
        else:
            b = mid
    return float(0.5 * (a + b))


@dataclass(frozen=True)
class SweepSpec:
    """Parameter range and resolution of a sweep.

    ``param`` is ``"lambda"`` or ``"epsilon"``. For epsilon sweeps ``edge``
    names the ``(source, target)`` whose weight grows and ``base_lambda`` is
    the fixed lambda. ``spacing`` defaults to ``"log"`` for lambda and
    ``"linear"`` for epsilon.
    """

    lo: float
    hi: float
    param: str = "lambda"
    grid_points: int = 400
    refine_tol: float = 1e-10
    score_kind: str = "importance"
    edge: tuple[str, str] | None = None
    base_lambda: float = 1.0
    spacing: str | None = None
    tie_tol: float = DEFAULT_TIE_TOL
    series_tol: float = DEFAULT_TOL
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self):
        if self.param not in ("lambda", "epsilon"):
            raise ValueError(f"param must be 'lambda' or 'epsilon', got {self.param!r}")
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.param == "lambda" and self.lo <= 0:
            raise ValueError("lambda sweeps need lo > 0")
        if self.param == "epsilon" and self.lo < 0:
            raise ValueError("epsilon sweeps need lo >= 0")
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")
        if not self.refine_tol > 0:
            raise ValueError("refine_tol must be positive")
        if self.score_kind not in KINDS:
            raise ValueError(f"score_kind must be one of {KINDS}")
        if self.spacing not in (None, "log", "linear"):
            raise ValueError("spacing must be 'log' or 'linear'")
        if self.resolved_spacing == "log" and self.lo <= 0:
            raise ValueError("log spacing needs lo > 0")
        if not self.base_lambda > 0:
            raise ValueError("base_lambda must be positive")

    @property
    def resolved_spacing(self) -> str:
        if self.spacing is not None:
            return self.spacing
        return "log" if self.param == "lambda" else "linear"

    def grid(self) -> np.ndarray:
        if self.resolved_spacing == "log":
            xs = np.geomspace(self.lo, self.hi, self.grid_points)
        else:
            xs = np.linspace(self.lo, self.hi, self.grid_points)
        xs[0], xs[-1] = self.lo, self.hi
        return xs


@dataclass(frozen=True)
class Crossing:
    """A ranking change at ``value``.

    ``pairs`` are the 0-based vertex pairs ``(a, b)``, ``a < b``, whose
    relative order changes there. ``kind`` is ``"flip"`` if some pair
    strictly swaps, ``"tie"`` if pairs only enter or leave ties.
    """

    value: float
    pairs: tuple[tuple[int, int], ...]
    kind: str


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float
    ranking: Ranking


@dataclass(frozen=True)
class SweepReport:
    spec: SweepSpec
    labels: tuple[str, ...]
    segments: tuple[Segment, ...]
    crossings: tuple[Crossing, ...]
    grid_resolution: float
    metadata: dict = field(default_factory=dict)

    @property
    def rankings(self) -> list[Ranking]:
        return [s.ranking for s in self.segments]

    def crossing_for_pair(self, a: int, b: int) -> Crossing | None:
        key = (min(a, b), max(a, b))
        for c in self.crossings:
            if key in c.pairs:
                return c
        return None

    def to_json(self) -> dict:
        spec = self.spec
        return {
            "param": spec.param,
            "score_kind": spec.score_kind,
            "lo": spec.lo,
            "hi": spec.hi,
            "grid_points": spec.grid_points,
            "spacing": spec.resolved_spacing,
            "grid_resolution": self.grid_resolution,
            "refine_tol": spec.refine_tol,
            "tie_tol": spec.tie_tol,
            "edge": list(spec.edge) if spec.edge else None,
            "base_lambda": spec.base_lambda if spec.param == "epsilon" else None,
            "labels": list(self.labels),
            "segments": [
                {"lo": s.lo, "hi": s.hi,
                 "ranking": s.ranking.to_json(self.labels),
                 "ranking_text": s.ranking.format(self.labels)}
                for s in self.segments
            ],
            "crossings": [
                {"value": c.value, "kind": c.kind,
                 "pairs": [[self.labels[a], self.labels[b]] for a, b in c.pairs]}
                for c in self.crossings
            ],
            "metadata": self.metadata,
        }

    def format_table(self, digits: int = 12) -> str:
        """Two-column table: segment start and ranking, as in a results table."""
        name = "lambda" if self.spec.param == "lambda" else "epsilon"
        starts = [f"{s.lo:.{digits}g}" for s in self.segments]
        width = max(len(name), *(len(x) for x in starts))
        lines = [f"{name:<{width}}  ranking by {self.spec.score_kind}"]
        for start, seg in zip(starts, self.segments):
            lines.append(f"{start:<{width}}  {seg.ranking.format(self.labels)}")
        return "\n".join(lines)


class _Evaluator:
    """Score function with memoization, used inside one sweep."""

    def __init__(self, fn, param: str):
        self.fn = fn
        self.param = param
        self.cache: dict[float, np.ndarray] = {}

    def __call__(self, x: float) -> np.ndarray:
        x = float(x)
        hit = self.cache.get(x)
        if hit is None:
            try:
                hit = self.fn(x)
            except TruncationNotConverged as exc:
                exc.param_value = x
                exc.args = (f"{exc.args[0]} at {self.param} = {x:g}",)
                raise
            self.cache[x] = hit
        return hit


def _numerically_zero(values: np.ndarray, p: int, q: int) -> bool:
    scale = tie_scale(values)
    return abs(values[p] - values[q]) <= 16 * len(values) * np.finfo(float).eps * scale


def _locate_tie_event(ev, p, q, a, b, ra, rb, spec) -> float:
    """Where a pair enters or leaves a tie inside ``[a, b]``.

    If the score difference vanishes inside the tie window, the event sits
    at that root, so ties that open from one exact equality (a symmetric
    graph being perturbed) coincide. Otherwise it is the window edge.
    """
    tie_tol, tol = spec.tie_tol, spec.refine_tol
    diff = lambda x: ev(x)[p] - ev(x)[q]
    if ra == 0:
        w = _bisect_predicate(lambda x: pair_relation(ev(x), p, q, tie_tol) == 0, a, b, tol)
        if _numerically_zero(ev(a), p, q):
            return a
        da = diff(a)
        if (da > 0) != (rb > 0) and w > a:
            dw = diff(w)
            if (dw > 0) == (rb > 0):
                return find_crossing(diff, (a, w), tol)
        return w
    w = _bisect_predicate(lambda x: pair_relation(ev(x), p, q, tie_tol) == ra, a, b, tol)
    if _numerically_zero(ev(b), p, q):
        return b
    db = diff(b)
    if (db > 0) != (ra > 0) and w < b:
        dw = diff(w)
        if (dw > 0) == (ra > 0):
            return find_crossing(diff, (w, b), tol)
    return w


def _resolve_cell(ev: _Evaluator, a: float, b: float, spec: SweepSpec) -> list[Crossing]:
    va, vb = ev(a), ev(b)
    tie_tol, tol = spec.tie_tol, spec.refine_tol
    n = len(va)
    points = []
    for p in range(n):
        for q in range(p + 1, n):
            ra = pair_relation(va, p, q, tie_tol)
            rb = pair_relation(vb, p, q, tie_tol)
            if ra == rb:
                continue
            if ra * rb == -1:
                x = find_crossing(lambda x: ev(x)[p] - ev(x)[q], (a, b), tol)
                points.append((x, (p, q), "flip"))
            else:
                x = _locate_tie_event(ev, p, q, a, b, ra, rb, spec)
                points.append((x, (p, q), "tie"))
    if not points:
        # Only possible through tie chaining: locate the ranking change itself.
        ref = ranking_from_scores(va, tie_tol)
        x = _bisect_predicate(lambda x: ranking_from_scores(ev(x), tie_tol) == ref, a, b, tol)
        points.append((x, (), "tie"))
    points.sort()
    events: list[list] = []
    for x, pair, kind in points:
        if events and x - events[-1][-1][0] <= tol:
            events[-1].append((x, pair, kind))
        else:
            events.append([(x, pair, kind)])
    out = []
    for group in events:
        xs = [g[0] for g in group]
        pairs = tuple(sorted({g[1] for g in group if g[1]}))
        kind = "flip" if any(g[2] == "flip" for g in group) else "tie"
        out.append(Crossing(0.5 * (min(xs) + max(xs)), pairs, kind))
    return out


def _merge_close(crossings: list[Crossing], tol: float) -> list[Crossing]:
    """Fuse events closer than ``tol``, including ones found in adjacent cells."""
    groups: list[list[Crossing]] = []
    for c in crossings:
        if groups and c.value - groups[-1][-1].value <= tol:
            groups[-1].append(c)
        else:
            groups.append([c])
    out = []
    for g in groups:
        if len(g) == 1:
            out.append(g[0])
            continue
        values = [c.value for c in g]
        pairs = tuple(sorted({p for c in g for p in c.pairs}))
        kind = "flip" if any(c.kind == "flip" for c in g) else "tie"
        out.append(Crossing(0.5 * (min(values) + max(values)), pairs, kind))
    return out


def _has_swap(left: Ranking, right: Ranking) -> bool:
    pl, pr = left.position(), right.position()
    n = len(pl)
    return any(pl[a] < pl[b] and pr[a] > pr[b] for a in range(n) for b in range(n))


def run_sweep(score_fn: Callable[[float], np.ndarray], spec: SweepSpec,
              labels: Sequence[str], workers: int | None = None,
              metadata: dict | None = None) -> SweepReport:
    """Generic sweep driver over any parameter-to-scores function."""
    ev = _Evaluator(score_fn, spec.param)
    xs = spec.grid()
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            for x, v in zip(xs, pool.map(score_fn, xs)):
                ev.cache[float(x)] = v
    ranks = [ranking_from_scores(ev(x), spec.tie_tol) for x in xs]

    crossings: list[Crossing] = []
    for c in range(len(xs) - 1):
        if ranks[c] != ranks[c + 1]:
            crossings.extend(_resolve_cell(ev, float(xs[c]), float(xs[c + 1]), spec))
    crossings = _merge_close(sorted(crossings, key=lambda c: c.value), spec.refine_tol)

    def ranking_between(lo: float, hi: float) -> Ranking:
        inside = [k for k, x in enumerate(xs) if lo < x < hi]
        if inside:
            return ranks[inside[len(inside) // 2]]
        return ranking_from_scores(ev(0.5 * (lo + hi)), spec.tie_tol)

    bounds = [spec.lo] + [c.value for c in crossings] + [spec.hi]
    seg_ranks = [ranking_between(bounds[k], bounds[k + 1]) for k in range(len(bounds) - 1)]
    # Drop crossings whose two sides agree (e.g. a pair that swapped back).
    kept_crossings, segments = [], []
    start, current = bounds[0], seg_ranks[0]
    for k, cross in enumerate(crossings):
        nxt = seg_ranks[k + 1]
        if nxt == current:
            continue
        segments.append(Segment(start, cross.value, current))
        kind = "flip" if _has_swap(current, nxt) else "tie"
        kept_crossings.append(replace(cross, kind=kind))
        start, current = cross.value, nxt
    segments.append(Segment(start, spec.hi, current))
    return SweepReport(spec, tuple(labels), tuple(segments), tuple(kept_crossings),
                       float(np.max(np.diff(xs))), dict(metadata or {}))


def _graph_parts(d) -> tuple[np.ndarray, tuple[str, ...]]:
    if isinstance(d, WeightedDigraph):
        return d.d, d.labels
    m = as_matrix(d)
    return m, default_labels(m.shape[0])


def lambda_sweep(d, spec: SweepSpec, workers: int | None = None) -> SweepReport:
    """Segment the lambda axis into intervals of constant indirect ranking."""
    if spec.param != "lambda":
        raise ValueError("lambda_sweep needs spec.param == 'lambda'")
    m, labels = _graph_parts(d)
    series = PwpSeries(m)

    def scores(lam):
        t = series.transform(lam, spec.series_tol, spec.max_terms)
        return score_values(t.t, spec.score_kind)

    return run_sweep(scores, spec, labels, workers)


def epsilon_sweep(base: WeightedDigraph, edge: tuple[str, str] | None, spec: SweepSpec,
                  workers: int | None = None) -> SweepReport:
    """Grow the weight of ``edge = (source, target)`` by epsilon at fixed lambda."""
    if spec.param != "epsilon":
        raise ValueError("epsilon_sweep needs spec.param == 'epsilon'")
    edge = edge if edge is not None else spec.edge
    if edge is None:
        raise ValueError("epsilon sweep needs an edge")
    s, t = base.index(edge[0]), base.index(edge[1])
    if s == t:
        raise ValueError("the perturbed edge must join two distinct vertices")
    d0 = np.array(base.d)
    params = PwpParams(spec.base_lambda, spec.series_tol, spec.max_terms)

    def scores(eps):
        d = d0.copy()
        d[t, s] += eps
        return score_values(pwp_transform(d, params).t, spec.score_kind)

    if spec.edge is None:
        spec = replace(spec, edge=(str(edge[0]), str(edge[1])))
    return run_sweep(scores, spec, base.labels, workers,
                     metadata={"edge": [str(edge[0]), str(edge[1])]})


@dataclass(frozen=True)
class ConjectureReport:
    """Crossings among the importance curves of vertices ``1..k`` of L_n."""

    n: int
    k: int
    lambda_hi: float
    grid: int
    crossings: dict
    order_ok: bool
    sequential_order: bool = False

    @property
    def total(self) -> int:
        return sum(len(v) for v in self.crossings.values())

    @property
    def one_per_pair(self) -> bool:
        return all(len(v) == 1 for v in self.crossings.values())

    @property
    def expected_total(self) -> int:
        return self.k * (self.k - 1) // 2

    def to_json(self) -> dict:
        return {
            "n": self.n, "k": self.k, "lambda_hi": self.lambda_hi, "grid": self.grid,
            "total": self.total, "expected_total": self.expected_total,
            "one_per_pair": self.one_per_pair, "order_ok": self.order_ok,
            "sequential_order": self.sequential_order,
            "crossings": [{"i": i, "j": j, "values": list(v)}
                          for (i, j), v in sorted(self.crossings.items())],
        }


def verify_unique_crossings(n: int, lambda_hi: float, grid: int = 2000,
                            tol: float = 1e-12) -> ConjectureReport:
    """Count crossings of ``I_i`` and ``I_j`` on L_n for ``1 <= i < j <= k``.

    Sign changes of ``e_+^lam (I_i - I_j)`` are located on a uniform grid
    over ``(0, lambda_hi]`` and refined. Also checks that every crossing of
    ``i`` with a later vertex happens before any crossing of a later ``j``
    with a vertex after it.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    k = half_size(n)
    xs = np.linspace(lambda_hi / grid, lambda_hi, grid)
    found: dict[tuple[int, int], tuple[float, ...]] = {}
    for i in range(1, k + 1):
        ci = np.array(importance_coefficients(n, i))
        for j in range(i + 1, k + 1):
            diff = ci - np.array(importance_coefficients(n, j))
            f = lambda x, diff=diff: exp_poly(diff, x)
            vals = np.array([f(x) for x in xs])
            roots = []
            for a in range(grid - 1):
                if vals[a] == 0:
                    roots.append(float(xs[a]))
                elif vals[a] * vals[a + 1] < 0:
                    roots.append(find_crossing(f, (xs[a], xs[a + 1]), tol))
            found[(i, j)] = tuple(roots)

    points = [(i, j, v[0]) for (i, j), v in found.items() if len(v) == 1]
    # c_ij must increase in both indices: c_il < c_jm when i <= j, l <= m.
    order_ok = all(c1 < c2 for i, l, c1 in points for j, m, c2 in points
                   if i <= j and l <= m and (i, l) != (j, m))
    lex = [found[(i, j)][0] for i in range(1, k + 1) for j in range(i + 1, k + 1)
           if len(found[(i, j)]) == 1]
    sequential = all(x < y for x, y in zip(lex, lex[1:]))
    return ConjectureReport(n, k, float(lambda_hi), grid, found, order_ok, sequential)
