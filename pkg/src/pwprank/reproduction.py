"""Reference results for L_6(eps), C_6(eps) and the L_n crossing points.

The placement of the extra edge in the perturbed graphs is not known, so it is
recovered by search: every absent edge ``i -> j`` is swept and the one whose
ranking sequence matches the reference table is kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analytic import crossing_consecutive, half_size, linear_importance
from .graph import WeightedDigraph, circuit_graph, linear_graph
from .rankings import Ranking, parse_ranking, ranking_from_scores, score_values
from .series import pwp_transform
from .sweep import SweepReport, SweepSpec, epsilon_sweep, lambda_sweep

# (epsilon as printed, ranking by importance at lambda = 1)
L6_TABLE = (
    ("0", "3,4 > 2,5 > 1,6"),
    ("0.01", "4>3>2>5>1>6"),
    ("0.28", "4>2>3>5>1>6"),
    ("0.69", "4>2>5>3>1>6"),
    ("2.1", "4>2>5>1>3>6"),
    ("2.8", "2>4>5>1>3>6"),
    ("7", "2>4>5>1>6>3"),
    ("23.9", "2>4>1>5>6>3"),
)
C6_RANKING = "3,6 > 1,2 > 4,5"
C6_FIRST_EPS = 1e-4
C6_STABLE_UNTIL = 10.0


def last_digit_unit(printed: str) -> float:
    """One unit in the last printed digit: ``"0.28" -> 0.01``, ``"7" -> 1``."""
    if "." in printed:
        return 10.0 ** -len(printed.split(".")[1])
    return 1.0


@dataclass(frozen=True)
class ThresholdRow:
    printed: str
    ranking_text: str
    detected: float | None
    unit: float
    passed: bool


@dataclass
class EdgeSearch:
    """Outcome of searching for the perturbed edge."""

    edge: tuple[str, str] | None
    report: SweepReport | None
    matches: list[tuple[str, str]]
    best: list[tuple[tuple[str, str], int]] = field(default_factory=list)
    rows: list[ThresholdRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.edge is not None and bool(self.rows) and all(r.passed for r in self.rows)


def candidate_edges(g: WeightedDigraph) -> list[tuple[str, str]]:
    """Ordered pairs ``(source, target)`` of distinct vertices with no edge yet."""
    return [(g.labels[s], g.labels[t]) for s in range(g.n) for t in range(g.n)
            if s != t and g.d[t, s] == 0]


def _common_prefix(a: list[Ranking], b: list[Ranking]) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


def _consistent_with(base: WeightedDigraph, edge, spec: SweepSpec, expected: list[Ranking],
                     samples: int = 41) -> bool:
    """Necessary condition for a match: on a coarse grid every ranking seen
    is one of ``expected``, in non-decreasing table order."""
    s, t = base.index(edge[0]), base.index(edge[1])
    last = 0
    for eps in np.linspace(spec.lo, spec.hi, samples):
        d = np.array(base.d)
        d[t, s] += eps
        r = ranking_from_scores(score_values(pwp_transform(d, spec.base_lambda).t,
                                             spec.score_kind), spec.tie_tol)
        try:
            k = expected.index(r, last)
        except ValueError:
            return False
        last = k
    return True


def search_l6_edge(eps_hi: float = 40.0, grid_points: int = 401,
                   refine_tol: float = 1e-10) -> EdgeSearch:
    """Find the edge of L_6 whose epsilon sweep reproduces the reference table.

    A detected threshold passes if it lies within one unit of the printed
    value's last digit, allowing ``refine_tol`` for the refinement itself.
    """
    base = linear_graph(6)
    expected = [parse_ranking(r, base.labels) for _, r in L6_TABLE]
    spec = SweepSpec(0.0, eps_hi, param="epsilon", grid_points=grid_points,
                     refine_tol=refine_tol, base_lambda=1.0)
    candidates = candidate_edges(base)
    screened = [e for e in candidates if _consistent_with(base, e, spec, expected)]
    matches, scored, reports = [], [], {}
    # With no survivor, sweep everything so the diagnostics list real near-misses.
    for edge in screened or candidates:
        rep = epsilon_sweep(base, edge, spec)
        got = rep.rankings
        reports[edge] = rep
        scored.append((edge, _common_prefix(got, expected)))
        if got == expected:
            matches.append(edge)
    scored.sort(key=lambda x: -x[1])
    if not matches:
        return EdgeSearch(None, None, [], scored[:5])
    # Among matching edges prefer the one whose thresholds all pass.
    best_edge, best_rows = None, None
    for edge in matches:
        rows = _threshold_rows(reports[edge], refine_tol)
        if best_rows is None or sum(r.passed for r in rows) > sum(r.passed for r in best_rows):
            best_edge, best_rows = edge, rows
    return EdgeSearch(best_edge, reports[best_edge], matches, scored[:5], best_rows)


def _threshold_rows(report: SweepReport, slack: float) -> list[ThresholdRow]:
    rows = [ThresholdRow(L6_TABLE[0][0], L6_TABLE[0][1], report.spec.lo, 0.0, True)]
    for (printed, ranking), cross in zip(L6_TABLE[1:], report.crossings):
        unit = last_digit_unit(printed)
        ok = abs(cross.value - float(printed)) <= unit + slack
        rows.append(ThresholdRow(printed, ranking, cross.value, unit, bool(ok)))
    return rows


@dataclass
class CircuitCheck:
    edge: tuple[str, str] | None
    matches: list[tuple[str, str]]
    ranking_at_first: str | None
    segments: int | None

    @property
    def passed(self) -> bool:
        return self.edge is not None


def search_c6_edge(first_eps: float = C6_FIRST_EPS, stable_until: float = C6_STABLE_UNTIL,
                   grid_points: int = 200) -> CircuitCheck:
    """Find the chord of C_6 giving the reference ranking from ``first_eps`` on,
    unchanged up to ``stable_until``."""
    base = circuit_graph(6)
    target = parse_ranking(C6_RANKING, base.labels)
    spec = SweepSpec(first_eps, stable_until, param="epsilon", grid_points=grid_points,
                     spacing="log", base_lambda=1.0)
    matches = []
    for edge in candidate_edges(base):
        g = base.with_edge(edge[0], edge[1], first_eps)
        first = ranking_from_scores(score_values(pwp_transform(g.d, 1.0).t, "importance"))
        if first != target:
            continue
        rep = epsilon_sweep(base, edge, spec)
        if len(rep.segments) == 1 and rep.segments[0].ranking == target:
            matches.append(edge)
    if not matches:
        return CircuitCheck(None, [], None, None)
    return CircuitCheck(matches[0], matches, C6_RANKING, 1)


@dataclass(frozen=True)
class CrossingRow:
    n: int
    i: int
    analytic: float
    detected: float | None

    @property
    def error(self) -> float:
        return abs(self.detected - self.analytic) if self.detected is not None else float("inf")


def consecutive_crossing_table(n: int, refine_tol: float = 1e-12,
                               grid_points: int = 400) -> list[CrossingRow]:
    """Analytic ``c_{i,i+1}`` on L_n next to the value a lambda sweep finds."""
    k = half_size(n)
    analytic = [crossing_consecutive(n, i).lambda_star for i in range(1, k)]
    if not analytic:
        return []
    spec = SweepSpec(0.5 * min(analytic), 2.0 * max(analytic), grid_points=grid_points,
                     refine_tol=refine_tol)
    rep = lambda_sweep(linear_graph(n), spec)
    rows = []
    for i, c in zip(range(1, k), analytic):
        hit = rep.crossing_for_pair(i - 1, i)
        rows.append(CrossingRow(n, i, c, None if hit is None else hit.value))
    return rows


def importance_curves(n: int, lambdas) -> np.ndarray:
    """Rows ``[lam, I_1(lam), ..., I_n(lam)]`` on L_n from the closed forms."""
    lambdas = np.asarray(lambdas, dtype=float)
    out = np.empty((len(lambdas), n + 1))
    out[:, 0] = lambdas
    for j in range(1, n + 1):
        out[:, j] = [linear_importance(n, j, lam) for lam in lambdas]
    return out
