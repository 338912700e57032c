"""Closed forms for the directed path L_n and the directed cycle Z_n.

Vertices are numbered ``1 .. n`` here, matching the formulas. For L_n the
normalized indirect matrix is ``T[i, j] = lam^(i-j) / (i-j)! / e_+^lam`` for
``i > j``, so every score is a polynomial in ``lam`` divided by ``e_+^lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rankings import ScoreVector
from .series import eplus, log_eplus


@dataclass(frozen=True)
class CrossingPoint:
    """Value of lambda where the importance curves of ``i`` and ``j`` meet."""

    i: int
    j: int
    lambda_star: float
    method: str = "analytic"

    def __post_init__(self):
        if not self.i < self.j:
            raise ValueError("crossing needs i < j")
        if not self.lambda_star > 0:
            raise ValueError("crossing point must be positive")


def half_size(n: int) -> int:
    """``k`` with ``n = 2k`` or ``n = 2k - 1``."""
    return (n + 1) // 2


def exp_poly(coeffs, lam: float) -> float:
    """``sum_m coeffs[m-1] * lam^m / m!`` for ``m = 1 .. len(coeffs)``."""
    total = 0.0
    term = 1.0
    for m, c in enumerate(coeffs, 1):
        term *= lam / m
        total += c * term
    return total


def _normalized_exp_poly(coeffs, lam: float) -> float:
    if lam <= 700.0:
        return exp_poly(coeffs, lam) / eplus(lam)
    # Beyond this e^lam overflows; work in the log domain.
    log_norm = log_eplus(lam)
    log_lam = math.log(lam)
    return sum(c * math.exp(m * log_lam - math.lgamma(m + 1) - log_norm)
               for m, c in enumerate(coeffs, 1) if c)


def _check_vertex(n: int, j: int):
    if n < 2:
        raise IndexError(f"L_n needs n >= 2, got n = {n}")
    if not 1 <= j <= n:
        raise IndexError(f"vertex {j} out of range 1..{n}")


def importance_coefficients(n: int, j: int) -> list[int]:
    """Multiplicities ``c_m`` in ``e_+^lam I_j = sum_m c_m lam^m / m!`` on L_n.

    Follows the three cases: end vertices, left half, right half.
    """
    _check_vertex(n, j)
    if j in (1, n):
        return [1] * (n - 1)
    if 2 * j <= n + 1:
        return [2] * (j - 1) + [1] * (n - 2 * j + 1) + [0] * (j - 1)
    return [2] * (n - j) + [1] * (2 * j - n - 1) + [0] * (n - j)


def linear_importance_numerator(n: int, j: int, lam: float) -> float:
    """``e_+^lam * I_j(lam)`` on L_n."""
    return exp_poly(importance_coefficients(n, j), lam)


def linear_importance(n: int, j: int, lam: float) -> float:
    """Importance ``I_j(lam)`` of vertex ``j`` in L_n."""
    return _normalized_exp_poly(importance_coefficients(n, j), lam)


def linear_influence(n: int, i: int, lam: float) -> float:
    """Indirect influence ``F_i(lam) = (lam + ... + lam^(n-i)/(n-i)!) / e_+^lam``."""
    _check_vertex(n, i)
    if i == n:
        return 0.0
    return _normalized_exp_poly([1] * (n - i), lam)


def crossing_consecutive(n: int, i: int) -> CrossingPoint:
    """``c_{i,i+1} = ((n-i)! / i!)^(1/(n-2i))`` via log-gamma.

    Valid for ``1 <= i <= k-1`` with ``n = 2k`` or ``2k - 1``.
    """
    k = half_size(n)
    if n < 3 or not 1 <= i <= k - 1:
        raise IndexError(f"consecutive crossing needs 1 <= i <= {k - 1} for n = {n}, got {i}")
    log_c = (math.lgamma(n - i + 1) - math.lgamma(i + 1)) / (n - 2 * i)
    return CrossingPoint(i, i + 1, math.exp(log_c), "analytic")


def circuit_indirect(n: int, k: int, lam: float, tol: float = 1e-16) -> float:
    """``T_k(lam)`` on Z_n: ``sum_l lam^(k+ln) / (k+ln)! / e_+^lam``.

    Independent of the starting vertex. Terms are added until one falls below
    ``tol`` times the larger of the partial sum and the first term, and only
    once the terms have started to decrease.
    """
    if n < 2 or not 1 <= k <= n:
        raise IndexError(f"need n >= 2 and 1 <= k <= n, got n = {n}, k = {k}")
    log_lam = math.log(lam)
    log_norm = log_eplus(lam)
    first = math.exp(k * log_lam - math.lgamma(k + 1) - log_norm)
    total = 0.0
    m = k
    while True:
        term = math.exp(m * log_lam - math.lgamma(m + 1) - log_norm)
        total += term
        if m > lam and term < tol * max(total, first):
            return total
        m += n


def circuit_scores(n: int, lam: float, tol: float = 1e-16) -> tuple[ScoreVector, ScoreVector]:
    """(importance, influence) on Z_n; both constant across vertices."""
    influence = math.fsum(circuit_indirect(n, k, lam, tol) for k in range(1, n + 1))
    return (ScoreVector("importance", np.full(n, 2.0 * influence), float(lam)),
            ScoreVector("influence", np.full(n, influence), float(lam)))
