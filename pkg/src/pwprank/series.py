"""The PWP transform ``T(D, lam) = (exp(lam D) - I) / (exp(lam) - 1)``.

The series ``sum_{k>=1} D^k lam^k / k!`` is summed directly; there is no
scaling and squaring. Powers of ``D`` do not depend on ``lam``, so
:class:`PwpSeries` caches them and a sweep over ``lam`` only redoes the
weighted sum.

Matrix products use a canonical reduction order (summands sorted by value
before adding), which makes the result a function of the multiset of
summands only. Relabelling the vertices therefore permutes the output
bit-for-bit, and a fixed input always gives the same bits.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import TruncationNotConverged
from .graph import as_matrix

DEFAULT_TOL = 1e-12
DEFAULT_MAX_TERMS = 512

# Above this size the n^3 sort gets expensive; fall back to BLAS products,
# which are equivariant only up to rounding.
CANONICAL_MATMUL_MAX_N = 96


def eplus(x):
    """``e_+^x = e^x - 1``, accurate near 0. Works on scalars and arrays."""
    if np.ndim(x) == 0:
        return math.expm1(x)
    return np.expm1(x)


def log_eplus(x: float) -> float:
    """``log(e^x - 1)`` for ``x > 0`` without overflow."""
    if x > 30.0:
        return x + math.log1p(-math.exp(-x))
    return math.log(math.expm1(x))


def canonical_sum(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """Sum along ``axis`` after sorting, so the result ignores summand order."""
    return np.sort(a, axis=axis).sum(axis=axis)


def canonical_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[0] > CANONICAL_MATMUL_MAX_N:
        return a @ b
    prod = a[:, :, None] * b[None, :, :]
    prod = np.ascontiguousarray(np.moveaxis(prod, 1, 2))
    prod.sort(axis=-1)
    return prod.sum(axis=-1)


def inf_norm(a: np.ndarray) -> float:
    """Maximum absolute row sum."""
    return float(canonical_sum(np.abs(a), axis=1).max())


@dataclass(frozen=True)
class PwpParams:
    lam: float
    tol: float = DEFAULT_TOL
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError(f"lambda must be positive and finite, got {self.lam}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")

    def with_lam(self, lam: float) -> "PwpParams":
        return PwpParams(lam, self.tol, self.max_terms)


@dataclass(frozen=True)
class InfluenceMatrix:
    """Matrix of indirect influences produced at a given lambda."""

    t: np.ndarray
    lam: float
    truncation_terms: int

    def __post_init__(self):
        self.t.setflags(write=False)


class PwpSeries:
    """Lazily cached powers of ``D`` for repeated PWP evaluation.

    The powers are stored scaled by a power of two ``s`` close to
    ``||D||_inf`` so that they stay bounded; ``P_k = (D / s)^k`` is exact
    whenever ``D^k`` is.
    """

    def __init__(self, d):
        self.d = as_matrix(d)
        self.n = self.d.shape[0]
        self.norm = inf_norm(self.d)
        self.scale = 2.0 ** round(math.log2(self.norm)) if self.norm > 0 else 1.0
        self._powers = [self.d / self.scale]
        # Index of the first vanishing power, once seen.
        self.nilpotent_index: int | None = 0 if self.norm == 0 else None
        self._lock = threading.Lock()

    def power(self, k: int) -> np.ndarray | None:
        """``(D / scale)^k``, or None if that power is exactly zero."""
        with self._lock:
            if self.nilpotent_index is not None and k >= self.nilpotent_index:
                return None
            while len(self._powers) < k:
                nxt = canonical_matmul(self._powers[-1], self._powers[0])
                if not np.any(nxt):
                    self.nilpotent_index = len(self._powers) + 1
                    return None
                self._powers.append(nxt)
            return self._powers[k - 1]

    def unnormalized(self, lam: float, tol: float = DEFAULT_TOL,
                     max_terms: int = DEFAULT_MAX_TERMS) -> tuple[np.ndarray, int]:
        """``e_+^{lam D}`` by the truncated series, plus the number of terms.

        Stops after term ``k`` once ``(||D|| lam)^k / k! < tol * (||S_k|| + 1)``
        or when the next power vanishes.
        """
        total = np.zeros((self.n, self.n))
        if self.norm == 0:
            return total, 0
        comp = np.zeros_like(total)
        weight = 1.0
        step = lam * self.scale
        log_x = math.log(self.norm * lam)
        bound = math.inf
        for k in range(1, max_terms + 1):
            p = self.power(k)
            if p is None:
                return total, k - 1
            weight *= step / k
            if not math.isfinite(weight):
                raise TruncationNotConverged(
                    f"series term weight overflowed at term {k} "
                    f"(||D||*lambda = {self.norm * lam:g})", partial=None, bound=math.inf, terms=k)
            # Kahan-compensated accumulation, elementwise.
            y = weight * p - comp
            new = total + y
            comp = (new - total) - y
            total = new
            bound = math.exp(min(k * log_x - math.lgamma(k + 1), 709.0))
            if not np.all(np.isfinite(total)):
                raise TruncationNotConverged(
                    f"series overflowed at term {k} (||D||*lambda = {self.norm * lam:g})",
                    partial=None, bound=bound, terms=k)
            if bound < tol * (inf_norm(total) + 1.0):
                return total, k
        raise TruncationNotConverged(
            f"PWP series not converged after {max_terms} terms "
            f"(term bound {bound:.3g}, ||D||*lambda = {self.norm * lam:g})",
            partial=total / eplus(lam), bound=bound, terms=max_terms)

    def transform(self, lam: float, tol: float = DEFAULT_TOL,
                  max_terms: int = DEFAULT_MAX_TERMS) -> InfluenceMatrix:
        params = PwpParams(lam, tol, max_terms)
        s, k = self.unnormalized(params.lam, params.tol, params.max_terms)
        if params.lam > 700.0:
            # e_+^lam overflows; divide in two exact-exponent steps instead.
            return InfluenceMatrix(s * math.exp(-log_eplus(params.lam)), params.lam, k)
        return InfluenceMatrix(s / eplus(params.lam), params.lam, k)


def pwp_transform(d, params: PwpParams | float) -> InfluenceMatrix:
    """Matrix of indirect influences ``T(D, lam)``.

    ``params`` may be a bare lambda, in which case default tolerances apply.

    >>> import numpy as np
    >>> t = pwp_transform(np.eye(3, k=-1), 1.0).t
    >>> round(t[2, 0] * (np.e - 1), 12)
    0.5
    """
    if not isinstance(params, PwpParams):
        params = PwpParams(float(params))
    return PwpSeries(d).transform(params.lam, params.tol, params.max_terms)


def pwp_rescaled(d, c: float, params: PwpParams | float) -> InfluenceMatrix:
    """``T(c D, lam)``; equals ``e_+^{c lam} / e_+^{lam} * T(D, c lam)``."""
    if not c > 0:
        raise ValueError(f"scale factor must be positive, got {c}")
    return pwp_transform(c * as_matrix(d), params)
