"""Real-diagonalizable networks: spectral evaluation and exponential sums.

If ``D = A diag(d) A^-1`` with real ``d``, then

    e_+^lam T(D, lam) = A diag(e_+^(d_r lam)) A^-1,

so every score, and every difference of two scores, multiplied by
``e_+^lam`` is an exponential sum ``sum_r a_r e_+^(d_r lam)``. Such a sum
that is not identically zero has finitely many positive roots, and past a
computable ``lambda_max`` it has none, so the ranking eventually freezes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import Degenerate, IllConditionedBasis, NoBracket, NotRealDiagonalizable
from .graph import as_matrix
from .rankings import KINDS
from .series import InfluenceMatrix, PwpParams, eplus, pwp_transform
from .sweep import find_crossing

DEFAULT_RECONSTRUCTION_TOL = 1e-8
IMAG_TOL = 1e-10
ZERO_COEF_TOL = 1e-12


@dataclass(frozen=True)
class RealSpectrum:
    eigenvalues: np.ndarray   # ascending
    basis: np.ndarray         # columns are eigenvectors
    basis_inverse: np.ndarray
    condition_estimate: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis_inverse


def real_eigendecomposition(d, reconstruction_tol: float = DEFAULT_RECONSTRUCTION_TOL) -> RealSpectrum:
    """Factor ``D = A diag(d) A^-1`` over the reals.

    Symmetric input goes through ``eigh`` (orthogonal basis); anything else
    through ``eig``, which is then checked for real eigenvalues and a
    usable basis.

    Raises:
        NotRealDiagonalizable: some eigenvalue has a non-negligible imaginary part.
        IllConditionedBasis: the eigenvectors do not reconstruct ``D``.
    """
    d = as_matrix(d)
    n = d.shape[0]
    if np.array_equal(d, d.T):
        w, a = np.linalg.eigh(d)
        a_inv = a.T.copy()
        cond = float(np.linalg.cond(a))
    else:
        w, a = np.linalg.eig(d)
        scale = max(1.0, float(np.max(np.abs(w))))
        imag = np.abs(w.imag)
        if np.any(imag > IMAG_TOL * scale):
            raise NotRealDiagonalizable(
                f"complex eigenvalues (max |imag| = {imag.max():.3g})",
                imaginary_parts=imag[imag > IMAG_TOL * scale])
        w, a = w.real, a.real
        order = np.argsort(w, kind="stable")
        w, a = w[order], a[:, order]
        cond = float(np.linalg.cond(a))
        if not math.isfinite(cond) or cond > 1.0 / np.finfo(float).eps:
            raise IllConditionedBasis(f"eigenbasis is numerically singular (cond = {cond:.3g})", cond)
        a_inv = np.linalg.inv(a)
    spec = RealSpectrum(w, a, a_inv, cond)
    d_scale = max(1.0, float(np.linalg.norm(d)))
    err = np.linalg.norm(spec.reconstruct() - d) / d_scale
    ident_err = np.linalg.norm(a @ a_inv - np.eye(n)) / math.sqrt(n)
    if err > reconstruction_tol or ident_err > reconstruction_tol:
        raise IllConditionedBasis(
            f"eigenbasis reconstruction error {max(err, ident_err):.3g} exceeds "
            f"{reconstruction_tol:g} (cond = {cond:.3g})", cond)
    return spec


def pwp_transform_spectral(spec: RealSpectrum, lam: float) -> InfluenceMatrix:
    """``T(D, lam) = A diag(e_+^(d_r lam) / e_+^lam) A^-1``."""
    PwpParams(lam)
    diag = eplus(spec.eigenvalues * lam) / eplus(lam)
    return InfluenceMatrix((spec.basis * diag) @ spec.basis_inverse, float(lam), 0)


def pwp_transform_auto(d, params: PwpParams | float) -> InfluenceMatrix:
    """Spectral evaluation when ``D`` is real-diagonalizable, series otherwise."""
    lam = params.lam if isinstance(params, PwpParams) else float(params)
    try:
        spec = real_eigendecomposition(d)
    except NotRealDiagonalizable:
        warnings.warn("complex eigenvalues: trigonometric terms may produce infinitely "
                      "many crossing points; falling back to the series engine",
                      RuntimeWarning, stacklevel=2)
        return pwp_transform(d, params)
    except IllConditionedBasis:
        warnings.warn("eigenbasis ill-conditioned; falling back to the series engine",
                      RuntimeWarning, stacklevel=2)
        return pwp_transform(d, params)
    return pwp_transform_spectral(spec, lam)


@dataclass(frozen=True)
class ExpSum:
    """``lam -> sum_r coef_r * e_+^(rate_r * lam)`` with strictly increasing rates."""

    terms: tuple[tuple[float, float], ...]   # (coefficient, rate)

    @property
    def constant(self) -> float:
        """``a = sum_r a_r``: the equation ``sum a_r e^(d_r lam) = a`` has the same roots."""
        return math.fsum(c for c, _ in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        total = np.zeros_like(lam)
        for c, r in self.terms:
            total = total + c * np.expm1(r * lam)
        return total if total.ndim else float(total)


def _kind_weights(spec: RealSpectrum, kind: str) -> np.ndarray:
    """``W[v, r]``: coefficient of ``e_+^(d_r lam)`` in ``e_+^lam * score_v``."""
    a, b = spec.basis, spec.basis_inverse
    dep = a * b.sum(axis=1)[None, :]          # rows:    sum_j A[v,r] B[r,j]
    inf = b.T * a.sum(axis=0)[None, :]        # columns: sum_j A[j,r] B[r,v]
    if kind == "dependence":
        return dep
    if kind == "influence":
        return inf
    return dep + inf


def score_difference_expsum(spec: RealSpectrum, kind: str, i: int, j: int,
                            dedup_tol: float | None = None) -> ExpSum:
    """Exponential sum equal to ``e_+^lam (score_i - score_j)``; 0-based vertices.

    Eigenvalues within ``dedup_tol`` (default ``1e-9 max|d|``) are merged by
    adding their coefficients. Zero rates contribute nothing and are
    dropped, as are coefficients below ``1e-12`` times the basis scale.
    """
    if kind not in KINDS:
        raise ValueError(f"score kind must be one of {KINDS}")
    if i == j:
        return ExpSum(())
    w = _kind_weights(spec, kind)
    coef = w[i] - w[j]
    d = spec.eigenvalues
    dmax = float(np.max(np.abs(d))) if len(d) else 0.0
    if dedup_tol is None:
        dedup_tol = 1e-9 * dmax
    basis_scale = max(1.0, float(np.abs(spec.basis).max() * np.abs(spec.basis_inverse).max()))
    zero_tol = ZERO_COEF_TOL * basis_scale

    groups: list[list[int]] = []
    for r in np.argsort(d, kind="stable"):
        if groups and d[r] - d[groups[-1][-1]] <= dedup_tol:
            groups[-1].append(int(r))
        else:
            groups.append([int(r)])
    terms = []
    for g in groups:
        rate = float(np.mean(d[g]))
        c = math.fsum(coef[g])
        if abs(rate) <= dedup_tol or abs(c) <= zero_tol:
            continue
        terms.append((c, rate))
    return ExpSum(tuple(terms))


@dataclass(frozen=True)
class RootIsolation:
    roots: tuple[float, ...]
    lambda_max: float       # no root beyond this; inf when no bound applies


def dominance_bound(e: ExpSum) -> float:
    """Smallest ``L >= 0`` with ``|a_m| e^(d_m lam) > sum_{r<m} |a_r| e^(d_r lam) + |a|``
    for all ``lam > L``, where ``m`` is the top rate and ``a = sum a_r``.

    Past ``L`` the equation ``sum a_r e^(d_r lam) = a`` cannot hold. Returns
    ``inf`` if the top rate is not positive.
    """
    if e.is_zero:
        raise Degenerate("identically zero exponential sum")
    a_m, d_m = e.terms[-1]
    if d_m <= 0:
        return math.inf
    rest = [(abs(c), r) for c, r in e.terms[:-1]]
    const = abs(e.constant)

    # g increases in lam, since every exponent below is negative.
    def g(lam):
        return abs(a_m) - sum(c * math.exp((r - d_m) * lam) for c, r in rest) \
            - const * math.exp(-d_m * lam)

    if g(0.0) > 0:
        return 0.0
    hi = 1.0
    while g(hi) <= 0:
        hi *= 2.0
        if hi > 1e300:
            return math.inf
    lo = 0.0
    while hi - lo > 1e-12 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            hi = mid
        else:
            lo = mid
    return hi


def isolate_roots(e: ExpSum, interval: tuple[float, float], grid: int = 2000,
                  tol: float = 1e-12) -> RootIsolation:
    """Sign-change roots of ``e`` on ``interval`` plus a no-root bound.

    The scan runs on ``grid`` log-spaced points over the part of the
    interval below ``lambda_max``; beyond that no root can exist.

    Raises:
        Degenerate: ``e`` is identically zero (the two scores coincide).
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    if e.is_zero:
        raise Degenerate("identically zero exponential sum: scores coincide for every lambda")
    lam_max = dominance_bound(e)
    top = min(hi, lam_max) if math.isfinite(lam_max) else hi
    roots: list[float] = []
    if top > lo:
        xs = np.geomspace(lo, top, grid)
        vals = e(xs)
        for k in range(grid - 1):
            if vals[k] == 0:
                roots.append(float(xs[k]))
            elif vals[k] * vals[k + 1] < 0:
                try:
                    roots.append(find_crossing(e, (xs[k], xs[k + 1]), tol))
                except NoBracket:
                    pass
        if vals[-1] == 0 and top == hi:
            roots.append(float(xs[-1]))
    return RootIsolation(tuple(roots), lam_max)
