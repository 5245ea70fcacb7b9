"""Admissibility of mfBm parameter sets.

A parameter set defines a legitimate covariance exactly when a Hermitian
matrix built from the Hurst exponents and the pair coefficients is
positive semidefinite. For p = 2 the condition collapses to a coherence
bound, which also yields closed admissible regions in the coefficient
plane and the maximal attainable correlation between two components.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gamma as gamma_fn

from .params import MfbmParams, PairKind
from .spectral import coherence, spectral_coeff

__all__ = [
    "SpecialCase",
    "admissibility_matrix",
    "AdmissibilityReport",
    "check_admissibility",
    "max_correlation",
    "admissible_boundary",
    "pair_coherence_at",
]


class SpecialCase(Enum):
    """Named one-parameter subfamilies of the cross coefficients."""

    CAUSAL = "causal"
    WELL_BALANCED = "well_balanced"


def admissibility_matrix(params: MfbmParams) -> np.ndarray:
    """Hermitian matrix whose positive semidefiniteness decides existence.

    Entry (i, j) is Gamma(H_i+H_j+1) times the positive-frequency spectral
    coefficient of the pair. Scales sigma do not enter. Hermitian holds
    exactly: swapping indices conjugates the coefficient bitwise.
    """
    p = params.p
    q = np.empty((p, p), dtype=complex)
    for i in range(p):
        for j in range(p):
            q[i, j] = gamma_fn(params.hurst_sum(i, j) + 1.0) * spectral_coeff(
                params, i, j, 1
            )
    return q


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of the semidefiniteness test.

    coherence is filled for p = 2 only, where the scalar criterion
    "coherence <= 1" is equivalent to the eigenvalue test.
    """

    admissible: bool
    min_eigenvalue: float
    threshold: float
    coherence: float | None = None

    def __bool__(self) -> bool:
        return self.admissible


def check_admissibility(params: MfbmParams, psd_tol: float = 1e-10) -> AdmissibilityReport:
    """Eigenvalue test of the admissibility matrix.

    Admissible iff the minimum eigenvalue is at least -psd_tol times the
    largest entry modulus. Eigenvalues rather than a Cholesky attempt so
    the margin is visible in the report.
    """
    if psd_tol < 0.0:
        raise ValueError("psd_tol must be nonnegative")
    q = admissibility_matrix(params)
    eigenvalues = np.linalg.eigvalsh(q)
    threshold = psd_tol * float(np.max(np.abs(q)))
    c12 = coherence(params, 0, 1) if params.p == 2 else None
    return AdmissibilityReport(
        admissible=bool(eigenvalues[0] >= -threshold),
        min_eigenvalue=float(eigenvalues[0]),
        threshold=threshold,
        coherence=c12,
    )


def max_correlation(h1: float, h2: float, case: SpecialCase) -> float:
    """Largest symmetric coefficient admitting a bivariate process with
    Hurst exponents (h1, h2), under the given special case.

    The well-balanced family attains the unconstrained maximum; the causal
    family loses a factor |cos(pi (h1-h2) / 2)|. Continuous through
    h1 + h2 = 1, where the half-sum sine is 1.
    """
    for h in (h1, h2):
        if not 0.0 < h < 1.0:
            raise ValueError(f"Hurst exponent {h} outside (0, 1)")
    alpha = h1 + h2
    rho_sq = (
        gamma_fn(2.0 * h1 + 1.0)
        * gamma_fn(2.0 * h2 + 1.0)
        / gamma_fn(alpha + 1.0) ** 2
        * np.sin(np.pi * h1)
        * np.sin(np.pi * h2)
        / np.sin(np.pi * alpha / 2.0) ** 2
    )
    if case is SpecialCase.CAUSAL:
        rho_sq *= np.cos(np.pi * (h1 - h2) / 2.0) ** 2
    return float(np.sqrt(rho_sq))


def pair_coherence_at(
    h1: float,
    h2: float,
    rho: float,
    eta_prime: float,
    one_tol: float = 1e-9,
) -> float:
    """Coherence of a bivariate set at a point of the (rho, eta') plane.

    eta' is the branch-continuous antisymmetric coordinate: for generic
    pairs eta = eta' / (1 - h1 - h2); for unit-sum pairs eta' is the
    coefficient itself.
    """
    if abs(h1 + h2 - 1.0) <= one_tol:
        eta = eta_prime
    else:
        eta = eta_prime / (1.0 - h1 - h2)
    params = MfbmParams(
        H=[h1, h2],
        sigma=[1.0, 1.0],
        rho=[[1.0, rho], [rho, 1.0]],
        eta=[[0.0, eta], [-eta, 0.0]],
        one_tol=one_tol,
    )
    return coherence(params, 0, 1)


def admissible_boundary(
    h1: float,
    h2: float,
    n_points: int = 361,
    one_tol: float = 1e-9,
) -> np.ndarray:
    """Points of the unit-coherence curve in the (rho, eta') plane.

    Returns an (n_points, 2) array tracing the closed boundary of the
    admissible region for a bivariate process with exponents (h1, h2);
    the first and last rows coincide. Each point is located by bisection
    along a ray from the origin, where coherence grows quadratically.
    """
    if n_points < 2:
        raise ValueError("need at least 2 points to trace a closed curve")
    thetas = 2.0 * np.pi * np.arange(n_points) / (n_points - 1)
    out = np.empty((n_points, 2))
    for k, theta in enumerate(thetas):
        u, v = np.cos(theta), np.sin(theta)
        coh = lambda r: pair_coherence_at(h1, h2, r * u, r * v, one_tol)
        lo, hi = 0.0, 1.0
        doublings = 0
        while coh(hi) < 1.0:
            lo, hi = hi, 2.0 * hi
            doublings += 1
            if doublings > 200:
                raise ValueError(
                    f"no admissibility boundary along direction theta={theta}"
                )
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if coh(mid) < 1.0:
                lo = mid
            else:
                hi = mid
        r = 0.5 * (lo + hi)
        out[k] = (r * u, r * v)
    out[-1] = out[0]  # same ray at theta = 0 and 2 pi; close the curve exactly
    return out
