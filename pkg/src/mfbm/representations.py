"""Conversions among the three parameterizations of a mfBm.

Covariance-level coefficients (H, sigma, rho, eta), a complex spectral
factor A with A A* prescribed entrywise, and a pair of real moving
average matrices (M+, M-). The factor A is unique only up to right
multiplication by a unitary; the Cholesky factor is the canonical
choice here, with a closed-form alternative for p = 2.

The A <-> (M+, M-) change of basis uses row phases
phi_i = (pi/2)(H_i + 1/2): row i of A built from (M+, M-) is
Gamma(H_i + 1/2) (cos(phi_i) (M+ + M-) + i sin(phi_i) (M+ - M-))_i
/ sqrt(2 pi). The map degenerates at H_i = 1/2 (cos(phi_i) = 0), which
is exactly the excluded exponent of the moving average form.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn

from .existence import SpecialCase, check_admissibility
from .params import MfbmParams, PairKind
from .spectral import coherence

__all__ = [
    "CovarianceExistenceError",
    "SpectralFactor",
    "MovingAveragePair",
    "gram_target",
    "spectral_factor",
    "spectral_factor_p2",
    "ma_from_spectral",
    "spectral_from_ma",
    "params_from_ma",
    "special_case_eta",
]

HALF_EXPONENT_TOL = 1e-8


class CovarianceExistenceError(ValueError):
    """Raised when parameters do not define a legitimate covariance."""


@dataclass(frozen=True)
class SpectralFactor:
    """Complex factor A with A A* equal to the Gram target.

    diag_shift is the ridge added to the target diagonal before
    factorization; zero when the plain factorization succeeded.
    """

    matrix: np.ndarray
    diag_shift: float = 0.0

    def __post_init__(self):
        self.matrix.setflags(write=False)


@dataclass(frozen=True)
class MovingAveragePair:
    """Real matrices weighting the forward (+) and reverse (-) kernels."""

    m_plus: np.ndarray
    m_minus: np.ndarray

    def __post_init__(self):
        self.m_plus.setflags(write=False)
        self.m_minus.setflags(write=False)


def _beta_fn(a: float, b: float) -> float:
    return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b)


def gram_target(params: MfbmParams) -> np.ndarray:
    """Hermitian PSD matrix that any valid spectral factor must reproduce.

    Entry (i, j): (sigma_i sigma_j / 2 pi) Gamma(H_i+H_j+1) times the
    positive-frequency spectral coefficient.
    """
    from .existence import admissibility_matrix

    scale = np.outer(params.sigma, params.sigma) / (2.0 * np.pi)
    return scale * admissibility_matrix(params)


def spectral_factor(params: MfbmParams, psd_tol: float = 1e-10) -> SpectralFactor:
    """Lower-triangular factor of the Gram target via Cholesky.

    Admissibility is checked first; a semidefinite target (boundary
    parameters) is factored after a recorded ridge of psd_tol times the
    largest diagonal entry, doubled until the factorization succeeds.
    """
    report = check_admissibility(params, psd_tol)
    if not report.admissible:
        raise CovarianceExistenceError(
            "parameters admit no valid covariance: admissibility matrix has "
            f"minimum eigenvalue {report.min_eigenvalue:.3e} "
            f"(threshold -{report.threshold:.3e})"
        )
    target = gram_target(params)
    try:
        return SpectralFactor(matrix=np.linalg.cholesky(target))
    except np.linalg.LinAlgError:
        pass
    shift = psd_tol * float(np.max(np.real(np.diag(target))))
    if shift <= 0.0:
        shift = np.finfo(float).tiny
    eye = np.eye(params.p)
    for _ in range(64):
        try:
            return SpectralFactor(
                matrix=np.linalg.cholesky(target + shift * eye), diag_shift=shift
            )
        except np.linalg.LinAlgError:
            shift *= 2.0
    raise CovarianceExistenceError(
        "factorization failed despite admissibility; target is numerically "
        "far from positive semidefinite"
    )


def spectral_factor_p2(params: MfbmParams) -> SpectralFactor:
    """Closed-form spectral factor for p = 2.

    Every entry carries the pair coherence through r = sqrt((1-C)/C);
    C is 1 on the diagonal, making diagonal entries real. For a pair
    with vanishing cross coefficients (C = 0) the factor is diagonal and
    each diagonal entry carries the full component variance.
    """
    if params.p != 2:
        raise ValueError("closed-form factor is specific to p = 2")
    c = coherence(params, 0, 1)
    if c > 1.0 + 1e-12:
        raise CovarianceExistenceError(
            f"pair coherence {c:.6f} exceeds 1; no valid covariance exists"
        )
    H, sigma = params.H, params.sigma
    a_mat = np.zeros((2, 2), dtype=complex)
    if c == 0.0:
        for i in range(2):
            a_mat[i, i] = sigma[i] * np.sqrt(
                gamma_fn(2.0 * H[i] + 1.0) * np.sin(np.pi * H[i]) / (2.0 * np.pi)
            )
        return SpectralFactor(matrix=a_mat)
    r = np.sqrt(max(1.0 - c, 0.0) / c)
    for i in range(2):
        for j in range(2):
            alpha = params.hurst_sum(i, j)
            lam = (
                sigma[i]
                / (2.0 * np.sqrt(np.pi))
                * gamma_fn(alpha + 1.0)
                / np.sqrt(gamma_fn(2.0 * H[j] + 1.0) * np.sin(np.pi * H[j]))
            )
            if i == j:
                a_mat[i, j] = lam * np.sin(np.pi * H[i])
                continue
            rho = params.rho[i, j]
            if params.pair_kind(i, j) is PairKind.UNIT_SUM:
                s = 1.0
                cterm = 0.5 * np.pi * params.eta[i, j]
            else:
                s = np.sin(0.5 * np.pi * alpha)
                cterm = params.eta[i, j] * np.cos(0.5 * np.pi * alpha)
            a_mat[i, j] = lam * complex(rho * s + r * cterm, rho * r * s - cterm)
    return SpectralFactor(matrix=a_mat)


def _row_phases(H: np.ndarray) -> np.ndarray:
    return 0.5 * np.pi * (H + 0.5)


def _check_half_exponents(H: np.ndarray) -> None:
    if np.any(np.abs(H - 0.5) < HALF_EXPONENT_TOL):
        raise ValueError(
            "moving average form is undefined at H = 1/2; "
            f"got H = {np.asarray(H).tolist()}"
        )


def ma_from_spectral(a, H) -> MovingAveragePair:
    """Moving average matrices realizing the same law as the factor a.

    Accepts a SpectralFactor or a bare complex matrix. Requires every
    H_i away from 1/2.
    """
    a_mat = np.asarray(getattr(a, "matrix", a), dtype=complex)
    H = np.atleast_1d(np.asarray(H, dtype=float))
    _check_half_exponents(H)
    phases = _row_phases(H)
    gammas = gamma_fn(H + 0.5)
    d1_inv = 1.0 / (np.cos(phases) * gammas)
    d2_inv = 1.0 / (np.sin(phases) * gammas)
    term1 = d1_inv[:, None] * a_mat.real
    term2 = d2_inv[:, None] * a_mat.imag
    root = np.sqrt(0.5 * np.pi)
    return MovingAveragePair(
        m_plus=root * (term1 + term2), m_minus=root * (term1 - term2)
    )


def spectral_from_ma(ma: MovingAveragePair, H) -> SpectralFactor:
    """Inverse of :func:`ma_from_spectral`; same H = 1/2 exclusion."""
    H = np.atleast_1d(np.asarray(H, dtype=float))
    _check_half_exponents(H)
    phases = _row_phases(H)
    gammas = gamma_fn(H + 0.5)
    msum = ma.m_plus + ma.m_minus
    mdiff = ma.m_plus - ma.m_minus
    a_mat = (
        gammas[:, None]
        * (
            np.cos(phases)[:, None] * msum
            + 1j * np.sin(phases)[:, None] * mdiff
        )
        / np.sqrt(2.0 * np.pi)
    )
    return SpectralFactor(matrix=a_mat)


def params_from_ma(ma: MovingAveragePair, H, one_tol: float = 1e-9) -> MfbmParams:
    """Covariance coefficients of the process driven by (M+, M-).

    Gram products of the kernel weights determine sigma, rho and eta in
    closed form through Beta-function factors. Rows whose weights carry
    no variance are rejected.
    """
    H = np.atleast_1d(np.asarray(H, dtype=float))
    p = H.shape[0]
    mp, mm = ma.m_plus, ma.m_minus
    app = mp @ mp.T
    amm = mm @ mm.T
    apm = mp @ mm.T
    amp = apm.T

    sigma = np.empty(p)
    for i in range(p):
        var = (
            _beta_fn(H[i] + 0.5, H[i] + 0.5)
            / np.sin(np.pi * H[i])
            * (app[i, i] + amm[i, i] - 2.0 * np.sin(np.pi * H[i]) * apm[i, i])
        )
        if not var > 0.0:
            raise ValueError(f"row {i} of the kernel weights carries no variance")
        sigma[i] = np.sqrt(var)

    rho = np.eye(p)
    eta = np.zeros((p, p))
    for i in range(p):
        for j in range(i + 1, p):
            alpha = float(H[i] + H[j])
            beta = _beta_fn(H[i] + 0.5, H[j] + 0.5)
            ss = sigma[i] * sigma[j]
            if abs(alpha - 1.0) <= one_tol:
                rho_ij = (
                    beta
                    * (
                        0.5
                        * (np.sin(np.pi * H[i]) + np.sin(np.pi * H[j]))
                        * (app[i, j] + amm[i, j])
                        - apm[i, j]
                        - amp[i, j]
                    )
                    / ss
                )
                eta_ij = (H[j] - H[i]) * (app[i, j] - amm[i, j]) / ss
            else:
                sin_sum = np.sin(np.pi * alpha)
                pref = beta / sin_sum
                rho_ij = (
                    pref
                    * (
                        (app[i, j] + amm[i, j])
                        * (np.cos(np.pi * H[i]) + np.cos(np.pi * H[j]))
                        - (apm[i, j] + amp[i, j]) * sin_sum
                    )
                    / ss
                )
                eta_ij = (
                    pref
                    * (
                        (app[i, j] - amm[i, j])
                        * (np.cos(np.pi * H[i]) - np.cos(np.pi * H[j]))
                        - (apm[i, j] - amp[i, j]) * sin_sum
                    )
                    / ss
                )
            rho[i, j] = rho[j, i] = rho_ij
            eta[i, j] = eta_ij
            eta[j, i] = -eta_ij
    return MfbmParams(H=H, sigma=sigma, rho=rho, eta=eta, one_tol=one_tol)


def special_case_eta(params: MfbmParams, case: SpecialCase) -> MfbmParams:
    """Fill the antisymmetric coefficients implied by a named subfamily.

    The symmetric coefficients of params are kept; its eta entries are
    ignored and replaced. Well-balanced sets every eta to zero. Causal
    ties eta to rho pairwise; for a unit-sum pair the tie involves
    tan(pi H_i), rejected at H_i = 1/2 where the subfamily degenerates.
    """
    p = params.p
    eta = np.zeros((p, p))
    if case is SpecialCase.CAUSAL:
        for i in range(p):
            for j in range(i + 1, p):
                if params.pair_kind(i, j) is PairKind.UNIT_SUM:
                    if abs(params.H[i] - 0.5) < 1e-9:
                        raise ValueError(
                            "causal tie is undefined for a unit-sum pair "
                            "with H = 1/2"
                        )
                    val = (
                        params.rho[i, j]
                        * 2.0
                        / (np.pi * np.tan(np.pi * params.H[i]))
                    )
                else:
                    val = (
                        -params.rho[i, j]
                        * np.tan(0.5 * np.pi * params.hurst_sum(i, j))
                        * np.tan(0.5 * np.pi * (params.H[i] - params.H[j]))
                    )
                eta[i, j] = val
                eta[j, i] = -val
    elif case is not SpecialCase.WELL_BALANCED:
        raise ValueError(f"unknown special case {case!r}")
    return MfbmParams(
        H=params.H,
        sigma=params.sigma,
        rho=params.rho,
        eta=eta,
        one_tol=params.one_tol,
    )
