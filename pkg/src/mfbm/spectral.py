"""Cross-spectral densities of mfBm increments.

Fourier convention: S(omega) = (1/2pi) Integral e^{-i h omega} gamma(h) dh.
The increment spectrum factorizes into a real power-law envelope and a
frequency-sign-dependent complex coefficient, so coherence between two
components is constant in frequency.
"""
from __future__ import annotations

import numpy as np
from scipy.special import gamma as gamma_fn

from .params import MfbmParams, PairKind

__all__ = [
    "spectral_coeff",
    "cross_spectral_density",
    "low_frequency_modulus",
    "coherence",
]


def spectral_coeff(params: MfbmParams, i: int, j: int, sign_omega: int) -> complex:
    """Complex coefficient of the cross-spectrum on one frequency half-line.

    Generic pairs: rho*sin(pi a/2) - i*eta*sign_omega*cos(pi a/2), a = H_i+H_j.
    Unit-sum pairs: rho - i*(pi/2)*eta*sign_omega.
    Swapping (i, j) conjugates the value.
    """
    if sign_omega not in (-1, 1):
        raise ValueError(f"sign_omega must be -1 or +1, got {sign_omega}")
    rho = params.rho[i, j]
    eta = params.eta[i, j]
    if params.pair_kind(i, j) is PairKind.UNIT_SUM:
        return complex(rho, -0.5 * np.pi * eta * sign_omega)
    half_alpha = 0.5 * np.pi * params.hurst_sum(i, j)
    return complex(rho * np.sin(half_alpha), -eta * sign_omega * np.cos(half_alpha))


def _coeff_sq_modulus(params: MfbmParams, i: int, j: int) -> float:
    # |spectral_coeff|^2, independent of the frequency sign.
    return abs(spectral_coeff(params, i, j, 1)) ** 2


def cross_spectral_density(
    params: MfbmParams, i: int, j: int, omega, delta: float = 1.0
):
    """S_{i,j}(omega, delta), vectorized over omega. Rejects omega = 0.

    The value at 0 is a pole when H_i + H_j > 1 and is excluded uniformly
    rather than special-cased by branch.
    """
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    omega = np.asarray(omega, dtype=float)
    if np.any(omega == 0.0):
        raise ValueError("omega = 0 is outside the domain of the density")
    alpha = params.hurst_sum(i, j)
    envelope = (
        (params.sigma[i] * params.sigma[j] / np.pi)
        * gamma_fn(alpha + 1.0)
        * (1.0 - np.cos(omega * delta))
        / np.abs(omega) ** (alpha + 1.0)
    )
    pos = spectral_coeff(params, i, j, 1)
    neg = spectral_coeff(params, i, j, -1)
    coeff = np.where(omega > 0.0, pos, neg)
    out = envelope * coeff
    return out if out.ndim else complex(out)


def low_frequency_modulus(
    params: MfbmParams, i: int, j: int, omega, delta: float = 1.0
):
    """Leading modulus of S_{i,j} as omega -> 0, vectorized over omega.

    (sigma_i sigma_j / 2pi) Gamma(a+1) delta^2 |coeff| |omega|^(1-a).
    """
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    omega = np.asarray(omega, dtype=float)
    if np.any(omega == 0.0):
        raise ValueError("omega = 0 is outside the domain of the density")
    alpha = params.hurst_sum(i, j)
    out = (
        (params.sigma[i] * params.sigma[j] / (2.0 * np.pi))
        * gamma_fn(alpha + 1.0)
        * delta**2
        * np.sqrt(_coeff_sq_modulus(params, i, j))
        * np.abs(omega) ** (1.0 - alpha)
    )
    return out if out.ndim else float(out)


def coherence(params: MfbmParams, i: int, j: int) -> float:
    """Squared coherence of the increment pair (i, j), constant in omega.

    Gamma(a+1)^2 |coeff|^2 over Gamma(2H_i+1) Gamma(2H_j+1)
    sin(pi H_i) sin(pi H_j). Lies in [0, 1] exactly when the pair block
    admits a valid process.
    """
    if i == j:
        raise ValueError("coherence of a component with itself is trivially 1")
    hi = float(params.H[i])
    hj = float(params.H[j])
    alpha = hi + hj
    num = gamma_fn(alpha + 1.0) ** 2 * _coeff_sq_modulus(params, i, j)
    den = (
        gamma_fn(2.0 * hi + 1.0)
        * gamma_fn(2.0 * hj + 1.0)
        * np.sin(np.pi * hi)
        * np.sin(np.pi * hj)
    )
    return float(num / den)
