"""Superlinear processes whose normalized partial sums approach a mfBm.

A component i is driven by per-innovation-channel coefficient sequences
on the forward (k >= 1) and reverse (k <= -1) half-lines. Three regimes:
a positive-exponent power tail (d in (0, 1/2)), a negative-exponent
power tail forced to sum to zero (d in (-1/2, 0)), and an absolutely
summable kernel collapsed to its sum at k = 0 (d = 0). The partial sums
of component i, scaled by n^(-d_i - 1/2) with d_i the largest exponent
feeding the row, converge to a mfBm with H_i = d_i + 1/2; the limiting
moving average weights keep only the kernels attaining d_i.

Everything is Monte Carlo at truncated support; the truncation K >= n
bounds edge effects, and the default 4n keeps truncation bias below
Monte Carlo noise at the replicate counts used here.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.signal import fftconvolve

from .params import MfbmParams
from .representations import MovingAveragePair, params_from_ma

__all__ = [
    "KernelRegime",
    "KernelSide",
    "KernelSpec",
    "realize_kernel",
    "LimitTarget",
    "limit_target",
    "simulate_partial_sums",
]


class KernelRegime(str, Enum):
    POWER_POS = "power_pos"
    POWER_NEG = "power_neg"
    SUMMABLE = "summable"


@dataclass(frozen=True)
class KernelSide:
    """One coefficient sequence: regime, tail constant, tail exponent.

    For SUMMABLE kernels alpha is the sum of the sequence and d is 0 by
    definition; the realized kernel is the single spike alpha at k = 0.
    """

    regime: KernelRegime
    alpha: float
    d: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "regime", KernelRegime(self.regime))
        if self.alpha == 0.0:
            raise ValueError("kernel tail constant alpha must be nonzero")
        if self.regime is KernelRegime.POWER_POS and not 0.0 < self.d < 0.5:
            raise ValueError(f"positive power regime needs d in (0, 1/2), got {self.d}")
        if self.regime is KernelRegime.POWER_NEG and not -0.5 < self.d < 0.0:
            raise ValueError(f"negative power regime needs d in (-1/2, 0), got {self.d}")
        if self.regime is KernelRegime.SUMMABLE and self.d != 0.0:
            raise ValueError("summable regime fixes d = 0")


@dataclass(frozen=True)
class KernelSpec:
    """Coefficient families for all p components over p innovation channels.

    plus[i][j] weights channel j's past-to-future half-line in component
    i, minus[i][j] the mirrored half-line; None means that sequence is
    identically zero. Every row must be fed by at least one kernel.
    """

    plus: tuple
    minus: tuple
    truncation: int | None = None

    def __post_init__(self):
        plus = tuple(tuple(row) for row in self.plus)
        minus = tuple(tuple(row) for row in self.minus)
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)
        p = len(plus)
        if p == 0 or len(minus) != p:
            raise ValueError("plus and minus must both be p x p")
        for side in (plus, minus):
            for row in side:
                if len(row) != p:
                    raise ValueError("kernel grids must be square")
                for cell in row:
                    if cell is not None and not isinstance(cell, KernelSide):
                        raise ValueError("grid cells must be KernelSide or None")
        for i in range(p):
            if all(plus[i][j] is None and minus[i][j] is None for j in range(p)):
                raise ValueError(f"component {i} is fed by no kernel")
        if self.truncation is not None and self.truncation < 1:
            raise ValueError("truncation must be a positive integer")

    @property
    def p(self) -> int:
        return len(self.plus)


def _half_line(side: KernelSide, K: int) -> np.ndarray:
    """Values at k = 1..K for a power kernel.

    Sampled as antiderivative increments (alpha/d)(k^d - (k-1)^d), which
    are alpha*k^(d-1)*(1 + O(1/k)) and hence satisfy the defining tail
    condition, while partial sums telescope to (alpha/d) k^d exactly.
    Pointwise sampling alpha*k^(d-1) would shift every window sum by a
    zeta-function constant that dies off only like n^(-d), far too slow
    for any finite-n convergence check.
    """
    ks = np.arange(1, K + 1, dtype=float)
    # 0^d := 0 anchor keeps the telescoped sums exact for d of either sign
    powers = np.concatenate(([0.0], ks**side.d))
    return side.alpha / side.d * np.diff(powers)


def realize_kernel(
    spec: KernelSpec, side: str, i: int, j: int, truncation: int | None = None
) -> np.ndarray:
    """Concrete coefficients on k in [-K, K], index k + K; zeros if absent.

    Power kernels occupy one open half-line; the negative-exponent regime
    adds a balancing value at k = 0 so the realized kernel sums to zero
    exactly, as its defining condition requires. That balancing mass
    decays only like K^d, so negative-exponent partial sums carry an
    O((K/n)^d) bias and need K >> n, not just K >= n, to get close to
    their limit.
    """
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'plus' or 'minus'")
    K = truncation if truncation is not None else spec.truncation
    if K is None:
        raise ValueError("no truncation given, in the call or on the kernel grid")
    cell: KernelSide | None = getattr(spec, side)[i][j]
    out = np.zeros(2 * K + 1)
    if cell is None:
        return out
    if cell.regime is KernelRegime.SUMMABLE:
        out[K] = cell.alpha
        return out
    tail = _half_line(cell, K)
    if side == "plus":
        out[K + 1 :] = tail
    else:
        out[:K] = tail[::-1]
    if cell.regime is KernelRegime.POWER_NEG:
        out[K] = -tail.sum()
    return out


@dataclass(frozen=True)
class LimitTarget:
    """Limiting mfBm of the normalized partial sums.

    For all-zero exponents the limit is a correlated Brownian motion;
    m_plus then holds the mixing matrix of the driving motions and
    m_minus is zero.
    """

    d: np.ndarray
    h: np.ndarray
    m_plus: np.ndarray
    m_minus: np.ndarray
    params: MfbmParams

    def __post_init__(self):
        for name in ("d", "h", "m_plus", "m_minus"):
            getattr(self, name).setflags(write=False)


def _row_exponents(spec: KernelSpec) -> np.ndarray:
    p = spec.p
    d = np.empty(p)
    for i in range(p):
        d[i] = max(
            cell.d
            for side in (spec.plus, spec.minus)
            for cell in side[i]
            if cell is not None
        )
    return d


def limit_target(spec: KernelSpec, one_tol: float = 1e-9) -> LimitTarget:
    """Parameters of the mfBm the scaled partial sums converge to.

    Only kernels attaining the row exponent survive in the limit, with
    weight alpha / d_i. Rows with d_i = 0 follow the Brownian route
    instead; mixing zero and nonzero row exponents is not supported, as
    the joint cross structure is not defined here.
    """
    p = spec.p
    d = _row_exponents(spec)
    if np.all(d == 0.0):
        mix = np.zeros((p, p))
        for i in range(p):
            for j in range(p):
                for side in (spec.plus, spec.minus):
                    cell = side[i][j]
                    if cell is not None and cell.d == 0.0:
                        mix[i, j] += cell.alpha
        cov = mix @ mix.T
        sigma = np.sqrt(np.diag(cov))
        if not np.all(sigma > 0.0):
            raise ValueError("a Brownian row has zero variance")
        rho = cov / np.outer(sigma, sigma)
        np.fill_diagonal(rho, 1.0)
        rho = 0.5 * (rho + rho.T)
        params = MfbmParams(
            H=np.full(p, 0.5),
            sigma=sigma,
            rho=rho,
            eta=np.zeros((p, p)),
            one_tol=one_tol,
        )
        return LimitTarget(
            d=d, h=np.full(p, 0.5), m_plus=mix, m_minus=np.zeros((p, p)), params=params
        )
    if np.any(d == 0.0):
        raise ValueError(
            "rows with zero and nonzero limiting exponents cannot be mixed"
        )
    m_plus = np.zeros((p, p))
    m_minus = np.zeros((p, p))
    for i in range(p):
        for j in range(p):
            cp = spec.plus[i][j]
            if cp is not None and cp.d == d[i]:
                m_plus[i, j] = cp.alpha / d[i]
            cm = spec.minus[i][j]
            if cm is not None and cm.d == d[i]:
                m_minus[i, j] = cm.alpha / d[i]
    h = d + 0.5
    params = params_from_ma(
        MovingAveragePair(m_plus=m_plus, m_minus=m_minus), h, one_tol=one_tol
    )
    return LimitTarget(d=d, h=h, m_plus=m_plus, m_minus=m_minus, params=params)


def simulate_partial_sums(
    spec: KernelSpec,
    n: int,
    taus,
    seed: int = 0,
    replicates: int = 1,
    noise: str = "gaussian",
    truncation: int | None = None,
) -> np.ndarray:
    """Normalized partial sums at the requested fractions, shape (R, T, p).

    Each replicate draws i.i.d. unit-variance innovations on a window
    wide enough for every time in 1..n to see the full truncated kernel,
    convolves, accumulates, and scales by n^(-d_i - 1/2) per component.
    """
    if n < 1:
        raise ValueError("n must be positive")
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any((taus < 0.0) | (taus > 1.0)):
        raise ValueError("every tau must lie in [0, 1]")
    if noise not in ("gaussian", "rademacher"):
        raise ValueError(f"unknown noise law {noise!r}")
    K = truncation if truncation is not None else (spec.truncation or 4 * n)
    if K < n:
        raise ValueError(f"truncation K={K} must be at least n={n}")
    p = spec.p
    d = _row_exponents(spec)
    kernels = np.zeros((p, p, 2 * K + 1))
    for i in range(p):
        for j in range(p):
            kernels[i, j] = realize_kernel(spec, "plus", i, j, K) + realize_kernel(
                spec, "minus", i, j, K
            )
    idx = np.floor(n * taus).astype(int)
    scale = n ** (-d - 0.5)
    out = np.empty((replicates, taus.shape[0], p))
    width = n + 2 * K
    for r in range(replicates):
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(r, 2)))
        )
        if noise == "gaussian":
            eps = rng.standard_normal((p, width))
        else:
            eps = rng.integers(0, 2, size=(p, width)).astype(float) * 2.0 - 1.0
        csum = np.zeros((n + 1, p))
        for i in range(p):
            z = np.zeros(n)
            for j in range(p):
                if np.any(kernels[i, j]):
                    z += fftconvolve(eps[j], kernels[i, j], mode="valid")
            csum[1:, i] = np.cumsum(z)
        out[r] = csum[idx] * scale
    return out
