"""Nakagami-m small-scale fading, phase alignment and the equivalent channel.

Amplitudes are normalized so E[q^2] = 1 (q = sqrt(G) with G ~ Gamma(m, 1/m)).
With each surface element's phase configured to cancel both the feed-path and
the fading phases, the end-to-end channel collapses to the non-negative real
gain sqrt(rho_large) * beta * sum_n sqrt(gamma_n) * q_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DimensionMismatch, InvalidOrder, InvalidShape
from .geometry import ElementGrid, FeedGeometry, SurfaceGeometry, feed_distance

SIDE_REFLECT = "reflect"
SIDE_REFRACT = "refract"

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class UserLinkParams:
    """Per-user link: Nakagami shape m, large-scale gain, surface side."""

    m: float
    rho_large: float
    side: str = SIDE_REFLECT

    def __post_init__(self) -> None:
        if self.m < 0.5:
            raise InvalidShape(f"Nakagami shape must be >= 0.5, got {self.m}")
        if self.rho_large <= 0:
            raise ValueError("large-scale gain rho_large must be positive")
        if self.side not in (SIDE_REFLECT, SIDE_REFRACT):
            raise ValueError(f"side must be 'reflect' or 'refract', got {self.side!r}")


@dataclass(frozen=True)
class NakagamiMoments:
    """First four raw moments of the unit-power Nakagami amplitude."""

    mu1: float
    mu2: float
    mu3: float
    mu4: float

    @classmethod
    def for_shape(cls, m: float) -> "NakagamiMoments":
        return cls(*(nakagami_moment(m, k) for k in (1, 2, 3, 4)))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.mu1, self.mu2, self.mu3, self.mu4)


@dataclass(frozen=True)
class SmallScaleDraw:
    """One realization of per-element amplitudes and phases."""

    q: np.ndarray
    psi: np.ndarray

    def __post_init__(self) -> None:
        if self.q.shape != self.psi.shape:
            raise ValueError("q and psi must have matching shapes")


@dataclass(frozen=True)
class SurfaceSplit:
    """Amplitude split between the reflection and refraction modes."""

    beta1: float
    beta2: float

    def __post_init__(self) -> None:
        if self.beta1 < 0 or self.beta2 < 0:
            raise ValueError("split amplitudes must be non-negative")
        if abs(self.beta1**2 + self.beta2**2 - 1.0) > 1e-12:
            raise ValueError("beta1^2 + beta2^2 must equal 1")

    @classmethod
    def from_reflect_power(cls, beta1_sq: float) -> "SurfaceSplit":
        if not 0.0 <= beta1_sq <= 1.0:
            raise ValueError("reflect power share must lie in [0, 1]")
        return cls(math.sqrt(beta1_sq), math.sqrt(1.0 - beta1_sq))

    def beta_for(self, side: str) -> float:
        if side == SIDE_REFLECT:
            return self.beta1
        if side == SIDE_REFRACT:
            return self.beta2
        raise ValueError(f"unknown side {side!r}")


def nakagami_moment(m: float, k: int) -> float:
    """k-th raw moment of the unit-power Nakagami amplitude, k in 1..4.

    Odd orders use log-gamma for stability at large m; mu2 = 1 and
    mu4 = 1 + 1/m are exact.
    """
    if m < 0.5:
        raise InvalidShape(f"Nakagami shape must be >= 0.5, got {m}")
    if k not in (1, 2, 3, 4):
        raise InvalidOrder(f"moment order must be in 1..4, got {k}")
    if k == 2:
        return 1.0
    if k == 4:
        return 1.0 + 1.0 / m
    s = k / 2.0
    if m > 1e8:
        # gammaln differences cancel catastrophically here; use the asymptotic
        # ratio Gamma(m+s)/Gamma(m) ~ m^s (1 + s(s-1)/2m + ...), error O(m^-3).
        c1 = s * (s - 1.0) / 2.0
        c2 = s * (s - 1.0) * (s - 2.0) * (3.0 * s - 1.0) / 24.0
        return 1.0 + c1 / m + c2 / (m * m)
    return float(math.exp(gammaln(m + s) - gammaln(m)) * m**-s)


def sample_small_scale(
    params: UserLinkParams,
    n: int,
    rng: np.random.Generator,
    trials: int | None = None,
) -> SmallScaleDraw:
    """i.i.d. Nakagami amplitudes and uniform phases from the given stream.

    With ``trials`` set, q and psi have shape (trials, n) for batched use.
    """
    if n < 1:
        raise ValueError("element count must be >= 1")
    shape = (n,) if trials is None else (trials, n)
    q = np.sqrt(rng.gamma(params.m, 1.0 / params.m, size=shape))
    psi = rng.uniform(0.0, TWO_PI, size=shape)
    return SmallScaleDraw(q=q, psi=psi)


def aligned_phase(center, feed: FeedGeometry, surface: SurfaceGeometry, psi: float) -> float:
    """Element phase that cancels the feed-path and fading phases, in [0, 2 pi)."""
    theta = TWO_PI / surface.wavelength * feed_distance(center, feed) - psi
    return theta % TWO_PI


def equivalent_gain(
    grid: ElementGrid,
    split_beta: float,
    params: UserLinkParams,
    draw: SmallScaleDraw,
):
    """Phase-aligned end-to-end gain sqrt(rho_large) * beta * sum sqrt(gamma) q.

    Accepts a single draw (1-D q) or a batch (..., N); the element axis is the
    last one.  The result is real and non-negative.
    """
    if draw.q.shape[-1] != grid.n_elements:
        raise DimensionMismatch(
            f"draw has {draw.q.shape[-1]} elements, grid has {grid.n_elements}"
        )
    weights = np.sqrt(grid.energies)
    return math.sqrt(params.rho_large) * split_beta * (draw.q @ weights)
