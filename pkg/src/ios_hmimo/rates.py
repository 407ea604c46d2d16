"""Instantaneous NOMA/OMA rates under transceiver hardware impairments.

Hardware quality factors scale the useful signal power by eps_u * eps_v and
divert the remainder into distortion terms that act as self-interference.
All rate functions broadcast over numpy arrays of channel powers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import SicOrderWarning

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class HardwareQuality:
    """Transceiver quality factors in [0, 1]; 1 is ideal hardware."""

    eps_v: float
    eps_u1: float
    eps_u2: float

    def __post_init__(self) -> None:
        for name in ("eps_v", "eps_u1", "eps_u2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    def eps_u(self, user: int) -> float:
        if user == 1:
            return self.eps_u1
        if user == 2:
            return self.eps_u2
        raise ValueError(f"user must be 1 or 2, got {user}")


@dataclass(frozen=True)
class PowerSplit:
    """NOMA power allocation (kappa1, kappa2), summing to 1."""

    kappa1: float
    kappa2: float

    def __post_init__(self) -> None:
        if self.kappa1 < 0 or self.kappa2 < 0:
            raise ValueError("power allocation coefficients must be non-negative")
        if abs(self.kappa1 + self.kappa2 - 1.0) > 1e-12:
            raise ValueError("kappa1 + kappa2 must equal 1")

    @classmethod
    def of(cls, kappa1: float) -> "PowerSplit":
        return cls(kappa1, 1.0 - kappa1)


@dataclass(frozen=True)
class LinkBudget:
    """Total transmit power and per-user noise powers (all linear)."""

    rho: float
    sigma2_1: float
    sigma2_2: float

    def __post_init__(self) -> None:
        if self.rho <= 0 or self.sigma2_1 <= 0 or self.sigma2_2 <= 0:
            raise ValueError("rho and noise powers must be strictly positive")

    def sigma2(self, user: int) -> float:
        return self.sigma2_1 if user == 1 else self.sigma2_2


@dataclass(frozen=True)
class HwiPowerBudget:
    """Received-power decomposition at one user into the labeled terms."""

    desired_s1: float
    bs_distortion_s1: float
    ue_distortion_s1: float
    desired_s2: float
    bs_distortion_s2: float
    ue_distortion_s2: float
    noise: float

    @property
    def total(self) -> float:
        return (
            self.desired_s1
            + self.bs_distortion_s1
            + self.ue_distortion_s1
            + self.desired_s2
            + self.bs_distortion_s2
            + self.ue_distortion_s2
            + self.noise
        )


def hwi_power_budget(
    h_sq: float,
    user: int,
    split: PowerSplit,
    hq: HardwareQuality,
    budget: LinkBudget,
) -> HwiPowerBudget:
    """Power shares of the received signal at the given user.

    Per symbol j, the desired share is kappa_j * eps_u * eps_v, the BS
    distortion kappa_j * eps_u * (1 - eps_v) and the UE distortion
    kappa_j * (1 - eps_u); the three sum to kappa_j exactly.
    """
    if h_sq < 0:
        raise ValueError("channel power must be non-negative")
    eu = hq.eps_u(user)
    ev = hq.eps_v
    p = budget.rho * h_sq
    return HwiPowerBudget(
        desired_s1=split.kappa1 * eu * ev * p,
        bs_distortion_s1=split.kappa1 * eu * (1.0 - ev) * p,
        ue_distortion_s1=split.kappa1 * (1.0 - eu) * p,
        desired_s2=split.kappa2 * eu * ev * p,
        bs_distortion_s2=split.kappa2 * eu * (1.0 - ev) * p,
        ue_distortion_s2=split.kappa2 * (1.0 - eu) * p,
        noise=budget.sigma2(user),
    )


def sic_order_holds(h1_sq, h2_sq, budget: LinkBudget):
    """True where UE-1's noise-normalized channel gain exceeds UE-2's."""
    return np.asarray(h1_sq) / budget.sigma2_1 > np.asarray(h2_sq) / budget.sigma2_2


def noma_rates(
    h1_sq,
    h2_sq,
    split: PowerSplit,
    hq: HardwareQuality,
    budget: LinkBudget,
    check_sic: bool = False,
):
    """Achievable rates (R1, R2) in bits/s/Hz with SIC at UE-1.

    UE-1 cancels s2 before decoding; UE-2 treats s1 as interference.  Rates are
    always evaluated with this fixed role assignment; with ``check_sic`` a
    warning is emitted when a realization violates the ordering assumption.
    """
    if check_sic and not np.all(sic_order_holds(h1_sq, h2_sq, budget)):
        warnings.warn("channel realization violates the SIC ordering", SicOrderWarning)
    e1 = hq.eps_u1 * hq.eps_v
    e2 = hq.eps_u2 * hq.eps_v
    k1, k2 = split.kappa1, split.kappa2
    rho = budget.rho
    h1_sq = np.asarray(h1_sq, dtype=float)
    h2_sq = np.asarray(h2_sq, dtype=float)
    r1 = np.log1p(
        rho * k1 * e1 * h1_sq
        / (rho * (k1 * (1.0 - e1) + k2 * (1.0 - e2)) * h1_sq + budget.sigma2_1)
    ) / _LN2
    r2 = np.log1p(
        rho * k2 * e2 * h2_sq
        / (rho * (k2 * (1.0 - e2) + k1) * h2_sq + budget.sigma2_2)
    ) / _LN2
    return r1, r2


def oma_rates(
    h1_sq,
    h2_sq,
    resource_split: PowerSplit,
    hq: HardwareQuality,
    budget: LinkBudget,
):
    """Orthogonal-access rates with time/frequency shares (kappa1', kappa2')."""
    e1 = hq.eps_u1 * hq.eps_v
    e2 = hq.eps_u2 * hq.eps_v
    rho = budget.rho
    h1_sq = np.asarray(h1_sq, dtype=float)
    h2_sq = np.asarray(h2_sq, dtype=float)
    r1 = resource_split.kappa1 * np.log1p(
        rho * e1 * h1_sq / (rho * (1.0 - e1) * h1_sq + budget.sigma2_1)
    ) / _LN2
    r2 = resource_split.kappa2 * np.log1p(
        rho * e2 * h2_sq / (rho * (1.0 - e2) * h2_sq + budget.sigma2_2)
    ) / _LN2
    return r1, r2


def geometric_mean_rate(r1, r2):
    """Fairness-oriented scalarization sqrt(r1 * r2)."""
    return np.sqrt(np.asarray(r1, dtype=float) * np.asarray(r2, dtype=float))
