"""Closed-form ergodic-rate lower bounds and asymptotic limits.

Pipeline: raw moments of the equivalent channel power from the aperture
functionals and the Nakagami amplitude moments, a two-moment Gamma fit whose
inverse distribution yields E[1/|h|^2] in closed form, the dimensionless eta
coefficient that folds that inverse mean into the rate denominators, and the
resulting Jensen lower bounds plus their three asymptotic regimes (transmit
power to infinity, element count to infinity, continuous aperture).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateDistribution, NonIntegrableInverseMoment
from .fading import NakagamiMoments
from .geometry import (
    A1_AS_PRINTED,
    CONVENTION_DISCRETE,
    ApertureSums,
    FeedGeometry,
    SurfaceGeometry,
    aperture_sums_infinite,
)
from .rates import PowerSplit
from .scenario import Scenario

_LN2 = math.log(2.0)

# Relative floor below which the inverse-moment denominator is treated as
# non-integrable (matched Gamma shape at or below 1).
_DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class MomentSet:
    """First two raw moments of the equivalent channel power |h|^2."""

    e_h2: float
    e_h4: float

    def __post_init__(self) -> None:
        if self.e_h2 <= 0 or self.e_h4 <= 0:
            raise ValueError("moments must be strictly positive")


@dataclass(frozen=True)
class GammaFit:
    """Two-moment Gamma fit of |h|^2 and the induced inverse-Gamma parameters."""

    nu: float
    varsigma: float
    nu_inv: float
    varsigma_inv: float


@dataclass(frozen=True)
class EtaCoefficients:
    """Central-moment combinations iota_1..4 and the noise-scaling eta."""

    iota1: float
    iota2: float
    iota3: float
    iota4: float
    eta: float


@dataclass(frozen=True)
class BoundReport:
    """All closed-form quantities for one scenario."""

    r1_lb: float
    r2_lb: float
    r1_inf_rho: float
    r2_inf_rho: float
    r1_inf_n: float
    r2_inf_n: float
    r1_cont: float
    r2_cont: float
    s1: int
    s2: int


def channel_moment2(sums: ApertureSums, m: float, rho_large: float, beta: float) -> float:
    """E[|h|^2] = rho * beta^2 * (mu2 a2 + mu1^2 (a1^2 - a2))."""
    mu = NakagamiMoments.for_shape(m)
    a1, a2 = sums.a1, sums.a2
    return rho_large * beta**2 * (mu.mu2 * a2 + mu.mu1**2 * (a1 * a1 - a2))


def channel_moment4(sums: ApertureSums, m: float, rho_large: float, beta: float) -> float:
    """E[|h|^4] from the five moment/aperture term groups.

    The bracketed combinations cancel almost completely in the deterministic
    limit, so each group and the final sum use compensated accumulation.
    """
    mu = NakagamiMoments.for_shape(m)
    a1, a2, a3, a4 = sums.as_tuple()
    terms = (
        mu.mu4 * a4,
        4.0 * mu.mu3 * mu.mu1 * (a3 * a1 - a4),
        3.0 * mu.mu2**2 * (a2 * a2 - a4),
        6.0 * mu.mu2 * mu.mu1**2 * math.fsum((a2 * a1 * a1, -2.0 * a3 * a1, -a2 * a2, 2.0 * a4)),
        mu.mu1**4
        * math.fsum((a1**4, -6.0 * a2 * a1 * a1, 3.0 * a2 * a2, 8.0 * a3 * a1, -6.0 * a4)),
    )
    return rho_large**2 * beta**4 * math.fsum(terms)


def channel_moments(sums: ApertureSums, m: float, rho_large: float, beta: float) -> MomentSet:
    return MomentSet(
        e_h2=channel_moment2(sums, m, rho_large, beta),
        e_h4=channel_moment4(sums, m, rho_large, beta),
    )


def gamma_fit(mom: MomentSet) -> GammaFit:
    """Match a Gamma distribution to (E[|h|^2], E[|h|^4])."""
    var = mom.e_h4 - mom.e_h2**2
    if var <= 0:
        raise DegenerateDistribution("E[|h|^4] must exceed E[|h|^2]^2 for a Gamma fit")
    nu = mom.e_h2**2 / var
    varsigma = var / mom.e_h2
    return GammaFit(nu=nu, varsigma=varsigma, nu_inv=nu, varsigma_inv=1.0 / varsigma)


def inverse_mean(mom: MomentSet) -> float:
    """Closed-form E[1/|h|^2] = e_h2 / (2 e_h2^2 - e_h4) of the matched fit.

    Requires the matched shape to exceed 1, i.e. 2 e_h2^2 > e_h4; a
    single-element Rayleigh channel sits exactly on the divergent boundary.
    """
    den = 2.0 * mom.e_h2**2 - mom.e_h4
    if den <= _DEGENERACY_RTOL * mom.e_h2**2:
        raise NonIntegrableInverseMoment(
            "matched Gamma shape is <= 1; the inverse moment diverges"
        )
    return mom.e_h2 / den


def iota_coefficients(m: float) -> tuple[float, float, float, float]:
    """Central-moment combinations of the amplitude moments."""
    mu = NakagamiMoments.for_shape(m)
    i1 = mu.mu1
    i2 = mu.mu2 - mu.mu1**2
    i3 = mu.mu3 - 3.0 * mu.mu2 * mu.mu1 + 2.0 * mu.mu1**3
    i4 = (
        mu.mu4
        - 4.0 * mu.mu3 * mu.mu1
        - 3.0 * mu.mu2**2
        + 12.0 * mu.mu2 * mu.mu1**2
        - 6.0 * mu.mu1**4
    )
    return (i1, i2, i3, i4)


def eta_from_iotas(
    iotas: tuple[float, float, float, float], sums: ApertureSums
) -> EtaCoefficients:
    i1, i2, i3, i4 = iotas
    a1, a2, a3, a4 = sums.as_tuple()
    num = i1 * i1 * a1 * a1 + i2 * a2
    den = math.fsum(
        (
            i1**4 * a1**4,
            -2.0 * i2 * i1 * i1 * a2 * a1 * a1,
            -i2 * i2 * a2 * a2,
            -4.0 * i3 * i1 * a3 * a1,
            -i4 * a4,
        )
    )
    if den <= _DEGENERACY_RTOL * num * num:
        raise NonIntegrableInverseMoment("eta denominator is not strictly positive")
    return EtaCoefficients(iota1=i1, iota2=i2, iota3=i3, iota4=i4, eta=num / den)


def eta_coefficient(sums: ApertureSums, m: float) -> EtaCoefficients:
    """Dimensionless noise-scaling coefficient; equals rho beta^2 E[1/|h|^2]."""
    return eta_from_iotas(iota_coefficients(m), sums)


def eta_infinite(surface: SurfaceGeometry, feed: FeedGeometry, m: float) -> float:
    """eta in the infinite-surface limit, in the published closed form.

    Uses the lambda-normalized aperture convention; equivalent to evaluating
    eta_coefficient on aperture_sums_infinite under that convention.
    """
    i1, i2, i3, i4 = iota_coefficients(m)
    a, d0 = feed.alpha, feed.d0
    s = surface.cell_area / surface.wavelength**2
    num = 8.0 * math.pi * (a + 1) * (a - 1) ** 2 * d0 * d0 * i1 * i1 / s + i2
    den = math.fsum(
        (
            64.0 * math.pi**2 * (a + 1) ** 2 * (a - 1) ** 4 * d0**4 * i1**4 / (s * s),
            -16.0 * math.pi * (a + 1) * (a - 1) ** 2 * d0 * d0 * i2 * i1 * i1 / s,
            -i2 * i2,
            -16.0 * (a + 1) ** 2 * (a - 1) / (3.0 * (a + 5.0 / 3.0)) * i3 * i1,
            -s * (a + 1) ** 2 / (4.0 * math.pi * (a + 2) * d0 * d0) * i4,
        )
    )
    if den <= _DEGENERACY_RTOL * num * num:
        raise NonIntegrableInverseMoment("eta denominator is not strictly positive")
    return num / den


def scenario_etas(scenario: Scenario, sums: ApertureSums) -> tuple[float, float]:
    """eta for both users of a scenario, from shared aperture sums."""
    return (
        eta_coefficient(sums, scenario.user1.m).eta,
        eta_coefficient(sums, scenario.user2.m).eta,
    )


def noma_bound_rates(scenario: Scenario, eta1: float, eta2: float) -> tuple[float, float]:
    """Ergodic-rate lower bounds with the noise terms scaled by eta_i."""
    hq, b = scenario.hq, scenario.budget
    e1 = hq.eps_u1 * hq.eps_v
    e2 = hq.eps_u2 * hq.eps_v
    k1, k2 = scenario.power_split.kappa1, scenario.power_split.kappa2
    g1 = b.rho * scenario.user1.rho_large * scenario.beta(1) ** 2
    g2 = b.rho * scenario.user2.rho_large * scenario.beta(2) ** 2
    r1 = math.log1p(g1 * k1 * e1 / (g1 * (1.0 - k1 * e1 - k2 * e2) + eta1 * b.sigma2_1)) / _LN2
    r2 = math.log1p(g2 * k2 * e2 / (g2 * (1.0 - k2 * e2) + eta2 * b.sigma2_2)) / _LN2
    return (r1, r2)


def oma_bound_rates(
    scenario: Scenario,
    eta1: float,
    eta2: float,
    resource_split: PowerSplit | None = None,
) -> tuple[float, float]:
    """Jensen lower bounds of the orthogonal-access rates, same eta pipeline."""
    hq, b = scenario.hq, scenario.budget
    split = resource_split if resource_split is not None else scenario.power_split
    e1 = hq.eps_u1 * hq.eps_v
    e2 = hq.eps_u2 * hq.eps_v
    g1 = b.rho * scenario.user1.rho_large * scenario.beta(1) ** 2
    g2 = b.rho * scenario.user2.rho_large * scenario.beta(2) ** 2
    r1 = split.kappa1 * math.log1p(g1 * e1 / (g1 * (1.0 - e1) + eta1 * b.sigma2_1)) / _LN2
    r2 = split.kappa2 * math.log1p(g2 * e2 / (g2 * (1.0 - e2) + eta2 * b.sigma2_2)) / _LN2
    return (r1, r2)


def rate_lower_bounds(
    scenario: Scenario, sums: ApertureSums | None = None
) -> tuple[float, float]:
    """Closed-form lower bounds of both users' ergodic rates.

    By default the aperture sums are the discrete ones of the scenario's grid,
    which are exact for the modeled surface.
    """
    if sums is None:
        sums = scenario.discrete_sums()
    eta1, eta2 = scenario_etas(scenario, sums)
    return noma_bound_rates(scenario, eta1, eta2)


def asymptotic_rho(split: PowerSplit, hq) -> tuple[float, float]:
    """Rate limits as transmit power grows without bound.

    With perfect hardware UE-1's limit diverges; that case is reported as
    math.inf rather than raised, since it is a legitimate operating point.
    """
    e1 = hq.eps_u1 * hq.eps_v
    e2 = hq.eps_u2 * hq.eps_v
    k1, k2 = split.kappa1, split.kappa2
    den1 = 1.0 - k1 * e1 - k2 * e2
    den2 = 1.0 - k2 * e2
    r1 = math.inf if den1 <= 0 else math.log1p(k1 * e1 / den1) / _LN2
    r2 = math.inf if den2 <= 0 else math.log1p(k2 * e2 / den2) / _LN2
    return (r1, r2)


def snr_slope(user: int, hq) -> int:
    """High-SNR pre-log slope: 1 only for UE-1 with all-ideal hardware."""
    if user == 1:
        return 1 if hq.eps_v == hq.eps_u1 == hq.eps_u2 == 1.0 else 0
    if user == 2:
        return 0
    raise ValueError(f"user must be 1 or 2, got {user}")


def asymptotic_n(
    scenario: Scenario,
    convention: str = CONVENTION_DISCRETE,
    a1_variant: str = A1_AS_PRINTED,
) -> tuple[float, float]:
    """Rate bounds with the surface extended over the whole plane."""
    sums = aperture_sums_infinite(
        scenario.surface, scenario.feed, convention=convention, a1_variant=a1_variant
    )
    eta1, eta2 = scenario_etas(scenario, sums)
    return noma_bound_rates(scenario, eta1, eta2)


def continuous_aperture(scenario: Scenario) -> tuple[float, float]:
    """Rate bounds for a continuous aperture (cell area much below lambda^2).

    The eta * sigma^2 noise term degenerates to
    (cell_area / lambda^2) * sigma^2 / (8 pi (alpha+1) (alpha-1)^2 d0^2 mu1^2).
    """
    a, d0 = scenario.feed.alpha, scenario.feed.d0
    s = scenario.surface.cell_area / scenario.surface.wavelength**2
    coeffs = []
    for user in (scenario.user1, scenario.user2):
        mu1 = NakagamiMoments.for_shape(user.m).mu1
        coeffs.append(s / (8.0 * math.pi * (a + 1) * (a - 1) ** 2 * d0 * d0 * mu1 * mu1))
    return noma_bound_rates(scenario, coeffs[0], coeffs[1])


def bound_report(
    scenario: Scenario,
    convention: str = CONVENTION_DISCRETE,
    a1_variant: str = A1_AS_PRINTED,
) -> BoundReport:
    """Evaluate the full closed-form pipeline for one scenario."""
    r1_lb, r2_lb = rate_lower_bounds(scenario)
    r1_rho, r2_rho = asymptotic_rho(scenario.power_split, scenario.hq)
    r1_n, r2_n = asymptotic_n(scenario, convention=convention, a1_variant=a1_variant)
    r1_c, r2_c = continuous_aperture(scenario)
    return BoundReport(
        r1_lb=r1_lb,
        r2_lb=r2_lb,
        r1_inf_rho=r1_rho,
        r2_inf_rho=r2_rho,
        r1_inf_n=r1_n,
        r2_inf_n=r2_n,
        r1_cont=r1_c,
        r2_cont=r2_c,
        s1=snr_slope(1, scenario.hq),
        s2=snr_slope(2, scenario.hq),
    )
