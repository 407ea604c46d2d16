"""Power-allocation optimization of the geometric-mean rate.

The NOMA allocation kappa1 is found by bisection on the sign of a
central-difference derivative of log R_GM, assuming unimodality on the search
interval; when the derivative never changes sign, the better endpoint is
returned with a boundary flag instead of an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import theory
from .mc import McConfig, ergodic_rates_mc
from .rates import PowerSplit
from .scenario import Scenario

OBJECTIVE_THEORY = "theory-bound"
OBJECTIVE_MC = "monte-carlo"

_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class OptimizerConfig:
    tol_kappa: float = 1e-6
    kappa_floor: float = 1e-6
    objective_source: str = OBJECTIVE_THEORY
    diff_step: float = 1e-6

    def __post_init__(self) -> None:
        if not 0.0 < self.kappa_floor < 0.5:
            raise ValueError("kappa_floor must lie in (0, 0.5)")
        if self.tol_kappa <= 0:
            raise ValueError("tol_kappa must be positive")
        if self.objective_source not in (OBJECTIVE_THEORY, OBJECTIVE_MC):
            raise ValueError(f"unknown objective source {self.objective_source!r}")


@dataclass(frozen=True)
class OptimumReport:
    kappa1: float
    r_gm: float
    r1: float
    r2: float
    at_boundary: bool = False


def maximize_kappa(
    objective: Callable[[float], float], cfg: OptimizerConfig
) -> tuple[float, float, bool]:
    """Bisection maximizer of a positive unimodal objective over kappa1.

    Returns (kappa1, objective value, at_boundary).
    """
    h = cfg.diff_step

    def dlog(k: float) -> float:
        lo = max(cfg.kappa_floor, k - h / 2.0)
        hi = min(1.0 - cfg.kappa_floor, k + h / 2.0)
        return math.log(max(objective(hi), _LOG_FLOOR)) - math.log(
            max(objective(lo), _LOG_FLOOR)
        )

    lo = cfg.kappa_floor + h
    hi = 1.0 - cfg.kappa_floor - h
    d_lo, d_hi = dlog(lo), dlog(hi)
    if not (d_lo > 0 and d_hi < 0):
        # No bracketed interior maximum: report the better endpoint.
        a, b = cfg.kappa_floor, 1.0 - cfg.kappa_floor
        fa, fb = objective(a), objective(b)
        return (a, fa, True) if fa >= fb else (b, fb, True)
    while hi - lo > cfg.tol_kappa:
        mid = 0.5 * (lo + hi)
        if dlog(mid) > 0:
            lo = mid
        else:
            hi = mid
    k = 0.5 * (lo + hi)
    return (k, objective(k), False)


def _theory_objective(scenario: Scenario) -> Callable[[float], tuple[float, float, float]]:
    sums = scenario.discrete_sums()
    eta1, eta2 = theory.scenario_etas(scenario, sums)

    def rates_at(kappa1: float) -> tuple[float, float, float]:
        r1, r2 = theory.noma_bound_rates(scenario.with_kappa1(kappa1), eta1, eta2)
        return (math.sqrt(r1 * r2), r1, r2)

    return rates_at


def _mc_objective(
    scenario: Scenario, mc: McConfig
) -> Callable[[float], tuple[float, float, float]]:
    def rates_at(kappa1: float) -> tuple[float, float, float]:
        report = ergodic_rates_mc(scenario.with_kappa1(kappa1), mc)
        return (report.noma_rgm.mean, report.noma_r1.mean, report.noma_r2.mean)

    return rates_at


def optimize_kappa_noma(
    scenario: Scenario,
    cfg: OptimizerConfig | None = None,
    mc: McConfig | None = None,
) -> OptimumReport:
    """Maximize the NOMA geometric-mean rate over the power allocation."""
    cfg = cfg or OptimizerConfig()
    if cfg.objective_source == OBJECTIVE_THEORY:
        rates_at = _theory_objective(scenario)
    else:
        rates_at = _mc_objective(scenario, mc or McConfig(trials=2000))
    kappa, r_gm, at_boundary = maximize_kappa(lambda k: rates_at(k)[0], cfg)
    _, r1, r2 = rates_at(kappa)
    return OptimumReport(kappa1=kappa, r_gm=r_gm, r1=r1, r2=r2, at_boundary=at_boundary)


def oma_baseline(scenario: Scenario) -> tuple[float, float]:
    """OMA geometric-mean rate at the equal resource split (not re-optimized)."""
    sums = scenario.discrete_sums()
    eta1, eta2 = theory.scenario_etas(scenario, sums)
    r1, r2 = theory.oma_bound_rates(scenario, eta1, eta2, resource_split=PowerSplit.of(0.5))
    return (0.5, math.sqrt(r1 * r2))
