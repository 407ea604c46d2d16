"""Monte Carlo estimation of ergodic rates and channel-power moments.

Trials are processed in fixed-size batches; each batch draws from its own
counter-based substream keyed by (seed, batch index, user), so results are a
pure function of (scenario, trials, seed, batch) and identical regardless of
how many workers execute the batches.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rates
from .scenario import Scenario

_MASK64 = (1 << 64) - 1
_MASK32 = (1 << 32) - 1


@dataclass(frozen=True)
class McConfig:
    trials: int = 10_000
    seed: int = 12345
    batch: int = 1024

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.batch < 1:
            raise ValueError("batch must be >= 1")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    half_width_95: float
    trials: int
    sic_violations: int = 0


@dataclass(frozen=True)
class McRateReport:
    noma_r1: McEstimate
    noma_r2: McEstimate
    noma_rgm: McEstimate
    oma_r1: McEstimate
    oma_r2: McEstimate
    oma_rgm: McEstimate


@dataclass(frozen=True)
class ChannelMomentEstimates:
    e_h2: McEstimate
    e_h4: McEstimate
    inv_h2: McEstimate


def substream(seed: int, batch_index: int, user: int) -> np.random.Generator:
    """Independent counter-based stream for one (batch, user) work unit."""
    key = ((seed & _MASK64) << 64) | ((batch_index & _MASK32) << 32) | (user & _MASK32)
    return np.random.Generator(np.random.Philox(key=key))


def _batches(mc: McConfig) -> list[tuple[int, int]]:
    out = []
    start = 0
    index = 0
    while start < mc.trials:
        out.append((index, min(mc.batch, mc.trials - start)))
        start += mc.batch
        index += 1
    return out


def _channel_powers(scenario: Scenario, user: int, rng: np.random.Generator, count: int):
    """|h|^2 realizations for one user under phase alignment."""
    params = scenario.user(user)
    weights = np.sqrt(scenario.grid().energies)
    q = np.sqrt(rng.gamma(params.m, 1.0 / params.m, size=(count, weights.size)))
    h = np.sqrt(params.rho_large) * scenario.beta(user) * (q @ weights)
    return h * h


def _moment_pairs(x: np.ndarray) -> tuple[float, float]:
    return (float(np.sum(x)), float(np.sum(x * x)))


def _estimate(total: float, total_sq: float, n: int, sic: int = 0) -> McEstimate:
    mean = total / n
    if n > 1:
        var = max(0.0, (total_sq - total * total / n) / (n - 1))
        hw = 1.96 * np.sqrt(var / n)
    else:
        hw = 0.0
    return McEstimate(mean=mean, half_width_95=float(hw), trials=n, sic_violations=sic)


def _run_batched(tasks, workers: int):
    """Evaluate batch tasks, preserving batch order in the returned list."""
    if workers <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(t) for t in tasks]
        return [f.result() for f in futures]


def ergodic_rates_mc(scenario: Scenario, mc: McConfig, workers: int = 1) -> McRateReport:
    """Sample-mean rates with 95% confidence half-widths, NOMA and OMA.

    The geometric-mean rate is formed from the per-user mean rates (matching
    the closed-form comparison), with a delta-method half-width.
    """
    scenario.grid()  # build once before the worker pool shares it

    def make_task(index: int, count: int):
        def task():
            h1 = _channel_powers(scenario, 1, substream(mc.seed, index, 1), count)
            h2 = _channel_powers(scenario, 2, substream(mc.seed, index, 2), count)
            r1, r2 = rates.noma_rates(h1, h2, scenario.power_split, scenario.hq, scenario.budget)
            o1, o2 = rates.oma_rates(h1, h2, scenario.power_split, scenario.hq, scenario.budget)
            viol = int(np.sum(~rates.sic_order_holds(h1, h2, scenario.budget)))
            return [_moment_pairs(x) for x in (r1, r2, o1, o2)], viol

        return task

    results = _run_batched(
        [make_task(i, c) for i, c in _batches(mc)], workers
    )
    totals = [[0.0, 0.0] for _ in range(4)]
    violations = 0
    for pairs, viol in results:
        violations += viol
        for acc, (s, s2) in zip(totals, pairs):
            acc[0] += s
            acc[1] += s2
    n = mc.trials
    est = [_estimate(t, t2, n, violations) for t, t2 in totals]
    return McRateReport(
        noma_r1=est[0],
        noma_r2=est[1],
        noma_rgm=_geometric_mean_estimate(est[0], est[1]),
        oma_r1=est[2],
        oma_r2=est[3],
        oma_rgm=_geometric_mean_estimate(est[2], est[3]),
    )


def _geometric_mean_estimate(e1: McEstimate, e2: McEstimate) -> McEstimate:
    gm = float(np.sqrt(e1.mean * e2.mean))
    if gm > 0:
        hw = 0.5 * gm * float(
            np.sqrt((e1.half_width_95 / e1.mean) ** 2 + (e2.half_width_95 / e2.mean) ** 2)
        )
    else:
        hw = 0.0
    return McEstimate(
        mean=gm, half_width_95=hw, trials=e1.trials, sic_violations=e1.sic_violations
    )


def channel_moments_mc(
    scenario: Scenario, user: int, mc: McConfig, workers: int = 1
) -> ChannelMomentEstimates:
    """Empirical E[|h|^2], E[|h|^4] and E[1/|h|^2] for one user."""
    scenario.grid()

    def make_task(index: int, count: int):
        def task():
            h2 = _channel_powers(scenario, user, substream(mc.seed, index, user), count)
            return [_moment_pairs(x) for x in (h2, h2 * h2, 1.0 / h2)]

        return task

    results = _run_batched([make_task(i, c) for i, c in _batches(mc)], workers)
    totals = [[0.0, 0.0] for _ in range(3)]
    for pairs in results:
        for acc, (s, s2) in zip(totals, pairs):
            acc[0] += s
            acc[1] += s2
    n = mc.trials
    return ChannelMomentEstimates(
        e_h2=_estimate(*totals[0], n),
        e_h4=_estimate(*totals[1], n),
        inv_h2=_estimate(*totals[2], n),
    )
