"""Scenario aggregation, JSON configuration and validation.

A Scenario bundles everything one experiment instance needs: surface and feed
geometry, the reflect/refract energy split, both users' link parameters,
hardware quality factors, the link budget and the NOMA power allocation.
Configuration files are plain JSON mirroring the dataclass sections; any key
with an ``_db`` suffix is converted from decibels to linear scale on load.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .errors import ConfigError
from .fading import SIDE_REFLECT, SIDE_REFRACT, SurfaceSplit, UserLinkParams
from .geometry import ApertureSums, FeedGeometry, SurfaceGeometry, aperture_sums_discrete, build_grid
from .rates import HardwareQuality, LinkBudget, PowerSplit


@dataclass(frozen=True)
class Scenario:
    surface: SurfaceGeometry
    feed: FeedGeometry
    split_surface: SurfaceSplit
    user1: UserLinkParams
    user2: UserLinkParams
    hq: HardwareQuality
    budget: LinkBudget
    power_split: PowerSplit

    def user(self, index: int) -> UserLinkParams:
        if index == 1:
            return self.user1
        if index == 2:
            return self.user2
        raise ValueError(f"user must be 1 or 2, got {index}")

    def beta(self, index: int) -> float:
        return self.split_surface.beta_for(self.user(index).side)

    def grid(self):
        return build_grid(self.surface, self.feed)

    def discrete_sums(self) -> ApertureSums:
        return aperture_sums_discrete(self.grid())

    def with_n_elements(self, n: int) -> "Scenario":
        side = math.isqrt(n)
        if side * side != n:
            raise ValueError(f"element count {n} is not a perfect square")
        return replace(self, surface=replace(self.surface, n_x=side, n_y=side))

    def with_rho(self, rho: float) -> "Scenario":
        return replace(self, budget=replace(self.budget, rho=rho))

    def with_kappa1(self, kappa1: float) -> "Scenario":
        return replace(self, power_split=PowerSplit.of(kappa1))

    def with_uniform_quality(self, eps: float) -> "Scenario":
        return replace(self, hq=HardwareQuality(eps_v=eps, eps_u1=eps, eps_u2=eps))


def default_scenario() -> Scenario:
    """Baseline instance: 32x32 grid, quarter-wavelength cells, feed at 10
    wavelengths, Rayleigh fading, equal surface split, 40 dB / 0 dB users."""
    wavelength = 0.3
    surface = SurfaceGeometry(
        n_x=32, n_y=32, delta_x=wavelength / 4, delta_y=wavelength / 4, wavelength=wavelength
    )
    return Scenario(
        surface=surface,
        feed=FeedGeometry(d0=10 * wavelength, alpha=2.0),
        split_surface=SurfaceSplit.from_reflect_power(0.5),
        user1=UserLinkParams(m=1.0, rho_large=1e4, side=SIDE_REFLECT),
        user2=UserLinkParams(m=1.0, rho_large=1.0, side=SIDE_REFRACT),
        hq=HardwareQuality(eps_v=1.0, eps_u1=1.0, eps_u2=1.0),
        budget=LinkBudget(rho=1.0, sigma2_1=1.0, sigma2_2=1.0),
        power_split=PowerSplit.of(0.5),
    )


def _db_to_linear(value: float) -> float:
    return 10.0 ** (value / 10.0)


def _resolve_db_keys(section: dict, context: str) -> dict:
    out = {}
    for key, value in section.items():
        if key.startswith("_") or key == "notes":
            continue
        if key.endswith("_db"):
            base = key[: -len("_db")]
            if base in section:
                raise ConfigError(f"{context}: both {base} and {key} given")
            try:
                out[base] = _db_to_linear(float(value))
            except (TypeError, ValueError):
                raise ConfigError(f"{context}.{key}: expected a number, got {value!r}")
        else:
            out[key] = value
    return out


def _section(data: dict, name: str) -> dict:
    sec = data.get(name)
    if not isinstance(sec, dict):
        raise ConfigError(f"missing or malformed section {name!r}")
    return _resolve_db_keys(sec, name)


def _build(context: str, factory, **kwargs):
    try:
        return factory(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"{context}: {exc}") from exc
    except Exception as exc:
        raise ConfigError(f"{context}: {exc}") from exc


def scenario_from_dict(data: dict) -> Scenario:
    """Build and validate a Scenario from a configuration mapping."""
    surface = _build("surface", SurfaceGeometry, **_section(data, "surface"))
    feed = _build("feed", FeedGeometry, **_section(data, "feed"))

    split_sec = _section(data, "split_surface")
    if "beta1_sq" in split_sec:
        split = _build(
            "split_surface", SurfaceSplit.from_reflect_power, beta1_sq=split_sec["beta1_sq"]
        )
    else:
        split = _build("split_surface", SurfaceSplit, **split_sec)

    users = []
    for name, default_side in (("user1", SIDE_REFLECT), ("user2", SIDE_REFRACT)):
        sec = _section(data, name)
        sec.setdefault("side", default_side)
        users.append(_build(name, UserLinkParams, **sec))

    hq = _build("hardware", HardwareQuality, **_section(data, "hardware"))
    budget = _build("budget", LinkBudget, **_section(data, "budget"))

    ps = _section(data, "power_split")
    if "kappa2" not in ps and "kappa1" in ps:
        split_power = _build("power_split", PowerSplit.of, kappa1=ps["kappa1"])
    else:
        split_power = _build("power_split", PowerSplit, **ps)

    return Scenario(
        surface=surface,
        feed=feed,
        split_surface=split,
        user1=users[0],
        user2=users[1],
        hq=hq,
        budget=budget,
        power_split=split_power,
    )


def load_scenario(path: str | Path | None = None) -> Scenario:
    """Load a scenario JSON file; with no path, the packaged default config."""
    if path is None:
        text = resources.files("ios_hmimo").joinpath("data/default_scenario.json").read_text()
    else:
        text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return scenario_from_dict(data)


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "surface": {
            "n_x": s.surface.n_x,
            "n_y": s.surface.n_y,
            "delta_x": s.surface.delta_x,
            "delta_y": s.surface.delta_y,
            "wavelength": s.surface.wavelength,
        },
        "feed": {"d0": s.feed.d0, "alpha": s.feed.alpha},
        "split_surface": {"beta1": s.split_surface.beta1, "beta2": s.split_surface.beta2},
        "user1": {"m": s.user1.m, "rho_large": s.user1.rho_large, "side": s.user1.side},
        "user2": {"m": s.user2.m, "rho_large": s.user2.rho_large, "side": s.user2.side},
        "hardware": {"eps_v": s.hq.eps_v, "eps_u1": s.hq.eps_u1, "eps_u2": s.hq.eps_u2},
        "budget": {
            "rho": s.budget.rho,
            "sigma2_1": s.budget.sigma2_1,
            "sigma2_2": s.budget.sigma2_2,
        },
        "power_split": {"kappa1": s.power_split.kappa1, "kappa2": s.power_split.kappa2},
    }


def scenario_digest(s: Scenario) -> str:
    """Short stable digest of the resolved scenario, for output provenance."""
    canonical = json.dumps(scenario_to_dict(s), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]
