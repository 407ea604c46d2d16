"""Command-line experiment runner.

Subcommands:
  single        full closed-form report (plus optional Monte Carlo) as JSON
  rate-vs-n     ergodic rates against element count, MC vs bound vs plateau
  rgm-vs-power  optimized geometric-mean rate against transmit power,
                three hardware-quality panels, with saturation levels
  validate      load a configuration, run internal consistency checks

All numeric CSV columns are printed with 12 significant digits, and every CSV
carries a comment header with the tool version, seed, convention flags and a
digest of the resolved scenario so runs can be reproduced exactly.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

from . import __version__, theory
from .errors import ConfigError, IosHmimoError, NonIntegrableInverseMoment, QuadratureNotConverged
from .geometry import (
    A1_AS_PRINTED,
    A1_RE_DERIVED,
    CONVENTION_DISCRETE,
    CONVENTION_PAPER,
    aperture_sums_discrete,
    aperture_sums_infinite,
)
from .mc import McConfig, channel_moments_mc, ergodic_rates_mc
from .optimize import OptimizerConfig, maximize_kappa, optimize_kappa_noma
from .rates import PowerSplit
from .scenario import Scenario, load_scenario, scenario_digest, scenario_to_dict
from .theory import asymptotic_rho, bound_report, rate_lower_bounds, scenario_etas

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_CONVENTIONS = {"discrete": CONVENTION_DISCRETE, "paper-integral": CONVENTION_PAPER}
_A1_VARIANTS = {"as-printed": A1_AS_PRINTED, "re-derived": A1_RE_DERIVED}

DEFAULT_N_LIST = "16,64,256,1024,4096"
DEFAULT_GRID_DB = "0:120:10"
DEFAULT_PANELS = "1,0.9999,0.99"


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return format(float(x), ".12g")


def _header_lines(args, scenario: Scenario, command: str) -> list[str]:
    return [
        f"# tool: ios-hmimo {__version__}",
        f"# command: {command}",
        f"# seed: {args.seed}",
        f"# trials: {args.trials}",
        f"# convention: {args.convention}",
        f"# a1_variant: {args.a1_variant}",
        f"# scenario_digest: {scenario_digest(scenario)}",
    ]


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IoFailure(str(exc)) from exc


class _IoFailure(Exception):
    pass


def _load(args) -> Scenario:
    return load_scenario(args.config)


def _parse_values(text: str, kind: type, flag: str):
    try:
        values = [kind(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"{flag}: {exc}") from exc
    if not values:
        raise ConfigError(f"{flag}: empty list")
    increasing = all(b > a for a, b in zip(values, values[1:]))
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    if not (increasing or decreasing):
        raise ConfigError(f"{flag}: values must be strictly monotone")
    return values


def _parse_grid(text: str) -> list[float]:
    try:
        start, stop, step = (float(tok) for tok in text.split(":"))
    except ValueError as exc:
        raise ConfigError(f"--grid-db: expected start:stop:step, got {text!r}") from exc
    if step <= 0 or stop < start:
        raise ConfigError("--grid-db: need step > 0 and stop >= start")
    count = int(round((stop - start) / step))
    return [start + i * step for i in range(count + 1)]


def cmd_single(args) -> int:
    scenario = _load(args)
    convention = _CONVENTIONS[args.convention]
    variant = _A1_VARIANTS[args.a1_variant]
    sums = aperture_sums_discrete(scenario.grid())
    mom1 = theory.channel_moments(sums, scenario.user1.m, scenario.user1.rho_large, scenario.beta(1))
    mom2 = theory.channel_moments(sums, scenario.user2.m, scenario.user2.rho_large, scenario.beta(2))
    eta1 = theory.eta_coefficient(sums, scenario.user1.m)
    eta2 = theory.eta_coefficient(sums, scenario.user2.m)
    rep = bound_report(scenario, convention=convention, a1_variant=variant)

    def inf_safe(x: float):
        return "inf" if math.isinf(x) else x

    doc = {
        "tool": f"ios-hmimo {__version__}",
        "seed": args.seed,
        "scenario_digest": scenario_digest(scenario),
        "scenario": scenario_to_dict(scenario),
        "aperture_sums": {"a1": sums.a1, "a2": sums.a2, "a3": sums.a3, "a4": sums.a4},
        "moments": {
            "user1": {"e_h2": mom1.e_h2, "e_h4": mom1.e_h4},
            "user2": {"e_h2": mom2.e_h2, "e_h4": mom2.e_h4},
        },
        "gamma_fit": {
            "user1": vars(theory.gamma_fit(mom1)),
            "user2": vars(theory.gamma_fit(mom2)),
        },
        "eta": {"user1": vars(eta1), "user2": vars(eta2)},
        "bounds": {
            "noma_r1_lb": rep.r1_lb,
            "noma_r2_lb": rep.r2_lb,
            "r1_limit_power": inf_safe(rep.r1_inf_rho),
            "r2_limit_power": inf_safe(rep.r2_inf_rho),
            "r1_limit_elements": rep.r1_inf_n,
            "r2_limit_elements": rep.r2_inf_n,
            "r1_continuous": rep.r1_cont,
            "r2_continuous": rep.r2_cont,
            "snr_slope_user1": rep.s1,
            "snr_slope_user2": rep.s2,
        },
    }
    if args.trials > 0:
        mc = McConfig(trials=args.trials, seed=args.seed)
        report = ergodic_rates_mc(scenario, mc, workers=args.workers)
        doc["monte_carlo"] = {
            name: vars(getattr(report, name))
            for name in ("noma_r1", "noma_r2", "noma_rgm", "oma_r1", "oma_r2", "oma_rgm")
        }
    _write_text(args.out, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_rate_vs_n(args) -> int:
    base = _load(args)
    if args.rho_db is not None:
        base = base.with_rho(10.0 ** (args.rho_db / 10.0))
    convention = _CONVENTIONS[args.convention]
    variant = _A1_VARIANTS[args.a1_variant]
    n_list = _parse_values(args.n_list, int, "--n-list")

    lines = _header_lines(args, base, "rate-vs-n")
    lines.append("n_elements,scheme,user,mc_rate,mc_half_width_95,bound,plateau")
    for n in n_list:
        scen = base.with_n_elements(n)
        sums = scen.discrete_sums()
        eta1, eta2 = scenario_etas(scen, sums)
        noma_lb = theory.noma_bound_rates(scen, eta1, eta2)
        oma_lb = theory.oma_bound_rates(scen, eta1, eta2)
        plat_noma = theory.asymptotic_n(scen, convention=convention, a1_variant=variant)
        inf_sums = aperture_sums_infinite(
            scen.surface, scen.feed, convention=convention, a1_variant=variant
        )
        plat_oma = theory.oma_bound_rates(scen, *scenario_etas(scen, inf_sums))
        mc = McConfig(trials=args.trials, seed=args.seed)
        report = ergodic_rates_mc(scen, mc, workers=args.workers)
        rows = (
            ("NOMA", 1, report.noma_r1, noma_lb[0], plat_noma[0]),
            ("NOMA", 2, report.noma_r2, noma_lb[1], plat_noma[1]),
            ("OMA", 1, report.oma_r1, oma_lb[0], plat_oma[0]),
            ("OMA", 2, report.oma_r2, oma_lb[1], plat_oma[1]),
        )
        for scheme, user, est, bound, plateau in rows:
            lines.append(
                f"{n},{scheme},{user},{_fmt(est.mean)},{_fmt(est.half_width_95)},"
                f"{_fmt(bound)},{_fmt(plateau)}"
            )
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _gm_plateau(scenario: Scenario, cfg: OptimizerConfig) -> float:
    """Optimized geometric mean of the infinite-power rate limits."""
    r1, r2 = asymptotic_rho(PowerSplit.of(0.5), scenario.hq)
    if math.isinf(r1) or math.isinf(r2):
        return math.inf

    def objective(kappa1: float) -> float:
        a, b = asymptotic_rho(PowerSplit.of(kappa1), scenario.hq)
        return math.sqrt(a * b)

    _, value, _ = maximize_kappa(objective, cfg)
    return value


def cmd_rgm_vs_power(args) -> int:
    base = _load(args)
    grid_db = _parse_grid(args.grid_db)
    panels = _parse_values(args.panels, float, "--panels")
    panels = list(reversed(panels)) if panels[0] < panels[-1] else panels
    for eps in panels:
        if not 0.0 <= eps <= 1.0:
            raise ConfigError(f"--panels: quality factor {eps} outside [0, 1]")
    cfg = OptimizerConfig()
    # The power axis is UE-1's received SNR rho*varrho_1/sigma_1^2 in dB.
    snr_scale = base.user1.rho_large / base.budget.sigma2_1

    lines = _header_lines(args, base, "rgm-vs-power")
    lines.append("power_db,eps_panel,scheme,kappa1,r_gm,plateau")
    for eps in panels:
        panel = base.with_uniform_quality(eps)
        plateau = _gm_plateau(panel, cfg)
        for db in grid_db:
            scen = panel.with_rho(10.0 ** (db / 10.0) / snr_scale)
            opt = optimize_kappa_noma(scen, cfg)
            eta1, eta2 = scenario_etas(scen, scen.discrete_sums())
            o1, o2 = theory.oma_bound_rates(scen, eta1, eta2, resource_split=PowerSplit.of(0.5))
            oma_gm = math.sqrt(o1 * o2)
            lines.append(
                f"{_fmt(db)},{_fmt(eps)},NOMA,{_fmt(opt.kappa1)},{_fmt(opt.r_gm)},{_fmt(plateau)}"
            )
            lines.append(f"{_fmt(db)},{_fmt(eps)},OMA,0.5,{_fmt(oma_gm)},{_fmt(plateau)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_validate(args) -> int:
    scenario = _load(args)
    checks: list[tuple[str, bool, str]] = []

    grid = scenario.grid()
    total = float(grid.energies.sum())
    checks.append(("element energies in (0, 1)", bool((grid.energies > 0).all()), ""))
    checks.append(("captured energy below 1", total < 1.0, f"sum={_fmt(total)}"))

    sums = aperture_sums_discrete(grid)
    ok_sums = sums.a1 >= sums.a2 >= sums.a3 >= sums.a4 > 0
    checks.append(("aperture sums ordered a1>=a2>=a3>=a4>0", bool(ok_sums), ""))

    for user in (1, 2):
        p = scenario.user(user)
        mom = theory.channel_moments(sums, p.m, p.rho_large, scenario.beta(user))
        checks.append(
            (f"user{user} moments satisfy E[h^4] >= E[h^2]^2", mom.e_h4 >= mom.e_h2**2, "")
        )
        try:
            eta = theory.eta_coefficient(sums, p.m).eta
            inv = theory.inverse_mean(mom)
            ident = abs(eta - p.rho_large * scenario.beta(user) ** 2 * inv)
            rel = ident / eta
            checks.append((f"user{user} eta identity", rel < 1e-10, f"rel_err={_fmt(rel)}"))
        except NonIntegrableInverseMoment:
            checks.append((f"user{user} inverse moment diverges (shape <= 1)", True, ""))

    if args.trials > 0:
        mc = McConfig(trials=args.trials, seed=args.seed)
        est = channel_moments_mc(scenario, 1, mc, workers=args.workers)
        mom = theory.channel_moments(
            sums, scenario.user1.m, scenario.user1.rho_large, scenario.beta(1)
        )
        rel2 = abs(est.e_h2.mean - mom.e_h2) / mom.e_h2
        rel4 = abs(est.e_h4.mean - mom.e_h4) / mom.e_h4
        checks.append(("MC E[h^2] within 1% of closed form", rel2 < 0.01, f"rel={_fmt(rel2)}"))
        checks.append(("MC E[h^4] within 2% of closed form", rel4 < 0.02, f"rel={_fmt(rel4)}"))

    r1, r2 = rate_lower_bounds(scenario, sums)
    checks.append(("rate bounds positive and finite", 0 < r1 < math.inf and 0 <= r2 < math.inf, ""))

    out = []
    failed = 0
    for name, ok, detail in checks:
        failed += 0 if ok else 1
        suffix = f" ({detail})" if detail else ""
        out.append(f"{'PASS' if ok else 'FAIL'}  {name}{suffix}")
    out.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    _write_text(args.out, "\n".join(out) + "\n")
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ios-hmimo",
        description="Ergodic-rate bounds and Monte Carlo experiments for an "
        "energy-splitting surface-assisted two-user downlink.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials_default):
        p.add_argument("--config", default=None, help="scenario JSON (default: built-in)")
        p.add_argument("--seed", type=int, default=12345)
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--convention", choices=sorted(_CONVENTIONS), default="discrete")
        p.add_argument("--a1-variant", choices=sorted(_A1_VARIANTS), default="as-printed")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("single", help="full closed-form report for one scenario")
    common(p, trials_default=0)
    p.set_defaults(func=cmd_single)

    p = sub.add_parser("rate-vs-n", help="rates against element count")
    common(p, trials_default=10_000)
    p.add_argument("--n-list", default=DEFAULT_N_LIST, help="comma list of element counts")
    p.add_argument(
        "--rho-db",
        type=float,
        default=-20.0,
        help="transmit power gain in dB applied to the scenario (default -20, "
        "placing the two users at 20 dB and -20 dB received SNR)",
    )
    p.set_defaults(func=cmd_rate_vs_n)

    p = sub.add_parser("rgm-vs-power", help="optimized geometric-mean rate vs power")
    common(p, trials_default=0)
    p.add_argument("--grid-db", default=DEFAULT_GRID_DB, help="power axis as start:stop:step dB")
    p.add_argument("--panels", default=DEFAULT_PANELS, help="comma list of quality factors")
    p.set_defaults(func=cmd_rgm_vs_power)

    p = sub.add_parser("validate", help="run internal consistency checks on a scenario")
    common(p, trials_default=0)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureNotConverged, NonIntegrableInverseMoment) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FileNotFoundError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except _IoFailure as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except IosHmimoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
