"""Render the two reproduction figures from the experiment runner's CSV files.

The renderer is read-only over its inputs and fully deterministic: fixed
styling, fixed output metadata, no timestamps, so identical CSV input yields
identical image bytes.

Figure tags and their required CSV columns:
  rate-vs-n      n_elements, scheme, user, mc_rate, mc_half_width_95,
                 bound, plateau
  rgm-vs-power   power_db, eps_panel, scheme, kappa1, r_gm, plateau
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

FIGURE_RATE_VS_N = "rate-vs-n"
FIGURE_RGM_VS_POWER = "rgm-vs-power"

_SCHEMAS = {
    FIGURE_RATE_VS_N: (
        "n_elements",
        "scheme",
        "user",
        "mc_rate",
        "mc_half_width_95",
        "bound",
        "plateau",
    ),
    FIGURE_RGM_VS_POWER: ("power_db", "eps_panel", "scheme", "kappa1", "r_gm", "plateau"),
}

_COLORS = {("NOMA", "1"): "C0", ("NOMA", "2"): "C1", ("OMA", "1"): "C2", ("OMA", "2"): "C3"}

# Fixed PNG metadata so repeated renders are byte-identical.
_PNG_METADATA = {"Software": "ios-hmimo-plot"}


class PlotError(Exception):
    """Base class for rendering errors."""


class SchemaMismatch(PlotError):
    """Input CSV is missing required columns for the chosen figure."""


class EmptyInput(PlotError):
    """Input CSV has no data rows."""


@dataclass(frozen=True)
class FigureSpec:
    input_csv: str
    figure: str
    output: str

    def __post_init__(self) -> None:
        if self.figure not in _SCHEMAS:
            raise SchemaMismatch(f"unknown figure tag {self.figure!r}")


def read_rows(path: str | Path, figure: str) -> list[dict[str, str]]:
    """Parse a runner CSV, skipping the comment header, and check the schema."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    required = _SCHEMAS[figure]
    fields = reader.fieldnames or []
    missing = [col for col in required if col not in fields]
    if missing:
        raise SchemaMismatch(f"missing columns for {figure}: {', '.join(missing)}")
    rows = list(reader)
    if not rows:
        raise EmptyInput(f"{path} contains no data rows")
    return rows


def _rate_vs_n_figure(rows: list[dict[str, str]]):
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    series: dict[tuple[str, str], list[tuple[int, float, float, float, float]]] = {}
    for row in rows:
        key = (row["scheme"], row["user"])
        series.setdefault(key, []).append(
            (
                int(row["n_elements"]),
                float(row["mc_rate"]),
                float(row["mc_half_width_95"]),
                float(row["bound"]),
                float(row["plateau"]),
            )
        )
    for key in sorted(series):
        scheme, user = key
        pts = sorted(series[key])
        n = [p[0] for p in pts]
        color = _COLORS.get(key, "C4")
        ax.errorbar(
            n,
            [p[1] for p in pts],
            yerr=[p[2] for p in pts],
            fmt="o",
            color=color,
            markersize=4,
            capsize=3,
            label=f"{scheme} UE-{user} (simulation)",
        )
        ax.plot(n, [p[3] for p in pts], "-", color=color, label=f"{scheme} UE-{user} (bound)")
        plateau = pts[-1][4]
        if scheme == "NOMA" and math.isfinite(plateau):
            ax.axhline(plateau, color=color, linestyle="--", linewidth=0.9, alpha=0.7)
    ax.set_xscale("log", base=2)
    ax.set_xlabel("Number of surface elements")
    ax.set_ylabel("Ergodic rate (bits/s/Hz)")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def _rgm_vs_power_figure(rows: list[dict[str, str]]):
    panels: list[str] = []
    for row in rows:
        if row["eps_panel"] not in panels:
            panels.append(row["eps_panel"])
    fig, axes = plt.subplots(1, len(panels), figsize=(4.0 * len(panels), 4.2), sharey=False)
    if len(panels) == 1:
        axes = [axes]
    for ax, eps in zip(axes, panels):
        for scheme, style, color in (("NOMA", "-o", "C0"), ("OMA", "-s", "C2")):
            pts = sorted(
                (float(r["power_db"]), float(r["r_gm"]))
                for r in rows
                if r["eps_panel"] == eps and r["scheme"] == scheme
            )
            if pts:
                ax.plot(
                    [p[0] for p in pts],
                    [p[1] for p in pts],
                    style,
                    color=color,
                    markersize=4,
                    label=scheme,
                )
        plateaus = {
            r["plateau"] for r in rows if r["eps_panel"] == eps and r["plateau"] != "inf"
        }
        for value in sorted(plateaus):
            ax.axhline(float(value), color="k", linestyle="--", linewidth=0.9, alpha=0.7)
        ax.set_title(f"quality factor {eps}")
        ax.set_xlabel("Received SNR of UE-1 (dB)")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
    axes[0].set_ylabel("Geometric-mean rate (bits/s/Hz)")
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> str:
    """Render the figure described by ``spec`` and return the output path."""
    rows = read_rows(spec.input_csv, spec.figure)
    if spec.figure == FIGURE_RATE_VS_N:
        fig = _rate_vs_n_figure(rows)
    else:
        fig = _rgm_vs_power_figure(rows)
    out = Path(spec.output)
    try:
        if out.suffix.lower() == ".svg":
            fig.savefig(out, metadata={"Date": None})
        else:
            fig.savefig(out, metadata=_PNG_METADATA)
    finally:
        plt.close(fig)
    return str(out)
