"""Rendering from documented CSV schemas: structure, errors, determinism."""

import pytest

from ios_hmimo_plots.render import (
    EmptyInput,
    FigureSpec,
    SchemaMismatch,
    _rate_vs_n_figure,
    _rgm_vs_power_figure,
    read_rows,
    render,
)

RATE_VS_N_CSV = """\
# tool: ios-hmimo 0.1.0
# seed: 1
n_elements,scheme,user,mc_rate,mc_half_width_95,bound,plateau
16,NOMA,1,1.31,0.01,1.27,21.2
16,NOMA,2,0.0002,0.00001,0.0002,0.997
16,OMA,1,0.99,0.006,0.97,11.1
16,OMA,2,0.0002,0.00001,0.0002,4.45
64,NOMA,1,4.61,0.008,4.60,21.2
64,NOMA,2,0.0034,0.00002,0.0034,0.997
64,OMA,1,2.79,0.004,2.79,11.1
64,OMA,2,0.0034,0.00002,0.0034,4.45
"""

RGM_CSV = """\
# tool: ios-hmimo 0.1.0
power_db,eps_panel,scheme,kappa1,r_gm,plateau
0,1,NOMA,0.23,0.22,inf
0,1,OMA,0.5,0.15,inf
60,1,NOMA,0.0003,12.9,inf
60,1,OMA,0.5,9.4,inf
0,0.99,NOMA,0.28,0.18,2.826
0,0.99,OMA,0.5,0.13,2.826
60,0.99,NOMA,0.12,2.825,2.826
60,0.99,OMA,0.5,2.824,2.826
0,0.9999,NOMA,0.23,0.22,6.144
0,0.9999,OMA,0.5,0.15,6.144
60,0.9999,NOMA,0.014,6.14,6.144
60,0.9999,OMA,0.5,5.99,6.144
"""


@pytest.fixture
def rate_csv(tmp_path):
    path = tmp_path / "rate.csv"
    path.write_text(RATE_VS_N_CSV)
    return path


@pytest.fixture
def rgm_csv(tmp_path):
    path = tmp_path / "rgm.csv"
    path.write_text(RGM_CSV)
    return path


class TestReadRows:
    def test_skips_comment_header(self, rate_csv):
        rows = read_rows(rate_csv, "rate-vs-n")
        assert len(rows) == 8
        assert rows[0]["scheme"] == "NOMA"

    def test_missing_columns_named(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("n_elements,scheme\n16,NOMA\n")
        with pytest.raises(SchemaMismatch, match="mc_rate"):
            read_rows(path, "rate-vs-n")

    def test_empty_rows_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("power_db,eps_panel,scheme,kappa1,r_gm,plateau\n")
        with pytest.raises(EmptyInput):
            read_rows(path, "rgm-vs-power")

    def test_unknown_figure_tag(self, rate_csv, tmp_path):
        with pytest.raises(SchemaMismatch, match="figure tag"):
            FigureSpec(input_csv=str(rate_csv), figure="scatter", output="x.png")


class TestFigures:
    def test_rate_vs_n_has_curve_per_scheme_user(self, rate_csv):
        fig = _rate_vs_n_figure(read_rows(rate_csv, "rate-vs-n"))
        labels = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
        for scheme in ("NOMA", "OMA"):
            for user in ("1", "2"):
                assert any(f"{scheme} UE-{user}" in lab for lab in labels)
        # Horizontal plateau lines for the NOMA users.
        hlines = [ln for ln in fig.axes[0].get_lines() if ln.get_linestyle() == "--"]
        assert len(hlines) >= 2

    def test_rgm_three_panels(self, rgm_csv):
        fig = _rgm_vs_power_figure(read_rows(rgm_csv, "rgm-vs-power"))
        assert len(fig.axes) == 3
        titles = [ax.get_title() for ax in fig.axes]
        for eps in ("1", "0.99", "0.9999"):
            assert any(eps in t for t in titles)

    def test_rgm_plateau_lines_only_when_finite(self, rgm_csv):
        fig = _rgm_vs_power_figure(read_rows(rgm_csv, "rgm-vs-power"))
        dashed_counts = [
            sum(1 for ln in ax.get_lines() if ln.get_linestyle() == "--")
            for ax in fig.axes
        ]
        assert dashed_counts[0] == 0  # perfect-hardware panel: unbounded
        assert all(c >= 1 for c in dashed_counts[1:])


class TestRender:
    def test_png_output(self, rate_csv, tmp_path):
        out = tmp_path / "fig.png"
        render(FigureSpec(str(rate_csv), "rate-vs-n", str(out)))
        assert out.stat().st_size > 0
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_svg_output(self, rgm_csv, tmp_path):
        out = tmp_path / "fig.svg"
        render(FigureSpec(str(rgm_csv), "rgm-vs-power", str(out)))
        assert b"<svg" in out.read_bytes()

    def test_deterministic_bytes(self, rate_csv, tmp_path):
        a = tmp_path / "a.png"
        b = tmp_path / "b.png"
        render(FigureSpec(str(rate_csv), "rate-vs-n", str(a)))
        render(FigureSpec(str(rate_csv), "rate-vs-n", str(b)))
        assert a.read_bytes() == b.read_bytes()

    def test_input_untouched(self, rate_csv, tmp_path):
        before = rate_csv.read_bytes()
        render(FigureSpec(str(rate_csv), "rate-vs-n", str(tmp_path / "fig.png")))
        assert rate_csv.read_bytes() == before
