"""Grid placement, per-element energy quadrature and aperture functionals."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ios_hmimo.errors import InvalidAlpha, QuadratureNotConverged
from ios_hmimo.geometry import (
    A1_AS_PRINTED,
    A1_RE_DERIVED,
    CONVENTION_DISCRETE,
    CONVENTION_PAPER,
    ApertureSums,
    ElementGrid,
    FeedGeometry,
    SurfaceGeometry,
    aperture_sums_discrete,
    aperture_sums_infinite,
    aperture_sums_integral,
    build_grid,
    captured_energy_within_radius,
    element_centers,
    element_energy,
    feed_channel,
    feed_distance,
    omega,
    omega_power_plane_integral,
)

WAVELENGTH = 0.3
FEED = FeedGeometry(d0=3.0, alpha=2.0)


def surface(n, delta=WAVELENGTH / 4):
    return SurfaceGeometry(n_x=n, n_y=n, delta_x=delta, delta_y=delta, wavelength=WAVELENGTH)


class TestElementCenters:
    def test_single_element_at_origin(self):
        c = element_centers(surface(1))
        assert c.shape == (1, 2)
        assert np.allclose(c, [[0.0, 0.0]])

    def test_two_by_one_symmetric(self):
        s = SurfaceGeometry(n_x=2, n_y=1, delta_x=1.0, delta_y=1.0, wavelength=0.3)
        xs = sorted(element_centers(s)[:, 0])
        assert xs == [-0.5, 0.5]

    def test_four_column_positions(self):
        s = SurfaceGeometry(n_x=4, n_y=1, delta_x=0.075, delta_y=0.075, wavelength=0.3)
        xs = sorted(element_centers(s)[:, 0])
        assert np.allclose(xs, [-0.1125, -0.0375, 0.0375, 0.1125])

    def test_tiles_region_exactly(self):
        s = surface(6)
        c = element_centers(s)
        assert np.isclose(c[:, 0].min() - s.delta_x / 2, -s.half_x)
        assert np.isclose(c[:, 0].max() + s.delta_x / 2, s.half_x)

    def test_point_symmetric(self):
        c = element_centers(surface(5))
        flipped = -c
        assert np.allclose(sorted(map(tuple, c)), sorted(map(tuple, flipped)))


class TestFeedDistance:
    def test_on_axis(self):
        assert feed_distance((0.0, 0.0), FeedGeometry(d0=3.0, alpha=2.0)) == 3.0

    def test_pythagorean(self):
        d = feed_distance((1.0, 2.0), FeedGeometry(d0=2.0, alpha=2.0))
        assert d == pytest.approx(3.0)

    def test_never_below_d0(self):
        assert feed_distance((5.0, -7.0), FEED) >= FEED.d0


class TestOmegaAndEnergy:
    def test_density_positive_and_decaying(self):
        assert omega(0.0, 0.0, FEED) > omega(1.0, 0.0, FEED) > omega(5.0, 0.0, FEED) > 0

    def test_mirrored_elements_equal_energy(self):
        s = surface(4)
        e_pp = element_energy((0.5, 0.8), s, FEED)
        e_mm = element_energy((-0.5, -0.8), s, FEED)
        assert e_pp == pytest.approx(e_mm, rel=1e-12)

    def test_energy_in_unit_interval(self):
        val = element_energy((0.0, 0.0), surface(1), FEED)
        assert 0.0 < val < 1.0

    def test_disk_capture_closed_form(self):
        # alpha=2, R=d0: 1 - 2**-1.5
        assert captured_energy_within_radius(FEED, FEED.d0) == pytest.approx(
            1.0 - 2.0**-1.5
        )

    def test_square_captures_more_than_inscribed_disk(self):
        # A centered square of side 2*d0 (tiled by 80x80 cells of lambda/4)
        # must capture more than the closed-form disk value ~0.64645.
        s = surface(80)
        assert s.half_x == pytest.approx(FEED.d0)
        total = float(build_grid(s, FEED).energies.sum())
        assert total > captured_energy_within_radius(FEED, FEED.d0)
        assert total < 1.0

    def test_refinement_failure_raises(self):
        # A cell far larger than the feed distance concentrates all variation
        # of omega in a corner; fixed-order quadrature cannot converge.
        rough = SurfaceGeometry(n_x=1, n_y=1, delta_x=50.0, delta_y=50.0, wavelength=0.3)
        with pytest.raises(QuadratureNotConverged):
            element_energy((0.0, 0.0), rough, FeedGeometry(d0=0.01, alpha=2.0))


class TestFeedChannel:
    def test_modulus_is_sqrt_energy(self):
        s = surface(4)
        center = (0.0375, 0.1125)
        g = feed_channel(center, s, FEED)
        assert abs(g) == pytest.approx(math.sqrt(element_energy(center, s, FEED)))

    def test_phase_matches_distance(self):
        s = surface(4)
        center = (0.6, -0.3)
        g = feed_channel(center, s, FEED)
        expected = -2.0 * math.pi * feed_distance(center, FEED) / s.wavelength
        assert math.remainder(np.angle(g) - expected, 2.0 * math.pi) == pytest.approx(
            0.0, abs=1e-12
        )


class TestApertureSumsDiscrete:
    def test_single_full_energy_element(self):
        grid = ElementGrid(centers=np.zeros((1, 2)), energies=np.array([1.0]))
        sums = aperture_sums_discrete(grid)
        assert sums.as_tuple() == (1.0, 1.0, 1.0, 1.0)

    def test_two_quarter_elements(self):
        grid = ElementGrid(centers=np.zeros((2, 2)), energies=np.array([0.25, 0.25]))
        sums = aperture_sums_discrete(grid)
        assert sums.as_tuple() == pytest.approx((1.0, 0.5, 0.25, 0.125))

    def test_a2_monotone_toward_one(self):
        totals = [aperture_sums_discrete(build_grid(surface(n), FEED)).a2 for n in (8, 16, 32, 64)]
        assert all(b > a for a, b in zip(totals, totals[1:]))
        assert totals[-1] < 1.0

    def test_power_mean_inequalities(self):
        sums = aperture_sums_discrete(build_grid(surface(16), FEED))
        assert sums.a2 <= 1.0
        assert sums.a4 <= sums.a2**2

    def test_positive_required(self):
        with pytest.raises(ValueError):
            ApertureSums(a1=1.0, a2=0.0, a3=1.0, a4=1.0, form="discrete")


class TestApertureSumsIntegral:
    def test_a2_equals_energy_sum(self):
        s = surface(16)
        total = float(build_grid(s, FEED).energies.sum())
        integral = aperture_sums_integral(s, FEED, convention=CONVENTION_PAPER)
        assert integral.a2 == pytest.approx(total, rel=1e-10)

    def test_a2_independent_of_cell_size(self):
        # Same total aperture, different tilings: a2 carries no delta factor.
        coarse = aperture_sums_integral(surface(16, WAVELENGTH / 4), FEED)
        fine = aperture_sums_integral(surface(32, WAVELENGTH / 8), FEED)
        assert coarse.a2 == pytest.approx(fine.a2, rel=1e-9)

    def test_conventions_differ_by_wavelength_powers(self):
        s = surface(16)
        paper = aperture_sums_integral(s, FEED, convention=CONVENTION_PAPER)
        disc = aperture_sums_integral(s, FEED, convention=CONVENTION_DISCRETE)
        lam = s.wavelength
        for k, (p, d) in enumerate(zip(paper.as_tuple(), disc.as_tuple()), start=1):
            assert d == pytest.approx(lam ** (k - 2) * p, rel=1e-12)

    def test_discrete_convention_tracks_sums(self):
        # For cells <= lambda/4 the per-cell density is nearly constant, so the
        # (delta_x*delta_y)-normalized integrals approximate the plain sums.
        s = surface(16)
        sums = aperture_sums_discrete(build_grid(s, FEED))
        integral = aperture_sums_integral(s, FEED, convention=CONVENTION_DISCRETE)
        # The residual is the per-cell concavity correction, O((delta/d0)^2).
        for d, i in zip(sums.as_tuple(), integral.as_tuple()):
            assert d == pytest.approx(i, rel=1e-4)

    def test_axis_reflection_invariance(self):
        s = surface(7)
        grid = build_grid(s, FEED)
        mirrored = ElementGrid(
            centers=grid.centers * np.array([-1.0, 1.0]), energies=grid.energies
        )
        assert aperture_sums_discrete(mirrored).as_tuple() == pytest.approx(
            aperture_sums_discrete(grid).as_tuple()
        )


class TestApertureSumsInfinite:
    def test_a2_is_one(self):
        sums = aperture_sums_infinite(surface(8), FEED)
        assert sums.a2 == 1.0

    def test_a4_printed_closed_form(self):
        # (delta^2/lambda^2) * (alpha+1)^2 / (4 pi (alpha+2) d0^2)
        # = (1/16) * 9 / (16 pi * 9) = 1/(256 pi) at the default geometry.
        sums = aperture_sums_infinite(surface(8), FEED, convention=CONVENTION_PAPER)
        assert sums.a4 == pytest.approx(1.0 / (256.0 * math.pi), rel=1e-12)

    def test_a1_printed_closed_form(self):
        # (1/16)^(-1/2) * sqrt(8 pi) * sqrt(3) * 1 * 3 = 12 sqrt(6 pi)
        sums = aperture_sums_infinite(surface(8), FEED, convention=CONVENTION_PAPER)
        assert sums.a1 == pytest.approx(4.0 * math.sqrt(24.0 * math.pi) * 3.0, rel=1e-12)

    def test_a1_variants_coincide_at_alpha_two(self):
        printed = aperture_sums_infinite(surface(8), FEED, a1_variant=A1_AS_PRINTED)
        derived = aperture_sums_infinite(surface(8), FEED, a1_variant=A1_RE_DERIVED)
        assert printed.a1 == pytest.approx(derived.a1, rel=1e-15)

    def test_a1_variants_differ_off_alpha_two(self):
        feed = FeedGeometry(d0=3.0, alpha=3.0)
        printed = aperture_sums_infinite(surface(8), feed, a1_variant=A1_AS_PRINTED)
        derived = aperture_sums_infinite(surface(8), feed, a1_variant=A1_RE_DERIVED)
        assert printed.a1 == pytest.approx(4.0 * derived.a1)

    def test_invalid_alpha_rejected(self):
        with pytest.raises(InvalidAlpha):
            FeedGeometry(d0=3.0, alpha=1.0)

    def test_growing_squares_converge_to_infinite_forms(self):
        # alpha=2 quadrature over expanding regions vs the closed forms
        # (re-derived a1, which matches as-printed at alpha=2).
        s = surface(8)
        closed = aperture_sums_infinite(s, FEED, a1_variant=A1_RE_DERIVED)
        lam2 = s.wavelength**2
        norms = [(s.cell_area / lam2) ** ((k - 2) / 2.0) for k in (1, 2, 3, 4)]
        for k, norm, target in zip((1, 2, 3, 4), norms, closed.as_tuple()):
            raw = omega_power_plane_integral(FEED, k)
            assert norm * raw == pytest.approx(target, rel=1e-4)


@settings(max_examples=20, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=12),
    d0=st.floats(min_value=0.5, max_value=10.0),
    alpha=st.floats(min_value=1.2, max_value=6.0),
)
def test_energy_sum_bounded_and_positive(n, d0, alpha):
    s = SurfaceGeometry(n_x=n, n_y=n, delta_x=0.075, delta_y=0.075, wavelength=0.3)
    grid = build_grid(s, FeedGeometry(d0=d0, alpha=alpha))
    assert np.all(grid.energies > 0)
    assert grid.energies.sum() <= 1.0


def test_energy_sum_monotone_in_grid_size():
    totals = [float(build_grid(surface(n), FEED).energies.sum()) for n in (2, 4, 8, 16)]
    assert all(b > a for a, b in zip(totals, totals[1:]))
