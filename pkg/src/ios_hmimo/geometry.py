"""Surface grid geometry, near-field feed energy capture and aperture functionals.

The feed illuminates a rectangular grid of surface elements from distance
``d0`` on the surface normal.  The captured-energy density

    omega(x, y) = (alpha + 1) * d0**(alpha + 1) / (2 pi)
                  * (d0**2 + x**2 + y**2) ** (-(alpha + 3) / 2)

integrates to 1 over the whole plane (for alpha > 1), so the per-element
energies gamma_n are fractions of the radiated power.  The four aperture
functionals a_k aggregate gamma_n**(k/2) over the surface and come in three
forms: discrete sums, finite-region integrals and infinite-plane closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import InvalidAlpha, QuadratureNotConverged

# Fixed-order tensor Gauss-Legendre per cell, refinement-checked at 2x order.
GL_ORDER = 8
GL_CHECK_ORDER = 16
GL_RTOL = 1e-9

# Forms an ApertureSums value can take.
FORM_DISCRETE = "discrete"
FORM_INTEGRAL = "finite-integral"
FORM_INFINITE = "infinite-plane"

# Conventions for the a_k normalization factors: the "paper" convention scales
# the finite-region integrals by (delta_x*delta_y/lambda**2)**((k-2)/2), the
# "discrete" convention by (delta_x*delta_y)**((k-2)/2) so that the integrals
# approximate the plain sums of gamma_n**(k/2).  The two differ by
# lambda**(2-k); never mix them inside one pipeline.
CONVENTION_PAPER = "paper"
CONVENTION_DISCRETE = "discrete"

A1_AS_PRINTED = "as-printed"
A1_RE_DERIVED = "re-derived"


@dataclass(frozen=True)
class SurfaceGeometry:
    """Uniform rectangular grid of n_x * n_y elements of size delta_x x delta_y."""

    n_x: int
    n_y: int
    delta_x: float
    delta_y: float
    wavelength: float

    def __post_init__(self) -> None:
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError("element counts n_x, n_y must be >= 1")
        if self.delta_x <= 0 or self.delta_y <= 0:
            raise ValueError("element sizes delta_x, delta_y must be positive")
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")

    @property
    def n_elements(self) -> int:
        return self.n_x * self.n_y

    @property
    def cell_area(self) -> float:
        return self.delta_x * self.delta_y

    @property
    def half_x(self) -> float:
        return self.n_x * self.delta_x / 2.0

    @property
    def half_y(self) -> float:
        return self.n_y * self.delta_y / 2.0


@dataclass(frozen=True)
class FeedGeometry:
    """Feed on the surface normal at distance d0, with gain exponent alpha."""

    d0: float
    alpha: float

    def __post_init__(self) -> None:
        if self.d0 <= 0:
            raise ValueError("feed distance d0 must be positive")
        if self.alpha <= 1:
            # The plane integral of omega**(1/2) diverges for alpha <= 1, so
            # the whole moment pipeline is restricted to alpha > 1.
            raise InvalidAlpha(f"alpha must exceed 1, got {self.alpha}")


@dataclass(frozen=True)
class ElementGrid:
    """Element center coordinates (row-major) and captured-energy fractions."""

    centers: np.ndarray  # shape (N, 2)
    energies: np.ndarray  # shape (N,)

    def __post_init__(self) -> None:
        if self.centers.shape != (self.energies.shape[0], 2):
            raise ValueError("centers must have shape (N, 2) matching energies")

    @property
    def n_elements(self) -> int:
        return self.energies.shape[0]


@dataclass(frozen=True)
class ApertureSums:
    """The four aperture functionals a_k, tagged with the form they came from."""

    a1: float
    a2: float
    a3: float
    a4: float
    form: str

    def __post_init__(self) -> None:
        if not all(a > 0 for a in (self.a1, self.a2, self.a3, self.a4)):
            raise ValueError("aperture functionals must be strictly positive")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4)


def omega(x, y, feed: FeedGeometry):
    """Captured-energy density of the feed at surface point (x, y)."""
    a, d0 = feed.alpha, feed.d0
    return (a + 1) * d0 ** (a + 1) / (2 * math.pi) * (
        d0 * d0 + np.asarray(x) ** 2 + np.asarray(y) ** 2
    ) ** (-(a + 3) / 2)


def element_centers(surface: SurfaceGeometry) -> np.ndarray:
    """Row-major element centers; the cell rectangles tile the surface region."""
    xs = (np.arange(surface.n_x) - (surface.n_x - 1) / 2.0) * surface.delta_x
    ys = (np.arange(surface.n_y) - (surface.n_y - 1) / 2.0) * surface.delta_y
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    return np.stack([gx.ravel(), gy.ravel()], axis=1)


def feed_distance(center, feed: FeedGeometry) -> float:
    """Distance from the feed to a surface point given by its (x, y) center."""
    x, y = center
    return math.sqrt(x * x + y * y + feed.d0 * feed.d0)


def _cell_power_integrals(
    centers: np.ndarray,
    dx: float,
    dy: float,
    feed: FeedGeometry,
    powers: tuple[float, ...],
    order: int,
) -> np.ndarray:
    """Integrals of omega**p over each rectangle dx x dy around the centers.

    Returns an array of shape (len(powers), N).
    """
    t, w = leggauss(order)
    x = centers[:, 0, None, None] + (dx / 2.0) * t[:, None]
    y = centers[:, 1, None, None] + (dy / 2.0) * t[None, :]
    base = omega(x, y, feed)
    area = (dx / 2.0) * (dy / 2.0)
    out = np.empty((len(powers), centers.shape[0]))
    for i, p in enumerate(powers):
        vals = base if p == 1.0 else base**p
        out[i] = area * np.einsum("i,j,nij->n", w, w, vals)
    return out


def element_energy(center, surface: SurfaceGeometry, feed: FeedGeometry) -> float:
    """Captured energy fraction of one element rectangle centered at `center`."""
    c = np.asarray(center, dtype=float).reshape(1, 2)
    coarse = _cell_power_integrals(c, surface.delta_x, surface.delta_y, feed, (1.0,), GL_ORDER)
    fine = _cell_power_integrals(c, surface.delta_x, surface.delta_y, feed, (1.0,), GL_CHECK_ORDER)
    _check_refinement(coarse, fine)
    val = float(coarse[0, 0])
    if not 0.0 < val < 1.0:
        raise QuadratureNotConverged(f"element energy {val} outside (0, 1)")
    return val


def _check_refinement(coarse: np.ndarray, fine: np.ndarray) -> None:
    scale = np.maximum(np.abs(fine), np.finfo(float).tiny)
    err = np.max(np.abs(coarse - fine) / scale)
    if err > GL_RTOL:
        raise QuadratureNotConverged(
            f"refinement check failed: relative deviation {err:.3e} > {GL_RTOL:.1e}"
        )


@lru_cache(maxsize=64)
def _grid_cached(surface: SurfaceGeometry, feed: FeedGeometry) -> ElementGrid:
    centers = element_centers(surface)
    coarse = _cell_power_integrals(centers, surface.delta_x, surface.delta_y, feed, (1.0,), GL_ORDER)
    fine = _cell_power_integrals(
        centers, surface.delta_x, surface.delta_y, feed, (1.0,), GL_CHECK_ORDER
    )
    _check_refinement(coarse, fine)
    energies = coarse[0]
    if np.any(energies <= 0) or np.any(energies >= 1):
        raise QuadratureNotConverged("element energies outside (0, 1)")
    if energies.sum() > 1.0 + 1e-12:
        raise QuadratureNotConverged("total captured energy exceeds 1")
    centers.setflags(write=False)
    energies.setflags(write=False)
    return ElementGrid(centers=centers, energies=energies)


def build_grid(surface: SurfaceGeometry, feed: FeedGeometry) -> ElementGrid:
    """Element centers plus quadrature-evaluated energies, cached per geometry."""
    return _grid_cached(surface, feed)


def feed_channel(center, surface: SurfaceGeometry, feed: FeedGeometry) -> complex:
    """Complex feed-to-element channel: amplitude sqrt(gamma), phase -2 pi d / lambda."""
    gamma = element_energy(center, surface, feed)
    d = feed_distance(center, feed)
    return math.sqrt(gamma) * np.exp(-2j * math.pi * d / surface.wavelength)


def aperture_sums_discrete(grid: ElementGrid) -> ApertureSums:
    """a_k = sum_n gamma_n**(k/2) over the grid (pairwise-accumulated)."""
    g = grid.energies
    sq = np.sqrt(g)
    return ApertureSums(
        a1=float(np.sum(sq)),
        a2=float(np.sum(g)),
        a3=float(np.sum(g * sq)),
        a4=float(np.sum(g * g)),
        form=FORM_DISCRETE,
    )


def _integral_norms(surface: SurfaceGeometry, convention: str) -> tuple[float, ...]:
    if convention == CONVENTION_PAPER:
        base = surface.cell_area / surface.wavelength**2
    elif convention == CONVENTION_DISCRETE:
        base = surface.cell_area
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return tuple(base ** ((k - 2) / 2.0) for k in (1, 2, 3, 4))


def aperture_sums_integral(
    surface: SurfaceGeometry,
    feed: FeedGeometry,
    convention: str = CONVENTION_PAPER,
) -> ApertureSums:
    """Normalized integrals of omega**(k/2) over the finite surface region.

    The region is tiled by the element rectangles, so the k=2 integral equals
    the sum of the element energies exactly (no normalization factor).
    """
    norms = _integral_norms(surface, convention)
    centers = element_centers(surface)
    powers = (0.5, 1.0, 1.5, 2.0)
    coarse = _cell_power_integrals(centers, surface.delta_x, surface.delta_y, feed, powers, GL_ORDER)
    fine = _cell_power_integrals(
        centers, surface.delta_x, surface.delta_y, feed, powers, GL_CHECK_ORDER
    )
    _check_refinement(coarse.sum(axis=1), fine.sum(axis=1))
    raw = coarse.sum(axis=1)
    return ApertureSums(
        a1=float(norms[0] * raw[0]),
        a2=float(norms[1] * raw[1]),
        a3=float(norms[2] * raw[2]),
        a4=float(norms[3] * raw[3]),
        form=FORM_INTEGRAL,
    )


def aperture_sums_infinite(
    surface: SurfaceGeometry,
    feed: FeedGeometry,
    convention: str = CONVENTION_PAPER,
    a1_variant: str = A1_AS_PRINTED,
) -> ApertureSums:
    """Closed forms of the a_k when the surface covers the whole plane.

    ``a1_variant`` selects between the published a_1 closed form, which carries
    (alpha - 1) as a multiplying factor, and the re-derived one with
    (alpha - 1) in the denominator.  The two coincide at alpha = 2.
    """
    a, d0 = feed.alpha, feed.d0
    if a <= 1:
        raise InvalidAlpha(f"alpha must exceed 1, got {a}")
    if convention == CONVENTION_PAPER:
        base = surface.cell_area / surface.wavelength**2
    elif convention == CONVENTION_DISCRETE:
        base = surface.cell_area
    else:
        raise ValueError(f"unknown convention {convention!r}")

    if a1_variant == A1_AS_PRINTED:
        a1_factor = a - 1
    elif a1_variant == A1_RE_DERIVED:
        a1_factor = 1.0 / (a - 1)
    else:
        raise ValueError(f"unknown a1 variant {a1_variant!r}")

    a1 = base**-0.5 * math.sqrt(8 * math.pi) * math.sqrt(a + 1) * a1_factor * d0
    a2 = 1.0
    a3 = base**0.5 * math.sqrt(2 / (9 * math.pi)) * (a + 1) ** 1.5 / (a + 5 / 3) / d0
    a4 = base * (a + 1) ** 2 / (4 * math.pi * (a + 2)) / d0**2
    return ApertureSums(a1=a1, a2=a2, a3=a3, a4=a4, form=FORM_INFINITE)


def captured_energy_within_radius(feed: FeedGeometry, radius: float) -> float:
    """Closed-form captured energy inside the disk of the given radius."""
    a, d0 = feed.alpha, feed.d0
    return 1.0 - (1.0 + (radius / d0) ** 2) ** (-(a + 1) / 2.0)


def _radial_tail(feed: FeedGeometry, radius: float, k: int) -> float:
    """Exact integral of omega**(k/2) outside the disk of the given radius."""
    a, d0 = feed.alpha, feed.d0
    c = ((a + 1) * d0 ** (a + 1) / (2 * math.pi)) ** (k / 2.0)
    p = k * (a + 3) / 4.0
    if p <= 1:
        raise InvalidAlpha(f"omega**{k}/2 is not plane-integrable for alpha={a}")
    return math.pi * c * (d0 * d0 + radius * radius) ** (1 - p) / (p - 1)


def _corner_band(feed: FeedGeometry, half_side: float, k: int, order: int = 64) -> float:
    """Integral of omega**(k/2) over the square minus its inscribed disk.

    Radial direction is integrated in closed form; the angular direction uses
    Gauss-Legendre on [0, pi/4] with eightfold symmetry.
    """
    a, d0 = feed.alpha, feed.d0
    c = ((a + 1) * d0 ** (a + 1) / (2 * math.pi)) ** (k / 2.0)
    p = k * (a + 3) / 4.0
    t, w = leggauss(order)
    phi = (t + 1) * (math.pi / 8.0)
    r_out_sq = d0 * d0 + (half_side / np.cos(phi)) ** 2
    r_in_sq = d0 * d0 + half_side * half_side
    inner = (c / (2 * (p - 1))) * (r_in_sq ** (1 - p) - r_out_sq ** (1 - p))
    return 8.0 * (math.pi / 8.0) * float(np.sum(w * inner))


def omega_power_plane_integral(
    feed: FeedGeometry,
    k: int,
    half_side: float | None = None,
    cell: float | None = None,
) -> float:
    """Quadrature value of the plane integral of omega**(k/2), no normalization.

    Evaluates the square of the given half-side by tensor Gauss-Legendre cells
    and adds the exact exterior contribution (radial tail beyond the inscribed
    disk minus the corner band double-counted by the square).
    """
    if half_side is None:
        half_side = 20.0 * feed.d0
    if cell is None:
        cell = feed.d0 / 8.0
    n = max(2, math.ceil(2 * half_side / cell))
    if n % 2:
        n += 1  # keep the tiling symmetric about the origin
    dx = 2 * half_side / n
    xs = (np.arange(n) - (n - 1) / 2.0) * dx
    gx, gy = np.meshgrid(xs, xs, indexing="ij")
    centers = np.stack([gx.ravel(), gy.ravel()], axis=1)
    square = 0.0
    # Chunked to bound the (cells x order x order) working set.
    for lo in range(0, centers.shape[0], 16384):
        block = centers[lo : lo + 16384]
        square += float(
            _cell_power_integrals(block, dx, dx, feed, (k / 2.0,), GL_ORDER)[0].sum()
        )
    tail = _radial_tail(feed, half_side, k) - _corner_band(feed, half_side, k)
    return square + tail
