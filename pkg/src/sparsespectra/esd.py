"""Empirical spectral distributions and discrepancy metrics.

An ESD holds the eigenvalues of (1/sqrt(n)) * A with multiplicity and is
queried as a bivariate CDF:  F(z) = fraction of points with
Re(p) <= Re(z) and Im(p) <= Im(z).  The uniform law on the unit disk is
the reference measure; distances to it (and between ESDs) are measured
by a grid Kolmogorov statistic, a radial KS statistic against F(r)=r^2,
second moments, and integrals of a fixed family of smooth radial bumps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ContractError, ConvergenceError, DomainError

#: Default half-width of the square evaluation lattice.
GRID_HALFWIDTH = 1.5

#: Lattice resolution per axis for the Kolmogorov grid.
GRID_POINTS = 64


@dataclass(frozen=True)
class ESD:
    """Eigenvalues of (1/sqrt(n)) * A as a discrete measure on C."""

    points: np.ndarray
    n: int

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size != self.n or self.n < 1:
            raise DomainError("ESD needs a 1-d point array of length n >= 1")

    @staticmethod
    def from_points(points) -> "ESD":
        pts = np.asarray(points, dtype=np.complex128)
        return ESD(pts, pts.size)


def esd_from_matrix(A) -> ESD:
    """ESD of (1/sqrt(n)) * A: solve for eigenvalues, then scale once."""
    res = linalg.eigenvalues(A)
    if not res.converged:
        raise ConvergenceError("eigensolver did not converge while building ESD")
    n = res.eigenvalues.size
    return ESD(res.eigenvalues / math.sqrt(n), n)


def esd_cdf(e: ESD, z: complex) -> float:
    """Fraction of points in the lower-left quadrant at z."""
    p = e.points
    return float(
        np.count_nonzero((p.real <= z.real) & (p.imag <= z.imag)) / e.n
    )


def _disk_primitive(x: float) -> float:
    """Antiderivative of sqrt(1 - x^2) on [-1, 1]."""
    x = min(1.0, max(-1.0, x))
    return 0.5 * (x * math.sqrt(max(0.0, 1.0 - x * x)) + math.asin(x))


def disk_cdf(z: complex) -> float:
    """CDF of the uniform unit-disk law at z: area({x<=Re z, y<=Im z} ∩ D)/pi.

    Exact geometric decomposition into circular segments; absolute
    accuracy is at floating-point level (far below 1e-9).
    """
    a = float(z.real)
    b = float(z.imag)
    if a <= -1.0 or b <= -1.0:
        return 0.0
    a = min(a, 1.0)
    b = min(b, 1.0)
    xb = math.sqrt(max(0.0, 1.0 - b * b))
    area = 0.0
    if b >= 0.0:
        x2 = min(a, -xb)
        if x2 > -1.0:
            area += 2.0 * (_disk_primitive(x2) - _disk_primitive(-1.0))
        x1 = max(-xb, -1.0)
        x2 = min(a, xb)
        if x2 > x1:
            area += b * (x2 - x1) + (_disk_primitive(x2) - _disk_primitive(x1))
        if a > xb:
            area += 2.0 * (_disk_primitive(a) - _disk_primitive(xb))
    else:
        x1 = -xb
        x2 = min(a, xb)
        if x2 > x1:
            area += b * (x2 - x1) + (_disk_primitive(x2) - _disk_primitive(x1))
    return min(1.0, max(0.0, area / math.pi))


class UnitDiskReference:
    """The uniform distribution on the unit disk, as a CDF provider."""

    def cdf(self, z: complex) -> float:
        return disk_cdf(z)

    def cdf_grid(self, grid: np.ndarray) -> np.ndarray:
        return np.array([disk_cdf(z) for z in grid])


UNIT_DISK = UnitDiskReference()


def _ecdf_grid(points: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Bivariate empirical CDF of `points` at every grid point."""
    n = points.size
    out = np.empty(grid.size)
    pr = points.real
    pi = points.imag
    chunk = max(1, (1 << 21) // max(n, 1))
    for s in range(0, grid.size, chunk):
        g = grid[s : s + chunk]
        hits = (pr[None, :] <= g.real[:, None]) & (pi[None, :] <= g.imag[:, None])
        out[s : s + chunk] = np.count_nonzero(hits, axis=1) / n
    return out


def _lattice(halfwidth: float, points_per_axis: int) -> np.ndarray:
    axis = np.linspace(-halfwidth, halfwidth, points_per_axis)
    re, im = np.meshgrid(axis, axis)
    return (re + 1j * im).ravel()


def evaluation_grid(
    esds: tuple[ESD, ...],
    halfwidth: float = GRID_HALFWIDTH,
    points_per_axis: int = GRID_POINTS,
) -> np.ndarray:
    """All atoms of the given ESDs plus a square lattice."""
    parts = [e.points for e in esds]
    parts.append(_lattice(halfwidth, points_per_axis))
    return np.concatenate(parts)


def cdf_gap_on_grid(e1: ESD, e2, grid: np.ndarray) -> float:
    """sup over `grid` of |F1 - F2| (e2 may be an ESD or the disk)."""
    f1 = _ecdf_grid(e1.points, grid)
    if isinstance(e2, ESD):
        f2 = _ecdf_grid(e2.points, grid)
    else:
        f2 = e2.cdf_grid(grid)
    return float(np.max(np.abs(f1 - f2)))


def kolmogorov_discrepancy(
    e1: ESD,
    e2,
    halfwidth: float = GRID_HALFWIDTH,
    points_per_axis: int = GRID_POINTS,
) -> float:
    """Grid Kolmogorov statistic between two ESDs (or ESD vs disk).

    The grid is every atom of both ESDs plus a points_per_axis^2 lattice
    on [-halfwidth, halfwidth]^2.  Atoms beyond the lattice still move
    the CDF values at grid points.
    """
    esds = (e1, e2) if isinstance(e2, ESD) else (e1,)
    grid = evaluation_grid(esds, halfwidth, points_per_axis)
    return cdf_gap_on_grid(e1, e2, grid)


def radial_ks(e: ESD) -> float:
    """sup_r |ECDF(|points|) - min(r^2, 1)| with both one-sided limits."""
    radii = np.sort(np.abs(e.points))
    ref = np.minimum(radii * radii, 1.0)
    n = e.n
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    return float(np.max(np.maximum(np.abs(upper - ref), np.abs(lower - ref))))


def second_moment(e: ESD) -> float:
    """(1/n) * sum |point_i|^2; the unit-disk reference value is 1/2."""
    return float(np.mean(np.abs(e.points) ** 2))


@dataclass(frozen=True)
class RadialBump:
    """Smooth compactly supported bump around `center`.

    Profile exp(s * (1 - 1/(1 - t^2))) for t = |z - center|/radius < 1,
    zero outside; s is the smoothness exponent (s=1 is the canonical
    bump, value 1 at the center).
    """

    center: complex
    radius: float
    smoothness: float = 1.0

    def __call__(self, zs) -> np.ndarray:
        zs = np.asarray(zs, dtype=np.complex128)
        t2 = (np.abs(zs - self.center) / self.radius) ** 2
        out = np.zeros(t2.shape)
        inside = t2 < 1.0
        arg = self.smoothness * (1.0 - 1.0 / (1.0 - t2[inside]))
        out[inside] = np.exp(arg)
        return out


@dataclass(frozen=True)
class IndicatorRect:
    """Half-open rectangle (a, b] x (c, d]; CDF queries only."""

    a: float
    b: float
    c: float
    d: float


def integrate_test_function(e: ESD, f) -> float:
    """(1/n) * sum f(point_i) for a smooth test function."""
    if isinstance(f, IndicatorRect):
        raise ContractError(
            "IndicatorRect belongs to the CDF path, not the smooth family"
        )
    return float(np.mean(f(e.points)))


def canonical_bump_family(radius: float = 0.8) -> tuple[RadialBump, ...]:
    """Nine bumps centered on the 3x3 grid over [-1, 1]^2."""
    centers = [complex(x, y) for y in (-1.0, 0.0, 1.0) for x in (-1.0, 0.0, 1.0)]
    return tuple(RadialBump(c, radius) for c in centers)


def test_function_gaps(e1: ESD, e2: ESD, family=None) -> np.ndarray:
    """|integral gaps| over the canonical bump family."""
    bumps = canonical_bump_family() if family is None else family
    return np.array(
        [
            abs(integrate_test_function(e1, f) - integrate_test_function(e2, f))
            for f in bumps
        ]
    )


def rect_mass(e: ESD, rect: IndicatorRect) -> float:
    """ESD mass of the half-open rectangle, by CDF inclusion-exclusion."""
    f = lambda x, y: esd_cdf(e, complex(x, y))
    return f(rect.b, rect.d) - f(rect.a, rect.d) - f(rect.b, rect.c) + f(rect.a, rect.c)


def disk_rect_mass(rect: IndicatorRect) -> float:
    """Unit-disk mass of the half-open rectangle."""
    f = lambda x, y: disk_cdf(complex(x, y))
    return f(rect.b, rect.d) - f(rect.a, rect.d) - f(rect.b, rect.c) + f(rect.a, rect.c)


def ks_two_sample_real(xs, ys) -> float:
    """Two-sample Kolmogorov-Smirnov statistic on the real line."""
    xs = np.sort(np.asarray(xs, dtype=np.float64))
    ys = np.sort(np.asarray(ys, dtype=np.float64))
    both = np.concatenate([xs, ys])
    f1 = np.searchsorted(xs, both, side="right") / xs.size
    f2 = np.searchsorted(ys, both, side="right") / ys.size
    return float(np.max(np.abs(f1 - f2)))
