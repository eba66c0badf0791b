"""Regions, boundary sampling of spheres, and the disk rescaling homeomorphism.

Boundary samplings are the finite stand-in for the sphere S^{n-1}: an ordered
point list together with its mesh norm h (maximum adjacent-sample distance),
which every downstream rigor bound is stated against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Optional

import numpy as np

from .errors import InvalidInput

# absolute part of the hybrid boundary-membership tolerance
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Region:
    """Closed disk D^n_r(x0) or axis-aligned box, the domain of a map."""

    kind: str                      # "disk" | "box"
    dim: int
    center: Optional[np.ndarray] = None
    radius: Optional[float] = None
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidInput(f"dimension must be >= 1, got {self.dim}")
        if self.kind == "disk":
            if self.center is None or self.radius is None:
                raise InvalidInput("disk region needs center and radius")
            if len(self.center) != self.dim:
                raise InvalidInput("center length does not match dim")
            if not self.radius > 0:
                raise InvalidInput(f"radius must be positive, got {self.radius}")
        elif self.kind == "box":
            if self.lower is None or self.upper is None:
                raise InvalidInput("box region needs lower and upper corners")
            if len(self.lower) != self.dim or len(self.upper) != self.dim:
                raise InvalidInput("corner length does not match dim")
            if not np.all(self.lower < self.upper):
                raise InvalidInput("box corners must satisfy lower < upper componentwise")
        else:
            raise InvalidInput(f"unknown region kind {self.kind!r}")

    @staticmethod
    def disk(center, radius) -> "Region":
        center = np.asarray(center, dtype=float)
        return Region(kind="disk", dim=len(center), center=center,
                      radius=float(radius))

    @staticmethod
    def box(lower, upper) -> "Region":
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        return Region(kind="box", dim=len(lower), lower=lower, upper=upper)

    @property
    def diameter(self) -> float:
        if self.kind == "disk":
            return 2.0 * self.radius
        return float(np.linalg.norm(self.upper - self.lower))

    def boundary_tolerance(self) -> float:
        scale = self.radius if self.kind == "disk" else 0.5 * self.diameter
        return BOUNDARY_TOL * max(1.0, scale)


@dataclass(frozen=True, eq=False)
class BoundarySampling:
    """Ordered samples on a region boundary with mesh norm h.

    For n = 2 disks the points are in counterclockwise angular order and the
    list is cyclic (``closed``).  The region is kept so refinement can place
    new points back on the exact boundary.
    """

    points: np.ndarray            # (k, n)
    h: float
    level: int
    closed: bool
    region: Region

    def __post_init__(self):
        if self.points.ndim != 2 or self.points.shape[1] != self.region.dim:
            raise InvalidInput("sampling points have wrong shape")
        if self.level < 0:
            raise InvalidInput("level must be >= 0")
        n = self.region.dim
        if self.region.kind == "disk":
            tol = self.region.boundary_tolerance()
            dev = np.abs(np.linalg.norm(self.points - self.region.center, axis=1)
                         - self.region.radius)
            if np.max(dev) > tol:
                raise InvalidInput(
                    f"sample off the boundary by {np.max(dev):.3e} (tol {tol:.3e})")
        if n <= 2:
            recomputed = mesh_norm(self.points, self.closed)
            if abs(recomputed - self.h) > 1e-9 * max(1.0, self.h):
                raise InvalidInput(
                    f"declared h={self.h} does not match recomputed {recomputed}")

    def __len__(self):
        return len(self.points)


def mesh_norm(points: np.ndarray, closed: bool) -> float:
    """Maximum Euclidean distance between adjacent samples."""
    if len(points) < 2:
        return 0.0
    diffs = np.diff(points, axis=0)
    h = float(np.max(np.linalg.norm(diffs, axis=1)))
    if closed:
        h = max(h, float(np.linalg.norm(points[-1] - points[0])))
    return h


def rescale_to_unit(x, region: Region) -> np.ndarray:
    """Map a point of D^n_r(x0) to the unit disk: (x - x0) / r."""
    if region.kind != "disk":
        raise InvalidInput("rescaling is defined for disk regions only")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != region.dim:
        raise InvalidInput(
            f"point dimension {x.shape[-1]} != region dimension {region.dim}")
    dist = np.linalg.norm(x - region.center, axis=-1)
    if np.any(dist > region.radius + region.boundary_tolerance()):
        raise InvalidInput("point lies outside the disk")
    return (x - region.center) / region.radius


def rescale_from_unit(y, region: Region) -> np.ndarray:
    """Inverse of :func:`rescale_to_unit`: r*y + x0."""
    if region.kind != "disk":
        raise InvalidInput("rescaling is defined for disk regions only")
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != region.dim:
        raise InvalidInput(
            f"point dimension {y.shape[-1]} != region dimension {region.dim}")
    return region.radius * y + region.center


def sample_sphere(region: Region, level: int) -> BoundarySampling:
    """Sample the boundary sphere of a disk region at a refinement depth.

    n=1 gives the two endpoints, n=2 gives 4*2^level equispaced angles with
    the exact chord mesh norm, n>=3 gives 100*4^level deterministic
    low-discrepancy points whose h is an empirical estimate (twice the max
    nearest-neighbor gap).
    """
    if region.kind != "disk":
        raise InvalidInput("sample_sphere needs a disk region")
    if level < 0:
        raise InvalidInput("level must be >= 0")
    n, x0, r = region.dim, region.center, region.radius
    if n == 1:
        pts = np.array([[x0[0] - r], [x0[0] + r]])
        return BoundarySampling(points=pts, h=2.0 * r, level=level,
                                closed=False, region=region)
    if n == 2:
        k = 4 * 2 ** level
        theta = 2.0 * math.pi * np.arange(k) / k
        pts = x0 + r * np.stack([np.cos(theta), np.sin(theta)], axis=1)
        h = 2.0 * r * math.sin(math.pi / k)
        return BoundarySampling(points=pts, h=h, level=level,
                                closed=True, region=region)
    count = 100 * 4 ** level
    if n == 3:
        unit = _fibonacci_sphere(count)
    else:
        unit = _kronecker_sphere(count, n)
    pts = x0 + r * unit
    h = 2.0 * _max_nearest_neighbor_gap(pts)
    return BoundarySampling(points=pts, h=h, level=level,
                            closed=False, region=region)


def refine(sampling: BoundarySampling) -> BoundarySampling:
    """Halve the mesh: midpoint insertion for n=2 circles, re-sampling otherwise."""
    region = sampling.region
    if region.dim == 2 and sampling.closed:
        pts = sampling.points
        nxt = np.roll(pts, -1, axis=0)
        chord_mid = 0.5 * (pts + nxt) - region.center
        mids = region.center + region.radius * (
            chord_mid / np.linalg.norm(chord_mid, axis=1, keepdims=True))
        merged = np.empty((2 * len(pts), 2))
        merged[0::2] = pts
        merged[1::2] = mids
        return BoundarySampling(points=merged, h=mesh_norm(merged, True),
                                level=sampling.level + 1, closed=True,
                                region=region)
    return sample_sphere(region, sampling.level + 1)


def circle_arc_midpoint(a, b, region: Region) -> np.ndarray:
    """Midpoint along the (minor) circle arc between two boundary points."""
    mid = 0.5 * (np.asarray(a) + np.asarray(b)) - region.center
    norm = np.linalg.norm(mid)
    if norm == 0.0:
        # antipodal pair: rotate a by 90 degrees as the canonical midpoint
        v = np.asarray(a) - region.center
        mid = np.array([-v[1], v[0]])
        norm = np.linalg.norm(mid)
    return region.center + region.radius * mid / norm


def _fibonacci_sphere(count: int) -> np.ndarray:
    i = np.arange(count)
    z = 1.0 - 2.0 * (i + 0.5) / count
    golden = math.pi * (3.0 - math.sqrt(5.0))
    phi = golden * i
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)


def _kronecker_sphere(count: int, n: int) -> np.ndarray:
    # additive low-discrepancy recurrence in [0,1)^n, pushed to the sphere
    # through the Gaussian inverse CDF and normalization
    gamma = _generalized_golden(n)
    alpha = gamma ** -np.arange(1, n + 1)
    i = np.arange(1, count + 1)[:, None]
    u = np.mod(0.5 + i * alpha[None, :], 1.0)
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    inv = NormalDist().inv_cdf
    g = np.array([[inv(v) for v in row] for row in u])
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _generalized_golden(d: int) -> float:
    # unique real root > 1 of x^(d+1) = x + 1
    x = 1.5
    for _ in range(64):
        x = (1.0 + x) ** (1.0 / (d + 1))
    return x


def _max_nearest_neighbor_gap(pts: np.ndarray, chunk: int = 512) -> float:
    worst = 0.0
    for start in range(0, len(pts), chunk):
        block = pts[start:start + chunk]
        d2 = np.sum((block[:, None, :] - pts[None, :, :]) ** 2, axis=2)
        for row, idx in enumerate(range(start, start + len(block))):
            d2[row, idx] = np.inf
        worst = max(worst, float(np.max(np.sqrt(np.min(d2, axis=1)))))
    return worst
