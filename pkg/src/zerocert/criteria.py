"""Boundary-condition checks and the existence-certificate orchestrator.

The pipeline rescales any disk to the unit disk, checks that the map misses
zero on the sampled boundary, and then tries the obstruction routes in
order: sign change (n=1), winding (n=m=2), never-points-opposite
(Poincare-Bohl, any n=m).  A nonzero obstruction or a passing boundary
condition certifies that every continuous extension of the boundary data
has a zero in the disk; a vanishing winding instead yields an explicit
zero-free extension witness.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .degree import sign_obstruction, winding_number
from .errors import InvalidInput, Unsupported, VanishingOnBoundary
from .geometry import Region, sample_sphere
from .homotopy import SampledMap, null_homotopy, radial_extension
from .mapspec import MapSpec, as_evaluator

ZERO_TOL_SCALE = 1e-12


@dataclass(frozen=True, eq=False)
class CheckResult:
    name: str
    passed: bool
    margin: float
    witness: Optional[np.ndarray]
    rigor: str                      # "rigorous" | "heuristic"
    threshold: float = 0.0


@dataclass(eq=False)
class Certificate:
    map_digest: str
    region: Region
    verdict: str                    # ZeroGuaranteed | NoConclusion | ZeroOnBoundary
    route: Optional[str]            # sign_change | winding | poincare_bohl |
                                    # coercive_reduction
    obstruction: Optional[int]
    min_boundary_norm: float
    rigor: str
    evidence: List[CheckResult] = field(default_factory=list)
    extension_witness: Optional[Callable] = None
    reason: Optional[str] = None


def _threshold(L, h):
    return 0.0 if L is None else L * h / 2.0


def boundary_nonvanishing(map_like, region: Region, level: int = 6,
                          L: Optional[float] = None) -> CheckResult:
    """Minimum image norm over boundary samples; the standing hypothesis."""
    if region.kind != "disk":
        raise InvalidInput("boundary checks need a disk region")
    ev = as_evaluator(map_like)
    sampling = sample_sphere(region, level)
    ims = np.asarray(ev(sampling.points), dtype=float)
    norms = np.linalg.norm(ims, axis=1)
    idx = int(np.argmin(norms))
    threshold = _threshold(L, sampling.h)
    margin = float(norms[idx])
    return CheckResult(name="boundary_nonvanishing",
                       passed=margin > threshold, margin=margin,
                       witness=sampling.points[idx],
                       rigor="heuristic" if L is None else "rigorous",
                       threshold=threshold)


def poincare_bohl(map_like, region: Region, level: int = 6,
                  L: Optional[float] = None) -> CheckResult:
    """Never-points-opposite check: F(x) is not a negative multiple of x - x0.

    The margin is min over samples of || F(x)/||F(x)|| + (x - x0)/r ||,
    which vanishes exactly at an opposite-pointing sample.
    """
    if region.kind != "disk":
        raise InvalidInput("boundary checks need a disk region")
    ev = as_evaluator(map_like)
    sampling = sample_sphere(region, level)
    ims = np.asarray(ev(sampling.points), dtype=float)
    if ims.shape[1] != region.dim:
        raise InvalidInput("Poincare-Bohl needs codomain dimension m = n")
    norms = np.linalg.norm(ims, axis=1)
    if np.any(norms <= 0.0):
        idx = int(np.argmin(norms))
        raise VanishingOnBoundary(idx, point=sampling.points[idx])
    unit_f = ims / norms[:, None]
    unit_x = (sampling.points - region.center) / region.radius
    margins = np.linalg.norm(unit_f + unit_x, axis=1)
    idx = int(np.argmin(margins))
    threshold = _threshold(L, sampling.h)
    margin = float(margins[idx])
    return CheckResult(name="poincare_bohl", passed=margin > threshold,
                       margin=margin, witness=sampling.points[idx],
                       rigor="heuristic" if L is None else "rigorous",
                       threshold=threshold)


def coercivity_radius(map_like, n: int, radii, level: int = 6):
    """First listed radius whose origin-centered sphere has <F(x), x> >= 0
    and a nonvanishing boundary, reducing existence to Poincare-Bohl.

    Returns (R, CheckResult of the Poincare-Bohl check on that sphere), or
    None when no listed radius qualifies.
    """
    ev = as_evaluator(map_like)
    for R in radii:
        region = Region.disk(np.zeros(n), float(R))
        sampling = sample_sphere(region, level)
        ims = np.asarray(ev(sampling.points), dtype=float)
        if ims.shape[1] != n:
            raise InvalidInput("coercivity reduction needs m = n")
        norms = np.linalg.norm(ims, axis=1)
        inner = np.sum(ims * sampling.points, axis=1)
        if float(np.min(norms)) > 0.0 and float(np.min(inner)) >= 0.0:
            return float(R), poincare_bohl(map_like, region, level=level)
    return None


def certify_existence(map_like, region: Region, level: int = 6,
                      lipschitz: Optional[float] = None,
                      refine_budget: int = 4096, t_steps: int = 65,
                      digest: str = "") -> Certificate:
    """Run the full existence pipeline on a disk region.

    Internally everything is computed on the unit disk through the rescaling
    y -> r*y + x0, which preserves the verdict and the obstruction.
    """
    if region.kind != "disk":
        raise InvalidInput("certify_existence needs a disk region")
    n = region.dim
    ev = as_evaluator(map_like)
    if isinstance(map_like, MapSpec):
        if map_like.n != n:
            raise InvalidInput(
                f"map domain dimension {map_like.n} != region dimension {n}")
        m = map_like.m
        digest = map_like.digest
    else:
        m = np.asarray(ev(region.center[None, :])).shape[1]
    if n > m:
        raise Unsupported(n, m)

    x0, r = region.center, region.radius
    unit_region = Region.disk(np.zeros(n), 1.0)
    rescaled = lambda pts: np.asarray(ev(r * np.asarray(pts) + x0), dtype=float)
    L = None if lipschitz is None else lipschitz * r

    sampling = sample_sphere(unit_region, level)
    ims = rescaled(sampling.points)
    norms = np.linalg.norm(ims, axis=1)
    idx = int(np.argmin(norms))
    min_norm = float(norms[idx])
    zero_tol = ZERO_TOL_SCALE * (1.0 + float(np.max(norms)))
    witness_orig = r * sampling.points[idx] + x0
    nonvanish = CheckResult(name="boundary_nonvanishing",
                            passed=min_norm > _threshold(L, sampling.h),
                            margin=min_norm, witness=witness_orig,
                            rigor="heuristic" if L is None else "rigorous",
                            threshold=_threshold(L, sampling.h))

    if min_norm <= zero_tol:
        return Certificate(map_digest=digest, region=region,
                           verdict="ZeroOnBoundary", route=None,
                           obstruction=None, min_boundary_norm=min_norm,
                           rigor="heuristic", evidence=[nonvanish],
                           reason="boundary_zero")

    if n == 1 and m == 1:
        f = SampledMap(sampling=sampling, images=ims, m=1)
        s = sign_obstruction(f)
        if s != 0:
            return Certificate(map_digest=digest, region=region,
                               verdict="ZeroGuaranteed", route="sign_change",
                               obstruction=s, min_boundary_norm=min_norm,
                               rigor=nonvanish.rigor, evidence=[nonvanish])
        return Certificate(map_digest=digest, region=region,
                           verdict="NoConclusion", route=None, obstruction=0,
                           min_boundary_norm=min_norm, rigor=nonvanish.rigor,
                           evidence=[nonvanish], reason="same_component")

    if n == 2 and m == 2:
        f = SampledMap(sampling=sampling, images=ims, m=2, evaluator=rescaled)
        w = winding_number(f, refine_budget=refine_budget, L=L)
        w_check = CheckResult(name="winding", passed=w.value != 0,
                              margin=float(w.value), witness=None,
                              rigor=w.rigor)
        rigor = _combine(nonvanish.rigor, w.rigor)
        if w.value != 0:
            return Certificate(map_digest=digest, region=region,
                               verdict="ZeroGuaranteed", route="winding",
                               obstruction=w.value, min_boundary_norm=min_norm,
                               rigor=rigor, evidence=[nonvanish, w_check])
        trace = null_homotopy(f, t_steps=t_steps)
        phi_unit = radial_extension(trace)
        witness = lambda x: phi_unit((np.asarray(x, dtype=float) - x0) / r)
        return Certificate(map_digest=digest, region=region,
                           verdict="NoConclusion", route=None, obstruction=0,
                           min_boundary_norm=min_norm, rigor=rigor,
                           evidence=[nonvanish, w_check],
                           extension_witness=witness, reason="winding_zero")

    if n == m:
        pb = poincare_bohl(rescaled, unit_region, level=level, L=L)
        # report the witness in original coordinates
        pb = CheckResult(name=pb.name, passed=pb.passed, margin=pb.margin,
                         witness=r * pb.witness + x0, rigor=pb.rigor,
                         threshold=pb.threshold)
        rigor = _combine(nonvanish.rigor, pb.rigor)
        if pb.passed:
            return Certificate(map_digest=digest, region=region,
                               verdict="ZeroGuaranteed", route="poincare_bohl",
                               obstruction=None, min_boundary_norm=min_norm,
                               rigor=rigor, evidence=[nonvanish, pb])
        return Certificate(map_digest=digest, region=region,
                           verdict="NoConclusion", route=None,
                           obstruction=None, min_boundary_norm=min_norm,
                           rigor=rigor, evidence=[nonvanish, pb],
                           reason="poincare_bohl_failed")

    # n < m: a sphere of too-low dimension always contracts in the
    # punctured codomain, so the obstruction is silent
    return Certificate(map_digest=digest, region=region,
                       verdict="NoConclusion", route=None, obstruction=None,
                       min_boundary_norm=min_norm, rigor=nonvanish.rigor,
                       evidence=[nonvanish], reason="codomain_dim_excess")


def _combine(*rigors):
    return "rigorous" if all(r == "rigorous" for r in rigors) else "heuristic"
