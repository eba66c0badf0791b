"""Homotopy-class obstructions of boundary restrictions.

The n=1 obstruction is a sign component check on the two-point sphere; the
n=m=2 obstruction is an adaptively refined winding number.  Both feed the
two-valued classification (contractible boundary map or not) that drives the
existence verdicts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BudgetExhausted, InvalidInput, Unsupported, VanishingOnBoundary
from .geometry import circle_arc_midpoint, mesh_norm
from .homotopy import SampledMap

MAX_STEP = math.pi / 2.0        # angle steps must stay below this for a
                                # trustworthy discrete angle sum
RESIDUAL_TOL = 0.05             # tolerated pre-rounding residual, in turns


@dataclass(frozen=True)
class WindingResult:
    value: int
    total_refinements: int
    rigor: str                   # "rigorous" | "heuristic"
    max_step_angle: float
    residual: float = 0.0        # |angle sum / 2 pi - value|


@dataclass(frozen=True)
class CatResult:
    cat: int                     # 1 or 2
    reason: str                  # winding_nonzero | sign_change |
                                 # codomain_dim_excess | winding_zero |
                                 # same_component


def _wrapped_steps(images: np.ndarray) -> np.ndarray:
    angles = np.arctan2(images[:, 1], images[:, 0])
    steps = np.diff(np.concatenate([angles, angles[:1]]))
    return (steps + math.pi) % (2.0 * math.pi) - math.pi


def winding_number(f: SampledMap, refine_budget: int = 4096,
                   L: Optional[float] = None) -> WindingResult:
    """Signed turn count of a closed planar boundary map around the origin.

    Arcs whose image angle step reaches pi/2 are split by re-querying the
    map at the circle midpoint until none remain or the budget runs out.
    """
    sampling = f.sampling
    if f.m != 2 or sampling.region.dim != 2 or not sampling.closed:
        raise InvalidInput("winding needs a closed planar sampling into R^2")
    pts = np.array(sampling.points, dtype=float)
    ims = np.array(f.images, dtype=float)
    _check_nonvanishing(ims, pts)
    region = sampling.region
    inserted = 0
    while True:
        steps = _wrapped_steps(ims)
        bad = np.nonzero(np.abs(steps) >= MAX_STEP)[0]
        if len(bad) == 0:
            break
        if f.evaluator is None or inserted >= refine_budget:
            raise BudgetExhausted(
                "winding refinement exhausted with coarse angle steps left",
                best=_result(ims, pts, inserted, L=None))
        bad = bad[:refine_budget - inserted]
        k = len(pts)
        mids = np.array([circle_arc_midpoint(pts[i], pts[(i + 1) % k], region)
                         for i in bad])
        mid_ims = np.asarray(f.evaluator(mids), dtype=float)
        _check_nonvanishing(mid_ims, mids)
        pts = np.insert(pts, bad + 1, mids, axis=0)
        ims = np.insert(ims, bad + 1, mid_ims, axis=0)
        inserted += len(bad)
    return _result(ims, pts, inserted, L)


def _check_nonvanishing(ims, pts):
    norms = np.linalg.norm(ims, axis=1)
    if np.any(norms <= 0.0):
        idx = int(np.argmin(norms))
        raise VanishingOnBoundary(idx, point=pts[idx], norm=float(norms[idx]))


def _result(ims, pts, inserted, L) -> WindingResult:
    steps = _wrapped_steps(ims)
    turns = float(np.sum(steps)) / (2.0 * math.pi)
    value = int(round(turns))
    residual = abs(turns - value)
    max_step = float(np.max(np.abs(steps)))
    rigor = "heuristic"
    if L is not None and max_step < MAX_STEP and residual < RESIDUAL_TOL:
        h = mesh_norm(pts, closed=True)
        if float(np.min(np.linalg.norm(ims, axis=1))) > L * h / 2.0:
            rigor = "rigorous"
    return WindingResult(value=value, total_refinements=inserted,
                         rigor=rigor, max_step_angle=max_step,
                         residual=residual)


def sign_obstruction(f: SampledMap) -> int:
    """Obstruction on the two-point sphere S^0: 0 if both values share a
    component of the punctured line, else the sign at the upper endpoint."""
    if f.m != 1 or len(f.images) != 2:
        raise InvalidInput("sign obstruction needs two scalar samples")
    lo, hi = float(f.images[0, 0]), float(f.images[1, 0])
    for idx, v in ((0, lo), (1, hi)):
        if v == 0.0:
            raise VanishingOnBoundary(idx, point=f.sampling.points[idx])
    if (lo > 0) == (hi > 0):
        return 0
    return 1 if hi > 0 else -1


def classify_cat(f: SampledMap, refine_budget: int = 4096,
                 L: Optional[float] = None) -> CatResult:
    """Two-valued contractibility classification of a boundary map.

    cat=2 means the restriction is not contractible in the punctured
    codomain, which is exactly the zero-existence obstruction; n < m always
    yields cat=1 because a sphere of too-low dimension contracts in the
    punctured target.
    """
    n = f.sampling.region.dim
    m = f.m
    if n < m:
        return CatResult(cat=1, reason="codomain_dim_excess")
    if n == 1 and m == 1:
        s = sign_obstruction(f)
        if s != 0:
            return CatResult(cat=2, reason="sign_change")
        return CatResult(cat=1, reason="same_component")
    if n == 2 and m == 2:
        w = winding_number(f, refine_budget=refine_budget, L=L)
        if w.value != 0:
            return CatResult(cat=2, reason="winding_nonzero")
        return CatResult(cat=1, reason="winding_zero")
    raise Unsupported(n, m)
