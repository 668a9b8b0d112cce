"""Gromov-Hausdorff upper bounds, and the deep-well obstruction to them.

A tube in the manifold and its Euclidean counterpart embed into a common
ambient space once the well below a cut radius is discarded; the GH distance
is then bounded by the two embedding defects, the ambient Hausdorff gap
between the graphs, and the intrinsic size of whatever the cut removed.  For
deep wells the removed part has arclength depth at least the well depth, so
the bound never drops below it: flat-distance certificates can shrink while
these bounds stay pinned at the depth, which is the point of the contrast.
The segment-limit radii rho, rho_prime play the same game against the space
with an interval glued on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .embedding import embedding_constant_bound
from .errors import DomainError, RangeError
from .geometry import ManifoldModel, TubularWindow

__all__ = ["GHBound", "gh_bound", "best_gh_bound",
           "SegmentBound", "segment_limit_bound"]


@dataclass(frozen=True)
class GHBound:
    """Additive Gromov-Hausdorff upper bound at a particular cut radius."""

    r_eps: float
    S_M1: float
    S_M2: float
    hausdorff_ambient: float
    well_excess_1: float
    well_excess_2: float
    total: float
    rho: float
    rho_prime: float


def gh_bound(model: ManifoldModel, window: TubularWindow,
             r_eps: float) -> GHBound:
    """GH upper bound from cutting the tube at radius r_eps."""
    r_eps = float(r_eps)
    if not (window.r_minus <= r_eps < window.r0):
        raise RangeError(
            f"cut radius {r_eps} outside [r_minus, r0) = "
            f"[{window.r_minus}, {window.r0})")
    consts = embedding_constant_bound(model, r_eps, window.r_plus)
    s_m1 = consts.S_M
    s_m2 = 0.0
    delta_f = consts.delta_F
    excess_1 = float(model.s(r_eps)) - float(model.s(window.r_minus))
    excess_2 = r_eps - max(window.r0 - window.D, 0.0)
    total = s_m1 + s_m2 + delta_f + excess_1 + excess_2
    rho = max(delta_f + s_m1, math.pi * r_eps)
    rho_prime = max(r_eps, delta_f + s_m1)
    return GHBound(r_eps=r_eps, S_M1=s_m1, S_M2=s_m2,
                   hausdorff_ambient=delta_f,
                   well_excess_1=excess_1, well_excess_2=excess_2,
                   total=total, rho=rho, rho_prime=rho_prime)


def best_gh_bound(model: ManifoldModel, window: TubularWindow,
                  n: int = 48) -> GHBound:
    """Smallest gh_bound over a geometric grid of candidate cut radii."""
    lo = max(window.r_minus, 1e-9 * window.r0)
    if model.r_min > 0:
        lo = max(lo, model.r_min * (1.0 + 1e-12))
    hi = window.r0 * (1.0 - 1e-9)
    cands = [window.r_minus]
    if hi > lo:
        cands.extend(float(x) for x in np.geomspace(lo, hi, n))
    best: Optional[GHBound] = None
    for r_eps in cands:
        if not (window.r_minus <= r_eps < window.r0):
            continue
        cur = gh_bound(model, window, r_eps)
        if best is None or cur.total < best.total:
            best = cur
    assert best is not None
    return best


class SegmentBound(NamedTuple):
    rho: float
    rho_prime: float


def segment_limit_bound(model: ManifoldModel, window: TubularWindow,
                        L0: float,
                        r_eps: Optional[float] = None) -> SegmentBound:
    """GH radii against Euclidean space with a segment of length L0 glued on.

    rho = max(F(r_plus) - F(r_eps) + S_M, pi r_eps) and
    rho_prime = max(r_eps, F(r_plus) - F(r_eps) + S_M).  The default cut is
    the geometric mean of the wall scale 2 m_ADM and r0^(m-2), taken in
    r^(m-2), which sits above any budget-small well and below the window.
    """
    if not (L0 > 0 and math.isfinite(L0)):
        raise DomainError(f"segment length must be positive, got {L0}")
    m = model.dimension
    if r_eps is None:
        xi_eps = math.sqrt(2.0 * model.adm_mass * window.r0 ** (m - 2))
        r_eps = xi_eps ** (1.0 / (m - 2))
        r_eps = min(max(r_eps, model.r_min), window.r0 * (1.0 - 1e-9))
    r_eps = float(r_eps)
    if not (model.r_min <= r_eps < window.r0):
        raise RangeError(
            f"cut radius {r_eps} outside [r_min, r0)")
    consts = embedding_constant_bound(model, r_eps, window.r_plus)
    reach = consts.delta_F + consts.S_M
    return SegmentBound(rho=max(reach, math.pi * r_eps),
                        rho_prime=max(r_eps, reach))
