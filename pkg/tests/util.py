"""Shared helpers for the test suite: random admissible profiles."""

from __future__ import annotations

import numpy as np

from massflat.profiles import (
    ConstantPiece,
    CubicSplinePiece,
    HawkingProfile,
    monotone_slopes,
)


def random_spline_profile(rng: np.random.Generator,
                          dimension: int) -> HawkingProfile:
    """A random admissible profile: constant head, monotone spline, flat tail.

    Spline values at each knot are clamped below 0.9 times the wall height
    of the previous knot, so the (monotone) spline stays strictly below the
    wall across each interval.  Roughly half the draws carry a minimal
    boundary sphere, the rest start at r = 0 with zero mass.
    """
    m = int(dimension)
    r1 = 0.3 + 0.4 * rng.random()
    n_knot = int(rng.integers(4, 9))
    gaps = 0.2 + rng.random(n_knot - 1)
    knots = r1 + np.concatenate([[0.0], np.cumsum(gaps)])
    wall = 0.5 * knots ** (m - 2)

    if rng.random() < 0.5:
        r_min = (0.2 + 0.4 * rng.random()) * r1
        v0 = 0.5 * r_min ** (m - 2)
    else:
        r_min = 0.0
        v0 = 0.0

    values = np.empty(n_knot)
    values[0] = v0
    v = v0
    for k in range(1, n_knot):
        cap = 0.9 * wall[k - 1]
        v = min(v + 0.8 * rng.random() * max(cap - v, 0.0), cap)
        values[k] = v

    slopes = monotone_slopes(knots, values)
    # the constant head and tail meet the spline with slope zero, which is
    # always inside the Fritsch-Carlson monotone region
    slopes[0] = 0.0
    slopes[-1] = 0.0

    pieces = [
        ConstantPiece(r_min, float(knots[0]), float(values[0])),
        CubicSplinePiece(knots=[float(x) for x in knots],
                         values=[float(x) for x in values],
                         slopes=[float(x) for x in slopes]),
        ConstantPiece(float(knots[-1]), np.inf, float(values[-1])),
    ]
    return HawkingProfile(dimension=m, r_min=float(r_min),
                          pieces=tuple(pieces))
