"""Numerical tolerance policy.

Every comparison threshold in the package is derived from one record so that
validation, geometry and the CLI stay consistent.  Setting the environment
variable ``MASSFLAT_TOL`` to a positive float replaces the base identity
tolerance (default 1e-9); the monotonicity slack and solver tolerances scale
by the same factor, while the quadrature target is kept at least two orders
tighter than the identity tolerance.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import DomainError

_BASE_IDENTITY = 1e-9


@dataclass(frozen=True)
class Tolerances:
    #: relative tolerance for C1 joint checks and algebraic identities
    identity_rel: float = _BASE_IDENTITY
    #: allowed undershoot of m_H' below zero at sample points
    monotone_slack: float = 1e-12
    #: relative target for adaptive quadrature panels
    quad_rel: float = 1e-12
    #: relative stopping tolerance for window and inverse-arclength solves
    solve_rel: float = 1e-10

    def scaled(self, identity_rel: float) -> "Tolerances":
        """Return a policy with the identity tolerance replaced.

        Dependent thresholds scale proportionally; the quadrature target is
        clamped to stay at least 100x tighter than the identity tolerance.
        """
        if identity_rel <= 0:
            raise DomainError("tolerance must be positive")
        factor = identity_rel / _BASE_IDENTITY
        return Tolerances(
            identity_rel=identity_rel,
            monotone_slack=self.monotone_slack * factor,
            quad_rel=min(self.quad_rel * factor, identity_rel / 100.0),
            solve_rel=self.solve_rel * factor,
        )


def default_tolerances() -> Tolerances:
    """Tolerance policy honoring the MASSFLAT_TOL environment variable."""
    base = Tolerances()
    raw = os.environ.get("MASSFLAT_TOL")
    if raw is None or raw.strip() == "":
        return base
    try:
        value = float(raw)
    except ValueError as exc:
        raise DomainError(f"MASSFLAT_TOL is not a float: {raw!r}") from exc
    return base.scaled(value)
