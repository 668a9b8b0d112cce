"""Reconstruction of the manifold determined by a Hawking-mass profile.

An admissible profile determines a rotationally symmetric manifold presented
as a graph over Euclidean space: the graph function F satisfies

    F'(r) = sqrt(2 m_H(r) / (r^(m-2) - 2 m_H(r))),    F(r_min) = 0,

and the radial arclength is s'(r) = sqrt(r^(m-2) / (r^(m-2) - 2 m_H(r))).
The model tabulates F and s over a knot set aligned with the profile pieces,
answers pointwise queries by integrating from the nearest knot, and inverts
s by a safeguarded Newton iteration.  When the profile starts on a minimal
boundary sphere the integrands carry a (r - r_min)^(-1/2) singularity which
is removed exactly by the substitution u = sqrt(r - r_min).

All integrals run on vectorized 16-point Gauss-Legendre panels with an
embedded 8-point error estimate; panels that miss the tolerance are bisected,
and scipy's adaptive quadrature is the escalation path of last resort.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .config import Tolerances, default_tolerances
from .errors import (DomainError, InvalidProfileError, QuadratureError,
                     RangeError, WindowOverflowError)
from .profiles import (CubicSplinePiece, HawkingProfile, PowerLawPiece,
                       unit_sphere_area, validate)

__all__ = [
    "ManifoldModel",
    "TubularWindow",
    "tubular_window",
    "euclidean_annulus_volume",
    "model_table",
    "write_model_csv",
    "CSV_COLUMNS",
]

_TINY = 1e-300
_GL16_X, _GL16_W = np.polynomial.legendre.leggauss(16)
_GL8_X, _GL8_W = np.polynomial.legendre.leggauss(8)
_MAX_DEPTH = 50


def _panel_integrals(f: Callable, a: np.ndarray, b: np.ndarray):
    """GL16 integrals over the cells [a_i, b_i] plus GL16-GL8 error gauges."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x16 = mid[:, None] + half[:, None] * _GL16_X[None, :]
    y16 = f(x16.reshape(-1)).reshape(x16.shape)
    i16 = (y16 @ _GL16_W) * half
    x8 = mid[:, None] + half[:, None] * _GL8_X[None, :]
    y8 = f(x8.reshape(-1)).reshape(x8.shape)
    i8 = (y8 @ _GL8_W) * half
    with np.errstate(invalid="ignore"):
        return i16, np.abs(i16 - i8)


def _quad_cell(f: Callable, a: float, b: float, rel: float, char: float) -> float:
    val, aerr = quad(lambda x: float(f(np.array([x]))[0]), a, b,
                     limit=200, epsabs=rel * char, epsrel=max(rel, 1e-13))
    if not math.isfinite(val) or aerr > 10.0 * max(rel * abs(val), rel * char):
        raise QuadratureError(
            f"quadrature failed to converge on [{a!r}, {b!r}] "
            f"(value {val!r}, error estimate {aerr!r})")
    return val


def _adaptive_cells(f: Callable, a_arr, b_arr, rel: float,
                    char: Optional[float] = None) -> np.ndarray:
    """Adaptive panel integration of f over each cell, returned per cell."""
    a = np.asarray(a_arr, dtype=float)
    b = np.asarray(b_arr, dtype=float)
    n = a.size
    out = np.zeros(n)
    if n == 0:
        return out
    idx = np.arange(n)
    depth = np.zeros(n, dtype=int)
    while a.size:
        if a.size > 200000:
            raise QuadratureError(
                "adaptive quadrature failed to converge "
                f"({a.size} cells pending, first [{a[0]!r}, {b[0]!r}])")
        i16, err = _panel_integrals(f, a, b)
        if char is None:
            fin = np.abs(i16[np.isfinite(i16)])
            char = max(float(np.max(fin)) if fin.size else 0.0, _TINY)
        finite = np.isfinite(i16) & np.isfinite(err)
        ok = finite & (err <= rel * (np.abs(i16) + 1e-4 * char))
        # cells narrower than a few ulps cannot be split further
        ok |= finite & ((b - a) <= 4e-16 * np.maximum(np.abs(a), np.abs(b)))
        np.add.at(out, idx[ok], i16[ok])
        pending = ~ok
        exhausted = pending & (depth >= _MAX_DEPTH)
        for k in np.nonzero(exhausted)[0]:
            out[idx[k]] += _quad_cell(f, float(a[k]), float(b[k]), rel, char)
        splitting = pending & ~exhausted
        a2, b2 = a[splitting], b[splitting]
        mid = 0.5 * (a2 + b2)
        idx2 = idx[splitting]
        d2 = depth[splitting] + 1
        a = np.concatenate([a2, mid])
        b = np.concatenate([mid, b2])
        idx = np.concatenate([idx2, idx2])
        depth = np.concatenate([d2, d2])
    return out


def euclidean_annulus_volume(dimension: int, r_a: float, r_b: float) -> float:
    """Exact volume of the Euclidean annulus r_a <= |x| <= r_b."""
    m = dimension
    omega = unit_sphere_area(m)
    r_a, r_b = float(r_a), float(r_b)
    if r_a < 0 or r_b < r_a or not math.isfinite(r_b):
        raise RangeError(f"invalid annulus range [{r_a}, {r_b}]")
    return omega * (r_b**m - r_a**m) / m


class ManifoldModel:
    """Tabulated reconstruction of a profile, truncated at r_cap."""

    def __init__(self, profile: HawkingProfile, r_cap: float,
                 tolerances: Optional[Tolerances] = None,
                 check: bool = True):
        tol = tolerances if tolerances is not None else default_tolerances()
        if not (math.isfinite(r_cap) and r_cap > 0 and r_cap > 2.0 * profile.r_min):
            raise DomainError(
                f"r_cap must be finite, positive and above 2 r_min, got {r_cap}")
        if check:
            report = validate(profile, tol)
            if not report.ok:
                raise InvalidProfileError(
                    "profile failed validation:\n" + str(report))
        self.profile = profile
        self.r_cap = float(r_cap)
        self.tolerances = tol
        self.dimension = profile.dimension
        self.r_min = profile.r_min
        self.adm_mass = profile.adm_mass
        self.omega = unit_sphere_area(profile.dimension)
        gap0 = float(profile.wall_gap(profile.r_min)) if profile.r_min > 0 else 0.0
        self._singular = (profile.r_min > 0
                          and gap0 <= 1e-9 * profile.r_min ** (self.dimension - 2))
        self._build_tables()
        self._r_disk: Optional[float] = None

    # -- exact pointwise data ------------------------------------------------

    def _origin_slope_sq(self) -> float:
        """Limit of F'(r)^2 as r -> 0 for a boundaryless profile."""
        piece = self.profile.pieces[0]
        k = self.dimension - 2
        if isinstance(piece, PowerLawPiece) and piece.exponent == k:
            c = piece.coefficient
            return 2.0 * c / (1.0 - 2.0 * c)
        return 0.0

    def f_prime(self, r):
        """Exact graph slope F'(r); +inf on a minimal boundary sphere."""
        arr = np.atleast_1d(np.asarray(r, dtype=float))
        scalar = np.ndim(r) == 0
        mh = self.profile.mass(arr)
        gap = self.profile.wall_gap(arr)
        out = np.empty_like(arr)
        with np.errstate(divide="ignore", invalid="ignore"):
            good = gap > 0
            out[good] = np.sqrt(2.0 * mh[good] / gap[good])
            out[~good] = np.inf
        at_min = arr <= self.r_min
        if np.any(at_min):
            if self.r_min == 0.0:
                out[at_min] = math.sqrt(self._origin_slope_sq())
            elif self._singular:
                out[at_min] = np.inf
        return float(out[0]) if scalar else out

    def s_prime(self, r):
        """Exact arclength density sqrt(1 + F'(r)^2)."""
        arr = np.atleast_1d(np.asarray(r, dtype=float))
        scalar = np.ndim(r) == 0
        gap = self.profile.wall_gap(arr)
        xi = arr ** (self.dimension - 2)
        out = np.empty_like(arr)
        with np.errstate(divide="ignore", invalid="ignore"):
            good = (gap > 0) & (xi > 0)
            out[good] = np.sqrt(xi[good] / gap[good])
            out[~good] = np.inf
        at_zero = arr == 0.0
        if np.any(at_zero) and self.r_min == 0.0:
            out[at_zero] = math.sqrt(1.0 + self._origin_slope_sq())
        return float(out[0]) if scalar else out

    # -- tabulation ----------------------------------------------------------

    def _build_tables(self):
        profile = self.profile
        pts = [np.array([self.r_min, self.r_cap])]
        for k, piece in enumerate(profile.pieces):
            a = max(piece.r_lo, self.r_min)
            b = min(piece.r_hi, self.r_cap)
            if not b > a:
                continue
            pts.append(np.linspace(a, b, 49))
            if a > 0 and b / a > 6.0:
                pts.append(np.geomspace(a, b, 33))
            elif a == 0.0:
                pts.append(b * np.linspace(0.0, 1.0, 33) ** 2)
            if k == 0 and self._singular:
                # sqrt grading resolves the boundary singularity profile
                pts.append(a + (b - a) * np.linspace(0.0, 1.0, 49) ** 2)
            if isinstance(piece, CubicSplinePiece):
                inner = piece.knots[(piece.knots > a) & (piece.knots < b)]
                if inner.size:
                    pts.append(inner)
        knots = np.unique(np.concatenate(pts))
        knots = knots[(knots >= self.r_min) & (knots <= self.r_cap)]
        self.knots = knots
        self._F_knots = self._cumulative(self.f_prime)
        self._s_knots = self._cumulative(self.s_prime)

    def _substituted(self, fvec: Callable) -> Callable:
        # Integrand under u = sqrt(r - r_min).  For u below sqrt(ulp(r_min))
        # the sum r_min + u*u rounds back to r_min where fvec diverges, so the
        # offset is re-derived from the rounded radius (floored one step above
        # r_min); fvec(r) * sqrt(r - r_min) stays bounded as r -> r_min.
        r_min = self.r_min
        r_floor = np.nextafter(r_min, np.inf)

        def g(u):
            r = np.maximum(r_min + u * u, r_floor)
            return fvec(r) * 2.0 * np.sqrt(r - r_min)

        return g

    def _cumulative(self, fvec: Callable) -> np.ndarray:
        knots = self.knots
        rel = self.tolerances.quad_rel
        a = knots[:-1].copy()
        b = knots[1:]
        if self._singular:
            inc0 = _adaptive_cells(self._substituted(fvec),
                                   [0.0], [math.sqrt(knots[1] - knots[0])], rel)
            inc = np.concatenate([
                inc0, _adaptive_cells(fvec, a[1:], b[1:], rel)])
        else:
            inc = _adaptive_cells(fvec, a, b, rel)
        table = np.concatenate([[0.0], np.cumsum(inc)])
        return table

    # -- cumulative queries ----------------------------------------------------

    def _eval_cumulative(self, r, table: np.ndarray, fvec: Callable):
        arr = np.atleast_1d(np.asarray(r, dtype=float))
        scalar = np.ndim(r) == 0
        slack = 1e-12 * max(1.0, self.r_cap)
        if arr.size and (np.min(arr) < self.r_min - slack
                         or np.max(arr) > self.r_cap + slack):
            raise RangeError(
                f"radius outside model range [{self.r_min}, {self.r_cap}]")
        arr = np.clip(arr, self.r_min, self.r_cap)
        knots = self.knots
        rel = self.tolerances.quad_rel
        out = np.empty_like(arr)
        for n, x in enumerate(arr):
            i = int(np.searchsorted(knots, x))
            if i < knots.size and knots[i] == x:
                out[n] = table[i]
                continue
            if self._singular and x < knots[1]:
                half = _adaptive_cells(self._substituted(fvec),
                                       [0.0], [math.sqrt(x - knots[0])], rel)
                out[n] = float(half[0])
                continue
            j = i - 1 if (x - knots[i - 1]) <= (knots[i] - x) else i
            if j == 0 and self._singular:
                j = 1
            lo, hi = (knots[j], x) if knots[j] <= x else (x, knots[j])
            inc = float(_adaptive_cells(fvec, [lo], [hi], rel)[0])
            out[n] = table[j] + (inc if knots[j] <= x else -inc)
        return float(out[0]) if scalar else out

    def F(self, r):
        """Graph height F(r), normalized to F(r_min) = 0."""
        return self._eval_cumulative(r, self._F_knots, self.f_prime)

    def s(self, r):
        """Radial arclength from the inner boundary to the sphere at r."""
        return self._eval_cumulative(r, self._s_knots, self.s_prime)

    @property
    def s_cap(self) -> float:
        return float(self._s_knots[-1])

    def r_of_s(self, s):
        """Invert the arclength: the radius whose sphere lies at arclength s."""
        arr = np.atleast_1d(np.asarray(s, dtype=float))
        scalar = np.ndim(s) == 0
        table = self._s_knots
        slack = 1e-9 * max(1.0, table[-1])
        if arr.size and (np.min(arr) < -slack or np.max(arr) > table[-1] + slack):
            raise RangeError(
                f"arclength outside model range [0, {table[-1]}]")
        arr = np.clip(arr, 0.0, table[-1])
        knots = self.knots
        tol = self.tolerances.solve_rel
        out = np.empty_like(arr)
        for n, target in enumerate(arr):
            i = int(np.searchsorted(table, target))
            if i < table.size and table[i] == target:
                out[n] = knots[i]
                continue
            lo, hi = knots[i - 1], knots[i]
            s_lo, s_hi = table[i - 1], table[i]
            r = lo + (hi - lo) * (target - s_lo) / (s_hi - s_lo)
            for _ in range(80):
                g = float(self.s(r)) - target
                if abs(g) <= tol * max(1.0, target):
                    break
                if g > 0:
                    hi = r
                else:
                    lo = r
                sp = float(self.s_prime(r))
                step = r - g / sp if math.isfinite(sp) and sp > 0 else None
                if step is None or not (lo < step < hi):
                    step = 0.5 * (lo + hi)
                if step == r:
                    break
                r = step
            out[n] = r
        return float(out[0]) if scalar else out

    # -- integrals over radial ranges -----------------------------------------

    def _integrate(self, fvec: Callable, r_a: float, r_b: float) -> float:
        """Knot-aligned adaptive integral of fvec over [r_a, r_b]."""
        slack = 1e-12 * max(1.0, self.r_cap)
        if r_a < self.r_min - slack or r_b > self.r_cap + slack:
            raise RangeError(
                f"integration range [{r_a}, {r_b}] outside the model")
        r_a = max(r_a, self.r_min)
        r_b = min(r_b, self.r_cap)
        if r_b <= r_a:
            return 0.0
        knots = self.knots
        rel = self.tolerances.quad_rel
        inner = knots[(knots > r_a) & (knots < r_b)]
        edges = np.concatenate([[r_a], inner, [r_b]])
        total = 0.0
        start = 0
        if self._singular and r_a < knots[1]:
            g = self._substituted(fvec)
            w_hi = math.sqrt(edges[1] - self.r_min)
            if r_a <= self.r_min * (1.0 + 1e-15):
                total += float(_adaptive_cells(g, [0.0], [w_hi], rel)[0])
            else:
                w_lo = math.sqrt(r_a - self.r_min)
                if w_lo <= 0.7 * w_hi:
                    parts = _adaptive_cells(g, [0.0, 0.0], [w_hi, w_lo], rel)
                    total += float(parts[0] - parts[1])
                else:
                    total += float(
                        _adaptive_cells(fvec, [r_a], [edges[1]], rel)[0])
            start = 1
        if edges.size - 1 > start:
            total += float(np.sum(_adaptive_cells(
                fvec, edges[start:-1], edges[start + 1:], rel)))
        return total

    def shell_volume(self, r_a: float, r_b: float) -> float:
        """Riemannian volume of the shell between the spheres at r_a, r_b."""
        if r_b < r_a:
            raise RangeError("shell_volume needs r_a <= r_b")
        m = self.dimension
        omega = self.omega

        def integrand(r):
            return omega * r ** (m - 1) * self.s_prime(r)

        return self._integrate(integrand, r_a, r_b)

    def graph_excess(self, r_a: float, r_b: float) -> float:
        """Integral of (F(r) - F(r_a)) over the annulus [r_a, r_b].

        Evaluated as a single pass via Fubini:
        int F'(t) omega (r_b^m - t^m)/m dt.
        """
        if r_b < r_a:
            raise RangeError("graph_excess needs r_a <= r_b")
        m = self.dimension
        omega = self.omega
        cap = r_b**m

        def integrand(t):
            return self.f_prime(t) * omega * (cap - t**m) / m

        return self._integrate(integrand, r_a, r_b)

    def sup_grad(self, r_a: float, r_b: float) -> float:
        """Maximum of F' over [r_a, r_b], scanned at knots and endpoints."""
        slack = 1e-12 * max(1.0, self.r_cap)
        if r_a < self.r_min - slack or r_b > self.r_cap + slack or r_b < r_a:
            raise RangeError(f"range [{r_a}, {r_b}] outside the model")
        inner = self.knots[(self.knots > r_a) & (self.knots < r_b)]
        rs = np.concatenate([[max(r_a, self.r_min)], inner,
                             [min(r_b, self.r_cap)]])
        return float(np.max(self.f_prime(rs)))

    # -- derived geometry ------------------------------------------------------

    @property
    def r_disk(self) -> float:
        """Largest radius below which the reconstruction is exactly flat.

        F' below 1e-12 counts as flat; returns r_min when the profile is
        curved from the start and +inf when it is flat through r_cap.
        """
        if self._r_disk is None:
            thr = 1e-12
            vals = self.f_prime(self.knots)
            above = vals >= thr
            if not np.any(above):
                self._r_disk = math.inf
            elif above[0]:
                self._r_disk = self.r_min
            else:
                k = int(np.argmax(above))
                lo, hi = self.knots[k - 1], self.knots[k]
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    if float(self.f_prime(mid)) < thr:
                        lo = mid
                    else:
                        hi = mid
                self._r_disk = float(0.5 * (lo + hi))
        return self._r_disk

    def quantities(self, r) -> dict:
        """Pointwise invariants of the reconstruction at radius r.

        Returns scalar curvature R, sphere area A, sphere mean curvature H,
        the Hawking mass and its radial derivative, all from the graph
        parametrization (one-sided at piece joints).  Where the graph slope
        is nonzero the ``radial`` entry repeats the five values computed in
        the arclength parametrization as an internal cross-check.
        """
        x = float(r)
        slack = 1e-12 * max(1.0, self.r_cap)
        if not (self.r_min < x <= self.r_cap + slack):
            raise RangeError(
                f"quantities requires r in (r_min, r_cap], got {x}")
        m = self.dimension
        mh = float(self.profile.mass(x))
        mp = float(self.profile.mass_prime(x))
        gap = float(self.profile.wall_gap(x))
        xi = x ** (m - 2)
        area = self.omega * x ** (m - 1)
        if 2.0 * mh <= 1e-280 * xi:
            zp = 0.0
            zpp = 0.0
            curv = 0.0
            mean = (m - 1) / x
        else:
            zp2 = 2.0 * mh / gap
            zp = math.sqrt(zp2)
            gap_p = (m - 2) * x ** (m - 3) - 2.0 * mp
            zpp = (mp * gap - mh * gap_p) / (gap * gap * zp)
            one = 1.0 + zp2
            curv = (m - 1) * (zp / x) / one * ((m - 2) * zp / x + 2.0 * zpp / one)
            mean = (m - 1) / (x * math.sqrt(one))
        out = {"R": curv, "A": area, "H": mean, "m_H": mh, "m_H_prime": mp,
               "radial": None}
        if zp > 1e-12:
            rp = 1.0 / zp
            rpp = -zpp / zp**3
            one_r = 1.0 + rp * rp
            curv_z = (m - 1) * ((m - 2) * one_r - 2.0 * x * rpp) / (x * x * one_r**2)
            out["radial"] = {
                "R": curv_z,
                "A": area,
                "H": (m - 1) * rp / (x * math.sqrt(one_r)),
                "m_H": xi / (2.0 * one_r),
                "m_H_prime": x ** (m - 1) * rp * curv_z / (2.0 * (m - 1)),
            }
        return out


@dataclass(frozen=True)
class TubularWindow:
    """The arclength window of half-width D around the sphere of area alpha0."""

    alpha0: float
    D: float
    r0: float
    s0: float
    r_minus: float
    r_plus: float
    s_minus: float
    s_plus: float
    clamped: bool


def tubular_window(model: ManifoldModel, alpha0: float, D: float) -> TubularWindow:
    """Locate the tubular neighborhood of the alpha0 sphere in the model."""
    alpha0 = float(alpha0)
    D = float(D)
    if not (alpha0 > 0 and math.isfinite(alpha0)):
        raise DomainError(f"alpha0 must be positive, got {alpha0}")
    if not (D > 0 and math.isfinite(D)):
        raise DomainError(f"D must be positive, got {D}")
    m = model.dimension
    r0 = (alpha0 / model.omega) ** (1.0 / (m - 1))
    if r0 <= model.r_min:
        raise DomainError(
            f"the alpha0 sphere (r0={r0:g}) is at or below the boundary")
    if r0 >= model.r_cap:
        raise WindowOverflowError(
            f"the alpha0 sphere (r0={r0:g}) is beyond r_cap; increase r_cap")
    s0 = float(model.s(r0))
    s_plus = s0 + D
    if s_plus > model.s_cap * (1.0 + 1e-12):
        raise WindowOverflowError(
            f"window reaches arclength {s_plus:g} but the model ends at "
            f"{model.s_cap:g}; increase r_cap")
    s_minus_raw = s0 - D
    clamped = s_minus_raw < 0.0
    s_minus = max(s_minus_raw, 0.0)
    r_minus = model.r_min if clamped or s_minus == 0.0 else float(model.r_of_s(s_minus))
    r_plus = float(model.r_of_s(min(s_plus, model.s_cap)))
    # arclength dominates radius (s' >= 1), so r(s0 +- D) lies within D of
    # r0; clamp away the couple of ulps the inversion can overshoot by
    r_minus = max(r_minus, r0 - D)
    r_plus = min(r_plus, r0 + D)
    return TubularWindow(alpha0=alpha0, D=D, r0=r0, s0=s0,
                         r_minus=r_minus, r_plus=r_plus,
                         s_minus=s_minus, s_plus=s_plus, clamped=clamped)


CSV_COLUMNS = ("r", "F", "F_prime", "s", "m_H", "R", "A", "H")


def model_table(model: ManifoldModel, rs=None) -> dict:
    """Column arrays of the model's pointwise data at the given radii."""
    if rs is None:
        rs = model.knots[model.knots > model.r_min]
    rs = np.asarray(rs, dtype=float)
    cols = {name: np.empty_like(rs) for name in CSV_COLUMNS}
    cols["r"] = rs
    cols["F"] = np.atleast_1d(model.F(rs))
    cols["F_prime"] = np.atleast_1d(model.f_prime(rs))
    cols["s"] = np.atleast_1d(model.s(rs))
    for n, x in enumerate(rs):
        q = model.quantities(x)
        cols["m_H"][n] = q["m_H"]
        cols["R"][n] = q["R"]
        cols["A"][n] = q["A"]
        cols["H"][n] = q["H"]
    return cols

def write_model_csv(model: ManifoldModel, path, rs=None) -> None:
    """Write the model table as CSV with 17 significant digits."""
    cols = model_table(model, rs)
    n = cols["r"].size
    with open(path, "w", encoding="ascii") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for i in range(n):
            fh.write(",".join("%.17g" % cols[name][i]
                              for name in CSV_COLUMNS) + "\n")


# re-exported here so geometry presents the full reconstruction toolkit
from .mesh import MeshGeodesicOracle, mesh_distance  # noqa: E402,F401

__all__ += ["MeshGeodesicOracle", "mesh_distance"]
