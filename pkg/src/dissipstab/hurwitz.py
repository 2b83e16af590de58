"""Exact stability classification of real monic quartics.

For lambda^4 + a1 l^3 + a2 l^2 + a3 l + a4 define

    H = a1^2 a4 + a3^2 - a1 a2 a3.

All roots lie strictly in the open left half plane iff a_i > 0 for all i
and H < 0.  All roots have non-positive real parts (distinct roots on the
axis) iff one of

    A:  a1 > 0, a2 > 0, a3 > 0, a4 >= 0, a2 >= (a1^2 a4 + a3^2)/(a1 a3)
    B:  a1 = 0, a3 = 0, a2 > 0, a4 > 0, a2 > 2 sqrt(a4)

holds.  The boundary subcases of A (a4 = 0, or H = 0 with positive
coefficients) carry simple roots on the imaginary axis; repeated axis
roots grow secularly and are classified here as unstable, which is
stricter than the distinct-root convention behind the closed-form cases.

The neutral surface H = 0 (with a4 scaled to 1) is the ruled cubic
a1 a2 a3 = a1^2 + a3^2, swept by the lines a3 = m a1, a2 = m + 1/m.  Its
double line is the a2-axis with active part a2 >= 2, and the tangent cone
to the stability domain at the pinch point (0, 0, 2) is the half plane
a1 = a3 > 0, a2 > 2.  Geometry helpers below use the (a1, a3, a2)
coordinate order of that picture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .msystem import QuarticPoly
from .smallalg import Poly, poly_roots

ASYMPTOTICALLY_STABLE = "asymptotically stable"
MARGINALLY_STABLE = "marginally stable"
UNSTABLE = "unstable"

DEFAULT_TOL = 1e-9

_EXIT_CODE = {ASYMPTOTICALLY_STABLE: 0, UNSTABLE: 1, MARGINALLY_STABLE: 2}


class NonPositiveA4(ValueError):
    """Scale normalization needs a4 > 0."""


@dataclass(frozen=True)
class StabilityVerdict:
    stability: str  # one of the three module constants
    certificate: str
    abscissa: float

    @property
    def exit_code(self) -> int:
        return _EXIT_CODE[self.stability]


def hurwitz_H(q: QuarticPoly) -> float:
    """The pivot combination a1^2 a4 + a3^2 - a1 a2 a3."""
    a1, a2, a3, a4 = q.as_tuple()
    return a1 * a1 * a4 + a3 * a3 - a1 * a2 * a3


def _quartic_roots(q: QuarticPoly, tol):
    return poly_roots(q.as_poly(), tol=min(tol, 1e-12))


def _axis_roots_simple(clusters, tol):
    """True when every root on the imaginary axis is simple."""
    scale = 1.0 + max(abs(r) for r, _ in clusters)
    axis = [
        (r, m) for r, m in clusters if abs(r.real) <= max(100.0 * tol, 1e-7) * scale
    ]
    return all(m == 1 for _, m in axis)


def classify(q: QuarticPoly, tol: float = DEFAULT_TOL) -> StabilityVerdict:
    """Stability verdict for a real quartic from the sign conditions alone.

    Quantities within tol of zero are treated as exactly zero.  Marginal
    candidates are additionally checked for repeated imaginary roots and
    demoted to unstable when the axis roots are not simple.
    """
    a1, a2, a3, a4 = q.as_tuple()
    h = hurwitz_H(q)
    clusters = _quartic_roots(q, tol)
    abscissa = max(r.real for r, _ in clusters)

    z1 = abs(a1) <= tol
    z3 = abs(a3) <= tol

    if z1 and z3:
        # candidate for condition B: biquadratic with a1 = a3 = 0
        if a2 <= tol:
            return StabilityVerdict(UNSTABLE, "violated: a2 <= 0 with a1 = a3 = 0", abscissa)
        if abs(a4) <= tol:
            return StabilityVerdict(
                UNSTABLE, "degenerate: a4 = 0 with a1 = a3 = 0 (double root at zero)", abscissa
            )
        if a4 < 0:
            return StabilityVerdict(
                UNSTABLE, "violated: a4 < 0 with a1 = a3 = 0", abscissa
            )
        margin = a2 - 2.0 * math.sqrt(a4)
        if margin > tol:
            if _axis_roots_simple(clusters, tol):
                return StabilityVerdict(MARGINALLY_STABLE, "condition B", abscissa)
            return StabilityVerdict(
                UNSTABLE, "degenerate: repeated imaginary roots", abscissa
            )
        if abs(margin) <= tol:
            return StabilityVerdict(
                UNSTABLE,
                "degenerate: a2 = 2 sqrt(a4) gives double imaginary pairs",
                abscissa,
            )
        return StabilityVerdict(UNSTABLE, "violated: a2 < 2 sqrt(a4)", abscissa)

    # condition A path
    for name, value in (("a1", a1), ("a2", a2), ("a3", a3)):
        if value <= tol:
            return StabilityVerdict(UNSTABLE, f"violated: {name} <= 0", abscissa)
    if a4 < -tol:
        return StabilityVerdict(UNSTABLE, "violated: a4 < 0", abscissa)

    a4_zero = abs(a4) <= tol
    h_zero = abs(h) <= tol
    if h > tol:
        return StabilityVerdict(
            UNSTABLE, "violated: a2 < (a1^2 a4 + a3^2)/(a1 a3)", abscissa
        )
    if not a4_zero and not h_zero:
        # strict A: positive coefficients and H < 0
        return StabilityVerdict(ASYMPTOTICALLY_STABLE, "condition A strict", abscissa)

    # boundary subcases of A carry roots on the imaginary axis
    if not _axis_roots_simple(clusters, tol):
        return StabilityVerdict(UNSTABLE, "degenerate: repeated imaginary roots", abscissa)
    if a4_zero and h_zero:
        mu = math.sqrt(a3 / a1)
        return StabilityVerdict(
            MARGINALLY_STABLE,
            f"condition A boundary: root at zero and imaginary pair at mu = {mu:.12g}"
            " (simultaneous a4 = 0 and H = 0; most specific certificate)",
            abscissa,
        )
    if a4_zero:
        return StabilityVerdict(
            MARGINALLY_STABLE, "condition A boundary: simple root at zero", abscissa
        )
    mu = math.sqrt(a3 / a1)
    return StabilityVerdict(
        MARGINALLY_STABLE,
        f"condition A boundary: imaginary pair at mu = {mu:.12g}",
        abscissa,
    )


def scale_normalize(q: QuarticPoly):
    """Rescale lambda = c mu with c = a4**(1/4), returning (quartic, c).

    The output has a4 = 1 and the same verdict as the input, because the
    substitution maps left-half-plane roots to left-half-plane roots.
    """
    if q.a4 <= 0:
        raise NonPositiveA4("scale normalization requires a4 > 0")
    c = q.a4**0.25
    return QuarticPoly(q.a1 / c, q.a2 / c**2, q.a3 / c**3, 1.0), c


def limit_discontinuity(b1: float, b3: float, a4: float):
    """Gap between the damped and undamped neutral levels of a2.

    Along a1 = eps b1, a3 = eps b3 the stability condition requires
    a2 > g1 = (b1^2 a4 + b3^2)/(b1 b3) for every eps > 0 but only
    a2 > g2 = 2 sqrt(a4) at eps = 0.  Returns (g1, g2, gap) with
    gap = (b1 sqrt(a4) - b3)^2 / (b1 b3), which equals g1 - g2
    identically; the gap vanishes only on the ray b3 = b1 sqrt(a4).
    """
    if b1 <= 0 or b3 <= 0 or a4 <= 0:
        raise ValueError("b1, b3, a4 must all be positive")
    g1 = (b1 * b1 * a4 + b3 * b3) / (b1 * b3)
    g2 = 2.0 * math.sqrt(a4)
    gap = (b1 * math.sqrt(a4) - b3) ** 2 / (b1 * b3)
    return g1, g2, gap


@dataclass(frozen=True)
class SurfacePoint:
    """Point of the neutral surface in (a1, a3, a2) coordinates, a4 = 1."""

    a1: float
    a3: float
    a2: float
    on_double_line: bool = False


def surface_V_sample(m_range, a1_range, counts):
    """Sample the ruled neutral surface by its generators.

    Walks the lines a3 = m a1 at height a2 = m + 1/m for m in m_range and
    a1 in a1_range (counts = (m_count, a1_count) grid sizes), which gives
    H = 0 exactly by construction.  Points of the double line a1 = a3 = 0,
    a2 >= 2 are appended with ``on_double_line`` set.
    """
    import numpy as np

    m_lo, m_hi = float(m_range[0]), float(m_range[1])
    a_lo, a_hi = float(a1_range[0]), float(a1_range[1])
    nm, na = int(counts[0]), int(counts[1])
    if m_lo <= 0:
        raise ValueError("ruling slope m must be positive")
    if a_lo < 0:
        raise ValueError("a1 must be non-negative")
    if nm < 1 or na < 1:
        raise ValueError("counts must be at least 1")
    ms = np.linspace(m_lo, m_hi, nm)
    a1s = np.linspace(a_lo, a_hi, na)
    points = []
    for m in ms:
        a2 = m + 1.0 / m
        for a1 in a1s:
            points.append(SurfacePoint(float(a1), float(m * a1), float(a2)))
    a2_top = max(m + 1.0 / m for m in ms)
    for a2 in np.linspace(2.0, a2_top, nm):
        points.append(SurfacePoint(0.0, 0.0, float(a2), on_double_line=True))
    return points


def tangent_cone_contains(p, tol: float = DEFAULT_TOL) -> bool:
    """Membership in the tangent cone at the pinch point: a1 = a3 > 0, a2 > 2.

    ``p`` uses the (a1, a3, a2) coordinate order.
    """
    a1, a3, a2 = (float(v) for v in p)
    return abs(a1 - a3) <= tol and a1 > 0.0 and a2 > 2.0


def verdict_from_roots(roots, tol: float = 1e-7) -> str:
    """Classification straight from a root multiset (oracle path).

    ``roots`` is an iterable of (root, multiplicity) clusters.  Stable when
    all real parts are negative; marginal when the axis roots are simple
    and nothing lies to the right; unstable otherwise.
    """
    clusters = list(roots)
    mx = max(r.real for r, _ in clusters)
    scale = 1.0 + max(abs(r) for r, _ in clusters)
    if mx < -tol * scale:
        return ASYMPTOTICALLY_STABLE
    if mx <= tol * scale:
        if _axis_roots_simple(clusters, tol):
            return MARGINALLY_STABLE
        return UNSTABLE
    return UNSTABLE


def quartic_poly_from_coeffs(a1, a2, a3, a4) -> Poly:
    return QuarticPoly(a1, a2, a3, a4).as_poly()
