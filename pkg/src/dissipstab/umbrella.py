"""Singularity geometry of the quartic stability boundary and abscissa optimization.

The pinch point of the neutral surface is a Whitney umbrella: the image of
(x1, x2) -> (y1, y2, y3) = (x1^2, x2, x1 x2), which satisfies
y1 y2^2 = y3^2 with y1 >= 0.  The coordinate bridge

    a1 = y3/2 + w,  a2 = 2 + y2,  a3 = -y3/2 + w,  w^2 = y3^2/4 + y1 y2

maps umbrella coordinates onto quartic coefficients with a4 = 1 and turns
the pivot combination into H = y3^2 - y1 y2^2, so the umbrella surface is
exactly the neutral set H = 0.

Inside the stability domain runs the curve of exceptional points
(a1, a3, a2) = (a1, a1, 2 + a1^2/4), where the quartic has two double
roots -a1/4 -+ sqrt(a1^2 - 16)/4; at a1 = 4 they coalesce into the
quadruple root -1, the Swallowtail vertex (4, 4, 6) of the discriminant
surface that bounds the heavy-damping region.  That vertex is also the
global minimizer of the spectral abscissa over monic quartics with unit
constant coefficient, a special case of the affine-constraint
minimization implemented in ``abscissa_min_affine``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .smallalg import Poly, poly_roots
from .msystem import QuarticPoly


class NegativeWRadicand(ValueError):
    """The umbrella-to-coefficients bridge needs y3^2/4 + y1 y2 >= 0."""


class NoRealCriticalPoint(RuntimeError):
    """No real candidate for the infimum; the problem is unbounded below."""


@dataclass(frozen=True)
class WhitneyPoint:
    y1: float
    y2: float
    y3: float

    def on_surface(self, tol: float = 1e-12) -> bool:
        return self.y1 >= 0 and abs(self.y1 * self.y2**2 - self.y3**2) <= tol * (
            1.0 + self.y3**2 + abs(self.y1) * self.y2**2
        )


def whitney_map(x1: float, x2: float) -> WhitneyPoint:
    """The pinch-point normal form (x1, x2) -> (x1^2, x2, x1 x2)."""
    return WhitneyPoint(x1 * x1, x2, x1 * x2)


def bottema_from_whitney(p: WhitneyPoint, branch: int = +1):
    """Map an umbrella point to quartic coefficients (a1, a3, a2), a4 = 1.

    Both signs of w generate the surface; choose with ``branch``.  The image
    satisfies H(a) = y3^2 - y1 y2^2 identically, so on-surface points land
    exactly on the neutral set.
    """
    if branch not in (+1, -1):
        raise ValueError("branch must be +1 or -1")
    rad = 0.25 * p.y3**2 + p.y1 * p.y2
    if rad < 0:
        raise NegativeWRadicand(f"w^2 = {rad} < 0 for point {p}")
    w = branch * math.sqrt(rad)
    a1 = 0.5 * p.y3 + w
    a3 = -0.5 * p.y3 + w
    a2 = 2.0 + p.y2
    return (a1, a3, a2)


def ep_set_point(a1: float):
    """Exceptional-point quartic at parameter a1 >= 0.

    Returns (QuarticPoly, ((root, 2), (root, 2))) with coefficients
    (a1, 2 + a1^2/4, a1, 1) and the two double roots
    -a1/4 -+ sqrt(a1^2 - 16)/4.  At a1 = 4 both formulas give the
    quadruple root -1.
    """
    if a1 < 0:
        raise ValueError("a1 must be non-negative")
    q = QuarticPoly(a1, 2.0 + a1 * a1 / 4.0, a1, 1.0)
    s = complex(a1 * a1 - 16.0) ** 0.5
    r1 = -a1 / 4.0 - s / 4.0
    r2 = -a1 / 4.0 + s / 4.0
    return q, ((r1, 2), (r2, 2))


def poly_abscissa(p: Poly, tol: float = 1e-12) -> float:
    """Maximal real part over the roots (clustered, so multiple roots do
    not inflate the value with their numerical spread)."""
    return max(r.real for r, _ in poly_roots(p, tol))


def heavy_damping_test(q: QuarticPoly, tol: float = 1e-7) -> bool:
    """True when all four roots are real, negative, and pairwise separated.

    Such systems decay monotonically; the test is the membership oracle for
    the region inside the discriminant spire.
    """
    clusters = poly_roots(q.as_poly(), 1e-12)
    scale = 1.0 + max(abs(r) for r, _ in clusters)
    if any(m > 1 for _, m in clusters):
        return False
    roots = [r for r, _ in clusters]
    if any(abs(r.imag) > tol * scale for r in roots):
        return False
    if any(r.real >= -tol * scale for r in roots):
        return False
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= tol * scale:
                return False
    return True


@dataclass(frozen=True)
class AffineConstraint:
    """b0 + sum_j b_j a_j = 0 over monic degree-n polynomials.

    ``b`` lists (b0, b1, ..., bn) where a_j is the coefficient of
    lambda^(n-j); at least one of b1..bn must be nonzero.
    """

    b: Tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(v) for v in self.b)
        if len(b) < 2:
            raise ValueError("constraint needs b0 and at least b1")
        if all(v == 0.0 for v in b[1:]):
            raise ValueError("b1..bn must not all vanish")
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.b) - 1

    @property
    def k(self) -> int:
        return max(j for j in range(1, len(self.b)) if self.b[j] != 0.0)


@dataclass(frozen=True)
class AbscissaMinResult:
    a_star: float
    attained: bool
    p_star: Optional[Poly]
    h: Poly
    field: str


def _h_polynomial(c: AffineConstraint) -> Poly:
    # ascending coefficients: lambda^j carries b_j * C(n, j)
    n = c.n
    coeffs = [c.b[j] * math.comb(n, j) for j in range(n + 1)]
    return Poly(coeffs)


def abscissa_min_affine(c: AffineConstraint, field: str = "real") -> AbscissaMinResult:
    """Infimum of the abscissa over one affine coefficient constraint.

    Builds h(lambda) = sum_j b_j C(n, j) lambda^j.  Over the reals the
    infimum is minus the largest real critical value of h through order
    k - 1, attained (by (lambda - a*)^n) exactly when that value is a root
    of h itself.  Over the complexes the optimum is always attained, with
    -gamma the root of h of largest real part.
    """
    if field not in ("real", "complex"):
        raise ValueError("field must be 'real' or 'complex'")
    h = _h_polynomial(c)
    n = c.n
    if field == "complex":
        roots = poly_roots(h)
        root = max((r for r, _ in roots), key=lambda r: (r.real, r.imag))
        gamma = -root
        p_star = Poly.from_roots([gamma] * n)
        return AbscissaMinResult(
            a_star=gamma.real, attained=True, p_star=p_star, h=h, field=field
        )
    candidates = []
    h_roots = []
    deriv = h
    for order in range(c.k):
        if deriv.degree >= 1:
            roots = poly_roots(deriv)
            real_roots = [
                r.real
                for r, _ in roots
                if abs(r.imag) <= 1e-9 * (1.0 + abs(r))
            ]
            if order == 0:
                h_roots = real_roots
            candidates.extend(real_roots)
        deriv = deriv.deriv() if deriv.degree >= 1 else deriv
    if not candidates:
        raise NoRealCriticalPoint(
            "h and its derivatives have no real roots; the infimum is -inf"
        )
    zeta = max(candidates)
    a_star = -zeta
    attained = any(abs(zeta - r) <= 1e-8 * (1.0 + abs(zeta)) for r in h_roots)
    p_star = Poly.from_roots([a_star] * n) if attained else None
    return AbscissaMinResult(a_star=a_star, attained=attained, p_star=p_star, h=h, field="real")


HEAVY_LABEL = "heavy"
DISCRIMINANT_LABEL = "discriminant"
OTHER_LABEL = "other"


@dataclass(frozen=True)
class ProbePoint:
    a1: float
    a3: float
    a2: float
    label: str


def classify_probe(a1: float, a3: float, a2: float, tol: float = 1e-7) -> str:
    """Label one (a1, a3, a2) point, a4 = 1, from its clustered roots."""
    q = QuarticPoly(a1, a2, a3, 1.0)
    clusters = poly_roots(q.as_poly(), 1e-12)
    scale = 1.0 + max(abs(r) for r, _ in clusters)
    repeated_real = any(
        m > 1 and abs(r.imag) <= tol * scale for r, m in clusters
    )
    if repeated_real:
        return DISCRIMINANT_LABEL
    if heavy_damping_test(q, tol):
        return HEAVY_LABEL
    return OTHER_LABEL


def discriminant_swallowtail_probe(a1_grid, a3_grid, a2_grid, tol: float = 1e-7):
    """Classify a coefficient grid into heavy/discriminant/other points."""
    points = []
    for a1 in a1_grid:
        for a3 in a3_grid:
            for a2 in a2_grid:
                points.append(
                    ProbePoint(float(a1), float(a3), float(a2), classify_probe(a1, a3, a2, tol))
                )
    return points


@dataclass(frozen=True)
class CuspLocation:
    point: Tuple[float, float, float]  # (a1, a3, a2)
    resolution: float
    quadruple_root: float
    newton_residual: float


def _all_real_negative(a1, a3, a2, imag_tol):
    roots = poly_roots(QuarticPoly(a1, a2, a3, 1.0).as_poly(), 1e-12)
    scale = 1.0 + max(abs(r) for r, _ in roots)
    return all(
        abs(r.imag) <= imag_tol * scale and r.real < 0.0 for r, _ in roots
    )


def locate_heavy_damping_cusp(
    box=((3.0, 6.0), (3.0, 6.0), (4.5, 9.0)),
    grid_n: int = 9,
    levels: int = 8,
    newton_steps: int = 60,
) -> CuspLocation:
    """Vertex of the heavy-damping region by box refinement plus Newton polish.

    Stage one refines boxes around the componentwise minimum of the
    nearly-all-real set (the region of real negative spectra is pinched at
    the vertex, so the marked tolerance tracks the grid scale).  Root
    spreads near the quadruple point scale like the fourth root of the
    coefficient offset, which caps what grid refinement alone can resolve;
    stage two therefore polishes with Newton on the degeneracy system
    p(g) = p'(g) = p''(g) = p'''(g) = 0 in the unknowns (g, a1, a2, a3).
    """
    lo = np.array([b[0] for b in box], dtype=float)
    hi = np.array([b[1] for b in box], dtype=float)
    best = 0.5 * (lo + hi)
    step = float(np.max(hi - lo)) / (grid_n - 1)
    for _ in range(levels):
        axes = [np.linspace(lo[k], hi[k], grid_n) for k in range(3)]
        step = float(max((hi - lo) / (grid_n - 1)))
        imag_tol = max(1e-8, 0.35 * math.sqrt(step))
        marked = [
            (a1, a3, a2)
            for a1 in axes[0]
            for a3 in axes[1]
            for a2 in axes[2]
            if _all_real_negative(a1, a3, a2, imag_tol)
        ]
        if not marked:
            break
        arr = np.asarray(marked)
        corner = arr.min(axis=0)
        best = corner
        half = 2.5 * step
        lo = corner - half
        hi = corner + half
        if half < 0.05:
            break

    # Newton on the quadruple-root system, seeded from the box estimate
    a1, a3, a2 = (float(v) for v in best)
    g = -a1 / 4.0
    x = np.array([g, a1, a2, a3], dtype=float)
    residual = math.inf
    for _ in range(newton_steps):
        g, a1, a2, a3 = x
        p = g**4 + a1 * g**3 + a2 * g**2 + a3 * g + 1.0
        dp = 4 * g**3 + 3 * a1 * g**2 + 2 * a2 * g + a3
        d2p = 12 * g**2 + 6 * a1 * g + 2 * a2
        d3p = 24 * g + 6 * a1
        f = np.array([p, dp, d2p, d3p])
        residual = float(np.abs(f).max())
        if residual < 1e-13:
            break
        jac = np.array(
            [
                [dp, g**3, g**2, g],
                [d2p, 3 * g**2, 2 * g, 1.0],
                [d3p, 6 * g, 2.0, 0.0],
                [24.0, 6.0, 0.0, 0.0],
            ]
        )
        try:
            delta = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError:
            break
        x = x - delta
    g, a1, a2, a3 = (float(v) for v in x)
    return CuspLocation(
        point=(a1, a3, a2),
        resolution=max(step, residual),
        quadruple_root=g,
        newton_residual=residual,
    )
