"""Particle near the bottom of a rotating vessel.

In the frame rotating at omega, with surface curvatures k1 >= k2 and
viscous coefficients c1, c2 on the two coordinates,

    x'' - 2 omega y' + c1 x' + (g k1 - omega^2) x = 0
    y'' + 2 omega x' + c2 y' + (g k2 - omega^2) y = 0,

so M = I, D = diag(c1, c2), G has off-diagonal -2 omega, and
K = diag(g k1 - omega^2, g k2 - omega^2).  The characteristic quartic has

    a1 = c1 + c2
    a2 = g (k1 + k2) + 2 omega^2 + c1 c2
    a3 = c1 (g k2 - omega^2) + c2 (g k1 - omega^2)
    a4 = (g k1 - omega^2) (g k2 - omega^2).

Without friction the stability chart splits into the classical cases,
including the rotating-saddle window

    g k1 < omega^2 < -(g/8) (k1 - k2)^2 / (k1 + k2)

available when k1 + k2 < 0 < 3 k1 + k2.  The saddle case covers the
triangular libration points of the restricted three-body problem, whose
curvatures satisfy g k1 + g k2 = -1 and are stable exactly when the
Gascheau combination 1 - 27 mu (1 - mu) is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..msystem import MechanicalSystem, decompose


@dataclass(frozen=True)
class BrouwerParams:
    g: float = 1.0  # gravity
    k1: float = 1.0  # x-curvature at the equilibrium
    k2: float = 1.0  # y-curvature
    omega: float = 0.0  # rotation speed
    c1: float = 0.0  # damping on x
    c2: float = 0.0  # damping on y

    def __post_init__(self):
        if self.g <= 0:
            raise ValueError("g must be positive")


def build_brouwer(p: BrouwerParams) -> MechanicalSystem:
    om = p.omega
    B = np.array([[p.c1, -2.0 * om], [2.0 * om, p.c2]])
    A = np.diag([p.g * p.k1 - om * om, p.g * p.k2 - om * om])
    sys = decompose(A, B)
    return MechanicalSystem(
        M=sys.M, D=sys.D, G=sys.G, K=sys.K, N=sys.N, labels=("x", "y")
    )


@dataclass(frozen=True)
class BrouwerVerdict:
    stable: bool
    case: str
    window: Optional[Tuple[float, float]] = None  # stable omega^2 interval(s) hint


def brouwer_undamped_verdict(p: BrouwerParams) -> BrouwerVerdict:
    """Closed-form stability of the frictionless vessel.

    Requires c1 = c2 = 0.  Curvatures are ordered internally so k1 >= k2.
    """
    if p.c1 != 0.0 or p.c2 != 0.0:
        raise ValueError("closed-form verdict applies to the undamped vessel")
    k1, k2 = (p.k1, p.k2) if p.k1 >= p.k2 else (p.k2, p.k1)
    g, w2 = p.g, p.omega**2
    if k1 > 0 and k2 > 0:
        stable = (0 <= w2 < g * k2) or (w2 > g * k1)
        return BrouwerVerdict(stable, "single well", (g * k2, g * k1))
    if k2 < 0 < k1:
        if k1 > -k2:
            return BrouwerVerdict(w2 > g * k1, "saddle, k1 > -k2", (g * k1, math.inf))
        if 3.0 * k1 + k2 < 0:
            return BrouwerVerdict(False, "saddle, 3 k1 + k2 < 0", None)
        upper = -(g / 8.0) * (k1 - k2) ** 2 / (k1 + k2)
        return BrouwerVerdict(
            g * k1 < w2 < upper, "saddle, 3 k1 + k2 > 0", (g * k1, upper)
        )
    return BrouwerVerdict(False, "dome (both curvatures non-positive)", None)


def lagrange_point_params(mass_ratio: float):
    """Equivalent vessel parameters of the L4/L5 equilibria.

    For the primary mass fraction mu the rotating-frame curvatures are
    g k1,2 = -1/2 +- (3/2) sqrt(1 - 3 mu (1 - mu)) with omega = 1, and the
    point is linearly stable exactly when gascheau = 1 - 27 mu (1 - mu) is
    positive.  Returns (BrouwerParams, gascheau).
    """
    mu = float(mass_ratio)
    if not 0.0 <= mu <= 1.0:
        raise ValueError("mass ratio must lie in [0, 1]")
    s = math.sqrt(1.0 - 3.0 * mu * (1.0 - mu))
    gk1 = -0.5 + 1.5 * s
    gk2 = -0.5 - 1.5 * s
    gascheau = 1.0 - 27.0 * mu * (1.0 - mu)
    return BrouwerParams(g=1.0, k1=gk1, k2=gk2, omega=1.0), gascheau


GASCHEAU_CRITICAL_RATIO = 0.5 * (1.0 - math.sqrt(23.0 / 27.0))  # 27 mu (1-mu) = 1
