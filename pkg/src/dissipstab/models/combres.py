"""Two parametrically forced oscillators coupled by rotation: sum resonance.

The linearized disk model in the rotating frame is

    x'' - 2 Omega y' + (1 + eps cos(w t)) x + 2 eps mu_eq x' = 0
    y'' + 2 Omega x' + (1 + eps cos(w t)) y + 2 eps mu_eq y' = 0,

an undamped-and-unforced spectrum of two imaginary pairs +-i w1, +-i w2
with w1,2 = sqrt(Omega^2 + 1) +- Omega.  Parametric forcing opens an
instability tongue at the sum resonance w = w1 + w2.  With the detuning
normalized as delta_plus = (w - w1 - w2)(w1 + w2)/eps, first-order
averaging of the tongue gives the closed-form half-widths

    no damping:   |delta_plus| <= 1
    mu > 0:       |delta_plus| <= w0 sqrt(1/4 - mu^2 / w0^2)

whose mu -> 0 limit is w0/2, discontinuous against the undamped value 1
whenever w0 != 2.  The damping argument of the closed forms relates to
the equation coefficient by mu_eq = mu / w0^2 (same averaging).  A
fixed-step Runge-Kutta monodromy matrix provides the independent check of
these widths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .. import smallalg

FLOQUET_TOL = 1e-9


class OverdampedWindowClosed(ValueError):
    """mu / omega0 > 1/2 leaves no instability interval."""


@dataclass(frozen=True)
class CombResParams:
    Omega: float = 0.5  # rotation speed
    eps: float = 0.0  # forcing strength
    mu: float = 0.0  # damping in the closed-form normalization
    omega0: Optional[float] = None  # forcing frequency; default: detuned sum resonance
    delta_plus: float = 0.0  # sum detuning, closed-form units
    delta_minus: float = 0.0  # reserved: individual frequency detuning
    mu_plus: float = 0.0  # reserved: individual damping detuning
    mu_minus: float = 0.0

    def __post_init__(self):
        if self.eps < 0:
            raise ValueError("forcing strength must be non-negative")
        if self.mu < 0:
            raise ValueError("damping must be non-negative")

    @property
    def omega1(self) -> float:
        return math.hypot(self.Omega, 1.0) + self.Omega

    @property
    def omega2(self) -> float:
        return math.hypot(self.Omega, 1.0) - self.Omega

    @property
    def omega_sum(self) -> float:
        return self.omega1 + self.omega2

    @property
    def forcing_frequency(self) -> float:
        if self.omega0 is not None:
            return self.omega0
        ws = self.omega_sum
        if self.eps == 0.0:
            return ws
        return ws + self.eps * self.delta_plus / ws


@dataclass(frozen=True)
class PeriodicSystem:
    """First-order periodic system x'(t) = A(t) x."""

    matrix: Callable[[float], np.ndarray]
    period: float
    dim: int = 4


def build_combres(p: CombResParams) -> PeriodicSystem:
    """Periodic 4x4 system on the state (x, y, x', y')."""
    w = p.forcing_frequency
    om = p.Omega
    ws = p.omega_sum
    mu_eq = p.mu / ws**2  # closed-form damping to equation coefficient
    eps = p.eps
    damping = 2.0 * eps * mu_eq

    def matrix(t: float) -> np.ndarray:
        k = 1.0 + eps * math.cos(w * t)
        return np.array(
            [
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [-k, 0.0, -damping, 2.0 * om],
                [0.0, -k, -2.0 * om, -damping],
            ]
        )

    return PeriodicSystem(matrix=matrix, period=2.0 * math.pi / w)


@dataclass(frozen=True)
class ResonanceInterval:
    undamped_half_width: float  # 1 in the delta_plus normalization
    damped_half_width: float  # w0 sqrt(1/4 - mu^2/w0^2)
    damped_zero_damping_limit: float  # w0 / 2


def combres_interval(mu: float, omega0: float) -> ResonanceInterval:
    """Closed-form tongue half-widths in the delta_plus normalization.

    The two branches do not match as mu -> 0 unless omega0 = 2: the damped
    limit is omega0/2 while the undamped width is 1.
    """
    if mu < 0 or omega0 <= 0:
        raise ValueError("need mu >= 0 and omega0 > 0")
    if mu / omega0 > 0.5:
        raise OverdampedWindowClosed(
            f"mu/omega0 = {mu / omega0:.6g} > 1/2: instability interval is empty"
        )
    damped = omega0 * math.sqrt(0.25 - (mu / omega0) ** 2)
    return ResonanceInterval(
        undamped_half_width=1.0,
        damped_half_width=damped,
        damped_zero_damping_limit=0.5 * omega0,
    )


def monodromy(system: PeriodicSystem, steps: int = 2000):
    """Fundamental matrix over one period by fixed-step RK4, and its
    eigenvalues (the Floquet multipliers)."""
    if steps < 1000:
        raise ValueError("monodromy integration requires steps >= 1000")
    h = system.period / steps
    x = np.eye(system.dim)
    a = system.matrix
    for i in range(steps):
        t = i * h
        k1 = a(t) @ x
        k2 = a(t + 0.5 * h) @ (x + 0.5 * h * k1)
        k3 = a(t + 0.5 * h) @ (x + 0.5 * h * k2)
        k4 = a(t + h) @ (x + h * k3)
        x = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    multipliers = [v for v, _ in smallalg.matrix_eigen(x, tol=1e-12)]
    return x, multipliers


def floquet_unstable(system: PeriodicSystem, steps: int = 2000, tol: float = FLOQUET_TOL) -> bool:
    _, mult = monodromy(system, steps)
    return max(abs(m) for m in mult) > 1.0 + tol


def _growth(Omega, eps, mu, delta, steps):
    sys = build_combres(CombResParams(Omega=Omega, eps=eps, mu=mu, delta_plus=delta))
    _, mult = monodromy(sys, steps)
    return max(abs(m) for m in mult) - (1.0 + FLOQUET_TOL)


def floquet_interval(
    Omega: float,
    eps: float,
    mu: float,
    steps: int = 2000,
    tol: float = 1e-4,
) -> Tuple[float, float]:
    """Measured tongue endpoints in delta_plus by bisection on the largest
    Floquet multiplier crossing the unit circle."""
    if eps <= 0:
        raise ValueError("the tongue degenerates without forcing")
    if _growth(Omega, eps, mu, 0.0, steps) <= 0:
        raise OverdampedWindowClosed("no growth at exact resonance")
    endpoints = []
    for direction in (+1.0, -1.0):
        out = direction * 2.0
        for _ in range(12):
            if _growth(Omega, eps, mu, out, steps) < 0:
                break
            out *= 1.5
        lo, hi = 0.0, out
        while abs(hi - lo) > tol:
            mid = 0.5 * (lo + hi)
            if _growth(Omega, eps, mu, mid, steps) > 0:
                lo = mid
            else:
                hi = mid
        endpoints.append(0.5 * (lo + hi))
    return endpoints[1], endpoints[0]
