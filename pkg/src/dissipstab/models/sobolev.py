"""Spinning top with an ellipsoidal fluid-filled cavity, reduced 3x3 model.

The cavity is a solid of revolution with semiaxes (a, a, c) filled with
ideal incompressible fluid of density rho; the only fluid motions that
couple to the shell span one complex degree of freedom, leaving the state
x = (Z, W, xi).  With shell constants A1, C1, M1, l1, l2 and spin Omega,
the reduced evolution is dx/dt = i Omega B x with B = Ainv * C,

    A = diag(1, A1 + l2^2 M2 + (4 pi rho / 15) a^2 c (c^2-a^2)^2/(c^2+a^2),
             c^2 + a^2)
    C = [[0, 1, 0],
         [L, C1 - 2 A1 - 2 l2^2 M2 - (8 pi rho/15) a^2 c^3 m^2,
             -(8 pi rho/15) a^4 c^3 m^2],
         [0, -2, -2 a^2]],   m = (c^2 - a^2)/(c^2 + a^2),

where L = C1 + C2 - A1 - A2 - K/Omega^2 and K = g (l1 M1 + l2 M2) with the
fluid moments C2 = (8 pi rho/15) a^4 c and A2 = l2^2 M2 + (4 pi rho/15)
a^2 c (a^2 + c^2).  B is self-adjoint in the metric

    W = diag(L, A_22, (4 pi rho/15) a^4 c^3 (c^2-a^2)^2/(c^2+a^2)),

definite for L > 0 (all eigenvalues real, stable rotation) and carrying
one negative square for L < 0, which admits at most one complex pair.

For the massless shell (A1 = C1 = M1 = l2 = 0) the density cancels and the
spectrum is available in closed form: lambda1 = -1 together with

    lambda2 = -1/2 +- (1/2) sqrt(1 + 8 a^2 / (a^2 - c^2)),

complex exactly on the classical instability band a < c < 3a, with the
pair colliding into a defective double eigenvalue -1/2 at c = 3a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..krein import IndefiniteMetric


class SingularA(np.linalg.LinAlgError):
    """The inertia-like matrix A of the reduction is singular."""


@dataclass(frozen=True)
class SobolevParams:
    a: float = 1.0  # equatorial cavity semiaxis
    c: float = 2.0  # polar cavity semiaxis
    rho: float = 1.0  # fluid density
    A1: float = 0.0  # shell transverse moment of inertia
    C1: float = 0.0  # shell axial moment of inertia
    M1: float = 0.0  # shell mass
    l1: float = 0.0  # fixed point to shell mass center
    l2: float = 0.0  # fixed point to fluid mass center
    M2: Optional[float] = None  # fluid mass; cavity volume default
    g: float = 1.0  # gravity
    Omega: float = 1.0  # spin

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0 or self.rho <= 0:
            raise ValueError("a, c, rho must be positive")
        if self.M2 is None:
            object.__setattr__(
                self, "M2", 4.0 / 3.0 * math.pi * self.rho * self.a**2 * self.c
            )

    @property
    def C2(self) -> float:
        return 8.0 * math.pi * self.rho / 15.0 * self.a**4 * self.c

    @property
    def A2(self) -> float:
        return self.l2**2 * self.M2 + 4.0 * math.pi * self.rho / 15.0 * self.a**2 * self.c * (
            self.a**2 + self.c**2
        )

    @property
    def Kconst(self) -> float:
        return self.g * (self.l1 * self.M1 + self.l2 * self.M2)

    @property
    def L(self) -> float:
        return self.C1 + self.C2 - self.A1 - self.A2 - self.Kconst / self.Omega**2

    @property
    def m(self) -> float:
        return (self.c**2 - self.a**2) / (self.c**2 + self.a**2)


def build_sobolev(p: SobolevParams):
    """(B, metric) of the reduced model; B is self-adjoint in the metric."""
    a, c, rho = p.a, p.c, p.rho
    m = p.m
    coupling = 4.0 * math.pi * rho / 15.0 * a**2 * c * (c**2 - a**2) ** 2 / (c**2 + a**2)
    a22 = p.A1 + p.l2**2 * p.M2 + coupling
    A = np.diag([1.0, a22, c**2 + a**2])
    C = np.array(
        [
            [0.0, 1.0, 0.0],
            [
                p.L,
                p.C1 - 2.0 * p.A1 - 2.0 * p.l2**2 * p.M2
                - 8.0 * math.pi * rho / 15.0 * a**2 * c**3 * m**2,
                -8.0 * math.pi * rho / 15.0 * a**4 * c**3 * m**2,
            ],
            [0.0, -2.0, -2.0 * a**2],
        ]
    )
    det = np.prod(np.diag(A))
    if abs(det) <= 1e-14 * max(1.0, np.abs(A).max()) ** 3:
        raise SingularA(f"reduction matrix A is singular for a={a}, c={c}")
    B = np.linalg.solve(A, C)
    gram = np.diag(
        [p.L, a22, 4.0 * math.pi * rho / 15.0 * a**4 * c**3 * (c**2 - a**2) ** 2 / (c**2 + a**2)]
    )
    return B, IndefiniteMetric(gram=gram)


def sobolev_massless_spectrum(a: float, c: float):
    """Closed-form eigenvalues (lambda1, lambda2+, lambda2-) of the massless
    shell; density-free."""
    if a <= 0 or c <= 0:
        raise ValueError("semiaxes must be positive")
    if c == a:
        raise ValueError("the massless reduction degenerates at c = a")
    radicand = 1.0 + 8.0 * a * a / (a * a - c * c)
    root = complex(radicand) ** 0.5
    return (-1.0 + 0.0j, -0.5 + 0.5 * root, -0.5 - 0.5 * root)


def greenhill_band(a: float):
    """The instability band of polar semiaxes for equatorial semiaxis a."""
    return (a, 3.0 * a)


def sobolev_family(params: SobolevParams = SobolevParams()):
    """c -> (B, metric) family for collision scans at fixed shell constants."""

    def family(c: float):
        # M2 is left at its volume default so the fluid mass tracks c
        return build_sobolev(
            SobolevParams(
                a=params.a,
                c=float(c),
                rho=params.rho,
                A1=params.A1,
                C1=params.C1,
                M1=params.M1,
                l1=params.l1,
                l2=params.l2,
                g=params.g,
                Omega=params.Omega,
            )
        )

    return family
