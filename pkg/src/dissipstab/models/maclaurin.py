"""Self-gravitating rotating spheroid of eccentricity e, in units pi G rho = 1.

Relative equilibrium ties the spin to the eccentricity,

    Omega^2(e) = 2 e^-3 (3 - 2 e^2) arcsin(e) sqrt(1 - e^2) - 6 e^-2 (1 - e^2),

and the ellipsoidal perturbation dynamics reduce to a two-dof system with
the profile coefficient

    b(e) = sqrt(1 - e^2) / (4 e^5) * [e (3 - 2 e^2) sqrt(1 - e^2)
                                      + (4 e^2 - 3) arcsin(e)].

Both expressions cancel catastrophically as e -> 0, so below E_SERIES_CUT
they are evaluated from their Taylor series (exact rational coefficients,
truncation error ~ e^18).

The inviscid pencil is lambda^2 I + lambda [[0, -4 Omega], [Omega, 0]]
+ (4b - 2 Omega^2) I with spectrum lambda = +-(i Omega +- i sqrt(4b -
Omega^2)): neutral until the secular point 4b = 2 Omega^2 (e ~= 0.8127,
where the stiffness turns negative and rotation takes over), then
gyroscopically stabilized until the dynamical point 4b = Omega^2
(e ~= 0.9529).  Viscosity adds 10 mu I to the damping and moves the
instability onset to the secular point no matter how small mu is;
radiative losses use the damping/circulatory blocks assembled in
``build_maclaurin`` with user-supplied pressure coefficients q1, q2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np

from ..msystem import MechanicalSystem, decompose, system_abscissa

E_SERIES_CUT = 0.2

# ascending even powers: coefficient of e^(2k) for k = 0, 1, ...
_OMEGA2_SERIES = (
    0.0,
    8.0 / 15.0,
    8.0 / 105.0,
    0.0,
    -64.0 / 3465.0,
    -1024.0 / 45045.0,
    -1024.0 / 45045.0,
    -16384.0 / 765765.0,
    -8192.0 / 415701.0,
)
_B_SERIES = (
    4.0 / 15.0,
    -8.0 / 105.0,
    -4.0 / 105.0,
    -16.0 / 693.0,
    -64.0 / 4095.0,
    -512.0 / 45045.0,
    -512.0 / 58905.0,
    -14336.0 / 2078505.0,
    -16384.0 / 2909907.0,
)

# spin at the dynamical-instability point, used in the damping-ratio bookkeeping
OMEGA0_DYNAMICAL = 0.663490


class BracketFailure(RuntimeError):
    """Bisection bracket does not change sign."""


class MissingRadiativeCoefficients(ValueError):
    """The radiative variant needs q1 and q2."""


Coefficient = Union[float, Callable[[float], float]]


@dataclass(frozen=True)
class MaclaurinParams:
    e: float  # meridional eccentricity
    mu: float = 0.0  # scaled viscosity, units of sqrt(pi G rho)
    delta: float = 0.0  # radiation-reaction coefficient
    q1: Optional[Coefficient] = None  # radiative pressure coefficients,
    q2: Optional[Coefficient] = None  # numbers or tabulated functions of e

    def __post_init__(self):
        if not 0.0 < self.e < 1.0:
            raise ValueError("eccentricity must lie in (0, 1)")
        if self.mu < 0 or self.delta < 0:
            raise ValueError("dissipation coefficients must be non-negative")

    @property
    def damping_ratio(self) -> float:
        """Viscous-to-radiative strength ratio X = 25 mu / (2 Omega0^4 delta)."""
        if self.delta == 0:
            return math.inf
        return 25.0 / (2.0 * OMEGA0_DYNAMICAL**4) * self.mu / self.delta


def _series(coeffs, e):
    e2 = e * e
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * e2 + c
    return acc


def maclaurin_profile(e: float):
    """(Omega^2, b) at eccentricity e, series-stabilized for small e."""
    if not 0.0 < e < 1.0:
        raise ValueError("eccentricity must lie in (0, 1)")
    if e < E_SERIES_CUT:
        return _series(_OMEGA2_SERIES, e), _series(_B_SERIES, e)
    s = math.sqrt(1.0 - e * e)
    asin = math.asin(e)
    omega2 = 2.0 * e**-3 * (3.0 - 2.0 * e * e) * asin * s - 6.0 * e**-2 * (1.0 - e * e)
    b = s / (4.0 * e**5) * (e * (3.0 - 2.0 * e * e) * s + (4.0 * e * e - 3.0) * asin)
    return omega2, b


def _bisect(f, lo, hi, tol):
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketFailure(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def maclaurin_criticals(tol: float = 1e-10):
    """(secular eccentricity, dynamical eccentricity).

    Roots of 4 b = 2 Omega^2 and 4 b = Omega^2 on (0.5, 0.999); the second
    equation also has the equivalent arcsine form exercised in the tests.
    """
    def f_secular(e):
        om2, b = maclaurin_profile(e)
        return 4.0 * b - 2.0 * om2

    def f_dynamical(e):
        om2, b = maclaurin_profile(e)
        return 4.0 * b - om2

    return _bisect(f_secular, 0.5, 0.999, tol), _bisect(f_dynamical, 0.5, 0.999, tol)


def riemann_sine_equation(e: float) -> float:
    """e - sin(e (3 + 4 e^2) sqrt(1 - e^2) / (3 + 2 e^2 - 4 e^4)); its root on
    (0.9, 0.99) coincides with the dynamical eccentricity."""
    return e - math.sin(
        e * (3.0 + 4.0 * e * e) * math.sqrt(1.0 - e * e) / (3.0 + 2.0 * e * e - 4.0 * e**4)
    )


def _resolve(coeff: Coefficient, e: float) -> float:
    return float(coeff(e)) if callable(coeff) else float(coeff)


def load_radiative_table(path) -> Callable[[float], float]:
    """Tabulated coefficient: two numeric columns, e and value, interpolated
    linearly (the file format for user-supplied radiative inputs)."""
    data = np.loadtxt(Path(path), dtype=float, ndmin=2)
    if data.shape[1] != 2:
        raise ValueError("radiative table must have exactly two columns")
    order = np.argsort(data[:, 0])
    e_nodes, values = data[order, 0], data[order, 1]

    def table(e: float) -> float:
        return float(np.interp(e, e_nodes, values))

    return table


def build_maclaurin(p: MaclaurinParams, variant: str = "inviscid") -> MechanicalSystem:
    """Two-dof reduction at eccentricity p.e.

    inviscid:  velocity block [[0, -4 Omega], [Omega, 0]] (split into its
               gyroscopic and symmetric parts), stiffness (4b - 2 Omega^2) I.
    viscous:   adds 10 mu I to the damping.
    radiative: gyroscopic (5/2)[[0, -Omega], [Omega, 0]], damping
               [[16 delta Omega^2 (6b - Omega^2), -3 Omega/2], [... sym]],
               stiffness (4b - Omega^2) I, positional block
               delta [[2 q1, 2 q2], [-q2/2, 2 q1]].
    """
    om2, b = maclaurin_profile(p.e)
    om = math.sqrt(max(om2, 0.0))
    if variant == "inviscid":
        B = np.array([[0.0, -4.0 * om], [om, 0.0]])
        A = (4.0 * b - 2.0 * om2) * np.eye(2)
    elif variant == "viscous":
        B = np.array([[10.0 * p.mu, -4.0 * om], [om, 10.0 * p.mu]])
        A = (4.0 * b - 2.0 * om2) * np.eye(2)
    elif variant == "radiative":
        if p.q1 is None or p.q2 is None:
            raise MissingRadiativeCoefficients(
                "radiative variant requires q1 and q2 (numbers or tables)"
            )
        q1 = _resolve(p.q1, p.e)
        q2 = _resolve(p.q2, p.e)
        d = 16.0 * p.delta * om2 * (6.0 * b - om2)
        G = 2.5 * np.array([[0.0, -om], [om, 0.0]])
        D = np.array([[d, -1.5 * om], [-1.5 * om, d]])
        K = (4.0 * b - om2) * np.eye(2)
        N = p.delta * np.array([[2.0 * q1, 2.0 * q2], [-0.5 * q2, 2.0 * q1]])
        B = G + D
        A = K + N
    else:
        raise ValueError(f"unknown variant {variant!r}")
    sys = decompose(A, B)
    return MechanicalSystem(
        M=sys.M, D=sys.D, G=sys.G, K=sys.K, N=sys.N, labels=("xi1", "xi2")
    )


def viscous_onset(mu: float, bracket=(0.7, 0.999), tol: float = 1e-8) -> float:
    """Smallest eccentricity where the viscous spheroid starts to grow.

    For mu > 0 this is the exact abscissa sign change; at mu = 0 the
    marginal spectrum rests at zero, so the onset is read against a small
    positive level instead.
    """
    if mu < 0:
        raise ValueError("viscosity must be non-negative")
    level = 0.0 if mu > 0 else 1e-9

    def absc(e):
        return system_abscissa(
            build_maclaurin(
                MaclaurinParams(e=e, mu=mu), "viscous" if mu > 0 else "inviscid"
            )
        ) - level

    return _bisect(absc, bracket[0], bracket[1], tol)


def maclaurin_family(variant: str = "viscous"):
    """(eps, load) -> system with viscosity eps at eccentricity load."""

    def family(eps: float, load: float) -> MechanicalSystem:
        if eps == 0.0:
            return build_maclaurin(MaclaurinParams(e=load), "inviscid")
        return build_maclaurin(MaclaurinParams(e=load, mu=eps), variant)

    return family


def maclaurin_krein_family():
    """e -> (matrix, metric) family for signature scans of the inviscid flow.

    Rescaling the second coordinate by 1/2 turns the velocity block into a
    true gyroscopic matrix, after which diag(K, I) on the phase space makes
    -i times the first-order companion self-adjoint.  Inside the
    gyroscopically stabilized window the stiffness is negative definite, so
    the metric carries two negative squares and the four real frequencies
    split into signed pairs that merge at the dynamical point.
    """
    from ..krein import IndefiniteMetric

    def family(e: float):
        om2, b = maclaurin_profile(float(e))
        om = math.sqrt(max(om2, 0.0))
        kappa = 4.0 * b - 2.0 * om2
        comp = np.zeros((4, 4))
        comp[:2, 2:] = np.eye(2)
        comp[2:, :2] = -kappa * np.eye(2)
        comp[2:, 2:] = -np.array([[0.0, -2.0 * om], [2.0 * om, 0.0]])
        gram = np.diag([kappa, kappa, 1.0, 1.0])
        return -1j * comp, IndefiniteMetric(gram=gram)

    return family
