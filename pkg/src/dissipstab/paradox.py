"""Destabilization-paradox calculators.

For a two-dof system with M = I, G = 0, stiffness K and a damping ray
D(eps) = eps D', the circulatory load nu that the undamped system tolerates,

    nu0^2 = (tr K / 2)^2 - det K,

drops discontinuously once damping is present: the vanishing-damping limit
is

    nucr^2 = nu0^2 - [(2 tr(K D') - tr K tr D') / (2 tr D')]^2,

which depends only on the direction of the damping ray.  The bracketed
correction is a perfect square, so nucr <= nu0 always, with equality
exactly on the rays with 2 tr(K D') = tr K tr D'.  Expanding to first
order in the correction gives the local umbrella model

    nucr(d1, d2) ~= nu0 - (1 / (2 nu0)) [(alpha . d) / (beta . d)]^2

over a two-parameter damping family D(d) = d1 D1 + d2 D2, a
degree-zero-homogeneous surface whose level sets are rays through the
origin.

The generic scanner measures the same discontinuity dynamically: it
bisects the instability onset of a damped model family for a decreasing
sequence of damping scales and extrapolates the eps -> 0 limit, which in
the paradoxical situations stays a finite distance below the undamped
threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .msystem import MechanicalSystem, system_abscissa

UNDAMPED_ONSET_LEVEL = 1e-9  # marginal spectra sit at abscissa 0 up to noise


class NegativeRadicand(ValueError):
    """K admits no circulatory flutter threshold (nu0^2 < 0)."""


class NoOnsetFound(RuntimeError):
    """Abscissa does not change sign over the given load range."""


def _check_sym2(name, m):
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.shape != (2, 2):
        raise ValueError(f"{name} must be 2x2")
    if abs(m[0, 1] - m[1, 0]) > 1e-12 * (1.0 + np.abs(m).max()):
        raise ValueError(f"{name} must be symmetric")
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class ParadoxReport:
    nu0: float
    nucr: float  # nan when the damped window is empty (nucr^2 < 0)
    gap: float  # nu0^2 - nucr^2, the squared-threshold drop
    direction: np.ndarray  # damping ray, trace-normalized
    formula_terms: dict
    nu0_sq: float = 0.0
    nucr_sq: float = 0.0


def circulatory_thresholds(K, Dray) -> ParadoxReport:
    """Undamped and vanishing-damping circulatory thresholds for one ray.

    The ray is trace-normalized first; both thresholds depend only on its
    direction.
    """
    K = _check_sym2("K", K)
    Dray = _check_sym2("Dray", Dray)
    tr_d = float(np.trace(Dray))
    if tr_d <= 0:
        raise ValueError("damping ray must have positive trace")
    Dray = Dray / tr_d
    tr_k = float(np.trace(K))
    nu0_sq = (tr_k / 2.0) ** 2 - float(np.linalg.det(K))
    if nu0_sq < 0:
        raise NegativeRadicand(
            "no flutter window: (tr K / 2)^2 < det K leaves no circulatory threshold"
        )
    tr_kd = float(np.trace(K @ Dray))
    correction = (2.0 * tr_kd - tr_k * 1.0) / 2.0  # tr Dray = 1 after scaling
    nucr_sq = nu0_sq - correction * correction
    nu0 = math.sqrt(nu0_sq)
    nucr = math.sqrt(nucr_sq) if nucr_sq >= 0 else math.nan
    return ParadoxReport(
        nu0=nu0,
        nucr=nucr,
        gap=nu0_sq - nucr_sq,
        direction=Dray,
        formula_terms={"tr_K": tr_k, "tr_D": 1.0, "tr_KD": tr_kd},
        nu0_sq=nu0_sq,
        nucr_sq=nucr_sq,
    )


def finite_damping_threshold(k11: float, k22: float, D) -> float:
    """Squared circulatory threshold at finite damping, diagonal stiffness.

    For K = diag(k11, k22) with positive entries and full symmetric damping
    D, stability holds for

        nu^2 < (k11 - k22)^2 / 4
               - [(d11 - d22)^2 (k11 - k22)^2
                  - 4 (k11 d22 + k22 d11)(d11 d22 - d12^2)(d11 + d22)]
                 / (4 (d11 + d22)^2),

    which coincides with the neutral level solved from H = 0.  Scaling D by
    eps and letting eps -> 0 recovers the vanishing-damping limit of
    ``circulatory_thresholds``; the d12 term only matters at finite eps.
    """
    if k11 <= 0 or k22 <= 0:
        raise ValueError("diagonal stiffness entries must be positive")
    D = _check_sym2("D", D)
    d11, d22, d12 = D[0, 0], D[1, 1], D[0, 1]
    if d11 + d22 <= 0:
        raise ValueError("damping must have positive trace")
    return (k11 - k22) ** 2 / 4.0 - (
        (d11 - d22) ** 2 * (k11 - k22) ** 2
        - 4.0 * (k11 * d22 + k22 * d11) * (d11 * d22 - d12 * d12) * (d11 + d22)
    ) / (4.0 * (d11 + d22) ** 2)


@dataclass(frozen=True)
class UmbrellaApproximation:
    """First-order threshold surface over a two-parameter damping family.

    ``alpha`` and ``beta`` are the coefficients of the linear forms whose
    squared ratio corrects nu0; the correction is homogeneous of degree
    zero, so nucr is constant along every damping ray.
    """

    nu0: float
    alpha: Tuple[float, float]
    beta: Tuple[float, float]

    def correction(self, d1: float, d2: float) -> float:
        num = self.alpha[0] * d1 + self.alpha[1] * d2
        den = self.beta[0] * d1 + self.beta[1] * d2
        if den == 0:
            raise ZeroDivisionError("damping direction has zero trace")
        return (num / den) ** 2

    def __call__(self, d1: float, d2: float) -> float:
        return self.nu0 - self.correction(d1, d2) / (2.0 * self.nu0)

    def samples(self, rays: Sequence[Tuple[float, float]], scales=(0.5, 1.0, 2.0)):
        """nucr on each ray at several scales; constant rows certify rays."""
        return [
            [(s * d1, s * d2, self(s * d1, s * d2)) for s in scales]
            for d1, d2 in rays
        ]


def umbrella_approximation(K, Dbasis) -> UmbrellaApproximation:
    """Local umbrella model of nucr over D(d) = d1 D1 + d2 D2."""
    K = _check_sym2("K", K)
    D1 = _check_sym2("D1", Dbasis[0])
    D2 = _check_sym2("D2", Dbasis[1])
    tr_k = float(np.trace(K))
    nu0_sq = (tr_k / 2.0) ** 2 - float(np.linalg.det(K))
    if nu0_sq <= 0:
        raise NegativeRadicand("umbrella approximation needs nu0 > 0")
    alpha = tuple(
        2.0 * float(np.trace(K @ D)) - tr_k * float(np.trace(D)) for D in (D1, D2)
    )
    beta = tuple(2.0 * float(np.trace(D)) for D in (D1, D2))
    return UmbrellaApproximation(nu0=math.sqrt(nu0_sq), alpha=alpha, beta=beta)


def onset_search(
    abscissa: Callable[[float], float],
    lo: float,
    hi: float,
    level: float = 0.0,
    bisect_tol: float = 1e-8,
    coarse: int = 64,
):
    """All crossings of ``abscissa(load) = level`` on [lo, hi].

    A coarse scan brackets every sign change, then each bracket is bisected
    to ``bisect_tol``.  Raises NoOnsetFound when no crossing exists.
    """
    loads = np.linspace(lo, hi, coarse)
    vals = [abscissa(x) - level for x in loads]
    onsets = []
    for k in range(coarse - 1):
        if vals[k] == 0.0:
            onsets.append(float(loads[k]))
            continue
        if vals[k] * vals[k + 1] < 0:
            a, b = float(loads[k]), float(loads[k + 1])
            fa = vals[k]
            while b - a > bisect_tol:
                mid = 0.5 * (a + b)
                fm = abscissa(mid) - level
                if fa * fm <= 0:
                    b = mid
                else:
                    a, fa = mid, fm
            onsets.append(0.5 * (a + b))
    if not onsets:
        raise NoOnsetFound(
            f"abscissa does not cross level {level} on [{lo}, {hi}]"
        )
    return onsets


def _richardson(rows):
    """Power-law extrapolation of the last three (eps, onset) rows to eps -> 0.

    Fits onset = L + c eps^p for eps ratios r = eps1/eps2 = eps2/eps3; with
    unequal or degenerate differences it falls back to the smallest-eps
    value.
    """
    (e1, v1), (e2, v2), (e3, v3) = rows[-3:]
    d1, d2 = v1 - v2, v2 - v3
    if d2 == 0 or d1 * d2 <= 0:
        return v3
    r12, r23 = e1 / e2, e2 / e3
    if abs(math.log(r12) - math.log(r23)) > 1e-9:
        return v3
    p = math.log(d1 / d2) / math.log(r12)
    if p <= 0:
        return v3
    return v3 - d2 / (r12**p - 1.0)


@dataclass(frozen=True)
class VanishingDampingScan:
    rows: Tuple[Tuple[float, float], ...]  # (eps, onset), eps decreasing
    limit: float  # Richardson extrapolation of the eps > 0 branch
    raw_limit: float  # onset at the smallest eps
    undamped_onset: float  # onset at eps = 0 exactly
    gap: float  # undamped_onset - limit
    warnings: Tuple[str, ...] = ()


def vanishing_damping_scan(
    family: Callable[[float, float], MechanicalSystem],
    load_range: Tuple[float, float],
    eps_list: Sequence[float],
    bisect_tol: float = 1e-8,
) -> VanishingDampingScan:
    """Instability onsets of ``family(eps, load)`` for shrinking damping.

    Damped systems are bisected on the exact abscissa sign change; the
    undamped onset uses a small positive level because marginal spectra
    rest at zero up to rounding.  The extrapolated limit documents the
    eps > 0 branch only; in the paradoxical cases it differs from the
    undamped onset by a finite gap.
    """
    eps_list = [float(e) for e in eps_list]
    if any(e <= 0 for e in eps_list):
        raise ValueError("eps_list must be positive (the eps = 0 onset is computed separately)")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    lo, hi = float(load_range[0]), float(load_range[1])
    warnings: List[str] = []
    rows = []
    for eps in eps_list:
        onsets = onset_search(
            lambda load: system_abscissa(family(eps, load)), lo, hi, 0.0, bisect_tol
        )
        if len(onsets) > 1:
            warnings.append(
                f"eps={eps:g}: {len(onsets)} crossings, using the first"
            )
        rows.append((eps, onsets[0]))
    undamped = onset_search(
        lambda load: system_abscissa(family(0.0, load)),
        lo,
        hi,
        UNDAMPED_ONSET_LEVEL,
        bisect_tol,
    )
    if len(undamped) > 1:
        warnings.append(f"eps=0: {len(undamped)} crossings, using the first")
    limit = _richardson(rows) if len(rows) >= 3 else rows[-1][1]
    return VanishingDampingScan(
        rows=tuple(rows),
        limit=limit,
        raw_limit=rows[-1][1],
        undamped_onset=undamped[0],
        gap=undamped[0] - limit,
        warnings=tuple(warnings),
    )
