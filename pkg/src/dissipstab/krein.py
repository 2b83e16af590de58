"""Indefinite inner products, Krein signs, and collision scans.

A Hermitian Gram matrix W defines the product [u, u] = conj(u)^T W u.  For
an operator that is self-adjoint in this product, every eigenpair obeys
(lambda - conj(lambda)) [u, u] = 0, so eigenvectors of complex eigenvalues
are neutral ([u, u] = 0) and real eigenvalues carry a sign, the Krein sign
of the mode.  Two real eigenvalues of opposite sign can merge into a
defective pair and leave the real axis; scanning a one-parameter family
for such events locates these collisions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

import numpy as np

from . import smallalg
from .msystem import SpectrumEntry


class NotHermitian(ValueError):
    """Gram matrix must be Hermitian."""


_REAL_TOL = 1e-8  # |Im| below this (relative) counts as a real eigenvalue


@dataclass(frozen=True)
class IndefiniteMetric:
    """Hermitian Gram matrix together with its inertia."""

    gram: np.ndarray
    signature: Tuple[int, int, int] = field(init=False)  # (n+, n-, n0)

    def __post_init__(self):
        g = np.atleast_2d(np.asarray(self.gram, dtype=complex))
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise NotHermitian("Gram matrix must be square")
        scale = max(np.abs(g).max(), 1e-300)
        if np.abs(g - g.conj().T).max() > 1e-12 * scale:
            raise NotHermitian("Gram matrix is not Hermitian within 1e-12")
        g = 0.5 * (g + g.conj().T)
        g.setflags(write=False)
        object.__setattr__(self, "gram", g)
        w = np.linalg.eigvalsh(g)
        zero = 1e-12 * max(1.0, float(np.abs(w).max()))
        n_plus = int(np.sum(w > zero))
        n_minus = int(np.sum(w < -zero))
        n_zero = g.shape[0] - n_plus - n_minus
        object.__setattr__(self, "signature", (n_plus, n_minus, n_zero))

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    def product(self, u, v=None) -> complex:
        u = np.asarray(u, dtype=complex)
        v = u if v is None else np.asarray(v, dtype=complex)
        return complex(np.conj(v) @ (self.gram @ u))


def krein_sign(metric: IndefiniteMetric, u, lam: complex, tol: float = 1e-12) -> int:
    """Sign of [u, u] for a unit eigenvector u at eigenvalue lam.

    Returns 0 when |[u, u]| falls below 100 tol |W| (the product inherits
    the eigenpair error linearly), and 0 outright for non-real lam, where
    the self-adjointness identity forces neutrality.
    """
    u = np.asarray(u, dtype=complex)
    norm = np.linalg.norm(u)
    if abs(norm - 1.0) > 1e-8:
        raise ValueError("eigenvector must be normalized to unit length")
    lam = complex(lam)
    if abs(lam.imag) > _REAL_TOL * (1.0 + abs(lam)):
        return 0
    q = metric.product(u).real
    threshold = 100.0 * tol * max(np.linalg.norm(metric.gram, 2), 1e-300)
    if abs(q) <= threshold:
        return 0
    return 1 if q > 0 else -1


def negative_square_count(metric: IndefiniteMetric) -> int:
    """Number of negative squares (n-) of the Gram form.

    Bounds from above the number of complex-conjugate eigenvalue pairs of
    any operator that is self-adjoint in the metric.
    """
    return metric.signature[1]


@dataclass(frozen=True)
class KreinPoint:
    parameter: float
    entries: Tuple[SpectrumEntry, ...]


@dataclass(frozen=True)
class KreinPath:
    parameter_name: str
    grid: Tuple[float, ...]
    points: Tuple[KreinPoint, ...]

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        if g.size > 1 and not np.all(np.diff(g) > 0):
            raise ValueError("parameter grid must be strictly increasing")


@dataclass(frozen=True)
class CollisionEvent:
    """A clustered pair leaving or entering the real axis.

    ``bracket`` encloses the critical parameter, ``value`` is the collision
    eigenvalue (mean of the merging pair), ``kind`` is the transition in
    the direction of increasing parameter, and ``signs`` holds the Krein
    signs of the pair on its real side.
    """

    bracket: Tuple[float, float]
    value: complex
    kind: str  # "real_to_complex" or "complex_to_real"
    signs: Tuple[int, int]


def _point_data(family, t, tol):
    mat, metric = family(t)
    pairs = smallalg.matrix_eigen(np.asarray(mat, dtype=complex), tol=tol)
    return metric, pairs


def _complex_count(pairs) -> int:
    return sum(
        1 for v, _ in pairs if abs(v.imag) > _REAL_TOL * (1.0 + abs(v))
    )


def _entries_with_signs(metric, pairs, mat, tol):
    clusters = smallalg.cluster_values([v for v, _ in pairs], smallalg.DEFAULT_TOL)
    entries = []
    for center, mult in clusters:
        vec = min(pairs, key=lambda p: abs(p[0] - center))[1]
        geo = smallalg.geometric_multiplicity(mat, center, 1e-8) if mult > 1 else 1
        geo = max(1, min(geo, mult))
        sign = krein_sign(metric, vec, center, tol)
        if mult > 1 and geo < mult:
            sign = 0  # defective eigenvalue: the product vanishes
        entries.append(
            SpectrumEntry(
                value=complex(center),
                algebraic_multiplicity=mult,
                geometric_multiplicity=geo,
                vector=vec,
                krein_sign=sign,
            )
        )
    return tuple(entries)


def _closest_pairs(values, n_pairs):
    """Greedy matching of the n_pairs mutually closest value pairs."""
    values = list(values)
    out = []
    for _ in range(n_pairs):
        best = None
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                d = abs(values[i] - values[j])
                if best is None or d < best[0]:
                    best = (d, i, j)
        if best is None:
            break
        _, i, j = best
        out.append((values[i], values[j]))
        for k in sorted((i, j), reverse=True):
            del values[k]
    return out


def collision_scan(
    family: Callable[[float], tuple],
    grid: Sequence[float],
    parameter_name: str = "t",
    tol: float = 1e-12,
    refine_tol: float = 1e-10,
):
    """Walk a one-parameter family and locate Krein collisions.

    ``family(t)`` must return (matrix, IndefiniteMetric).  Each grid point
    yields the spectrum with Krein signs; brackets where the number of
    non-real eigenvalues changes are refined by bisection to ``refine_tol``
    in the parameter.  Returns (KreinPath, [CollisionEvent]).
    """
    grid = [float(t) for t in grid]
    points = []
    counts = []
    for t in grid:
        mat, metric = family(t)
        mat = np.asarray(mat, dtype=complex)
        pairs = smallalg.matrix_eigen(mat, tol=tol)
        points.append(
            KreinPoint(parameter=t, entries=_entries_with_signs(metric, pairs, mat, tol))
        )
        counts.append(_complex_count(pairs))
    path = KreinPath(parameter_name=parameter_name, grid=tuple(grid), points=tuple(points))

    events: List[CollisionEvent] = []
    for k in range(len(grid) - 1):
        if counts[k] == counts[k + 1]:
            continue
        lo, hi = grid[k], grid[k + 1]
        c_lo = counts[k]
        # bisect on the complex-eigenvalue count transition
        while hi - lo > refine_tol:
            mid = 0.5 * (lo + hi)
            _, pairs = _point_data(family, mid, tol)
            if _complex_count(pairs) == c_lo:
                lo = mid
            else:
                hi = mid
        n_pairs = abs(counts[k + 1] - counts[k]) // 2
        kind = "real_to_complex" if counts[k + 1] > counts[k] else "complex_to_real"
        # collision values from the refined point
        _, pairs_mid = _point_data(family, 0.5 * (lo + hi), tol)
        merged = _closest_pairs([v for v, _ in pairs_mid], n_pairs)
        # sign attribution needs a standoff on the real side: at the
        # collision itself the pair is defective and the product vanishes
        standoff = max(100.0 * refine_tol, 1e-6 * (1.0 + abs(hi)))
        standoff = min(standoff, 0.49 * (grid[k + 1] - grid[k]))
        t_signs = hi + standoff if kind == "complex_to_real" else lo - standoff
        mat, metric = family(t_signs)
        mat = np.asarray(mat, dtype=complex)
        pairs = smallalg.matrix_eigen(mat, tol=tol)
        real_vals = [
            (v, vec)
            for v, vec in pairs
            if abs(v.imag) <= _REAL_TOL * (1.0 + abs(v))
        ]
        sign_pairs = _closest_pairs([v for v, _ in real_vals], n_pairs)
        sign_pairs.sort(key=lambda p: (0.5 * (p[0] + p[1])).real)
        merged.sort(key=lambda p: (0.5 * (p[0] + p[1])).real)
        for (va, vb), signed in zip(merged, sign_pairs):
            sa = krein_sign(metric, _vec_for(real_vals, signed[0]), signed[0], tol)
            sb = krein_sign(metric, _vec_for(real_vals, signed[1]), signed[1], tol)
            events.append(
                CollisionEvent(
                    bracket=(lo, hi),
                    value=0.5 * (va + vb),
                    kind=kind,
                    signs=(sa, sb),
                )
            )
    return path, events


def _vec_for(pairs, value):
    return min(pairs, key=lambda p: abs(p[0] - value))[1]
