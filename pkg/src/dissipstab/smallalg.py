"""Dense spectral kernels for small problems.

Complex polynomial root finding (Aberth-Ehrlich simultaneous iteration with
a companion-matrix fallback) and eigen-decomposition of small dense
matrices.  Sized for characteristic polynomials of few-degree-of-freedom
systems: degree <= 16, matrix dimension <= 8.  Complex arithmetic is used
throughout; for real coefficient input the root multiset is re-symmetrized
under conjugation before multiplicities are assigned.
"""

from __future__ import annotations

import cmath

import numpy as np

DEFAULT_TOL = 1e-12
ITERATION_CAP = 500
MAX_DEGREE = 16
MAX_DIM = 8


class NonConvergence(RuntimeError):
    """Iteration exceeded its cap; ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DegenerateInput(ValueError):
    """Input outside the kernel domain (zero polynomial, bad dimensions)."""


class Poly:
    """Polynomial with coefficients in ascending order: coeffs[k] * x**k.

    The stored degree is the index of the last exactly-nonzero coefficient;
    trailing zeros are trimmed on construction.  ``monic()`` divides through
    by the leading coefficient, which preserves roots exactly.
    """

    __slots__ = ("coeffs", "is_real")

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel()
        if c.size == 0 or not np.any(c != 0):
            raise DegenerateInput("zero polynomial has no defined roots")
        last = int(np.max(np.nonzero(c != 0)[0]))
        self.coeffs = c[: last + 1].copy()
        self.coeffs.setflags(write=False)
        self.is_real = bool(np.all(self.coeffs.imag == 0.0))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def monic(self) -> "Poly":
        return Poly(self.coeffs / self.coeffs[-1])

    def deriv(self) -> "Poly":
        if self.degree == 0:
            raise DegenerateInput("derivative of a constant is the zero polynomial")
        k = np.arange(1, self.coeffs.size)
        return Poly(self.coeffs[1:] * k)

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        return cls(np.polynomial.polynomial.polyfromroots(roots))

    def __repr__(self):
        return f"Poly({np.array2string(self.coeffs, separator=', ')})"


def _horner(c, z):
    """Value and derivative at z for ascending coefficients c (python scalars)."""
    p = 0j
    dp = 0j
    for a in reversed(c):
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _aberth(c, tol, cap):
    """Simultaneous root iteration for a monic polynomial, c ascending.

    Returns (roots, converged).  Requires degree >= 1 and c[0] != 0 (zero
    roots are deflated by the caller).
    """
    n = len(c) - 1
    upper = 1.0 + max(abs(a) for a in c[:-1])
    lower = abs(c[0]) / (1.0 + max(abs(a) for a in c[1:]))
    radius = max(np.sqrt(upper * lower), 1e-30)
    # staggered start: irrational-ish phase offset breaks coefficient symmetry
    z = [
        radius * cmath.exp(2j * np.pi * (k + 0.25) / n + 0.45j)
        for k in range(n)
    ]
    for _ in range(cap):
        converged = True
        for i in range(n):
            zi = z[i]
            p, dp = _horner(c, zi)
            if p == 0:
                continue
            w = p / dp if dp != 0 else p
            s = 0j
            for j in range(n):
                if j == i:
                    continue
                dz = zi - z[j]
                if dz == 0:
                    dz = 1e-30 * (1.0 + abs(zi))
                s += 1.0 / dz
            denom = 1.0 - w * s
            step = w / denom if denom != 0 else w
            z[i] = zi - step
            if abs(step) > tol * (1.0 + abs(zi)):
                converged = False
        if converged:
            return z, True
    return z, False


def companion_matrix(p: Poly) -> np.ndarray:
    """Companion matrix of a polynomial (monic normalization applied)."""
    c = p.monic().coeffs
    n = p.degree
    if n < 1:
        raise DegenerateInput("companion matrix needs degree >= 1")
    m = np.zeros((n, n), dtype=complex)
    m[1:, :-1] = np.eye(n - 1)
    m[:, -1] = -c[:-1]
    return m


def _enforce_conjugacy(roots, tol):
    """Symmetrize a root list of a real polynomial under conjugation."""
    snap = 100.0 * tol
    order = sorted(range(len(roots)), key=lambda i: -abs(roots[i].imag))
    used = [False] * len(roots)
    out = []
    for i in order:
        if used[i]:
            continue
        zi = roots[i]
        used[i] = True
        if abs(zi.imag) <= snap * (1.0 + abs(zi)):
            out.append(complex(zi.real, 0.0))
            continue
        best, best_d = None, None
        for j in order:
            if used[j]:
                continue
            d = abs(roots[j] - zi.conjugate())
            if best_d is None or d < best_d:
                best, best_d = j, d
        if best is None:
            out.append(zi)  # cannot happen for true real input
            continue
        used[best] = True
        w = 0.5 * (zi + roots[best].conjugate())
        out.extend([w, w.conjugate()])
    return out


def _components(values, radius):
    """Connected components of values linked at the given distance."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(values[i])
    return list(groups.values())


def _split_cluster(values, tol):
    """Recursively split a candidate cluster at its own-size radius.

    A group of m values counts as one m-fold root when it stays connected
    at radius tol**(1/m): an m-fold root responds to an O(eps) coefficient
    perturbation with an O(eps**(1/m)) spread, so tighter groupings split.
    """
    m = len(values)
    if m == 1:
        return [values]
    center = sum(values) / m
    radius = tol ** (1.0 / m) * (1.0 + abs(center))
    parts = _components(values, radius)
    if len(parts) == 1:
        return [values]
    out = []
    for part in parts:
        out.extend(_split_cluster(part, tol))
    return out


def cluster_values(values, tol=DEFAULT_TOL):
    """Group numerically coincident values into (center, multiplicity) pairs.

    Starts from connected components at the whole-set radius and splits
    recursively (see ``_split_cluster``).  Values within a multiple root's
    theoretical perturbation disk are not resolvable and merge.
    """
    values = [complex(v) for v in values]
    if not values:
        return []
    clusters = []
    for part in _components(values, tol ** (1.0 / len(values)) * (1.0 + max(abs(v) for v in values))):
        clusters.extend(_split_cluster(part, tol))
    out = []
    for cl in clusters:
        center = sum(cl) / len(cl)
        out.append((center, len(cl)))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out


def poly_roots(p: Poly, tol: float = DEFAULT_TOL):
    """All roots of p with multiplicities, as a list of (root, count).

    Aberth-Ehrlich iteration on the monic normalization; on non-convergence
    the roots are recomputed from the companion matrix.  Multiplicities are
    assigned by clustering (see ``cluster_values``).

    Raises NonConvergence only if both the iteration and the fallback fail;
    the exception carries the best available iterate.
    """
    if not isinstance(p, Poly):
        p = Poly(p)
    if tol <= 0:
        raise DegenerateInput("tol must be positive")
    if p.degree < 1:
        raise DegenerateInput("degree must be at least 1")
    if p.degree > MAX_DEGREE:
        raise DegenerateInput(f"degree {p.degree} exceeds the kernel cap {MAX_DEGREE}")
    c = p.monic().coeffs
    nzero = int(np.min(np.nonzero(c != 0)[0]))  # multiplicity of the root 0
    c = c[nzero:]
    n = len(c) - 1
    roots = []
    if n == 1:
        roots = [complex(-c[0] / c[1])]
    elif n == 2:
        # quadratic via the cancellation-safe split
        b, a0 = complex(c[1]), complex(c[0])
        disc = cmath.sqrt(b * b - 4.0 * a0)
        q = -(b + disc) / 2.0 if abs(b + disc) >= abs(b - disc) else -(b - disc) / 2.0
        if q == 0:
            roots = [0j, -b]
        else:
            roots = [q, a0 / q]
    elif n >= 3:
        iterate, ok = _aberth([complex(a) for a in c], tol, ITERATION_CAP)
        if ok:
            roots = iterate
        else:
            try:
                roots = list(np.linalg.eigvals(companion_matrix(Poly(c))))
            except np.linalg.LinAlgError as exc:
                raise NonConvergence(
                    "root iteration exceeded its cap and the companion "
                    "fallback failed",
                    best=iterate,
                ) from exc
    if p.is_real:
        roots = _enforce_conjugacy(roots, tol)
    roots = [0j] * nzero + roots
    return cluster_values(roots, tol)


def _as_small_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DegenerateInput("matrix must be square")
    if m.shape[0] > MAX_DIM:
        raise DegenerateInput(f"dimension {m.shape[0]} exceeds the kernel cap {MAX_DIM}")
    return m


def matrix_eigen(a, tol: float = DEFAULT_TOL):
    """Eigenpairs of a small dense matrix as a list of (value, vector).

    Vectors are unit Euclidean norm.  Values belonging to one numerical
    cluster are snapped to the cluster mean, so repeated eigenvalues are
    reported with literally repeated values.  Pairs are sorted by
    (Re, Im) of the value.  Each pair satisfies the residual bound
    ``|A v - lambda v| <= max(tol, 100 eps) |A|``.
    """
    m = _as_small_matrix(a)
    n = m.shape[0]
    values, vectors = np.linalg.eig(m)
    scale = np.linalg.norm(m, 2)
    # floor keeps the defensive check above the backward-stable residual
    # level that dense eigensolvers actually deliver
    bound = max(tol, 1e4 * np.finfo(float).eps) * max(scale, 1e-300)
    for k in range(n):
        v = vectors[:, k]
        nv = np.linalg.norm(v)
        v = v / nv
        vectors[:, k] = v
        res = np.linalg.norm(m @ v - values[k] * v)
        if res > bound:
            raise NonConvergence(
                f"eigenpair residual {res:.3e} exceeds bound {bound:.3e}",
                best=(values, vectors),
            )
    clusters = cluster_values(values, tol)
    # snap each value to the center of the cluster it belongs to
    snapped = values.copy()
    for k in range(n):
        best = min(clusters, key=lambda cl: abs(cl[0] - values[k]))
        snapped[k] = best[0]
    pairs = [(complex(snapped[k]), vectors[:, k].copy()) for k in range(n)]
    pairs.sort(key=lambda t: (t[0].real, t[0].imag))
    return pairs


def geometric_multiplicity(a, lam: complex, tol: float = 1e-8) -> int:
    """Dimension of the eigenspace of ``a`` at ``lam`` via the rank of A - lam I."""
    m = _as_small_matrix(a)
    n = m.shape[0]
    scale = np.linalg.norm(m, 2) + abs(lam)
    rank = np.linalg.matrix_rank(m - lam * np.eye(n), tol=tol * max(scale, 1.0))
    return n - int(rank)
