"""Second-order linear systems M q'' + B q' + A q = 0.

The velocity and positional matrices are stored through their unique
symmetric/antisymmetric splits A = K + N and B = D + G:

    K  symmetric potential (stiffness)
    N  antisymmetric circulatory, off-diagonal ``nu`` for n = 2
    D  symmetric damping
    G  antisymmetric gyroscopic, off-diagonal ``Omega`` for n = 2

For n = 2 mass-normalized systems the characteristic polynomial
lambda^4 + a1 lambda^3 + a2 lambda^2 + a3 lambda + a4 has the invariant
coefficients

    a1 = tr D
    a2 = tr K + det D + Omega^2
    a3 = tr K tr D - tr(K D) + 2 Omega nu
    a4 = det K + nu^2

Spectra of general systems (n <= 4) come from the first-order block
companion [[0, I], [-A, -B]] acting on (q, q'), whose eigenvectors carry
the quadratic-pencil eigenvector in their upper block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import smallalg
from .smallalg import Poly

MAX_DOF = 4


class NotPositiveDefinite(ValueError):
    """Mass matrix failed the positive-definiteness check."""


class DimensionMismatch(ValueError):
    """Operation requires a different block dimension."""


def _sym(a):
    return 0.5 * (a + a.T)


def _antisym(a):
    return 0.5 * (a - a.T)


def _check_spd(m):
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * (1.0 + np.abs(m).max())):
        raise NotPositiveDefinite("mass matrix must be symmetric")
    try:
        np.linalg.cholesky(_sym(m))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("mass matrix is not positive definite") from exc


def _frozen(a):
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MechanicalSystem:
    """Immutable container for the five real blocks of a second-order system.

    Construction symmetrizes/antisymmetrizes the blocks so the class
    residuals are exactly zero, and verifies that M is symmetric positive
    definite.
    """

    M: np.ndarray
    D: np.ndarray
    G: np.ndarray
    K: np.ndarray
    N: np.ndarray
    labels: Optional[tuple] = None

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.M, dtype=float))
        n = m.shape[0]
        if m.shape != (n, n) or n > MAX_DOF:
            raise DimensionMismatch(f"mass matrix must be square with n <= {MAX_DOF}")
        _check_spd(m)
        blocks = {}
        for name, symm in (("D", True), ("K", True), ("G", False), ("N", False)):
            a = np.atleast_2d(np.asarray(getattr(self, name), dtype=float))
            if a.shape != (n, n):
                raise DimensionMismatch(f"block {name} must be {n}x{n}")
            blocks[name] = _sym(a) if symm else _antisym(a)
        object.__setattr__(self, "M", _frozen(m))
        for name, a in blocks.items():
            object.__setattr__(self, name, _frozen(a))

    @property
    def n(self) -> int:
        return self.M.shape[0]

    @property
    def Omega(self) -> float:
        if self.n != 2:
            raise DimensionMismatch("scalar gyroscopic coefficient requires n = 2")
        return float(self.G[0, 1])

    @property
    def nu(self) -> float:
        if self.n != 2:
            raise DimensionMismatch("scalar circulatory coefficient requires n = 2")
        return float(self.N[0, 1])

    @property
    def A(self) -> np.ndarray:
        return self.K + self.N

    @property
    def B(self) -> np.ndarray:
        return self.D + self.G

    def is_mass_normalized(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.M, np.eye(self.n), rtol=0.0, atol=tol))


@dataclass(frozen=True)
class QuarticPoly:
    """Real monic quartic lambda^4 + a1 l^3 + a2 l^2 + a3 l + a4."""

    a1: float
    a2: float
    a3: float
    a4: float

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"coefficient {name} must be finite")
            object.__setattr__(self, name, v)

    def as_tuple(self):
        return (self.a1, self.a2, self.a3, self.a4)

    def as_poly(self) -> Poly:
        return Poly([self.a4, self.a3, self.a2, self.a1, 1.0])

    def __call__(self, lam):
        return self.as_poly()(lam)


@dataclass(frozen=True)
class SpectrumEntry:
    value: complex
    algebraic_multiplicity: int = 1
    geometric_multiplicity: int = 1
    vector: Optional[np.ndarray] = None
    krein_sign: Optional[int] = None

    def __post_init__(self):
        if self.geometric_multiplicity > self.algebraic_multiplicity:
            raise ValueError("geometric multiplicity cannot exceed algebraic")


def decompose(A, B, M=None) -> MechanicalSystem:
    """Split positional and velocity matrices into the four force classes.

    K = (A + A^T)/2, N = (A - A^T)/2, D = (B + B^T)/2, G = (B - B^T)/2;
    K + N and D + G reproduce the inputs exactly.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise DimensionMismatch("A and B must be square matrices of equal size")
    if M is None:
        M = np.eye(A.shape[0])
    return MechanicalSystem(M=M, D=_sym(B), G=_antisym(B), K=_sym(A), N=_antisym(A))


def char_quartic(sys: MechanicalSystem) -> QuarticPoly:
    """Characteristic quartic of a mass-normalized two-dof system."""
    if sys.n != 2:
        raise DimensionMismatch("characteristic quartic requires n = 2")
    if not sys.is_mass_normalized():
        raise NotPositiveDefinite(
            "system must have M = I; apply mass_normalize first"
        )
    K, D = sys.K, sys.D
    om, nu = sys.Omega, sys.nu
    tr_k = float(np.trace(K))
    tr_d = float(np.trace(D))
    a1 = tr_d
    a2 = tr_k + float(np.linalg.det(D)) + om * om
    a3 = tr_k * tr_d - float(np.trace(K @ D)) + 2.0 * om * nu
    a4 = float(np.linalg.det(K)) + nu * nu
    return QuarticPoly(a1, a2, a3, a4)


def mass_normalize(sys: MechanicalSystem) -> MechanicalSystem:
    """Congruence by M^(-1/2), returning an equivalent system with M = I.

    The transform is symmetric, so each block keeps its symmetry class, and
    the quadratic pencil spectrum is unchanged.
    """
    if sys.is_mass_normalized():
        return sys
    w, q = np.linalg.eigh(sys.M)
    if np.any(w <= 0):
        raise NotPositiveDefinite("mass matrix is not positive definite")
    s = q @ np.diag(1.0 / np.sqrt(w)) @ q.T
    return MechanicalSystem(
        M=np.eye(sys.n),
        D=s @ sys.D @ s,
        G=s @ sys.G @ s,
        K=s @ sys.K @ s,
        N=s @ sys.N @ s,
        labels=sys.labels,
    )


def companion(sys: MechanicalSystem) -> np.ndarray:
    """First-order block companion [[0, I], [-A, -B]] of the normalized system."""
    ms = mass_normalize(sys)
    n = ms.n
    c = np.zeros((2 * n, 2 * n))
    c[:n, n:] = np.eye(n)
    c[n:, :n] = -ms.A
    c[n:, n:] = -ms.B
    return c


def spectrum(sys: MechanicalSystem, tol: float = 1e-9):
    """Eigenvalues of the quadratic pencil with multiplicities and vectors.

    Returns SpectrumEntry records whose algebraic multiplicities sum to 2n.
    Vectors are the upper blocks of companion eigenvectors, renormalized;
    geometric multiplicity is the rank defect of the pencil evaluated at the
    clustered eigenvalue (threshold 1e-8 relative to the pencil scale).
    """
    if sys.n > MAX_DOF:
        raise DimensionMismatch(f"spectrum requires n <= {MAX_DOF}")
    ms = mass_normalize(sys)
    comp = companion(ms)
    pairs = smallalg.matrix_eigen(comp, tol=min(tol, smallalg.DEFAULT_TOL))
    clusters = smallalg.cluster_values([v for v, _ in pairs], smallalg.DEFAULT_TOL)
    a_mat, b_mat = ms.A, ms.B
    scale_a = np.linalg.norm(a_mat, 2)
    scale_b = np.linalg.norm(b_mat, 2)
    entries = []
    for center, mult in clusters:
        vec = None
        best = None
        for value, v in pairs:
            d = abs(value - center)
            if best is None or d < best:
                best, vec = d, v
        u = vec[: ms.n]
        nu_norm = np.linalg.norm(u)
        scale = abs(center) ** 2 + abs(center) * scale_b + scale_a
        if nu_norm > 1e-12:
            u = u / nu_norm
            residual = np.linalg.norm(
                (center**2 * np.eye(ms.n) + center * b_mat + a_mat) @ u
            )
            if residual > max(tol, 1e-10) * max(scale, 1.0):
                u = None  # defective cluster: upper block may be degenerate
        else:
            u = None
        pencil = center**2 * np.eye(ms.n) + center * b_mat + a_mat
        rank = np.linalg.matrix_rank(pencil, tol=1e-8 * max(scale, 1.0))
        geo = max(1, min(mult, ms.n - int(rank)))
        entries.append(
            SpectrumEntry(
                value=complex(center),
                algebraic_multiplicity=mult,
                geometric_multiplicity=geo,
                vector=u,
            )
        )
    return entries


def system_abscissa(sys: MechanicalSystem) -> float:
    """Maximal real part over the spectrum (clustered eigenvalues)."""
    return max(e.value.real for e in spectrum(sys))
