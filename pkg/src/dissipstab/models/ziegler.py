"""Double pendulum under a follower load.

Two rigid rods of length l, masses 2m and m at the joints, elastic
restoring stiffness c in both joints, equal joint damping b, and a
tangential follower force P on the free end.  The linearized blocks are

    M = [[3 m l^2, m l^2], [m l^2, m l^2]]
    B = [[2b, -b], [-b, b]]
    A = [[-P l + 2c, P l - c], [-c, c]]

In units m = c = l = 1 the undamped equilibrium loses stability at
P_k = (7/2 - sqrt(2)) c/l, while with equal joint damping the threshold is
P_k(b) = (41/28) c/l + b^2 / (2 m l^3), whose b -> 0 limit sits well below
P_k: the canonical vanishing-damping discontinuity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..msystem import MechanicalSystem, decompose


@dataclass(frozen=True)
class ZieglerParams:
    m: float = 1.0  # mass unit
    c: float = 1.0  # joint stiffness
    l: float = 1.0  # rod length
    P: float = 0.0  # follower load
    b: float = 0.0  # joint damping

    def __post_init__(self):
        if self.m <= 0 or self.c <= 0 or self.l <= 0:
            raise ValueError("m, c, l must be positive")
        if self.b < 0:
            raise ValueError("joint damping must be non-negative")


def build_ziegler(p: ZieglerParams) -> MechanicalSystem:
    m, c, l, P, b = p.m, p.c, p.l, p.P, p.b
    M = m * l * l * np.array([[3.0, 1.0], [1.0, 1.0]])
    B = b * np.array([[2.0, -1.0], [-1.0, 1.0]])
    A = np.array([[-P * l + 2.0 * c, P * l - c], [-c, c]])
    sys = decompose(A, B, M)
    return MechanicalSystem(
        M=sys.M, D=sys.D, G=sys.G, K=sys.K, N=sys.N, labels=("phi1", "phi2")
    )


def ziegler_criticals(p: ZieglerParams):
    """(undamped threshold, damped threshold at p.b, vanishing-damping limit)."""
    base = p.c / p.l
    pk = (3.5 - math.sqrt(2.0)) * base
    pk_damped = (41.0 / 28.0) * base + 0.5 * p.b * p.b / (p.m * p.l**3)
    pk_limit = (41.0 / 28.0) * base
    return pk, pk_damped, pk_limit


def ziegler_family(params: ZieglerParams = ZieglerParams()):
    """(eps, load) -> system with damping b = eps and follower load P = load."""

    def family(eps: float, load: float) -> MechanicalSystem:
        return build_ziegler(
            ZieglerParams(m=params.m, c=params.c, l=params.l, P=load, b=eps)
        )

    return family
