"""Linear stability toolkit for nonconservative mechanical systems."""

__version__ = "0.1.0"

from .smallalg import Poly, poly_roots, matrix_eigen
from .msystem import (
    MechanicalSystem,
    QuarticPoly,
    SpectrumEntry,
    char_quartic,
    decompose,
    mass_normalize,
    spectrum,
    system_abscissa,
)
from .hurwitz import (
    ASYMPTOTICALLY_STABLE,
    MARGINALLY_STABLE,
    UNSTABLE,
    StabilityVerdict,
    classify,
    hurwitz_H,
    scale_normalize,
    surface_V_sample,
    tangent_cone_contains,
)
from .krein import (
    CollisionEvent,
    IndefiniteMetric,
    KreinPath,
    collision_scan,
    krein_sign,
    negative_square_count,
)
from .paradox import (
    ParadoxReport,
    circulatory_thresholds,
    umbrella_approximation,
    vanishing_damping_scan,
)
from .umbrella import (
    AffineConstraint,
    WhitneyPoint,
    abscissa_min_affine,
    bottema_from_whitney,
    discriminant_swallowtail_probe,
    ep_set_point,
    heavy_damping_test,
    locate_heavy_damping_cusp,
    poly_abscissa,
    whitney_map,
)
from . import models
