"""Catalog of the classical model systems."""

from .ziegler import ZieglerParams, build_ziegler, ziegler_criticals, ziegler_family
from .brouwer import (
    BrouwerParams,
    BrouwerVerdict,
    GASCHEAU_CRITICAL_RATIO,
    brouwer_undamped_verdict,
    build_brouwer,
    lagrange_point_params,
)
from .maclaurin import (
    BracketFailure,
    MaclaurinParams,
    MissingRadiativeCoefficients,
    OMEGA0_DYNAMICAL,
    build_maclaurin,
    load_radiative_table,
    maclaurin_criticals,
    maclaurin_family,
    maclaurin_krein_family,
    maclaurin_profile,
    riemann_sine_equation,
    viscous_onset,
)
from .sobolev import (
    SingularA,
    SobolevParams,
    build_sobolev,
    greenhill_band,
    sobolev_family,
    sobolev_massless_spectrum,
)
from .combres import (
    CombResParams,
    OverdampedWindowClosed,
    PeriodicSystem,
    ResonanceInterval,
    build_combres,
    combres_interval,
    floquet_interval,
    floquet_unstable,
    monodromy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
