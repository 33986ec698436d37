"""Python front end for the fracground C++ core."""

from ._core import (
    BoxGrid,
    FracgroundError,
    ProblemParams,
    G,
    barrier_constraint_scan,
    certify,
    constraint_V,
    default_zeta,
    dilation_probe,
    energy,
    equivalence_constant,
    frac_laplacian,
    g,
    lp_norm,
    make_barrier,
    petviashvili_solve,
    polya_szego_gap,
    radial_profile,
    read_field,
    rearrange_decreasing,
    run_cli,
    seminorm_direct_squared,
    seminorm_spectral_squared,
    solve_ground_state,
    write_field,
    zeta_min,
)

__all__ = [name for name in dir() if not name.startswith("_")]
