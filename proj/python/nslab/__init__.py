"""Pseudo-spectral incompressible Navier-Stokes laboratory on the periodic cube.

The compiled extension carries the implementation; this package re-exports
its public surface.
"""

from ._nslab import (  # noqa: F401
    DataLabel,
    Field,
    Grid,
    NsLabError,
    __version__,
    analyticity_strip_width,
    classify_initial_data,
    divergence_residual,
    energy,
    enstrophy,
    entropy_surrogate,
    excluded_region_time,
    field_from_coefficients,
    field_from_physical,
    fit_spectral_decay,
    h_inner,
    h_norm,
    heat_solution,
    initial_data,
    leray_project,
    load_field,
    nonlinear_term,
    reality_defect,
    remove_drift,
    run_verify,
    save_field,
    shell_spectrum,
    simulate,
    sobolev_norm,
    spherical_bessel,
    stokes_apply,
    synthesize_labeled,
    vorticity,
    ylm,
    young_bound,
)
