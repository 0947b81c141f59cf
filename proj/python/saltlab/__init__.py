"""Stochastic advection by Lie transport: paths, Stratonovich integration and SALT fluid solvers."""

from ._saltlab import (
    DrivingPath,
    EulerState,
    NoiseBasis,
    ConfigError,
    RswParams,
    RswState,
    RunConfig,
    SolverAbort,
    balanced_rsw_state,
    potential_vorticity,
    rsw_diagnostics,
    step_rsw,
    TimeGrid,
    __version__,
    check_count,
    check_name,
    convergence_study,
    fundamental_lemma_check,
    kiw_residual,
    make_fourier_basis,
    make_velocity_state,
    make_vorticity_state,
    parse_config,
    pressure_components,
    refine,
    run,
    run_check,
    sample_brownian,
    sample_ou,
    serialize_config,
    step_deterministic,
    step_velocity,
    step_vorticity,
    strat_integral,
    taylor_green_velocity,
    taylor_green_vorticity,
    velocity_from_vorticity,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
