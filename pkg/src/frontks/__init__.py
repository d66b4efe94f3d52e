"""Pseudospectral solver suite for a quasi-steady flame-front equation.

The front perturbation obeys a fully nonlinear pseudodifferential
evolution law that is diagonal per Fourier mode; this package evaluates
the operator multipliers in closed form, integrates the equation (and its
Kuramoto-Sivashinsky limit) with an exponential Runge-Kutta scheme, and
re-derives the underlying free-boundary profiles as a numerical audit.
"""

from .grid import (
    SpectralField,
    SpectralGrid,
    antiderivative,
    collocation_points,
    cosine_field,
    dealiased_square,
    differentiate,
    inverse_transform,
    l2_norm,
    make_grid,
    mean_projection,
    mean_value,
    random_zero_mean_field,
    sobolev_norm,
    transform,
)
from .symbols import (
    RescaledSymbolTable,
    SymbolTable,
    alpha_critical,
    build_rescaled_symbols,
    build_symbols,
    verify_symbol_bounds,
)
from .evolve import (
    EquationDescriptor,
    Etdrk4,
    NumericalBlowupError,
    SolverConfig,
    Trajectory,
    default_dt,
    evolve,
    make_front_equation,
    make_ks_equation,
    make_rescaled_equation,
    mean_mode_ode_check,
    step,
)
from .profiles import (
    FrontModeData,
    ProfileCoefficients,
    ProfileSlice,
    front_time_derivative,
    jump_residuals,
    profile_coefficients,
    reconstruct_mode,
    reconstruct_mode0,
)

__version__ = "0.1.0"
