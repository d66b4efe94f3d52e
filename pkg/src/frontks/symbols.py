"""Fourier multipliers of the operators in the front evolution equation.

Every operator in play is diagonal in the eigenbasis, so it is fully
described by one real number per mode.  With lam the mode eigenvalue and
x = sqrt(1 + 4 lam) this module evaluates, for the unrescaled equation,

    mass       b = x^2 + a x - a          (multiplies d/dt in the 4th-order form)
    stiffness  s = -4 lam^2 + (a - 1) lam (the linear differential part)
    quad       f = (x^3 - 3 x^2 - 4 a x + 4 a)/4   (filters the squared slope)
    growth     l = s / b,   gain g = f / b          (divided, 2nd-order form)

and, for the slow-scale equation with a = 1 + eps on a period-L0 grid,

    b_eps = eps h_eps + 1,   f_eps = eps m_eps - 1/2,   s = -lam (4 lam - 1),

where h_eps and m_eps stay O(lam) uniformly in eps.  h and m are computed
from factored differences (x - 1 = 4 eps lam / (x + 1)); the raw printed
expressions lose all precision below eps ~ 1e-8.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import SpectralGrid

__all__ = [
    "SymbolTable",
    "RescaledSymbolTable",
    "SymbolBoundsReport",
    "build_symbols",
    "build_rescaled_symbols",
    "alpha_critical",
    "verify_symbol_bounds",
    "front_mode_symbols",
]


@dataclass(frozen=True)
class SymbolTable:
    """Per-mode multipliers of the unrescaled front equation at parameter alpha."""

    alpha: float
    grid: SpectralGrid
    sqrt_factor: np.ndarray    # x = sqrt(1 + 4 lam)
    decay_exponent: np.ndarray  # nu = (1 + x)/2, decaying root of the profile ODE
    mass: np.ndarray           # b
    stiffness: np.ndarray      # s
    quad_filter: np.ndarray    # f
    growth_rate: np.ndarray    # l = s/b
    quad_gain: np.ndarray      # g = f/b


@dataclass(frozen=True)
class RescaledSymbolTable:
    """Per-mode multipliers of the slow-scale equation at parameter eps in (0, 1]."""

    epsilon: float
    ell0: float
    grid: SpectralGrid
    sqrt_factor: np.ndarray     # x = sqrt(1 + 4 eps lam)
    sqrt_shift: np.ndarray      # r = x - 1 >= 0, weight of the energy functional
    mass: np.ndarray            # b_eps = eps h + 1
    stiffness: np.ndarray       # s = -lam (4 lam - 1)
    quad_filter: np.ndarray     # f_eps = eps m - 1/2
    mass_correction: np.ndarray  # h = (b - 1)/eps, |h| <= (6 + 2 eps) lam
    quad_correction: np.ndarray  # m = (f + 1/2)/eps, |m| <= 2 sqrt(eps) lam^(3/2) + 25 lam


def _unrescaled_arrays(alpha: float, lam: np.ndarray):
    x = np.sqrt(1.0 + 4.0 * lam)
    nu = 0.5 * (1.0 + x)
    # b = x^2 + a x - a written so the lam = 0 mode gives exactly 1
    b = x * x + alpha * (x - 1.0)
    s = lam * ((alpha - 1.0) - 4.0 * lam)
    # f = (x^3 - 3x^2 - 4ax + 4a)/4; grouped so x = 1 gives exactly -1/2
    f = 0.25 * (x * x * (x - 3.0) - 4.0 * alpha * (x - 1.0))
    return x, nu, b, s, f, s / b, f / b


def build_symbols(alpha: float, grid: SpectralGrid) -> SymbolTable:
    """Evaluate all unrescaled multipliers on the grid's eigenvalues."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    x, nu, b, s, f, l, g = _unrescaled_arrays(alpha, grid.eigenvalues)
    return SymbolTable(float(alpha), grid, x, nu, b, s, f, l, g)


def front_mode_symbols(alpha: float, lam: float):
    """Single-mode (x, nu, b, s, f, l, g) for scalar eigenvalue lam."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    vals = _unrescaled_arrays(alpha, np.asarray([lam], dtype=float))
    return tuple(float(v[0]) for v in vals)


def alpha_critical(ell: float) -> float:
    """Instability threshold in alpha for period ell: 1 + 16 pi^2 / ell^2."""
    if not ell > 0:
        raise ValueError(f"period must be positive, got {ell}")
    return 1.0 + 16.0 * np.pi**2 / ell**2


def build_rescaled_symbols(epsilon: float, grid: SpectralGrid) -> RescaledSymbolTable:
    """Evaluate the slow-scale multipliers on a period-L0 grid, eps in (0, 1]."""
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    lam = grid.eigenvalues
    x = np.sqrt(1.0 + 4.0 * epsilon * lam)
    delta = 4.0 * epsilon * lam / (x + 1.0)  # = x - 1, exact as eps -> 0
    h = 4.0 * lam + 4.0 * (1.0 + epsilon) * lam / (x + 1.0)
    m = (delta * delta - 7.0 - 4.0 * epsilon) * lam / (x + 1.0)
    b = epsilon * h + 1.0
    f = epsilon * m - 0.5
    s = -lam * (4.0 * lam - 1.0)
    return RescaledSymbolTable(
        float(epsilon), grid.period, grid, x, delta, b, s, f, h, m
    )


@dataclass(frozen=True)
class SymbolBoundsReport:
    """Observed constants of the slow-scale multipliers vs their analytic bounds.

    Violations are reported through the ok flags, never raised.
    """

    epsilon: float
    max_mass_correction_ratio: float    # max |h|/lam, bound 6 + 2 eps
    max_quad_correction_ratio: float    # max |m|/(2 sqrt(eps) lam^(3/2) + 25 lam), bound 1
    min_mass_slack: float               # min (b - 4 eps lam - 1), bound >= 0
    min_sqrt_shift: float               # min r, bound >= 0
    mass_correction_ok: bool
    quad_correction_ok: bool
    mass_slack_ok: bool
    sqrt_shift_ok: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.mass_correction_ok
            and self.quad_correction_ok
            and self.mass_slack_ok
            and self.sqrt_shift_ok
        )


def verify_symbol_bounds(table: RescaledSymbolTable) -> SymbolBoundsReport:
    """Check the uniform-in-eps bounds mode by mode (lam = 0 rows hold trivially)."""
    eps = table.epsilon
    lam = table.grid.eigenvalues
    pos = lam > 0
    h_ratio = float(np.max(np.abs(table.mass_correction[pos]) / lam[pos])) if pos.any() else 0.0
    m_env = 2.0 * np.sqrt(eps) * lam[pos] ** 1.5 + 25.0 * lam[pos]
    m_ratio = float(np.max(np.abs(table.quad_correction[pos]) / m_env)) if pos.any() else 0.0
    slack = float(np.min(table.mass - 4.0 * eps * lam - 1.0))
    rmin = float(np.min(table.sqrt_shift))
    return SymbolBoundsReport(
        epsilon=eps,
        max_mass_correction_ratio=h_ratio,
        max_quad_correction_ratio=m_ratio,
        min_mass_slack=slack,
        min_sqrt_shift=rmin,
        mass_correction_ok=h_ratio <= 6.0 + 2.0 * eps,
        quad_correction_ok=m_ratio <= 1.0,
        mass_slack_ok=slack >= -1e-15,
        sqrt_shift_ok=rmin >= 0.0,
    )
