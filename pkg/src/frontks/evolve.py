"""Exponential time stepping for diagonal-linear + filtered-quadratic equations.

Every equation in scope has the per-mode form

    da_k/dt = L_k a_k + G_k * [square of the first derivative]_k,

which covers the front equation (L = growth rate, G = quad gain), the
Kuramoto-Sivashinsky equation (L = lam - 4 lam^2, G = -1/2) and the
slow-scale equation (L = s/b_eps, G = f_eps/b_eps).  The stepper is the
standard ETDRK4 scheme; the phi-function coefficients are averaged over a
16-point contour around each L_k dt, which stays accurate through L_k = 0
(the mean mode is exactly neutral) where the closed-form expressions
cancel catastrophically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import (
    SpectralField,
    SpectralGrid,
    _derivative_coeffs,
    _square_coeffs,
    slope_energy_weights,
)
from .symbols import build_rescaled_symbols, build_symbols

__all__ = [
    "EquationDescriptor",
    "SolverConfig",
    "Trajectory",
    "NumericalBlowupError",
    "make_front_equation",
    "make_ks_equation",
    "make_rescaled_equation",
    "Etdrk4",
    "step",
    "evolve",
    "default_dt",
    "mean_mode_ode_check",
    "MeanModeCheck",
    "BLOWUP_NORM",
]

BLOWUP_NORM = 1e8


@dataclass(frozen=True)
class EquationDescriptor:
    """Diagonal linear symbol + quadratic-output symbol defining one equation."""

    grid: SpectralGrid
    linear_symbol: np.ndarray
    nonlinear_symbol: np.ndarray
    label: str


def make_front_equation(alpha: float, grid: SpectralGrid) -> EquationDescriptor:
    table = build_symbols(alpha, grid)
    return EquationDescriptor(
        grid, table.growth_rate, table.quad_gain, f"front(alpha={alpha:g})"
    )


def make_ks_equation(grid: SpectralGrid) -> EquationDescriptor:
    lam = grid.eigenvalues
    return EquationDescriptor(grid, lam - 4.0 * lam**2, np.full(grid.n_modes, -0.5), "ks")


def make_rescaled_equation(epsilon: float, grid: SpectralGrid) -> EquationDescriptor:
    """Slow-scale equation on a period-L0 grid; eps = 0 returns the exact limit."""
    lam = grid.eigenvalues
    if epsilon == 0:
        return EquationDescriptor(
            grid, lam - 4.0 * lam**2, np.full(grid.n_modes, -0.5), "rescaled(eps=0)"
        )
    table = build_rescaled_symbols(epsilon, grid)
    return EquationDescriptor(
        grid,
        table.stiffness / table.mass,
        table.quad_filter / table.mass,
        f"rescaled(eps={epsilon:g})",
    )


class NumericalBlowupError(RuntimeError):
    """State left the finite/bounded regime; carries the time it was detected."""

    def __init__(self, time: float | None = None):
        self.time = time
        stamp = "unknown time" if time is None else f"t={time:g}"
        super().__init__(f"numerical blowup at {stamp}")


class Etdrk4:
    """ETDRK4 stepper specialised to one (descriptor, dt) pair."""

    def __init__(self, descriptor: EquationDescriptor, dt: float, contour_points: int = 16):
        if not dt > 0:
            raise ValueError(f"dt must be positive, got {dt}")
        self.descriptor = descriptor
        self.dt = float(dt)
        z = dt * descriptor.linear_symbol
        self.exp_full = np.exp(z)
        self.exp_half = np.exp(0.5 * z)
        # contour average of the phi functions (circle of radius 1 about each z)
        r = np.exp(1j * np.pi * (np.arange(contour_points) + 0.5) / contour_points)
        zr = z[:, None] + r[None, :]
        ez = np.exp(zr)
        self.coeff_q = dt * ((np.exp(0.5 * zr) - 1.0) / zr).mean(1).real
        self.coeff_f1 = dt * ((-4.0 - zr + ez * (4.0 - 3.0 * zr + zr**2)) / zr**3).mean(1).real
        self.coeff_f2 = dt * ((2.0 + zr + ez * (zr - 2.0)) / zr**3).mean(1).real
        self.coeff_f3 = dt * ((-4.0 - 3.0 * zr - zr**2 + ez * (4.0 - zr)) / zr**3).mean(1).real

    def nonlinear(self, coeffs: np.ndarray) -> np.ndarray:
        grid = self.descriptor.grid
        slope_sq = _square_coeffs(grid, _derivative_coeffs(grid, coeffs, 1))
        return self.descriptor.nonlinear_symbol * slope_sq

    def step_coeffs(self, coeffs: np.ndarray, time: float | None = None) -> np.ndarray:
        if not np.all(np.isfinite(coeffs)):
            raise NumericalBlowupError(time)
        n0 = self.nonlinear(coeffs)
        a = self.exp_half * coeffs + self.coeff_q * n0
        na = self.nonlinear(a)
        b = self.exp_half * coeffs + self.coeff_q * na
        nb = self.nonlinear(b)
        c = self.exp_half * a + self.coeff_q * (2.0 * nb - n0)
        nc = self.nonlinear(c)
        return (
            self.exp_full * coeffs
            + self.coeff_f1 * n0
            + 2.0 * self.coeff_f2 * (na + nb)
            + self.coeff_f3 * nc
        )


def step(state: SpectralField, descriptor: EquationDescriptor, dt: float) -> SpectralField:
    """Advance one ETDRK4 step (one-off; use Etdrk4 directly inside loops)."""
    return SpectralField(state.grid, Etdrk4(descriptor, dt).step_coeffs(state.coeffs))


def default_dt(grid: SpectralGrid) -> float:
    """Default step, scaled with the squared period."""
    return 1e-3 * (grid.period / (2.0 * np.pi)) ** 2


@dataclass(frozen=True)
class SolverConfig:
    descriptor: EquationDescriptor
    initial_condition: SpectralField
    dt: float
    t_end: float
    output_stride: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < self.dt:
            raise ValueError("t_end must be at least one step long")
        if self.output_stride < 1:
            raise ValueError("output_stride must be a positive integer")
        if self.initial_condition.grid != self.descriptor.grid:
            raise ValueError("initial condition lives on a different grid")


@dataclass
class Trajectory:
    """Snapshots of one run: times, coefficient matrix and per-snapshot scalars."""

    descriptor: EquationDescriptor
    times: np.ndarray
    coeffs: np.ndarray  # shape (n_snapshots, n_modes)
    diagnostics: dict = field(default_factory=dict)
    blown_up: bool = False
    blowup_time: float | None = None

    @property
    def grid(self) -> SpectralGrid:
        return self.descriptor.grid

    def state(self, i: int) -> SpectralField:
        return SpectralField(self.grid, self.coeffs[i])

    def final_state(self) -> SpectralField:
        return self.state(len(self.times) - 1)


def _diagnostics(grid: SpectralGrid, coeffs: np.ndarray) -> dict:
    sq = coeffs**2
    return {
        "l2": np.sqrt(sq.sum(axis=1)),
        "mean": coeffs[:, 0].copy(),
        "zero_mean_l2": np.sqrt(sq[:, 1:].sum(axis=1)),
        # mean of (d/dy state)^2, the quantity driving the mean mode
        "slope_sq_mean": sq @ slope_energy_weights(grid),
    }


def evolve(config: SolverConfig) -> Trajectory:
    """Run to t_end, keeping every output_stride-th state plus the final one.

    Deterministic for a given config.  On blowup the trajectory collected so
    far is returned with the blown_up flag set instead of raising.
    """
    n_steps = max(1, round(config.t_end / config.dt))
    stepper = Etdrk4(config.descriptor, config.dt)
    coeffs = config.initial_condition.coeffs.astype(float).copy()
    times = [0.0]
    snaps = [coeffs.copy()]
    blown_up = False
    blowup_time = None
    for i in range(n_steps):
        t = i * config.dt
        try:
            coeffs = stepper.step_coeffs(coeffs, time=t)
        except NumericalBlowupError as err:
            blown_up, blowup_time = True, err.time
            break
        t_next = (i + 1) * config.dt
        if not np.all(np.isfinite(coeffs)) or np.sqrt(np.sum(coeffs**2)) > BLOWUP_NORM:
            blown_up, blowup_time = True, t_next
            break
        if (i + 1) % config.output_stride == 0 or i + 1 == n_steps:
            times.append(t_next)
            snaps.append(coeffs.copy())
    times_arr = np.asarray(times)
    coeff_mat = np.asarray(snaps)
    return Trajectory(
        descriptor=config.descriptor,
        times=times_arr,
        coeffs=coeff_mat,
        diagnostics=_diagnostics(config.descriptor.grid, coeff_mat),
        blown_up=blown_up,
        blowup_time=blowup_time,
    )


@dataclass(frozen=True)
class MeanModeCheck:
    """Finite-difference audit of the mean-mode law p' = -1/2 mean((slope)^2)."""

    max_residual: float       # worst |dp/dt + 1/2 mean(slope^2)| per unit time
    max_mean_increase: float  # worst positive jump of the mean between snapshots
    mean_nonincreasing: bool


def mean_mode_ode_check(trajectory: Trajectory, step_tolerance: float = 1e-9) -> MeanModeCheck:
    """Compare the finite-differenced mean against -1/2 mean((state_y)^2).

    Uses the trapezoid pairing of snapshot endpoints, so snapshots must be
    dense (spacing <= 0.01) for the stated tolerances to be meaningful.
    """
    times = trajectory.times
    if len(times) < 2:
        raise ValueError("trajectory has fewer than two snapshots")
    spacing = np.diff(times)
    if np.max(spacing) > 0.01 + 1e-12:
        raise ValueError(
            f"snapshot spacing {np.max(spacing):g} too coarse for finite differencing"
        )
    mean = trajectory.diagnostics["mean"]
    rhs = -0.5 * trajectory.diagnostics["slope_sq_mean"]
    fd = np.diff(mean) / spacing
    residual = np.abs(fd - 0.5 * (rhs[1:] + rhs[:-1]))
    increase = np.diff(mean)
    return MeanModeCheck(
        max_residual=float(np.max(residual)),
        max_mean_increase=float(np.max(increase, initial=0.0)),
        mean_nonincreasing=bool(np.all(increase <= step_tolerance)),
    )
