"""Desk-scale studies: threshold scan, slow-scale convergence, energy monitoring,
a-priori bound checks and Galerkin refinement.

Each study returns a plain dataclass of arrays/scalars that the CLI
serialises; nothing here touches the filesystem.  Norm convention: all
L2-type quantities are coefficient norms (mean-normalised Parseval).  The
mean-mode growth bound is stated in the literature with the integral L2
norm; the period factors cancel against our normalisation, leaving the
constant 3/26 used in ks_apriori_check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolve import (
    EquationDescriptor,
    SolverConfig,
    Trajectory,
    evolve,
    make_front_equation,
    make_ks_equation,
    make_rescaled_equation,
)
from .grid import (
    SpectralField,
    SpectralGrid,
    inverse_transform,
    make_grid,
    random_zero_mean_field,
    slope_energy_weights,
)
from .symbols import alpha_critical, build_rescaled_symbols, build_symbols

__all__ = [
    "StabilityScanReport",
    "ConvergenceReport",
    "ConvergenceStudy",
    "EnergyTrace",
    "KsAprioriReport",
    "GalerkinReport",
    "OrderCheck",
    "fit_log_slope",
    "measured_growth_rate",
    "run_stability_scan",
    "run_convergence_study",
    "run_energy_monitor",
    "run_ks_apriori_check",
    "run_galerkin_refinement",
    "etdrk4_order_check",
]


def fit_log_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log(y) against log(x)."""
    return float(np.polyfit(np.log(np.asarray(x)), np.log(np.asarray(y)), 1)[0])


def measured_growth_rate(trajectory: Trajectory, tail_fraction: float = 0.2) -> float:
    """Exponential rate of the zero-mean L2 norm over the last fraction of the run.

    Fitted on the tail so transients from the non-normal quadratic coupling
    have decayed first.
    """
    times = trajectory.times
    norms = trajectory.diagnostics["zero_mean_l2"]
    t_cut = times[-1] - tail_fraction * (times[-1] - times[0])
    sel = times >= t_cut
    if np.any(norms[sel] <= 0):
        return -np.inf
    return float(np.polyfit(times[sel], np.log(norms[sel]), 1)[0])


@dataclass
class StabilityScanReport:
    ell: float
    alpha_c: float
    alphas: np.ndarray
    measured_rates: np.ndarray
    predicted_rates: np.ndarray  # max over k >= 1 of the linear growth rates
    verdicts: list[str]          # "stable" | "unstable"
    anomalies: list[str]
    trajectories: dict[float, Trajectory] | None = None


def run_stability_scan(
    ell: float,
    alphas,
    amplitude: float,
    t_end: float,
    n_modes: int,
    dt: float,
    seed: int = 0,
    output_stride: int = 1,
    keep_trajectories: bool = False,
) -> StabilityScanReport:
    """Evolve the front equation across alphas and classify the null solution.

    The same seeded zero-mean initial field is reused for every alpha so
    verdict flips are attributable to the parameter alone.
    """
    alphas = np.asarray(list(alphas), dtype=float)
    if np.any(alphas <= 0):
        raise ValueError("alphas must be positive")
    grid = make_grid(ell, n_modes)
    ic = random_zero_mean_field(grid, amplitude, seed)
    a_c = alpha_critical(ell)
    measured, predicted, verdicts, anomalies = [], [], [], []
    kept: dict[float, Trajectory] = {}
    for alpha in alphas:
        table = build_symbols(alpha, grid)
        pred = float(np.max(table.growth_rate[1:]))
        traj = evolve(
            SolverConfig(
                descriptor=make_front_equation(alpha, grid),
                initial_condition=ic,
                dt=dt,
                t_end=t_end,
                output_stride=output_stride,
            )
        )
        if keep_trajectories:
            kept[float(alpha)] = traj
        if traj.blown_up:
            anomalies.append(
                f"alpha={alpha:g}: blowup at t={traj.blowup_time:g}"
                + (" on a nominally stable parameter" if alpha < a_c else "")
            )
            rate, grew = np.inf, True
        else:
            rate = measured_growth_rate(traj)
            norms = traj.diagnostics["zero_mean_l2"]
            grew = norms[-1] > norms[0]
        measured.append(rate)
        predicted.append(pred)
        # net growth decides the verdict: far above threshold the instability
        # saturates before t_end and the late-time rate fit goes flat
        verdicts.append("unstable" if grew else "stable")
    return StabilityScanReport(
        ell=float(ell),
        alpha_c=a_c,
        alphas=alphas,
        measured_rates=np.asarray(measured),
        predicted_rates=np.asarray(predicted),
        verdicts=verdicts,
        anomalies=anomalies,
        trajectories=kept if keep_trajectories else None,
    )


@dataclass
class ConvergenceReport:
    ell0: float
    t_end: float
    epsilons: np.ndarray
    sup_errors: np.ndarray   # sup over snapshots and collocation points of |psi_eps - Phi|
    ratios: np.ndarray       # sup_errors / eps
    fitted_order: float      # log-log slope; the first-order claim means >= ~1
    zeta_sup_l2: np.ndarray  # sup over snapshots of |D (psi_eps - Phi)/eps|_2
    blowups: list[float]


@dataclass
class ConvergenceStudy:
    """Report plus the raw trajectories, for energy/a-priori post-processing."""

    report: ConvergenceReport
    ks_trajectory: Trajectory
    rescaled_trajectories: dict[float, Trajectory]


def run_convergence_study(
    ell0: float,
    phi0: SpectralField,
    t_end: float,
    epsilons,
    dt: float,
    output_stride: int = 10,
) -> ConvergenceStudy:
    """Integrate the limit equation and the slow-scale equation side by side.

    Both run in the same slow frame (period ell0, slow time), from the same
    initial state, with the same stepper and step, so the measured gap is
    the modelling difference and not interpolation or discretisation noise.
    """
    epsilons = np.asarray(list(epsilons), dtype=float)
    if np.any(np.diff(epsilons) >= 0):
        raise ValueError("epsilons must be strictly decreasing")
    grid = phi0.grid
    if grid.period != ell0:
        raise ValueError("phi0 must live on a grid of period ell0")
    ks_traj = evolve(
        SolverConfig(
            descriptor=make_ks_equation(grid),
            initial_condition=phi0,
            dt=dt,
            t_end=t_end,
            output_stride=output_stride,
        )
    )
    slope_w = slope_energy_weights(grid)
    sup_errors, zeta_sups, blowups = [], [], []
    trajectories: dict[float, Trajectory] = {}
    for eps in epsilons:
        traj = evolve(
            SolverConfig(
                descriptor=make_rescaled_equation(eps, grid),
                initial_condition=phi0,
                dt=dt,
                t_end=t_end,
                output_stride=output_stride,
            )
        )
        trajectories[float(eps)] = traj
        if traj.blown_up:
            blowups.append(float(eps))
        n = min(len(traj.times), len(ks_traj.times))
        diff = traj.coeffs[:n] - ks_traj.coeffs[:n]
        sup_err = 0.0
        for row in diff:
            vals = inverse_transform(SpectralField(grid, row))
            sup_err = max(sup_err, float(np.max(np.abs(vals))))
        sup_errors.append(sup_err)
        zeta_raw = float(np.max(np.sqrt(diff**2 @ slope_w)))
        zeta_sups.append(zeta_raw / eps if eps > 0 else (0.0 if zeta_raw == 0 else np.nan))
    sup_errors = np.asarray(sup_errors)
    # the log-log fit only makes sense off the exact eps = 0 limit
    fittable = (epsilons > 0) & (sup_errors > 0)
    order = fit_log_slope(epsilons[fittable], sup_errors[fittable]) if fittable.sum() >= 2 else np.nan
    with np.errstate(invalid="ignore", divide="ignore"):
        ratios = np.where(epsilons > 0, sup_errors / np.where(epsilons > 0, epsilons, 1.0), 0.0)
    report = ConvergenceReport(
        ell0=float(ell0),
        t_end=float(t_end),
        epsilons=epsilons,
        sup_errors=sup_errors,
        ratios=ratios,
        fitted_order=order,
        zeta_sup_l2=np.asarray(zeta_sups),
        blowups=blowups,
    )
    return ConvergenceStudy(report, ks_traj, trajectories)


@dataclass
class EnergyTrace:
    times: np.ndarray
    values: np.ndarray  # the weighted remainder energy at each snapshot
    order: int          # derivative order n of the functional
    epsilon: float
    observed_bound: float  # running max, the empirical uniform bound


def run_energy_monitor(
    rescaled_trajectory: Trajectory,
    ks_trajectory: Trajectory,
    epsilon: float,
    order: int = 0,
) -> EnergyTrace:
    """Weighted energy of the remainder derivative zeta = D(psi - Phi)/eps.

    In coefficients the three-term functional collapses to
    sum_k lam_k^n (1 + 4 eps lam_k + (1+eps)(x_k - 1)) zeta_k^2.
    Both trajectories must share times and grid; the remainder vanishes
    identically at the start (same initial state), so values[0] == 0.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    grid = rescaled_trajectory.grid
    if grid != ks_trajectory.grid:
        raise ValueError("trajectories live on different grids")
    n = min(len(rescaled_trajectory.times), len(ks_trajectory.times))
    if not np.array_equal(rescaled_trajectory.times[:n], ks_trajectory.times[:n]):
        raise ValueError("trajectories have mismatched snapshot times")
    table = build_rescaled_symbols(epsilon, grid)
    lam = grid.eigenvalues
    weight = (
        lam**order
        * (1.0 + 4.0 * epsilon * lam + (1.0 + epsilon) * table.sqrt_shift)
        * slope_energy_weights(grid)  # one derivative factor for zeta itself
    )
    diff = (rescaled_trajectory.coeffs[:n] - ks_trajectory.coeffs[:n]) / epsilon
    values = diff**2 @ weight
    if values[0] != 0.0:
        raise ValueError("remainder is not null at the initial time")
    return EnergyTrace(
        times=rescaled_trajectory.times[:n].copy(),
        values=values,
        order=order,
        epsilon=float(epsilon),
        observed_bound=float(np.max(values)),
    )


@dataclass
class KsAprioriReport:
    times: np.ndarray
    slope_norms: np.ndarray    # |Phi_eta(tau)|_2
    slope_bounds: np.ndarray   # e^(13 tau/6) |Phi_eta(0)|_2
    mean_abs: np.ndarray
    mean_bounds: np.ndarray    # |mean(0)| + (3/26) |Phi_eta(0)|_2^2 e^(13 tau/3)
    slope_bound_ok: bool
    mean_bound_ok: bool
    min_slope_margin: float    # min(bound - value), >= 0 when the bound holds
    min_mean_margin: float


def run_ks_apriori_check(trajectory: Trajectory) -> KsAprioriReport:
    """Verify both growth bounds at every snapshot of a limit-equation run."""
    times = trajectory.times
    slope = np.sqrt(trajectory.diagnostics["slope_sq_mean"])
    slope_bound = np.exp(13.0 * times / 6.0) * slope[0]
    mean_abs = np.abs(trajectory.diagnostics["mean"])
    mean_bound = mean_abs[0] + (3.0 / 26.0) * slope[0] ** 2 * np.exp(13.0 * times / 3.0)
    return KsAprioriReport(
        times=times.copy(),
        slope_norms=slope,
        slope_bounds=slope_bound,
        mean_abs=mean_abs,
        mean_bounds=mean_bound,
        slope_bound_ok=bool(np.all(slope <= slope_bound * (1 + 1e-12))),
        mean_bound_ok=bool(np.all(mean_abs <= mean_bound * (1 + 1e-12))),
        min_slope_margin=float(np.min(slope_bound - slope)),
        min_mean_margin=float(np.min(mean_bound - mean_abs)),
    )


@dataclass
class GalerkinReport:
    n_list: list[int]
    final_diffs: np.ndarray  # L2 gap between consecutive truncations' final states
    max_l2: np.ndarray       # per-truncation running max of the L2 norm
    blowups: list[int]


def run_galerkin_refinement(
    make_descriptor,
    initial,
    period: float,
    n_list,
    t_end: float,
    dt: float,
    output_stride: int = 10,
) -> GalerkinReport:
    """Re-run one equation at increasing truncation and compare final states.

    ``make_descriptor`` maps a grid to the equation; ``initial`` maps a grid
    to the starting field (so the same function is projected onto each
    truncation, which is exactly the nested-projection construction).
    """
    n_list = list(n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing")
    finals, max_l2, blowups = [], [], []
    for n in n_list:
        grid = make_grid(period, n)
        traj = evolve(
            SolverConfig(
                descriptor=make_descriptor(grid),
                initial_condition=initial(grid),
                dt=dt,
                t_end=t_end,
                output_stride=output_stride,
            )
        )
        if traj.blown_up:
            blowups.append(n)
        finals.append(traj.coeffs[-1])
        max_l2.append(float(np.max(traj.diagnostics["l2"])))
    diffs = []
    for a, b in zip(finals, finals[1:]):
        padded = np.zeros_like(b)
        padded[: len(a)] = a
        diffs.append(float(np.sqrt(np.sum((padded - b) ** 2))))
    return GalerkinReport(
        n_list=n_list,
        final_diffs=np.asarray(diffs),
        max_l2=np.asarray(max_l2),
        blowups=blowups,
    )


@dataclass
class OrderCheck:
    dt: float
    error_coarse: float  # against a dt/8 reference
    error_half: float
    ratio: float         # ~2^4 for a fourth-order scheme


def etdrk4_order_check(
    descriptor: EquationDescriptor, initial: SpectralField, t_end: float, dt: float
) -> OrderCheck:
    """Self-convergence of the stepper under dt halving (reference at dt/8)."""
    finals = {}
    for scale in (1, 2, 8):
        traj = evolve(
            SolverConfig(
                descriptor=descriptor,
                initial_condition=initial,
                dt=dt / scale,
                t_end=t_end,
                output_stride=10**9,  # final state only
            )
        )
        finals[scale] = traj.coeffs[-1]
    e1 = float(np.sqrt(np.sum((finals[1] - finals[8]) ** 2)))
    e2 = float(np.sqrt(np.sum((finals[2] - finals[8]) ** 2)))
    return OrderCheck(dt=dt, error_coarse=e1, error_half=e2, ratio=e1 / e2)
