"""Real trigonometric spectral representation on a periodic interval.

Functions are expanded in the eigenbasis of d^2/dy^2 with periodic boundary
conditions on [-L/2, L/2], ordered by eigenvalue with the physical
multiplicity pattern

    w_0 = 1,  w_{2j-1} = sqrt(2) cos(2 pi j y / L),  w_{2j} = sqrt(2) sin(2 pi j y / L),

so mode k carries eigenvalue lam_k with lam_0 = 0 and
lam_{2j-1} = lam_{2j} = (2 pi j / L)^2.  The basis is orthonormal with
respect to the *mean* inner product (1/L) int f g dy, hence
sum_k a_k^2 = (1/L) int f^2 (Parseval) and a_0 is the mean of f.
Quadratic products are evaluated pointwise on a zero-padded collocation
grid, which makes the truncated product alias-free on all retained modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpectralGrid",
    "SpectralField",
    "make_grid",
    "collocation_points",
    "transform",
    "inverse_transform",
    "differentiate",
    "dealiased_square",
    "sobolev_norm",
    "l2_norm",
    "mean_value",
    "mean_projection",
    "antiderivative",
    "slope_energy_weights",
    "gradient_mean_square",
    "random_zero_mean_field",
    "cosine_field",
]

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class SpectralGrid:
    """Periodic interval of length ``period`` truncated to ``n_modes`` basis modes."""

    period: float
    n_modes: int
    n_points: int
    eigenvalues: np.ndarray

    @property
    def max_harmonic(self) -> int:
        """Largest trigonometric harmonic index represented (j of cos/sin(2 pi j y/L))."""
        return self.n_modes // 2

    def __eq__(self, other):
        if not isinstance(other, SpectralGrid):
            return NotImplemented
        return (
            self.period == other.period
            and self.n_modes == other.n_modes
            and self.n_points == other.n_points
        )

    def __hash__(self):
        return hash((self.period, self.n_modes, self.n_points))


@dataclass(frozen=True)
class SpectralField:
    """Coefficient vector of a real periodic function in the grid's eigenbasis."""

    grid: SpectralGrid
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != (self.grid.n_modes,):
            raise ValueError(
                f"coefficient vector has shape {self.coeffs.shape}, "
                f"expected ({self.grid.n_modes},)"
            )


def make_grid(period: float, n_modes: int) -> SpectralGrid:
    """Build a grid; eigenvalues follow the exact multiplicity-2 layout."""
    if not period > 0:
        raise ValueError(f"period must be positive, got {period}")
    if n_modes < 3:
        raise ValueError(f"n_modes must be at least 3, got {n_modes}")
    # smallest even point count >= 3N/2 keeps truncated quadratics alias-free
    n_points = -2 * (-3 * n_modes // 4)  # ceil(3N/2) rounded up to even
    k = np.arange(n_modes)
    j = (k + 1) // 2
    lam = (2.0 * np.pi * j / period) ** 2
    lam[0] = 0.0
    return SpectralGrid(float(period), int(n_modes), int(n_points), lam)


def collocation_points(grid: SpectralGrid, n_points: int | None = None) -> np.ndarray:
    """Uniform sample points y_i = -L/2 + i L/n, i = 0..n-1."""
    n = grid.n_points if n_points is None else n_points
    return -0.5 * grid.period + grid.period * np.arange(n) / n


def _values_to_coeffs(grid: SpectralGrid, values: np.ndarray) -> np.ndarray:
    n = len(values)
    spectrum = np.fft.rfft(values) / n
    jmax = min(grid.max_harmonic, n // 2 - 1 if n % 2 == 0 else (n - 1) // 2)
    coeffs = np.zeros(grid.n_modes)
    coeffs[0] = spectrum[0].real
    j = np.arange(1, jmax + 1)
    # points start at -L/2, so harmonic j picks up a phase (-1)^j
    sign = np.where(j % 2 == 0, 1.0, -1.0)
    coeffs[2 * j - 1] = _SQRT2 * sign * spectrum[j].real
    has_sin = 2 * j <= grid.n_modes - 1  # top sin partner may be truncated
    coeffs[2 * j[has_sin]] = -_SQRT2 * sign[has_sin] * spectrum[j[has_sin]].imag
    return coeffs


def _coeffs_to_values(grid: SpectralGrid, coeffs: np.ndarray, n_points: int) -> np.ndarray:
    n = n_points
    if n < 2 * grid.max_harmonic + 1:
        raise ValueError(f"{n} points cannot carry harmonics up to {grid.max_harmonic}")
    spectrum = np.zeros(n // 2 + 1, dtype=complex)
    spectrum[0] = coeffs[0]
    jmax = grid.max_harmonic
    j = np.arange(1, jmax + 1)
    sign = np.where(j % 2 == 0, 1.0, -1.0)
    re = coeffs[2 * j - 1]
    im = np.zeros_like(re)
    has_sin = 2 * j <= grid.n_modes - 1
    im[has_sin] = coeffs[2 * j[has_sin]]
    spectrum[j] = sign * (re - 1j * im) / _SQRT2
    return np.fft.irfft(spectrum * n, n)


def transform(grid: SpectralGrid, values: np.ndarray) -> SpectralField:
    """Collocation values at the grid's n_points -> spectral coefficients."""
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.n_points,):
        raise ValueError(
            f"expected {grid.n_points} collocation values, got {values.shape}"
        )
    return SpectralField(grid, _values_to_coeffs(grid, values))


def inverse_transform(field: SpectralField, n_points: int | None = None) -> np.ndarray:
    """Spectral coefficients -> values at n_points uniform collocation points."""
    n = field.grid.n_points if n_points is None else n_points
    return _coeffs_to_values(field.grid, field.coeffs, n)


def _derivative_coeffs(grid: SpectralGrid, coeffs: np.ndarray, order: int) -> np.ndarray:
    jmax = grid.max_harmonic
    j = np.arange(1, jmax + 1)
    q = 2.0 * np.pi * j / grid.period
    z = coeffs[2 * j - 1].astype(complex)
    has_sin = 2 * j <= grid.n_modes - 1
    z[has_sin] -= 1j * coeffs[2 * j[has_sin]]
    # an even truncation leaves the top cosine without its sin partner; its
    # derivative leaves the space, so annihilate it (usual Nyquist convention)
    z[~has_sin] = 0.0
    z *= (1j * q) ** order
    out = np.zeros(grid.n_modes)
    out[2 * j - 1] = z.real
    out[2 * j[has_sin]] = -z.imag[has_sin]
    return out


def differentiate(field: SpectralField, order: int = 1) -> SpectralField:
    """Exact spectral derivative of the given order (mean mode of the result is 0)."""
    if order < 1:
        raise ValueError(f"order must be a positive integer, got {order}")
    return SpectralField(field.grid, _derivative_coeffs(field.grid, field.coeffs, order))


def _square_coeffs(grid: SpectralGrid, coeffs: np.ndarray) -> np.ndarray:
    # doubled grid resolves every harmonic of the product; truncating back to
    # n_modes zeroes everything above the retained band, so no aliasing at all
    n_fine = 2 * grid.n_points
    vals = _coeffs_to_values(grid, coeffs, n_fine)
    return _values_to_coeffs(grid, vals * vals)


def dealiased_square(field: SpectralField) -> SpectralField:
    """Spectral coefficients of the pointwise square, exact on all retained modes."""
    return SpectralField(field.grid, _square_coeffs(field.grid, field.coeffs))


def sobolev_norm(field: SpectralField, s: float) -> float:
    """Coefficient norm (sum_k lam_k^s a_k^2)^(1/2); s = 0 is the L2 norm.

    For s > 0 the mean mode contributes nothing (lam_0 = 0), so this is a
    seminorm; the mean is exposed separately via mean_value.
    """
    if s < 0:
        raise ValueError("negative orders are out of scope")
    if s == 0:
        return float(np.sqrt(np.sum(field.coeffs**2)))
    w = field.grid.eigenvalues**s
    return float(np.sqrt(np.sum(w * field.coeffs**2)))


def l2_norm(field: SpectralField) -> float:
    return sobolev_norm(field, 0.0)


def mean_value(field: SpectralField) -> float:
    """Mean of the represented function over one period."""
    return float(field.coeffs[0])


def mean_projection(field: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Split into (mean part, zero-mean part); the two add back to the field exactly."""
    mean = np.zeros_like(field.coeffs)
    mean[0] = field.coeffs[0]
    fluct = field.coeffs.copy()
    fluct[0] = 0.0
    return SpectralField(field.grid, mean), SpectralField(field.grid, fluct)


def antiderivative(field: SpectralField) -> SpectralField:
    """Zero-mean periodic antiderivative; the input mean is discarded first.

    Differentiating the result recovers the zero-mean part of the input.
    """
    grid = field.grid
    jmax = grid.max_harmonic
    j = np.arange(1, jmax + 1)
    q = 2.0 * np.pi * j / grid.period
    z = field.coeffs[2 * j - 1].astype(complex)
    has_sin = 2 * j <= grid.n_modes - 1
    z[has_sin] -= 1j * field.coeffs[2 * j[has_sin]]
    z[~has_sin] = 0.0  # same Nyquist convention as the derivative
    z /= 1j * q
    out = np.zeros(grid.n_modes)
    out[2 * j - 1] = z.real
    out[2 * j[has_sin]] = -z.imag[has_sin]
    return SpectralField(grid, out)


def slope_energy_weights(grid: SpectralGrid) -> np.ndarray:
    """Per-mode weights turning coefficients-squared into mean((f')^2).

    Follows the derivative's Nyquist convention: an unpaired top cosine
    contributes nothing.
    """
    lam = grid.eigenvalues.copy()
    if grid.n_modes % 2 == 0:
        lam[-1] = 0.0
    return lam


def gradient_mean_square(field: SpectralField) -> float:
    """Mean of (f')^2 over one period, from coefficients: sum_k lam_k a_k^2."""
    return float(np.sum(slope_energy_weights(field.grid) * field.coeffs**2))


def random_zero_mean_field(
    grid: SpectralGrid, amplitude: float, seed: int, decay: float = 2.0
) -> SpectralField:
    """Seeded random zero-mean field with coefficients decaying like lam^(-decay).

    Rescaled so the L2 (coefficient) norm equals ``amplitude``.
    """
    rng = np.random.default_rng(seed)
    raw = rng.uniform(-1.0, 1.0, grid.n_modes)
    coeffs = np.zeros(grid.n_modes)
    lam = grid.eigenvalues
    coeffs[1:] = raw[1:] * (lam[1] / lam[1:]) ** decay
    norm = np.sqrt(np.sum(coeffs**2))
    if norm > 0:
        coeffs *= amplitude / norm
    return SpectralField(grid, coeffs)


def cosine_field(
    grid: SpectralGrid, amplitude: float, harmonic: int = 1, phase: float = 0.0
) -> SpectralField:
    """amplitude * cos(2 pi j y / L + phase), built directly in coefficients."""
    if not 1 <= harmonic <= grid.max_harmonic:
        raise ValueError(f"harmonic {harmonic} not representable on this grid")
    coeffs = np.zeros(grid.n_modes)
    coeffs[2 * harmonic - 1] = amplitude * np.cos(phase) / _SQRT2
    if 2 * harmonic <= grid.n_modes - 1:
        coeffs[2 * harmonic] = -amplitude * np.sin(phase) / _SQRT2
    elif phase != 0.0:
        raise ValueError("sin partner of the top harmonic is truncated on this grid")
    return SpectralField(grid, coeffs)
