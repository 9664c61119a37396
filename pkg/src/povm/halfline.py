"""
Moment Lab - Half-Line Momentum Masses

Per-cell momentum distribution of a window function supported on [0, L]:
the samples are extended by zero, Fourier transformed with an FFT and
|transform|^2 is summed over each momentum cell.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict

import numpy as np

from core.errors import InvalidInputError
from povm.grid import CellGrid

logger = logging.getLogger(__name__)

PAD_FACTOR = 4
TOL_DECAY = 1e-6
TOL_TAIL = 1e-6


@dataclass(frozen=True)
class HalfLineMasses:
    masses: np.ndarray
    representatives: np.ndarray
    norm_squared: float
    truncated: bool
    tail_mass: float

    @property
    def total(self) -> float:
        return float(np.sum(self.masses))

    @property
    def first_moment(self) -> float:
        return float(np.dot(self.representatives, self.masses))

    @property
    def plancherel_defect(self) -> float:
        return abs(self.total - self.norm_squared)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'masses': [float(m) for m in self.masses],
            'total': self.total,
            'norm_squared': self.norm_squared,
            'first_moment': self.first_moment,
            'plancherel_defect': self.plancherel_defect,
            'truncated': self.truncated,
            'tail_mass': self.tail_mass,
        }


def sample_window(func: Callable[[np.ndarray], np.ndarray], length: float, points: int) -> np.ndarray:
    """
    Samples func(j h), j = 0..points-1, h = length / points

    Args:
        func: Vectorized window function on [0, length]
        length: Window length L
        points: Number of samples (a power of two for the FFT)

    Returns:
        Complex sample array
    """
    h = length / points
    return np.asarray(func(h * np.arange(points)), dtype=complex)


def _check_power_of_two(n: int):
    if n < 2 or n & (n - 1):
        raise InvalidInputError(f"sample count must be a power of two, got {n}")


def halfline_momentum_measures(samples: np.ndarray, length: float, grid: CellGrid,
                               pad_factor: int = PAD_FACTOR, tol_decay: float = TOL_DECAY,
                               tol_tail: float = TOL_TAIL) -> HalfLineMasses:
    """
    Momentum masses integral_E |F(chi)(k)|^2 dk per grid cell

    Args:
        samples: chi(j h) for j = 0..P-1 with h = length / P, P a power of two
        length: Window length L
        grid: Momentum cells
        pad_factor: Zero padding multiple (power of two)

    Returns:
        HalfLineMasses; `truncated` is set when chi does not decay at L
    """
    chi = np.asarray(samples, dtype=complex).reshape(-1)
    _check_power_of_two(chi.size)
    if pad_factor < 1 or pad_factor & (pad_factor - 1):
        raise InvalidInputError(f"pad factor must be a power of two, got {pad_factor}")
    if not length > 0:
        raise InvalidInputError("window length must be positive")
    h = length / chi.size
    peak = float(np.max(np.abs(chi)))
    if peak == 0:
        raise InvalidInputError("window function is identically zero")
    if abs(chi[0]) > tol_decay * peak:
        raise InvalidInputError(f"window must vanish at 0 (|chi(0)| = {abs(chi[0]):.3e})")
    truncated = bool(abs(chi[-1]) > tol_decay * peak)
    if truncated:
        logger.warning(f"window has not decayed at L={length} (|chi(L)|/max = {abs(chi[-1]) / peak:.3e}); "
                       f"masses are those of the truncated function")

    total_points = chi.size * pad_factor
    transform = h / np.sqrt(2 * np.pi) * np.fft.fft(chi, n=total_points)
    k = 2 * np.pi * np.fft.fftfreq(total_points, d=h)
    dk = 2 * np.pi / (total_points * h)
    density = np.abs(transform) ** 2 * dk
    # Nyquist bin has no mirror partner
    keep = np.arange(total_points) != total_points // 2
    k, density = k[keep], density[keep]

    masses = np.zeros(grid.M)
    lower = np.searchsorted(grid.boundaries, k, side='left')
    upper = np.searchsorted(grid.boundaries, k, side='right')
    on_edge = lower != upper
    np.add.at(masses, lower[~on_edge], density[~on_edge])
    np.add.at(masses, lower[on_edge], density[on_edge] / 2)
    np.add.at(masses, upper[on_edge], density[on_edge] / 2)

    norm_squared = float(h * np.sum(np.abs(chi) ** 2))
    tail = float((masses[0] + masses[-1]) / masses.sum()) if masses.sum() > 0 else 0.0
    if tail > tol_tail:
        logger.warning(f"momentum tails carry {tail:.3e} of the mass (above {tol_tail:g})")
    return HalfLineMasses(masses, grid.representatives.copy(), norm_squared, truncated, tail)
