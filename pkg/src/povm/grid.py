"""
Moment Lab - Cell Grids and Grid POVMs

A finite partition of the real line into M cells
(-inf, x_1], (x_1, x_2], ..., (x_{M-1}, inf) carrying positive effect
matrices that sum to the identity.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from core.errors import InvalidInputError

logger = logging.getLogger(__name__)

TOL_PSD = 1e-10
TOL_SUM = 1e-10


class CellGrid:
    """
    Cells bounded by strictly increasing boundaries, one representative each

    The two tail cells get representatives clamped one median cell width
    beyond the outermost boundaries unless representatives are given.
    """

    def __init__(self, boundaries: Sequence[float], representatives: Optional[Sequence[float]] = None):
        try:
            bounds = np.asarray(boundaries, dtype=float).reshape(-1)
        except (TypeError, ValueError):
            raise InvalidInputError("grid boundaries must be a flat list of numbers")
        if bounds.size < 1:
            raise InvalidInputError("a cell grid needs at least one boundary (two cells)")
        if not np.all(np.isfinite(bounds)) or np.any(np.diff(bounds) <= 0):
            raise InvalidInputError("grid boundaries must be finite and strictly increasing")
        self.boundaries = bounds
        if representatives is None:
            reps = self._default_representatives(bounds)
        else:
            try:
                reps = np.asarray(representatives, dtype=float).reshape(-1)
            except (TypeError, ValueError):
                raise InvalidInputError("grid representatives must be a flat list of numbers")
            if reps.size != bounds.size + 1:
                raise InvalidInputError(f"need {bounds.size + 1} representatives, got {reps.size}")
            for i, rep in enumerate(reps):
                if self.cell_index(rep) != i:
                    raise InvalidInputError(f"representative {rep} lies outside cell {i}")
        self.representatives = reps

    @staticmethod
    def _default_representatives(bounds: np.ndarray) -> np.ndarray:
        widths = np.diff(bounds)
        delta = float(np.median(widths)) if widths.size else 1.0
        mids = (bounds[:-1] + bounds[1:]) / 2
        return np.concatenate([[bounds[0] - delta], mids, [bounds[-1] + delta]])

    @classmethod
    def uniform(cls, lo: float, hi: float, cells: int) -> 'CellGrid':
        """`cells` equal cells on [lo, hi] plus the two tails"""
        if cells < 1 or not lo < hi:
            raise InvalidInputError(f"uniform grid needs lo < hi and cells >= 1, got ({lo}, {hi}, {cells})")
        return cls(np.linspace(lo, hi, cells + 1))

    @property
    def M(self) -> int:
        return self.boundaries.size + 1

    def cell_index(self, x: float) -> int:
        return int(np.searchsorted(self.boundaries, x, side='left'))

    def cell_edges(self, i: int) -> Tuple[float, float]:
        lo = -np.inf if i == 0 else float(self.boundaries[i - 1])
        hi = np.inf if i == self.M - 1 else float(self.boundaries[i])
        return lo, hi

    def is_tail(self, i: int) -> bool:
        return i in (0, self.M - 1)

    def shifted(self, offset: float) -> 'CellGrid':
        """Same cells, representatives moved by offset (kept inside their cells)"""
        return CellGrid(self.boundaries, self.representatives + offset)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CellGrid)
                and np.array_equal(self.boundaries, other.boundaries)
                and np.array_equal(self.representatives, other.representatives))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'boundaries': [float(b) for b in self.boundaries],
            'representatives': [float(r) for r in self.representatives],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CellGrid':
        if not isinstance(data, dict) or 'boundaries' not in data:
            raise InvalidInputError("grid JSON needs 'boundaries'")
        return cls(data['boundaries'], data.get('representatives'))


def _complex_matrix(rows: Any, d: Optional[int] = None) -> np.ndarray:
    """Matrix from nested [re, im] pairs, either row-major flat or as rows"""
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError):
        raise InvalidInputError("matrix entries must be [re, im] pairs")
    if arr.shape[-1] != 2:
        raise InvalidInputError("matrix entries must be [re, im] pairs")
    values = arr[..., 0] + 1j * arr[..., 1]
    if values.ndim == 1:
        size = int(round(np.sqrt(values.size)))
        if size * size != values.size:
            raise InvalidInputError(f"flat effect of length {values.size} is not square")
        values = values.reshape(size, size)
    if d is not None and values.shape != (d, d):
        raise InvalidInputError(f"effect of shape {values.shape}, expected {(d, d)}")
    return values


def _pairs(mat: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(mat).reshape(-1)]


class GridPOVM:
    """Effects Q_i, one d x d matrix per grid cell"""

    def __init__(self, grid: CellGrid, effects: Any):
        try:
            arr = np.asarray(effects, dtype=complex)
        except (TypeError, ValueError):
            raise InvalidInputError("effects must be a stack of equally sized square matrices")
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise InvalidInputError(f"effects must be a stack of square matrices, got shape {arr.shape}")
        if arr.shape[0] != grid.M:
            raise InvalidInputError(f"grid has {grid.M} cells but {arr.shape[0]} effects were given")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("effects must be finite")
        arr.setflags(write=False)
        self.grid = grid
        self.effects = arr

    @property
    def d(self) -> int:
        return self.effects.shape[1]

    @property
    def M(self) -> int:
        return self.effects.shape[0]

    def total(self) -> np.ndarray:
        return np.sum(self.effects, axis=0)

    def is_projective(self, tol: float = 1e-10) -> bool:
        return all(np.max(np.abs(q @ q - q)) <= tol for q in self.effects)

    def idempotence_defect(self) -> float:
        return float(max(np.max(np.abs(q @ q - q)) for q in self.effects))

    def to_dict(self) -> Dict[str, Any]:
        data = self.grid.to_dict()
        data['effects'] = [_pairs(q) for q in self.effects]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GridPOVM':
        if not isinstance(data, dict) or 'effects' not in data:
            raise InvalidInputError("POVM JSON needs 'effects'")
        grid = CellGrid.from_dict(data)
        if not isinstance(data['effects'], list):
            raise InvalidInputError("'effects' must be an array of matrices")
        effects = [_complex_matrix(q) for q in data['effects']]
        shapes = {q.shape for q in effects}
        if len(shapes) != 1:
            raise InvalidInputError(f"effects have mismatched dimensions {sorted(shapes)}")
        return cls(grid, np.stack(effects))


@dataclass(frozen=True)
class PovmValidation:
    ok: bool
    worst_eig: float
    sum_defect: float
    hermitian_defect: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ok': self.ok,
            'worst_eig': self.worst_eig,
            'sum_defect': self.sum_defect,
            'hermitian_defect': self.hermitian_defect,
        }


def validate_povm(q: GridPOVM, tol_psd: float = TOL_PSD, tol_sum: float = TOL_SUM) -> PovmValidation:
    """
    Hermiticity, positivity of every effect and normalization sum Q_i = I

    worst_eig is the smallest eigenvalue over all effects; sum_defect is the
    spectral norm of sum Q_i - I.

    Args:
        q: POVM to check
        tol_psd: Smallest eigenvalue accepted is -tol_psd
        tol_sum: Largest accepted Hermitian and normalization defect

    Returns:
        PovmValidation
    """
    effects = q.effects
    hermitian_defect = float(max(np.max(np.abs(e - e.conj().T)) for e in effects))
    hermitian = (effects + np.conj(np.transpose(effects, (0, 2, 1)))) / 2
    worst_eig = float(min(np.linalg.eigvalsh(e)[0] for e in hermitian))
    sum_defect = float(np.linalg.norm(q.total() - np.eye(q.d), ord=2))
    ok = hermitian_defect <= tol_sum and worst_eig >= -tol_psd and sum_defect <= tol_sum
    if not ok:
        logger.info(f"POVM check failed: worst_eig={worst_eig:.3e}, sum_defect={sum_defect:.3e}, "
                    f"hermitian_defect={hermitian_defect:.3e}")
    return PovmValidation(ok, worst_eig, sum_defect, hermitian_defect)


def random_povm(d: int, M: int, rng: np.random.Generator, grid: Optional[CellGrid] = None) -> GridPOVM:
    """
    Random full-rank POVM: Q_i = S^{-1/2} G_i G_i* S^{-1/2} with S = sum G_i G_i*

    Args:
        d: Hilbert space dimension
        M: Number of cells
        rng: Random generator (seed it for reproducible effects)
        grid: Cell grid with M cells (unit cells centred on 0 by default)

    Returns:
        GridPOVM with Gaussian-random effects
    """
    if d < 1 or M < 2:
        raise InvalidInputError(f"need d >= 1 and M >= 2, got d={d}, M={M}")
    grid = grid or CellGrid(np.arange(1, M) - M / 2)
    if grid.M != M:
        raise InvalidInputError(f"grid has {grid.M} cells, expected {M}")
    g = rng.standard_normal((M, d, d)) + 1j * rng.standard_normal((M, d, d))
    raw = g @ np.conj(np.transpose(g, (0, 2, 1)))
    values, vectors = np.linalg.eigh(np.sum(raw, axis=0))
    inv_sqrt = (vectors / np.sqrt(values)) @ vectors.conj().T
    effects = inv_sqrt @ raw @ inv_sqrt
    effects = (effects + np.conj(np.transpose(effects, (0, 2, 1)))) / 2
    return GridPOVM(grid, effects)


def spectral_povm(matrix: np.ndarray, grid: CellGrid, tol: float = 1e-12) -> GridPOVM:
    """
    PVM of a Hermitian matrix binned on the grid

    Q_i projects onto the eigenvectors whose eigenvalues fall in cell i.

    Args:
        matrix: Hermitian matrix
        grid: Cells binning its eigenvalues
        tol: Relative Hermiticity tolerance

    Returns:
        GridPOVM whose effects are orthogonal projections
    """
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvalidInputError("spectral POVM needs a square matrix")
    scale = max(float(np.max(np.abs(mat))), 1.0)
    if np.max(np.abs(mat - mat.conj().T)) > tol * scale:
        raise InvalidInputError("spectral POVM needs a Hermitian matrix")
    values, vectors = np.linalg.eigh((mat + mat.conj().T) / 2)
    effects = np.zeros((grid.M,) + mat.shape, dtype=complex)
    for value, vec in zip(values, vectors.T):
        i = grid.cell_index(value)
        if grid.is_tail(i):
            logger.warning(f"eigenvalue {value:.6g} falls in a tail cell")
        effects[i] += np.outer(vec, vec.conj())
    return GridPOVM(grid, effects)
