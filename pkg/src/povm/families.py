"""
Moment Lab - Consistent Measure Families

Correspondence between grid POVMs and families of per-cell measures
mu_b(E) = <psi_b | Q(E) psi_b> labelled by probe vectors:
- probe closures: labelled vectors plus the combination table
  (sums, differences, i-rotations, scalings, continuity ladders)
- induced families and their consistency check
- polarization of a seminorm and reconstruction of the POVM from a family
"""

import csv
import io
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from core.errors import (ConditioningError, IncompleteFamilyError, InvalidInputError,
                         PositivityError, UnderdeterminedError)
from povm.grid import TOL_PSD, TOL_SUM, CellGrid, GridPOVM, _pairs, validate_povm

logger = logging.getLogger(__name__)

TOL_FAMILY = 1e-10
TOL_TAIL = 1e-6
MAX_CONDITION = 1e10
LADDER_STEPS = 4
SCALE_FACTOR = 2.0
PHASES = (1, 1j, -1, -1j)


@dataclass(frozen=True)
class Combination:
    """psi_target = psi_left + coefficient * psi_right, or coefficient * psi_left when right is None"""

    target: str
    left: str
    right: Optional[str]
    coefficient: complex

    @property
    def is_scaling(self) -> bool:
        return self.right is None

    def to_dict(self) -> Dict[str, Any]:
        c = complex(self.coefficient)
        return {'target': self.target, 'left': self.left, 'right': self.right,
                'coefficient': [c.real, c.imag]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Combination':
        try:
            re_part, im_part = data['coefficient']
            return cls(data['target'], data['left'], data.get('right'), complex(re_part, im_part))
        except (KeyError, TypeError, ValueError):
            raise InvalidInputError("combination JSON needs target, left, right, coefficient [re, im]")


def _as_array(v: Any) -> np.ndarray:
    return np.asarray(getattr(v, 'components', v), dtype=complex).reshape(-1)


def complex_vector(rows: Any) -> np.ndarray:
    """Vector from [re, im] pairs or plain reals"""
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError):
        raise InvalidInputError("vector entries must be numbers or [re, im] pairs")
    if arr.ndim == 2 and arr.shape[1] == 2:
        return arr[:, 0] + 1j * arr[:, 1]
    if arr.ndim == 1:
        return arr.astype(complex)
    raise InvalidInputError(f"vector of shape {arr.shape} is neither a real list nor [re, im] pairs")


def _phase_label(c: complex) -> str:
    return {1: '+', 1j: '+i', -1: '-', -1j: '-i'}.get(c, f'+({c})')


@dataclass(frozen=True)
class ProbeClosure:
    """Labelled probe vectors and the combinations relating them"""

    vectors: Dict[str, np.ndarray]
    combinations: Tuple[Combination, ...]
    generators: Tuple[str, ...]

    @property
    def labels(self) -> List[str]:
        return list(self.vectors)


def probe_closure(vectors: Sequence, labels: Optional[Sequence[str]] = None,
                  ladder_steps: int = LADDER_STEPS, scale: float = SCALE_FACTOR) -> ProbeClosure:
    """
    Close a list of probe vectors under the combinations the consistency
    check and the polarization need

    For every ordered pair (b, c), b before c: b + i^k c for k = 0..3 and
    c + i^k b for k = 1, 3. For every b: scale * b. For the first pair:
    b + 2^-j c, j = 1..ladder_steps. The zero vector is always included.

    Args:
        vectors: Probe vectors, all of one dimension
        labels: Names for the vectors (v0, v1, ... by default)
        ladder_steps: Number of continuity steps 2^-j
        scale: Factor of the scaling combinations

    Returns:
        ProbeClosure with the labelled vectors and the combination table

    Raises:
        InvalidInputError: empty or mixed-dimension vectors, or bad labels
    """
    base = [_as_array(v) for v in vectors]
    if not base:
        raise InvalidInputError("probe closure needs at least one vector")
    if len({v.size for v in base}) != 1:
        raise InvalidInputError("probe vectors must share one dimension")
    labels = list(labels) if labels is not None else [f"v{i}" for i in range(len(base))]
    if len(labels) != len(base) or len(set(labels)) != len(labels):
        raise InvalidInputError("probe labels must be unique, one per vector")

    out: Dict[str, np.ndarray] = dict(zip(labels, base))
    combos: List[Combination] = []

    def add(target, left, right, coefficient):
        vec = out[left] * coefficient if right is None else out[left] + coefficient * out[right]
        out[target] = vec
        combos.append(Combination(target, left, right, coefficient))

    for i, b in enumerate(labels):
        for c in labels[i + 1:]:
            for phase in PHASES:
                add(f"{b}{_phase_label(phase)}{c}", b, c, phase)
            for phase in (1j, -1j):
                add(f"{c}{_phase_label(phase)}{b}", c, b, phase)
    for b in labels:
        add(f"{scale:g}*{b}", b, None, scale)
    if len(labels) >= 2:
        b, c = labels[0], labels[1]
        for j in range(1, ladder_steps + 1):
            t = 2.0 ** -j
            add(f"{b}+{t:g}*{c}", b, c, t)
    out['0'] = np.zeros_like(base[0])
    return ProbeClosure(out, tuple(combos), tuple(labels))


@dataclass
class ConsistentFamily:
    """Per-cell masses mu_b(E_i) for every labelled vector psi_b"""

    grid: CellGrid
    labels: List[str]
    vectors: Dict[str, np.ndarray]
    measures: np.ndarray
    combinations: Tuple[Combination, ...] = ()
    generators: Tuple[str, ...] = ()

    def __post_init__(self):
        self.measures = np.asarray(self.measures, dtype=float)
        if self.measures.shape != (len(self.labels), self.grid.M):
            raise InvalidInputError(f"measures must have shape {(len(self.labels), self.grid.M)}, "
                                    f"got {self.measures.shape}")
        missing = [label for label in self.labels if label not in self.vectors]
        if missing:
            raise IncompleteFamilyError(f"no vector for labels {missing}", detail={'labels': missing})
        if np.any(self.measures < -TOL_FAMILY):
            raise InvalidInputError("cell masses must be nonnegative")
        if not self.generators:
            targets = {c.target for c in self.combinations}
            self.generators = tuple(label for label in self.labels
                                    if label not in targets and np.any(self.vectors[label]))

    @property
    def d(self) -> int:
        return next(iter(self.vectors.values())).size

    def measure(self, label: str) -> np.ndarray:
        try:
            return self.measures[self.labels.index(label)]
        except ValueError:
            raise IncompleteFamilyError(f"family has no measure for '{label}'", detail={'labels': [label]})

    def with_measure(self, label: str, masses: np.ndarray) -> 'ConsistentFamily':
        measures = self.measures.copy()
        measures[self.labels.index(label)] = masses
        return ConsistentFamily(self.grid, list(self.labels), dict(self.vectors), measures,
                                self.combinations, self.generators)

    def tail_mass(self) -> float:
        """Largest fraction of any measure carried by the two tail cells"""
        totals = self.measures.sum(axis=1)
        tails = self.measures[:, 0] + self.measures[:, -1]
        fractions = np.divide(tails, totals, out=np.zeros_like(tails), where=totals > 0)
        return float(np.max(fractions, initial=0.0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'grid': self.grid.to_dict(),
            'labels': list(self.labels),
            'vectors': {label: [[float(z.real), float(z.imag)] for z in self.vectors[label]]
                        for label in self.labels},
            'measures': [[float(x) for x in row] for row in self.measures],
            'combinations': [c.to_dict() for c in self.combinations],
            'generators': list(self.generators),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ConsistentFamily':
        if not isinstance(data, dict):
            raise InvalidInputError("family JSON must be an object")
        try:
            grid = CellGrid.from_dict(data['grid'])
            labels = list(data['labels'])
            vectors = {label: complex_vector(data['vectors'][label]) for label in labels}
            combos = tuple(Combination.from_dict(c) for c in data.get('combinations', []))
            return cls(grid, labels, vectors, np.asarray(data['measures'], dtype=float),
                       combos, tuple(data.get('generators', ())))
        except KeyError as exc:
            raise InvalidInputError(f"family JSON is missing {exc}")
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed family JSON: {exc}")

    def to_csv(self) -> str:
        """One row per label, one column per cell"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['label'] + [f"{r:.6g}" for r in self.grid.representatives])
        for label, row in zip(self.labels, self.measures):
            writer.writerow([label] + [repr(float(x)) for x in row])
        return buffer.getvalue()


def induced_family(q: GridPOVM, vectors: Any, tol_tail: float = TOL_TAIL) -> ConsistentFamily:
    """
    mu_b(E_i) = <psi_b | Q_i psi_b> for every probe vector

    Args:
        q: POVM
        vectors: ProbeClosure, a label -> vector mapping, or a plain list

    Returns:
        ConsistentFamily carrying the closure's combination table
    """
    if isinstance(vectors, ProbeClosure):
        labelled, combos, generators = vectors.vectors, vectors.combinations, vectors.generators
    elif isinstance(vectors, Mapping):
        labelled, combos, generators = {k: _as_array(v) for k, v in vectors.items()}, (), ()
    else:
        labelled, combos, generators = {f"v{i}": _as_array(v) for i, v in enumerate(vectors)}, (), ()
    if not labelled:
        raise InvalidInputError("induced family needs at least one vector")
    for label, vec in labelled.items():
        if vec.size != q.d:
            raise InvalidInputError(f"vector '{label}' has dimension {vec.size}, POVM acts on C^{q.d}")
    labels = list(labelled)
    stack = np.array([labelled[label] for label in labels])
    masses = np.einsum('lj,ijk,lk->li', stack.conj(), q.effects, stack).real
    masses = np.clip(masses, 0.0, None)
    family = ConsistentFamily(q.grid, labels, dict(labelled), masses, combos, generators)
    tail = family.tail_mass()
    if tail > tol_tail:
        logger.warning(f"tail cells carry {tail:.3e} of the mass (above {tol_tail:g})")
    return family


@dataclass
class ConsistencyReport:
    ok: bool
    worst_defect: float
    parallelogram_defect: float = 0.0
    scaling_defect: float = 0.0
    normalization_defect: float = 0.0
    continuity_ok: bool = True
    continuity_defects: List[Tuple[float, float]] = field(default_factory=list)
    tail_mass: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ok': self.ok,
            'worst_defect': self.worst_defect,
            'parallelogram_defect': self.parallelogram_defect,
            'scaling_defect': self.scaling_defect,
            'normalization_defect': self.normalization_defect,
            'continuity_ok': self.continuity_ok,
            'continuity_defects': [[t, d] for t, d in self.continuity_defects],
            'tail_mass': self.tail_mass,
        }


def _require_labels(f: ConsistentFamily, closure: Sequence[Combination]):
    missing = sorted({label for c in closure for label in (c.target, c.left, c.right)
                      if label is not None and label not in f.labels})
    if missing:
        raise IncompleteFamilyError(f"combination table refers to missing labels {missing}",
                                    detail={'labels': missing})


def consistency_check(f: ConsistentFamily, closure: Optional[Sequence[Combination]] = None,
                      tol: float = TOL_FAMILY) -> ConsistencyReport:
    """
    Cell-by-cell checks of a measure family

    - parallelogram: mu_{b+zc} + mu_{b-zc} = 2 (mu_b + |z|^2 mu_c)
    - scaling: mu_{zb} = |z|^2 mu_b
    - normalization: mu_b(R) = ||psi_b||^2, zero vector -> zero measure
    - continuity ladder b + t c, t = 2^-j: the defect max_E |mu_{b+tc} - mu_b|
      must stay below the envelope t (|b|^2 + |c|^2) + t^2 |c|^2 + tol, which
      shrinks with t. Sampling can falsify, not prove.

    Args:
        f: Measure family
        closure: Combination table (the family's own when omitted)
        tol: Largest accepted defect per cell

    Returns:
        ConsistencyReport with the worst defect of each kind

    Raises:
        IncompleteFamilyError: the table names labels the family lacks
    """
    closure = tuple(f.combinations if closure is None else closure)
    _require_labels(f, closure)
    by_key = {(c.left, c.right, complex(c.coefficient)): c.target for c in closure if not c.is_scaling}

    parallelogram = 0.0
    for (left, right, z), target in by_key.items():
        partner = by_key.get((left, right, -z))
        if partner is None:
            continue
        lhs = f.measure(target) + f.measure(partner)
        rhs = 2.0 * (f.measure(left) + abs(z) ** 2 * f.measure(right))
        parallelogram = max(parallelogram, float(np.max(np.abs(lhs - rhs))))

    scaling = 0.0
    for c in closure:
        if c.is_scaling:
            diff = f.measure(c.target) - abs(c.coefficient) ** 2 * f.measure(c.left)
            scaling = max(scaling, float(np.max(np.abs(diff))))

    normalization = 0.0
    for label in f.labels:
        vec = f.vectors[label]
        normalization = max(normalization,
                            abs(float(f.measure(label).sum()) - float(np.vdot(vec, vec).real)))

    ladders: Dict[Tuple[str, str], List[Tuple[float, str]]] = {}
    for c in closure:
        z = complex(c.coefficient)
        if not c.is_scaling and z.imag == 0 and 0 < z.real < 1:
            ladders.setdefault((c.left, c.right), []).append((z.real, c.target))
    continuity_ok = True
    defects: List[Tuple[float, float]] = []
    for (left, right), steps in ladders.items():
        norm_b = float(np.vdot(f.vectors[left], f.vectors[left]).real)
        norm_c = float(np.vdot(f.vectors[right], f.vectors[right]).real)
        for t, target in sorted(steps, reverse=True):
            defect = float(np.max(np.abs(f.measure(target) - f.measure(left))))
            bound = t * (norm_b + norm_c) + t * t * norm_c + tol
            if defect > bound:
                continuity_ok = False
            defects.append((t, defect))

    worst = max(parallelogram, scaling, normalization)
    ok = worst <= tol and continuity_ok
    if not ok:
        logger.info(f"family inconsistent: parallelogram={parallelogram:.3e}, scaling={scaling:.3e}, "
                    f"normalization={normalization:.3e}, continuity_ok={continuity_ok}")
    return ConsistencyReport(ok, worst, parallelogram, scaling, normalization,
                             continuity_ok, defects, f.tail_mass())


def _polarize(values: Sequence) -> Any:
    """(x|y) = 1/4 sum_k (-i)^k p(x + i^k y)^2 from the four values ordered by k"""
    return sum(np.conj(phase) * v for phase, v in zip(PHASES, values)) / 4


@dataclass(frozen=True)
class GramReport:
    gram: np.ndarray
    hermitian_defect: float
    min_eigenvalue: float
    psd: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'gram': [_pairs(row) for row in self.gram],
            'hermitian_defect': self.hermitian_defect,
            'min_eigenvalue': self.min_eigenvalue,
            'psd': self.psd,
        }


def seminorm_polarization(p_squared: Callable[[np.ndarray], float], vectors: Sequence,
                          tol: float = TOL_FAMILY) -> GramReport:
    """
    Gram matrix (x|y) of a seminorm over a finite vector list

    A negative eigenvalue is reported, not raised: it shows that p does not
    satisfy the parallelogram law on the span of the vectors.

    Args:
        p_squared: Squared seminorm v -> p(v)^2
        vectors: Vectors spanning the subspace of interest
        tol: Relative tolerance for the Hermitian and positivity checks

    Returns:
        GramReport with the Gram matrix and its smallest eigenvalue
    """
    base = [_as_array(v) for v in vectors]
    n = len(base)
    gram = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            gram[i, j] = _polarize([p_squared(base[i] + phase * base[j]) for phase in PHASES])
    hermitian_defect = float(np.max(np.abs(gram - gram.conj().T), initial=0.0))
    min_eig = float(np.linalg.eigvalsh((gram + gram.conj().T) / 2)[0]) if n else 0.0
    scale = max(float(np.max(np.abs(np.diag(gram)))) if n else 0.0, 1.0)
    psd = min_eig >= -tol * scale and hermitian_defect <= tol * scale
    return GramReport(gram, hermitian_defect, min_eig, psd)


def family_to_povm(f: ConsistentFamily, closure: Optional[Sequence[Combination]] = None,
                   max_condition: float = MAX_CONDITION, tol_psd: float = TOL_PSD,
                   tol_sum: float = TOL_SUM) -> GridPOVM:
    """
    Rebuild the POVM from a consistent family

    <psi_b | Q_i psi_c> is polarized from the masses of b + i^k c for every
    pair of generators; the effects then solve W* Q_i W = S_i by two least
    squares solves, W holding the generator vectors as columns.

    Args:
        f: Family carrying the b + i^k c combinations of its generators
        closure: Combination table (the family's own when omitted)
        max_condition: Largest accepted condition number of the generator matrix
        tol_psd: Eigenvalue floor of the rebuilt effects
        tol_sum: Allowed defect of sum Q_i = I

    Returns:
        GridPOVM on the family's grid that passes validate_povm

    Raises:
        IncompleteFamilyError: some b + i^k c combination is missing
        UnderdeterminedError: the generators do not span C^d
        ConditioningError: the generator matrix is too ill conditioned
        InvalidInputError: the rebuilt effects do not sum to the identity
        PositivityError: a rebuilt effect is indefinite beyond tol_psd
    """
    closure = tuple(f.combinations if closure is None else closure)
    _require_labels(f, closure)
    generators = list(f.generators)
    if not generators:
        raise UnderdeterminedError("family has no nonzero generator vectors")
    d = f.d
    w = np.column_stack([f.vectors[g] for g in generators])
    singular = np.linalg.svd(w, compute_uv=False)
    rank = int(np.sum(singular > singular[0] * 1e-12)) if singular[0] > 0 else 0
    if rank < d:
        raise UnderdeterminedError(f"generators {generators} span only {rank} of {d} dimensions",
                                   detail={'labels': generators, 'rank': rank})
    condition = float(singular[0] / singular[d - 1])
    if condition > max_condition:
        raise ConditioningError(f"generator matrix condition {condition:.3e} exceeds {max_condition:g}",
                                detail={'labels': generators, 'condition': condition})

    lookup = {(c.left, c.right, complex(c.coefficient)): c.target for c in closure if not c.is_scaling}
    L = len(generators)
    sesquilinear = np.zeros((f.grid.M, L, L), dtype=complex)
    for a, b in enumerate(generators):
        sesquilinear[:, a, a] = f.measure(b)
        for c_idx in range(a + 1, L):
            c = generators[c_idx]
            targets = [lookup.get((b, c, complex(phase))) for phase in PHASES]
            if None in targets:
                missing = [f"{b}{_phase_label(p)}{c}" for p, t in zip(PHASES, targets) if t is None]
                raise IncompleteFamilyError(f"polarization needs {missing}", detail={'labels': missing})
            value = _polarize([f.measure(t) for t in targets])
            sesquilinear[:, a, c_idx] = value
            sesquilinear[:, c_idx, a] = np.conj(value)

    effects = np.zeros((f.grid.M, d, d), dtype=complex)
    wh = w.conj().T
    for i in range(f.grid.M):
        qw = np.linalg.lstsq(wh, sesquilinear[i], rcond=None)[0]
        q_adj = np.linalg.lstsq(wh, qw.conj().T, rcond=None)[0]
        q = q_adj.conj().T
        effects[i] = (q + q.conj().T) / 2
    povm = GridPOVM(f.grid, effects)
    report = validate_povm(povm, tol_psd, tol_sum)
    if report.sum_defect > tol_sum or report.hermitian_defect > tol_sum:
        raise InvalidInputError(f"rebuilt effects are not normalized (sum defect {report.sum_defect:.3e})",
                                detail=report.to_dict())
    if report.worst_eig < -tol_psd:
        raise PositivityError(f"rebuilt effect has eigenvalue {report.worst_eig:.3e} below -{tol_psd:g}",
                              detail=report.to_dict())
    logger.info(f"rebuilt {f.grid.M}-cell POVM on C^{d} from {L} generators (condition {condition:.2e})")
    return povm
