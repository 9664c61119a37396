"""
Moment Lab - Run Configuration

Layered configuration for every command:
- built-in defaults
- JSON file (--config)
- MOMENT_LAB_* environment variables, with a .env file loaded first
- command-line flags
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values, find_dotenv

from core.errors import InvalidInputError
from povm.grid import CellGrid

logger = logging.getLogger(__name__)

ENV_PREFIX = 'MOMENT_LAB_'
MIN_PRECISION = 16
OUTPUT_FORMATS = ('json', 'csv', 'table')

DEFAULT_TOLERANCES: Dict[str, float] = {
    'tol_psd': 1e-10,
    'tol_sum': 1e-10,
    'tol_recon': 1e-10,
    'tol_krein': 1e-6,
    'tol_tail': 1e-6,
    'tol_moment': 1e-8,
}


@dataclass(frozen=True)
class GridPolicy:
    """Uniform momentum/spectral grid: `cells` cells on [lo, hi] plus two tails"""

    lo: float = -12.0
    hi: float = 12.0
    cells: int = 48

    def build(self) -> CellGrid:
        return CellGrid.uniform(self.lo, self.hi, self.cells)


@dataclass(frozen=True)
class RunConfig:
    precision_digits: int = 50
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    krein_base_window: float = 8.0
    krein_max_doublings: int = 64
    halfline_length: float = 40.0
    halfline_points: int = 2 ** 14
    halfline_pad_factor: int = 4
    grid: GridPolicy = field(default_factory=GridPolicy)
    output: str = 'table'
    reproduce_moments: int = 40
    report_dir: Optional[str] = None
    log_level: str = 'WARNING'

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.precision_digits < MIN_PRECISION:
            raise InvalidInputError(f"precision_digits must be >= {MIN_PRECISION}, got {self.precision_digits}")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise InvalidInputError(f"unknown tolerances {sorted(unknown)}")
        for name, value in self.tolerances.items():
            if not value > 0:
                raise InvalidInputError(f"tolerance {name} must be positive, got {value}")
        if self.output not in OUTPUT_FORMATS:
            raise InvalidInputError(f"output must be one of {OUTPUT_FORMATS}, got '{self.output}'")
        if self.krein_base_window <= 1 or self.krein_max_doublings < 2:
            raise InvalidInputError("Krein window must exceed 1 and allow at least 2 doublings")
        if self.halfline_points < 2 or self.halfline_points & (self.halfline_points - 1):
            raise InvalidInputError(f"halfline_points must be a power of two, got {self.halfline_points}")
        if self.reproduce_moments < 4:
            raise InvalidInputError("reproduce_moments must be at least 4")
        if not self.grid.lo < self.grid.hi or self.grid.cells < 1:
            raise InvalidInputError("grid needs lo < hi and at least one cell")

    def tol(self, name: str) -> float:
        key = name if name.startswith('tol_') else f'tol_{name}'
        try:
            return self.tolerances[key]
        except KeyError:
            raise InvalidInputError(f"unknown tolerance '{name}'")

    def merged(self, values: Mapping[str, Any]) -> 'RunConfig':
        """New config with the given (already typed or string) values applied"""
        changes: Dict[str, Any] = {}
        tolerances = dict(self.tolerances)
        grid = asdict(self.grid)
        kinds = {f.name: f for f in fields(self)}
        for key, value in values.items():
            if value is None:
                continue
            if key == 'tolerances':
                for name, tol in dict(value).items():
                    tolerances[name if name.startswith('tol_') else f'tol_{name}'] = _as_float(name, tol)
            elif key in DEFAULT_TOLERANCES:
                tolerances[key] = _as_float(key, value)
            elif key == 'grid':
                grid.update(dict(value))
            elif key.startswith('grid_') and key[5:] in grid:
                grid[key[5:]] = value
            elif key in kinds:
                changes[key] = _coerce(key, value, getattr(self, key))
            else:
                raise InvalidInputError(f"unknown configuration key '{key}'")
        try:
            policy = GridPolicy(float(grid['lo']), float(grid['hi']), int(grid['cells']))
        except (TypeError, ValueError):
            raise InvalidInputError(f"invalid grid settings {grid}")
        return replace(self, tolerances=tolerances, grid=policy, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _as_float(name: str, value: Any) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"tolerance {name} must be a number, got '{value}'")


def _coerce(name: str, value: Any, current: Any) -> Any:
    if name == 'report_dir':
        return str(value) if value else None
    try:
        if isinstance(current, bool):
            return str(value).lower() in ('1', 'true', 'yes')
        if isinstance(current, int):
            return int(value)
        if isinstance(current, float):
            return float(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"configuration key {name} got invalid value '{value}'")
    return str(value) if name != 'log_level' else str(value).upper()


def parse_tol_override(text: str) -> Dict[str, float]:
    """'tol_psd=1e-8' or 'psd=1e-8' -> {'tol_psd': 1e-8}"""
    name, sep, value = text.partition('=')
    if not sep:
        raise InvalidInputError(f"tolerance override must be name=value, got '{text}'")
    name = name.strip()
    key = name if name.startswith('tol_') else f'tol_{name}'
    if key not in DEFAULT_TOLERANCES:
        raise InvalidInputError(f"unknown tolerance '{name}'")
    return {key: _as_float(key, value)}


def environment_values(environ: Optional[Mapping[str, str]] = None,
                       dotenv_path: Optional[str] = None) -> Dict[str, str]:
    """
    MOMENT_LAB_* settings, lowercased and without the prefix

    Values from a .env file are used unless the real environment sets them too.
    """
    if environ is None:
        path = dotenv_path or find_dotenv(usecwd=True)
        merged = {**(dotenv_values(path) if path else {}), **os.environ}
    else:
        merged = dict(environ)
    return {key[len(ENV_PREFIX):].lower(): value for key, value in merged.items()
            if key.startswith(ENV_PREFIX) and value is not None}


def load_config(path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None,
                environ: Optional[Mapping[str, str]] = None,
                dotenv_path: Optional[str] = None) -> RunConfig:
    """
    Build the run configuration

    Args:
        path: Optional JSON file
        overrides: Command-line values (highest priority); None entries are ignored
        environ: Environment mapping (os.environ plus .env when omitted)

    Returns:
        Validated RunConfig
    """
    config = RunConfig()
    if path:
        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except OSError as e:
            raise InvalidInputError(f"cannot read config file {path}: {e}")
        except json.JSONDecodeError as e:
            raise InvalidInputError(f"config file {path} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise InvalidInputError(f"config file {path} must hold a JSON object")
        config = config.merged(data)
        logger.info(f"loaded configuration from {path}")
    env = environment_values(environ, dotenv_path)
    if env:
        config = config.merged(env)
        logger.info(f"applied environment settings {sorted(env)}")
    if overrides:
        config = config.merged(overrides)
    return config
