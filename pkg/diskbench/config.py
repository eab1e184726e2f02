"""Experiment configuration for the command line runner."""

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .errors import ConfigError
from .models import DEFAULT_LADDER, RadiiLadder

COMMANDS = ["verify", "project", "sweep", "spectrum", "atvar", "dimension", "motion", "manifest"]
FORMATS = ["csv", "jsonl"]


def parse_float_grid(text: str) -> List[float]:
    """Parse ``0.1,0.5,0.9`` or ``start:stop:count`` into floats."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            n = int(count)
            if n < 1:
                raise ValueError("count must be positive")
            if n == 1:
                return [float(start)]
            step = (float(stop) - float(start)) / (n - 1)
            return [float(start) + i * step for i in range(n)]
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"Invalid grid '{text}': {e}") from e


def parse_complex_list(text: str) -> List[complex]:
    try:
        return [complex(part.strip().replace(" ", "")) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"Invalid complex list '{text}': {e}") from e


def parse_ladder(text: str) -> Tuple[int, int]:
    try:
        m_min, m_max = (int(part) for part in text.split(":"))
    except ValueError as e:
        raise ConfigError(f"Invalid ladder '{text}', expected m_min:m_max") from e
    return m_min, m_max


@dataclass
class ExperimentConfig:
    """Everything a run needs; fixed values give byte-identical output."""

    command: str = "verify"
    symbol: str = "mu0"
    a_grid: List[float] = field(default_factory=lambda: [0.1 * i for i in range(1, 10)])
    t: List[complex] = field(default_factory=lambda: [2.0 + 0j])
    tau_grid: List[float] = field(default_factory=lambda: [1.0, 1.5, 2.0, 4.0])
    ladder: Tuple[int, int] = DEFAULT_LADDER
    truncation: int = 256
    points: int = 8
    k_prime: List[float] = field(default_factory=lambda: [0.05, 0.1])
    R: float = 1.05
    lam: complex = 0.5 + 0j
    suite: str = "all"
    seed: int = 0
    format: str = "csv"
    out: Optional[str] = None
    plot_data: Optional[str] = None
    report: Optional[str] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown field: {', '.join(sorted(unknown))}")
        data = dict(data)
        if "t" in data:
            data["t"] = [complex(v) if not isinstance(v, str) else complex(v.replace(" ", "")) for v in data["t"]]
        if "lam" in data:
            value = data["lam"]
            data["lam"] = complex(value.replace(" ", "")) if isinstance(value, str) else complex(value)
        if "ladder" in data:
            ladder = data["ladder"]
            data["ladder"] = parse_ladder(ladder) if isinstance(ladder, str) else tuple(ladder)
        try:
            config = cls(**data)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid configuration: {e}") from e
        return config.validate()

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        """Load a JSON configuration file.

        Raises:
            ConfigError: If the file is missing, not JSON or invalid
        """
        file_path = Path(path)
        if not file_path.exists():
            raise ConfigError(f"Config file not found: {path}")
        try:
            with open(file_path) as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Malformed config file {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must hold a JSON object")
        return cls.from_dict(data)

    def validate(self) -> "ExperimentConfig":
        """Check grids and ranges.

        Raises:
            ConfigError: On the first invalid field
        """
        if self.command not in COMMANDS:
            raise ConfigError(f"Invalid value for command: {self.command}. Allowed values: {', '.join(COMMANDS)}")
        if self.format not in FORMATS:
            raise ConfigError(f"Invalid value for format: {self.format}. Allowed values: {', '.join(FORMATS)}")
        for name in ("a_grid", "t", "tau_grid", "k_prime"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must not be empty")
        if any(a < 0 for a in self.a_grid):
            raise ConfigError("a_grid values must be nonnegative")
        if any(tau <= 0 for tau in self.tau_grid):
            raise ConfigError("tau_grid values must be positive")
        if any(not 0 <= kp <= 1 for kp in self.k_prime):
            raise ConfigError("k_prime values must lie in [0, 1]")
        m_min, m_max = self.ladder
        if m_min < 1 or m_max < m_min:
            raise ConfigError(f"Invalid ladder {m_min}:{m_max}")
        if self.truncation < 1:
            raise ConfigError("truncation must be at least 1")
        if self.points < 1:
            raise ConfigError("points must be at least 1")
        if not self.R > 1:
            raise ConfigError(f"R must exceed 1, got {self.R}")
        if not abs(self.lam) < 1:
            raise ConfigError(f"lambda must lie in the unit disk, got {self.lam}")
        return self

    def radii_ladder(self) -> RadiiLadder:
        return RadiiLadder.dyadic(*self.ladder)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["t"] = [str(v) for v in self.t]
        data["lam"] = str(self.lam)
        data["ladder"] = list(self.ladder)
        return data
