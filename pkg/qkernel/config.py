"""
Run configuration for the verification harness.

Sources, lowest to highest precedence: dataclass defaults, a .env file,
environment variables (QKERNEL_MAX_TERMS, QKERNEL_SEED), a JSON config file,
explicit CLI flags (applied by qkernel.qcli).
"""

import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from dotenv import load_dotenv

from qkernel.qcore import DomainError, Mode, QContext, TruncationPolicy

logger = logging.getLogger(__name__)

ENV_MAX_TERMS = "QKERNEL_MAX_TERMS"
ENV_SEED = "QKERNEL_SEED"
DEFAULT_SEED = 1729


class ConfigError(ValueError):
    """Malformed run configuration."""


@dataclass(frozen=True)
class Tolerances:
    """Pass thresholds per identity class."""
    exact: float = 0.0
    float_identity: float = 1e-11
    float_series: float = 1e-10
    bailey: float = 1e-8
    asymptotic: float = 1e-4
    expansion: float = 1e-9
    orthogonality: float = 1e-10

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Tolerances":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown tolerance classes: {sorted(unknown)}")
        try:
            values = {k: float(v) for k, v in data.items()}
        except (TypeError, ValueError) as e:
            raise ConfigError(f"tolerances must be numbers: {e}") from e
        if any(v < 0 for v in values.values()):
            raise ConfigError("tolerances must be >= 0")
        return cls(**values)


@dataclass
class RunConfig:
    """Everything a verification run depends on."""
    q: Fraction = Fraction(1, 2)
    mode: Optional[Mode] = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    tol_override: Optional[float] = None
    samples: Optional[int] = None
    seed: int = DEFAULT_SEED
    out: Optional[str] = None
    only: List[str] = field(default_factory=list)
    jobs: int = 1
    record_timing: bool = False
    progress: bool = False
    expected_failures: List[str] = field(default_factory=lambda: ["gf.bailey"])
    trunc: TruncationPolicy = field(default_factory=TruncationPolicy)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        """
        Raises:
            ConfigError: q outside (0, 1), samples < 1 or jobs < 1
        """
        if not 0 < self.q < 1:
            raise ConfigError(f"q must lie in (0, 1), got {self.q}")
        if self.samples is not None and self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if self.tol_override is not None and self.tol_override < 0:
            raise ConfigError(f"tol must be >= 0, got {self.tol_override}")

    def threshold(self, tolerance_class: str) -> float:
        """Threshold for an identity class, honoring a global --tol."""
        if self.tol_override is not None:
            return self.tol_override
        return getattr(self.tolerances, tolerance_class)

    def context(self, mode: Mode) -> QContext:
        """Arithmetic context for an identity whose default mode is `mode`."""
        chosen = self.mode or mode
        if chosen is Mode.EXACT:
            return QContext.exact(self.q, self.trunc)
        return QContext.floating(self.q, self.trunc)

    def with_overrides(self, **overrides) -> "RunConfig":
        """Copy with the non-None overrides applied."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        try:
            return replace(self, **changes)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base: Optional["RunConfig"] = None) -> "RunConfig":
        """
        Apply the keys of a JSON config object on top of `base`.

        Raises:
            ConfigError: unknown keys or values of the wrong type
        """
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        base = base or cls()
        allowed = {f.name for f in fields(cls)} | {"max_terms"}
        unknown = set(data) - allowed
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")

        changes: Dict[str, Any] = {}
        try:
            for key, value in data.items():
                if key == "q":
                    changes["q"] = parse_q(value)
                elif key == "mode":
                    changes["mode"] = None if value is None else Mode(value)
                elif key == "tolerances":
                    changes["tolerances"] = replace(base.tolerances, **_tolerance_changes(value))
                elif key == "tol_override":
                    changes["tol_override"] = None if value is None else float(value)
                elif key == "samples":
                    changes["samples"] = None if value is None else int(value)
                elif key in ("seed", "jobs"):
                    changes[key] = int(value)
                elif key in ("record_timing", "progress"):
                    changes[key] = bool(value)
                elif key in ("only", "expected_failures"):
                    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                        raise ConfigError(f"{key} must be a list of strings")
                    changes[key] = list(value)
                elif key == "out":
                    changes["out"] = None if value is None else str(value)
                elif key == "max_terms":
                    changes["trunc"] = replace(base.trunc, max_terms=int(value))
                elif key == "trunc":
                    changes["trunc"] = TruncationPolicy(**value)
        except ConfigError:
            raise
        except (TypeError, ValueError, DomainError) as e:
            raise ConfigError(f"bad config value: {e}") from e
        return replace(base, **changes)


def _tolerance_changes(value: Any) -> Dict[str, float]:
    if not isinstance(value, dict):
        raise ConfigError("tolerances must be an object")
    checked = Tolerances.from_dict(value)
    return {k: getattr(checked, k) for k in value}


def parse_q(value: Union[str, int, float, Fraction]) -> Fraction:
    """q as an exact rational; decimal strings like '0.4' become 2/5."""
    try:
        q = Fraction(str(value)) if isinstance(value, (str, float)) else Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"q is not a rational number: {value!r}") from e
    if not 0 < q < 1:
        raise ConfigError(f"q must lie in (0, 1), got {value}")
    return q


def load_environment(dotenv_path: Optional[str] = None) -> None:
    """Load a .env file into os.environ without overriding existing variables."""
    loaded = load_dotenv(dotenv_path=dotenv_path, override=False)
    if loaded:
        logger.debug(f"Loaded environment from {dotenv_path or '.env'}")


def truncation_from_env(base: Optional[TruncationPolicy] = None) -> TruncationPolicy:
    """
    Truncation policy with QKERNEL_MAX_TERMS applied.

    Raises:
        ConfigError: the variable is not a positive integer
    """
    base = base or TruncationPolicy()
    raw = os.getenv(ENV_MAX_TERMS)
    if not raw:
        return base
    try:
        return replace(base, max_terms=int(raw))
    except (ValueError, DomainError) as e:
        raise ConfigError(f"{ENV_MAX_TERMS} must be a positive integer, got {raw!r}") from e


def config_from_env(base: Optional[RunConfig] = None) -> RunConfig:
    """Defaults with QKERNEL_MAX_TERMS and QKERNEL_SEED applied."""
    base = base or RunConfig()
    changes: Dict[str, Any] = {"trunc": truncation_from_env(base.trunc)}
    raw_seed = os.getenv(ENV_SEED)
    if raw_seed:
        try:
            changes["seed"] = int(raw_seed)
        except ValueError as e:
            raise ConfigError(f"{ENV_SEED} must be an integer, got {raw_seed!r}") from e
    return replace(base, **changes)


def load_run_config(path: Optional[Union[str, Path]] = None, base: Optional[RunConfig] = None) -> RunConfig:
    """
    Environment-aware config, with a JSON file applied on top when given.

    Raises:
        ConfigError: unreadable or malformed file
    """
    config = config_from_env(base)
    if path is None:
        return config
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    logger.info(f"Loaded run config from {path}")
    return RunConfig.from_dict(data, config)
