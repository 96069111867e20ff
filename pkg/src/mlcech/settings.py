"""Numerical settings: defaults, JSON config files and KEY=VALUE overrides."""

import json
from logging import getLogger
from typing import Any, Dict, NamedTuple, Optional, Sequence

from mlcech.errors import SchemaError

logger = getLogger(__name__)


class Settings(NamedTuple):
    """Every tolerance and cap used by the numerical constructions.

    Attributes:
        periodicity_tol (float): Max deviation of a torus solution under periods.
        coefficient_tol (float): Max local-coefficient error of a torus solution.
        identity_tol (float): Max error in (℘′)² = 4℘³ − g2℘ − g3.
        legendre_tol (float): Max error in η₁ω₂ − η₂ω₁ = 2πi.
        residue_tol (float): Residue-sum threshold when residues are inexact.
        theta (float): Pole-push step as a fraction of the distance to K.
        safety_factor (float): Multiplier on raw truncation bounds.
        max_push_steps (int): Cap on pole-push steps.
        max_push_order (int): Cap on re-expansion truncation orders.
        contour_samples (int): Trapezoid nodes for coefficient extraction.
        exclusion_radius (float): Evaluation is refused this close to a pole.
        r_cut (float): Lattice cutoff, in units of the longer period.
        r_inner (float): Directly summed lattice disc, same units.
        moment_order (int): Terms of the outer-shell Taylor expansion.
        periodicity_samples (int): Sample points for periodicity checks.
        stabilization_step (int): M → M + step for stabilization checks.
        window_margin (int): M = Σ|n_x| + margin for O(D).
        seed (int): Seed of every random generator.
    """

    periodicity_tol: float = 1e-6
    coefficient_tol: float = 1e-5
    identity_tol: float = 1e-5
    legendre_tol: float = 1e-6
    residue_tol: float = 1e-12
    theta: float = 0.5
    safety_factor: float = 10.0
    max_push_steps: int = 400
    max_push_order: int = 4000
    contour_samples: int = 256
    exclusion_radius: float = 1e-6
    r_cut: float = 600.0
    r_inner: float = 16.0
    moment_order: int = 30
    periodicity_samples: int = 50
    stabilization_step: int = 1
    window_margin: int = 3
    seed: int = 0


DEFAULT_SETTINGS = Settings()


def _coerce(key: str, value: Any) -> Any:
    if key not in Settings._fields:
        raise SchemaError(f"Unknown setting '{key}'")
    kind = type(Settings._field_defaults[key])
    try:
        if isinstance(value, str):
            value = json.loads(value)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TypeError(value)
        if kind is int and float(value) != int(value):
            raise TypeError(value)
        return kind(value)
    except (TypeError, ValueError) as e:
        raise SchemaError(f"Setting '{key}' needs a {kind.__name__}, got {value!r}") from e


def _check(settings: Settings) -> None:
    if not 0 < settings.theta < 1:
        raise SchemaError(f"theta must lie in (0, 1), got {settings.theta}")
    if settings.safety_factor < 1:
        raise SchemaError(f"safety_factor must be at least 1, got {settings.safety_factor}")
    if not 0 < settings.r_inner < settings.r_cut:
        raise SchemaError("Lattice radii need 0 < r_inner < r_cut")
    for key in ("max_push_steps", "max_push_order", "moment_order", "stabilization_step"):
        if getattr(settings, key) < 1:
            raise SchemaError(f"{key} must be positive")


def load_settings(
    config: Optional[str] = None, overrides: Sequence[str] = ()
) -> Settings:
    """Merges the defaults, a JSON config file and KEY=VALUE overrides.

    Args:
        config (Optional[str]): Path to a JSON object of settings.
        overrides (Sequence[str]): "KEY=VALUE" strings, applied last.

    Raises:
        SchemaError: If a key is unknown, a value has the wrong type, or the
            result is out of range.
        OSError: If `config` cannot be read.

    Returns:
        A[n] `Settings`.
    """
    values: Dict[str, Any] = {}
    if config is not None:
        with open(config) as f:
            try:
                doc = json.load(f)
            except json.JSONDecodeError as e:
                raise SchemaError(f"Config '{config}' is not valid JSON: {e}") from e
        if not isinstance(doc, dict):
            raise SchemaError(f"Config '{config}' must hold a JSON object")
        values.update({k: _coerce(k, v) for k, v in doc.items()})
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise SchemaError(f"Override '{item}' is not of the form KEY=VALUE")
        values[key.strip()] = _coerce(key.strip(), value.strip())
    settings = DEFAULT_SETTINGS._replace(**values)
    _check(settings)
    logger.debug(f"effective settings: {settings}")
    return settings
