"""Configuration and settings management."""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# Base paths
BASE_DIR = Path(__file__).parent.parent
CONFIG_DIR = BASE_DIR / "config"
DATA_DIR = BASE_DIR / "data"
REPORTS_DIR = DATA_DIR / "REPORTS"

TOOL_VERSION = "1.0.0"
REPORT_SCHEMA = "cheby-report/1"

# Load .env only if it exists (optional for development)
# Environment variables take precedence over .env file
ENV_FILE = BASE_DIR / ".env"
if ENV_FILE.exists():
    load_dotenv(ENV_FILE, override=False)


DEFAULT_CONFIG: Dict[str, Any] = {
    "numerics": {
        "tolerance": 1e-10,
        "max_subdivisions": 2000,
        "slack": 1e-7,
        "equality_tol": 1e-7,
    },
    "profile": {
        "sup_mesh_points": 1025,
        "sup_refine_candidates": 5,
        "convexity_mesh_points": 65,
        "convexity_eps": 1e-9,
        "monotone_mesh_points": 1025,
    },
    "bounds": {
        "atkinson_moment_tol": 1e-8,
        "chain_tol": 1e-12,
    },
    "families": {
        "coefficient_range": [0.0, 3.0],
        "degree": 3,
        "segments": 3,
        "rescale_interval": True,
        "interval_offset_range": [-2.0, 2.0],
        "interval_length_range": [0.5, 3.0],
    },
    "search": {
        "sigma": 0.5,
        "anneal_factor": 0.9,
        "anneal_every": 100,
        "restart_every": 1000,
        "ratio_ceiling": 1.000001,
    },
    "hcurve": {"delta": 1e-4},
    "suites": {"default_cases": 1000, "workers": 1},
}


def _is_truthy(value: Optional[str]) -> bool:
    """Check if environment variable value is truthy."""
    if not value:
        return False
    return value.lower() in ("1", "true", "yes", "on")


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively overlay ``override`` onto a copy of ``base``."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_cheby_config(path: Optional[Path] = None) -> Dict[str, Any]:
    """
    Load numeric configuration from YAML, layered over built-in defaults.

    Args:
        path: Alternative YAML file (defaults to config/cheby.yaml)

    Returns:
        Nested dict with keys: numerics, profile, bounds, families, search, hcurve, suites
    """
    config_path = path or CONFIG_DIR / "cheby.yaml"
    if not config_path.exists():
        return copy.deepcopy(DEFAULT_CONFIG)
    with open(config_path, "r", encoding="utf-8") as f:
        loaded = yaml.safe_load(f) or {}
    validate_config(loaded)
    return _merge(DEFAULT_CONFIG, loaded)


def validate_config(config: Dict[str, Any]) -> None:
    """
    Basic schema validation for cheby.yaml.

    Logs warnings for unknown sections or type mismatches.
    Does NOT raise; a partial config runs on defaults.

    Args:
        config: Loaded config dict
    """
    for section, values in config.items():
        if section not in DEFAULT_CONFIG:
            logger.warning(f"cheby.yaml: unknown top-level key '{section}' (ignored)")
            continue
        if not isinstance(values, dict):
            logger.warning(f"cheby.yaml: section '{section}' should be a mapping")
            continue
        for key, val in values.items():
            expected = DEFAULT_CONFIG[section].get(key)
            if expected is None:
                logger.warning(f"cheby.yaml: unknown key '{section}.{key}'")
            elif isinstance(expected, bool) != isinstance(val, bool):
                logger.warning(
                    f"cheby.yaml: '{section}.{key}' expected bool, got {type(val).__name__}"
                )
            elif isinstance(expected, (int, float)) and not isinstance(val, (int, float)):
                logger.warning(
                    f"cheby.yaml: '{section}.{key}' expected number, got {type(val).__name__}"
                )


_defaults_cache: Optional[Dict[str, Any]] = None


def get_defaults() -> Dict[str, Any]:
    """
    Return the merged configuration (cached after the first load).

    Centralises the numeric constants so core modules never hardcode them.
    """
    global _defaults_cache
    if _defaults_cache is None:
        _defaults_cache = load_cheby_config()
    return _defaults_cache


def reset_defaults_cache() -> None:
    """Drop the cached config (tests use this after editing env vars)."""
    global _defaults_cache
    _defaults_cache = None


def get_setting(path: str, default: Any = None) -> Any:
    """
    Look up a dotted setting such as ``"profile.convexity_eps"``.

    Args:
        path: Dotted key path
        default: Value returned when any segment is missing
    """
    node: Any = get_defaults()
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node


def _float_from_env(var: str, fallback: float) -> float:
    raw = os.getenv(var)
    if not raw:
        return fallback
    try:
        value = float(raw)
    except ValueError:
        logger.warning(f"{var}={raw!r} is not a number; using {fallback}")
        return fallback
    if value <= 0:
        logger.warning(f"{var} must be positive; using {fallback}")
        return fallback
    return value


def get_tolerance() -> float:
    """Default quadrature tolerance; ``CHEBY_TOL`` overrides the YAML value."""
    return _float_from_env("CHEBY_TOL", float(get_setting("numerics.tolerance", 1e-10)))


def get_slack() -> float:
    """Inequality slack; ``CHEBY_SLACK`` overrides the YAML value."""
    return _float_from_env("CHEBY_SLACK", float(get_setting("numerics.slack", 1e-7)))


def rescale_enabled() -> bool:
    """Whether generated families are affinely rescaled away from [0,1]."""
    if _is_truthy(os.getenv("CHEBY_NO_RESCALE")):
        return False
    return bool(get_setting("families.rescale_interval", True))
