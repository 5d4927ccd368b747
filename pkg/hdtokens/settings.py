"""Application settings, solver limits and generator defaults for hdtokens."""
from __future__ import annotations

import json
import os
from copy import deepcopy
from dataclasses import dataclass
from typing import Any, Dict

from .shared_config import SETTINGS_FILE

DEFAULT_SETTINGS_PATH = SETTINGS_FILE
SEED_ENV_VAR = "HDQ_SEED"

DEFAULT_SETTINGS: Dict[str, Any] = {
    "generator": {
        "seed": 0,
        "states": 4,
        "alphabet": 2,
        "weights": 3,
        "min_out": 1,
        "max_out": 2,
        "valuefn": "Sup",
        "mode": "finite",
        "discount": "1/2",
    },
    "oracle": {
        "max_positions": 1_000_000,
    },
    "discounted": {
        "value_iteration_cap": 200,
        "policy_iteration_cap": 10_000,
        "grid_bits": 32,
    },
    "resolver": {
        "samples": 200,
    },
    "checks": {
        "oracle_instances": 500,
        "boolean_instances": 200,
        "token_instances": 100,
        "dsum_factor_samples": 20,
        "dsum_instances": 50,
        "dsum_enumeration_cap": 64,
        "resolver_instances": 10,
        "size_instances": 50,
        "safety_seconds": 1.0,
        "limsup_seconds": 10.0,
        "strategy_instances": 20,
        "spot_check_plays": 1000,
    },
    "logging": {
        "level": "INFO",
        "to_file": True,
    },
}


@dataclass(frozen=True)
class SolverLimits:
    """Iteration caps and size guards handed to solvers, deciders and the oracle."""
    value_iteration_cap: int = 200
    policy_iteration_cap: int = 10_000
    grid_bits: int = 32
    oracle_max_positions: int = 1_000_000


DEFAULT_LIMITS = SolverLimits()


def _deep_merge(base: Dict[str, Any], updates: Dict[str, Any]) -> Dict[str, Any]:
    out = deepcopy(base)
    for k, v in (updates or {}).items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _deep_merge(out[k], v)
        else:
            out[k] = deepcopy(v)
    return out


def load_settings(path: str = DEFAULT_SETTINGS_PATH) -> Dict[str, Any]:
    if not os.path.exists(path):
        return deepcopy(DEFAULT_SETTINGS)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        return _deep_merge(DEFAULT_SETTINGS, data)
    except Exception:
        return deepcopy(DEFAULT_SETTINGS)


def save_settings(settings: Dict[str, Any], path: str = DEFAULT_SETTINGS_PATH) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(settings, f, ensure_ascii=False, indent=2)


def solver_limits(settings: Dict[str, Any]) -> SolverLimits:
    discounted = settings.get("discounted", {})
    return SolverLimits(
        value_iteration_cap=int(discounted.get("value_iteration_cap", DEFAULT_LIMITS.value_iteration_cap)),
        policy_iteration_cap=int(discounted.get("policy_iteration_cap", DEFAULT_LIMITS.policy_iteration_cap)),
        grid_bits=int(discounted.get("grid_bits", DEFAULT_LIMITS.grid_bits)),
        oracle_max_positions=int(settings.get("oracle", {}).get("max_positions", DEFAULT_LIMITS.oracle_max_positions)),
    )


def default_seed(settings: Dict[str, Any]) -> int:
    """Generator seed: $HDQ_SEED when set to an integer, else the configured seed."""
    raw = os.environ.get(SEED_ENV_VAR, "").strip()
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return int(settings.get("generator", {}).get("seed", 0))
