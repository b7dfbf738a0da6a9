"""Scenario configuration files: a single JSON document per scenario.

Keys: name, l, closed, profiles (k, k_g, a, b, tau as needed), optional
tolerances, optional strip half-width. Profiles are declared as
{kind: fourier|polynomial|constant, coeffs: [...], period?} with the period
defaulting to l for Fourier profiles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .chart import UmbilicSurfaceSpec
from .errors import ConfigError, ProfileSpecError
from .profiles import ScalarProfile, constant_profile, profile_from_config

KNOWN_PROFILES = ("k", "k_g", "a", "b", "tau")
CHART_PROFILES = ("k", "k_g", "a")      # b defaults to 0

DEFAULT_TOLERANCES = {
    "closure": 1e-6,
    "jet": 1e-8,
}


@dataclass
class Scenario:
    name: str
    l: float
    closed: bool
    profiles: dict[str, ScalarProfile]
    tolerances: dict[str, float] = field(default_factory=dict)
    v_max: float | None = None

    def tolerance(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def require_profiles(self, names: tuple[str, ...]) -> None:
        for n in names:
            if n not in self.profiles:
                raise ConfigError(f"scenario {self.name!r}: missing required profile {n!r}")

    def surface_spec(self, frame_step: float = 1e-3) -> UmbilicSurfaceSpec:
        self.require_profiles(CHART_PROFILES)
        b = self.profiles.get("b", constant_profile(0.0))
        return UmbilicSurfaceSpec.build(
            self.l, self.profiles["k"], self.profiles["k_g"], self.profiles["a"], b,
            closed=self.closed, v_max=self.v_max, frame_step=frame_step,
        )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"scenario file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario file {path}: invalid JSON ({exc})")
    return scenario_from_dict(raw, default_name=path.stem)


def scenario_from_dict(raw: dict, default_name: str = "scenario") -> Scenario:
    if not isinstance(raw, dict):
        raise ConfigError("scenario: top level must be a mapping")
    name = raw.get("name", default_name)
    if "l" not in raw:
        raise ConfigError("scenario: missing field 'l'")
    try:
        l = float(raw["l"])
    except (TypeError, ValueError):
        raise ConfigError("scenario: field 'l' must be a number")
    if l <= 0:
        raise ConfigError("scenario: field 'l' must be positive")
    closed = bool(raw.get("closed", False))
    profiles_raw = raw.get("profiles")
    if not isinstance(profiles_raw, dict) or not profiles_raw:
        raise ConfigError("scenario: missing or empty 'profiles' mapping")
    profiles = {}
    for pname, cfg in profiles_raw.items():
        if pname not in KNOWN_PROFILES:
            raise ConfigError(f"scenario: unknown profile {pname!r} "
                              f"(expected one of {', '.join(KNOWN_PROFILES)})")
        try:
            profiles[pname] = profile_from_config(cfg, pname, period_hint=l)
        except ProfileSpecError as exc:
            raise ConfigError(f"scenario: {exc}")
    tolerances = raw.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ConfigError("scenario: 'tolerances' must be a mapping")
    for key, val in tolerances.items():
        if key not in DEFAULT_TOLERANCES:
            raise ConfigError(f"scenario: unknown tolerance {key!r}")
        try:
            tolerances[key] = float(val)
        except (TypeError, ValueError):
            raise ConfigError(f"scenario: tolerance {key!r} must be a number")
    v_max = raw.get("strip")
    if v_max is not None:
        try:
            v_max = float(v_max)
        except (TypeError, ValueError):
            raise ConfigError("scenario: field 'strip' must be a number")
        if v_max <= 0:
            raise ConfigError("scenario: field 'strip' must be positive")
    if closed:
        for pname, prof in profiles.items():
            if prof.kind == "fourier":
                ratio = l / prof.period
                if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
                    raise ConfigError(
                        f"scenario: profile {pname!r} period {prof.period} does not divide l={l}")
    return Scenario(name=str(name), l=l, closed=closed, profiles=profiles,
                    tolerances=dict(tolerances), v_max=v_max)


def builtin_scenario_dir() -> Path:
    return Path(__file__).parent / "scenarios"


def builtin_scenarios() -> list[Path]:
    return sorted(builtin_scenario_dir().glob("*.json"))
