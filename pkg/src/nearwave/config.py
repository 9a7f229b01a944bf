"""Scenario configuration: a single JSON file drives every CLI subcommand.

Top-level sections (each subcommand reads the ones it needs):

    k0_si     input wavenumber [1/m]
    screen    {"mass_kg": ...} or {"K_M_ratio": ...}, exactly one
    aperture  {"kind": "single_slit", "a": ...}
              {"kind": "gaussian", "w": ...}
              {"kind": "tabulated", "path": ...}
    probe     {"particle": "electron" | "mass_kg": ... | "K_mu_ratio": ...,
               "K0_ratio": ..., "z0": ..., "delta_z": ...}
    grating   {"period": ..., "m_max": ...}        (period in lambda0 units)
    grids     {"kx": [..] or range, "x": range, "z": range}
              where range = {"start": ..., "stop": ..., "num": ...}
    scenario  free-form keyword block for the scenario subcommands

Validation failures raise :class:`~nearwave.errors.ConfigError` carrying the
dotted path of the offending field.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .aperture import ApertureProfile, GaussianProfile, SingleSlitProfile, TabulatedProfile
from .errors import ConfigError
from .probe import GaussianPacket
from .quantities import ELECTRON_MASS, ScaledUnits, compton_wavenumber_ratio
from .recoil import ScreenSpec


def load_config(path) -> dict:
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError("<file>", f"config file not found: {p}")
    except json.JSONDecodeError as e:
        raise ConfigError("<file>", f"config is not valid JSON: {e}")
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    return raw


def _section(cfg: dict, name: str) -> dict:
    sec = cfg.get(name)
    if sec is None:
        raise ConfigError(name, "required section is missing")
    if not isinstance(sec, dict):
        raise ConfigError(name, "section must be an object")
    return sec


def _number(sec: dict, key: str, path: str, *, positive: bool = False) -> float:
    if key not in sec:
        raise ConfigError(f"{path}.{key}", "required value is missing")
    val = sec[key]
    if not isinstance(val, (int, float)) or isinstance(val, bool) or not math.isfinite(val):
        raise ConfigError(f"{path}.{key}", f"must be a finite number, got {val!r}")
    if positive and not (val > 0):
        raise ConfigError(f"{path}.{key}", f"must be positive, got {val!r}")
    return float(val)


def units_from(cfg: dict) -> ScaledUnits:
    if "k0_si" not in cfg:
        raise ConfigError("k0_si", "required value is missing")
    val = cfg["k0_si"]
    if not isinstance(val, (int, float)) or isinstance(val, bool) or not (val > 0):
        raise ConfigError("k0_si", f"must be a positive number, got {val!r}")
    return ScaledUnits(k0=float(val))


def screen_from(cfg: dict) -> ScreenSpec:
    sec = _section(cfg, "screen")
    has_mass = "mass_kg" in sec
    has_ratio = "K_M_ratio" in sec
    if has_mass == has_ratio:
        raise ConfigError("screen", "exactly one of mass_kg / K_M_ratio must be present")
    if has_mass:
        mass = _number(sec, "mass_kg", "screen", positive=True)
        return ScreenSpec.from_mass(mass, units_from(cfg))
    return ScreenSpec(K_M=_number(sec, "K_M_ratio", "screen", positive=True))


def aperture_from(cfg: dict) -> ApertureProfile:
    sec = _section(cfg, "aperture")
    kind = sec.get("kind")
    if kind == "single_slit":
        return SingleSlitProfile(a=_number(sec, "a", "aperture", positive=True))
    if kind == "gaussian":
        return GaussianProfile(w=_number(sec, "w", "aperture", positive=True))
    if kind == "tabulated":
        path = sec.get("path")
        if not isinstance(path, str):
            raise ConfigError("aperture.path", "tabulated profiles need a CSV path")
        try:
            return TabulatedProfile.from_csv(path)
        except (OSError, ValueError) as e:
            raise ConfigError("aperture.path", str(e))
    raise ConfigError("aperture.kind", f"unknown profile kind {kind!r}")


def packet_from(cfg: dict) -> GaussianPacket:
    sec = _section(cfg, "probe")
    try:
        return GaussianPacket(
            z0=_number(sec, "z0", "probe"),
            delta_z=_number(sec, "delta_z", "probe", positive=True),
            K0=float(sec.get("K0_ratio", 0.0)),
        )
    except ValueError as e:
        raise ConfigError("probe", str(e))


def probe_kinematics_from(cfg: dict) -> tuple[float, float]:
    """(K0_ratio, K_mu_ratio) for the transfer solver."""
    sec = _section(cfg, "probe")
    K0 = _number(sec, "K0_ratio", "probe")
    if "K_mu_ratio" in sec:
        return K0, _number(sec, "K_mu_ratio", "probe", positive=True)
    if "mass_kg" in sec:
        mass = _number(sec, "mass_kg", "probe", positive=True)
    elif sec.get("particle") == "electron":
        mass = ELECTRON_MASS
    else:
        raise ConfigError("probe", "need one of K_mu_ratio, mass_kg, or particle = 'electron'")
    return K0, compton_wavenumber_ratio(mass, units_from(cfg))


def grating_from(cfg: dict) -> tuple[float, int]:
    sec = _section(cfg, "grating")
    period = _number(sec, "period", "grating", positive=True)
    m_max = sec.get("m_max")
    if not isinstance(m_max, int) or isinstance(m_max, bool) or m_max < 1:
        raise ConfigError("grating.m_max", f"must be an integer >= 1, got {m_max!r}")
    return period, m_max


def _grid(sec: dict, key: str, path: str) -> np.ndarray:
    if key not in sec:
        raise ConfigError(f"{path}.{key}", "required grid is missing")
    spec = sec[key]
    if isinstance(spec, list):
        if not spec:
            raise ConfigError(f"{path}.{key}", "grid list must be non-empty")
        try:
            arr = np.asarray([float(v) for v in spec])
        except (TypeError, ValueError):
            raise ConfigError(f"{path}.{key}", "grid list must contain numbers")
    elif isinstance(spec, dict):
        start = _number(spec, "start", f"{path}.{key}")
        stop = _number(spec, "stop", f"{path}.{key}")
        num = spec.get("num")
        if not isinstance(num, int) or isinstance(num, bool) or num < 1:
            raise ConfigError(f"{path}.{key}.num", f"must be an integer >= 1, got {num!r}")
        if not (stop >= start):
            raise ConfigError(f"{path}.{key}", "stop must be >= start")
        arr = np.linspace(start, stop, num)
    else:
        raise ConfigError(f"{path}.{key}", "grid must be a list or a start/stop/num object")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{path}.{key}", "grid values must be finite")
    return arr


def grid_from(cfg: dict, key: str) -> np.ndarray:
    return _grid(_section(cfg, "grids"), key, "grids")


def scenario_kwargs(cfg: dict, allowed: tuple[str, ...]) -> dict:
    sec = cfg.get("scenario", {})
    if not isinstance(sec, dict):
        raise ConfigError("scenario", "section must be an object")
    out = {}
    for key, val in sec.items():
        if key not in allowed:
            raise ConfigError(f"scenario.{key}", f"unknown key; allowed: {sorted(allowed)}")
        if not isinstance(val, (int, float)) or isinstance(val, bool) or not math.isfinite(val):
            raise ConfigError(f"scenario.{key}", f"must be a finite number, got {val!r}")
        out[key] = float(val)
    return out
