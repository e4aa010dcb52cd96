"""Scenario configs: ini files with one section per scenario."""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Param:
    kind: str  # str | int | float | floats | ints | optional_float
    default: Any
    check: Callable[[Any], bool] = lambda v: True
    rule: str = ""
    doc: str = ""


def _parse_value(name: str, text: str, p: Param):
    text = text.strip()
    try:
        if p.kind == "str":
            return text
        if p.kind == "int":
            return int(text)
        if p.kind == "float":
            return float(text)
        if p.kind == "optional_float":
            return None if text.lower() in ("", "none", "auto") else float(text)
        if p.kind == "ints":
            return [int(v) for v in text.replace(",", " ").split()]
        if p.kind == "floats":
            return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"{name} = {text!r} is not a valid {p.kind}") from None
    raise ConfigError(f"unknown parameter kind {p.kind}")


@dataclass
class ScenarioConfig:
    scenario: str
    params: dict
    out: Path
    seed: int = 0
    sections: dict = field(default_factory=dict)  # raw sections, used by 'full'


def resolve_params(scenario: str, schema: dict, raw: dict) -> dict:
    unknown = sorted(set(raw) - set(schema) - {"seed"})
    if unknown:
        raise ConfigError(f"unknown keys for {scenario}: {', '.join(unknown)}")
    out = {}
    for name, p in schema.items():
        v = _parse_value(name, raw[name], p) if name in raw else p.default
        if v is not None and not p.check(v):
            raise ConfigError(f"{scenario}.{name} = {v!r} violates: {p.rule}")
        out[name] = v
    return out


def read_sections(path) -> dict:
    """Section name -> {key: raw string}; [DEFAULT] keys are merged into every section."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        cp.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    out = {s: dict(cp[s]) for s in cp.sections()}
    out["DEFAULT"] = dict(cp.defaults())
    return out


def section_keys(sections: dict, name: str) -> dict:
    """Keys written in the section itself (configparser folds [DEFAULT] into every section)."""
    defaults = sections.get("DEFAULT", {})
    return {k: v for k, v in sections.get(name, {}).items() if k not in defaults or defaults[k] != v}


def load_config(path, scenario: str, schema: dict, out, seed: int | None = None) -> ScenarioConfig:
    sections = read_sections(path) if path is not None else {"DEFAULT": {}}
    # [DEFAULT] keys only apply where the scenario knows them
    raw = {k: v for k, v in sections.get("DEFAULT", {}).items() if k in schema or k == "seed"}
    raw.update(section_keys(sections, scenario))
    cfg_seed = raw.pop("seed", None)
    params = resolve_params(scenario, schema, raw)
    if seed is None:
        try:
            seed = int(cfg_seed) if cfg_seed is not None else 0
        except ValueError:
            raise ConfigError(f"seed = {cfg_seed!r} is not an integer") from None
    if seed < 0:
        raise ConfigError("seed must be nonnegative")
    return ScenarioConfig(scenario, params, Path(out), seed, sections)
