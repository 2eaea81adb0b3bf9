"""Run configuration documents.

A configuration is one JSON object::

    {
      "model": {"type": "su2", "two_s": 2, "theta": 1.5707963267948966, "b": 0.5},
      "ell": 1,                       # or "ell_sweep": [start, end, step]
      "method": "both",               # via_commutant | direct | both
      "tolerances": {"zero_tol": null, "clamp_eps": 1e-15, "commutator_tol": 1e-8},
      "output": {"format": "csv", "path": null},
      "bits": false,
      "include_spectra": false
    }

Model types are ``su2`` (two_s, theta, b), ``su11`` (kappa, theta, b and an
optional ``truncation`` object), ``soq3`` (root_order, rep_dim, b) and
``custom`` (fields_B, hoppings_J, lambda). Custom hoppings may be numbers or
``[re, im]`` pairs; ``lambda`` needs one entry more than there are sites.
``ell_sweep`` is inclusive of ``end``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import ConfigError
from .models import (
    BispectralData,
    ChainSpec,
    SoQ3Params,
    Su11Params,
    Su2Params,
    TruncationConfig,
    custom_chain,
)

__all__ = [
    "Tolerances",
    "OutputConfig",
    "CustomModel",
    "RunConfig",
    "parse_model",
    "parse_config",
    "load_config",
    "with_overrides",
]

METHODS = ("via_commutant", "direct", "both")


@dataclass(frozen=True)
class Tolerances:
    zero_tol: Optional[float] = None
    clamp_eps: float = 1e-15
    commutator_tol: float = 1e-8


@dataclass(frozen=True)
class OutputConfig:
    format: str = "csv"
    path: Optional[str] = None


@dataclass(frozen=True)
class CustomModel:
    chain: ChainSpec
    data: BispectralData


Model = Union[Su2Params, Su11Params, SoQ3Params, CustomModel]


@dataclass(frozen=True)
class RunConfig:
    model: Model
    ell: Optional[int] = None
    ell_sweep: Optional[tuple] = None
    method: str = "both"
    tolerances: Tolerances = field(default_factory=Tolerances)
    output: OutputConfig = field(default_factory=OutputConfig)
    bits: bool = False
    include_spectra: bool = False

    def ells(self, sites: Optional[int] = None) -> list[int]:
        if self.ell is not None:
            return [self.ell]
        start, end, step = self.ell_sweep
        if sites is not None:
            end = min(end, sites - 1)
        return list(range(start, end + 1, step))


def _need(d: dict, key: str, kind):
    if key not in d:
        raise ConfigError(f"model is missing '{key}'")
    try:
        return kind(d[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for '{key}': {d[key]!r}") from exc


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError(f"complex hopping must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def parse_model(d: dict) -> Model:
    if not isinstance(d, dict) or "type" not in d:
        raise ConfigError("model must be an object with a 'type' field")
    kind = d["type"]
    try:
        if kind == "su2":
            return Su2Params(_need(d, "two_s", int), _need(d, "theta", float), _need(d, "b", float))
        if kind == "su11":
            trunc = TruncationConfig(**d.get("truncation", {}))
            return Su11Params(
                _need(d, "kappa", float), _need(d, "theta", float), _need(d, "b", float), trunc
            )
        if kind == "soq3":
            return SoQ3Params(_need(d, "root_order", int), _need(d, "rep_dim", int), _need(d, "b", float))
        if kind == "custom":
            hop = np.array([_complex(v) for v in d.get("hoppings_J", [])])
            if not np.any(hop.imag):
                hop = hop.real
            if "lambda" not in d:
                raise ConfigError("custom model must supply 'lambda' explicitly")
            chain, data = custom_chain(d.get("fields_B", []), hop, d["lambda"])
            return CustomModel(chain, data)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {kind} model: {exc}") from exc
    raise ConfigError(f"unknown model type {kind!r}")


def parse_config(d: dict) -> RunConfig:
    if not isinstance(d, dict):
        raise ConfigError("configuration must be a JSON object")
    known = {"model", "ell", "ell_sweep", "method", "tolerances", "output", "bits", "include_spectra"}
    unknown = set(d) - known
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    model = parse_model(d.get("model"))
    ell, sweep = d.get("ell"), d.get("ell_sweep")
    if (ell is None) == (sweep is None):
        raise ConfigError("exactly one of 'ell' and 'ell_sweep' is required")
    if ell is not None:
        if not isinstance(ell, int) or ell < 0:
            raise ConfigError(f"ell must be a non-negative integer, got {ell!r}")
    else:
        if not (isinstance(sweep, (list, tuple)) and len(sweep) == 3 and all(isinstance(v, int) for v in sweep)):
            raise ConfigError("ell_sweep must be [start, end, step]")
        if sweep[0] < 0 or sweep[2] < 1 or sweep[1] < sweep[0]:
            raise ConfigError(f"invalid ell_sweep {sweep!r}")
        sweep = tuple(sweep)
    method = d.get("method", "both").replace("-", "_")
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}, got {method!r}")
    try:
        tol = Tolerances(**d.get("tolerances", {}))
        out = OutputConfig(**d.get("output", {}))
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    if out.format not in ("csv", "json"):
        raise ConfigError(f"output format must be csv or json, got {out.format!r}")
    return RunConfig(model, ell, sweep, method, tol, out, bool(d.get("bits", False)),
                     bool(d.get("include_spectra", False)))


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(doc)


def with_overrides(cfg: RunConfig, method=None, fmt=None, path=None, bits=None) -> RunConfig:
    if method is not None:
        method = method.replace("-", "_")
        if method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}")
        cfg = replace(cfg, method=method)
    if fmt is not None or path is not None:
        cfg = replace(cfg, output=OutputConfig(fmt or cfg.output.format, path or cfg.output.path))
    if bits:
        cfg = replace(cfg, bits=True)
    return cfg
