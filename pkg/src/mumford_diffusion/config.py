"""Run configuration: JSON file, then MUMFORD_* environment variables, then command-line flags."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, replace

from .padic import FieldParams

ENV_PREFIX = "MUMFORD_"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Tolerances:
    fourier: float = 1e-12
    kernel: float = 1e-8
    mass: float = 1e-10
    eigen: float = 1e-10
    tail: float = 1e-10


@dataclass(frozen=True)
class RunConfig:
    prime: int = 5
    degree: int = 1
    precision: int = 32
    norm_base: str | None = None
    alpha: float = 1.0
    lam: float = 1.0
    nu_max: int = 24
    rho: int = 1
    tol: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    out: str | None = None
    kernel_mode: str = "reconciled"
    normalization: str = "attracting"

    def __post_init__(self):
        if self.prime < 2:
            raise ConfigError("prime must be >= 2")
        if self.precision < 8:
            raise ConfigError("precision must be >= 8")
        if self.rho < 1:
            raise ConfigError("rho must be positive")
        if self.nu_max < 1:
            raise ConfigError("nu_max must be positive")
        if self.kernel_mode not in ("reconciled", "literal"):
            raise ConfigError("kernel_mode must be 'reconciled' or 'literal'")
        if self.normalization not in ("attracting", "repelling"):
            raise ConfigError("normalization must be 'attracting' or 'repelling'")
        try:
            base = self.field().base
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.alpha <= 0:
            raise ConfigError("alpha must be positive")
        if self.lam > base ** self.alpha:
            raise ConfigError(f"lambda={self.lam} exceeds norm_base^alpha={base ** self.alpha}")

    def field(self) -> FieldParams:
        return FieldParams(self.prime, self.degree, norm_base=self.norm_base, precision=self.precision)

    def to_json_dict(self) -> dict:
        return asdict(self)


_CASTS = {"prime": int, "degree": int, "precision": int, "nu_max": int, "rho": int, "seed": int,
          "alpha": float, "lam": float, "norm_base": str, "out": str, "kernel_mode": str,
          "normalization": str}
_ALIASES = {"lambda": "lam", "tolerance": "tol"}


def _coerce(name, value):
    if value is None:
        return None
    try:
        return _CASTS[name](value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {name}: {value!r}") from exc


def _merge(base: dict, updates: dict) -> dict:
    out = dict(base)
    for k, v in updates.items():
        k = _ALIASES.get(k, k)
        if k == "tol":
            tol = dict(out.get("tol", {}))
            if isinstance(v, dict):
                tol.update({kk: float(vv) for kk, vv in v.items()})
            else:
                tol = {name: float(v) for name in asdict(Tolerances())}
            out["tol"] = tol
        elif k in _CASTS:
            out[k] = _coerce(k, v)
        else:
            raise ConfigError(f"unknown configuration key {k!r}")
    return out


def load_config(path: str | None = None, env: dict | None = None, overrides: dict | None = None) -> RunConfig:
    doc: dict = {}
    if path:
        try:
            with open(path) as fh:
                doc = _merge(doc, json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    env = os.environ if env is None else env
    from_env = {}
    for key, value in env.items():
        if key.startswith(ENV_PREFIX):
            name = key[len(ENV_PREFIX):].lower()
            from_env[name] = value
    doc = _merge(doc, from_env)
    doc = _merge(doc, {k: v for k, v in (overrides or {}).items() if v is not None})
    tol = doc.pop("tol", None)
    try:
        unknown = set(tol or {}) - set(asdict(Tolerances()))
        if unknown:
            raise ConfigError(f"unknown tolerance keys {sorted(unknown)}")
        cfg = RunConfig(**doc)
        if tol:
            cfg = replace(cfg, tol=Tolerances(**{**asdict(Tolerances()), **tol}))
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg
