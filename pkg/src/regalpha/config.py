"""Run configuration: `key = value` files with '#' comments.

Unknown keys and malformed or out-of-range values are rejected with the
offending line number.  Command-line flags override file values.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Optional

from .models import ModelParams, canonical_preset_name, preset


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _parse_float_list(s: str) -> list[float]:
    return [float(tok) for tok in s.replace(",", " ").split()]


@dataclass
class RunConfig:
    # model selection: a named preset, or the explicit exponent tuple
    preset: Optional[str] = None
    theta: Optional[float] = None
    theta1: Optional[float] = None
    theta2: Optional[float] = None
    chi: Optional[int] = None
    a0_family: Optional[str] = None
    # physical parameters
    alpha: float = 0.2
    nu: float = 1.0
    epsilon: float = 0.1
    gamma3: float = 1.0
    el_gamma: float = 1.0
    order_param: str = "scalar"  # none | scalar | vector2 | vector3
    # discretization
    n: int = 64
    dt: Optional[float] = None  # None -> advective bound at t = 0
    scheme: str = "imex_bdf2"
    sigma_stab: Optional[float] = None
    t_end: float = 1.0
    sample_every: int = 10
    snapshot_every: int = 0  # steps between snapshots; 0 -> final only
    # forcing
    forcing_envelope: str = "zero"
    forcing_delta: float = 1.0
    forcing_amplitude: float = 0.1
    # initial data
    seed: int = 0
    ic_amp_u: float = 0.5
    ic_phi_max: float = 0.9
    ic_phi_mean: float = 0.0
    ic_file: Optional[str] = None
    # sweep parameter lists
    alphas: list[float] = field(default_factory=list)
    nus: list[float] = field(default_factory=list)
    # output
    outdir: str = "out"
    plots: bool = True

    def model_params(self) -> ModelParams:
        extra = {}
        op = self.order_param
        if op in ("vector2", "vector3"):
            extra["order_param"] = "vector"
            extra["el_components"] = int(op[-1])
            extra["el_gamma"] = self.el_gamma
        elif op in ("none", "scalar"):
            extra["order_param"] = op
        else:
            raise ConfigError(f"unknown order_param {op!r}")
        if self.preset is not None:
            name = canonical_preset_name(self.preset)
            kwargs = {}
            if name == "NS-AC-alpha-like":
                kwargs = dict(user_theta=self.theta, user_theta2=self.theta2)
            return preset(name, alpha=self.alpha, nu=self.nu,
                          epsilon=self.epsilon, gamma3=self.gamma3,
                          **kwargs, **extra)
        missing = [k for k in ("theta", "theta1", "theta2", "chi")
                   if getattr(self, k) is None]
        if missing:
            raise ConfigError(
                "either a preset or the full exponent set (theta, theta1, "
                f"theta2, chi) is required; missing {', '.join(missing)}"
            )
        return ModelParams(
            theta=self.theta, theta1=self.theta1, theta2=self.theta2,
            chi=self.chi, alpha=self.alpha, nu=self.nu, epsilon=self.epsilon,
            gamma3=self.gamma3, a0_family=self.a0_family or "fractional",
            **extra,
        )


_CASTERS = {
    "preset": str,
    "theta": float,
    "theta1": float,
    "theta2": float,
    "chi": int,
    "a0_family": str,
    "alpha": float,
    "nu": float,
    "epsilon": float,
    "gamma3": float,
    "el_gamma": float,
    "order_param": str,
    "n": int,
    "dt": float,
    "scheme": str,
    "sigma_stab": float,
    "t_end": float,
    "sample_every": int,
    "snapshot_every": int,
    "forcing_envelope": str,
    "forcing_delta": float,
    "forcing_amplitude": float,
    "seed": int,
    "ic_amp_u": float,
    "ic_phi_max": float,
    "ic_phi_mean": float,
    "ic_file": str,
    "alphas": _parse_float_list,
    "nus": _parse_float_list,
    "outdir": str,
    "plots": _parse_bool,
}

_RANGE_CHECKS = {
    "theta": (lambda v: v >= 0, "theta must be >= 0"),
    "chi": (lambda v: v in (0, 1), "chi must be 0 or 1"),
    "alpha": (lambda v: v > 0, "alpha must be > 0"),
    "nu": (lambda v: v >= 0, "nu must be >= 0"),
    "epsilon": (lambda v: v > 0, "epsilon must be > 0"),
    "gamma3": (lambda v: v > 0, "gamma3 must be > 0"),
    "el_gamma": (lambda v: v > 0, "el_gamma must be > 0"),
    "n": (lambda v: v >= 8 and v % 2 == 0, "n must be an even integer >= 8"),
    "dt": (lambda v: v > 0, "dt must be > 0"),
    "t_end": (lambda v: v >= 0, "t_end must be >= 0"),
    "sample_every": (lambda v: v >= 1, "sample_every must be >= 1"),
    "snapshot_every": (lambda v: v >= 0, "snapshot_every must be >= 0"),
    "forcing_delta": (lambda v: v > 0, "forcing_delta must be > 0"),
    "forcing_amplitude": (lambda v: v >= 0, "forcing_amplitude must be >= 0"),
    "seed": (lambda v: v >= 0, "seed must be a nonnegative integer"),
    "ic_phi_max": (lambda v: 0 <= v <= 1, "ic_phi_max must lie in [0, 1]"),
    "scheme": (lambda v: v in ("imex_euler", "imex_bdf2"), "unknown scheme"),
    "order_param": (lambda v: v in ("none", "scalar", "vector2", "vector3"),
                    "order_param must be none, scalar, vector2 or vector3"),
    "forcing_envelope": (lambda v: v in ("zero", "constant", "power_decay"),
                         "forcing_envelope must be zero, constant or power_decay"),
    "a0_family": (lambda v: v in ("fractional", "voight"), "unknown a0_family"),
}


def parse_config(text: str) -> RunConfig:
    """Parse a config file body into a RunConfig."""
    cfg = RunConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CASTERS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno)
        try:
            parsed = _CASTERS[key](value)
        except ValueError as err:
            raise ConfigError(f"bad value for {key!r}: {err}", lineno) from err
        check = _RANGE_CHECKS.get(key)
        if check is not None and not check[0](parsed):
            raise ConfigError(check[1], lineno)
        if key == "preset":
            try:
                parsed = canonical_preset_name(parsed)
            except ValueError as err:
                raise ConfigError(str(err), lineno) from err
        setattr(cfg, key, parsed)
    return cfg


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def apply_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    """Set non-None override values on a parsed config (CLI precedence)."""
    valid = {f.name for f in fields(RunConfig)}
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in valid:
            raise ConfigError(f"unknown override {key!r}")
        setattr(cfg, key, value)
    return cfg
