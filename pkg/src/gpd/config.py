"""Run configuration: JSON schema, validation with field-path diagnostics, and
canonical round-trippable serialization.

Internally everything is dimensionless with the field magnitude b as the
scale; the only SI conversion happens here, at the boundary: a drive given as
a lab period (microseconds) becomes ω0/b = 1/(period_s · b_hz) against the SI
anchor b_hz (the field strength b/2π in Hz, default 50 MHz).
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import bath as bath_mod
from . import spin_core
from .bath import BathSpectrum
from .density import SuperposedState
from .spin_core import FieldParams

MODES = ("exact", "adiabatic", "nonadiabatic", "density", "oracle", "fig2", "fig3")
SWEEP_AXES = ("theta", "omega0_over_b", "eta", "omega_c_over_b")
FORMATS = ("csv", "json")

DEFAULT_B_HZ = 50e6  # SI anchor: field strength b/2pi


class ConfigError(ValueError):
    """Configuration rejected; `path` names the offending field."""

    def __init__(self, path: str, problem: str):
        self.path = path
        super().__init__(f"{path}: {problem}")


def _check_keys(raw: dict, path: str, cls) -> None:
    known = {f.name for f in dataclasses.fields(cls)}
    for key in raw:
        if key not in known:
            raise ConfigError(f"{path}.{key}", f"unknown key (known: {sorted(known)})")


def _get(raw, path, key, types, default, *, required=False):
    if key not in raw or raw[key] is None:
        if required:
            raise ConfigError(f"{path}.{key}", "required")
        return default
    value = raw[key]
    if types is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, types) or isinstance(value, bool) and types is not bool:
        raise ConfigError(f"{path}.{key}", f"expected {getattr(types, '__name__', types)}, got {value!r}")
    return value


@dataclass(frozen=True)
class FieldConfig:
    b: float = 1.0
    b_hz: float = DEFAULT_B_HZ
    theta: float = math.pi / 3
    omega0_over_b: float | None = 0.02
    period_us: float | None = None
    sign_omega0: int | None = None

    def validate(self, path: str = "field") -> None:
        if not self.b > 0.0:
            raise ConfigError(f"{path}.b", f"must be positive, got {self.b}")
        if not self.b_hz > 0.0:
            raise ConfigError(f"{path}.b_hz", f"must be positive, got {self.b_hz}")
        if not 0.0 <= self.theta <= math.pi:
            raise ConfigError(f"{path}.theta", f"must lie in [0, pi], got {self.theta}")
        if self.omega0_over_b is not None and self.period_us is not None:
            raise ConfigError(path, "give omega0_over_b or period_us, not both")
        if self.omega0_over_b is None and self.period_us is None:
            raise ConfigError(path, "one of omega0_over_b or period_us is required")
        if self.period_us is not None and not self.period_us > 0.0:
            raise ConfigError(f"{path}.period_us", f"must be positive, got {self.period_us}")
        if self.sign_omega0 not in (None, 1, -1):
            raise ConfigError(f"{path}.sign_omega0", f"must be +1 or -1, got {self.sign_omega0}")

    @classmethod
    def from_dict(cls, raw: dict, path: str = "field") -> "FieldConfig":
        _check_keys(raw, path, cls)
        omega = _get(raw, path, "omega0_over_b", float, None)
        period = _get(raw, path, "period_us", float, None)
        if omega is None and period is None:
            omega = cls.omega0_over_b  # default drive
        cfg = cls(
            b=_get(raw, path, "b", float, cls.b),
            b_hz=_get(raw, path, "b_hz", float, cls.b_hz),
            theta=_get(raw, path, "theta", float, cls.theta),
            omega0_over_b=omega,
            period_us=period,
            sign_omega0=_get(raw, path, "sign_omega0", int, None),
        )
        cfg.validate(path)
        return cfg

    def params(self) -> FieldParams:
        """Resolve to dimensionless FieldParams (the SI boundary conversion)."""
        if self.omega0_over_b is not None:
            omega0 = self.omega0_over_b * self.b
        else:
            omega0 = self.b / (self.period_us * 1e-6 * self.b_hz)
        if self.sign_omega0 is not None:
            omega0 = math.copysign(abs(omega0), self.sign_omega0)
        return FieldParams(b=self.b, theta=self.theta, omega0=omega0)


@dataclass(frozen=True)
class BathConfig:
    kind: str = bath_mod.OHMIC
    eta: float = 0.3
    omega_c_over_b: float = 3.0

    def validate(self, path: str = "bath") -> None:
        if self.kind not in (bath_mod.OHMIC, bath_mod.SUPER_OHMIC):
            raise ConfigError(f"{path}.kind", f"must be 'ohmic' or 'super_ohmic', got {self.kind!r}")
        if self.eta < 0.0:
            raise ConfigError(f"{path}.eta", f"must be nonnegative, got {self.eta}")
        if not self.omega_c_over_b > 0.0:
            raise ConfigError(f"{path}.omega_c_over_b", f"must be positive, got {self.omega_c_over_b}")

    @classmethod
    def from_dict(cls, raw: dict, path: str = "bath") -> "BathConfig":
        _check_keys(raw, path, cls)
        cfg = cls(
            kind=_get(raw, path, "kind", str, cls.kind),
            eta=_get(raw, path, "eta", float, cls.eta),
            omega_c_over_b=_get(raw, path, "omega_c_over_b", float, cls.omega_c_over_b),
        )
        cfg.validate(path)
        return cfg

    def spectrum(self, b: float) -> BathSpectrum:
        return BathSpectrum(kind=self.kind, eta=self.eta, omega_c=self.omega_c_over_b * b)


@dataclass(frozen=True)
class SweepConfig:
    name: str = "theta"
    min: float = 0.0
    max: float = math.pi
    count: int = 181

    def validate(self, path: str = "sweep") -> None:
        if self.name not in SWEEP_AXES:
            raise ConfigError(f"{path}.name", f"must be one of {SWEEP_AXES}, got {self.name!r}")
        if not isinstance(self.count, int) or self.count < 2:
            raise ConfigError(f"{path}.count", f"must be an integer >= 2, got {self.count}")
        if not self.min < self.max:
            raise ConfigError(f"{path}.min", f"must satisfy min < max, got [{self.min}, {self.max}]")

    @classmethod
    def from_dict(cls, raw: dict, path: str = "sweep") -> "SweepConfig":
        _check_keys(raw, path, cls)
        cfg = cls(
            name=_get(raw, path, "name", str, cls.name),
            min=_get(raw, path, "min", float, cls.min),
            max=_get(raw, path, "max", float, cls.max),
            count=_get(raw, path, "count", int, cls.count),
        )
        cfg.validate(path)
        return cfg

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class OutputConfig:
    path: str | None = None
    format: str = "csv"
    plot: bool = False

    def validate(self, path: str = "output") -> None:
        if self.format not in FORMATS:
            raise ConfigError(f"{path}.format", f"must be one of {FORMATS}, got {self.format!r}")

    @classmethod
    def from_dict(cls, raw: dict, path: str = "output") -> "OutputConfig":
        _check_keys(raw, path, cls)
        cfg = cls(
            path=_get(raw, path, "path", str, None),
            format=_get(raw, path, "format", str, cls.format),
            plot=_get(raw, path, "plot", bool, cls.plot),
        )
        cfg.validate(path)
        return cfg


@dataclass(frozen=True)
class DensityConfig:
    a_re: float = 0.8
    a_im: float = 0.0
    b_re: float = 0.6
    b_im: float = 0.0
    time_points: int = 201
    tau_phi_multiples: float = 4.0
    t0: float = 0.0

    def validate(self, path: str = "density") -> None:
        if not isinstance(self.time_points, int) or self.time_points < 2:
            raise ConfigError(f"{path}.time_points", f"must be an integer >= 2, got {self.time_points}")
        if not self.tau_phi_multiples > 0.0:
            raise ConfigError(f"{path}.tau_phi_multiples", f"must be positive, got {self.tau_phi_multiples}")
        if self.t0 < 0.0:
            raise ConfigError(f"{path}.t0", f"must be nonnegative, got {self.t0}")

    @classmethod
    def from_dict(cls, raw: dict, path: str = "density") -> "DensityConfig":
        _check_keys(raw, path, cls)
        cfg = cls(
            a_re=_get(raw, path, "a_re", float, cls.a_re),
            a_im=_get(raw, path, "a_im", float, cls.a_im),
            b_re=_get(raw, path, "b_re", float, cls.b_re),
            b_im=_get(raw, path, "b_im", float, cls.b_im),
            time_points=_get(raw, path, "time_points", int, cls.time_points),
            tau_phi_multiples=_get(raw, path, "tau_phi_multiples", float, cls.tau_phi_multiples),
            t0=_get(raw, path, "t0", float, cls.t0),
        )
        cfg.validate(path)
        return cfg

    def state(self) -> SuperposedState:
        return SuperposedState(complex(self.a_re, self.a_im), complex(self.b_re, self.b_im))


@dataclass(frozen=True)
class OracleConfig:
    theta: float = math.pi / 3
    omega0_over_b: float = 0.2
    ode_steps: int = 10000
    ode_tolerance: float = 1e-8
    aa_tolerance: float = 1e-6
    bath_theta: float = math.pi / 3
    bath_omega0_over_b: float = 0.02
    bath_eta: float = 0.01
    bath_omega_c_over_b: float = 3.0
    bath_modes: int = 400
    bath_t_final: float = 150.0
    bath_dt: float = 0.02
    bath_fit_start: float = 5.0
    width_rel_tolerance: float = 0.10
    shift_rel_tolerance: float = 0.15

    def validate(self, path: str = "oracle") -> None:
        for key in ("ode_tolerance", "aa_tolerance", "bath_eta", "bath_t_final",
                    "bath_dt", "width_rel_tolerance", "shift_rel_tolerance"):
            if getattr(self, key) < 0.0 or (key.endswith(("t_final", "dt")) and getattr(self, key) == 0.0):
                raise ConfigError(f"{path}.{key}", f"must be positive, got {getattr(self, key)}")
        if not 0.0 <= self.theta <= math.pi or not 0.0 <= self.bath_theta <= math.pi:
            raise ConfigError(f"{path}.theta", "angles must lie in [0, pi]")
        if self.omega0_over_b == 0.0:
            raise ConfigError(f"{path}.omega0_over_b", "must be nonzero")
        if not isinstance(self.ode_steps, int) or self.ode_steps < 10:
            raise ConfigError(f"{path}.ode_steps", f"must be an integer >= 10, got {self.ode_steps}")
        if not isinstance(self.bath_modes, int) or self.bath_modes < 1:
            raise ConfigError(f"{path}.bath_modes", f"must be a positive integer, got {self.bath_modes}")
        if not self.bath_omega_c_over_b > 1.0:
            raise ConfigError(f"{path}.bath_omega_c_over_b", "cutoff must exceed the field (> 1)")
        if self.bath_fit_start < 0.0 or self.bath_fit_start >= self.bath_t_final:
            raise ConfigError(f"{path}.bath_fit_start", "must lie in [0, bath_t_final)")

    @classmethod
    def from_dict(cls, raw: dict, path: str = "oracle") -> "OracleConfig":
        _check_keys(raw, path, cls)
        kwargs = {}
        for f in dataclasses.fields(cls):
            types = int if f.type == "int" else float
            kwargs[f.name] = _get(raw, path, f.name, types, getattr(cls, f.name))
        cfg = cls(**kwargs)
        cfg.validate(path)
        return cfg


def _positive_tuple(raw, path, key, default, *, allow_negative=False):
    if key not in raw or raw[key] is None:
        return default
    value = raw[key]
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{path}.{key}", f"expected a nonempty list of numbers, got {value!r}")
    out = []
    for i, item in enumerate(value):
        if not isinstance(item, (int, float)) or isinstance(item, bool):
            raise ConfigError(f"{path}.{key}[{i}]", f"expected a number, got {item!r}")
        item = float(item)
        if item == 0.0 or (item < 0.0 and not allow_negative):
            raise ConfigError(f"{path}.{key}[{i}]", f"must be {'nonzero' if allow_negative else 'positive'}, got {item}")
        out.append(item)
    return tuple(out)


@dataclass(frozen=True)
class Fig2Config:
    omega_c_over_b_set: tuple = (1.0, 2.0, 3.0)
    theta_points: int = 181

    def validate(self, path: str = "fig2") -> None:
        if not isinstance(self.theta_points, int) or self.theta_points < 2:
            raise ConfigError(f"{path}.theta_points", f"must be an integer >= 2, got {self.theta_points}")

    @classmethod
    def from_dict(cls, raw: dict, path: str = "fig2") -> "Fig2Config":
        _check_keys(raw, path, cls)
        cfg = cls(
            omega_c_over_b_set=_positive_tuple(raw, path, "omega_c_over_b_set", cls.omega_c_over_b_set),
            theta_points=_get(raw, path, "theta_points", int, cls.theta_points),
        )
        cfg.validate(path)
        return cfg


@dataclass(frozen=True)
class Fig3Config:
    omega0_over_b_set: tuple = (0.01, 0.2, 1.0, 5.0)
    theta_points: int = 181

    def validate(self, path: str = "fig3") -> None:
        if not isinstance(self.theta_points, int) or self.theta_points < 2:
            raise ConfigError(f"{path}.theta_points", f"must be an integer >= 2, got {self.theta_points}")

    @classmethod
    def from_dict(cls, raw: dict, path: str = "fig3") -> "Fig3Config":
        _check_keys(raw, path, cls)
        cfg = cls(
            omega0_over_b_set=_positive_tuple(raw, path, "omega0_over_b_set", cls.omega0_over_b_set,
                                              allow_negative=True),
            theta_points=_get(raw, path, "theta_points", int, cls.theta_points),
        )
        cfg.validate(path)
        return cfg


@dataclass(frozen=True)
class RunConfig:
    mode: str | None = None
    field: FieldConfig = dc_field(default_factory=FieldConfig)
    bath: BathConfig = dc_field(default_factory=BathConfig)
    sweep: SweepConfig = dc_field(default_factory=SweepConfig)
    output: OutputConfig = dc_field(default_factory=OutputConfig)
    density: DensityConfig = dc_field(default_factory=DensityConfig)
    oracle: OracleConfig = dc_field(default_factory=OracleConfig)
    fig2: Fig2Config = dc_field(default_factory=Fig2Config)
    fig3: Fig3Config = dc_field(default_factory=Fig3Config)

    def to_dict(self) -> dict:
        """Canonical nested-dict form; `parse_config` inverts it exactly."""
        out = {"mode": self.mode}
        for name in ("field", "bath", "sweep", "output", "density", "oracle", "fig2", "fig3"):
            section = dataclasses.asdict(getattr(self, name))
            for key, value in section.items():
                if isinstance(value, tuple):
                    section[key] = list(value)
            out[name] = section
        return out


_SECTIONS = {
    "field": FieldConfig,
    "bath": BathConfig,
    "sweep": SweepConfig,
    "output": OutputConfig,
    "density": DensityConfig,
    "oracle": OracleConfig,
    "fig2": Fig2Config,
    "fig3": Fig3Config,
}


def parse_config(data: dict) -> RunConfig:
    """Build a validated RunConfig from plain JSON data."""
    if not isinstance(data, dict):
        raise ConfigError("config", f"top level must be an object, got {type(data).__name__}")
    for key in data:
        if key != "mode" and key not in _SECTIONS:
            raise ConfigError(key, f"unknown section (known: mode, {', '.join(_SECTIONS)})")
    mode = data.get("mode")
    if mode is not None and mode not in MODES:
        raise ConfigError("mode", f"must be one of {MODES}, got {mode!r}")
    kwargs = {"mode": mode}
    for name, cls in _SECTIONS.items():
        raw = data.get(name, {})
        if not isinstance(raw, dict):
            raise ConfigError(name, f"must be an object, got {raw!r}")
        kwargs[name] = cls.from_dict(raw, name)
    return RunConfig(**kwargs)


def load_config(path) -> RunConfig:
    """Read and validate a JSON config file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}") from exc
    return parse_config(data)
