"""
Experiment configuration.

Config files are flat ``key=value`` text parsed with python-dotenv; nested
settings use section prefixes (``solver.T=300``, ``image.L=7``,
``landscape.points=101``, ``rc.alpha=10``, ``trace.eta_sweep=0.5,0.9,2``).
Unknown keys are rejected so typos never silently fall back to defaults.

Precedence, lowest first: built-in defaults, profile preset, config file,
command-line overrides.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Mapping, Optional, Tuple, Union

from dotenv import dotenv_values

from ..core.measurement import FieldKind
from ..core.state import Method, SolverConfig, StepsizeMode
from ..errors import ConfigError, ParameterError
from ..metrics.regularity import EpsilonRegime
from .rng import SEED_MASK


class Experiment(str, Enum):
    SWEEP = "sweep"
    TRACE = "trace"
    ITERS = "iters"
    CDP_SWEEP = "cdp-sweep"
    IMAGE = "image"
    LANDSCAPE = "landscape"
    RC_PROBE = "rc-probe"


PROFILES: Dict[str, Dict[str, str]] = {
    "desk": {"n": "64", "trials_per_point": "20"},
    "paper": {"n": "256", "trials_per_point": "50"},
}
DEFAULT_PROFILE = "desk"


@dataclass(frozen=True)
class TraceSettings:
    mn_ratio: float = 2.5
    eta_sweep: Tuple[float, ...] = ()


@dataclass(frozen=True)
class IterSettings:
    # attempts per ratio are capped at cap_factor * quota
    cap_factor: int = 20


@dataclass(frozen=True)
class ImageSettings:
    input: str = "synthetic"
    output: str = "recovered.ppm"
    L: int = 7
    width: int = 8
    height: int = 8
    method: Method = Method.RWF


@dataclass(frozen=True)
class LandscapeSettings:
    points: int = 101
    lo: float = -1.0
    hi: float = 1.0
    m: int = 100
    perturbation: float = 0.1
    x: Tuple[float, ...] = (0.5, 0.5)


@dataclass(frozen=True)
class RCSettings:
    alpha: float = 10.0
    beta_rc: Optional[float] = None
    delta: float = 0.01
    eta: float = 0.9
    probes: int = 100
    regime: EpsilonRegime = EpsilonRegime.GAUSSIAN
    # measurement count; None means ceil(8 n ln n)
    m: Optional[int] = None


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one bench run depends on; output bytes are a function of this object."""

    experiment: Experiment = Experiment.SWEEP
    profile: str = DEFAULT_PROFILE
    n: int = 64
    field_kind: FieldKind = FieldKind.REAL
    mn_ratios: Optional[Tuple[float, ...]] = None
    L_values: Tuple[int, ...] = (2, 3, 4, 5, 6, 7, 8)
    trials_per_point: int = 20
    methods: Optional[Tuple[Method, ...]] = None
    base_seed: int = 0
    output_path: str = "-"
    timing: bool = False
    jobs: int = 1
    solver: SolverConfig = field(default_factory=SolverConfig)
    trace: TraceSettings = field(default_factory=TraceSettings)
    iters: IterSettings = field(default_factory=IterSettings)
    image: ImageSettings = field(default_factory=ImageSettings)
    landscape: LandscapeSettings = field(default_factory=LandscapeSettings)
    rc: RCSettings = field(default_factory=RCSettings)

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.trials_per_point < 1:
            raise ConfigError(f"trials_per_point must be >= 1, got {self.trials_per_point}")
        if self.mn_ratios is not None and any(r <= 0 for r in self.mn_ratios):
            raise ConfigError(f"m/n ratios must be positive, got {self.mn_ratios}")
        if any(L < 1 for L in self.L_values):
            raise ConfigError(f"L values must be >= 1, got {self.L_values}")
        if not 0 <= self.base_seed <= SEED_MASK:
            raise ConfigError(f"base_seed must be an unsigned 64-bit integer, got {self.base_seed}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if self.profile not in PROFILES:
            raise ConfigError(
                f"unknown profile {self.profile!r}, expected one of {sorted(PROFILES)}"
            )
        if self.landscape.points < 1 or self.landscape.hi < self.landscape.lo:
            raise ConfigError("landscape grid needs points >= 1 and lo <= hi")
        if len(self.landscape.x) != 2:
            raise ConfigError(f"landscape.x must have two coordinates, got {self.landscape.x}")
        if self.rc.probes < 0:
            raise ConfigError(f"rc.probes must be >= 0, got {self.rc.probes}")
        if self.iters.cap_factor < 1:
            raise ConfigError(f"iters.cap_factor must be >= 1, got {self.iters.cap_factor}")

    def ratios_or(self, default: Tuple[float, ...]) -> Tuple[float, ...]:
        return self.mn_ratios if self.mn_ratios is not None else default

    def methods_or(self, default: Tuple[Method, ...]) -> Tuple[Method, ...]:
        return self.methods if self.methods is not None else default

    @property
    def rc_measurements(self) -> int:
        if self.rc.m is not None:
            return self.rc.m
        return math.ceil(8 * self.n * math.log(self.n)) if self.n > 1 else 8


# ----------------------------------------------------------------------
# Value parsers
# ----------------------------------------------------------------------

def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_int(raw: str) -> int:
    return int(raw.strip(), 0)


def _parse_optional(parser: Callable[[str], object]) -> Callable[[str], object]:
    def parse(raw: str):
        if raw.strip().lower() in ("", "none", "auto"):
            return None
        return parser(raw)
    return parse


def _parse_list(parser: Callable[[str], object]) -> Callable[[str], tuple]:
    def parse(raw: str) -> tuple:
        return tuple(parser(item.strip()) for item in raw.split(",") if item.strip())
    return parse


def _parse_float(raw: str) -> float:
    return float(raw.strip())


def _parse_str(raw: str) -> str:
    return raw.strip()


_TOP_LEVEL: Dict[str, Tuple[str, Callable[[str], object]]] = {
    "experiment": ("experiment", Experiment),
    "profile": ("profile", _parse_str),
    "n": ("n", _parse_int),
    "field_kind": ("field_kind", FieldKind),
    "mn_ratios": ("mn_ratios", _parse_list(_parse_float)),
    "L_values": ("L_values", _parse_list(_parse_int)),
    "trials_per_point": ("trials_per_point", _parse_int),
    "methods": ("methods", _parse_list(Method)),
    "base_seed": ("base_seed", _parse_int),
    "output_path": ("output_path", _parse_str),
    "timing": ("timing", _parse_bool),
    "jobs": ("jobs", _parse_int),
}

_SECTIONS: Dict[str, Dict[str, Callable[[str], object]]] = {
    "solver": {
        "method": Method,
        "T": _parse_int,
        "T1": _parse_int,
        "flat_iteration_budget": _parse_int,
        "beta": _parse_float,
        "eta": _parse_float,
        "trunc_C": _parse_optional(_parse_float),
        "trunc_factor": _parse_float,
        "stepsize_mode": StepsizeMode,
        "fixed_mu": _parse_optional(_parse_float),
        "success_nmse": _parse_float,
        "max_halvings": _parse_int,
        "grad_tol": _parse_float,
        "fixed_point_tol": _parse_float,
        "power_iters": _parse_int,
        "power_tol": _parse_float,
        "record_trace": _parse_bool,
    },
    "trace": {
        "mn_ratio": _parse_float,
        "eta_sweep": _parse_list(_parse_float),
    },
    "iters": {
        "cap_factor": _parse_int,
    },
    "image": {
        "input": _parse_str,
        "output": _parse_str,
        "L": _parse_int,
        "width": _parse_int,
        "height": _parse_int,
        "method": Method,
    },
    "landscape": {
        "points": _parse_int,
        "lo": _parse_float,
        "hi": _parse_float,
        "m": _parse_int,
        "perturbation": _parse_float,
        "x": _parse_list(_parse_float),
    },
    "rc": {
        "alpha": _parse_float,
        "beta_rc": _parse_optional(_parse_float),
        "delta": _parse_float,
        "eta": _parse_float,
        "probes": _parse_int,
        "regime": EpsilonRegime,
        "m": _parse_optional(_parse_int),
    },
}

KNOWN_KEYS = frozenset(_TOP_LEVEL) | frozenset(
    f"{section}.{key}" for section, keys in _SECTIONS.items() for key in keys
)


def _parse_entry(key: str, raw: Optional[str]):
    if raw is None:
        raise ConfigError(f"config key {key!r} has no value")
    if "." in key:
        section, name = key.split(".", 1)
        parser = _SECTIONS.get(section, {}).get(name)
    else:
        entry = _TOP_LEVEL.get(key)
        parser = entry[1] if entry else None
    if parser is None:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        return parser(raw)
    except ValueError as e:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({e})") from e


def build_config(raw: Mapping[str, Optional[str]]) -> ExperimentConfig:
    """Turn string settings into a validated ``ExperimentConfig``."""
    top: Dict[str, object] = {}
    sections: Dict[str, Dict[str, object]] = {name: {} for name in _SECTIONS}
    for key, value in raw.items():
        parsed = _parse_entry(key, value)
        if "." in key:
            section, name = key.split(".", 1)
            sections[section][name] = parsed
        else:
            top[_TOP_LEVEL[key][0]] = parsed

    nested = {
        "solver": SolverConfig,
        "trace": TraceSettings,
        "iters": IterSettings,
        "image": ImageSettings,
        "landscape": LandscapeSettings,
        "rc": RCSettings,
    }
    try:
        for name, cls in nested.items():
            top[name] = cls(**sections[name])
        return ExperimentConfig(**top)
    except ParameterError as e:
        raise ConfigError(str(e)) from e


def read_config_file(path: Union[str, Path]) -> Dict[str, Optional[str]]:
    """Raw ``key=value`` pairs of a config file, in file order."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    return dict(dotenv_values(path, interpolate=False))


def load_config(
    path: Optional[Union[str, Path]] = None,
    profile: Optional[str] = None,
    overrides: Optional[Mapping[str, str]] = None,
    defaults: Optional[Mapping[str, str]] = None,
) -> ExperimentConfig:
    """
    Merge defaults, profile preset, config file and overrides.

    Args:
        path: Optional config file.
        profile: Profile name; beats a ``profile`` key in the file.
        overrides: Already-stringified settings from the command line.
        defaults: Settings that sit between the profile and the file,
            such as values taken from the environment.

    Raises:
        ConfigError: unknown key, unparsable value or failed validation.
    """
    from_file = read_config_file(path) if path is not None else {}
    overrides = dict(overrides or {})
    chosen = profile or overrides.get("profile") or from_file.get("profile") or DEFAULT_PROFILE
    if chosen not in PROFILES:
        raise ConfigError(f"unknown profile {chosen!r}, expected one of {sorted(PROFILES)}")

    merged: Dict[str, Optional[str]] = dict(PROFILES[chosen])
    merged.update(defaults or {})
    merged.update(from_file)
    merged.update(overrides)
    merged["profile"] = chosen
    return build_config(merged)
