"""Run configuration: JSON ingestion, validation and a stable hash."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .noise import DEPHASING_POLICIES, NoiseParams
from .teleport import SIX_STATES, InputStateSpec

N_QUBITS = 8
REQUIRED = ("sigma_g", "sigma_cz", "t2_star", "c_d", "dephasing_policy", "draws", "seed")
POSTSELECT = ("ns", "es", "both")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    sigma_g: tuple[float, ...]
    sigma_cz: tuple[float, ...]
    t2_star: tuple[float, ...]
    c_d: float
    dephasing_policy: str
    draws: int
    seed: int
    inputs: tuple[str, ...] = SIX_STATES
    postselect: str = "both"
    output_dir: Path = field(default=Path("reports"), compare=False)

    def __post_init__(self):
        _check_list("sigma_g", self.sigma_g, N_QUBITS, positive=False)
        _check_list("sigma_cz", self.sigma_cz, N_QUBITS - 1, positive=False)
        _check_list("t2_star", self.t2_star, N_QUBITS, positive=True)
        if not isinstance(self.c_d, (int, float)) or self.c_d < 0:
            raise ConfigError("c_d must be a non-negative number")
        if self.dephasing_policy not in DEPHASING_POLICIES:
            raise ConfigError(f"dephasing_policy must be one of {DEPHASING_POLICIES}")
        if not isinstance(self.draws, int) or isinstance(self.draws, bool) or self.draws < 1:
            raise ConfigError("draws must be an integer >= 1")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        if not self.inputs:
            raise ConfigError("at least one input state is required")
        for label in self.inputs:
            try:
                InputStateSpec.parse(label)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        if self.postselect not in POSTSELECT:
            raise ConfigError(f"postselect must be one of {POSTSELECT}")

    def noise(self) -> NoiseParams:
        return NoiseParams(
            sigma_g={q: float(v) for q, v in enumerate(self.sigma_g, 1)},
            sigma_cz={(q, q + 1): float(v) for q, v in enumerate(self.sigma_cz, 1)},
            c_d=float(self.c_d),
            t2_star={q: float(v) for q, v in enumerate(self.t2_star, 1)},
            dephasing_policy=self.dephasing_policy,
        )

    def canonical(self) -> dict:
        """Everything that affects the numbers, in a fixed layout."""
        return {
            "sigma_g": list(self.sigma_g),
            "sigma_cz": list(self.sigma_cz),
            "t2_star": list(self.t2_star),
            "c_d": self.c_d,
            "dephasing_policy": self.dephasing_policy,
            "draws": self.draws,
            "seed": self.seed,
            "inputs": list(self.inputs),
            "postselect": self.postselect,
        }

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def override(self, **changes) -> "RunConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _check_list(name, values, length, positive):
    if len(values) != length:
        raise ConfigError(f"{name} needs {length} numbers, got {len(values)}")
    for v in values:
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ConfigError(f"{name} entries must be numbers")
        if v < 0 or (positive and v == 0):
            raise ConfigError(f"{name} entries must be {'positive' if positive else 'non-negative'}")


def from_mapping(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    missing = [k for k in REQUIRED if k not in data]
    if missing:
        raise ConfigError(f"config is missing keys: {', '.join(missing)}")
    extra = set(data) - set(REQUIRED) - {"inputs", "postselect"}
    if extra:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
    kwargs = {k: data[k] for k in REQUIRED}
    for k in ("sigma_g", "sigma_cz", "t2_star"):
        if not isinstance(kwargs[k], list):
            raise ConfigError(f"{k} must be a list")
        kwargs[k] = tuple(kwargs[k])
    if "inputs" in data:
        kwargs["inputs"] = tuple(data["inputs"])
    if "postselect" in data:
        kwargs["postselect"] = data["postselect"]
    return RunConfig(**kwargs)


def load(path: str | Path | None = None) -> RunConfig:
    """Read ``path``, or the shipped default when ``path`` is None."""
    try:
        if path is None:
            text = resources.files("mzm_teleport").joinpath("data/default_config.json").read_text()
        else:
            text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return from_mapping(data)


def zero_noise(seed: int = 0, draws: int = 1) -> RunConfig:
    return RunConfig((0.0,) * 8, (0.0,) * 7, (1.0,) * 8, 0.0, "midpoint", draws, seed)
