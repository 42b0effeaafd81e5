"""Experiment configuration: dataclass plus flat TOML parsing.

The config file is a flat key-value TOML document mirroring the dataclass
fields; keys with defaults may be omitted.  Scenario-specific sweep lists
(m_values, n0_values, q_values) are plain TOML arrays.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, asdict
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .biotsavart import KernelConfig
from .initdata import BubbleParams

SCENARIOS = (
    "linf-inflation",
    "sobolev-inflation",
    "key-lemma",
    "norms-baseline",
    "convergence",
)


@dataclass
class ExperimentConfig:
    """Everything one scenario run needs; serialized verbatim into the report."""

    scenario: str
    bubble: BubbleParams
    kernel: KernelConfig
    resolution: int = 10
    dt: float = 0.0          # 0 means size automatically from the velocity
    t_end: float = 100.0
    grid_n: int = 96
    cadence: int = 10
    seed: int = 0
    c1: float = 1.0
    output_dir: str = "out"
    m_values: list[int] = field(default_factory=list)
    n0_values: list[int] = field(default_factory=list)
    q_values: list[float] = field(default_factory=lambda: [1.0, 2.0, 3.0])

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(
                f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}"
            )
        if self.resolution < 2:
            raise ValueError(f"resolution must be >= 2, got {self.resolution}")
        for name in ("t_end", "grid_n", "cadence", "c1"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.dt < 0:
            raise ValueError(f"dt must be >= 0, got {self.dt}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["bubble"] = asdict(self.bubble)
        out["kernel"] = asdict(self.kernel)
        return out


_BUBBLE_KEYS = ("n0", "m", "alpha")
_KERNEL_KEYS = ("n_theta", "delta_reg", "delta_scale")


def config_from_dict(raw: dict) -> ExperimentConfig:
    raw = dict(raw)
    if "scenario" not in raw:
        raise ValueError("config must set 'scenario'")
    scenario = raw.pop("scenario")
    # alpha default depends on the scenario branch
    alpha_default = 0.2 if scenario == "linf-inflation" else 0.6
    bubble = BubbleParams(
        n0=int(raw.pop("n0", 1)),
        m=int(raw.pop("m", 3)),
        alpha=float(raw.pop("alpha", alpha_default)),
    )
    kernel = KernelConfig(
        n_theta=int(raw.pop("n_theta", 16)),
        delta_reg=float(raw.pop("delta_reg", 0.0)),
        delta_scale=float(raw.pop("delta_scale", 0.5)),
    )
    known = {
        "resolution": int, "dt": float, "t_end": float, "grid_n": int,
        "cadence": int, "seed": int, "c1": float, "output_dir": str,
    }
    kwargs = {}
    for key, cast in known.items():
        if key in raw:
            kwargs[key] = cast(raw.pop(key))
    for key in ("m_values", "n0_values"):
        if key in raw:
            kwargs[key] = [int(v) for v in raw.pop(key)]
    if "q_values" in raw:
        kwargs["q_values"] = [float(v) for v in raw.pop("q_values")]
    if raw:
        raise ValueError(f"unrecognized config keys: {sorted(raw)}")
    return ExperimentConfig(scenario=scenario, bubble=bubble, kernel=kernel,
                            **kwargs)


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse a flat TOML config file into an ExperimentConfig."""
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    return config_from_dict(raw)
