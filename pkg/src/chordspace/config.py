"""Run configuration shared by the command-line surface.

Configs load from a JSON file (path given on the command line or through the
``CHORDSPACE_CONFIG`` environment variable); every output embeds the full
snapshot so results stay reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .harmonicity import PeriodicityConfig
from .psychometric import THIRD_QUARTILE_Z
from .resolve import TransitiveConfig
from .roughness import RoughnessParams, Spectrum, harmonic_spectrum

ENV_VAR = "CHORDSPACE_CONFIG"

_DEFAULT_RESOLUTIONS = {2: 1, 3: 10, 4: 50}


@dataclass
class Config:
    f0_hz: float = 261.626
    jnd_cents: float = 18.0
    sigma_mode: str = "third"  # "third": jnd/3; "iqr": jnd/0.674490
    qmax: int = 100
    resolutions: dict[int, int] = field(default_factory=lambda: dict(_DEFAULT_RESOLUTIONS))
    spectrum: Spectrum = field(default_factory=harmonic_spectrum)
    roughness: RoughnessParams = field(default_factory=RoughnessParams)
    scope_cents: float = 200.0

    def __post_init__(self):
        if self.sigma_mode not in ("third", "iqr"):
            raise ValueError(f"sigma_mode must be 'third' or 'iqr', got {self.sigma_mode!r}")
        if not (self.f0_hz > 0 and math.isfinite(self.f0_hz)):
            raise ValueError(f"f0_hz must be positive, got {self.f0_hz!r}")
        self.periodicity_config()  # validate jnd/qmax eagerly

    def sigma_cents(self) -> float:
        if self.sigma_mode == "third":
            return self.jnd_cents / 3.0
        return self.jnd_cents / THIRD_QUARTILE_Z

    def resolution_for(self, n: int) -> int:
        return int(self.resolutions.get(n, _DEFAULT_RESOLUTIONS.get(n, 50)))

    def periodicity_config(self, pairwise: bool = True) -> PeriodicityConfig:
        return PeriodicityConfig(
            jnd_cents=self.jnd_cents, qmax=self.qmax, pairwise_constraint=pairwise
        )

    def transitive_config(self, scope_cents: float | None = None) -> TransitiveConfig:
        return TransitiveConfig(
            jnd_cents=self.jnd_cents,
            qmax=self.qmax,
            scope_cents=self.scope_cents if scope_cents is None else scope_cents,
        )

    def snapshot(self) -> dict:
        """JSON-ready dict embedded in every artifact."""
        return {
            "f0_hz": self.f0_hz,
            "jnd_cents": self.jnd_cents,
            "sigma_mode": self.sigma_mode,
            "sigma_cents": self.sigma_cents(),
            "qmax": self.qmax,
            "resolutions": {str(k): v for k, v in sorted(self.resolutions.items())},
            "spectrum": [[r, a] for r, a in self.spectrum.partials],
            "roughness": {
                "slow_decay": self.roughness.slow_decay,
                "fast_decay": self.roughness.fast_decay,
                "peak_fraction": self.roughness.peak_fraction,
                "bandwidth_slope": self.roughness.bandwidth_slope,
                "bandwidth_offset_hz": self.roughness.bandwidth_offset_hz,
                "scale": self.roughness.scale,
            },
            "scope_cents": self.scope_cents,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        kwargs = {}
        plain = {
            "f0_hz": float,
            "jnd_cents": float,
            "sigma_mode": str,
            "qmax": int,
            "scope_cents": float,
        }
        for key, cast in plain.items():
            if key in data:
                kwargs[key] = cast(data[key])
        if "resolutions" in data:
            kwargs["resolutions"] = {int(k): int(v) for k, v in data["resolutions"].items()}
        if "spectrum" in data:
            kwargs["spectrum"] = Spectrum(tuple((float(r), float(a)) for r, a in data["spectrum"]))
        if "roughness" in data:
            kwargs["roughness"] = RoughnessParams(**data["roughness"])
        unknown = set(data) - set(plain) - {"resolutions", "spectrum", "roughness"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str) -> "Config":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)
