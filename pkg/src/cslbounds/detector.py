"""Detector models: geometry, arrangement, response, readout and noise.

A DetectorModel ties together one of the three supported archetypes:

  interferometer   cylinder pair(s), free-mass response, strain/force readout
  accelerometer    cube pair, free-mass response, acceleration readout
  bar              half-cylinder bar, resonant-bar response, strain readout
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from .cslnoise import Cube, Cylinder, HalfCylinderBar, MassArrangement, MassGeometry
from .errors import ConfigError
from .response import FreeMass, ResonantBar, ResponseModel


@dataclass(frozen=True)
class Strain:
    """Strain readout; arm_length converts displacement to strain."""

    arm_length: Optional[float] = None

    def __post_init__(self):
        if self.arm_length is not None and not (math.isfinite(self.arm_length) and self.arm_length > 0.0):
            raise ValueError(f"arm_length must be finite and > 0, got {self.arm_length!r}")


@dataclass(frozen=True)
class Acceleration:
    pass


@dataclass(frozen=True)
class Force:
    pass


@dataclass(frozen=True)
class Displacement:
    pass


ReadoutKind = Union[Strain, Acceleration, Force, Displacement]

INTERFEROMETER = "interferometer"
ACCELEROMETER = "accelerometer"
BAR = "bar"


@dataclass(frozen=True)
class MeasuredNoise:
    """A published one-sided noise figure in the detector's native units.

    psd is a one-sided power density (native units squared per Hz).
    csl_fraction is the fraction of the measured *power* that cannot be
    accounted for by calibrated known sources and may be attributed to
    collapse noise; 1.0 when no independent calibration exists.
    """

    name: str
    quantity: str  # force | acceleration | strain | displacement
    psd: float
    frequency_hz: Optional[float] = None
    csl_fraction: float = 1.0
    provenance: str = ""

    def __post_init__(self):
        if self.quantity not in ("force", "acceleration", "strain", "displacement"):
            raise ValueError(f"unknown noise quantity {self.quantity!r}")
        if not (math.isfinite(self.psd) and self.psd > 0.0):
            raise ValueError(f"noise psd must be finite and > 0, got {self.psd!r}")
        if self.frequency_hz is not None and not (math.isfinite(self.frequency_hz) and self.frequency_hz > 0.0):
            raise ValueError(f"frequency_hz must be finite and > 0, got {self.frequency_hz!r}")
        if not (0.0 < self.csl_fraction <= 1.0):
            raise ValueError(f"csl_fraction must be in (0, 1], got {self.csl_fraction!r}")


@dataclass(frozen=True)
class DetectorModel:
    """One complete detector description (immutable, safe to share)."""

    name: str
    geometry: MassGeometry
    arrangement: MassArrangement
    response: ResponseModel
    readout: ReadoutKind
    noise: Tuple[MeasuredNoise, ...] = field(default_factory=tuple)

    def __post_init__(self):
        detector_archetype(self)  # rejects unsupported combinations

    def noise_entry(self, name: Optional[str] = None) -> MeasuredNoise:
        """Select a noise entry by name; default is the first entry."""
        if not self.noise:
            raise ConfigError(f"detector {self.name!r} declares no noise entries")
        if name is None:
            return self.noise[0]
        for entry in self.noise:
            if entry.name == name:
                return entry
        known = ", ".join(e.name for e in self.noise)
        raise ConfigError(f"detector {self.name!r} has no noise entry {name!r} (known: {known})")


def detector_archetype(det: DetectorModel) -> str:
    """Classify a detector into one of the supported archetypes.

    Raises ConfigError for combinations outside the three supported
    geometry/response/readout patterns.
    """
    geom, resp, readout = det.geometry, det.response, det.readout
    if isinstance(geom, Cylinder):
        if not isinstance(resp, FreeMass):
            raise ConfigError("response: cylinder-pair interferometers use the free_mass response")
        if not isinstance(readout, (Strain, Force, Displacement)):
            raise ConfigError("readout: cylinder-pair interferometers read out strain, force or displacement")
        if isinstance(readout, Strain) and readout.arm_length is None:
            raise ConfigError("readout.arm_length_m: required for a strain readout of an interferometer")
        return INTERFEROMETER
    if isinstance(geom, Cube):
        if not isinstance(resp, FreeMass):
            raise ConfigError("response: cube-pair accelerometers use the free_mass response")
        if not isinstance(readout, Acceleration):
            raise ConfigError("readout: cube-pair accelerometers read out acceleration")
        if det.arrangement.arm_count != 1:
            raise ConfigError("arrangement.arm_count: cube pairs support a single arm")
        return ACCELEROMETER
    if isinstance(geom, HalfCylinderBar):
        if not isinstance(resp, ResonantBar):
            raise ConfigError("response: bars use the resonant_bar response")
        if not isinstance(readout, Strain):
            raise ConfigError("readout: bars read out strain")
        if det.arrangement.arm_count != 1:
            raise ConfigError("arrangement.arm_count: a bar is a single-arm system")
        if det.arrangement.separation != 0.5 * geom.length:
            raise ConfigError("arrangement.separation_m: a bar forces separation = length/2")
        return BAR
    raise ConfigError(f"geometry: unsupported type {type(geom).__name__}")
