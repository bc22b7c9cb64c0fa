"""Observation and dataset types for censored S-N data."""
from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError

__all__ = ["Status", "Observation", "Dataset", "ScaledDataset"]


class Status(enum.Enum):
    FAILURE = "failure"
    RUNOUT = "runout"

    @property
    def delta(self) -> int:
        """Failure indicator (1 for a failure, 0 for a runout)."""
        return 1 if self is Status.FAILURE else 0


@dataclass(frozen=True)
class Observation:
    stress: float
    cycles: float
    status: Status

    def __post_init__(self):
        if not (np.isfinite(self.stress) and self.stress > 0.0):
            raise DataError(f"stress must be positive, got {self.stress}")
        if not (np.isfinite(self.cycles) and self.cycles > 0.0):
            raise DataError(f"cycles must be positive, got {self.cycles}")
        if not isinstance(self.status, Status):
            object.__setattr__(self, "status", Status(self.status))


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of observations with unit labels.

    ``s_max`` and ``n_max`` are always recomputed from the observations.
    """

    observations: tuple[Observation, ...]
    stress_units: str = ""
    cycles_units: str = "cycles"
    stress: np.ndarray = field(init=False, repr=False, compare=False)
    cycles: np.ndarray = field(init=False, repr=False, compare=False)
    failed: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        obs = tuple(self.observations)
        object.__setattr__(self, "observations", obs)
        stress = np.array([o.stress for o in obs], dtype=float)
        cycles = np.array([o.cycles for o in obs], dtype=float)
        failed = np.array([o.status is Status.FAILURE for o in obs], dtype=bool)
        for arr in (stress, cycles, failed):
            arr.setflags(write=False)
        object.__setattr__(self, "stress", stress)
        object.__setattr__(self, "cycles", cycles)
        object.__setattr__(self, "failed", failed)

    @classmethod
    def from_arrays(cls, stress, cycles, failed, stress_units: str = "", cycles_units: str = "cycles"):
        obs = tuple(
            Observation(float(s), float(n), Status.FAILURE if f else Status.RUNOUT)
            for s, n, f in zip(stress, cycles, failed)
        )
        return cls(obs, stress_units, cycles_units)

    def __len__(self) -> int:
        return len(self.observations)

    @property
    def s_max(self) -> float:
        return float(self.stress.max())

    @property
    def n_max(self) -> float:
        return float(self.cycles.max())

    @property
    def n_failures(self) -> int:
        return int(self.failed.sum())

    def digest(self) -> str:
        """SHA-256 of the canonical CSV rendering; identifies the data content."""
        h = hashlib.sha256()
        h.update(b"stress,cycles,status\n")
        for o in self.observations:
            h.update(f"{o.stress!r},{o.cycles!r},{o.status.value}\n".encode())
        return h.hexdigest()


@dataclass(frozen=True)
class ScaledDataset:
    """Stresses divided by ``s_max`` and cycles by ``n_max``.

    The original dataset is kept so unscaling is exact.
    """

    original: Dataset
    s_max: float
    n_max: float
    stress: np.ndarray = field(init=False, repr=False, compare=False)
    cycles: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "stress", self.original.stress / self.s_max)
        object.__setattr__(self, "cycles", self.original.cycles / self.n_max)

    @property
    def failed(self) -> np.ndarray:
        return self.original.failed

    def __len__(self) -> int:
        return len(self.original)

    def unscale(self) -> Dataset:
        return self.original
