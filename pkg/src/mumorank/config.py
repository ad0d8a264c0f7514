from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PREFERENCE_MODES = ("uniform", "hub_preferring")
INIT_MODES = ("uniform", "degree_proportional")


@dataclass(frozen=True)
class SolverConfig:
    """Power-iteration settings.

    ``tol`` bounds the L1 change per modality (or per side) between
    consecutive iterates.
    """

    tol: float = 1e-12
    max_iter: int = 100_000
    init: str = "uniform"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if int(self.max_iter) < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.init not in INIT_MODES:
            raise ValueError(f"init must be one of {INIT_MODES}, got {self.init!r}")


@dataclass(frozen=True)
class PreferenceSpec:
    """Preferred label sets per modality plus the redistribution mode."""

    preferred: dict = field(default_factory=dict)
    mode: str = "hub_preferring"

    def __post_init__(self):
        if self.mode not in PREFERENCE_MODES:
            raise ValueError(f"mode must be one of {PREFERENCE_MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class DampingSpec:
    zetas: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.mean(self.zetas))

    @property
    def equal(self) -> bool:
        return bool(np.all(self.zetas == self.zetas[0]))
