"""Unit-gain Rayleigh/Rician block fading.

Each real/imag channel component is N(sqrt(K/(2(1+K))), 1/(2(1+K))) for
Rician factor K (linear); K=0 gives CN(0,1) Rayleigh. The construction has
E[|h|^2] = 1 exactly for every K. Coefficients are constant over one bit
frame and independent across frames.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FadingModel:
    """Rician fading with linear K factor; k_linear = 0 is Rayleigh."""

    k_linear: float

    def __post_init__(self):
        if self.k_linear < 0:
            raise ValueError(f"Rician K must be >= 0, got {self.k_linear}")

    @classmethod
    def from_k_db(cls, k_db: float) -> "FadingModel":
        """Figure/config convention: K quoted in dB, except that k_db == 0
        denotes Rayleigh (K = 0 linear), matching the K=0 curve labels."""
        if k_db == 0:
            return cls(0.0)
        return cls(10.0 ** (k_db / 10.0))

    @property
    def component_mean(self) -> float:
        return math.sqrt(self.k_linear / (2.0 * (1.0 + self.k_linear)))

    @property
    def component_var(self) -> float:
        return 1.0 / (2.0 * (1.0 + self.k_linear))

    @property
    def component_std(self) -> float:
        return math.sqrt(self.component_var)


def draw_channel(model: FadingModel, rng: np.random.Generator) -> complex:
    """One complex fading coefficient with independent re/im components."""
    z = rng.standard_normal(2)
    mu, sd = model.component_mean, model.component_std
    return complex(mu + sd * z[0], mu + sd * z[1])


def draw_channel_components(model: FadingModel, size, rng: np.random.Generator):
    """(re, im) component arrays of the given size, for bulk simulation."""
    mu, sd = model.component_mean, model.component_std
    re = mu + sd * rng.standard_normal(size)
    im = mu + sd * rng.standard_normal(size)
    return re, im
