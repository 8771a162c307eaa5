"""Unconditional bit error probability by Monte Carlo integration.

The conditional BEP is averaged over the fading distribution with
importance sampling where the proposal density equals the true channel
component density, so each weight reduces to the conditional BEP evaluated
at the drawn channel tuple. Evaluation is chunked with a fixed reduction
order, making results bit-reproducible for a given (stream, j_points,
chunk_size).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import FadingModel

DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class BepEstimate:
    """Monte Carlo estimate of an unconditional error probability."""

    value: float
    std_error: float
    n_points: int

    def __post_init__(self):
        # probability-valued integrands keep the estimate in [0,1] up to
        # estimator noise; diagnostic moment integrands (e.g. |h|^2) may sit
        # at 1 exactly, so the upper check allows a noise margin
        if not 0.0 <= self.value <= 1.0 + 10.0 * self.std_error:
            raise ValueError(f"estimate outside [0,1]: {self.value}")
        if self.std_error < 0.0:
            raise ValueError(f"negative std_error: {self.std_error}")


def unconditional_bep(cond_bep, model: FadingModel, channel_arity: int,
                      j_points: int, rng, chunk_size: int = DEFAULT_CHUNK) -> BepEstimate:
    """Average cond_bep over j_points channel draws.

    cond_bep receives complex ndarrays: one array for arity 1, a (h1, h2)
    pair for arity 2, and must return the conditional BEP elementwise. The
    returned std_error is the sample standard deviation of the weights over
    sqrt(J).
    """
    if channel_arity not in (1, 2):
        raise ValueError(f"channel_arity must be 1 or 2, got {channel_arity}")
    if j_points < 1000:
        raise ValueError(f"j_points must be >= 1000, got {j_points}")
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")

    mu, sd = model.component_mean, model.component_std
    # sums are accumulated about a shift taken from the first weight, which
    # keeps the variance formula exact for constant integrands and avoids
    # cancellation for nearly constant ones
    shift = 0.0
    acc = 0.0
    acc_sq = 0.0
    done = 0
    first = True
    while done < j_points:
        m = min(chunk_size, j_points - done)
        z = rng.standard_normal((2 * channel_arity, m))
        h1 = (mu + sd * z[0]) + 1j * (mu + sd * z[1])
        if channel_arity == 1:
            w = np.asarray(cond_bep(h1), dtype=np.float64)
        else:
            h2 = (mu + sd * z[2]) + 1j * (mu + sd * z[3])
            w = np.asarray(cond_bep(h1, h2), dtype=np.float64)
        if w.shape != (m,):
            raise RuntimeError(
                f"conditional BEP returned shape {w.shape}, expected {(m,)}"
            )
        if not np.all(np.isfinite(w)):
            bad = int(np.flatnonzero(~np.isfinite(w))[0])
            raise RuntimeError(
                f"non-finite weight at draw {done + bad}: {w[bad]!r} "
                "(broken conditional-BEP evaluator)"
            )
        if first:
            shift = float(w[0])
            first = False
        d = w - shift
        acc += float(d.sum())
        acc_sq += float((d * d).sum())
        done += m

    value = shift + acc / j_points
    var = acc_sq - acc * acc / j_points
    var = max(0.0, var) / (j_points - 1)
    return BepEstimate(
        value=float(value),
        std_error=math.sqrt(var / j_points),
        n_points=j_points,
    )
