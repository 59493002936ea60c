"""Simulation of the full timeline: type, then signal, then allocation.

Samples are drawn in fixed-size batches.  Batch ``k`` gets its own stream
from ``SeedSequence(seed).spawn`` driving a Philox counter-based bit
generator, so totals do not depend on the order batches are merged in.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .allocation import TieBreak, minority_mask
from .experiment import Experiment, Prior, _as_prior
from .gaussian import GaussianModel, decision_boundary

BATCH_SIZE = 1 << 18


@dataclass(frozen=True)
class SimReport:
    n_samples: int
    share_hat: float
    share_se: float
    u_min_hat: float
    u_min_se: float
    u_maj_hat: float
    u_maj_se: float
    n_min: int
    n_maj: int
    seed: int

    def to_dict(self) -> dict:
        """Plain dict; undefined standard errors become ``None``."""
        return {k: (None if isinstance(v, float) and math.isnan(v) else v)
                for k, v in asdict(self).items()}


def _proportion(hits: int, n: int) -> tuple[float, float]:
    if n == 0:
        return 0.0, math.nan
    p = hits / n
    return p, math.sqrt(p * (1.0 - p) / n)


def _batches(seed: int, n_samples: int):
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    n_batches = -(-n_samples // BATCH_SIZE)
    children = np.random.SeedSequence(seed).spawn(n_batches)
    for k, child in enumerate(children):
        size = min(BATCH_SIZE, n_samples - k * BATCH_SIZE)
        yield np.random.Generator(np.random.Philox(child)), size


def _report(counts: np.ndarray, n: int, seed: int) -> SimReport:
    n_min, min_served, n_maj, maj_served, xmin = (int(c) for c in counts)
    share, share_se = _proportion(xmin, n)
    u_min, u_min_se = _proportion(min_served, n_min)
    u_maj, u_maj_se = _proportion(maj_served, n_maj)
    return SimReport(n, share, share_se, u_min, u_min_se, u_maj, u_maj_se, n_min, n_maj, seed)


def _tally(is_min: np.ndarray, served_min: np.ndarray) -> np.ndarray:
    return np.array([
        is_min.sum(),
        (is_min & served_min).sum(),
        (~is_min).sum(),
        (~is_min & ~served_min).sum(),
        served_min.sum(),
    ], dtype=np.int64)


def simulate_discrete(
    exp: Experiment,
    prior: Prior | float,
    tie_break: TieBreak = TieBreak.FAVOR_MINORITY,
    n_samples: int = 1_000_000,
    seed: int = 42,
) -> SimReport:
    a = _as_prior(prior).alpha
    served = minority_mask(exp, prior, tie_break)
    cdf_min = np.cumsum(exp.lik_min)
    cdf_maj = np.cumsum(exp.lik_maj)
    last = exp.n_signals - 1
    counts = np.zeros(5, dtype=np.int64)
    for rng, size in _batches(seed, n_samples):
        is_min = rng.random(size) < a
        u = rng.random(size)
        sig = np.where(
            is_min,
            np.searchsorted(cdf_min, u, side="right"),
            np.searchsorted(cdf_maj, u, side="right"),
        )
        np.minimum(sig, last, out=sig)
        counts += _tally(is_min, served[sig])
    return _report(counts, n_samples, seed)


def simulate_gaussian(
    m: GaussianModel,
    tie_break: TieBreak = TieBreak.FAVOR_MINORITY,
    n_samples: int = 1_000_000,
    seed: int = 42,
) -> SimReport:
    x_star = decision_boundary(m)
    counts = np.zeros(5, dtype=np.int64)
    for rng, size in _batches(seed, n_samples):
        is_min = rng.random(size) < m.alpha
        s = np.where(is_min, 0.0, 1.0) + m.kappa * rng.standard_normal(size)
        served = s <= x_star if tie_break is TieBreak.FAVOR_MINORITY else s < x_star
        counts += _tally(is_min, served)
    return _report(counts, n_samples, seed)
