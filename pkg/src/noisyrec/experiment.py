"""Priors, finite statistical experiments and posterior calculus.

An experiment maps each of the two agent types to a distribution over a
finite signal space.  Signals can be addressed by label or by position.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import (
    InvalidExperiment,
    InvalidPrior,
    SizeMismatch,
    UnknownSignal,
    ZeroLikelihoodSignal,
)

ROW_SUM_TOL = 1e-12
PLAUSIBILITY_TOL = 1e-10

SignalId = Union[int, str]


class AgentType(enum.Enum):
    MINORITY = "minority"
    MAJORITY = "majority"


# Content x_min / x_maj is labelled by the type that prefers it.
Content = AgentType


@dataclass(frozen=True)
class Prior:
    """Incidence ``alpha`` of the minority type, strictly inside (0, 1/2)."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not np.isfinite(a) or not 0.0 < a < 0.5:
            raise InvalidPrior(f"alpha must satisfy 0 < alpha < 1/2, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def odds(self) -> float:
        """Prior odds alpha / (1 - alpha) of the minority type."""
        return self.alpha / (1.0 - self.alpha)


def _as_prior(prior: Prior | float) -> Prior:
    return prior if isinstance(prior, Prior) else Prior(prior)


@dataclass(frozen=True)
class SignalSpace:
    labels: tuple[str, ...]
    embedding: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if not labels:
            raise InvalidExperiment("signal space must contain at least one signal")
        if len(set(labels)) != len(labels):
            raise InvalidExperiment("signal labels must be unique")
        object.__setattr__(self, "labels", labels)
        if self.embedding is not None:
            emb = tuple(tuple(float(c) for c in np.atleast_1d(p)) for p in self.embedding)
            if len(emb) != len(labels):
                raise InvalidExperiment(
                    f"embedding has {len(emb)} points for {len(labels)} signals"
                )
            if len({len(p) for p in emb}) != 1:
                raise InvalidExperiment("embedding points must share one dimension")
            object.__setattr__(self, "embedding", emb)

    @classmethod
    def indexed(cls, n: int) -> "SignalSpace":
        return cls(tuple(f"s{i}" for i in range(n)))

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, signal: SignalId) -> int:
        if isinstance(signal, (int, np.integer)) and not isinstance(signal, bool):
            i = int(signal)
            if 0 <= i < len(self.labels):
                return i
            raise UnknownSignal(f"signal index {i} out of range [0, {len(self.labels)})")
        try:
            return self.labels.index(str(signal))
        except ValueError:
            raise UnknownSignal(f"unknown signal {signal!r}") from None


def _frozen_row(values, name: str) -> np.ndarray:
    row = np.array(values, dtype=float).ravel()
    if not np.all(np.isfinite(row)):
        raise InvalidExperiment(f"{name} contains non-finite entries")
    if np.any(row < 0.0):
        raise InvalidExperiment(f"{name} has a negative entry")
    s = row.sum()
    if abs(s - 1.0) > ROW_SUM_TOL:
        raise InvalidExperiment(f"{name} row sum is {s!r}, expected 1")
    row.setflags(write=False)
    return row


@dataclass(frozen=True, eq=False)
class Experiment:
    """A finite experiment: one likelihood row per agent type."""

    space: SignalSpace
    lik_min: np.ndarray
    lik_maj: np.ndarray

    def __post_init__(self):
        lmin = _frozen_row(self.lik_min, "lik_min")
        lmaj = _frozen_row(self.lik_maj, "lik_maj")
        n = len(self.space)
        if lmin.size != n or lmaj.size != n:
            raise SizeMismatch(
                f"row lengths ({lmin.size}, {lmaj.size}) must equal signal count {n}"
            )
        object.__setattr__(self, "lik_min", lmin)
        object.__setattr__(self, "lik_maj", lmaj)

    @classmethod
    def from_rows(
        cls,
        lik_min: Sequence[float],
        lik_maj: Sequence[float],
        labels: Sequence[str] | None = None,
        embedding=None,
    ) -> "Experiment":
        n = len(lik_min)
        space = SignalSpace(tuple(labels) if labels is not None else SignalSpace.indexed(n).labels,
                            embedding)
        return cls(space, lik_min, lik_maj)

    @property
    def n_signals(self) -> int:
        return len(self.space)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.space.labels

    def row(self, agent: AgentType) -> np.ndarray:
        return self.lik_min if agent is AgentType.MINORITY else self.lik_maj

    def __eq__(self, other):
        if not isinstance(other, Experiment):
            return NotImplemented
        return (
            self.space == other.space
            and np.array_equal(self.lik_min, other.lik_min)
            and np.array_equal(self.lik_maj, other.lik_maj)
        )

    def __repr__(self):
        return (
            f"Experiment(labels={list(self.labels)}, lik_min={self.lik_min.tolist()}, "
            f"lik_maj={self.lik_maj.tolist()})"
        )


@dataclass(frozen=True)
class Involution:
    """Self-inverse pairing of signal indices; fixed points are allowed."""

    pairing: tuple[int, ...]

    def __post_init__(self):
        p = tuple(int(i) for i in self.pairing)
        n = len(p)
        if any(not 0 <= i < n for i in p):
            raise InvalidExperiment(f"involution entries must lie in [0, {n})")
        if any(p[p[i]] != i for i in range(n)):
            raise InvalidExperiment("pairing is not self-inverse")
        object.__setattr__(self, "pairing", p)

    @classmethod
    def identity(cls, n: int) -> "Involution":
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.pairing)

    def __call__(self, i: int) -> int:
        return self.pairing[i]

    @property
    def fixed_points(self) -> tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.pairing) if i == j)

    def as_array(self) -> np.ndarray:
        return np.array(self.pairing, dtype=int)


@dataclass(frozen=True, eq=False)
class PosteriorDistribution:
    """Finite distribution over posterior beliefs P[minority | s].

    ``signals`` keeps the originating signal index of every support point, so
    equal beliefs from different signals stay separate.
    """

    support: np.ndarray
    masses: np.ndarray
    signals: tuple[int, ...] | None = None

    def __post_init__(self):
        support = np.array(self.support, dtype=float).ravel()
        masses = np.array(self.masses, dtype=float).ravel()
        if support.size != masses.size or support.size == 0:
            raise InvalidExperiment("support and masses must be non-empty and equally long")
        if np.any(masses < 0.0) or abs(masses.sum() - 1.0) > ROW_SUM_TOL:
            raise InvalidExperiment(f"masses must be non-negative and sum to 1, got {masses.sum()!r}")
        if np.any((support < 0.0) | (support > 1.0)):
            raise InvalidExperiment("support values must lie in [0, 1]")
        support.setflags(write=False)
        masses.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "masses", masses)
        if self.signals is not None:
            sig = tuple(int(i) for i in self.signals)
            if len(sig) != support.size:
                raise SizeMismatch("signal index list must parallel the support")
            object.__setattr__(self, "signals", sig)

    @property
    def mean(self) -> float:
        return float(np.dot(self.masses, self.support))

    def __len__(self) -> int:
        return self.support.size


def signal_probabilities(exp: Experiment, prior: Prior | float) -> np.ndarray:
    a = _as_prior(prior).alpha
    return a * exp.lik_min + (1.0 - a) * exp.lik_maj


def signal_probability(exp: Experiment, prior: Prior | float, signal: SignalId) -> float:
    """Marginal probability P[s] = alpha lik_min(s) + (1 - alpha) lik_maj(s)."""
    i = exp.space.index(signal)
    a = _as_prior(prior).alpha
    return float(a * exp.lik_min[i] + (1.0 - a) * exp.lik_maj[i])


def posterior(exp: Experiment, prior: Prior | float, signal: SignalId) -> float:
    """Posterior probability of the minority type after observing ``signal``."""
    i = exp.space.index(signal)
    a = _as_prior(prior).alpha
    w_min = a * exp.lik_min[i]
    w_maj = (1.0 - a) * exp.lik_maj[i]
    if w_min + w_maj == 0.0:
        raise ZeroLikelihoodSignal(f"signal {exp.labels[i]!r} has zero probability under both types")
    return float(w_min / (w_min + w_maj))


def induced_posterior_distribution(exp: Experiment, prior: Prior | float) -> PosteriorDistribution:
    a = _as_prior(prior).alpha
    w_min = a * exp.lik_min
    w_maj = (1.0 - a) * exp.lik_maj
    mass = w_min + w_maj
    keep = np.flatnonzero(mass > 0.0)
    return PosteriorDistribution(
        support=w_min[keep] / mass[keep],
        masses=mass[keep] / mass[keep].sum(),
        signals=tuple(keep.tolist()),
    )


def is_bayes_plausible(pd: PosteriorDistribution, prior: Prior | float) -> bool:
    a = prior.alpha if isinstance(prior, Prior) else float(prior)
    return abs(pd.mean - a) <= PLAUSIBILITY_TOL
