"""Welfare-maximizing allocation, minority share and group utilities."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .experiment import AgentType, Experiment, Prior, SignalId, _as_prior

# Relative band inside which alpha*lik_min(s) and (1-alpha)*lik_maj(s) count as
# equal.  Constructions that sit exactly on posterior 1/2 only hit the tie up
# to rounding.
TIE_RTOL = 1e-12


class TieBreak(enum.Enum):
    FAVOR_MINORITY = "favor-minority"
    FAVOR_MAJORITY = "favor-majority"


@dataclass(frozen=True)
class AllocationRule:
    labels: tuple[str, ...]
    assignment: tuple[AgentType, ...]

    def __getitem__(self, signal: SignalId) -> AgentType:
        if isinstance(signal, (int, np.integer)):
            return self.assignment[int(signal)]
        return self.assignment[self.labels.index(str(signal))]

    @property
    def minority_mask(self) -> np.ndarray:
        return np.array([c is AgentType.MINORITY for c in self.assignment], dtype=bool)

    def as_dict(self) -> dict[str, str]:
        return {lab: c.value for lab, c in zip(self.labels, self.assignment)}


@dataclass(frozen=True)
class GroupUtilities:
    u_min: float
    u_maj: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.u_min, self.u_maj)


def minority_mask(
    exp: Experiment,
    prior: Prior | float,
    tie_break: TieBreak = TieBreak.FAVOR_MINORITY,
    tie_rtol: float = TIE_RTOL,
) -> np.ndarray:
    """Boolean mask of signals served minority content.

    Signals with zero probability are always served majority content.
    """
    a = _as_prior(prior).alpha
    w_min = a * exp.lik_min
    w_maj = (1.0 - a) * exp.lik_maj
    total = w_min + w_maj
    diff = w_min - w_maj
    tie = np.abs(diff) <= tie_rtol * total
    if tie_break is TieBreak.FAVOR_MINORITY:
        chosen = (diff > 0.0) | tie
    else:
        chosen = (diff > 0.0) & ~tie
    return chosen & (total > 0.0)


def allocate(
    exp: Experiment, prior: Prior | float, tie_break: TieBreak = TieBreak.FAVOR_MINORITY
) -> AllocationRule:
    mask = minority_mask(exp, prior, tie_break)
    return AllocationRule(
        labels=exp.labels,
        assignment=tuple(AgentType.MINORITY if m else AgentType.MAJORITY for m in mask),
    )


def minority_share(
    exp: Experiment, prior: Prior | float, tie_break: TieBreak = TieBreak.FAVOR_MINORITY
) -> float:
    """Probability P[x_min] that minority content is served."""
    a = _as_prior(prior).alpha
    mask = minority_mask(exp, prior, tie_break)
    return float(np.sum(a * exp.lik_min[mask] + (1.0 - a) * exp.lik_maj[mask]))


def group_utilities(
    exp: Experiment, prior: Prior | float, tie_break: TieBreak = TieBreak.FAVOR_MINORITY
) -> GroupUtilities:
    mask = minority_mask(exp, prior, tie_break)
    u_min = float(np.sum(exp.lik_min[mask]))
    u_maj = float(np.sum(exp.lik_maj[~mask]))
    return GroupUtilities(min(u_min, 1.0), min(u_maj, 1.0))


def expected_welfare(gu: GroupUtilities, prior: Prior | float) -> float:
    a = _as_prior(prior).alpha
    return a * gu.u_min + (1.0 - a) * gu.u_maj


def share_from_utilities(gu: GroupUtilities, prior: Prior | float) -> float:
    """P[x_min] recovered from group utilities: alpha u_min + (1-alpha)(1-u_maj)."""
    a = _as_prior(prior).alpha
    return a * gu.u_min + (1.0 - a) * (1.0 - gu.u_maj)


def lower_bound_check(gu: GroupUtilities, prior: Prior | float, tol: float = 1e-10) -> bool:
    """Whether (alpha/(1-alpha)) u_min + u_maj >= 1 holds up to ``tol``."""
    p = _as_prior(prior)
    return p.odds * gu.u_min + gu.u_maj >= 1.0 - tol
