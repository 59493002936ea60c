"""Explicit experiments that attain the extreme shares and utility profiles."""

from __future__ import annotations

from .errors import NotBayesPlausible, OutOfRange
from .experiment import (
    PLAUSIBILITY_TOL,
    Experiment,
    Involution,
    PosteriorDistribution,
    Prior,
    _as_prior,
    is_bayes_plausible,
)

# Slack for p sitting on the 2*alpha endpoint after float arithmetic.
_RANGE_SLACK = 1e-12


def posterior_to_experiment(pd: PosteriorDistribution, prior: Prior | float) -> Experiment:
    """Experiment with one signal per support point that induces ``pd``.

    The minority row is mass * belief / alpha, the majority row
    mass * (1 - belief) / (1 - alpha).
    """
    a = _as_prior(prior).alpha
    if not is_bayes_plausible(pd, a):
        raise NotBayesPlausible(
            f"posterior mean {pd.mean!r} differs from alpha={a!r} by more than {PLAUSIBILITY_TOL}"
        )
    lik_min = pd.masses * pd.support / a
    lik_maj = pd.masses * (1.0 - pd.support) / (1.0 - a)
    # Renormalize away the (<= 1e-10) plausibility residue.
    return Experiment.from_rows(lik_min / lik_min.sum(), lik_maj / lik_maj.sum())


def extremal_share_experiment(prior: Prior | float, p: float) -> Experiment:
    """Two-signal experiment with minority share exactly ``p``.

    Signal ``s0`` carries posterior 1/2 with mass p, signal ``s1`` carries
    posterior (alpha - p/2)/(1 - p) with the remaining mass.  Signal ``s0`` is
    an exact tie, so the share is ``p`` only under ``FAVOR_MINORITY``.
    """
    a = _as_prior(prior).alpha
    p = float(p)
    if p < 0.0:
        raise OutOfRange(f"p={p!r} is negative")
    if p > 2.0 * a + _RANGE_SLACK:
        raise OutOfRange(f"p={p!r} exceeds 2*alpha={2 * a!r}, the largest attainable share")
    p = min(p, 2.0 * a)
    x = p / (2.0 * a)
    y = p / (2.0 * (1.0 - a))
    return Experiment.from_rows([x, 1.0 - x], [y, 1.0 - y])


def uninformative(prior: Prior | float) -> Experiment:
    _as_prior(prior)
    return Experiment.from_rows([1.0], [1.0])


def perfect(prior: Prior | float) -> Experiment:
    _as_prior(prior)
    return Experiment.from_rows([1.0, 0.0], [0.0, 1.0], labels=["minority", "majority"])


def symmetric_vertex_experiment(prior: Prior | float) -> tuple[Experiment, Involution]:
    """Three-signal symmetric experiment with utilities (1/2, 1 - alpha/(2(1-alpha))).

    ``s`` and ``l_s`` are swapped by the involution, ``s_tilde`` is fixed and
    receives the same remainder mass under both types.
    """
    a = _as_prior(prior).alpha
    q = a / (2.0 * (1.0 - a))
    r = 0.5 - q
    exp = Experiment.from_rows(
        [0.5, q, r], [q, 0.5, r], labels=["s", "l_s", "s_tilde"]
    )
    return exp, Involution((1, 0, 2))


def construct(name: str, prior: Prior | float, p: float | None = None) -> Experiment:
    """Build a named construction (uninformative, perfect, extremal, symmetric-vertex)."""
    if name == "uninformative":
        return uninformative(prior)
    if name == "perfect":
        return perfect(prior)
    if name == "extremal":
        if p is None:
            raise OutOfRange("extremal construction needs p")
        return extremal_share_experiment(prior, p)
    if name == "symmetric-vertex":
        return symmetric_vertex_experiment(prior)[0]
    raise ValueError(f"unknown construction {name!r}")
