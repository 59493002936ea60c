"""Involutions, symmetric experiments and the pairwise share bound.

An experiment is symmetric under an involution ``l`` when the minority's
likelihood of ``s`` equals the majority's likelihood of ``l(s)`` for every
signal.  The main geometric example is the reflection across the hyperplane
equidistant from the two type means.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .allocation import TieBreak, minority_mask, minority_share
from .constructions import symmetric_vertex_experiment
from .errors import DegenerateMeans, InvalidExperiment, NotSymmetric, SizeMismatch, UnpairedSignal
from .experiment import Experiment, Involution, Prior, SignalSpace, _as_prior, signal_probabilities

__all__ = [
    "Involution",
    "PairCheck",
    "PairwiseReport",
    "SYMMETRY_TOL",
    "is_symmetric",
    "max_share_symmetric_search",
    "midplane_reflection",
    "pair_signals_by_embedding",
    "random_symmetric_experiment",
    "symmetry_violations",
    "verify_pairwise_share_bound",
]

SYMMETRY_TOL = 1e-9
BOUND_SLACK = 1e-12


def midplane_reflection(mu_min, mu_maj, s):
    """Reflect ``s`` across the perpendicular bisector of ``mu_min`` and ``mu_maj``.

    Scalars are treated as points on the line and a float is returned.
    """
    a = np.atleast_1d(np.asarray(mu_min, dtype=float))
    b = np.atleast_1d(np.asarray(mu_maj, dtype=float))
    x = np.atleast_1d(np.asarray(s, dtype=float))
    if not (a.shape == b.shape == x.shape):
        raise SizeMismatch("means and point must share one dimension")
    d = b - a
    dd = float(np.dot(d, d))
    if dd == 0.0:
        raise DegenerateMeans("the two type means coincide; the midplane is undefined")
    mid = 0.5 * (a + b)
    out = x - 2.0 * (np.dot(x - mid, d) / dd) * d
    if np.ndim(s) == 0:
        return float(out[0])
    return out


def pair_signals_by_embedding(
    space: SignalSpace, mu_min, mu_maj, tol: float = 1e-9
) -> Involution:
    """Pairing induced on an embedded signal grid by the midplane reflection."""
    if space.embedding is None:
        raise InvalidExperiment("signal space has no embedding")
    pts = np.array(space.embedding, dtype=float)
    scalar = pts.shape[1] == 1 and np.ndim(mu_min) == 0
    pairing = []
    unpaired = []
    for i, p in enumerate(pts):
        target = midplane_reflection(mu_min, mu_maj, p[0] if scalar else p)
        dist = np.linalg.norm(pts - np.atleast_1d(target), axis=1)
        hits = np.flatnonzero(dist <= tol)
        if hits.size != 1:
            unpaired.append(space.labels[i])
            pairing.append(i)
        else:
            pairing.append(int(hits[0]))
    if unpaired:
        raise UnpairedSignal(unpaired)
    return Involution(tuple(pairing))


def symmetry_violations(
    exp: Experiment, inv: Involution, tol: float = SYMMETRY_TOL
) -> list[tuple[int, float]]:
    """Signals where |lik_min(s) - lik_maj(l(s))| exceeds ``tol``, with the gap."""
    if len(inv) != exp.n_signals:
        raise SizeMismatch(
            f"involution covers {len(inv)} signals, experiment has {exp.n_signals}"
        )
    gap = np.abs(exp.lik_min - exp.lik_maj[inv.as_array()])
    return [(int(i), float(gap[i])) for i in np.flatnonzero(gap > tol)]


def is_symmetric(exp: Experiment, inv: Involution, tol: float = SYMMETRY_TOL) -> bool:
    return not symmetry_violations(exp, inv, tol)


@dataclass(frozen=True)
class PairCheck:
    signal: str
    partner: str
    p_signal: float
    p_partner: float
    partner_in_majority: bool
    bound_holds: bool

    @property
    def passed(self) -> bool:
        return self.partner_in_majority and self.bound_holds


@dataclass(frozen=True)
class PairwiseReport:
    """Outcome of the pairwise checks on every minority-served signal.

    For each ``s`` served minority content the report records whether its
    partner ``l(s)`` is served majority content and whether
    P[s] <= alpha/(1-alpha) * P[l(s)].  The aggregate check is P[S_min] <= alpha.
    """

    alpha: float
    checks: tuple[PairCheck, ...]
    share: float
    symmetry_gaps: tuple[tuple[str, float], ...] = ()

    @property
    def aggregate_holds(self) -> bool:
        return self.share <= self.alpha + BOUND_SLACK

    @property
    def passed(self) -> bool:
        return (
            not self.symmetry_gaps
            and self.aggregate_holds
            and all(c.passed for c in self.checks)
        )

    def failures(self) -> list[str]:
        odds = self.alpha / (1.0 - self.alpha)
        out = [
            f"symmetry: lik_min({lab}) != lik_maj(l({lab})) (gap {gap:.3g})"
            for lab, gap in self.symmetry_gaps
        ]
        for c in self.checks:
            if not c.partner_in_majority:
                out.append(f"partner: l({c.signal}) = {c.partner} is also served minority content")
            if not c.bound_holds:
                out.append(
                    f"pairwise: P[{c.signal}] = {c.p_signal:.6g} > "
                    f"alpha/(1-alpha) * P[{c.partner}] = {odds * c.p_partner:.6g}"
                )
        if not self.aggregate_holds:
            out.append(f"aggregate: P[S_min] = {self.share:.6g} > alpha = {self.alpha:.6g}")
        return out

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "share": self.share,
            "aggregate_holds": self.aggregate_holds,
            "passed": self.passed,
            "checks": [c.__dict__ | {"passed": c.passed} for c in self.checks],
            "failures": self.failures(),
        }


def verify_pairwise_share_bound(
    exp: Experiment,
    prior: Prior | float,
    inv: Involution,
    tie_break: TieBreak = TieBreak.FAVOR_MINORITY,
    tol: float = SYMMETRY_TOL,
    require_symmetric: bool = True,
) -> PairwiseReport:
    """Check the pairwise inequalities behind the symmetric share bound.

    Raises ``NotSymmetric`` unless the experiment is symmetric under ``inv``;
    with ``require_symmetric=False`` the symmetry gaps are reported instead.
    """
    p = _as_prior(prior)
    gaps = symmetry_violations(exp, inv, tol)
    if gaps and require_symmetric:
        i, gap = gaps[0]
        raise NotSymmetric(
            f"lik_min({exp.labels[i]}) differs from lik_maj(l({exp.labels[i]})) by {gap:.3g}"
        )
    probs = signal_probabilities(exp, p)
    mask = minority_mask(exp, p, tie_break)
    checks = []
    for i in np.flatnonzero(mask):
        j = inv(int(i))
        checks.append(
            PairCheck(
                signal=exp.labels[i],
                partner=exp.labels[j],
                p_signal=float(probs[i]),
                p_partner=float(probs[j]),
                partner_in_majority=not bool(mask[j]),
                bound_holds=bool(probs[i] <= p.odds * probs[j] + BOUND_SLACK),
            )
        )
    return PairwiseReport(
        alpha=p.alpha,
        checks=tuple(checks),
        share=float(probs[mask].sum()),
        symmetry_gaps=tuple((exp.labels[i], g) for i, g in gaps),
    )


def random_symmetric_experiment(
    prior: Prior | float, n_pairs: int, n_fixed: int, seed: int
) -> tuple[Experiment, Involution]:
    """Random experiment symmetric under a fixed pairing.

    Signals ``2k`` and ``2k+1`` are partners for k < n_pairs; the last
    ``n_fixed`` signals are fixed points.  The minority row is flat-Dirichlet.
    """
    _as_prior(prior)
    if n_pairs < 0 or n_fixed < 0 or n_pairs + n_fixed < 1:
        raise InvalidExperiment("need n_pairs >= 0, n_fixed >= 0 and at least one signal")
    n = 2 * n_pairs + n_fixed
    rng = np.random.default_rng(seed)
    lik_min = rng.dirichlet(np.ones(n))
    perm = np.arange(n)
    perm[: 2 * n_pairs] = perm[: 2 * n_pairs].reshape(n_pairs, 2)[:, ::-1].ravel()
    return Experiment.from_rows(lik_min, lik_min[perm]), Involution(tuple(perm.tolist()))


def max_share_symmetric_search(
    prior: Prior | float,
    n_pairs: int,
    n_fixed: int,
    n_restarts: int,
    seed: int,
    tie_break: TieBreak = TieBreak.FAVOR_MINORITY,
) -> float:
    """Largest minority share over random symmetric experiments and the
    three-signal vertex construction.  Restart ``k`` uses seed ``seed + k``."""
    p = _as_prior(prior)
    vertex, _ = symmetric_vertex_experiment(p)
    best = minority_share(vertex, p, tie_break)
    for k in range(n_restarts):
        exp, _ = random_symmetric_experiment(p, n_pairs, n_fixed, seed + k)
        best = max(best, minority_share(exp, p, tie_break))
    return best
