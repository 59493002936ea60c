"""Concavification on the binary belief simplex and achievable utility regions.

With two types a belief is a single number in [0, 1], so the concave closure
of a value function is the upper convex hull of its graph.  Value functions
are piecewise affine and may jump at breakpoints; the value *at* a breakpoint
is stored separately from the one-sided limits so that a threshold rule such
as ``1{x >= 1/2}`` is represented exactly.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .allocation import TieBreak, group_utilities
from .constructions import (
    extremal_share_experiment,
    perfect,
    symmetric_vertex_experiment,
    uninformative,
)
from .errors import InvalidExperiment
from .experiment import Experiment, Prior, _as_prior
from .symmetry import random_symmetric_experiment


@dataclass(frozen=True)
class PiecewiseValue:
    """Piecewise-affine function on [0, 1].

    ``pieces[k] = (intercept, slope)`` describes the function on the open
    interval between ``breakpoints[k]`` and ``breakpoints[k + 1]``;
    ``point_values[k]`` is the value at ``breakpoints[k]`` itself.
    """

    breakpoints: tuple[float, ...]
    pieces: tuple[tuple[float, float], ...]
    point_values: tuple[float, ...]

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        if len(bp) < 2 or bp[0] != 0.0 or bp[-1] != 1.0:
            raise InvalidExperiment("breakpoints must start at 0 and end at 1")
        if any(b <= a for a, b in zip(bp, bp[1:])):
            raise InvalidExperiment("breakpoints must be strictly ascending")
        pieces = tuple((float(c), float(s)) for c, s in self.pieces)
        pv = tuple(float(v) for v in self.point_values)
        if len(pieces) != len(bp) - 1 or len(pv) != len(bp):
            raise InvalidExperiment("need one piece per interval and one value per breakpoint")
        if not np.all(np.isfinite(np.array(pieces))) or not np.all(np.isfinite(pv)):
            raise InvalidExperiment("values must be finite")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "point_values", pv)

    @classmethod
    def indicator(cls, threshold: float = 0.5) -> "PiecewiseValue":
        """1{x >= threshold}, closed at the threshold."""
        return cls((0.0, threshold, 1.0), ((0.0, 0.0), (1.0, 0.0)), (0.0, 1.0, 1.0))

    @classmethod
    def step(cls, cuts: Sequence[float], levels: Sequence[float]) -> "PiecewiseValue":
        """Right-continuous step function: ``levels[k]`` on [cuts[k-1], cuts[k])."""
        if len(levels) != len(cuts) + 1:
            raise InvalidExperiment("a step function needs len(cuts) + 1 levels")
        bp = (0.0, *cuts, 1.0)
        pv = (levels[0], *levels[1:], levels[-1])
        return cls(bp, tuple((v, 0.0) for v in levels), pv)

    @classmethod
    def affine(cls, intercept: float, slope: float) -> "PiecewiseValue":
        return cls((0.0, 1.0), ((intercept, slope),), (intercept, intercept + slope))

    def __call__(self, x: float) -> float:
        x = float(x)
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"belief {x!r} outside [0, 1]")
        k = bisect.bisect_left(self.breakpoints, x)
        if k < len(self.breakpoints) and self.breakpoints[k] == x:
            return self.point_values[k]
        c, s = self.pieces[k - 1]
        return c + s * x

    def graph_points(self) -> list[tuple[float, float]]:
        """Point values plus one-sided limits at every breakpoint."""
        pts = list(zip(self.breakpoints, self.point_values))
        for (c, s), lo, hi in zip(self.pieces, self.breakpoints, self.breakpoints[1:]):
            pts.append((lo, c + s * lo))
            pts.append((hi, c + s * hi))
        return pts


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def upper_hull(points: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    """Upper convex hull, left to right (monotone chain)."""
    best: dict[float, float] = {}
    for x, y in points:
        if x not in best or y > best[x]:
            best[x] = y
    hull: list[tuple[float, float]] = []
    for p in sorted(best.items()):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) >= 0.0:
            hull.pop()
        hull.append(p)
    return hull


def concave_closure(f: PiecewiseValue) -> list[tuple[float, float]]:
    """Vertices of the least concave majorant of ``f``."""
    return upper_hull(f.graph_points())


def concave_closure_at(f: PiecewiseValue, prior: Prior | float) -> float:
    x = prior.alpha if isinstance(prior, Prior) else float(prior)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"prior {x!r} outside [0, 1]")
    hull = concave_closure(f)
    xs = [p[0] for p in hull]
    k = bisect.bisect_left(xs, x)
    if xs[k] == x:
        return hull[k][1]
    (x0, y0), (x1, y1) = hull[k - 1], hull[k]
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def max_minority_share(prior: Prior | float) -> float:
    """Largest attainable minority share: the closure of 1{x >= 1/2} at the prior."""
    return concave_closure_at(PiecewiseValue.indicator(0.5), _as_prior(prior))


@dataclass(frozen=True)
class UtilityTriangle:
    """Triangle in (u_min, u_maj) space, vertices counterclockwise.

    ``constructors`` names the construction attaining each vertex.
    """

    vertices: tuple[tuple[float, float], ...]
    constructors: tuple[str, ...]

    def __post_init__(self):
        v = tuple((float(a), float(b)) for a, b in self.vertices)
        names = tuple(self.constructors)
        if len(v) != 3 or len(names) != 3:
            raise InvalidExperiment("a triangle has three vertices")
        if _cross(*v) < 0.0:
            v, names = v[::-1], names[::-1]
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "constructors", names)

    def vertex(self, constructor: str) -> tuple[float, float]:
        return self.vertices[self.constructors.index(constructor)]


def constructing_experiment(name: str, prior: Prior | float) -> Experiment:
    if name == "uninformative":
        return uninformative(prior)
    if name == "perfect":
        return perfect(prior)
    if name == "extremal":
        return extremal_share_experiment(prior, 2.0 * _as_prior(prior).alpha)
    if name == "symmetric-vertex":
        return symmetric_vertex_experiment(prior)[0]
    raise ValueError(f"unknown constructor {name!r}")


def general_utility_triangle(prior: Prior | float) -> UtilityTriangle:
    a = _as_prior(prior).alpha
    return UtilityTriangle(
        ((0.0, 1.0), (1.0, 1.0), (1.0, (1.0 - 2.0 * a) / (1.0 - a))),
        ("uninformative", "perfect", "extremal"),
    )


def symmetric_utility_triangle(prior: Prior | float) -> UtilityTriangle:
    a = _as_prior(prior).alpha
    return UtilityTriangle(
        ((0.0, 1.0), (1.0, 1.0), (0.5, 1.0 - a / (2.0 * (1.0 - a)))),
        ("uninformative", "perfect", "symmetric-vertex"),
    )


def contains(tri: UtilityTriangle, u: Sequence[float], tol: float = 1e-9) -> bool:
    """Whether ``u`` lies within ``tol`` of the closed triangle (half-plane test)."""
    p = (float(u[0]), float(u[1]))
    v = tri.vertices
    for i in range(3):
        a, b = v[i], v[(i + 1) % 3]
        edge = np.hypot(b[0] - a[0], b[1] - a[1])
        if _cross(a, b, p) / edge < -tol:
            return False
    return True


def random_experiment(rng: np.random.Generator, max_signals: int) -> Experiment:
    """Signal count uniform on [2, max_signals]; each row flat-Dirichlet."""
    n = int(rng.integers(min(2, max_signals), max_signals + 1))
    return Experiment.from_rows(rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n)))


def random_symmetric(
    rng: np.random.Generator, max_signals: int, prior: Prior | float, seed_key
) -> Experiment:
    """Symmetric experiment with a random mix of swapped pairs and fixed signals."""
    n = int(rng.integers(min(2, max_signals), max_signals + 1))
    n_pairs = int(rng.integers(0, n // 2 + 1))
    exp, _ = random_symmetric_experiment(prior, n_pairs, n - 2 * n_pairs, seed_key)
    return exp


def empirical_cloud(
    prior: Prior | float,
    n_experiments: int,
    max_signals: int,
    symmetric: bool,
    seed: int,
    tie_break: TieBreak = TieBreak.FAVOR_MINORITY,
) -> np.ndarray:
    """Utility profiles (u_min, u_maj) of random experiments, one row each.

    Experiment ``i`` is drawn from a generator seeded with ``(seed, i)``.
    """
    if n_experiments < 1 or max_signals < 1:
        raise ValueError("n_experiments and max_signals must be at least 1")
    p = _as_prior(prior)
    out = np.empty((n_experiments, 2))
    for i in range(n_experiments):
        rng = np.random.default_rng((seed, i))
        if symmetric:
            exp = random_symmetric(rng, max_signals, p, (seed, i, 1))
        else:
            exp = random_experiment(rng, max_signals)
        out[i] = group_utilities(exp, p, tie_break).as_tuple()
    return out
