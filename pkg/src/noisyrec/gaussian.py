"""One-dimensional equal-variance Gaussian measurement.

Type means are normalized to 0 (minority) and 1 (majority) and both types are
observed with noise standard deviation ``kappa``.  Every quantity is derived
from the likelihood-ratio boundary

    x* = 1/2 + kappa**2 * log(alpha / (1 - alpha)),

below which minority content is served.
"""

from __future__ import annotations

import csv
import math
from dataclasses import astuple, dataclass, fields
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import EmptyGrid, InvalidBins, InvalidPrior, OutOfRange
from .experiment import Experiment, Involution, Prior

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_INV_SQRT2PI = 1.0 / math.sqrt(2.0 * math.pi)


def std_normal_pdf(x: float) -> float:
    return _INV_SQRT2PI * math.exp(-0.5 * x * x)


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function.

    ``erfc`` keeps full relative precision in the lower tail, so the absolute
    error is at the level of double rounding on all of [-8, 8].
    """
    return 0.5 * math.erfc(-x * _INV_SQRT2)


def std_normal_sf(x: float) -> float:
    """Upper tail 1 - Phi(x), accurate for large positive ``x``."""
    return 0.5 * math.erfc(x * _INV_SQRT2)


@dataclass(frozen=True)
class GaussianModel:
    alpha: float
    kappa: float

    def __post_init__(self):
        Prior(self.alpha)
        k = float(self.kappa)
        if not (math.isfinite(k) and k > 0.0):
            raise InvalidPrior(f"kappa must be a positive finite number, got {self.kappa!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "kappa", k)

    @property
    def log_odds(self) -> float:
        return math.log(self.alpha / (1.0 - self.alpha))

    @property
    def prior(self) -> Prior:
        return Prior(self.alpha)

    def with_kappa(self, kappa: float) -> "GaussianModel":
        return GaussianModel(self.alpha, kappa)


def decision_boundary(m: GaussianModel) -> float:
    return 0.5 + m.kappa * m.kappa * m.log_odds


def _z(m: GaussianModel) -> tuple[float, float]:
    # Boundary standardized under the minority (mean 0) and majority (mean 1) noise.
    x = decision_boundary(m)
    return x / m.kappa, (x - 1.0) / m.kappa


def minority_share(m: GaussianModel) -> float:
    z_min, z_maj = _z(m)
    return m.alpha * std_normal_cdf(z_min) + (1.0 - m.alpha) * std_normal_cdf(z_maj)


def minority_utility(m: GaussianModel) -> float:
    return std_normal_cdf(_z(m)[0])


def majority_utility(m: GaussianModel) -> float:
    return std_normal_cdf(-_z(m)[1])


def share_deficit(m: GaussianModel) -> float:
    """alpha - minority_share(m), evaluated in tail form to keep precision at small kappa."""
    z_min, z_maj = _z(m)
    return m.alpha * std_normal_sf(z_min) - (1.0 - m.alpha) * std_normal_cdf(z_maj)


def minority_utility_loss(m: GaussianModel) -> float:
    """1 - minority_utility(m), evaluated in tail form."""
    return std_normal_sf(_z(m)[0])


def share_derivative(m: GaussianModel) -> float:
    """d/dkappa of the minority share."""
    k, a, lo = m.kappa, m.alpha, m.log_odds
    z_min, z_maj = _z(m)
    dz_min = -0.5 / (k * k) + lo
    dz_maj = 0.5 / (k * k) + lo
    return a * std_normal_pdf(z_min) * dz_min + (1.0 - a) * std_normal_pdf(z_maj) * dz_maj


def utility_derivative(m: GaussianModel) -> float:
    """d/dkappa of the minority utility; never positive."""
    z_min, _ = _z(m)
    return std_normal_pdf(z_min) * (-0.5 / (m.kappa * m.kappa) + m.log_odds)


@dataclass(frozen=True)
class SweepRow:
    kappa: float
    x_star: float
    share: float
    u_min: float
    u_maj: float


SWEEP_HEADER = tuple(f.name for f in fields(SweepRow))


def evaluate(m: GaussianModel) -> SweepRow:
    return SweepRow(
        kappa=m.kappa,
        x_star=decision_boundary(m),
        share=minority_share(m),
        u_min=minority_utility(m),
        u_maj=majority_utility(m),
    )


def sweep(template: GaussianModel | float, kappa_grid: Sequence[float]) -> list[SweepRow]:
    """Evaluate the closed forms on an ascending grid of noise levels.

    ``template`` supplies alpha; its own kappa is ignored.
    """
    alpha = template.alpha if isinstance(template, GaussianModel) else float(template)
    grid = [float(k) for k in kappa_grid]
    if not grid:
        raise EmptyGrid("kappa grid is empty")
    if any(k <= 0.0 for k in grid):
        raise OutOfRange("kappa grid values must be positive")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise OutOfRange("kappa grid must be sorted ascending")
    return [evaluate(GaussianModel(alpha, k)) for k in grid]


def fmt17(x: float | None) -> str:
    return "" if x is None else format(float(x), ".17g")


def write_sweep_csv(
    rows: Iterable[SweepRow], out: IO[str], extra: dict[str, Sequence[float]] | None = None
) -> None:
    """CSV with header ``kappa,x_star,share,u_min,u_maj`` plus optional extra columns."""
    rows = list(rows)
    extra = extra or {}
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(SWEEP_HEADER) + list(extra))
    for i, row in enumerate(rows):
        writer.writerow([fmt17(v) for v in astuple(row)] + [fmt17(col[i]) for col in extra.values()])


def _bin_mass(lo: float, hi: float, mean: float, kappa: float) -> float:
    a = (lo - mean) / kappa
    b = (hi - mean) / kappa
    if a >= 0.0:
        return std_normal_sf(a) - std_normal_sf(b)
    return std_normal_cdf(b) - std_normal_cdf(a)


def discretize(
    m: GaussianModel, n_bins: int, half_width: float
) -> tuple[Experiment, Involution]:
    """Bin the real line into ``n_bins`` signals, symmetric about 1/2.

    The ``n_bins - 1`` cut points are evenly spaced over
    [1/2 - half_width, 1/2 + half_width]; the outermost bins are unbounded.
    With ``n_bins == 2`` the single cut sits at 1/2.  Bin ``i`` is paired with
    bin ``n_bins - 1 - i``.
    """
    if int(n_bins) != n_bins or n_bins < 2:
        raise InvalidBins(f"n_bins must be an integer >= 2, got {n_bins!r}")
    n_bins = int(n_bins)
    if n_bins > 2 and not (math.isfinite(half_width) and half_width > 0.0):
        raise InvalidBins(f"half_width must be positive, got {half_width!r}")
    n_cuts = n_bins - 1
    if n_cuts == 1:
        offsets = np.zeros(1)
    else:
        # Integer numerators keep the grid exactly antisymmetric about 1/2.
        offsets = half_width * (2.0 * np.arange(n_cuts) - (n_cuts - 1)) / (n_cuts - 1)
    cuts = 0.5 + offsets
    edges = np.concatenate([[-np.inf], cuts, [np.inf]])
    lik_min = np.array([_bin_mass(lo, hi, 0.0, m.kappa) for lo, hi in zip(edges[:-1], edges[1:])])
    lik_maj = np.array([_bin_mass(lo, hi, 1.0, m.kappa) for lo, hi in zip(edges[:-1], edges[1:])])

    width = (cuts[-1] - cuts[0]) / max(n_cuts - 1, 1) if n_cuts > 1 else 1.0
    centers = np.concatenate(
        [[cuts[0] - 0.5 * width], 0.5 * (cuts[:-1] + cuts[1:]), [cuts[-1] + 0.5 * width]]
    )
    labels = [f"b{i:0{len(str(n_bins - 1))}d}" for i in range(n_bins)]
    exp = Experiment.from_rows(
        lik_min / lik_min.sum(),
        lik_maj / lik_maj.sum(),
        labels=labels,
        embedding=[(float(c),) for c in centers],
    )
    return exp, Involution(tuple(range(n_bins - 1, -1, -1)))
