"""Acceptance checks shared by ``noisyrec verify`` and the test suite.

Each check returns a :class:`CheckResult` carrying the numbers it compared, so
a failing run can be inspected without re-running anything.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np

from . import gaussian as gs
from .allocation import (
    expected_welfare,
    group_utilities,
    minority_share,
    share_from_utilities,
)
from .constructions import extremal_share_experiment, symmetric_vertex_experiment
from .experiment import Experiment, Involution, Prior
from .region import (
    PiecewiseValue,
    concave_closure_at,
    constructing_experiment,
    contains,
    empirical_cloud,
    general_utility_triangle,
    random_experiment,
    symmetric_utility_triangle,
)
from .symmetry import is_symmetric, random_symmetric_experiment, verify_pairwise_share_bound

ALPHAS = (0.1, 0.25, 0.4)
EXACT = 1e-12


@dataclass
class VerifyOptions:
    seed: int = 42
    n_samples: int = 1_000_000
    restarts: int = 1000
    cloud_size: int = 10_000
    random_experiments: int = 10_000


@dataclass
class CheckResult:
    id: str
    title: str
    numeric_ok: bool
    details: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    elapsed: float = 0.0
    time_limit: float | None = None

    @property
    def within_time(self) -> bool:
        return self.time_limit is None or self.elapsed < self.time_limit

    @property
    def passed(self) -> bool:
        return self.numeric_ok and self.within_time

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.id}: {self.title}"
        if not self.passed:
            reasons = list(self.failures[:5])
            if len(self.failures) > 5:
                reasons.append(f"... {len(self.failures) - 5} more")
            if not self.within_time:
                reasons.append(f"runtime {self.elapsed:.2f}s over the {self.time_limit:g}s limit")
            text += "".join(f"\n    - {r}" for r in reasons)
        return text

    def as_dict(self, timings: bool = False) -> dict:
        out = {
            "id": self.id,
            "title": self.title,
            "passed": self.passed,
            "details": self.details,
            "failures": self.failures,
        }
        if timings:
            out["elapsed"] = self.elapsed
            out["time_limit"] = self.time_limit
        return out


def _utility_identity_gap(exp: Experiment, alpha: float) -> float:
    gu = group_utilities(exp, alpha)
    return abs(minority_share(exp, alpha) - share_from_utilities(gu, alpha))


def check_extremal_share(o: VerifyOptions) -> CheckResult:
    failures = []
    worst = 0.0
    for a in ALPHAS:
        for k in range(round(2 * a / 0.05) + 1):
            p = min(k * 0.05, 2 * a)
            err = abs(minority_share(extremal_share_experiment(a, p), a) - p)
            worst = max(worst, err)
            if err > EXACT:
                failures.append(f"alpha={a}, p={p}: share off by {err:.3g}")
    rng = np.random.default_rng(o.seed)
    excess = {a: -np.inf for a in ALPHAS}
    for _ in range(o.random_experiments):
        exp = random_experiment(rng, 10)
        for a in ALPHAS:
            excess[a] = max(excess[a], minority_share(exp, a) - 2 * a)
    for a, e in excess.items():
        if e > EXACT:
            failures.append(f"alpha={a}: random experiment share exceeds 2*alpha by {e:.3g}")
    return CheckResult(
        "extremal-share",
        "shares in [0, 2*alpha] attained; no experiment exceeds 2*alpha",
        not failures,
        {"max_attainment_error": worst,
         "max_share_minus_2alpha": {str(a): float(e) for a, e in excess.items()}},
        failures,
    )


def brute_force_closure(f: PiecewiseValue, prior: float, step: float = 1e-3) -> float:
    """Best value over Bayes-plausible posteriors with at most two grid support points."""
    n = round(1.0 / step)
    grid = np.arange(n + 1) / n
    vals = np.array([f(x) for x in grid])
    left = grid <= prior
    right = grid >= prior
    x1, f1 = grid[left][:, None], vals[left][:, None]
    x2, f2 = grid[right][None, :], vals[right][None, :]
    span = x2 - x1
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(span > 0.0, (x2 - prior) / span, 1.0)
        total = np.where(span > 0.0, w * f1 + (1.0 - w) * f2, f1)
    return float(max(total.max(), f(prior)))


def check_concave_closure(o: VerifyOptions) -> CheckResult:
    failures = []
    ind = PiecewiseValue.indicator(0.5)
    worst_exact = worst_brute = 0.0
    for k in range(1, 100):
        a = k / 200
        hull = concave_closure_at(ind, a)
        worst_exact = max(worst_exact, abs(hull - 2 * a))
        if abs(hull - 2 * a) > EXACT:
            failures.append(f"alpha={a}: closure {hull!r} != 2*alpha")
        gap = abs(hull - brute_force_closure(ind, a))
        worst_brute = max(worst_brute, gap)
        if gap > 1e-3:
            failures.append(f"alpha={a}: closure differs from brute force by {gap:.3g}")
    two_step = PiecewiseValue.step([1 / 3, 2 / 3], [0.0, 0.4, 1.0])
    for prior in (0.2, 0.5, 0.8):
        gap = abs(concave_closure_at(two_step, prior) - brute_force_closure(two_step, prior))
        worst_brute = max(worst_brute, gap)
        if gap > 1e-3:
            failures.append(f"two-step at {prior}: closure differs from brute force by {gap:.3g}")
    return CheckResult(
        "concave-closure",
        "closure of 1{x >= 1/2} is 2*alpha and matches two-point brute force",
        not failures,
        {"max_error_vs_2alpha": worst_exact, "max_error_vs_brute_force": worst_brute},
        failures,
    )


def check_symmetric_share(o: VerifyOptions) -> CheckResult:
    failures = []
    details: dict = {}
    for a in ALPHAS:
        over = pair_fail = 0
        max_share = -np.inf
        first = None
        for i in range(o.restarts):
            rng = np.random.default_rng((o.seed, i))
            n_pairs = int(rng.integers(0, 9))
            n_fixed = int(rng.integers(0 if n_pairs else 1, 4))
            exp, inv = random_symmetric_experiment(a, n_pairs, n_fixed, (o.seed, i, 1))
            share = minority_share(exp, a)
            max_share = max(max_share, share)
            report = verify_pairwise_share_bound(exp, a, inv)
            over += share > a + EXACT
            if not all(c.passed for c in report.checks):
                pair_fail += 1
            if first is None and not report.passed:
                first = f"alpha={a}, draw {i}: {report.failures()[0]}"
        details[str(a)] = {"max_share": float(max_share), "share_above_alpha": int(over),
                           "pairwise_failures": int(pair_fail)}
        if over:
            failures.append(f"alpha={a}: {over}/{o.restarts} symmetric experiments have share "
                            f"> alpha (max {max_share:.6g})")
        if pair_fail:
            failures.append(f"alpha={a}: pairwise inequality fails in {pair_fail}/{o.restarts}")
        if first:
            failures.append(first)
        vexp, vinv = symmetric_vertex_experiment(a)
        vshare = minority_share(vexp, a)
        details[str(a)]["vertex_share"] = vshare
        if abs(vshare - a) > EXACT:
            failures.append(f"alpha={a}: vertex share {vshare!r} != alpha")
        vrep = verify_pairwise_share_bound(vexp, a, vinv)
        details[str(a)]["vertex_pairwise_passed"] = vrep.passed
        if not vrep.passed:
            failures.extend(f"alpha={a}, vertex: {msg}" for msg in vrep.failures())
    return CheckResult(
        "symmetric-share",
        "symmetric experiments keep minority share <= alpha, pairwise checks hold",
        not failures,
        details,
        failures,
    )


def check_utility_triangles(o: VerifyOptions) -> CheckResult:
    failures = []
    details: dict = {}
    for a in ALPHAS:
        for tri in (general_utility_triangle(a), symmetric_utility_triangle(a)):
            for name, v in zip(tri.constructors, tri.vertices):
                got = group_utilities(constructing_experiment(name, a), a).as_tuple()
                err = max(abs(got[0] - v[0]), abs(got[1] - v[1]))
                if err > EXACT:
                    failures.append(f"alpha={a}, {name}: utilities {got} miss vertex {v}")
    pinned = {
        "extremal": (general_utility_triangle(0.25), (1.0, 0.6666666666666666)),
        "symmetric-vertex": (symmetric_utility_triangle(0.25), (0.5, 0.8333333333333334)),
    }
    for name, (tri, expected) in pinned.items():
        got = group_utilities(constructing_experiment(name, 0.25), 0.25).as_tuple()
        if max(abs(got[0] - expected[0]), abs(got[1] - expected[1])) > EXACT or \
                tri.vertex(name) != expected:
            failures.append(f"alpha=0.25, {name}: got {got}, expected {expected}")
    for symmetric, tri in ((False, general_utility_triangle(0.25)),
                           (True, symmetric_utility_triangle(0.25))):
        cloud = empirical_cloud(0.25, o.cloud_size, 10, symmetric, o.seed)
        outside = [tuple(u) for u in cloud if not contains(tri, u, 1e-9)]
        key = "symmetric" if symmetric else "general"
        details[f"{key}_cloud_outside"] = len(outside)
        if outside:
            worst = max(outside, key=lambda u: 0.25 * u[0] + 0.75 * (1 - u[1]))
            failures.append(f"{key} cloud: {len(outside)}/{o.cloud_size} points outside the "
                            f"triangle, e.g. {tuple(round(float(x), 6) for x in worst)}")
    return CheckResult(
        "utility-triangles",
        "triangle vertices attained; random utility clouds stay inside",
        not failures,
        details,
        failures,
    )


RECORDED_SHARES = {0.5: 0.2140, 1.0: 0.1099, 2.0: 0.0118}


def check_gaussian_oracle(o: VerifyOptions) -> CheckResult:
    from .montecarlo import simulate_gaussian

    failures = []
    details: dict = {}
    for kappa, recorded in RECORDED_SHARES.items():
        m = gs.GaussianModel(0.25, kappa)
        rep = simulate_gaussian(m, n_samples=o.n_samples, seed=o.seed)
        row = gs.evaluate(m)
        entry = {}
        for name, closed, hat, se in (
            ("share", row.share, rep.share_hat, rep.share_se),
            ("u_min", row.u_min, rep.u_min_hat, rep.u_min_se),
            ("u_maj", row.u_maj, rep.u_maj_hat, rep.u_maj_se),
        ):
            z = abs(closed - hat) / se
            entry[name] = {"closed": closed, "simulated": hat, "se": se, "z": z}
            if not z <= 4.0:
                failures.append(f"kappa={kappa} {name}: closed {closed:.6g} vs simulated "
                                f"{hat:.6g} ({z:.2f} SE)")
        if abs(row.share - recorded) > 5e-5:
            failures.append(f"kappa={kappa}: share {row.share:.6g} does not round to {recorded}")
        details[str(kappa)] = entry
    return CheckResult(
        "gaussian-oracle",
        "Gaussian closed forms agree with simulation within 4 SE",
        not failures,
        details,
        failures,
    )


def _central_difference(fn: Callable[[float], float], k: float) -> float:
    h = 1e-5 * k
    return (fn(k + h) - fn(k - h)) / (2.0 * h)


# Difference whichever of f and its complement is small at kappa, so neither
# side of the central difference sits next to a rounding boundary.
def _share_form(a: float, k: float) -> Callable[[float], float]:
    if gs.minority_share(gs.GaussianModel(a, k)) < 0.5 * a:
        return lambda x: gs.minority_share(gs.GaussianModel(a, x))
    return lambda x: -gs.share_deficit(gs.GaussianModel(a, x))


def _utility_form(a: float, k: float) -> Callable[[float], float]:
    if gs.minority_utility(gs.GaussianModel(a, k)) < 0.5:
        return lambda x: gs.minority_utility(gs.GaussianModel(a, x))
    return lambda x: -gs.minority_utility_loss(gs.GaussianModel(a, x))


def check_monotonicity(o: VerifyOptions) -> CheckResult:
    failures = []
    grid = [round(0.05 * k, 10) for k in range(1, 61)]
    worst_rel = 0.0
    for a in ALPHAS:
        rows = gs.sweep(a, grid)
        for prev, cur in zip(rows, rows[1:]):
            if cur.share > prev.share:
                failures.append(f"alpha={a}: share rises between kappa {prev.kappa} and {cur.kappa}")
            if cur.u_min > prev.u_min:
                failures.append(f"alpha={a}: u_min rises between kappa {prev.kappa} and {cur.kappa}")
        for k in grid:
            m = gs.GaussianModel(a, k)
            du = gs.utility_derivative(m)
            ds = gs.share_derivative(m)
            if du > EXACT:
                failures.append(f"alpha={a}, kappa={k}: utility derivative {du:.3g} > 0")
            if ds > EXACT:
                failures.append(f"alpha={a}, kappa={k}: share derivative {ds:.3g} > 0")
            fd_s = _central_difference(_share_form(a, k), k)
            fd_u = _central_difference(_utility_form(a, k), k)
            for name, an, fd in (("share", ds, fd_s), ("utility", du, fd_u)):
                rel = abs(fd - an) / abs(an)
                worst_rel = max(worst_rel, rel)
                if rel > 1e-6:
                    failures.append(f"alpha={a}, kappa={k}: {name} derivative {an:.6g} vs "
                                    f"finite difference {fd:.6g}")
    return CheckResult(
        "monotonicity",
        "share and u_min non-increasing in kappa; derivatives match finite differences",
        not failures,
        {"max_relative_derivative_error": worst_rel, "grid_points": len(grid)},
        failures,
    )


def check_discretization(o: VerifyOptions) -> CheckResult:
    failures = []
    m = gs.GaussianModel(0.25, 1.0)
    exp, inv = gs.discretize(m, 400, 6.0)
    symmetric = is_symmetric(exp, inv, 1e-9)
    if not symmetric:
        failures.append("discretized model is not symmetric under the bin reflection")
    discrete = minority_share(exp, 0.25)
    closed = gs.minority_share(m)
    if abs(discrete - closed) > 1e-3:
        failures.append(f"discrete share {discrete:.6g} vs closed form {closed:.6g} "
                        f"(gap {abs(discrete - closed):.3g} > 1e-3)")
    evaluated = [(exp, 0.25)]
    for a in ALPHAS:
        evaluated += [(constructing_experiment(n, a), a)
                      for n in ("uninformative", "perfect", "extremal", "symmetric-vertex")]
        evaluated.append((gs.discretize(gs.GaussianModel(a, 0.5), 60, 4.0)[0], a))
    rng = np.random.default_rng(o.seed)
    evaluated += [(random_experiment(rng, 12), float(rng.uniform(0.01, 0.49))) for _ in range(500)]
    worst_identity = max(_utility_identity_gap(e, a) for e, a in evaluated)
    if worst_identity > EXACT:
        failures.append(f"share identity off by {worst_identity:.3g}")
    return CheckResult(
        "discretization",
        "binned Gaussian is symmetric and reproduces the closed-form share",
        not failures,
        {"symmetric": symmetric, "discrete_share": discrete, "closed_share": closed,
         "gap": abs(discrete - closed), "max_identity_gap": worst_identity,
         "experiments_checked": len(evaluated)},
        failures,
    )


def brute_force_welfare(exp: Experiment, alpha: float) -> float:
    """Best expected welfare over every deterministic signal-to-content map."""
    n = exp.n_signals
    assign = np.array(list(itertools.product((0.0, 1.0), repeat=n)))
    welfare = alpha * assign @ exp.lik_min + (1.0 - alpha) * (1.0 - assign) @ exp.lik_maj
    return float(welfare.max())


def check_optimality(o: VerifyOptions) -> CheckResult:
    failures = []
    rng = np.random.default_rng(o.seed)
    worst = 0.0
    for i in range(200):
        exp = random_experiment(rng, 12)
        a = float(rng.uniform(0.05, 0.45))
        ours = expected_welfare(group_utilities(exp, a), a)
        gap = abs(brute_force_welfare(exp, a) - ours)
        worst = max(worst, gap)
        if gap > EXACT:
            failures.append(f"experiment {i} ({exp.n_signals} signals, alpha={a:.4f}): "
                            f"welfare short by {gap:.3g}")
    return CheckResult(
        "optimality",
        "threshold allocation attains the brute-force welfare optimum",
        not failures,
        {"max_gap": worst},
        failures,
    )


def check_normal_cdf(o: VerifyOptions) -> CheckResult:
    grid = np.linspace(-8.0, 8.0, 1601)
    with mpmath.workdps(40):
        ref = [float(mpmath.ncdf(mpmath.mpf(float(x)))) for x in grid]
    err = max(abs(gs.std_normal_cdf(float(x)) - r) for x, r in zip(grid, ref))
    failures = [] if err <= EXACT else [f"max |Phi - reference| = {err:.3g}"]
    return CheckResult(
        "normal-cdf",
        "standard normal CDF within 1e-12 of a 40-digit reference on [-8, 8]",
        not failures,
        {"max_abs_error": err},
        failures,
    )


CRITERIA: dict[str, tuple[Callable[[VerifyOptions], CheckResult], float]] = {
    "extremal-share": (check_extremal_share, 5.0),
    "concave-closure": (check_concave_closure, 5.0),
    "symmetric-share": (check_symmetric_share, 10.0),
    "utility-triangles": (check_utility_triangles, 20.0),
    "gaussian-oracle": (check_gaussian_oracle, 30.0),
    "monotonicity": (check_monotonicity, 5.0),
    "discretization": (check_discretization, 5.0),
    "optimality": (check_optimality, 60.0),
    "normal-cdf": (check_normal_cdf, 1.0),
}

ALIASES = {
    "closure": "concave-closure",
    "symmetric": "symmetric-share",
    "triangles": "utility-triangles",
    "gaussian": "gaussian-oracle",
    "cdf": "normal-cdf",
}


def resolve(check_id: str) -> str:
    cid = ALIASES.get(check_id, check_id)
    if cid not in CRITERIA:
        raise KeyError(check_id)
    return cid


def run_check(check_id: str, options: VerifyOptions | None = None) -> CheckResult:
    cid = resolve(check_id)
    fn, limit = CRITERIA[cid]
    start = time.perf_counter()
    result = fn(options or VerifyOptions())
    result.elapsed = time.perf_counter() - start
    result.time_limit = limit
    return result


def run_suite(only: list[str] | None = None, options: VerifyOptions | None = None) -> list[CheckResult]:
    ids = [resolve(c) for c in only] if only else list(CRITERIA)
    return [run_check(cid, options) for cid in ids]


def check_experiment(exp: Experiment, prior: Prior, inv: Involution | None) -> CheckResult:
    """Per-file check used by ``verify --experiment``: bounds that must hold for
    the given experiment, plus the symmetric pairwise checks when it declares an
    involution."""
    failures = []
    a = prior.alpha
    gu = group_utilities(exp, a)
    share = minority_share(exp, a)
    if share > 2 * a + EXACT:
        failures.append(f"share {share:.6g} exceeds 2*alpha")
    if _utility_identity_gap(exp, a) > EXACT:
        failures.append("share identity violated")
    details: dict = {"share": share, "u_min": gu.u_min, "u_maj": gu.u_maj}
    if inv is not None:
        report = verify_pairwise_share_bound(exp, prior, inv, require_symmetric=False)
        details["pairwise"] = report.as_dict()
        failures.extend(report.failures())
    return CheckResult("experiment", "checks on the supplied experiment", not failures,
                       details, failures)
