import numpy as np
import pytest
from hypothesis import given, strategies as st

from noisyrec import Experiment, SignalSpace, TieBreak, minority_share, symmetric_vertex_experiment
from noisyrec.constructions import extremal_share_experiment
from noisyrec.errors import DegenerateMeans, NotSymmetric, UnpairedSignal
from noisyrec.experiment import Involution
from noisyrec.gaussian import GaussianModel, discretize
from noisyrec.symmetry import (
    is_symmetric,
    max_share_symmetric_search,
    midplane_reflection,
    pair_signals_by_embedding,
    random_symmetric_experiment,
    verify_pairwise_share_bound,
)

from .conftest import alphas

coords = st.floats(-10, 10, allow_nan=False)


def printed_formula(mu_min, mu_maj, s):
    """s - 2 ((s - mu_min).d / |d|^2) d, with no midpoint offset."""
    a, b, x = (np.atleast_1d(np.asarray(v, float)) for v in (mu_min, mu_maj, s))
    d = b - a
    return x - 2 * np.dot(x - a, d) / np.dot(d, d) * d


class TestMidplaneReflection:
    def test_one_dimensional(self):
        assert midplane_reflection(0.0, 1.0, 0.3) == pytest.approx(0.7, abs=1e-15)

    def test_two_dimensional(self):
        out = midplane_reflection((0, 0), (2, 0), (0.5, 1))
        np.testing.assert_allclose(out, [1.5, 1.0], atol=1e-15)

    def test_fixes_midpoint_where_unshifted_formula_does_not(self):
        mu_min, mu_maj = np.array([0.0, 0.0]), np.array([2.0, 0.0])
        mid = 0.5 * (mu_min + mu_maj)
        np.testing.assert_allclose(midplane_reflection(mu_min, mu_maj, mid), mid)
        assert not np.allclose(printed_formula(mu_min, mu_maj, mid), mid)
        assert printed_formula(0.0, 1.0, 0.3)[0] == pytest.approx(-0.3)

    def test_degenerate(self):
        with pytest.raises(DegenerateMeans):
            midplane_reflection((1.0, 1.0), (1.0, 1.0), (0.0, 0.0))

    @given(st.tuples(coords, coords), st.tuples(coords, coords), st.tuples(coords, coords))
    def test_isometric_involution(self, mu_min, mu_maj, s):
        a, b, x = map(np.array, (mu_min, mu_maj, s))
        if np.linalg.norm(b - a) < 1e-3:
            return
        y = midplane_reflection(a, b, x)
        np.testing.assert_allclose(midplane_reflection(a, b, y), x, atol=1e-9)
        # Distances to the two means trade places.
        assert np.linalg.norm(y - a) == pytest.approx(np.linalg.norm(x - b), abs=1e-9)
        assert np.linalg.norm(y - b) == pytest.approx(np.linalg.norm(x - a), abs=1e-9)


class TestPairing:
    def test_symmetric_grid(self):
        space = SignalSpace(tuple("abcde"), embedding=[0, 0.25, 0.5, 0.75, 1])
        assert pair_signals_by_embedding(space, 0.0, 1.0).pairing == (4, 3, 2, 1, 0)

    def test_missing_partner(self):
        space = SignalSpace(("x0", "x03", "x1"), embedding=[0, 0.3, 1])
        with pytest.raises(UnpairedSignal) as err:
            pair_signals_by_embedding(space, 0.0, 1.0)
        assert err.value.labels == ["x03"]

    def test_two_dimensional_grid(self):
        pts = [(x, y) for x in (0.0, 1.0, 2.0) for y in (-1.0, 0.0, 1.0)]
        space = SignalSpace(tuple(f"g{i}" for i in range(9)), embedding=pts)
        inv = pair_signals_by_embedding(space, (0.0, 0.0), (2.0, 0.0))
        assert len(inv.fixed_points) == 3
        for i, j in enumerate(inv.pairing):
            assert pts[j] == (2.0 - pts[i][0], pts[i][1])

    def test_discretized_gaussian_grid(self):
        exp, inv = discretize(GaussianModel(0.25, 1.0), 50, 3.0)
        assert pair_signals_by_embedding(exp.space, 0.0, 1.0) == inv


class TestIsSymmetric:
    def test_identity_on_identical_rows(self):
        exp = Experiment.from_rows([0.2, 0.8], [0.2, 0.8])
        assert is_symmetric(exp, Involution.identity(2))

    def test_vertex(self):
        assert is_symmetric(*symmetric_vertex_experiment(0.25))

    def test_extremal_is_not(self):
        assert not is_symmetric(extremal_share_experiment(0.25, 0.5), Involution((1, 0)))

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            is_symmetric(Experiment.from_rows([1.0], [1.0]), Involution((1, 0)))


def binary_symmetric_channel(q):
    return Experiment.from_rows([q, 1 - q], [1 - q, q]), Involution((1, 0))


class TestPairwiseReport:
    def test_vertex_partner_and_aggregate(self):
        exp, inv = symmetric_vertex_experiment(0.25)
        rep = verify_pairwise_share_bound(exp, 0.25, inv)
        assert [c.signal for c in rep.checks] == ["s"]
        assert rep.checks[0].partner_in_majority
        assert rep.share == pytest.approx(0.25, abs=1e-15)
        assert rep.aggregate_holds

    def test_vertex_breaks_pairwise_inequality(self):
        # P[s] = 1/4 while alpha/(1-alpha) * P[l(s)] = (1/3)(5/12) = 5/36.
        exp, inv = symmetric_vertex_experiment(0.25)
        check = verify_pairwise_share_bound(exp, 0.25, inv).checks[0]
        assert check.p_signal == pytest.approx(0.25)
        assert check.p_partner == pytest.approx(5 / 12)
        assert not check.bound_holds

    def test_identity_is_vacuous(self):
        exp = Experiment.from_rows([0.2, 0.8], [0.2, 0.8])
        rep = verify_pairwise_share_bound(exp, 0.25, Involution.identity(2))
        assert rep.checks == () and rep.passed and rep.share == 0.0

    def test_requires_symmetry(self):
        exp = extremal_share_experiment(0.25, 0.5)
        with pytest.raises(NotSymmetric):
            verify_pairwise_share_bound(exp, 0.25, Involution((1, 0)))
        rep = verify_pairwise_share_bound(exp, 0.25, Involution((1, 0)), require_symmetric=False)
        assert not rep.passed
        assert rep.failures()[0].startswith("symmetry")

    def test_binary_channel_exceeds_incidence(self):
        # Accuracy q in [1 - alpha, 1) serves minority content on s0 with
        # probability alpha q + (1 - alpha)(1 - q), which is above alpha.
        alpha = 0.25
        exp, inv = binary_symmetric_channel(0.76)
        assert is_symmetric(exp, inv)
        share = minority_share(exp, alpha)
        assert share == pytest.approx(0.25 * 0.76 + 0.75 * 0.24)
        assert share > alpha
        rep = verify_pairwise_share_bound(exp, alpha, inv)
        assert rep.checks[0].partner_in_majority
        assert not rep.aggregate_holds
        assert any(f.startswith("aggregate") for f in rep.failures())

    @given(alphas)
    def test_binary_channel_at_tie_reaches_two_alpha_one_minus_alpha(self, alpha):
        exp, _ = binary_symmetric_channel(1 - alpha)
        assert minority_share(exp, alpha, TieBreak.FAVOR_MINORITY) == \
            pytest.approx(2 * alpha * (1 - alpha), abs=1e-12)
        assert minority_share(exp, alpha, TieBreak.FAVOR_MAJORITY) == 0.0


sizes = st.tuples(st.integers(0, 6), st.integers(0, 3)).filter(lambda t: sum(t) > 0)


class TestRandomSymmetric:
    def test_single_fixed_signal(self):
        exp, inv = random_symmetric_experiment(0.25, 0, 1, seed=3)
        assert exp.lik_min.tolist() == [1.0] and exp.lik_maj.tolist() == [1.0]
        assert inv.pairing == (0,)

    def test_deterministic(self):
        a = random_symmetric_experiment(0.25, 3, 2, seed=11)
        b = random_symmetric_experiment(0.25, 3, 2, seed=11)
        assert a[0] == b[0] and a[1] == b[1]
        assert random_symmetric_experiment(0.25, 3, 2, seed=12)[0] != a[0]

    @given(alphas, sizes, st.integers(0, 2**31))
    def test_properties(self, alpha, size, seed):
        exp, inv = random_symmetric_experiment(alpha, *size, seed=seed)
        assert is_symmetric(exp, inv, 1e-12)
        # Swapped form of the symmetry condition.
        np.testing.assert_allclose(exp.lik_min[inv.as_array()], exp.lik_maj, atol=1e-12)
        for tb in TieBreak:
            rep = verify_pairwise_share_bound(exp, alpha, inv, tb)
            assert all(c.partner_in_majority for c in rep.checks)
            # Tight bound for symmetric experiments: share <= 2 alpha (1 - alpha).
            assert rep.share <= 2 * alpha * (1 - alpha) + 1e-12


class TestMaxShareSearch:
    @pytest.mark.parametrize("alpha", [0.25, 0.1])
    def test_fixed_signals_only_returns_vertex_share(self, alpha):
        assert max_share_symmetric_search(alpha, 0, 3, 200, seed=1) == \
            pytest.approx(alpha, abs=1e-12)

    def test_pairs_push_past_alpha(self):
        best = max_share_symmetric_search(0.4, 2, 1, 10_000, seed=42)
        assert 0.4 < best <= 2 * 0.4 * 0.6 + 1e-12
