import numpy as np
import pytest
from hypothesis import given, strategies as st

from noisyrec import (
    PosteriorDistribution,
    extremal_share_experiment,
    group_utilities,
    induced_posterior_distribution,
    minority_share,
    perfect,
    posterior_to_experiment,
    symmetric_vertex_experiment,
    uninformative,
)
from noisyrec.constructions import construct
from noisyrec.errors import NotBayesPlausible, OutOfRange
from noisyrec.symmetry import is_symmetric

from .conftest import alphas, experiments


class TestPosteriorToExperiment:
    def test_full_revelation(self):
        exp = posterior_to_experiment(PosteriorDistribution([0.0, 1.0], [0.75, 0.25]), 0.25)
        np.testing.assert_allclose(exp.lik_min, [0.0, 1.0])
        np.testing.assert_allclose(exp.lik_maj, [1.0, 0.0])

    def test_no_information(self):
        exp = posterior_to_experiment(PosteriorDistribution([0.25], [1.0]), 0.25)
        np.testing.assert_allclose(exp.lik_min, [1.0])
        np.testing.assert_allclose(exp.lik_maj, [1.0])

    def test_extremal(self):
        exp = posterior_to_experiment(PosteriorDistribution([0.5, 0.0], [0.5, 0.5]), 0.25)
        np.testing.assert_allclose(exp.lik_min, [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(exp.lik_maj, [1 / 3, 2 / 3], atol=1e-15)

    def test_rejects_implausible(self):
        with pytest.raises(NotBayesPlausible):
            posterior_to_experiment(PosteriorDistribution([0.5, 0.0], [0.5, 0.5]), 0.2)


@given(experiments(), alphas)
def test_round_trip(exp, alpha):
    pd = induced_posterior_distribution(exp, alpha)
    back = induced_posterior_distribution(posterior_to_experiment(pd, alpha), alpha)
    np.testing.assert_allclose(back.support, pd.support, atol=1e-10)
    np.testing.assert_allclose(back.masses, pd.masses, atol=1e-10)


class TestExtremal:
    def test_zero_is_uninformative(self):
        exp = extremal_share_experiment(0.25, 0.0)
        np.testing.assert_array_equal(exp.lik_min, exp.lik_maj)
        assert minority_share(exp, 0.25) == 0.0

    def test_upper_end(self):
        assert minority_share(extremal_share_experiment(0.25, 0.5), 0.25) == 0.5

    def test_interior(self):
        exp = extremal_share_experiment(0.25, 0.25)
        np.testing.assert_allclose(exp.lik_min, [0.5, 0.5])
        np.testing.assert_allclose(exp.lik_maj, [1 / 6, 5 / 6])
        assert minority_share(exp, 0.25) == pytest.approx(0.25, abs=1e-15)

    def test_range(self):
        with pytest.raises(OutOfRange, match="exceeds 2\\*alpha"):
            extremal_share_experiment(0.25, 0.6)
        with pytest.raises(OutOfRange):
            extremal_share_experiment(0.25, -0.01)


@given(alphas, st.floats(0.0, 1.0))
def test_extremal_attains_every_share(alpha, frac):
    p = frac * 2 * alpha
    assert abs(minority_share(extremal_share_experiment(alpha, p), alpha) - p) <= 1e-12


def test_uninformative_and_perfect():
    assert group_utilities(uninformative(0.3), 0.3).as_tuple() == (0.0, 1.0)
    assert group_utilities(perfect(0.3), 0.3).as_tuple() == (1.0, 1.0)
    assert minority_share(uninformative(0.25), 0.25) == 0.0


class TestSymmetricVertex:
    def test_quarter(self):
        exp, inv = symmetric_vertex_experiment(0.25)
        np.testing.assert_allclose(exp.lik_min, [0.5, 1 / 6, 1 / 3])
        np.testing.assert_allclose(exp.lik_maj, [1 / 6, 0.5, 1 / 3])
        assert inv.pairing == (1, 0, 2)
        u = group_utilities(exp, 0.25)
        assert u.u_min == 0.5
        assert u.u_maj == pytest.approx(5 / 6, abs=1e-15)
        assert minority_share(exp, 0.25) == pytest.approx(0.25, abs=1e-15)

    def test_flattens_as_alpha_vanishes(self):
        exp, _ = symmetric_vertex_experiment(1e-6)
        u = group_utilities(exp, 1e-6)
        assert u.u_min == pytest.approx(0.5, abs=1e-5)
        assert u.u_maj == pytest.approx(1.0, abs=1e-5)

    @given(alphas)
    def test_symmetric_and_attains_alpha(self, alpha):
        exp, inv = symmetric_vertex_experiment(alpha)
        assert is_symmetric(exp, inv, 1e-12)
        assert abs(minority_share(exp, alpha) - alpha) <= 1e-12
        u = group_utilities(exp, alpha)
        assert u.u_min == 0.5
        assert abs(u.u_maj - (1 - alpha / (2 * (1 - alpha)))) <= 1e-12


def test_construct_dispatch():
    assert construct("perfect", 0.25).n_signals == 2
    assert construct("symmetric-vertex", 0.25).n_signals == 3
    assert construct("extremal", 0.25, 0.1).n_signals == 2
    with pytest.raises(ValueError):
        construct("bogus", 0.25)
