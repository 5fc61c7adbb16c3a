"""Moment pairs, their cone, and the probing observable."""

import numpy as np
import pytest

from dimcert.correlations import correlation_data
from dimcert.errors import InvalidInputError
from dimcert.moments import (
    MomentPair,
    exact_moments,
    moments_from_r,
    moments_from_spectrum,
    observable_m,
    scaling_constants,
    sphere_moment_constants,
)
from dimcert.states import (
    isotropic,
    max_entangled,
    random_mixed,
    rho_w,
)


def test_max_entangled_qutrit_fixture():
    pair = exact_moments(max_entangled(3))
    assert abs(pair.s2 - 2.0) < 1e-9
    assert abs(pair.s4 - 5 / 3) < 1e-9


def test_product_state_fixture():
    vec = np.zeros(9, dtype=complex)
    vec[0] = 1.0
    from dimcert.states import PureState
    pair = exact_moments(PureState(3, 3, vec))
    assert abs(pair.s2 - 1.0) < 1e-12
    assert abs(pair.s4 - 1.0) < 1e-12


@pytest.mark.parametrize("p", [0.0, 0.25, 0.5, 0.9])
def test_isotropic_closed_form(p):
    pair = exact_moments(isotropic(3, p))
    s2 = 2 * (1 - p) ** 2
    assert abs(pair.s2 - s2) < 1e-9
    assert abs(pair.s4 - 5 * s2 * s2 / 12) < 1e-9


def test_embedded_max_entangled_pair_fixture():
    pair = exact_moments(max_entangled(2, 3))
    assert abs(pair.s2 - 7 / 4) < 1e-9
    assert abs(pair.s4 - 53 / 32) < 1e-9


def test_unequal_dimensions_rejected():
    with pytest.raises(InvalidInputError, match="equal"):
        exact_moments(random_mixed(2, 3, 2, seed=1))


def test_moment_pair_cone_enforced():
    MomentPair(1.0, 1.0)
    MomentPair(2.0, 5 / 3)
    with pytest.raises(InvalidInputError, match="cone"):
        MomentPair(1.0, 1.5)
    with pytest.raises(InvalidInputError, match="cone"):
        MomentPair(1.0, 0.2)
    with pytest.raises(InvalidInputError):
        MomentPair(-1.0, 0.5)
    with pytest.raises(InvalidInputError):
        MomentPair(float("nan"), 0.5)


def test_cone_holds_on_random_states():
    # constructor re-validates, so surviving construction is the check;
    # sweep mixes of dimensions, ranks, and pure states
    idx = 0
    for d in (2, 3, 4):
        for rank in (1, 2, d * d):
            for seed in range(25):
                rho = random_mixed(d, d, rank, seed=1000 + idx)
                pair = exact_moments(rho)
                assert pair.s2 ** 2 / 3 - 1e-9 <= pair.s4 <= pair.s2 ** 2 + 1e-9
                idx += 1


def test_spectrum_route_matches_state_route():
    for seed in range(10):
        rho = random_mixed(3, 3, 3, seed=seed)
        pair_a = exact_moments(rho)
        eps = correlation_data(rho).epsilon
        pair_b = moments_from_spectrum(eps, 3)
        assert abs(pair_a.s2 - pair_b.s2) < 1e-12
        assert abs(pair_a.s4 - pair_b.s4) < 1e-12


def test_rank_one_su_blocks_touch_the_upper_cone_edge():
    # a single nonzero singular value forces s4 = s2^2; the noisy
    # projector family has exactly that structure for every p
    from dimcert.states import family_state
    for p in (0.1, 0.5, 0.9, 1.0):
        pair = exact_moments(family_state("A", p))
        assert abs(pair.s4 - pair.s2 ** 2) < 1e-9
    pair = moments_from_spectrum(np.array([0.4]), 3)
    assert abs(pair.s4 - pair.s2 ** 2) < 1e-12


def test_scaling_constants_fixtures():
    c2, c4 = scaling_constants(3, "haar")
    assert c2 == 16.0
    assert abs(c4 - 400 / 9) < 1e-12
    c2b, c4b = scaling_constants(3, "bloch")
    assert c2b == 144.0
    assert abs(c4b - 3600.0) < 1e-9
    with pytest.raises(InvalidInputError):
        scaling_constants(3, "fourier")
    with pytest.raises(InvalidInputError):
        scaling_constants(1, "haar")


def test_moments_from_r_inverts_constants():
    c2, c4 = scaling_constants(3, "haar")
    pair = moments_from_r(2.0 / c2, (5 / 3) / c4, 3)
    assert abs(pair.s2 - 2.0) < 1e-12
    assert abs(pair.s4 - 5 / 3) < 1e-12


def test_sphere_moment_constants_against_monte_carlo():
    n = 8
    consts = sphere_moment_constants(n)
    assert consts["second"] == 1 / 8
    assert abs(consts["fourth"] - 3 / 80) < 1e-15
    assert abs(consts["cross"] - 1 / 80) < 1e-15
    rng = np.random.default_rng(3)
    v = rng.standard_normal((200_000, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    assert abs(np.mean(v[:, 0] ** 2) - consts["second"]) < 5e-4
    assert abs(np.mean(v[:, 0] ** 4) - consts["fourth"]) < 5e-4
    assert abs(np.mean(v[:, 0] ** 2 * v[:, 1] ** 2) - consts["cross"]) < 5e-4


def test_observable_m_qutrit_spectrum():
    obs = observable_m(3)
    expect = np.array([1.14813856, -1.28914507, 0.14100650])
    assert np.allclose(np.sort(obs.eigenvalues), np.sort(expect), atol=1e-7)


@pytest.mark.parametrize("d", [3, 5, 7, 9])
def test_observable_m_trace_conditions(d):
    eigs = observable_m(d).eigenvalues
    assert len(eigs) == d
    assert abs(np.sum(eigs)) < 1e-10
    assert abs(np.sum(eigs ** 2) - d) < 1e-10


@pytest.mark.parametrize("d", [2, 4, 6, 1])
def test_observable_m_even_dimensions_rejected(d):
    with pytest.raises(InvalidInputError, match="odd"):
        observable_m(d)


def test_observable_matrix_is_diagonal_representative():
    obs = observable_m(3)
    assert np.allclose(obs.matrix, np.diag(obs.eigenvalues))


def test_rho_w_moments_inside_cone():
    pair = exact_moments(rho_w())
    assert pair.s2 ** 2 / 3 <= pair.s4 <= pair.s2 ** 2
