"""Simulated randomized measurements: sampling, estimators, detection."""

import numpy as np
import pytest

from dimcert.errors import InvalidInputError
from dimcert.moments import exact_moments, scaling_constants
from dimcert.randsim import (
    analytic_noise_threshold,
    detect_with_confidence,
    estimate_moments,
    haar_unitary,
    noise_tolerance,
    predicted_variance,
)
from dimcert.states import PureState, isotropic, max_entangled


def me3():
    return max_entangled(3)


def product3():
    vec = np.zeros(9, dtype=complex)
    vec[0] = 1.0
    return PureState(3, 3, vec).to_density()


# --- unitary sampler ------------------------------------------------------

def test_haar_unitary_is_unitary():
    rng = np.random.default_rng(0)
    for d in (2, 3, 5):
        u = haar_unitary(d, rng)
        assert np.allclose(u @ u.conj().T, np.eye(d), atol=1e-12)


def test_haar_unitary_deterministic_given_rng_state():
    a = haar_unitary(4, np.random.default_rng(7))
    b = haar_unitary(4, np.random.default_rng(7))
    assert np.array_equal(a, b)


def test_haar_first_moment_uniform_rows():
    # E|u_ij|^2 = 1/d for a Haar unitary; check within 4 standard errors
    d, n = 3, 4000
    rng = np.random.default_rng(11)
    acc = np.zeros((d, d))
    for _ in range(n):
        u = haar_unitary(d, rng)
        acc += np.abs(u) ** 2
    acc /= n
    # var of |u|^2 is (d-1)/(d^2(d+1)) ~ 0.0185 for d=3
    se = np.sqrt((d - 1) / (d * d * (d + 1)) / n)
    assert np.all(np.abs(acc - 1 / d) < 4 * se + 1e-3)


# --- estimator contract ---------------------------------------------------

def test_estimate_rejects_bad_arguments():
    with pytest.raises(InvalidInputError, match=">= 100"):
        estimate_moments(me3(), 50, seed=1)
    with pytest.raises(InvalidInputError):
        estimate_moments(me3(), 1000, seed=-1)
    with pytest.raises(InvalidInputError):
        estimate_moments(me3(), 1000, seed=2**64)
    with pytest.raises(InvalidInputError):
        estimate_moments(me3(), 1000, seed=1, path="uniform")
    lopsided = np.zeros(6, dtype=complex)
    lopsided[0] = 1.0
    with pytest.raises(InvalidInputError):
        estimate_moments(PureState(2, 3, lopsided).to_density(), 1000, seed=1)


def test_estimate_deterministic_rerun():
    a = estimate_moments(me3(), 3000, seed=42, keep_samples=True)
    b = estimate_moments(me3(), 3000, seed=42, keep_samples=True)
    assert a.s2 == b.s2 and a.s4 == b.s4
    assert np.array_equal(a.samples, b.samples)


def test_estimate_worker_count_invariance():
    a = estimate_moments(me3(), 9000, seed=9, keep_samples=True)
    b = estimate_moments(me3(), 9000, seed=9, workers=4, keep_samples=True)
    assert np.array_equal(a.samples, b.samples)
    assert a.s2 == b.s2 and a.s4 == b.s4


def test_estimate_env_thread_override(monkeypatch):
    monkeypatch.setenv("DIMCERT_THREADS", "3")
    a = estimate_moments(me3(), 5000, seed=3)
    monkeypatch.delenv("DIMCERT_THREADS")
    b = estimate_moments(me3(), 5000, seed=3)
    assert a.s2 == b.s2 and a.s4 == b.s4


def test_estimate_handles_partial_final_block():
    # 5000 is not a multiple of the internal block size
    res = estimate_moments(me3(), 5000, seed=17, keep_samples=True)
    assert res.samples.shape == (5000,)
    assert res.n_samples == 5000


def test_estimator_unbiased_over_many_runs():
    truth = exact_moments(me3())
    n_runs, n = 200, 1000
    s2s = np.empty(n_runs)
    s4s = np.empty(n_runs)
    for i in range(n_runs):
        r = estimate_moments(me3(), n, seed=1000 + i)
        s2s[i] = r.s2
        s4s[i] = r.s4
    se2 = s2s.std(ddof=1) / np.sqrt(n_runs)
    se4 = s4s.std(ddof=1) / np.sqrt(n_runs)
    assert abs(s2s.mean() - truth.s2) < 4 * se2
    assert abs(s4s.mean() - truth.s4) < 4 * se4


def test_bloch_and_haar_paths_agree():
    a = estimate_moments(me3(), 60000, seed=5, path="haar")
    b = estimate_moments(me3(), 60000, seed=5, path="bloch")
    tol2 = 4 * np.hypot(a.std_s2, b.std_s2)
    tol4 = 4 * np.hypot(a.std_s4, b.std_s4)
    assert abs(a.s2 - b.s2) < tol2
    assert abs(a.s4 - b.s4) < tol4


def test_reported_std_scales_with_n():
    small = estimate_moments(me3(), 2000, seed=21)
    large = estimate_moments(me3(), 32000, seed=21)
    ratio = small.std_s2 / large.std_s2
    assert 2.8 < ratio < 5.7   # ideal 4, loose band for sampling noise


def test_scaling_constants_route():
    # estimate on raw x-moments times the constants must equal the
    # reported s2 (same arithmetic path, consistency check)
    res = estimate_moments(me3(), 4000, seed=2, keep_samples=True)
    c2, _ = scaling_constants(3, "haar")
    m2 = float(np.mean(res.samples ** 2))
    assert abs(c2 * m2 - res.s2) < 1e-12


# --- predicted variance ---------------------------------------------------

def test_predicted_variance_me3_closed_form():
    pred = predicted_variance(me3(), 1000, seed=0, m8_samples=200_000)
    assert abs(pred.var_s2 * 1000 - 28 / 5) < 1e-9


def test_predicted_matches_empirical_s4_variance():
    n, runs = 1000, 300
    pred = predicted_variance(me3(), n, seed=0, m8_samples=500_000)
    vals = np.empty(runs)
    for i in range(runs):
        vals[i] = estimate_moments(me3(), n, seed=40_000 + i).s4
    emp = vals.var(ddof=1)
    assert abs(pred.var_s4 - emp) / emp < 0.25


def test_predicted_variance_validation():
    with pytest.raises(InvalidInputError):
        predicted_variance(me3(), 0, seed=0)
    with pytest.raises(InvalidInputError):
        predicted_variance(me3(), 1000, seed=0, m8_samples=10)


# --- detection ------------------------------------------------------------

def test_detection_certifies_me3_with_margin():
    det = detect_with_confidence(me3(), 10_000, k_sigma=3.0, seed=1)
    assert det.certificate.certified_lower_bound == 3
    assert det.certificate.details["mode"] == "conservative"
    assert det.k_sigma == 3.0


def test_detection_never_overcertifies_product_states():
    rho = product3()
    for seed in range(12):
        det = detect_with_confidence(rho, 2000, k_sigma=3.0, seed=seed)
        assert det.certificate.certified_lower_bound == 1


def test_detection_result_serializes():
    det = detect_with_confidence(me3(), 1000, k_sigma=3.0, seed=4)
    d = det.to_dict()
    assert d["estimate"]["n_samples"] == 1000
    assert d["certificate"]["criterion_id"] == "moments"


# --- noise thresholds -----------------------------------------------------

def test_analytic_threshold_fixtures():
    assert analytic_noise_threshold(3, 3) == 0.375
    assert analytic_noise_threshold(3, 2) == 0.75
    assert abs(analytic_noise_threshold(4, 4) - (1 - 11 / 15)) < 1e-12


def test_analytic_threshold_validation():
    with pytest.raises(InvalidInputError):
        analytic_noise_threshold(3, 1)
    with pytest.raises(InvalidInputError):
        analytic_noise_threshold(3, 4)
    with pytest.raises(InvalidInputError):
        analytic_noise_threshold(1, 2)


def test_exact_classification_recovers_analytic_threshold():
    # just inside / outside the p* = 0.375 frontier for full dimensionality
    from dimcert.boundary import classify_point
    lo = exact_moments(isotropic(3, 0.374))
    hi = exact_moments(isotropic(3, 0.376))
    assert classify_point(lo.s2, lo.s4, 3).certified_lower_bound == 3
    assert classify_point(hi.s2, hi.s4, 3).certified_lower_bound == 2


def test_noise_tolerance_bisection():
    res = noise_tolerance(3, 3, n_tot=2000, k_sigma=1.0, seed=6)
    assert 0.0 <= res.simulated_threshold <= 1.0
    assert res.analytic_threshold == 0.375
    # finite statistics never push the simulated frontier past analytic
    # by more than the bisection resolution plus noise allowance
    assert res.simulated_threshold < 0.55
    assert len(res.evaluations) >= 3
    ps = [p for p, _ in res.evaluations]
    assert ps[0] == 0.0 and ps[1] == 1.0


def test_noise_tolerance_deterministic():
    a = noise_tolerance(3, 2, n_tot=1500, k_sigma=1.0, seed=3)
    b = noise_tolerance(3, 2, n_tot=1500, k_sigma=1.0, seed=3)
    assert a.simulated_threshold == b.simulated_threshold
    assert a.evaluations == b.evaluations
