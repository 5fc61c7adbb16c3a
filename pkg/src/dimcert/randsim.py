"""Finite-statistics moment estimation from simulated random measurements.

Every sample is one correlation value x = tr(rho (A (x) B)) for an
independently drawn pair of local directions. Two sampling paths give
the same moments with different constants:

* "haar": A = U M U^dag, B = V M V^dag for Haar-random unitaries U, V
  and the fixed probing observable M (odd d only).
* "bloch": x = a^T X_su b for unit vectors a, b uniform on the
  (d^2-1)-sphere, contracted with the su correlation block.

Averages of x^2 and x^4, rescaled by the path constants, estimate
(S2, S4) without bias. Sampling is organised in fixed blocks of 4096
draws, each block owning a counter-keyed generator derived from
(seed, namespace, block), so results are bit-identical for any worker
count and any block execution order. DIMCERT_THREADS caps the default
thread pool.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator, Philox

from .errors import InvalidInputError
from .boundary import classify_point
from .correlations import correlation_data
from .moments import exact_moments, observable_m, scaling_constants
from .states import DensityMatrix, PureState, isotropic

BLOCK = 4096
MIN_SAMPLES = 100

_NS_MAIN = 0
_NS_EIGHTH = 1
_MAX_SEED = 2 ** 64

__all__ = [
    "BLOCK",
    "MIN_SAMPLES",
    "EstimatorResult",
    "PredictedVariance",
    "DetectionResult",
    "NoiseToleranceResult",
    "haar_unitary",
    "estimate_moments",
    "predicted_variance",
    "detect_with_confidence",
    "analytic_noise_threshold",
    "noise_tolerance",
]


def _check_seed(seed):
    if not isinstance(seed, (int, np.integer)) or not 0 <= seed < _MAX_SEED:
        raise InvalidInputError(
            f"seed must be an integer in [0, 2^64), got {seed!r}")
    return int(seed)


def _resolve_workers(workers):
    if workers is None:
        env = os.environ.get("DIMCERT_THREADS")
        if not env:
            return 1
        try:
            workers = int(env)
        except ValueError:
            raise InvalidInputError(
                f"DIMCERT_THREADS must be a positive integer, got {env!r}")
    if not isinstance(workers, (int, np.integer)) or workers < 1:
        raise InvalidInputError(
            f"workers must be a positive integer, got {workers!r}")
    return int(workers)


def _block_rng(seed, namespace, block):
    key = np.array([seed, (namespace << 48) | block], dtype=np.uint64)
    return Generator(Philox(key=key))


def _phase_fix(q, r):
    dg = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (dg / np.abs(dg))[..., None, :]


def haar_unitary(d, rng):
    """One Haar-distributed d x d unitary from the given generator."""
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise InvalidInputError(f"d must be a positive integer, got {d!r}")
    raw = rng.standard_normal((int(d), int(d), 2))
    z = (raw[..., 0] + 1j * raw[..., 1]) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return _phase_fix(q, r)


def _coerce_equal(rho):
    if isinstance(rho, PureState):
        rho = rho.to_density()
    if not isinstance(rho, DensityMatrix):
        raise InvalidInputError(
            f"expected DensityMatrix or PureState, got {type(rho).__name__}")
    if rho.dim_a != rho.dim_b:
        raise InvalidInputError(
            "randomized moment estimation needs equal local dimensions, "
            f"got {rho.dim_a} x {rho.dim_b}")
    return rho, rho.dim_a


def _haar_block_x(rho4, m_eigs, d, m, rng):
    raw = rng.standard_normal((2, m, d, d, 2))
    z = (raw[..., 0] + 1j * raw[..., 1]) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    q = _phase_fix(q, r)
    rot_a = np.einsum("nij,j,nkj->nik", q[0], m_eigs, q[0].conj(),
                      optimize=True)
    rot_b = np.einsum("nij,j,nkj->nik", q[1], m_eigs, q[1].conj(),
                      optimize=True)
    return np.einsum("ijkl,nki,nlj->n", rho4, rot_a, rot_b,
                     optimize=True).real


def _bloch_block_x(x_su, n_dim, m, rng):
    raw = rng.standard_normal((2, m, n_dim))
    vecs = raw / np.linalg.norm(raw, axis=-1, keepdims=True)
    return np.einsum("ni,ij,nj->n", vecs[0], x_su, vecs[1], optimize=True)


def _sample_x(rho, n_tot, seed, path, workers, namespace):
    rho, d = _coerce_equal(rho)
    if path == "haar":
        m_eigs = observable_m(d).eigenvalues
        rho4 = np.ascontiguousarray(
            rho.matrix.reshape(d, d, d, d))
        def block_fn(m, rng):
            return _haar_block_x(rho4, m_eigs, d, m, rng)
    elif path == "bloch":
        x_su = correlation_data(rho).su
        n_dim = d * d - 1
        def block_fn(m, rng):
            return _bloch_block_x(x_su, n_dim, m, rng)
    else:
        raise InvalidInputError(f"unknown path {path!r}; use 'haar' or 'bloch'")
    n_blocks = (n_tot + BLOCK - 1) // BLOCK
    x = np.empty(n_tot)

    def run_block(b):
        start = b * BLOCK
        stop = min(start + BLOCK, n_tot)
        rng = _block_rng(seed, namespace, b)
        x[start:stop] = block_fn(stop - start, rng)

    workers = min(_resolve_workers(workers), n_blocks)
    if workers == 1:
        for b in range(n_blocks):
            run_block(b)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_block, range(n_blocks)))
    return x


@dataclass
class EstimatorResult:
    """Moment estimates with their empirical (and optional predicted) errors.

    ``std_s2``/``std_s4`` are one-standard-deviation errors of the two
    estimates computed from the sample spread; ``cov_s2s4`` is their
    covariance, needed because both come from the same draws.
    """

    s2: float
    s4: float
    n_samples: int
    path: str
    seed: int
    std_s2: float
    std_s4: float
    cov_s2s4: float
    predicted_std_s2: float | None = None
    predicted_std_s4: float | None = None
    samples: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self):
        out = {
            "s2": self.s2, "s4": self.s4,
            "n_samples": self.n_samples, "path": self.path,
            "seed": self.seed,
            "std_s2": self.std_s2, "std_s4": self.std_s4,
            "cov_s2s4": self.cov_s2s4,
        }
        if self.predicted_std_s2 is not None:
            out["predicted_std_s2"] = self.predicted_std_s2
            out["predicted_std_s4"] = self.predicted_std_s4
        return out


def estimate_moments(rho, n_tot, seed, path="haar", keep_samples=False,
                     workers=None):
    """Unbiased (S2, S4) estimates from n_tot simulated random settings.

    Fewer than 100 samples are rejected: below that the error estimates
    this result carries are not meaningful.
    """
    if not isinstance(n_tot, (int, np.integer)) or n_tot < MIN_SAMPLES:
        raise InvalidInputError(
            f"n_tot must be an integer >= {MIN_SAMPLES}, got {n_tot!r}")
    n_tot = int(n_tot)
    seed = _check_seed(seed)
    rho, d = _coerce_equal(rho)
    x = _sample_x(rho, n_tot, seed, path, workers, _NS_MAIN)
    c2, c4 = scaling_constants(d, path)
    x2 = x * x
    x4 = x2 * x2
    s2 = c2 * float(np.mean(x2))
    s4 = c4 * float(np.mean(x4))
    cov = np.cov(np.stack([x2, x4]), ddof=1)
    std_s2 = c2 * math.sqrt(max(cov[0, 0], 0.0) / n_tot)
    std_s4 = c4 * math.sqrt(max(cov[1, 1], 0.0) / n_tot)
    cov_s2s4 = c2 * c4 * cov[0, 1] / n_tot
    return EstimatorResult(
        s2=s2, s4=s4, n_samples=n_tot, path=path, seed=seed,
        std_s2=std_s2, std_s4=std_s4, cov_s2s4=cov_s2s4,
        samples=x if keep_samples else None)


@dataclass(frozen=True)
class PredictedVariance:
    """Predicted estimator variances at a given sample budget.

    var_s2 follows from the exact second and fourth moments of x alone;
    var_s4 needs the eighth moment, which has no closed form here and is
    estimated by a dedicated Monte Carlo run (its own counter namespace,
    so it never perturbs the main sample stream).
    """

    var_s2: float
    var_s4: float
    n_tot: int
    path: str
    m8: float
    m8_std_error: float
    m8_samples: int


def predicted_variance(rho, n_tot, seed=0, path="haar",
                       m8_samples=2_000_000, workers=None):
    """Predicted var(s2_hat), var(s4_hat) for a state at sample budget n_tot."""
    if not isinstance(n_tot, (int, np.integer)) or n_tot < 1:
        raise InvalidInputError(
            f"n_tot must be a positive integer, got {n_tot!r}")
    if not isinstance(m8_samples, (int, np.integer)) or m8_samples < 10_000:
        raise InvalidInputError(
            f"m8_samples must be an integer >= 10000, got {m8_samples!r}")
    seed = _check_seed(seed)
    rho, d = _coerce_equal(rho)
    c2, c4 = scaling_constants(d, path)
    pair = exact_moments(rho)
    m2 = pair.s2 / c2
    m4 = pair.s4 / c4
    x = _sample_x(rho, int(m8_samples), seed, path, workers, _NS_EIGHTH)
    x8 = x ** 8
    m8 = float(np.mean(x8))
    m8_err = float(np.std(x8, ddof=1)) / math.sqrt(len(x8))
    var_s2 = c2 * c2 * max(m4 - m2 * m2, 0.0) / n_tot
    var_s4 = c4 * c4 * max(m8 - m4 * m4, 0.0) / n_tot
    return PredictedVariance(
        var_s2=var_s2, var_s4=var_s4, n_tot=int(n_tot), path=path,
        m8=m8, m8_std_error=m8_err, m8_samples=int(m8_samples))


@dataclass
class DetectionResult:
    """A moment-plane certificate together with the estimates behind it."""

    certificate: object
    estimate: EstimatorResult
    k_sigma: float

    def to_dict(self):
        return {
            "certificate": self.certificate.to_dict(),
            "estimate": self.estimate.to_dict(),
            "k_sigma": self.k_sigma,
        }


def detect_with_confidence(rho, n_tot, k_sigma, seed, path="haar",
                           workers=None, keep_samples=False):
    """Estimate moments, then certify with a k-sigma statistical back-off.

    Every boundary comparison must clear its threshold by k_sigma
    standard deviations of the compared quantity before it counts, so a
    reported bound above 1 is wrong with probability roughly the
    one-sided Gaussian tail at k_sigma.
    """
    if not np.isfinite(k_sigma) or k_sigma < 0:
        raise InvalidInputError(
            f"k_sigma must be a nonnegative number, got {k_sigma!r}")
    est = estimate_moments(rho, n_tot, seed, path=path,
                           keep_samples=keep_samples, workers=workers)
    _, d = _coerce_equal(rho)
    cert = classify_point(
        est.s2, est.s4, d,
        std_s2=est.std_s2, std_s4=est.std_s4, cov_s2s4=est.cov_s2s4,
        k_sigma=float(k_sigma))
    return DetectionResult(certificate=cert, estimate=est,
                           k_sigma=float(k_sigma))


def analytic_noise_threshold(d, target_bound):
    """Exact white-noise threshold below which isotropic(d, p) certifies.

    An isotropic state sits on the minimal parabola of the moment plane,
    so it leaves the Schmidt-number-(target_bound - 1) region exactly
    when its S2 passes the parabola's share of that region, at
    p = 1 - (d (target_bound - 1) - 1)/(d^2 - 1).
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidInputError(f"d must be an integer >= 2, got {d!r}")
    if not isinstance(target_bound, (int, np.integer)) or \
            not 2 <= target_bound <= d:
        raise InvalidInputError(
            f"target_bound must be an integer in [2, {int(d)}], "
            f"got {target_bound!r}")
    d = int(d)
    return 1.0 - (d * (int(target_bound) - 1) - 1) / (d * d - 1)


@dataclass
class NoiseToleranceResult:
    """Bisection outcome for the certifiable white-noise range."""

    dim: int
    target_bound: int
    n_tot: int
    k_sigma: float
    path: str
    simulated_threshold: float
    analytic_threshold: float
    evaluations: list

    def to_dict(self):
        return {
            "dim": self.dim,
            "target_bound": self.target_bound,
            "n_tot": self.n_tot,
            "k_sigma": self.k_sigma,
            "path": self.path,
            "simulated_threshold": self.simulated_threshold,
            "analytic_threshold": self.analytic_threshold,
            "evaluations": [
                {"p": p, "bound": b} for p, b in self.evaluations],
        }


def noise_tolerance(d, target_bound, n_tot, k_sigma, seed, path="haar",
                    workers=None):
    """Largest white-noise weight still certified at target_bound, by bisection.

    Each probe runs a fresh detection on isotropic(d, p) with a
    derived sub-seed; the bracket [certified, uncertified] narrows to
    1e-3. The analytic threshold rides along for comparison.
    """
    seed = _check_seed(seed)
    analytic = analytic_noise_threshold(d, target_bound)
    evaluations = []

    def certified(p, step):
        sub = int(np.random.SeedSequence([seed, step]).generate_state(1)[0])
        res = detect_with_confidence(isotropic(int(d), p), n_tot, k_sigma,
                                     sub, path=path, workers=workers)
        bound = res.certificate.certified_lower_bound
        evaluations.append((p, bound))
        return bound >= target_bound

    if not certified(0.0, 0):
        sim = 0.0
    elif certified(1.0, 1):
        sim = 1.0
    else:
        lo, hi = 0.0, 1.0
        step = 2
        while hi - lo > 1e-3:
            mid = 0.5 * (lo + hi)
            if certified(mid, step):
                lo = mid
            else:
                hi = mid
            step += 1
        sim = lo
    return NoiseToleranceResult(
        dim=int(d), target_bound=int(target_bound), n_tot=int(n_tot),
        k_sigma=float(k_sigma), path=path,
        simulated_threshold=sim, analytic_threshold=analytic,
        evaluations=evaluations)
