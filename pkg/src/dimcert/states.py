"""Bipartite qudit states and the local operator basis.

Provides the generalized Gell-Mann basis, validated density-matrix and
pure-state containers, partial traces, Schmidt coefficients, the named
states used throughout (maximally entangled, isotropic, the bound-exploring
families A-D, the rank-2 Schmidt-number-3 state ``rho_w``), seeded random
state generators, and a small JSON file format for density matrices.

Conventions
-----------
* Product basis index: ``|j, k>`` of a ``d_a x d_b`` system sits at row
  ``j * d_b + k``.
* su(d) generators are ordered symmetric, antisymmetric, diagonal, each
  block lexicographic, and normalized to ``tr(g_i g_j) = delta_ij`` (for
  d=2 they are the Pauli matrices divided by sqrt(2)).
* Structural tolerances (hermiticity, trace, norm) are 1e-10; derived
  quantities are compared at 1e-9. Validation rejects bad input, it never
  projects onto the valid set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidInputError

STRUCT_TOL = 1e-10
DERIVED_TOL = 1e-9

__all__ = [
    "STRUCT_TOL",
    "DERIVED_TOL",
    "SuBasis",
    "DensityMatrix",
    "PureState",
    "gell_mann_basis",
    "extended_basis",
    "partial_trace",
    "purity",
    "schmidt_coefficients",
    "max_entangled",
    "isotropic",
    "rho_w",
    "family_state",
    "random_pure",
    "random_mixed",
    "read_state_json",
    "write_state_json",
]


def _check_dim(d, name="dimension"):
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidInputError(f"{name} must be an integer >= 2, got {d!r}")
    return int(d)


def as_rng(seed):
    """Return a numpy Generator from a seed, sequence seed, or Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# operator basis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuBasis:
    """Orthonormal traceless Hermitian generator set for one qudit.

    Attributes
    ----------
    dim : int
        Local dimension d.
    generators : ndarray, shape (d*d - 1, d, d)
        Generators ordered symmetric, antisymmetric, diagonal; normalized
        so that ``tr(g_i g_j) = pair_trace * delta_ij``.
    pair_trace : float
        Hilbert-Schmidt normalization of a generator pair (always 1.0).
    """

    dim: int
    generators: np.ndarray
    pair_trace: float = 1.0


@lru_cache(maxsize=None)
def _gell_mann_cached(d):
    gens = np.zeros((d * d - 1, d, d), dtype=np.complex128)
    idx = 0
    for j in range(d):
        for k in range(j + 1, d):
            gens[idx, j, k] = 1 / np.sqrt(2)
            gens[idx, k, j] = 1 / np.sqrt(2)
            idx += 1
    for j in range(d):
        for k in range(j + 1, d):
            gens[idx, j, k] = -1j / np.sqrt(2)
            gens[idx, k, j] = 1j / np.sqrt(2)
            idx += 1
    for l in range(1, d):
        coeff = 1 / np.sqrt(l * (l + 1))
        for j in range(l):
            gens[idx, j, j] = coeff
        gens[idx, l, l] = -l * coeff
        idx += 1
    gens.setflags(write=False)
    return gens


def gell_mann_basis(d):
    """Generalized Gell-Mann basis of su(d), unit Hilbert-Schmidt norm.

    Parameters
    ----------
    d : int
        Local dimension, >= 2.

    Returns
    -------
    SuBasis
    """
    d = _check_dim(d)
    return SuBasis(dim=d, generators=_gell_mann_cached(d))


@lru_cache(maxsize=None)
def extended_basis(d):
    """Full orthonormal operator basis: identity/sqrt(d) plus su(d).

    Index 0 is the normalized identity; indices 1..d^2-1 follow the
    ``gell_mann_basis`` order. Shape (d*d, d, d), read-only.
    """
    d = _check_dim(d)
    full = np.zeros((d * d, d, d), dtype=np.complex128)
    full[0] = np.eye(d) / np.sqrt(d)
    full[1:] = _gell_mann_cached(d)
    full.setflags(write=False)
    return full


# ---------------------------------------------------------------------------
# state containers
# ---------------------------------------------------------------------------

@dataclass
class DensityMatrix:
    """Validated bipartite density matrix on C^{d_a} (x) C^{d_b}.

    Validation order is fixed (hermiticity, then unit trace, then positive
    semidefiniteness floored at -1e-10) and the first violated property is
    the one reported. Invalid input is rejected, never repaired.
    """

    dim_a: int
    dim_b: int
    matrix: np.ndarray

    def __post_init__(self):
        self.dim_a = _check_dim(self.dim_a, "dim_a")
        self.dim_b = _check_dim(self.dim_b, "dim_b")
        mat = np.asarray(self.matrix, dtype=np.complex128)
        n = self.dim_a * self.dim_b
        if mat.shape != (n, n):
            raise InvalidInputError(
                f"density matrix shape {mat.shape} does not match "
                f"dim_a*dim_b = {n}")
        herm_dev = np.max(np.abs(mat - mat.conj().T))
        if herm_dev > STRUCT_TOL:
            raise InvalidInputError(
                f"matrix is not Hermitian: max deviation {herm_dev:.3e} > {STRUCT_TOL}")
        trace_dev = abs(mat.trace() - 1.0)
        if trace_dev > STRUCT_TOL:
            raise InvalidInputError(
                f"matrix trace deviates from 1 by {trace_dev:.3e} > {STRUCT_TOL}")
        eig_min = float(np.linalg.eigvalsh(mat)[0])
        if eig_min < -STRUCT_TOL:
            raise InvalidInputError(
                f"matrix is not positive semidefinite: min eigenvalue {eig_min:.3e}")
        self.matrix = mat

    @property
    def dim(self):
        return self.dim_a * self.dim_b


@dataclass
class PureState:
    """Bipartite pure state vector with unit norm.

    ``amplitudes[j * dim_b + k]`` is the coefficient of ``|j, k>``.
    """

    dim_a: int
    dim_b: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.dim_a = _check_dim(self.dim_a, "dim_a")
        self.dim_b = _check_dim(self.dim_b, "dim_b")
        vec = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        n = self.dim_a * self.dim_b
        if vec.shape != (n,):
            raise InvalidInputError(
                f"amplitude vector length {vec.shape[0]} does not match "
                f"dim_a*dim_b = {n}")
        norm_dev = abs(np.linalg.norm(vec) - 1.0)
        if norm_dev > STRUCT_TOL:
            raise InvalidInputError(
                f"state norm deviates from 1 by {norm_dev:.3e} > {STRUCT_TOL}")
        self.amplitudes = vec

    def coefficient_matrix(self):
        """Amplitudes reshaped to (dim_a, dim_b)."""
        return self.amplitudes.reshape(self.dim_a, self.dim_b)

    def to_density(self):
        """Projector |psi><psi| as a DensityMatrix."""
        mat = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(self.dim_a, self.dim_b, mat)


def _as_matrix(rho):
    if isinstance(rho, DensityMatrix):
        return rho.matrix, rho.dim_a, rho.dim_b
    if isinstance(rho, PureState):
        dm = rho.to_density()
        return dm.matrix, dm.dim_a, dm.dim_b
    raise InvalidInputError(f"expected DensityMatrix or PureState, got {type(rho).__name__}")


def partial_trace(rho, keep):
    """Reduced density matrix of one party.

    Parameters
    ----------
    rho : DensityMatrix or PureState
    keep : {'a', 'b'}
        Which subsystem survives.

    Returns
    -------
    ndarray, shape (d_keep, d_keep)
    """
    mat, da, db = _as_matrix(rho)
    t = mat.reshape(da, db, da, db)
    if keep == "a":
        return np.einsum("ijkj->ik", t)
    if keep == "b":
        return np.einsum("ijil->jl", t)
    raise InvalidInputError(f"keep must be 'a' or 'b', got {keep!r}")


def purity(mat):
    """tr(m^2) of a Hermitian matrix, as a real float."""
    m = np.asarray(mat)
    return float(np.einsum("ij,ji->", m, m).real)


def schmidt_coefficients(psi):
    """Schmidt coefficients (squared Schmidt values) of a pure state.

    Returns them sorted descending; they sum to 1 within 1e-9.
    """
    if not isinstance(psi, PureState):
        raise InvalidInputError("schmidt_coefficients expects a PureState")
    svals = np.linalg.svd(psi.coefficient_matrix(), compute_uv=False)
    lam = np.sort(svals ** 2)[::-1]
    if abs(lam.sum() - 1.0) > DERIVED_TOL:
        raise InvalidInputError(
            f"Schmidt coefficients sum to {lam.sum():.12f}, expected 1")
    return lam


# ---------------------------------------------------------------------------
# named states
# ---------------------------------------------------------------------------

def max_entangled(r, d=None):
    """|Psi_r^+> = sum_{j<r} |jj> / sqrt(r), embedded in a d x d system.

    With ``d = None`` the embedding dimension equals r.
    """
    if not isinstance(r, (int, np.integer)) or r < 1:
        raise InvalidInputError(f"r must be a positive integer, got {r!r}")
    r = int(r)
    d = max(r, 2) if d is None else _check_dim(d)
    if r > d:
        raise InvalidInputError(f"r = {r} exceeds the local dimension d = {d}")
    vec = np.zeros(d * d, dtype=np.complex128)
    for j in range(r):
        vec[j * d + j] = 1 / np.sqrt(r)
    return PureState(d, d, vec)


def isotropic(d, p):
    """Maximally entangled state mixed with white noise.

    rho = (1 - p) |Psi_d^+><Psi_d^+| + p/d^2 * identity, with the noise
    fraction p in [0, 1].
    """
    d = _check_dim(d)
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"noise fraction p must lie in [0, 1], got {p}")
    pure = max_entangled(d).to_density().matrix
    mat = (1 - p) * pure + p / d ** 2 * np.eye(d * d)
    return DensityMatrix(d, d, mat)


def rho_w():
    """Rank-2 Schmidt-number-3 state on a 4 x 4 system.

    An equal mixture of |Psi_3^+> (embedded in d=4) and the symmetric
    superposition (|23> + |32>)/sqrt(2). Fidelity witnesses certify at
    most Schmidt number 2 for it, while the correlation-norm criteria
    reach its true value 3.
    """
    d = 4
    psi = max_entangled(3, d).amplitudes
    phi = np.zeros(d * d, dtype=np.complex128)
    phi[2 * d + 3] = 1 / np.sqrt(2)
    phi[3 * d + 2] = 1 / np.sqrt(2)
    mat = 0.5 * np.outer(psi, psi.conj()) + 0.5 * np.outer(phi, phi.conj())
    return DensityMatrix(d, d, mat)


def family_state(family, param):
    """One state from the four d=3 moment-boundary families.

    A: ``p |00><00| + (1-p)/9 * identity`` with p in [0, 1].
    B: ``sqrt(l)|00> + sqrt(1-l)|11>`` with l in [1/2, 1].
    C: ``sqrt(l)|00> + sqrt(l)|11> + sqrt(1-2l)|22>`` with l in [1/3, 1/2].
    D: ``p |Psi_3^+><Psi_3^+| + (1-p)/9 * identity`` with p in [0, 1].

    Note the mixed families weight the *pure* state by the parameter, the
    opposite convention from :func:`isotropic`.

    Returns
    -------
    DensityMatrix
        On the 3 x 3 system (pure members as projectors).
    """
    d = 3
    fam = str(family).upper()
    if fam == "A":
        if not 0.0 <= param <= 1.0:
            raise InvalidInputError(f"family A parameter must lie in [0, 1], got {param}")
        mat = np.zeros((9, 9), dtype=np.complex128)
        mat[0, 0] = param
        mat += (1 - param) / 9 * np.eye(9)
        return DensityMatrix(d, d, mat)
    if fam == "B":
        if not 0.5 <= param <= 1.0:
            raise InvalidInputError(f"family B parameter must lie in [1/2, 1], got {param}")
        vec = np.zeros(9, dtype=np.complex128)
        vec[0] = np.sqrt(param)
        vec[4] = np.sqrt(1 - param)
        return PureState(d, d, vec).to_density()
    if fam == "C":
        if not 1 / 3 - STRUCT_TOL <= param <= 0.5:
            raise InvalidInputError(f"family C parameter must lie in [1/3, 1/2], got {param}")
        vec = np.zeros(9, dtype=np.complex128)
        vec[0] = np.sqrt(param)
        vec[4] = np.sqrt(param)
        vec[8] = np.sqrt(max(1 - 2 * param, 0.0))
        return PureState(d, d, vec).to_density()
    if fam == "D":
        if not 0.0 <= param <= 1.0:
            raise InvalidInputError(f"family D parameter must lie in [0, 1], got {param}")
        pure = max_entangled(3).to_density().matrix
        mat = param * pure + (1 - param) / 9 * np.eye(9)
        return DensityMatrix(d, d, mat)
    raise InvalidInputError(f"unknown family {family!r}, expected one of A, B, C, D")


# ---------------------------------------------------------------------------
# random states
# ---------------------------------------------------------------------------

def random_pure(dim_a, dim_b, seed, schmidt_rank=None):
    """Haar-like random pure state, optionally of fixed Schmidt rank.

    Without ``schmidt_rank`` the amplitudes are a normalized complex
    Gaussian vector (Haar on the global sphere). With it, a Haar-random
    pure state on the rank x rank subsystem is embedded and rotated by
    independent Haar local unitaries, which fixes the Schmidt rank exactly
    (with probability one) while keeping the distribution locally unitarily
    invariant.
    """
    da = _check_dim(dim_a, "dim_a")
    db = _check_dim(dim_b, "dim_b")
    rng = as_rng(seed)
    if schmidt_rank is None:
        vec = rng.standard_normal(da * db) + 1j * rng.standard_normal(da * db)
        vec /= np.linalg.norm(vec)
        return PureState(da, db, vec)
    r = schmidt_rank
    if not isinstance(r, (int, np.integer)) or not 1 <= r <= min(da, db):
        raise InvalidInputError(
            f"schmidt_rank must be an integer in [1, {min(da, db)}], got {r!r}")
    core = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
    core /= np.linalg.norm(core)
    coeff = np.zeros((da, db), dtype=np.complex128)
    coeff[:r, :r] = core
    ua = _haar(da, rng)
    ub = _haar(db, rng)
    coeff = ua @ coeff @ ub.T
    return PureState(da, db, coeff.reshape(-1))


def _haar(d, rng):
    """Haar-random unitary via QR of a Ginibre matrix with phase fix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_mixed(dim_a, dim_b, rank, seed):
    """Random mixed state of the induced measure with the given rank.

    Partial trace over a rank-dimensional ancilla of a Haar-random pure
    state on (d_a * d_b) x rank.
    """
    da = _check_dim(dim_a, "dim_a")
    db = _check_dim(dim_b, "dim_b")
    n = da * db
    if not isinstance(rank, (int, np.integer)) or not 1 <= rank <= n:
        raise InvalidInputError(
            f"rank must be an integer in [1, {n}], got {rank!r}")
    rng = as_rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    g /= np.linalg.norm(g)
    mat = g @ g.conj().T
    # enforce exact hermiticity against accumulated roundoff
    mat = (mat + mat.conj().T) / 2
    mat /= mat.trace().real
    return DensityMatrix(da, db, mat)


# ---------------------------------------------------------------------------
# state files
# ---------------------------------------------------------------------------

def read_state_json(path):
    """Load a density matrix from a JSON state file.

    The format is ``{"dim_a": int, "dim_b": int, "re": [[...]], "im": [[...]]}``.
    Validation reports the first violated property (shape, hermiticity,
    trace, positivity, in that order).
    """
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"state file {path} is not valid JSON: {exc}") from exc
    for key in ("dim_a", "dim_b", "re", "im"):
        if key not in data:
            raise InvalidInputError(f"state file {path} is missing the {key!r} field")
    try:
        mat = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"state file {path} re/im entries are not numeric") from exc
    return DensityMatrix(data["dim_a"], data["dim_b"], mat)


def write_state_json(rho, path):
    """Write a DensityMatrix to the JSON state format."""
    mat, da, db = _as_matrix(rho)
    data = {
        "dim_a": da,
        "dim_b": db,
        "re": mat.real.tolist(),
        "im": mat.imag.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(data, fh)
        fh.write("\n")
