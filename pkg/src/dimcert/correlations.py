"""Bloch correlation matrices of bipartite states and their norms.

The full correlation matrix X collects the coefficients of a state in the
product of local orthonormal operator bases (identity/sqrt(d) at index 0,
then the su(d) generators): ``X[k, l] = tr(rho * g_k (x) g_l)``. Dropping
row 0 and column 0 leaves the su submatrix whose singular values eps drive
the moment machinery; the singular values xi of the full matrix are the
operator Schmidt values of the state, with ``sum xi^2 = tr(rho^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalConsistencyError
from .states import (
    DERIVED_TOL,
    DensityMatrix,
    PureState,
    extended_basis,
    partial_trace,
    purity,
)

IMAG_TOL = 1e-9

__all__ = [
    "CorrelationData",
    "CovarianceBlock",
    "correlation_data",
    "trace_norm",
    "two_norm",
    "operator_schmidt_values",
    "covariance_block",
]


@dataclass
class CorrelationData:
    """Correlation matrix of one state plus the derived spectra.

    Attributes
    ----------
    dim_a, dim_b : int
    full : ndarray, shape (d_a^2, d_b^2)
        Real coefficients in the extended product basis; ``full[0, 0]``
        equals ``1/sqrt(d_a d_b)``.
    su : ndarray, shape (d_a^2 - 1, d_b^2 - 1)
        The submatrix without the identity row/column.
    vector_a, vector_b : ndarray
        Local Bloch vectors of the marginals in the su basis.
    epsilon : ndarray
        Singular values of ``su``, descending.
    xi : ndarray
        Singular values of ``full`` (operator Schmidt values), descending.
    """

    dim_a: int
    dim_b: int
    full: np.ndarray
    su: np.ndarray
    vector_a: np.ndarray
    vector_b: np.ndarray
    epsilon: np.ndarray
    xi: np.ndarray


@dataclass
class CovarianceBlock:
    """Mean-subtracted su correlation block and the local purities.

    ``cross = su - vector_a vector_b^T`` is the covariance of local su
    observables; the purities feed the right-hand side
    ``sqrt((1 - tr rho_a^2)(1 - tr rho_b^2))`` of the covariance criterion.
    """

    cross: np.ndarray
    purity_a: float
    purity_b: float


def _coerce_density(rho):
    if isinstance(rho, PureState):
        return rho.to_density()
    if isinstance(rho, DensityMatrix):
        return rho
    raise InvalidInputError(
        f"expected DensityMatrix or PureState, got {type(rho).__name__}")


def correlation_data(rho):
    """Build the full correlation matrix and its singular spectra.

    Raises
    ------
    NumericalConsistencyError
        If any coefficient has an imaginary part above 1e-9 (Hermitian
        states in Hermitian bases give real coefficients exactly).
    """
    rho = _coerce_density(rho)
    da, db = rho.dim_a, rho.dim_b
    ga = extended_basis(da)
    gb = extended_basis(db)
    t = rho.matrix.reshape(da, db, da, db)
    # X[k, l] = sum_{iji'j'} rho[(ij),(i'j')] ga[k, i', i] gb[l, j', j]
    full_c = np.einsum("ijkl,aki,blj->ab", t, ga, gb, optimize=True)
    imag_max = float(np.max(np.abs(full_c.imag)))
    if imag_max > IMAG_TOL:
        raise NumericalConsistencyError(
            f"correlation coefficients have imaginary parts up to {imag_max:.3e}; "
            "the input matrix is not consistently Hermitian")
    full = np.ascontiguousarray(full_c.real)
    su = full[1:, 1:]
    vector_a = full[1:, 0] * np.sqrt(db)
    vector_b = full[0, 1:] * np.sqrt(da)
    epsilon = np.linalg.svd(su, compute_uv=False)
    xi = np.linalg.svd(full, compute_uv=False)
    pur = purity(rho.matrix)
    if abs(float(np.sum(xi ** 2)) - pur) > DERIVED_TOL:
        raise NumericalConsistencyError(
            f"operator Schmidt values square-sum to {np.sum(xi ** 2):.12f} "
            f"but tr(rho^2) = {pur:.12f}")
    return CorrelationData(
        dim_a=da, dim_b=db, full=full, su=su,
        vector_a=vector_a, vector_b=vector_b,
        epsilon=epsilon, xi=xi,
    )


def trace_norm(matrix):
    """Sum of singular values."""
    return float(np.sum(np.linalg.svd(np.asarray(matrix), compute_uv=False)))


def two_norm(matrix):
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(np.asarray(matrix)))


def operator_schmidt_values(rho):
    """Singular values of the full correlation matrix, descending."""
    return correlation_data(rho).xi


def covariance_block(rho):
    """Mean-subtracted su block with the marginal purities."""
    rho = _coerce_density(rho)
    data = correlation_data(rho)
    cross = data.su - np.outer(data.vector_a, data.vector_b)
    pa = purity(partial_trace(rho, "a"))
    pb = purity(partial_trace(rho, "b"))
    return CovarianceBlock(cross=cross, purity_a=pa, purity_b=pb)
