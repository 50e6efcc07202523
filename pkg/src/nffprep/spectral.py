"""Dense Hermitian eigendecomposition and matrix-function application.

Two independent routes evaluate a Chebyshev series of an operator:

* :func:`apply_poly_exact` diagonalises the operator and maps the spectrum;
* :func:`apply_poly_clenshaw` runs the Clenshaw recurrence on matrix-vector
  products and never forms ``p(A)``.

Operators are expected to be prescaled so that ``||A||_2 <= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from .errors import DecompositionFailure, DomainError, NonHermitian, SpectrumOutOfRange

if TYPE_CHECKING:
    from .chebyshev import ChebyshevSeries

HERMITIAN_RTOL = 1e-12
SPECTRUM_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply(self, fn) -> np.ndarray:
        """Return ``V diag(fn(lambda)) V^dagger``."""
        v = self.eigenvectors
        return (v * fn(self.eigenvalues)) @ v.conj().T


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense Hermitian matrix. Validated on construction, immutable afterwards."""

    matrix: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 2:
            raise DomainError("operator dimension must be at least 2")
        if not np.all(np.isfinite(a)):
            raise DomainError("operator has non-finite entries")
        scale = np.max(np.abs(a))
        asym = np.max(np.abs(a - a.conj().T))
        if asym > HERMITIAN_RTOL * scale:
            raise NonHermitian(f"max|A - A^H| = {asym:.3e} exceeds {HERMITIAN_RTOL:.0e} * max|A|")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "matrix", a)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def decomposition(self) -> SpectralDecomposition:
        return _eigh(self.matrix)

    def __matmul__(self, other):
        return self.matrix @ other


def as_operator(a) -> HermitianOperator:
    return a if isinstance(a, HermitianOperator) else HermitianOperator(np.asarray(a))


def _eigh(a: np.ndarray) -> SpectralDecomposition:
    # Hermitise exactly so round-off asymmetry cannot leak into the eigenbasis.
    h = 0.5 * (a + a.conj().T)
    if np.isrealobj(h) or not np.any(h.imag):
        h = h.real
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailure(str(exc)) from exc
    w.flags.writeable = False
    v.flags.writeable = False
    return SpectralDecomposition(w, v)


def decompose(a) -> SpectralDecomposition:
    """Full spectrum (ascending) and orthonormal eigenbasis of a Hermitian operator.

    Accepts a :class:`HermitianOperator` or anything ``numpy.asarray`` can turn
    into a square Hermitian matrix. Results are cached on the operator.
    """
    return as_operator(a).decomposition


def _check_range(eigenvalues: np.ndarray):
    worst = np.max(np.abs(eigenvalues))
    if worst > 1 + SPECTRUM_SLACK:
        raise SpectrumOutOfRange(f"spectrum reaches |lambda| = {worst!r} > 1; normalise the operator first")


def apply_poly_exact(a, p: ChebyshevSeries) -> HermitianOperator:
    """``p(A)`` through the eigendecomposition of ``A``."""
    dec = decompose(a)
    _check_range(dec.eigenvalues)
    return HermitianOperator(dec.apply(p))


def apply_poly_exact_vector(a, p: ChebyshevSeries, v: np.ndarray) -> np.ndarray:
    """``p(A) v`` in the eigenbasis without materialising ``p(A)``."""
    dec = decompose(a)
    _check_range(dec.eigenvalues)
    v = np.asarray(v)
    vecs = dec.eigenvectors
    weights = p(dec.eigenvalues)
    coords = vecs.conj().T @ v
    coords = weights * coords if v.ndim == 1 else weights[:, None] * coords
    return vecs @ coords


def extreme_eigenvalues(a: np.ndarray) -> tuple[float, float]:
    """Smallest and largest eigenvalue, computed without eigenvectors."""
    n = a.shape[0]
    lo = scipy.linalg.eigvalsh(a, subset_by_index=[0, 0])[0]
    hi = scipy.linalg.eigvalsh(a, subset_by_index=[n - 1, n - 1])[0]
    return float(lo), float(hi)


def clenshaw(matvec, coefficients: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Evaluate ``sum_j c_j T_j(A) v`` given only ``x -> A x``.

    b_k = c_k v + 2 A b_{k+1} - b_{k+2};  result = c_0 v + A b_1 - b_2.
    """
    c = np.asarray(coefficients, dtype=float)
    v = np.asarray(v)
    n = len(c) - 1
    if n < 0:
        return np.zeros_like(v)
    if n == 0:
        return c[0] * v
    dtype = np.result_type(v, np.float64)
    b1 = np.zeros(v.shape, dtype=dtype)
    b2 = np.zeros(v.shape, dtype=dtype)
    for k in range(n, 0, -1):
        b1, b2 = c[k] * v + 2.0 * matvec(b1) - b2, b1
    return c[0] * v + matvec(b1) - b2


def apply_poly_clenshaw(a, p: ChebyshevSeries, v: np.ndarray, check_spectrum: bool = True) -> np.ndarray:
    """``p(A) v`` by the Clenshaw recurrence on matrix-vector products.

    ``a`` may be a matrix, a :class:`HermitianOperator` or a
    :class:`scipy.sparse.linalg.LinearOperator`; for the latter the caller is
    responsible for the spectrum lying in [-1, 1].
    """
    if isinstance(a, LinearOperator):
        op = a
    else:
        h = as_operator(a)
        if check_spectrum:
            _check_range(np.array(extreme_eigenvalues(h.matrix)))
        op = aslinearoperator(h.matrix)
    return clenshaw(op.matvec if np.ndim(v) == 1 else op.matmat, p.coefficients, v)
