"""Explicit block encodings on system (x) ancilla.

Ancilla qubits are the most significant register, so the ``|0^m>``-flagged
corner of the unitary is its top-left ``system_dim x system_dim`` block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, EmptyTermList, NonUnitaryTerm
from .filters import FilterSpec
from .hamiltonians import grover_gap, grover_terms, shift_offset
from .spectral import HermitianOperator

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BlockEncoding:
    unitary: np.ndarray
    alpha: float
    m: int
    encode_error: float
    system_dim: int

    def __post_init__(self):
        if self.unitary.shape != (self.system_dim << self.m,) * 2:
            raise DimensionMismatch("unitary shape does not match system_dim * 2^m")
        if not is_unitary(self.unitary):
            raise NonUnitaryTerm("block-encoding unitary is not unitary")

    def corner(self) -> np.ndarray:
        """``(<0^m| (x) I) U (|0^m> (x) I)``."""
        return self.unitary[: self.system_dim, : self.system_dim]


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.max(np.abs(u.conj().T @ u - np.eye(len(u)))) <= tol


def _prepare(weights: np.ndarray, size: int) -> np.ndarray:
    """Real orthogonal matrix whose first column is ``sqrt(weights)`` (padded to ``size``)."""
    s = np.zeros(size)
    s[: len(weights)] = np.sqrt(weights)
    e0 = np.zeros(size)
    e0[0] = 1.0
    w = e0 - s
    norm = np.linalg.norm(w)
    if norm < 1e-15:
        return np.eye(size)
    w /= norm
    # Householder reflection: symmetric, orthogonal, maps e0 to s
    return np.eye(size) - 2.0 * np.outer(w, w)


def lcu_encode(terms) -> BlockEncoding:
    """Prepare-select-unprepare encoding of ``sum_i c_i V_i``.

    Negative coefficients are folded into their unitary as a -1 phase; complex
    ones likewise by their phase. ``alpha = sum |c_i|`` and
    ``m = ceil(log2(#terms))``.
    """
    terms = list(terms)
    if not terms:
        raise EmptyTermList("lcu_encode needs at least one term")
    coeffs, unitaries = [], []
    dim = None
    for c, v in terms:
        v = np.asarray(v)
        if dim is None:
            dim = v.shape[0]
        if v.shape != (dim, dim):
            raise DimensionMismatch("all LCU terms must act on the same system")
        if not is_unitary(v):
            raise NonUnitaryTerm("LCU term is not unitary to 1e-10")
        if c == 0:
            continue
        phase = c / abs(c)
        coeffs.append(abs(c))
        unitaries.append(v * phase)
    if not coeffs:
        raise DomainError("all LCU coefficients are zero")
    coeffs = np.array(coeffs, dtype=float)
    alpha = float(np.sum(coeffs))
    m = math.ceil(math.log2(len(terms))) if len(terms) > 1 else 0
    size = 1 << m
    dtype = np.result_type(*unitaries, np.float64)
    select = np.zeros((size * dim, size * dim), dtype=dtype)
    for i in range(size):
        block = unitaries[i] if i < len(unitaries) else np.eye(dim)
        select[i * dim : (i + 1) * dim, i * dim : (i + 1) * dim] = block
    prep = np.kron(_prepare(coeffs / alpha, size), np.eye(dim))
    u = prep.T @ select @ prep
    target = sum(c * v for c, v in zip(coeffs, unitaries)) / alpha
    err = float(np.linalg.norm(u[:dim, :dim] - target, 2))
    return BlockEncoding(u, alpha, m, err, dim)


def validate(be: BlockEncoding, h) -> float:
    """Spectral-norm distance between the encoded corner and ``H / alpha``."""
    h = h.matrix if isinstance(h, HermitianOperator) else np.asarray(h)
    if h.shape != (be.system_dim, be.system_dim):
        raise DimensionMismatch(f"operator shape {h.shape} vs system_dim {be.system_dim}")
    return float(np.linalg.norm(be.corner() - h / be.alpha, 2))


def query_cost(filter: FilterSpec) -> int:
    """Queries to the base encoding needed to realise ``filter``: its degree (must be > 0)."""
    n = filter.series.degree if isinstance(filter, FilterSpec) else filter.degree
    if n < 1:
        raise DomainError("polynomial transformations need degree l > 0")
    return int(n)


def shifted_grover_terms(N: int, t: int, x0: float):
    """Three-term LCU of ``(H_G - z I) / (1 + |z|)``; coefficients sum to 1."""
    z = shift_offset(x0, grover_gap(N))
    (_, d), (_, u_t) = grover_terms(N, t)
    scale = 1 + abs(z)
    sign = 1.0 if z >= 0 else -1.0
    return [(0.5 / scale, d), (0.5 / scale, u_t), (abs(z) / scale, -sign * np.eye(N))]
