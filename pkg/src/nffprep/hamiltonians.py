"""Hamiltonian families: Grover, shifted Grover, quintic-mapped Grover and defect chains.

Every constructor returns a :class:`SpectralProblem` whose operator is already
normalised (spectrum inside [-1, 1]) and whose ground energy, gap and
frustration exponent ``y`` were read off an exact diagonalisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.polynomial import chebyshev as C

from .chebyshev import ChebyshevSeries
from .errors import DegenerateGroundState, DimensionTooLarge, DomainError
from .spectral import HermitianOperator, SpectralDecomposition, apply_poly_exact

MAX_DENSE_DIM = 4096
MAX_CHAIN_SITES = 12
DEGENERACY_TOL = 1e-10


def classify_y(mu: float, delta: float) -> float:
    """Largest ``y`` in [0, 1] with ``mu <= -1 + 2 delta^y``."""
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    if not (-1 - 1e-12 <= mu and mu + delta <= 1 + 1e-12):
        raise DomainError(f"need -1 <= mu < mu + delta <= 1, got mu={mu!r}, delta={delta!r}")
    gap_to_floor = (mu + 1) / 2
    if gap_to_floor <= 0:
        return 1.0
    return min(1.0, max(0.0, math.log(gap_to_floor) / math.log(delta)))


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Normalise and rotate so the largest-magnitude entry is real and positive."""
    v = np.asarray(v)
    v = v / np.linalg.norm(v)
    i = int(np.argmax(np.abs(v)))
    phase = v[i] / abs(v[i])
    out = v / phase
    if np.iscomplexobj(out) and not np.any(out.imag):
        out = out.real
    return out


@dataclass(frozen=True, eq=False)
class SpectralProblem:
    """A normalised Hamiltonian with its ground energy ``mu``, gap ``delta`` and exponent ``y``.

    ``ansatz`` is the family's natural starting state (uniform superposition
    for Grover-type problems, the unperturbed product state for defect
    chains); ``info`` carries construction parameters.
    """

    operator: HermitianOperator
    alpha: float
    mu: float
    delta: float
    y: float
    ground_state: np.ndarray
    ansatz: np.ndarray | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        if not (-1 - 1e-12 <= self.mu and self.mu + self.delta <= 1 + 1e-12):
            raise DomainError("mu and mu + delta must lie in [-1, 1]")
        if self.mu > -1 + 2 * self.delta**self.y + 1e-12:
            raise DomainError("mu <= -1 + 2 delta^y violated")

    @property
    def dim(self) -> int:
        return self.operator.dim

    @property
    def spectrum(self) -> np.ndarray:
        return self.operator.decomposition.eigenvalues

    @property
    def decomposition(self) -> SpectralDecomposition:
        return self.operator.decomposition


def problem_from_operator(h, alpha: float = 1.0, ansatz=None, **info) -> SpectralProblem:
    """Diagonalise a normalised operator and package it as a :class:`SpectralProblem`."""
    op = h if isinstance(h, HermitianOperator) else HermitianOperator(h)
    dec = op.decomposition
    w = dec.eigenvalues
    if np.max(np.abs(w)) > 1 + 1e-12:
        raise DomainError("operator is not normalised: spectrum leaves [-1, 1]")
    gap = float(w[1] - w[0])
    if gap <= DEGENERACY_TOL:
        raise DegenerateGroundState(f"ground state is degenerate (gap {gap:.3e})")
    mu = float(max(w[0], -1.0))
    return SpectralProblem(
        operator=op,
        alpha=alpha,
        mu=mu,
        delta=gap,
        y=classify_y(mu, min(gap, 1 - 1e-15)),
        ground_state=fix_phase(dec.eigenvectors[:, 0]),
        ansatz=None if ansatz is None else np.asarray(ansatz) / np.linalg.norm(ansatz),
        info=info,
    )


# -- Grover ---------------------------------------------------------------------------------


def _check_grover_args(N: int, t: int):
    if N < 4 or N & (N - 1):
        raise DomainError(f"N must be a power of two >= 4, got {N}")
    if not 0 <= t < N:
        raise DomainError(f"marked index t={t} outside [0, {N})")


def grover_terms(N: int, t: int = 0) -> list[tuple[float, np.ndarray]]:
    """``[(1/2, D), (1/2, U_t)]`` with ``D = I - 2|u><u|`` and ``U_t = I - 2|t><t|``."""
    _check_grover_args(N, t)
    if N > MAX_DENSE_DIM:
        raise DimensionTooLarge(f"dense Grover operators are limited to N <= {MAX_DENSE_DIM}")
    diffusion = np.eye(N) - 2.0 / N * np.ones((N, N))
    oracle = np.eye(N)
    oracle[t, t] = -1.0
    return [(0.5, diffusion), (0.5, oracle)]


def grover_hamiltonian(N: int, t: int = 0, reduced: bool | None = None) -> SpectralProblem:
    """``H_G = D/2 + U_t/2``: ground energy ``-1/sqrt(N)``, gap ``2/sqrt(N)``.

    With ``reduced=True`` the operator is written in the invariant subspace
    ``span{|t>, |u_perp>}`` plus one representative of the ``N - 2``-fold
    eigenvalue 1, a 3x3 matrix with exactly the distinct spectrum of the full
    operator. ``reduced=None`` picks the reduced form above ``MAX_DENSE_DIM``.
    """
    _check_grover_args(N, t)
    if reduced is None:
        reduced = N > MAX_DENSE_DIM
    s = 1.0 / math.sqrt(N)
    if reduced:
        c = math.sqrt(1.0 - s * s)
        h = np.array([[-s * s, -s * c, 0.0], [-s * c, s * s, 0.0], [0.0, 0.0, 1.0]])
        uniform = np.array([s, c, 0.0])
    else:
        (_, d), (_, u_t) = grover_terms(N, t)
        h = 0.5 * d + 0.5 * u_t
        uniform = np.full(N, s)
    return problem_from_operator(h, 1.0, ansatz=uniform, family="grover", N=N, t=t, reduced=reduced)


def grover_gap(N: int) -> float:
    return 2.0 / math.sqrt(N)


def grover_size_for_gap(delta: float) -> int:
    """The ``N`` (power of two) with ``2/sqrt(N) = delta``."""
    n = 4.0 / (delta * delta)
    N = int(round(n))
    if N < 4 or N & (N - 1) or abs(n - N) > 1e-9 * n:
        raise DomainError(f"delta={delta!r} is not 2/sqrt(N) for a power of two N")
    return N


def shift_offset(x0: float, delta: float) -> float:
    """``z = (1 - 2 x0 - delta) / (1 + 2 x0)``."""
    return (1 - 2 * x0 - delta) / (1 + 2 * x0)


def shift_and_scale(p: SpectralProblem, x0: float) -> SpectralProblem:
    """``(H - z I) / (1 + |z|)``: ground energy exactly ``-1/2 + x0``, gap ``delta / (1 + |z|)``."""
    if not 0 < x0 < 0.5:
        raise DomainError("x0 must lie in (0, 1/2)")
    if not math.isclose(p.alpha, 1.0):
        raise DomainError("shift_and_scale expects a problem with alpha = 1")
    z = shift_offset(x0, p.delta)
    scale = 1 + abs(z)
    h = (p.operator.matrix - z * np.eye(p.dim)) / scale
    w = (p.spectrum - z) / scale
    if np.max(np.abs(w)) > 1 + 1e-12:
        raise DomainError("shifted spectrum leaves [-1, 1]")
    if abs(w[0] - (-0.5 + x0)) > 1e-10:
        raise DomainError(f"shift cannot place the ground energy at -1/2 + x0 (z = {z:.4g})")
    info = dict(p.info, family="shifted_grover", x0=x0, z=z, parent_delta=p.delta)
    return problem_from_operator(h, 1.0, ansatz=p.ansatz, **info)


@dataclass(frozen=True)
class QuinticMap:
    """``g(x) = a x + b x^3 + c x^5``; minimum -1 at ``x = -1/2`` with zero slope there."""

    a: Fraction = Fraction(19, 6)
    b: Fraction = Fraction(-16, 3)
    c: Fraction = Fraction(8, 3)

    def exact(self, x: Fraction) -> Fraction:
        return self.a * x + self.b * x**3 + self.c * x**5

    def derivative_exact(self, x: Fraction) -> Fraction:
        return self.a + 3 * self.b * x**2 + 5 * self.c * x**4

    def second_derivative_exact(self, x: Fraction) -> Fraction:
        return 6 * self.b * x + 20 * self.c * x**3

    def __call__(self, x):
        a, b, c = float(self.a), float(self.b), float(self.c)
        x = np.asarray(x, dtype=float)
        x2 = x * x
        return x * (a + x2 * (b + c * x2))

    def series(self) -> ChebyshevSeries:
        coeffs = C.poly2cheb([0.0, float(self.a), 0.0, float(self.b), 0.0, float(self.c)])
        return ChebyshevSeries(coeffs, "odd")

    @property
    def curvature(self) -> Fraction:
        """``g''(-1/2) / 2``, the constant in ``g(-1/2 + s) = -1 + curvature * s^2 + O(s^3)``."""
        return self.second_derivative_exact(Fraction(-1, 2)) / 2


QUINTIC = QuinticMap()


def quintic_map_problem(p: SpectralProblem, x0: float) -> SpectralProblem:
    """``g(H)`` for ``H`` the output of :func:`shift_and_scale` with the same ``x0``.

    ``info`` records the leading-order predictions next to the measured values:
    ``mu + 1`` against ``x0^2`` and the new gap against ``2 x0 d + d^2`` (with
    ``d`` the gap of ``H``), plus the same predictions multiplied by
    ``g''(-1/2)/2 = 14/3``.
    """
    if abs(p.mu - (-0.5 + x0)) > 1e-10:
        raise DomainError("input ground energy must equal -1/2 + x0 (use shift_and_scale)")
    gh = apply_poly_exact(p.operator, QUINTIC.series())
    d = p.delta
    curv = float(QUINTIC.curvature)
    info = dict(
        p.info,
        family="quintic",
        x0=x0,
        predicted_mu_plus_1=x0 * x0,
        predicted_gap=2 * x0 * d + d * d,
        curvature=curv,
    )
    out = problem_from_operator(gh, 1.0, ansatz=p.ansatz, **info)
    # spectral mapping: the ground state of g(H) must be the ground state of H
    w = p.spectrum
    mapped = np.sort(QUINTIC(w))
    if np.max(np.abs(mapped - out.spectrum)) > 1e-10:
        raise DomainError("spectral mapping check failed for g(H)")
    if abs(out.mu - QUINTIC(p.mu)) > 1e-10:
        raise DomainError("g reorders the ground state; the shifted spectrum is outside g's monotone range")
    return out


def quintic_family_problem(delta: float, nu: float, t: int = 0, reduced: bool | None = None) -> SpectralProblem:
    """Grover with gap ``delta`` -> shift with ``x0 = delta^nu`` -> quintic map."""
    N = grover_size_for_gap(delta)
    x0 = delta**nu
    base = grover_hamiltonian(N, t, reduced=reduced)
    return quintic_map_problem(shift_and_scale(base, x0), x0)


def predicted_y(nu: float) -> float:
    """Exponent of the quintic-mapped instance with ``x0 = delta^nu``: ``2 nu / (nu + 1)``."""
    return 2 * nu / (nu + 1)


# -- defect chain ---------------------------------------------------------------------------

_I2 = np.eye(2)
_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Z = np.diag([1.0, -1.0])


def _site_operator(single: np.ndarray, site: int, L: int) -> np.ndarray:
    out = np.array([[1.0]])
    for j in range(L):
        out = np.kron(out, single if j == site else _I2)
    return out


def defect_sites(L: int, n_defects: int) -> list[int]:
    """Evenly spread, distinct, 0-based defect positions."""
    if n_defects >= L:
        return list(range(L))
    return [(i + 1) * L // (n_defects + 1) for i in range(n_defects)]


def defect_terms(L: int, v: float, n_defects: int) -> list[tuple[float, np.ndarray]]:
    """Signed Pauli decomposition ``[(c_i, P_i)]`` of the unnormalised chain Hamiltonian.

    ``-Z_1 - sum_j Z_j Z_{j+1} + v sum_{k in defects} X_k``. The boundary field
    pins the ferromagnet so the unperturbed ground state is unique.
    """
    if not 2 <= L <= MAX_CHAIN_SITES:
        raise DimensionTooLarge(f"chains are limited to 2 <= L <= {MAX_CHAIN_SITES}, got {L}")
    terms = [(-1.0, _site_operator(_Z, 0, L))]
    for j in range(L - 1):
        terms.append((-1.0, _site_operator(_Z, j, L) @ _site_operator(_Z, j + 1, L)))
    for k in defect_sites(L, n_defects):
        terms.append((v, _site_operator(_X, k, L)))
    return terms


def _chain_matrix(L: int, v: float, sites: list[int]) -> np.ndarray:
    dim = 1 << L
    idx = np.arange(dim)
    # spin j of basis state i is bit (L-1-j); Z eigenvalue +1 for bit 0
    spins = 1 - 2 * ((idx[:, None] >> (L - 1 - np.arange(L))[None, :]) & 1)
    diag = -spins[:, 0] - np.sum(spins[:, :-1] * spins[:, 1:], axis=1)
    h = np.diag(diag.astype(float))
    for k in sites:
        h[idx, idx ^ (1 << (L - 1 - k))] += v
    return h


def defect_lattice(L: int, v: float, n_defects: int) -> SpectralProblem:
    """Pinned ferromagnetic chain with ``n_defects`` transverse-field defects of strength ``v``.

    Normalised by ``alpha = L + v * n_defects`` (the sum of the Pauli
    coefficient magnitudes), so the defect-free chain has ``mu = -1`` exactly.
    """
    if L > MAX_CHAIN_SITES:
        raise DimensionTooLarge(f"chains are limited to L <= {MAX_CHAIN_SITES}, got {L}")
    if L < 2:
        raise DomainError("need at least two sites")
    if not v >= 0:
        raise DomainError("defect strength v must be non-negative")
    if not 0 <= n_defects <= L:
        raise DomainError("n_defects must lie in [0, L]")
    sites = defect_sites(L, n_defects)
    alpha = L + v * len(sites)
    h = _chain_matrix(L, v, sites) / alpha
    product_state = np.zeros(1 << L)
    product_state[0] = 1.0
    return problem_from_operator(
        h, alpha, ansatz=product_state, family="defect_chain", L=L, v=v, n_defects=n_defects, sites=sites
    )


def compress_to_gap(p: SpectralProblem, delta: float) -> SpectralProblem:
    """``-1 + (delta / gap) (H + 1)``: same eigenvectors, gap ``delta``, and ``mu + 1`` scaled alike.

    Starting from a problem with ``mu`` near -1 this yields a family with
    ``mu + 1 = O(delta)``, the frustration-free (``y = 1``) regime, at any gap.
    """
    if not 0 < delta <= p.delta:
        raise DomainError(f"can only compress: need 0 < delta <= {p.delta!r}")
    c = delta / p.delta
    eye = np.eye(p.dim)
    h = -eye + c * (p.operator.matrix + eye)
    info = dict(p.info, compression=c, parent_delta=p.delta)
    # LCU of -I and the normalised H with weights (1 - c) and c: alpha = 1
    return problem_from_operator(h, 1.0, ansatz=p.ansatz, **info)


def defect_chain_family_problem(delta: float, L: int = 8, v: float = 0.5, n_defects: int = 1) -> SpectralProblem:
    """Defect chain compressed toward -1 so that its gap equals ``delta``."""
    return compress_to_gap(defect_lattice(L, v, n_defects), delta)
