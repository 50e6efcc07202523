"""Two-stage ground- and excited-state preparation with query accounting.

Stage 1 applies the odd part of a shifted step (or band-pass) filter. The
target eigenvector lands at ``-1`` (``-1/2`` for the band-pass) and every other
eigenvalue in ``[-O(eps), 1]``, an effective gap of order one. Stage 2 applies a
fixed-width step to that operator and keeps the part below the step,
``(1 - q(x)) / 2``, which projects onto the target.

Amplitude amplification is not simulated: the filtered state is renormalised
(post-selection) and the ``1/gamma`` repetitions enter as a
``ceil(1/gamma)`` factor on the query count.

Error budget: stage 2 is built to precision ``eps * gamma``. Each unwanted
eigencomponent keeps at most ``eps * gamma / 2`` of its amplitude and the
target keeps at least ``1 - eps * gamma``, so the infidelity is below
``(eps / 2)^2 / (1 - eps)^2 <= eps^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import LinearOperator

from .blockenc import query_cost
from .chebyshev import ChebyshevSeries, certified_degree, erf_steepness
from .errors import BandNotIsolated, DomainError, FilterConstructionError, ZeroOverlap
from .filters import FilterSpec, make_bandpass_filter, make_step_filter, odd_part, stage_one_window
from .hamiltonians import SpectralProblem
from .spectral import clenshaw

MIN_OVERLAP = 1e-8
GROUND_STAGE2 = (-0.5, 0.5)  # (centre, width) of the second-stage step
EXCITED_STAGE2 = (-0.25, 0.25)
ROUTES = ("eigh", "clenshaw")


@dataclass(frozen=True, eq=False)
class PrepReport:
    fidelity: float
    success_probability: float
    queries_stage1: int
    queries_stage2: int
    repetitions: int
    total_queries: int
    gamma: float
    epsilon: float
    parameters: dict
    route: str = "eigh"
    state: np.ndarray | None = field(default=None, repr=False)

    def as_dict(self) -> dict:
        return {
            "fidelity": self.fidelity,
            "success_probability": self.success_probability,
            "queries_stage1": self.queries_stage1,
            "queries_stage2": self.queries_stage2,
            "repetitions": self.repetitions,
            "total_queries": self.total_queries,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "parameters": dict(self.parameters),
            "route": self.route,
        }


def projector_series(step: FilterSpec) -> ChebyshevSeries:
    """``(1 - q(x)) / 2``: ~1 below the step, ~0 above it."""
    c = -0.5 * np.array(step.series.coefficients)
    c[0] += 0.5
    return ChebyshevSeries(c)


def _overlap(problem_vec: np.ndarray, ansatz: np.ndarray) -> float:
    return float(abs(np.vdot(problem_vec, ansatz)))


def _normalised(v) -> np.ndarray:
    v = np.asarray(v)
    n = np.linalg.norm(v)
    if n == 0:
        raise DomainError("ansatz is the zero vector")
    return v / n


def _check_epsilon(epsilon: float):
    if not 0 < epsilon < 0.5:
        raise DomainError("epsilon must lie in (0, 1/2)")


def _stage2(epsilon: float, gamma: float, centre_width: tuple[float, float]) -> FilterSpec:
    centre, width = centre_width
    return make_step_filter(epsilon * gamma, width, centre)


def _run(problem: SpectralProblem, stage1: FilterSpec, stage2: FilterSpec, ansatz: np.ndarray, route: str):
    projector = projector_series(stage2)
    if route == "eigh":
        dec = problem.decomposition
        weights = projector(stage1(dec.eigenvalues))
        v = dec.eigenvectors
        return v @ (weights * (v.conj().T @ ansatz))
    if route == "clenshaw":
        h = problem.operator.matrix
        dim = problem.dim
        inner = stage1.series.coefficients

        def filtered(x):
            return clenshaw(lambda y: h @ y, inner, x)

        op = LinearOperator((dim, dim), matvec=filtered, dtype=np.result_type(h, ansatz))
        return clenshaw(op.matvec, projector.coefficients, ansatz)
    raise DomainError(f"unknown route {route!r}; choose from {ROUTES}")


def _report(out, target, gamma, epsilon, stage1, stage2, parameters, route) -> PrepReport:
    success = float(np.vdot(out, out).real)
    state = out / math.sqrt(success)
    fidelity = min(1.0, float(abs(np.vdot(target, state)) ** 2))
    n1, n2 = query_cost(stage1), query_cost(stage2)
    reps = math.ceil(1.0 / gamma - 1e-12)
    return PrepReport(
        fidelity=fidelity,
        success_probability=success,
        queries_stage1=n1,
        queries_stage2=n2,
        repetitions=reps,
        total_queries=n1 * n2 * reps,
        gamma=gamma,
        epsilon=epsilon,
        parameters=parameters,
        route=route,
        state=state,
    )


def ground_stage_filter(problem: SpectralProblem, epsilon: float) -> FilterSpec:
    """Odd step filter that sends the ground state of ``problem`` to ``~ -1``."""
    width, eta = stage_one_window(problem.mu, problem.delta)
    if problem.mu + eta > -width / 2 + 1e-12:
        raise FilterConstructionError("ground energy too high: the mirrored step would overlap mu")
    try:
        return odd_part(make_step_filter(epsilon, width, eta))
    except DomainError as exc:
        raise FilterConstructionError(str(exc)) from exc


def prepare_ground_state(
    problem: SpectralProblem, ansatz=None, epsilon: float = 1e-3, route: str = "eigh"
) -> PrepReport:
    """Prepare the ground state of ``problem`` from ``ansatz`` (default: the family's natural ansatz)."""
    _check_epsilon(epsilon)
    if ansatz is None:
        ansatz = problem.ansatz
    if ansatz is None:
        raise DomainError("no ansatz given and the problem has no default")
    ansatz = _normalised(ansatz)
    gamma = _overlap(problem.ground_state, ansatz)
    if gamma < MIN_OVERLAP:
        raise ZeroOverlap(f"ansatz overlap {gamma:.3e} with the ground state is below {MIN_OVERLAP}")
    stage1 = ground_stage_filter(problem, epsilon)
    stage2 = _stage2(epsilon, gamma, GROUND_STAGE2)
    out = _run(problem, stage1, stage2, ansatz, route)
    params = {
        "mu": problem.mu,
        "delta": problem.delta,
        "y": problem.y,
        "eta": stage1.eta,
        "width": stage1.delta,
        "k": stage1.k,
        "stage2_eta": stage2.eta,
        "stage2_width": stage2.delta,
    }
    return _report(out, problem.ground_state, gamma, epsilon, stage1, stage2, params, route)


def prepare_excited_state(
    problem: SpectralProblem, eta: float, delta1: float, ansatz=None, epsilon: float = 1e-3, route: str = "eigh"
) -> PrepReport:
    """Prepare the eigenvector with energy ``eta`` isolated by ``delta1`` from the rest of the spectrum."""
    _check_epsilon(epsilon)
    dec = problem.decomposition
    w = dec.eigenvalues
    inside = np.flatnonzero(np.abs(w - eta) < delta1 / 2)
    if inside.size != 1:
        raise BandNotIsolated(f"{inside.size} eigenvalues within delta1/2 of eta={eta!r}; need exactly one")
    j = int(inside[0])
    others = np.delete(w, j)
    if others.size and np.min(np.abs(others - eta)) < delta1 * (1 - 1e-9):
        raise BandNotIsolated("another eigenvalue lies closer than delta1 to eta")
    if 2 * abs(eta) < delta1 * (1 - 1e-9):
        raise BandNotIsolated("band overlaps its mirror image under x -> -x")
    target = dec.eigenvectors[:, j]
    if ansatz is None:
        ansatz = problem.ansatz
    if ansatz is None:
        raise DomainError("no ansatz given and the problem has no default")
    ansatz = _normalised(ansatz)
    gamma = _overlap(target, ansatz)
    if gamma < MIN_OVERLAP:
        raise ZeroOverlap(f"ansatz overlap {gamma:.3e} with the target is below {MIN_OVERLAP}")
    try:
        stage1 = odd_part(make_bandpass_filter(epsilon, delta1, eta))
    except DomainError as exc:
        raise FilterConstructionError(str(exc)) from exc
    stage2 = _stage2(epsilon, gamma, EXCITED_STAGE2)
    out = _run(problem, stage1, stage2, ansatz, route)
    params = {
        "mu": problem.mu,
        "delta": problem.delta,
        "y": problem.y,
        "eta": eta,
        "delta1": delta1,
        "target_energy": float(w[j]),
        "target_index": j,
        "lemma_degree": bandpass_reference_degree(epsilon, delta1, eta),
        "stage2_eta": stage2.eta,
        "stage2_width": stage2.delta,
    }
    return _report(out, target, gamma, epsilon, stage1, stage2, params, route)


def bandpass_reference_degree(epsilon: float, delta1: float, eta: float) -> int:
    """Single shifted-erf certificate at the band centre, the degree scale of the band-pass bound."""
    return certified_degree(epsilon, erf_steepness(epsilon, delta1), eta).degree


def verify_effective_gap(problem: SpectralProblem, filter) -> float:
    """Exact gap between the two lowest eigenvalues of ``filter(H)``."""
    values = np.sort(filter(problem.spectrum))
    return float(values[1] - values[0])
