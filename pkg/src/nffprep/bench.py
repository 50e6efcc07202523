"""Parameter sweeps and log-log fits of filter degree and query count against the gap.

Output formats
--------------
CSV, one row per grid point, columns in this order::

    delta, eta, mu, y, degree, queries, fidelity, success_probability, grid_delta

``delta`` is the measured gap of the constructed problem (the fit variable);
``grid_delta`` is the grid value that generated it (they differ for the
quintic family). ``eta`` is the stage-1 step centre and ``degree`` its
polynomial degree; ``queries`` is the total two-stage query count.

The JSON summary written next to the CSV (same stem, ``.json``) holds
``family``, ``quantity``, ``slope``, ``intercept``, ``r_squared``,
``log_corrected``, ``expected_slope``, ``points``, ``residuals``, the raw
(uncorrected) fit under ``raw`` and the configuration under ``config``. Keys
are sorted and floats written with ``repr`` so identical configs give
byte-identical files.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError
from .hamiltonians import (
    QUINTIC,
    SpectralProblem,
    defect_chain_family_problem,
    grover_hamiltonian,
    grover_size_for_gap,
    predicted_y,
    quintic_family_problem,
    shift_and_scale,
)
from .prep import prepare_ground_state

FAMILIES = ("grover", "shifted_grover", "quintic", "defect_chain")
CSV_COLUMNS = ("delta", "eta", "mu", "y", "degree", "queries", "fidelity", "success_probability", "grid_delta")
MIN_GRID_POINTS = 4
SHIFTED_GROVER_X0 = 0.25
DENSE_GROVER_LIMIT = 1024  # larger Grover instances use the exact 3x3 reduction


def thread_count() -> int:
    """Worker cap from ``NFF_THREADS`` (default: CPU count)."""
    raw = os.environ.get("NFF_THREADS")
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise DomainError(f"NFF_THREADS must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise DomainError(f"NFF_THREADS must be a positive integer, got {raw!r}")
    return n


def validate_grid(delta_grid) -> tuple[float, ...]:
    grid = tuple(float(d) for d in delta_grid)
    if len(grid) < MIN_GRID_POINTS:
        raise DomainError(f"delta grid needs at least {MIN_GRID_POINTS} points")
    if any(not 0 < d < 0.25 for d in grid):
        raise DomainError("delta grid values must lie in (0, 1/4)")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise DomainError("delta grid must be strictly decreasing")
    return grid


def default_y(family: str, nu: float | None) -> float:
    if family in ("grover", "shifted_grover"):
        return 0.0
    if family == "quintic":
        return predicted_y(nu)
    return 1.0


@dataclass(frozen=True)
class SweepConfig:
    family: str
    delta_grid: tuple
    y: float | None = None
    epsilon: float = 1e-3
    seed: int = 0
    output_path: str | None = None
    nu: float | None = None
    x0: float = SHIFTED_GROVER_X0
    ansatz_noise: float = 0.0
    chain_sites: int = 8
    chain_strength: float = 0.5
    chain_defects: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"family must be one of {FAMILIES}, got {self.family!r}")
        object.__setattr__(self, "delta_grid", validate_grid(self.delta_grid))
        if not 0 < self.epsilon < 0.5:
            raise DomainError("epsilon must lie in (0, 1/2)")
        if self.family == "quintic":
            if self.nu is None or not 0 < self.nu <= 1:
                raise DomainError("quintic family needs nu in (0, 1]")
            if self.delta_grid[0] ** self.nu >= 0.5:
                raise DomainError("quintic family needs delta^nu < 1/2 on the whole grid")
        if self.ansatz_noise < 0:
            raise DomainError("ansatz_noise must be non-negative")
        if self.y is None:
            object.__setattr__(self, "y", default_y(self.family, self.nu))

    @property
    def expected_slope(self) -> float:
        return self.y / 2 - 1

    def echo(self) -> dict:
        d = asdict(self)
        d["delta_grid"] = list(self.delta_grid)
        return d


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    points: list
    log_corrected: bool
    residuals: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


def fit_loglog(x, values, log_corrected: bool) -> FitResult:
    """Ordinary least squares of ``log(values)`` on ``log(x)``."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(values, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return FitResult(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=min(1.0, max(0.0, r2)),
        points=[(float(a), float(b)) for a, b in zip(lx, ly)],
        log_corrected=log_corrected,
        residuals=[float(r) for r in resid],
    )


def log_factor(delta, eta, epsilon: float):
    """``log(sqrt(1 - |eta|) / (delta eps))``, the log factor in the degree bound."""
    delta = np.asarray(delta, dtype=float)
    eta = np.asarray(eta, dtype=float)
    return np.log(np.sqrt(1 - np.abs(eta)) / (delta * epsilon))


def _grover(delta: float) -> SpectralProblem:
    N = grover_size_for_gap(delta)
    return grover_hamiltonian(N, reduced=N > DENSE_GROVER_LIMIT)


def _quintic(delta: float, nu: float) -> SpectralProblem:
    return quintic_family_problem(delta, nu, reduced=grover_size_for_gap(delta) > DENSE_GROVER_LIMIT)


def family_problem(config: SweepConfig, delta: float) -> SpectralProblem:
    if config.family == "grover":
        return _grover(delta)
    if config.family == "shifted_grover":
        return shift_and_scale(_grover(delta), config.x0)
    if config.family == "quintic":
        return _quintic(delta, config.nu)
    return defect_chain_family_problem(delta, config.chain_sites, config.chain_strength, config.chain_defects)


def _ansatz(config: SweepConfig, problem: SpectralProblem, index: int) -> np.ndarray:
    a = np.asarray(problem.ansatz, dtype=float)
    if config.ansatz_noise == 0:
        return a
    # seeded per grid index so threads cannot change the draw
    rng = np.random.default_rng([config.seed, index])
    a = a + config.ansatz_noise * rng.standard_normal(a.shape)
    return a / np.linalg.norm(a)


def evaluate_point(config: SweepConfig, index: int) -> dict:
    grid_delta = config.delta_grid[index]
    problem = family_problem(config, grid_delta)
    report = prepare_ground_state(problem, _ansatz(config, problem, index), config.epsilon)
    return {
        "delta": problem.delta,
        "eta": report.parameters["eta"],
        "mu": problem.mu,
        "y": problem.y,
        "degree": report.queries_stage1,
        "queries": report.total_queries,
        "fidelity": report.fidelity,
        "success_probability": report.success_probability,
        "grid_delta": grid_delta,
    }


def run_grid(config: SweepConfig) -> list[dict]:
    """Evaluate every grid point (concurrently); rows come back in grid order."""
    n = len(config.delta_grid)
    workers = min(thread_count(), n)
    if workers == 1:
        return [evaluate_point(config, i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda i: evaluate_point(config, i), range(n)))


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def write_csv(rows: list[dict], path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in CSV_COLUMNS])


def summary(config: SweepConfig, quantity: str, corrected: FitResult, raw: FitResult) -> dict:
    return {
        "family": config.family,
        "quantity": quantity,
        "slope": corrected.slope,
        "intercept": corrected.intercept,
        "r_squared": corrected.r_squared,
        "log_corrected": True,
        "expected_slope": config.expected_slope,
        "points": corrected.points,
        "residuals": corrected.residuals,
        "raw": raw.as_dict(),
        "config": config.echo(),
    }


def json_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".json")


def _sweep(config: SweepConfig, quantity: str) -> tuple[FitResult, list[dict], dict]:
    rows = run_grid(config)
    delta = np.array([r["delta"] for r in rows])
    eta = np.array([r["eta"] for r in rows])
    values = np.array([r[quantity] for r in rows], dtype=float)
    corrected = fit_loglog(delta, values / log_factor(delta, eta, config.epsilon), True)
    raw = fit_loglog(delta, values, False)
    info = summary(config, quantity, corrected, raw)
    if config.output_path:
        write_csv(rows, config.output_path)
        json_path(config.output_path).write_text(json.dumps(info, sort_keys=True, indent=2) + "\n")
    return corrected, rows, info


def sweep_degree(config: SweepConfig) -> FitResult:
    """Slope of the log-corrected stage-1 filter degree against the gap."""
    return _sweep(config, "degree")[0]


def sweep_queries(config: SweepConfig) -> FitResult:
    """Slope of the log-corrected total query count against the gap; expected ``y/2 - 1``."""
    return _sweep(config, "queries")[0]


def sweep_details(config: SweepConfig, quantity: str = "queries") -> tuple[FitResult, list[dict], dict]:
    """Fit, per-point rows and JSON summary of one sweep."""
    if quantity not in ("degree", "queries"):
        raise DomainError("quantity must be 'degree' or 'queries'")
    return _sweep(config, quantity)


OPTIMALITY_COLUMNS = (
    "delta",
    "x0",
    "mu_plus_1",
    "predicted_mu_plus_1",
    "mu_ratio",
    "gap",
    "predicted_gap",
    "gap_ratio",
    "shifted_gap",
    "curvature_gap",
    "curvature_gap_ratio",
    "curvature_mu_ratio",
)


def optimality_gap_table(delta_grid, nu: float) -> list[dict]:
    """Measured vs leading-order spectrum of the quintic-mapped Grover instances.

    ``predicted_mu_plus_1 = x0^2`` and ``predicted_gap = 2 x0 delta + delta^2``
    with ``x0 = delta^nu``. Since ``g(-1/2 + s) = -1 + (14/3) s^2 + O(s^3)``
    the measured values carry the factor 14/3; the ``curvature_*`` columns
    divide it out, and ``curvature_gap`` uses the gap of the shifted operator
    that ``g`` actually acts on.
    """
    if not 0 < nu <= 1:
        raise DomainError("nu must lie in (0, 1]")
    grid = validate_grid(delta_grid)
    curv = float(QUINTIC.curvature)
    rows = []
    for delta in grid:
        x0 = delta**nu
        if x0 >= 0.5:
            raise DomainError(f"x0 = delta^nu = {x0!r} must be below 1/2")
        p = _quintic(delta, nu)
        d = p.info["parent_delta"]
        shifted_gap = d / (1 + abs(p.info["z"]))
        mu1 = p.mu + 1
        pred_mu = x0 * x0
        pred_gap = 2 * x0 * delta + delta * delta
        curv_gap = curv * (2 * x0 * shifted_gap + shifted_gap**2)
        rows.append(
            {
                "delta": delta,
                "x0": x0,
                "mu_plus_1": mu1,
                "predicted_mu_plus_1": pred_mu,
                "mu_ratio": mu1 / pred_mu,
                "gap": p.delta,
                "predicted_gap": pred_gap,
                "gap_ratio": p.delta / pred_gap,
                "shifted_gap": shifted_gap,
                "curvature_gap": curv_gap,
                "curvature_gap_ratio": p.delta / curv_gap,
                "curvature_mu_ratio": mu1 / (curv * pred_mu),
            }
        )
    return rows


def relative_error(ratio: float) -> float:
    return abs(ratio - 1.0)


def monotone_improving(errors) -> bool:
    """True when relative errors do not increase along a decreasing-delta grid."""
    e = list(errors)
    return all(b <= a + 1e-15 for a, b in zip(e, e[1:]))


def table_csv(rows: list[dict], columns=OPTIMALITY_COLUMNS) -> str:
    lines = [",".join(columns)]
    lines += [",".join(_fmt(r[c]) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


__all__ = [
    "CSV_COLUMNS",
    "FAMILIES",
    "FitResult",
    "OPTIMALITY_COLUMNS",
    "SweepConfig",
    "evaluate_point",
    "fit_loglog",
    "log_factor",
    "monotone_improving",
    "optimality_gap_table",
    "relative_error",
    "run_grid",
    "sweep_degree",
    "sweep_details",
    "sweep_queries",
    "table_csv",
    "thread_count",
]
