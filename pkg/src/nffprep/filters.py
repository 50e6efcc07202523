"""Spectral filters built from truncated Chebyshev series of shifted error functions.

Sign convention
---------------
The step filter approximates ``erf(k (x - eta))``: it sits near **-1 below** the
step and near **+1 above** it. With ``eta`` placed between the ground energy
``mu`` and ``mu + delta`` this gives ``p(mu) ~ -1``, and the odd part
``(p(x) - p(-x)) / 2`` sends the ground state to ``~ -1`` and every other
eigenvalue into ``[-O(eps), 1]``. The band-pass filter dips to ``-1`` inside
its band and vanishes outside.

Every returned series satisfies ``|p| <= 1`` on a dense grid of [-1, 1]. When
truncation overshoots, the series is divided by its dense-grid maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import erf

from .chebyshev import (
    ChebyshevSeries,
    DegreeEstimate,
    certified_degree,
    dense_grid,
    erf_steepness,
    expand,
    lemma1_degree,
    truncation_bound,
)
from .errors import DomainError

KINDS = ("step", "step_odd", "bandpass", "bandpass_odd")


@dataclass(frozen=True, eq=False)
class FilterSpec:
    epsilon: float
    delta: float
    eta: float
    k: float
    series: ChebyshevSeries
    kind: str
    certified_error: float
    rescale: float = 1.0

    @property
    def degree(self) -> int:
        return self.series.degree

    def __call__(self, x):
        return self.series(x)

    def target(self, x):
        """The analytic function the series approximates (after the sign convention)."""
        x = np.asarray(x, dtype=float)
        if self.kind.startswith("step"):
            f = erf(self.k * (x - self.eta))
            if self.kind == "step_odd":
                f = 0.5 * (f - erf(self.k * (-x - self.eta)))
            return f
        f = _bandpass(self.k, self.eta, self.delta)
        v = f(x)
        if self.kind == "bandpass_odd":
            v = 0.5 * (v - f(-x))
        return v


def _bounded(series: ChebyshevSeries) -> tuple[ChebyshevSeries, float]:
    peak = series.max_abs()
    if peak <= 1.0:
        return series, 1.0
    # a hair above the grid maximum so values between grid points stay inside
    s = peak * (1 + 1e-14)
    return series.scaled(1.0 / s), s


def make_step_filter(epsilon: float, delta: float, eta: float) -> FilterSpec:
    """Truncated Chebyshev series of ``erf(k (x - eta))`` accurate to ``epsilon``.

    ``delta`` is the transition width: the filter is within ``O(epsilon)`` of -1
    for ``x <= eta - delta/2`` and of +1 for ``x >= eta + delta/2``. The usual
    placement for ground-state work is ``eta = mu + delta/2``.
    """
    est = lemma1_degree(epsilon, delta, eta)
    k = est.k
    series = expand(lambda x: erf(k * (x - eta)), est.degree)
    series, s = _bounded(series)
    return FilterSpec(epsilon, delta, eta, k, series, "step", est.certified_error, s)


def odd_part(p: FilterSpec) -> FilterSpec:
    """``(p(x) - p(-x)) / 2`` of a step or band-pass filter.

    Already-odd series (step at ``eta = 0``) are returned with the odd kind and
    identical coefficients.
    """
    if p.kind not in ("step", "bandpass"):
        raise DomainError(f"odd_part expects a step or bandpass filter, got {p.kind!r}")
    return replace(p, series=p.series.odd_part(), kind=p.kind + "_odd")


def _bandpass(k: float, eta: float, delta1: float):
    def f(x):
        return 0.5 * (erf(k * (x - eta - delta1 / 2)) - erf(k * (x - eta + delta1 / 2)))

    return f


def bandpass_degrees(epsilon: float, delta1: float, eta: float) -> tuple[DegreeEstimate, DegreeEstimate]:
    """Certified degrees of the two shifted error functions forming the band edges."""
    k = erf_steepness(epsilon, delta1)
    return certified_degree(epsilon, k, eta - delta1 / 2), certified_degree(epsilon, k, eta + delta1 / 2)


def make_bandpass_filter(epsilon: float, delta1: float, eta: float) -> FilterSpec:
    """Band-pass filter ``(erf k(x - eta - d/2) - erf k(x - eta + d/2)) / 2``.

    ``~ -1`` at the band centre ``eta``, ``O(epsilon)`` for ``|x - eta| >= delta1``.
    The degree is the larger of the two edge certificates; each edge enters
    with weight 1/2, so the combined certificate is their mean.
    """
    if not 0 < epsilon < 0.5:
        raise DomainError("epsilon must lie in (0, 1/2)")
    if not delta1 > 0:
        raise DomainError("delta1 must be positive")
    # equality is admitted: both edges stay inside (-1, 1)
    if not abs(eta) + delta1 <= 1:
        raise DomainError("band must satisfy |eta| + delta1 <= 1")
    left, right = bandpass_degrees(epsilon, delta1, eta)
    n = max(left.degree, right.degree)
    k = left.k
    series = expand(_bandpass(k, eta, delta1), n)
    series, s = _bounded(series)
    cert = 0.5 * (truncation_bound(left.ellipse, n) + truncation_bound(right.ellipse, n))
    return FilterSpec(epsilon, delta1, eta, k, series, "bandpass", cert, s)


def identity_filter() -> FilterSpec:
    """``p(x) = x`` wrapped as an odd filter; handy as a neutral element."""
    return FilterSpec(0.0, float("nan"), 0.0, float("nan"), ChebyshevSeries.identity(), "step_odd", 0.0)


def dense_error(p: FilterSpec) -> float:
    """Max deviation of the filter from its analytic target over the dense grid."""
    x = dense_grid()
    return float(np.max(np.abs(p.series.dense_values() - p.target(x))))


def plateau_error(p: FilterSpec) -> float:
    """Max distance to the ideal -1/+1 step outside the transition window ``|x - eta| < delta/2``."""
    if p.kind != "step":
        raise DomainError("plateau_error is defined for step filters")
    x = dense_grid()
    mask = np.abs(x - p.eta) >= p.delta / 2
    ideal = np.where(x < p.eta, -1.0, 1.0)
    values = p.series.dense_values()
    return float(np.max(np.abs(values[mask] - ideal[mask]))) if mask.any() else 0.0


def stage_one_window(mu: float, delta: float) -> tuple[float, float]:
    """Transition width and centre of the gap-amplifying step for a ``(mu, delta)`` problem.

    The default is width ``delta`` centred at ``mu + delta/2``. When that centre
    would sit closer than one width to -1 the window shrinks to
    ``(mu + 1 + delta) / 2`` and slides right, keeping the ground energy on the
    lower plateau and ``mu + delta`` on the upper one.
    """
    if not delta > 0:
        raise DomainError("gap must be positive")
    width = min(delta, 0.5 * (mu + 1 + delta))
    eta = mu + delta - width / 2
    if not math.isfinite(eta) or eta + width / 2 > 1:
        raise DomainError("ground window leaves [-1, 1]")
    return width, eta
