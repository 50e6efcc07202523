"""Chebyshev expansion with certified truncation error on [-1, 1].

The certificate is the Bernstein-ellipse bound ``2 M rho^-n / (rho - 1)`` for a
function analytic inside the ellipse ``E_rho`` and bounded there by ``M``.
For the shifted error function ``erf(k (x - eta))`` the bound ``M <= exp(alpha0)``
has a closed form; :func:`lemma1_degree` picks ``rho`` so that ``alpha0 = 1`` and
then the smallest degree whose certificate meets the target error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.fft
from numpy.polynomial import chebyshev as C
from scipy.optimize import brentq

from .errors import DomainError, NonFiniteSample

PARITY_ATOL = 1e-12
DENSE_GRID_POINTS = 2**18 + 1  # max spacing pi/2^18 < 1.2e-5


@dataclass(frozen=True, eq=False)
class ChebyshevSeries:
    """Real coefficients ``a_0..a_n`` in the Chebyshev basis with parity tag."""

    coefficients: np.ndarray
    parity: str = "none"

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float).ravel()
        if c.size == 0:
            c = np.zeros(1)
        if not np.all(np.isfinite(c)):
            raise DomainError("non-finite Chebyshev coefficient")
        if self.parity not in ("even", "odd", "none"):
            raise DomainError(f"unknown parity {self.parity!r}")
        if self.parity == "even":
            c[1::2] = 0.0
        elif self.parity == "odd":
            c[0::2] = 0.0
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coefficients)
        return int(nz[-1]) if nz.size else 0

    def __call__(self, x):
        return C.chebval(x, self.coefficients)

    def __len__(self):
        return len(self.coefficients)

    def scaled(self, factor: float) -> ChebyshevSeries:
        return ChebyshevSeries(self.coefficients * factor, self.parity)

    def odd_part(self) -> ChebyshevSeries:
        """``(p(x) - p(-x)) / 2``: T_j has parity (-1)^j, so drop the even terms."""
        return ChebyshevSeries(self.coefficients, "odd")

    def even_part(self) -> ChebyshevSeries:
        return ChebyshevSeries(self.coefficients, "even")

    def dense_values(self, points: int = DENSE_GRID_POINTS) -> np.ndarray:
        """Values on :func:`dense_grid`, by one DCT-I (exact for any degree)."""
        return dense_values(self.coefficients, points)

    def max_abs(self, points: int = DENSE_GRID_POINTS) -> float:
        return float(np.max(np.abs(self.dense_values(points))))

    @classmethod
    def identity(cls) -> ChebyshevSeries:
        return cls([0.0, 1.0], "odd")

    @classmethod
    def constant(cls, value: float) -> ChebyshevSeries:
        return cls([value], "even")


def dense_grid(points: int = DENSE_GRID_POINTS) -> np.ndarray:
    """Chebyshev-Lobatto points ``cos(pi j / (points - 1))`` in ascending order, endpoints included."""
    if points < 2:
        raise DomainError("dense grid needs at least two points")
    m = points - 1
    return np.cos(np.pi * np.arange(m, -1, -1) / m)


def dense_values(coefficients, points: int = DENSE_GRID_POINTS) -> np.ndarray:
    """Evaluate a Chebyshev series on :func:`dense_grid` in ``O(points log points)``.

    On ``theta_j = pi j / M`` the mode ``cos(k theta)`` aliases to index
    ``k mod 2M`` reflected into ``[0, M]``, so higher coefficients are folded in
    exactly before a single DCT-I.
    """
    c = np.asarray(coefficients, dtype=float)
    m = points - 1
    if m < 1:
        raise DomainError("dense grid needs at least two points")
    r = np.arange(c.size) % (2 * m)
    r = np.where(r > m, 2 * m - r, r)
    a = np.bincount(r, weights=c, minlength=m + 1)
    # DCT-I: y_j = x_0 + (-1)^j x_M + 2 sum_{k=1}^{M-1} x_k cos(pi k j / M)
    a[1:m] *= 0.5
    y = scipy.fft.dct(a, type=1) if m > 1 else np.array([a[0] + a[1], a[0] - a[1]])
    return y[::-1]


def _detect_parity(c: np.ndarray) -> str:
    if c.size > 1 and np.all(np.abs(c[1::2]) < PARITY_ATOL):
        return "even"
    if np.all(np.abs(c[0::2]) < PARITY_ATOL):
        return "odd"
    return "none"


def quadrature_nodes(degree: int) -> int:
    """Node count for :func:`expand`: ``2 (degree + 1)`` rounded up to a power of two."""
    return 1 << max(0, (2 * (degree + 1) - 1).bit_length())


def expand(f: Callable[[np.ndarray], np.ndarray], degree: int) -> ChebyshevSeries:
    """Chebyshev coefficients of ``f`` up to ``degree`` by Chebyshev-Gauss quadrature.

    ``f`` is called once on the vector of quadrature nodes. Coefficients whose
    parity pattern is zero to ``1e-12`` are zeroed and the series tagged.
    """
    if degree < 0:
        raise DomainError("degree must be non-negative")
    m = quadrature_nodes(degree)
    nodes = np.cos(np.pi * (np.arange(m) + 0.5) / m)
    samples = np.asarray(f(nodes), dtype=float)
    if samples.shape != nodes.shape:
        samples = np.broadcast_to(samples, nodes.shape).astype(float)
    if not np.all(np.isfinite(samples)):
        raise NonFiniteSample("function returned a non-finite value at a quadrature node")
    # DCT-II: y_k = 2 sum_j f_j cos(pi k (2j+1) / 2m)
    c = scipy.fft.dct(samples, type=2) / m
    c[0] *= 0.5
    c = c[: degree + 1]
    if len(c) < degree + 1:
        c = np.pad(c, (0, degree + 1 - len(c)))
    return ChebyshevSeries(c, _detect_parity(c))


@dataclass(frozen=True)
class BernsteinEllipse:
    """Ellipse parameter ``rho > 1`` and a bound on ``|f|`` over ``E_rho``."""

    rho: float
    max_modulus: float

    def __post_init__(self):
        if not self.rho > 1:
            raise DomainError(f"Bernstein ellipse needs rho > 1, got {self.rho!r}")
        if not self.max_modulus >= 0:
            raise DomainError("max_modulus must be non-negative")

    def points(self, samples: int = 10_000) -> np.ndarray:
        theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
        r = self.rho
        return 0.5 * (r * np.exp(1j * theta) + np.exp(-1j * theta) / r)


@dataclass(frozen=True)
class DegreeEstimate:
    degree: int
    ellipse: BernsteinEllipse
    a_param: float
    certified_error: float
    k: float = field(default=float("nan"))
    eta: float = field(default=float("nan"))


def truncation_bound(ellipse: BernsteinEllipse, degree: int) -> float:
    """``2 M rho^-n / (rho - 1)``."""
    if degree < 1:
        raise DomainError("degree must be at least 1")
    rho, m = ellipse.rho, ellipse.max_modulus
    if m == 0:
        return 0.0
    log_bound = math.log(2 * m) - degree * math.log(rho) - math.log(rho - 1)
    return math.exp(log_bound)


def erf_exponent(k: float, eta: float, rho: float) -> float:
    """Maximum over ``E_rho`` of ``Re(-(k (z - eta))^2)`` in closed form."""
    r2 = rho * rho
    return k * k / (4 * r2 * (1 + r2 * r2)) * (r2 - 1) ** 2 * (1 - 2 * eta * eta * r2 + r2 * r2)


def erf_ellipse_bound(k: float, eta: float, rho: float) -> BernsteinEllipse:
    """Ellipse with ``M = exp(alpha0)`` bounding ``|erf(k (z - eta))|`` on ``E_rho``."""
    if not k > 0:
        raise DomainError("k must be positive")
    if not abs(eta) < 1:
        raise DomainError("|eta| must be < 1")
    if not rho > 1:
        raise DomainError("rho must be > 1")
    alpha0 = erf_exponent(k, eta, rho)
    return BernsteinEllipse(rho, math.exp(alpha0) if alpha0 < 709 else math.inf)


def erf_steepness(epsilon: float, width: float) -> float:
    """``k = (sqrt 2 / width) log^(1/2)(1 / (2 pi eps^2))``; within ``eps`` of a step for ``|x| >= width/2``."""
    log_term = math.log(1.0 / (2 * math.pi * epsilon * epsilon))
    if not log_term > 0:
        raise DomainError(f"epsilon={epsilon!r} too large: log(1/(2 pi eps^2)) must be positive")
    return math.sqrt(2.0) / width * math.sqrt(log_term)


def rho_for_unit_exponent(k: float, eta: float) -> float:
    """Solve ``alpha0(rho) = 1``; ``alpha0`` increases monotonically from 0 at ``rho = 1``."""
    f = lambda r: erf_exponent(k, eta, r) - 1.0  # noqa: E731
    hi = 1.0 + 1.0 / (k * math.sqrt(1 - eta * eta))
    while f(hi) < 0:
        hi = 1.0 + 2.0 * (hi - 1.0)
    return brentq(f, 1.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def certified_degree(epsilon: float, k: float, eta: float) -> DegreeEstimate:
    """Smallest ``n`` whose ellipse certificate for ``erf(k (x - eta))`` is ``<= epsilon``.

    Valid for any ``|eta| < 1``; callers enforce stricter hypotheses.
    """
    rho = rho_for_unit_exponent(k, eta)
    ellipse = erf_ellipse_bound(k, eta, rho)
    # closed-form guess, then walk to the exact smallest degree
    guess = math.log(2 * ellipse.max_modulus / (epsilon * (rho - 1))) / math.log(rho)
    lo, hi = max(1, math.floor(guess) - 2), max(1, math.ceil(guess) + 2)
    while truncation_bound(ellipse, hi) > epsilon:
        hi *= 2
    while lo > 1 and truncation_bound(ellipse, lo) <= epsilon:
        lo //= 2
    # invariant: bound(hi) <= eps; bound(lo) > eps unless lo == 1
    if truncation_bound(ellipse, lo) <= epsilon:
        hi = lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if truncation_bound(ellipse, mid) <= epsilon:
            hi = mid
        else:
            lo = mid
    return DegreeEstimate(
        degree=hi,
        ellipse=ellipse,
        a_param=rho - 1.0,
        certified_error=truncation_bound(ellipse, hi),
        k=k,
        eta=eta,
    )


def lemma1_degree(epsilon: float, delta: float, eta: float) -> DegreeEstimate:
    """Degree and certificate for approximating ``erf(k (x - eta))`` to ``epsilon``.

    ``k`` makes the error function an ``epsilon``-accurate step outside a window
    of width ``delta`` around ``eta``. Requires ``0 < epsilon < 1/2``,
    ``0 < delta < 1`` and ``|eta| <= 1 - delta``.
    """
    if not 0 < epsilon < 0.5:
        raise DomainError("epsilon must lie in (0, 1/2)")
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1)")
    if not abs(eta) <= 1 - delta:
        raise DomainError(f"|eta| = {abs(eta)!r} exceeds 1 - delta = {1 - delta!r}")
    k = erf_steepness(epsilon, delta)
    return certified_degree(epsilon, k, eta)


def lemma1_scale(epsilon: float, delta: float, eta: float, log_form: str = "abs") -> float:
    """The asymptotic degree scale ``sqrt(1-|eta|)/delta * log(sqrt(1-|eta|)/delta) * log^{3/2}(1/eps)``.

    ``log_form='sq'`` uses ``sqrt(1 - eta^2)`` inside the square root and the log.
    """
    s = math.sqrt(1 - abs(eta)) if log_form == "abs" else math.sqrt(1 - eta * eta)
    r = s / delta
    return r * math.log(r) * math.log(1 / epsilon) ** 1.5
