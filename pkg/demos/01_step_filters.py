"""Step filters: how many Chebyshev terms a sharp threshold costs.

A step of width delta centred at eta needs degree ~ sqrt(1 - eta^2) / delta,
so a step pushed against the spectral edge (eta = -1 + delta) is much cheaper
than one in the middle of [-1, 1].
"""

import numpy as np

from nffprep import make_step_filter, odd_part
from nffprep.bench import fit_loglog, log_factor
from nffprep.filters import dense_error

# %% certified degree against the error actually measured on the dense grid
eps = 1e-3
print(f"{'delta':>10} {'eta':>8} {'degree':>7} {'dense error':>12}")
for delta in (1 / 8, 1 / 32, 1 / 128):
    for eta in (0.0, -1 + delta):
        f = make_step_filter(eps, delta, eta)
        print(f"{delta:10.5f} {eta:8.4f} {f.degree:7d} {dense_error(f):12.2e}")
# the certificate is conservative: the measured error sits far below eps

# %% degree scaling, centred vs edge
grid = np.array([2.0**-j for j in range(3, 10)])
for label, eta in (("centred", np.zeros_like(grid)), ("edge", -1 + grid)):
    degrees = np.array([make_step_filter(eps, d, e).degree for d, e in zip(grid, eta)], dtype=float)
    fit = fit_loglog(grid, degrees / log_factor(grid, eta, eps), True)
    print(f"{label:8s} slope {fit.slope:+.3f}")

# %% parity: quantum signal processing wants a definite-parity polynomial
f = make_step_filter(eps, 1 / 16, -0.75)
p = odd_part(f)
x = np.linspace(-1, 1, 9)
print("odd part antisymmetric:", np.allclose(p(x), -p(-x)))
print("odd part near -1 at the step's low side:", float(p(np.array([-0.9]))[0]))
