"""Excited states with a band-pass filter.

An isolated eigenvalue eta with clearance delta1 is selected by an odd
band-pass built from two shifted steps; stage 2 then cleans up at -1/2.
"""

import numpy as np

from nffprep import BandNotIsolated, defect_lattice, prepare_excited_state

p = defect_lattice(8, 0.5, 1)
w, v = np.linalg.eigh(p.operator.matrix)
print("lowest levels:", np.round(w[:5], 5))

ansatz = np.random.default_rng(7).standard_normal(p.dim)  # the product state misses level 1
level = 1
eta = float(w[level])
delta1 = min(np.min(np.abs(np.delete(w, level) - eta)), 2 * abs(eta), 1 - abs(eta))
for eps in (1e-2, 1e-4):
    r = prepare_excited_state(p, eta, delta1, ansatz=ansatz, epsilon=eps)
    print(
        f"level {level} eta={eta:+.5f} delta1={delta1:.5f} eps={eps:.0e} "
        f"band-pass degree={r.queries_stage1} (single-step estimate {r.parameters['lemma_degree']}) "
        f"fidelity={r.fidelity:.10f}"
    )

# %% level 2 is degenerate: no band of positive width isolates one vector
try:
    prepare_excited_state(p, float(w[2]), 0.02, ansatz=ansatz)
except BandNotIsolated as exc:
    print("level 2 refused:", exc)
