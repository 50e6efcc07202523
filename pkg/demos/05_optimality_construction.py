"""The quintic map and the spectrum it produces.

g(x) = 19/6 x - 16/3 x^3 + 8/3 x^5 has g(-1/2) = -1 and g'(-1/2) = 0, so a
ground energy at -1/2 + x0 lands at -1 + O(x0^2). The leading-order forecast
mu' + 1 ~ x0^2 and gap ~ 2 x0 delta + delta^2 omits the curvature constant
g''(-1/2)/2 = 14/3; the table shows both comparisons.
"""

from fractions import Fraction

from nffprep import QUINTIC
from nffprep.bench import OPTIMALITY_COLUMNS, optimality_gap_table

print("g(-1/2) =", QUINTIC.exact(Fraction(-1, 2)), " g'(-1/2) =", QUINTIC.derivative_exact(Fraction(-1, 2)))
print("curvature g''(-1/2)/2 =", QUINTIC.curvature)

rows = optimality_gap_table([2.0**-j for j in range(4, 9)], 1.0)
cols = ("delta", "mu_ratio", "gap_ratio", "curvature_mu_ratio", "curvature_gap_ratio")
assert set(cols) <= set(OPTIMALITY_COLUMNS)
print(" ".join(f"{c:>20}" for c in cols))
for row in rows:
    print(" ".join(f"{row[c]:20.6f}" for c in cols))
