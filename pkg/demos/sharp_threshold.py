"""Where does 1 + x + c' x^2 stop preserving positivity on 2 x 2 matrices
with entries in (0, 1)?

The sharp constant says |c'| <= 1/5.  We compare it with a brute-force grid
supremum of the rank-one ratio, then let the certifier probe both sides.
"""

import numpy as np

from preserver_lab import preserver as pv
from preserver_lab import thresholds

n, c, M, rho = (0, 1), (1.0, 1.0), 2, 1.0
C = thresholds.sharp_C(n, c, M, rho).value
print(f"sharp constant C = {C}")

g = np.linspace(0, 1, 1001)[1:]
u1, u2 = np.meshgrid(g, g)
print(f"grid supremum of the rank-one ratio = {((u1 * u2) ** 2 + (u1 + u2) ** 2).max():.6f}")

for scale in (0.9, 1.0, 1.02, 1.2):
    f = pv.PowerSum.from_pairs((0, 1, 2), (1, 1, -scale / C))
    rep = pv.certify_preserver(f, 2, rho)
    line = f"c' = -{scale}/C: {rep.verdict}"
    if rep.witness is not None:
        line += f" (lambda_min {rep.witness.min_eigenvalue:.3e} from {rep.witness.source})"
    print(line)
