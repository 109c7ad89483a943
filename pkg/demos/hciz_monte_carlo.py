"""Monte Carlo over Haar unitaries against the closed-form HCIZ integral.

Every integrand sample must lie in the Schur-Horn interval; hciz_mc raises
if one does not.
"""

import numpy as np

from preserver_lab import hciz

rng = np.random.default_rng(1)
for i in range(5):
    N = int(rng.integers(2, 5))
    a, x = rng.uniform(0, 2, N), rng.uniform(0, 2, N)
    exact = hciz.hciz_exact(a, x)
    est = hciz.hciz_mc(a, x, 100_000, seed=i)
    z = (est.mean - exact) / est.stderr
    print(f"N={N}  exact={exact:.6f}  mc={est.mean:.6f} +- {est.stderr:.1e}  z={z:+.2f}")
