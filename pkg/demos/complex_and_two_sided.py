"""Why the two-sided and complex domains need more care than (0, rho).

On (-rho, rho) a polynomial with a negative top coefficient can fail at any
multiplier t; on a complex disc a root of a Schur polynomial specialization
gives a vector where x^M escapes the span of the lower powers.
"""

from preserver_lab import preserver as pv

for k, t in [(1, 1.0), (1, 1e6), (2, 1e6)]:
    print(f"k={k}, t={t:g}: u^T p[A] u = {pv.two_sided_witness(k, t, 2.0)}")

for n in [(0, 2), (0, 1, 3), (1, 2)]:
    ce = pv.complex_counterexample(n, 1.0)
    if ce is None:
        print(f"n={n}: shifted (0, ..., N-1), no counterexample exists")
    else:
        print(f"n={n}: z0={ce.z0:.6f}, M={ce.M}, |det|={abs(ce.determinant):.3e}")
