"""Weak majorization versus the normalized generalized Vandermonde inequality.

For a majorizing pair the inequality holds at every u in [1, inf)^N; for an
incomparable pair the converse search finds a point where it fails.
"""

from preserver_lab import order

for m, n in [((0, 3), (1, 2)), ((0, 1), (0, 3)), ((0.5, 2.5, 4), (1, 2, 3.5))]:
    verdict = order.weak_majorize(m, n)
    res = order.cgs_converse_search(m, n, budget=300)
    print(f"m={m} n={n}: {verdict}; search -> {res.verdict} after {res.probes} probes", end="")
    print(f" at u={res.u} ({res.probe})" if res.u else "")
