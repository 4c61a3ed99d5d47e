"""Walkthrough: distances in F_q^d, the remainder bound, and G-distance sets.

Builds small fields, counts pair distances exactly, decomposes the counts
into main term plus remainder, and asks which distances support a 4-cycle.
"""

from distgraphs import (
    all_points,
    cycle_graph,
    distance_graph,
    distance_histogram,
    graph_distance_set,
    ir_check,
    make_field,
)

# ---------------------------------------------------------------------------
# The plane over F_3: nine points, norms x^2 + y^2.
f3 = make_field(3, 1)
plane = all_points(f3, 2)
hist = distance_histogram(plane)
print("F_3^2 distance counts (ordered pairs, diagonal included):")
for t in range(3):
    print(f"  nu({t}) = {hist.nu(t)}")
print(f"  total = {hist.total()} = |E|^2 = {len(plane) ** 2}")

# ---------------------------------------------------------------------------
# Each nonzero count splits as |E|^2/q plus a remainder bounded by
# 2 q^{(d-1)/2} |E|; the check is exact integer arithmetic.
report = ir_check(plane)
print("\nmain-term decomposition over F_3^2:")
for rec in report.records:
    print(
        f"  t={rec.t}: nu={rec.nu} = {rec.main} + ({rec.remainder}); "
        f"bound {rec.bound:.2f}, slack {rec.slack:.2f}"
    )
print(f"  all within bound: {report.passed}")

# ---------------------------------------------------------------------------
# The unit-distance graph on the full plane is 4-regular: every point
# sees the 4 points of the unit sphere around it.
g1 = distance_graph(plane, 1)
print(f"\nt=1 distance graph: {g1.n} vertices, {g1.edge_count} edges, degrees {set(g1.degrees())}")

# ---------------------------------------------------------------------------
# An extension field works the same way; here F_9 = F_3[X]/(X^2+1).
f9 = make_field(3, 2)
print(f"\nF_9 modulus coefficients (low to high): {f9.modulus}")
small = all_points(f9, 2)
print(f"F_9^2 has {len(small)} points; remainder bound holds: {ir_check(small).passed}")

# ---------------------------------------------------------------------------
# Which t admit a 4-cycle at distance t?  On the full plane over F_9,
# every nonzero t does.
ds = graph_distance_set(small, cycle_graph(4))
print(f"\nDelta_C4(F_9^2) covers all nonzero t: {ds.covers_all_nonzero}")
t0 = sorted(ds.contained)[0]
print(f"example witness at t={t0}: vertex indices {ds.witnesses[t0].mapping}")
