"""Populate the (s2, s4) moment plane with random qutrit-pair states.

Random pure states of each Schmidt rank plus random mixed states of
several ranks fill the physical region.  Every point must land between
the lower parabola (family D) and the upper A-B-C envelope; counting
points per certified-dimensionality band shows how much of the plane
each criterion slice occupies.
"""

from collections import Counter

from dimcert import classify_point, outer_boundary_d3, region_scatter

rows = region_scatter(3, 2000, seed=12)

out_of_region = 0
bands = Counter()
kinds = Counter()
for s2, s4, kind, rank in rows:
    kinds[kind] += 1
    if s4 < 5 * s2 * s2 / 12 - 1e-9:
        out_of_region += 1
    env, _ = outer_boundary_d3(min(s2, 2.0))
    if s4 > env + 1e-9:
        out_of_region += 1
    bands[classify_point(s2, s4, 3).certified_lower_bound] += 1

print(f"{len(rows)} sampled states "
      f"({kinds['pure']} pure, {kinds['mixed']} mixed)")
print(f"points outside the physical region: {out_of_region}")
print()
print("certified lower bound from exact moments:")
for bound in sorted(bands):
    n = bands[bound]
    print(f"  bound {bound}: {n:5d}  ({100 * n / len(rows):.1f}%)")
