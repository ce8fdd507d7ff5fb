"""A tour of the DoF region for a small chain of overlapping demands.

Four single-antenna transmitters, three receivers: receiver 1 wants
messages {1,2}, receiver 2 wants {2,3}, receiver 3 wants {3,4}.
"""

from fractions import Fraction as F

from dofnet import DemandSpec, contains, enumerate_vertices, expand_region, max_sum_dof
from dofnet.rational import fmt_point

spec = DemandSpec(K=4, M=1, demands=({1, 2}, {2, 3}, {3, 4}))
region = expand_region(spec)

print("Half-spaces (sum over the support <= M):")
for q in region.inequalities:
    origin = ", ".join(f"rx {j} / msg {i}" for j, i in q.provenance)
    print(f"  {sorted(q.support)} <= {q.bound}    ({origin})")

# Each receiver contributes one half-space per undesired message; the chain
# has six of them but only four distinct supports.
vs = enumerate_vertices(region)
print(f"\n{len(vs.vertices)} vertices out of {vs.candidates} candidate bases:")
for v in vs.vertices:
    print("  (" + ", ".join(fmt_point(v)) + ")")

total, arg = max_sum_dof(region)
print(f"\nLargest total DoF: {total} at ({', '.join(fmt_point(arg))})")

# A few points on and off the region
for point in [(F(1, 3),) * 4, (F(1, 2), F(1, 2), 0, 0), (F(1, 2), F(1, 2), F(1, 2), 0)]:
    m = contains(region, point)
    where = "inside" if m.inside else "outside"
    print(f"  {fmt_point(point)}: {where}, tight {[sorted(s) for s in m.tight]},"
          f" violated {[sorted(s) for s in m.violated]}")
