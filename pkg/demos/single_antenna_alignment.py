"""Building and checking an alignment plan for the chain network.

The symmetric point (1/3, 1/3, 1/3, 1/3) sits on every facet.  The plan
spreads it over a time expansion of length tau and the fraction of
columns per message creeps towards 1/3 as l grows.
"""

from fractions import Fraction as F

from dofnet import DemandSpec, dof_fraction, make_plan, run_verification, verify_plan_symbolic
from dofnet.errors import OutOfRegionError

spec = DemandSpec(K=4, M=1, demands=({1, 2}, {2, 3}, {3, 4}))
point = (F(1, 3),) * 4

print(" l   tau   columns per transmitter   |V_k|/tau")
for l in range(1, 5):
    plan = make_plan(spec, point, l=l)
    sizes = [len(c) for c in plan.columns]
    fracs = [str(dof_fraction(plan, k)) for k in range(1, 5)]
    print(f"{l:2d} {plan.tau:5d}   {str(sizes):24s}  {', '.join(fracs)}")
    assert verify_plan_symbolic(plan).passed

print("\nnumeric check over a handful of seeds, l = 2")
for seed in range(5):
    r = run_verification(spec, point, l=2, seed=seed)
    worst = max(x for _, x in r.alignmentResiduals)
    print(f"  seed {seed}: overall {r.passed}, worst alignment residual {worst:.1e}, "
          f"smallest receiver margin {min(r.rxRankMargins):.3f}")

# An unequal point needs two base vectors for the strongest message.
r = run_verification(spec, (F(1, 2), F(1, 4), F(1, 4), F(1, 4)), l=1)
print(f"\n(1/2, 1/4, 1/4, 1/4): tau {r.plan.tau}, dbar {r.plan.ip.dbar}, overall {r.passed}")

# Outside the region the column budget breaks at two receivers.
outside = (F(1, 2), F(1, 2), F(1, 2), 0)
try:
    run_verification(spec, outside)
except OutOfRegionError as exc:
    print(f"\n{exc}")
r = run_verification(spec, outside, enforce_region=False)
for pre in r.verdict["preconditions"]:
    print(f"  receiver {pre['receiver']}: {pre['detail']}")
