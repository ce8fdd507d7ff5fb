"""Symbolic interference-alignment plans over a time-expanded channel.

A plan never touches numbers other than integers: it lists the alignment
constraints ``(m, n, j)`` ("message n aligns into message m at receiver j"),
the time expansion ``tau`` and, for every transmitter, the beamforming
columns as ``(base vector index, exponent vector)`` pairs.  A column stands
for ``prod_c T_c ** alpha_c @ w_i``.

Plans live in *plan space*: messages renumbered so that the DoF vector is
nonincreasing.  ``IntegerizedPoint.perm`` maps plan-space indices back to
the caller's numbering and all ``*_report`` helpers use the original
numbering.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .demand import compute_grouping
from .errors import OutOfRegionError, SpecError, TauCapError
from .rational import fmt, fmt_point, to_point
from .region import contains, expand_region

DEFAULT_TAU_CAP = 20000


@dataclass(frozen=True, order=True)
class AlignmentConstraint:
    m: int
    n: int
    j: int

    def key(self):
        return (self.j, self.n)

    def as_list(self):
        return [self.m, self.n, self.j]


@dataclass(frozen=True, order=True)
class MultiAlignmentConstraint:
    m: int
    n: int
    p: int
    q: int
    j: int

    def key(self):
        return (self.j, self.n, self.p, self.q)

    def as_list(self):
        return [self.m, self.n, self.p, self.q, self.j]


@dataclass(frozen=True)
class IntegerizedPoint:
    """``kappa * d`` in nonincreasing order.

    ``perm[i]`` is the original (1-based) index of plan-space message
    ``i + 1``; ties keep their original order.
    """

    point: tuple
    dbar: tuple
    kappa: int
    perm: tuple

    @property
    def K(self):
        return len(self.dbar)

    @property
    def plan_point(self):
        return tuple(Fraction(v, self.kappa) for v in self.dbar)

    def to_original(self, values):
        """Reorder a plan-space per-message sequence into original order."""
        out = [None] * len(values)
        for new, old in enumerate(self.perm):
            out[old - 1] = values[new]
        return out


def integerize(point):
    point = to_point(point)
    kappa = math.lcm(*(v.denominator for v in point)) if point else 1
    scaled = [v.numerator * (kappa // v.denominator) for v in point]
    perm = tuple(sorted(range(1, len(point) + 1), key=lambda k: -scaled[k - 1]))
    dbar = tuple(scaled[k - 1] for k in perm)
    return IntegerizedPoint(point, dbar, kappa, perm)


def plan_space_spec(spec, ip):
    return spec.relabel(ip.perm)


def decode_sets(spec, grouped):
    """Per receiver: the messages it decodes and the interferer it aligns to.

    In grouped mode every receiver follows the prime receiver of its group.
    ``delta`` is ``None`` when nothing is left to align.
    """
    if grouped:
        grouping = compute_grouping(spec)
        sources = [grouping.prime_of(j) for j in range(1, spec.J + 1)]
    else:
        sources = list(range(1, spec.J + 1))
    out = []
    for src in sources:
        comp = spec.complement(src)
        out.append((spec.demands[src - 1], min(comp) if comp else None))
    return out


def build_constraints(spec, grouped=False):
    """Alignment constraints sorted by ``(j, n)``.

    ``spec`` must already be in plan space.  In grouped mode only prime
    receivers contribute.
    """
    if grouped:
        receivers = compute_grouping(spec).prime_receivers
    else:
        receivers = range(1, spec.J + 1)
    out = []
    for j in receivers:
        comp = spec.complement(j)
        if not comp:
            continue
        m = min(comp)
        out.extend(AlignmentConstraint(m, n, j) for n in sorted(comp) if n > m)
    return sorted(out, key=AlignmentConstraint.key)


def build_group_constraints(spec):
    """Group-based constraints: every receiver reuses its prime's alignment pattern.

    Receiver ``j`` in group ``g`` aligns the messages outside the group's
    maximal demand set into the smallest of them, through its own channels.
    For specs whose receivers are all prime this equals
    ``build_constraints(spec, grouped=True)``.
    """
    grouping = compute_grouping(spec)
    out = []
    for j in range(1, spec.J + 1):
        comp = spec.complement(grouping.prime_of(j))
        if not comp:
            continue
        m = min(comp)
        out.extend(AlignmentConstraint(m, n, j) for n in sorted(comp) if n > m)
    return sorted(out, key=AlignmentConstraint.key)


def lift_constraints(base, M):
    """Extend single-antenna constraints over ``(p, q)`` in ``{1..M}^2``."""
    out = [MultiAlignmentConstraint(c.m, c.n, p, q, c.j)
           for c in base for p in range(1, M + 1) for q in range(1, M + 1)]
    return sorted(out, key=MultiAlignmentConstraint.key)


def build_multi_constraints(spec, grouped=False):
    return lift_constraints(build_constraints(spec, grouped), spec.M)


def column_budget(spec, ip, grouped=False):
    """Receivers violating ``sum_{m in M_j} dbar_m + dbar_{delta_j} <= kappa M``.

    Returns a list of ``(receiver, used, available)`` for the violators;
    ``spec`` is in plan space.
    """
    bad = []
    for j, (want, delta) in enumerate(decode_sets(spec, grouped), start=1):
        used = sum(ip.dbar[m - 1] for m in want)
        if delta is not None:
            used += ip.dbar[delta - 1]
        if used > ip.kappa * spec.M:
            bad.append((j, used, ip.kappa * spec.M))
    return bad


def _check_region(spec, ip, grouped):
    region = expand_region(spec)
    # plan_point = dbar / kappa, so membership is an integer comparison
    limit = ip.kappa * spec.M
    if all(sum(ip.dbar[i - 1] for i in q.support) <= limit for q in region.inequalities):
        return
    member = contains(region, ip.plan_point)
    if not member.inside:
        budget = column_budget(spec, ip, grouped)
        raise OutOfRegionError(
            "point lies outside the DoF region; column budget fails at receiver(s) "
            + ", ".join(str(j) for j, _, _ in budget),
            violations=member.violated, budget_violations=budget)


@dataclass(frozen=True)
class BeamPlan:
    """Single-antenna plan; ``columns[k-1]`` lists ``(i, alpha)`` of transmitter k."""

    spec: object
    ip: IntegerizedPoint
    l: int
    constraints: tuple
    Gamma: int
    GammaK: tuple
    tau: int
    columns: tuple

    @property
    def K(self):
        return self.spec.K

    multi = False


@dataclass(frozen=True)
class MultiBeamPlan:
    """Multi-antenna plan.

    ``columns[k-1]`` lists ``(q, i, alpha)`` where ``alpha`` runs over
    ``branch_constraints(q)`` and carries absolute exponents, i.e. values
    inside the window starting at ``(q-1)(l+1)``.
    """

    spec: object
    ip: IntegerizedPoint
    l: int
    constraints: tuple
    GammaM: int
    GammaMq: int
    GammaMkq: tuple
    tau: int
    columns: tuple

    @property
    def K(self):
        return self.spec.K

    multi = True

    def branch_constraints(self, q):
        return tuple(c for c in self.constraints if c.q == q)


def build_plan(spec, ip, l, constraints, tau_cap=DEFAULT_TAU_CAP, allow_outside=False,
               grouped=False):
    """Beamforming columns for the single-antenna scheme.

    Transmitter ``k`` uses base vectors ``1..dbar_k``; the exponent of
    constraint ``(m, n, j)`` ranges over ``0..l`` when ``n > k`` and over
    ``0..l-1`` otherwise.  ``tau = kappa (l+1)**Gamma``.

    ``grouped`` only affects which column budget is reported when the
    point is rejected.
    """
    if l < 1:
        raise SpecError(f"l must be a positive integer, got {l}")
    if not allow_outside:
        _check_region(spec, ip, grouped)
    constraints = tuple(constraints)
    Gamma = len(constraints)
    K = spec.K
    GammaK = tuple(sum(1 for c in constraints if c.n <= k) for k in range(1, K + 1))
    tau = ip.kappa * (l + 1) ** Gamma
    if tau > tau_cap:
        raise TauCapError(tau, tau_cap)
    columns = []
    for k in range(1, K + 1):
        ranges = [range(l + 1) if c.n > k else range(l) for c in constraints]
        cols = [(i, alpha) for i in range(1, ip.dbar[k - 1] + 1)
                for alpha in itertools.product(*ranges)]
        columns.append(tuple(cols))
    return BeamPlan(spec, ip, l, constraints, Gamma, GammaK, tau, tuple(columns))


def build_multi_plan(spec, ip, l, constraints, tau_cap=DEFAULT_TAU_CAP, allow_outside=False,
                     grouped=False):
    """Beamforming columns for the multi-antenna scheme.

    Columns are split into ``M`` branches.  Branch ``q`` uses only the
    constraints with block index ``q``, with exponents in
    ``(q-1)(l+1) .. q(l+1)-1`` when ``n > k`` (one less at the top
    otherwise).  ``tau = kappa M**2 (l+1)**(Gamma^M / M)``.
    """
    M = spec.M
    if M < 2:
        raise SpecError("the multi-antenna plan needs M >= 2; use build_plan for M = 1")
    if l < 1:
        raise SpecError(f"l must be a positive integer, got {l}")
    if not allow_outside:
        _check_region(spec, ip, grouped)
    constraints = tuple(constraints)
    GammaM = len(constraints)
    GammaMq = GammaM // M
    K = spec.K
    # every branch holds the same (m, n, p, j) pattern, so Gamma^M_{k,q} is q-independent
    GammaMkq = tuple(sum(1 for c in constraints if c.q == 1 and c.n <= k)
                     for k in range(1, K + 1))
    tau = ip.kappa * M * M * (l + 1) ** GammaMq
    if tau > tau_cap:
        raise TauCapError(tau, tau_cap)
    branches = {q: [c for c in constraints if c.q == q] for q in range(1, M + 1)}
    columns = []
    for k in range(1, K + 1):
        cols = []
        for q in range(1, M + 1):
            lo = (q - 1) * (l + 1)
            ranges = [range(lo, lo + l + 1) if c.n > k else range(lo, lo + l)
                      for c in branches[q]]
            cols.extend((q, i, alpha) for i in range(1, ip.dbar[k - 1] + 1)
                        for alpha in itertools.product(*ranges))
        columns.append(tuple(cols))
    return MultiBeamPlan(spec, ip, l, constraints, GammaM, GammaMq, GammaMkq, tau,
                         tuple(columns))


def formula_column_counts(plan):
    """Closed-form column counts, independent of the generated lists."""
    l, dbar = plan.l, plan.ip.dbar
    if plan.multi:
        M = plan.spec.M
        g, gk = plan.GammaMq, plan.GammaMkq
        return tuple(dbar[k] * M * l ** gk[k] * (l + 1) ** (g - gk[k]) for k in range(plan.K))
    return tuple(dbar[k] * l ** plan.GammaK[k] * (l + 1) ** (plan.Gamma - plan.GammaK[k])
                 for k in range(plan.K))


def dof_fraction(plan, k):
    """``|V_k| / tau`` for plan-space message ``k`` (times ``M`` in multi mode).

    Multi-antenna transmitters send the same beam from each of their ``M``
    virtual antennas, so the message DoF is ``M |V_k| / tau``.
    """
    n = len(plan.columns[k - 1])
    if plan.multi:
        return Fraction(plan.spec.M * n, plan.tau)
    return Fraction(n, plan.tau)


@dataclass(frozen=True)
class SymbolicVerdict:
    passed: bool
    constraint: object = None
    column: object = None

    def __bool__(self):
        return self.passed


def verify_plan_symbolic(plan):
    """Check that every constraint maps columns of ``V_n`` onto columns of ``V_m``.

    For each constraint ``(m, n, j)`` and each column ``(i, alpha)`` of
    transmitter ``n``, bumping the constraint's exponent by one must give a
    column of transmitter ``m`` with the same base vector.  Multi-antenna
    plans are checked branch by branch.
    """
    if plan.multi:
        col_sets = [set(cols) for cols in plan.columns]
        for q in range(1, plan.spec.M + 1):
            branch = plan.branch_constraints(q)
            for pos, c in enumerate(branch):
                targets = col_sets[c.m - 1]
                for col in plan.columns[c.n - 1]:
                    if col[0] != q:
                        continue
                    _, i, alpha = col
                    bumped = alpha[:pos] + (alpha[pos] + 1,) + alpha[pos + 1:]
                    if (q, i, bumped) not in targets:
                        return SymbolicVerdict(False, c, col)
        return SymbolicVerdict(True)

    col_sets = [set(cols) for cols in plan.columns]
    for pos, c in enumerate(plan.constraints):
        targets = col_sets[c.m - 1]
        for col in plan.columns[c.n - 1]:
            i, alpha = col
            bumped = alpha[:pos] + (alpha[pos] + 1,) + alpha[pos + 1:]
            if (i, bumped) not in targets:
                return SymbolicVerdict(False, c, col)
    return SymbolicVerdict(True)


def make_plan(spec, point, l=1, grouped=True, multi=None, tau_cap=DEFAULT_TAU_CAP,
              allow_outside=False):
    """Integerize ``point`` and build the matching plan for ``spec``.

    ``multi`` defaults to ``spec.M > 1``.  Grouped plans use
    :func:`build_group_constraints`.
    """
    point = to_point(point)
    if len(point) != spec.K:
        raise SpecError(f"point has {len(point)} components, expected K={spec.K}")
    if multi is None:
        multi = spec.M > 1
    if not multi and spec.M != 1:
        raise SpecError("the single-antenna scheme requires M = 1")
    ip = integerize(point)
    pspec = plan_space_spec(spec, ip)
    base = build_group_constraints(pspec) if grouped else build_constraints(pspec)
    if multi:
        cons = lift_constraints(base, spec.M)
        return build_multi_plan(pspec, ip, l, cons, tau_cap, allow_outside, grouped)
    return build_plan(pspec, ip, l, base, tau_cap, allow_outside, grouped)


def original_constraint(c, ip):
    """Constraint as a list with message indices in the caller's numbering."""
    row = c.as_list()
    row[0], row[1] = ip.perm[c.m - 1], ip.perm[c.n - 1]
    return row


def plan_report(plan):
    """JSON-ready plan summary in the caller's message numbering."""
    ip = plan.ip
    constraints = [original_constraint(c, ip) for c in plan.constraints]
    counts = [len(cols) for cols in plan.columns]
    fractions = [fmt(dof_fraction(plan, k)) for k in range(1, plan.K + 1)]
    doc = {
        "mode": "multi" if plan.multi else "single",
        "point": fmt_point(ip.point),
        "perm": list(ip.perm),
        "kappa": ip.kappa,
        "dbar": ip.to_original(list(ip.dbar)),
        "l": plan.l,
        "constraints": constraints,
        "tau": plan.tau,
        "columnCounts": ip.to_original(counts),
        "dofFractions": ip.to_original(fractions),
    }
    if plan.multi:
        doc.update(GammaM=plan.GammaM, GammaMq=plan.GammaMq,
                   GammaMkq=ip.to_original(list(plan.GammaMkq)))
    else:
        doc.update(Gamma=plan.Gamma, GammaK=ip.to_original(list(plan.GammaK)))
    return doc
