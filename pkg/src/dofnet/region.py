"""The DoF region as an exact rational polytope.

Receiver ``j`` contributes ``sum_{k in M_j} d_k + max_{i in M_j^c} d_i <= M``.
Expanding the max gives one half-space ``sum_{k in S} d_k <= M`` per
undesired message ``i`` with ``S = M_j | {i}``; a receiver that wants every
message gives ``S = M_j``.  Nothing in this module touches floating point.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import simplex
from .errors import EnumerationLimitError, SpecError
from .rational import fmt, fmt_point, rank, solve, to_point

DEFAULT_ENUMERATION_LIMIT = 8
DEFAULT_CANDIDATE_LIMIT = 2_000_000


@dataclass(frozen=True)
class Inequality:
    """``sum_{i in support} d_i <= bound``.

    ``provenance`` lists the ``(receiver, excluded message)`` pairs that
    generate it; the excluded message is ``None`` for a receiver with an
    empty complement.
    """

    support: frozenset
    bound: int
    provenance: tuple

    def lhs(self, point):
        return sum((point[i - 1] for i in self.support), Fraction(0))

    def to_json(self):
        return {
            "support": sorted(self.support),
            "bound": self.bound,
            "provenance": [[j, i] for j, i in self.provenance],
        }


@dataclass(frozen=True)
class RegionDescription:
    spec: object
    inequalities: tuple

    @property
    def K(self):
        return self.spec.K

    @property
    def M(self):
        return self.spec.M

    @property
    def supports(self):
        return [q.support for q in self.inequalities]

    def to_json(self):
        return {"K": self.K, "M": self.M,
                "inequalities": [q.to_json() for q in self.inequalities]}


@dataclass(frozen=True)
class Membership:
    inside: bool
    tight: tuple
    violated: tuple
    negative: tuple = ()

    def to_json(self):
        return {
            "inside": self.inside,
            "tight": [sorted(s) for s in self.tight],
            "violated": [sorted(s) for s in self.violated],
            "negative": list(self.negative),
        }


@dataclass(frozen=True)
class VertexSet:
    """Vertices plus bookkeeping on how many bases were examined.

    ``candidate_bound`` is the binomial count ``C(J(K-1)+K, K)`` of square
    subsystems before deduplication, ``candidates`` the number actually
    examined (after deduplicating supports), and ``basic_feasible`` the
    number of feasible basic solutions found, duplicates included.
    """

    vertices: tuple
    candidates: int
    basic_feasible: int
    candidate_bound: int

    def to_json(self):
        return {
            "vertices": [fmt_point(v) for v in self.vertices],
            "count": len(self.vertices),
            "candidates": self.candidates,
            "basicFeasible": self.basic_feasible,
            "candidateBound": self.candidate_bound,
        }


def raw_inequalities(spec):
    """Expanded half-spaces in emission order, without deduplication."""
    out = []
    for j in range(1, spec.J + 1):
        want = spec.demands[j - 1]
        comp = sorted(spec.complement(j))
        if not comp:
            out.append(Inequality(frozenset(want), spec.M, ((j, None),)))
        for i in comp:
            out.append(Inequality(want | {i}, spec.M, ((j, i),)))
    return out


def expand_region(spec):
    merged = {}
    for q in raw_inequalities(spec):
        if q.support in merged:
            merged[q.support] += q.provenance
        else:
            merged[q.support] = q.provenance
    ineqs = tuple(Inequality(s, spec.M, prov) for s, prov in merged.items())
    return RegionDescription(spec, ineqs)


def contains(region, point):
    point = tuple(Fraction(v) for v in point)
    if len(point) != region.K:
        raise SpecError(f"point has {len(point)} components, expected K={region.K}")
    tight, violated = [], []
    for q in region.inequalities:
        lhs = q.lhs(point)
        if lhs > q.bound:
            violated.append(q.support)
        elif lhs == q.bound:
            tight.append(q.support)
    negative = tuple(k for k, v in enumerate(point, start=1) if v < 0)
    return Membership(not violated and not negative, tuple(tight), tuple(violated), negative)


def irredundant_supports(region):
    """Supports not strictly contained in another support.

    With ``d >= 0`` and a common bound, ``sum_S d <= M`` is implied by
    ``sum_T d <= M`` whenever ``S`` is a proper subset of ``T``.
    """
    supports = set(region.supports)
    return frozenset(s for s in supports if not any(s < t for t in supports))


def same_region(a, b):
    return a.K == b.K and a.M == b.M and irredundant_supports(a) == irredundant_supports(b)


def _constraint_rows(region):
    K = region.K
    rows = [([1 if i in q.support else 0 for i in range(1, K + 1)], q.bound)
            for q in region.inequalities]
    for k in range(K):
        rows.append(([-1 if i == k else 0 for i in range(K)], 0))
    return rows


def _feasible(region, x):
    return all(v >= 0 for v in x) and all(q.lhs(x) <= q.bound for q in region.inequalities)


def tight_rank(region, point):
    """Rank of the constraints (inequalities and ``d_k >= 0``) tight at ``point``."""
    rows = [r for r, rhs in _constraint_rows(region)
            if sum(a * v for a, v in zip(r, point)) == rhs]
    return rank(rows)


def enumerate_vertices(region, limit=DEFAULT_ENUMERATION_LIMIT,
                       candidate_limit=DEFAULT_CANDIDATE_LIMIT):
    """All vertices of ``{d >= 0} & region`` by exhaustive basis enumeration.

    Every choice of ``K`` constraints made tight is solved exactly; the
    nonsingular, feasible solutions are basic feasible solutions and hence
    extreme points.  The result is sorted lexicographically.
    """
    K = region.K
    if K > limit:
        raise EnumerationLimitError(f"K={K} exceeds the vertex enumeration limit {limit}")
    rows = _constraint_rows(region)
    candidates = math.comb(len(rows), K)
    if candidates > candidate_limit:
        raise EnumerationLimitError(
            f"{candidates} candidate bases exceed the limit {candidate_limit}")
    found = set()
    basic_feasible = 0
    for subset in itertools.combinations(rows, K):
        x = solve([r for r, _ in subset], [rhs for _, rhs in subset])
        if x is None or not _feasible(region, x):
            continue
        basic_feasible += 1
        found.add(x)
    J = region.spec.J
    bound = math.comb(J * (K - 1) + K, K)
    return VertexSet(tuple(sorted(found)), candidates, basic_feasible, bound)


def simplex_max_sum(region):
    """Exact simplex route for :func:`max_sum_dof`, usable at any ``K``."""
    K = region.K
    A = [[1 if i in q.support else 0 for i in range(1, K + 1)] for q in region.inequalities]
    b = [q.bound for q in region.inequalities]
    objectives = [[1] * K] + [[1 if i == k else 0 for i in range(K)] for k in range(K)]
    x, values = simplex.lexmax(A, b, objectives)
    return values[0], x


def max_sum_dof(region, limit=DEFAULT_ENUMERATION_LIMIT):
    """Maximum total DoF and a maximizer.

    Among maximizers the lexicographically largest vertex is returned.
    Vertex enumeration is used up to ``limit`` messages, the exact simplex
    beyond that.
    """
    if region.K > limit:
        return simplex_max_sum(region)
    verts = enumerate_vertices(region, limit=limit).vertices
    best = max(verts, key=lambda v: (sum(v), v))
    return sum(best, Fraction(0)), best


def symmetric_total(K, M, beta):
    """``M K / (beta + 1)``: total DoF of a symmetric demand pattern."""
    if not 1 <= beta <= K - 1:
        raise SpecError(f"beta={beta} must lie in 1..K-1 = 1..{K - 1}")
    return Fraction(M * K, beta + 1)


def ic_timeshare_weights(d1, d2, M):
    """Time-sharing weights on ``M e_1``, ``(M/2) 1`` and ``0``.

    Reaches ``(d1, d2, d2, ..., d2)`` in the ``K`` user ``M`` antenna
    interference channel; requires ``d1 >= d2 >= 0`` and ``d1 + d2 <= M``.
    """
    d1, d2, M = Fraction(d1), Fraction(d2), Fraction(M)
    if M <= 0 or not (d1 >= d2 >= 0) or d1 + d2 > M:
        raise SpecError(f"need d1 >= d2 >= 0 and d1 + d2 <= M, got d1={d1}, d2={d2}, M={M}")
    return (d1 - d2) / M, 2 * d2 / M, 1 - d1 / M - d2 / M


def max_sum_report(region, limit=DEFAULT_ENUMERATION_LIMIT):
    total, arg = max_sum_dof(region, limit=limit)
    return {"total": fmt(total), "argmax": fmt_point(to_point(arg))}
