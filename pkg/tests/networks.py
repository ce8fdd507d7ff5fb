"""Network instances shared across the test modules."""

from fractions import Fraction as F

from dofnet.demand import DemandSpec

CHAIN = DemandSpec(4, 1, ({1, 2}, {2, 3}, {3, 4}))
POSET = DemandSpec(4, 1, ({1, 2}, {2}, {2, 3}, {2, 3}, {1, 4}))
STAR = DemandSpec(4, 1, ({1, 2}, {1, 3}, {1, 4}))
MIMO = DemandSpec(3, 2, ({1}, {2}))


def ic(K, M):
    return DemandSpec(K, M, tuple({k} for k in range(1, K + 1)))


def all_subsets(K, beta, M=1):
    from itertools import combinations
    return DemandSpec(K, M, tuple(set(c) for c in combinations(range(1, K + 1), beta)))


def unit(K, k, scale=1):
    return tuple(F(scale) if i == k else F(0) for i in range(1, K + 1))


def const(K, value):
    return (F(value),) * K


SYMMETRIC = const(4, F(1, 3))
SKEWED = (F(1, 2), F(1, 4), F(1, 4), F(1, 4))
OUTSIDE = (F(1, 2), F(1, 2), F(1, 2), F(0))
