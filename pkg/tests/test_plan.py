import dataclasses
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dofnet.demand import DemandSpec
from dofnet.errors import OutOfRegionError, SpecError, TauCapError
from dofnet.plan import (AlignmentConstraint as C, build_constraints, build_group_constraints,
                         build_multi_constraints, build_multi_plan, build_plan, column_budget,
                         dof_fraction, formula_column_counts, integerize, lift_constraints,
                         make_plan, plan_report, plan_space_spec, verify_plan_symbolic)
from dofnet.region import contains, expand_region

from networks import CHAIN, MIMO, OUTSIDE, POSET, SKEWED, SYMMETRIC, STAR, const, ic


def chain_plan(l, point=SYMMETRIC):
    ip = integerize(point)
    spec = plan_space_spec(CHAIN, ip)
    return build_plan(spec, ip, l, build_constraints(spec))


@pytest.mark.parametrize("point, kappa, dbar, perm", [
    (const(4, F(1, 3)), 3, (1, 1, 1, 1), (1, 2, 3, 4)),
    ((F(1, 2), F(1, 4), 0, 0), 4, (2, 1, 0, 0), (1, 2, 3, 4)),
    ((F(1, 3), F(2, 3)), 3, (2, 1), (2, 1)),
    ((0, 0), 1, (0, 0), (1, 2)),
])
def test_integerize(point, kappa, dbar, perm):
    ip = integerize(point)
    assert (ip.kappa, ip.dbar, ip.perm) == (kappa, dbar, perm)
    assert ip.to_original(list(ip.plan_point)) == [F(x) for x in point]


@given(st.lists(st.fractions(0, 2, max_denominator=12), min_size=1, max_size=6))
def test_integerize_minimal(point):
    ip = integerize(point)
    assert all((ip.kappa * F(x)).denominator == 1 for x in point)
    assert all(any((d * F(x)).denominator != 1 for x in point) for d in range(1, ip.kappa))
    assert list(ip.dbar) == sorted(ip.dbar, reverse=True)


def test_chain_constraints():
    assert build_constraints(CHAIN) == [C(3, 4, 1), C(1, 4, 2), C(1, 2, 3)]


def test_poset_constraints():
    full = build_constraints(POSET)
    assert len(full) == 6
    assert C(1, 3, 2) in full and C(1, 4, 2) in full
    assert build_constraints(POSET, grouped=True) == [C(3, 4, 1), C(1, 4, 3), C(2, 3, 5)]
    group = build_group_constraints(POSET)
    assert group == [C(3, 4, 1), C(3, 4, 2), C(1, 4, 3), C(1, 4, 4), C(2, 3, 5)]


def test_group_constraints_equal_grouped_when_all_prime():
    for spec in (CHAIN, STAR, ic(4, 1), MIMO):
        assert build_group_constraints(spec) == build_constraints(spec, grouped=True)
        assert build_constraints(spec, grouped=True) == build_constraints(spec)


def test_full_demand_receiver_adds_nothing():
    spec = DemandSpec(3, 1, ({1, 2, 3}, {1}))
    assert build_constraints(spec) == [C(2, 3, 2)]


@st.composite
def specs(draw, max_k=5, max_j=6):
    K = draw(st.integers(1, max_k))
    sets = st.sets(st.integers(1, K), min_size=1)
    demands = draw(st.lists(sets, min_size=1, max_size=max_j))
    return DemandSpec(K, 1, tuple(demands))


@given(specs())
def test_grouped_never_larger(spec):
    grouped, full = build_constraints(spec, grouped=True), build_constraints(spec)
    assert len(grouped) <= len(full)
    assert set(grouped) <= set(full)
    if len(set(spec.demands)) == spec.J and all(
            not any(d < e for e in spec.demands) for d in spec.demands):
        assert grouped == full
    assert [c.key() for c in full] == sorted(c.key() for c in full)
    for c in full:
        comp = spec.complement(c.j)
        assert c.m == min(comp) and c.n in comp and c.n > c.m


def test_multi_lift_sizes():
    assert len(lift_constraints(build_constraints(CHAIN), 2)) == 12
    mc = build_multi_constraints(MIMO)
    assert build_constraints(MIMO) == [C(2, 3, 1), C(1, 3, 2)]
    assert len(mc) == 8
    assert [c.key() for c in mc] == sorted(c.key() for c in mc)
    lifted = lift_constraints(build_constraints(CHAIN), 1)
    assert [(c.m, c.n, c.j) for c in lifted] == [(c.m, c.n, c.j) for c in build_constraints(CHAIN)]


def closed_form_counts(dbar, l, Gamma, GammaK):
    return tuple(d * l ** g * (l + 1) ** (Gamma - g) for d, g in zip(dbar, GammaK))


@pytest.mark.parametrize("l, tau, counts", [(1, 24, (8, 4, 4, 1)), (2, 81, (27, 18, 18, 8))])
def test_chain_plan_sizes(l, tau, counts):
    p = chain_plan(l)
    assert (p.ip.kappa, p.Gamma, p.GammaK, p.tau) == (3, 3, (0, 1, 1, 3), tau)
    assert tuple(len(c) for c in p.columns) == counts
    assert counts == closed_form_counts((1, 1, 1, 1), l, 3, (0, 1, 1, 3))
    assert tau == 3 * (l + 1) ** 3


def test_chain_dof_fractions():
    p = chain_plan(1)
    assert [dof_fraction(p, k) for k in range(1, 5)] == [F(1, 3), F(1, 6), F(1, 6), F(1, 24)]
    assert dof_fraction(chain_plan(2), 2) == F(2, 9)


def test_dof_fraction_bounded_and_converging():
    for l in range(1, 6):
        p = chain_plan(l)
        for k in range(1, 5):
            assert dof_fraction(p, k) <= F(1, 3)
        assert dof_fraction(p, 4) == F(l ** 3, 3 * (l + 1) ** 3)


def test_skewed_plan():
    p = chain_plan(1, SKEWED)
    assert p.ip.dbar == (2, 1, 1, 1) and p.ip.kappa == 4
    assert p.tau == 32
    assert tuple(len(c) for c in p.columns) == formula_column_counts(p)


def test_gamma_zero_plan():
    spec = DemandSpec(2, 1, ({1, 2},))
    p = make_plan(spec, (F(1, 2), F(1, 2)))
    assert p.Gamma == 0 and p.tau == 2
    assert p.columns == (((1, ()),), ((1, ()),))
    assert verify_plan_symbolic(p).passed


def test_tau_cap():
    with pytest.raises(TauCapError) as err:
        make_plan(CHAIN, SYMMETRIC, l=5, tau_cap=100)
    assert err.value.tau == 3 * 6 ** 3


def test_l_must_be_positive():
    with pytest.raises(SpecError):
        make_plan(CHAIN, SYMMETRIC, l=0)


def test_out_of_region_plan_reports_budget():
    with pytest.raises(OutOfRegionError) as err:
        make_plan(CHAIN, OUTSIDE)
    assert [j for j, _, _ in err.value.budget_violations] == [1, 2]
    assert err.value.budget_violations[0][1:] == (3, 2)
    p = make_plan(CHAIN, OUTSIDE, allow_outside=True)
    assert column_budget(p.spec, p.ip) == [(1, 3, 2), (2, 3, 2)]


def test_mode_guards():
    with pytest.raises(SpecError):
        make_plan(MIMO, const(3, F(1, 4)), multi=False)
    with pytest.raises(SpecError):
        make_plan(CHAIN, SYMMETRIC, multi=True)
    with pytest.raises(SpecError):
        make_plan(CHAIN, (F(1, 3),) * 3)


def test_symbolic_chain_pass():
    p = chain_plan(1)
    assert sum(len(c) for c in p.columns) == 17
    assert verify_plan_symbolic(p).passed


def capped_plan(p):
    """Transmitter m of the first constraint capped at l-1 on that constraint."""
    c = p.constraints[0]
    keep = tuple(col for col in p.columns[c.m - 1] if col[1][0] < p.l)
    cols = list(p.columns)
    cols[c.m - 1] = keep
    return dataclasses.replace(p, columns=tuple(cols)), c


@pytest.mark.parametrize("l", [1, 2])
def test_symbolic_negative_control(l):
    broken, c = capped_plan(chain_plan(l))
    verdict = verify_plan_symbolic(broken)
    assert not verdict.passed and verdict.constraint == c


def random_point(region, rnd, denominators=(1, 2, 3, 4)):
    K = region.K
    while True:
        q = rnd.choice(denominators)
        p = tuple(F(rnd.randint(0, q * region.M), q) for _ in range(K))
        if contains(region, p).inside and any(p):
            return p


@pytest.mark.parametrize("spec", [CHAIN, STAR, POSET, ic(3, 1)], ids=["chain", "star", "poset", "ic3"])
@pytest.mark.parametrize("grouped", [True, False])
def test_symbolic_random_points(spec, grouped):
    rnd = random.Random(7)
    reg = expand_region(spec)
    for _ in range(10):
        point = random_point(reg, rnd)
        for l in (1, 2):
            p = make_plan(spec, point, l=l, grouped=grouped, tau_cap=10 ** 7)
            assert verify_plan_symbolic(p).passed
            assert tuple(len(c) for c in p.columns) == formula_column_counts(p)
            assert not column_budget(p.spec, p.ip, grouped)


def mimo_plan(l=1, point=const(3, F(1, 4))):
    return make_plan(MIMO, point, l=l)


def test_multi_plan_sizes():
    p = mimo_plan()
    assert (p.ip.kappa, p.GammaM, p.GammaMq, p.tau) == (4, 8, 4, 256)
    assert p.GammaMkq == (0, 0, 4)
    assert len(p.columns[2]) == 2
    assert tuple(len(c) for c in p.columns) == formula_column_counts(p) == (32, 32, 2)
    assert mimo_plan(l=2).tau == 1296
    assert verify_plan_symbolic(p).passed and verify_plan_symbolic(mimo_plan(2)).passed


def test_multi_windows_are_disjoint():
    p = mimo_plan(l=2)
    for cols in p.columns:
        assert len({(i, alpha) for _, i, alpha in cols}) == len(cols)
        for q, _, alpha in cols:
            lo = (q - 1) * (p.l + 1)
            assert all(lo <= a <= lo + p.l for a in alpha)


def test_multi_dof_fraction():
    assert [dof_fraction(mimo_plan(), k) for k in (1, 2, 3)] == [F(1, 4), F(1, 4), F(1, 64)]
    for l in range(1, 4):
        p = mimo_plan(l)
        assert dof_fraction(p, 3) == F(l ** 4, 4 * (l + 1) ** 4)


def test_multi_negative_control():
    p = mimo_plan()
    c = p.branch_constraints(1)[0]
    cols = list(p.columns)
    cols[c.m - 1] = tuple(col for col in cols[c.m - 1] if not (col[0] == 1 and col[2][0] == p.l))
    verdict = verify_plan_symbolic(dataclasses.replace(p, columns=tuple(cols)))
    assert not verdict.passed and verdict.constraint == c


def test_multi_requires_antennas():
    ip = integerize(SYMMETRIC)
    with pytest.raises(SpecError):
        build_multi_plan(CHAIN, ip, 1, [])


def test_plan_report_original_numbering():
    point = (F(1, 4), F(1, 2), F(1, 4), 0)
    doc = plan_report(make_plan(CHAIN, point))
    assert doc["perm"] == [2, 1, 3, 4]
    assert doc["dbar"] == [1, 2, 1, 0]
    assert doc["kappa"] == 4 and doc["mode"] == "single"
    p = make_plan(CHAIN, point)
    counts = [len(c) for c in p.columns]
    assert doc["columnCounts"] == [counts[1], counts[0], counts[2], counts[3]]
    assert sorted(tuple(c) for c in doc["constraints"]) == sorted(
        (p.ip.perm[c.m - 1], p.ip.perm[c.n - 1], c.j) for c in p.constraints)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_chain_random_points_keep_budget(seed):
    rnd = random.Random(seed)
    point = random_point(expand_region(CHAIN), rnd)
    p = make_plan(CHAIN, point, tau_cap=10 ** 7)
    assert verify_plan_symbolic(p).passed
    for k in range(1, 5):
        assert dof_fraction(p, k) <= p.ip.plan_point[k - 1]
