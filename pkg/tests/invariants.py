"""Structural invariants of a single explanation problem.

Shared by the unit tests and the acceptance suite.
"""

from fractions import Fraction

import oracles
from shapaudit.core import features_of, full_set, make_problem, parse_tt
from shapaudit.importance import axp_importance
from shapaudit.shapley import phi, shapley_all
from shapaudit.xplain import (
    enumerate_axps,
    enumerate_cxps,
    relevancy_all,
    relevant,
    sigma_build,
    waxp,
    wcxp,
)


def problem(tt, v):
    return make_problem(parse_tt(tt), v)


def check_efficiency(e):
    assert sum(shapley_all(e).values, Fraction(0)) == e.c - phi(0, e)


def check_sigma(e):
    m = e.m
    sig = sigma_build(e)
    assert sig[full_set(m)] and not sig[0]
    for s in range(1 << m):
        if sig[s]:
            for i in range(m):
                assert sig[s | 1 << i]
            assert phi(s, e) == e.c


def check_explanations(e):
    """MHS duality both ways, irreducibility, the relevancy triangle and ordering."""
    m = e.m
    axps = enumerate_axps(e)
    cxps = enumerate_cxps(e)
    fa = [frozenset(features_of(x)) for x in axps]
    fc = [frozenset(features_of(y)) for y in cxps]
    assert set(fa) == oracles.minimal_hitting_sets(fc, m)
    assert set(fc) == oracles.minimal_hitting_sets(fa, m)

    union_a = union_c = 0
    for x in axps:
        union_a |= x
        assert waxp(x, e)
        for i in features_of(x):
            assert not waxp(x ^ 1 << (i - 1), e)
    for y in cxps:
        union_c |= y
        assert wcxp(y, e)
        for i in features_of(y):
            assert not wcxp(y ^ 1 << (i - 1), e)
    assert relevancy_all(e) == union_a == union_c

    order = [(x.bit_count(), x) for x in axps]
    assert order == sorted(order)


def check_importance(e):
    imp = axp_importance(e)
    for i, s in enumerate(imp.scores, 1):
        assert (s > 0) == relevant(i, e)
    assert sum(imp.scores) == len(enumerate_axps(e))


def check_problem(tt, v):
    e = problem(tt, v)
    check_sigma(e)
    check_explanations(e)
    return e


def check_all(tt, v):
    e = check_problem(tt, v)
    check_efficiency(e)
    check_importance(e)
    return e
