from __future__ import annotations

import random

from fractions import Fraction

import numpy as np
import pytest

from prefrev.algebra import (
    IterationCapExceeded,
    compose,
    difference,
    empty,
    indifference,
    intersection,
    inverse,
    prioritized,
    transitive_closure,
    union_pref,
)
from prefrev.formula import FALSE, parse_formula
from prefrev.oracle import GridUniverse, build_grid, graph_tc, materialize, tc_on_grid
from prefrev.solver import entails, equivalent

from .gen import (
    C1_TEXT,
    C2_TEXT,
    C3_TEXT,
    C4_TEXT,
    CAR,
    CSTAR_TEXT,
    DQ,
    QQ,
    SINGLE,
    elements,
    matrix_pref,
    random_pref,
    random_spo,
)


def car(text, name=None):
    return parse_formula(text, CAR, name)


def test_union_and_inverse():
    c1 = car(C1_TEXT)
    u = union_pref(c1, car(C2_TEXT))
    assert entails(c1.formula, u.formula)
    t1, t2 = ("VW", Fraction(2002)), ("VW", Fraction(1997))
    assert inverse(c1)(t2, t1) and not inverse(c1)(t1, t2)


def test_indifference_of_c1():
    ind = indifference(car(C1_TEXT))
    # different makes are incomparable under C1
    assert equivalent(ind.formula, car("L.make != R.make or L.year = R.year").formula)


def test_prioritized_favours_first():
    p0 = car("L.year > R.year")
    p = car("L.year < R.year or L.make = 'VW' and R.make != 'VW'")
    pr = prioritized(p0, p)
    assert equivalent(pr.formula, car("L.year > R.year or L.year = R.year and L.make = 'VW' and R.make != 'VW'").formula)


def test_difference_intersection():
    a, b = car("L.year > R.year"), car(C1_TEXT)
    assert equivalent(intersection(a, b).formula, b.formula)
    assert equivalent(difference(a, b).formula, car("L.year > R.year and L.make != R.make").formula)


def test_compose_makes_two_steps():
    c = compose(car("L.year > R.year"), car("L.year > R.year"))
    assert equivalent(c.formula, car("L.year > R.year").formula)
    c = compose(car("L.year = 1 and R.year = 2"), car("L.year = 2 and R.year = 3"))
    assert equivalent(c.formula, car("L.year = 1 and R.year = 3").formula)


class TestTransitiveClosure:
    def test_c1_c2_gives_cstar(self):
        tc = transitive_closure(union_pref(car(C1_TEXT), car(C2_TEXT)))
        assert equivalent(tc.formula, car(CSTAR_TEXT).formula)

    def test_c1_c3_gives_c4(self):
        tc = transitive_closure(union_pref(car(C1_TEXT), car(C3_TEXT)))
        assert equivalent(tc.formula, car(C4_TEXT).formula)

    def test_transitive_input_is_fixed(self):
        assert equivalent(transitive_closure(car(C1_TEXT)).formula, car(C1_TEXT).formula)

    def test_empty(self):
        assert transitive_closure(empty(CAR)).formula is FALSE

    def test_cap(self):
        with pytest.raises(IterationCapExceeded):
            transitive_closure(union_pref(car(C1_TEXT), car(C3_TEXT)), max_iter=1)

    def test_finite_chain(self):
        # a -> b -> c -> d needs three rounds
        els = elements(4)
        m = np.zeros((4, 4), dtype=bool)
        m[0, 1] = m[1, 2] = m[2, 3] = True
        p = matrix_pref(m)
        u = GridUniverse.from_tuples(SINGLE, els)
        assert materialize(transitive_closure(p), u) == graph_tc(materialize(p, u))

    @pytest.mark.parametrize("seed", range(30))
    def test_random_finite_matches_warshall(self, seed):
        rng = random.Random(seed)
        n = rng.randint(2, 6)
        m = random_spo(rng, n) | (np.array([[rng.random() < 0.15 for _ in range(n)] for _ in range(n)]))
        p = matrix_pref(m)
        u = GridUniverse.from_tuples(SINGLE, elements(n))
        assert materialize(transitive_closure(p), u) == graph_tc(materialize(p, u))

    @pytest.mark.parametrize("seed", range(40))
    def test_random_ipf_matches_grid(self, seed):
        rng = random.Random(1000 + seed)
        s = rng.choice([DQ, QQ])
        p = random_pref(rng, s)
        tc = transitive_closure(p)
        u = build_grid(s, [p.formula, tc.formula], density=2, fresh=2, cap=10**6)
        assert materialize(tc, u) == tc_on_grid(p, u)
        assert entails(p.formula, tc.formula)
