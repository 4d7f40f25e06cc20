from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefrev.formula import FALSE, TRUE, Const, Domain, Var, atom, conj, disj, neg, parse_formula
from prefrev.oracle import build_grid, faithful_density, materialize
from prefrev.solver import (
    dnf,
    eliminate,
    eliminate_exists,
    entails,
    equivalent,
    sat_conjunct,
    satisfiable,
    simplify,
    witness,
)

from .gen import C1_TEXT, C2_TEXT, CAR, CSTAR_TEXT, DQ, QQ, random_formula, random_pref

X = Var("X", "x", Domain.Q)
Y = Var("X", "y", Domain.Q)
Z = Var("Z", "x", Domain.Q)
A = Var("X", "a", Domain.D)
B = Var("Z", "a", Domain.D)


def c(v):
    return Const(Domain.Q, Fraction(v))


def d(v):
    return Const(Domain.D, v)


class TestConjuncts:
    def test_strict_cycle_unsat(self):
        assert not sat_conjunct(frozenset({atom("<", X, Y), atom("<", Y, Z), atom("<", Z, X)}))

    def test_weak_cycle_sat(self):
        assert sat_conjunct(frozenset({atom("<=", X, Y), atom("<=", Y, Z), atom("<=", Z, X)}))

    def test_weak_cycle_with_disequality_unsat(self):
        cj = {atom("<=", X, Y), atom("<=", Y, Z), atom("<=", Z, X), atom("!=", X, Z)}
        assert not sat_conjunct(frozenset(cj))

    def test_density(self):
        # rationals are dense: strictly between 0 and 1 always fits
        assert sat_conjunct(frozenset({atom(">", X, c(0)), atom("<", X, c(1)), atom("!=", X, c(Fraction(1, 2)))}))
        assert not sat_conjunct(frozenset({atom(">", X, c(0)), atom("<", X, c(0))}))

    def test_constant_chain(self):
        assert not sat_conjunct(frozenset({atom(">=", X, c(2)), atom("<=", X, c(1))}))
        assert sat_conjunct(frozenset({atom(">=", X, c(1)), atom("<=", X, c(1)), atom("!=", X, c(2))}))

    def test_pinned_by_bounds(self):
        assert not sat_conjunct(frozenset({atom(">=", X, c(1)), atom("<=", X, c(1)), atom("!=", X, c(1))}))

    def test_d_equalities(self):
        assert not sat_conjunct(frozenset({atom("=", A, d("a")), atom("=", B, d("b")), atom("=", A, B)}))
        assert not sat_conjunct(frozenset({atom("=", A, B), atom("!=", A, B)}))
        assert sat_conjunct(frozenset({atom("!=", A, d("a")), atom("!=", A, d("b"))}))


class TestFormulas:
    def test_literals(self):
        assert satisfiable(TRUE) and not satisfiable(FALSE)

    def test_c1_and_swapped_c1_disjoint(self):
        p = parse_formula(C1_TEXT, CAR).formula
        assert not satisfiable(conj(p, p.rename({"L": "R", "R": "L"})))

    def test_witness(self):
        f = parse_formula(C2_TEXT, CAR).formula
        w = witness(f)
        assert w is not None and sat_conjunct(w)
        assert witness(FALSE) is None

    def test_c1_entails_cstar(self):
        assert entails(parse_formula(C1_TEXT, CAR).formula, parse_formula(CSTAR_TEXT, CAR).formula)
        assert not entails(parse_formula(CSTAR_TEXT, CAR).formula, parse_formula(C1_TEXT, CAR).formula)

    def test_simplify_drops_subsumed(self):
        f = parse_formula("L.year > R.year or L.year > R.year and L.make = 'a'", CAR).formula
        assert simplify(f) == parse_formula("L.year > R.year", CAR).formula

    def test_dnf_conjuncts_satisfiable(self):
        rng = random.Random(2)
        for _ in range(200):
            f = random_formula(rng, rng.choice([DQ, QQ]))
            assert all(sat_conjunct(cj) for cj in dnf(f))
            assert equivalent(simplify(f), f)

    def test_excluded_middle(self):
        rng = random.Random(4)
        for _ in range(100):
            f = random_formula(rng, rng.choice([DQ, QQ]))
            assert equivalent(disj(f, neg(f)), TRUE)
            assert not satisfiable(conj(f, neg(f)))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_satisfiable_matches_grid(seed):
    rng = random.Random(seed)
    s = rng.choice([DQ, QQ])
    p = random_pref(rng, s)
    dens, fresh = faithful_density(s, 2)
    u = build_grid(s, [p.formula], density=dens, fresh=fresh, cap=10**6)
    assert satisfiable(p.formula) == bool(materialize(p, u).matrix.any())


class TestElimination:
    def test_between_bounds(self):
        # exists x: 0 < x < Z.x  <=>  Z.x > 0
        out = eliminate_exists(X, {atom(">", X, c(0)), atom("<", X, Z)})
        assert equivalent(out, atom(">", Z, c(0)))

    def test_weak_strict_combination(self):
        out = eliminate_exists(X, {atom(">=", X, c(1)), atom("<=", X, Z)})
        assert equivalent(out, atom(">=", Z, c(1)))

    def test_equality_substitution(self):
        out = eliminate_exists(X, {atom("=", X, Z), atom(">", X, c(3))})
        assert equivalent(out, atom(">", Z, c(3)))

    def test_disequality_split(self):
        # exists x: Z.x <= x <= Z.x and x != 0  <=>  Z.x != 0
        out = eliminate_exists(X, {atom(">=", X, Z), atom("<=", X, Z), atom("!=", X, c(0))})
        assert equivalent(out, atom("!=", Z, c(0)))

    def test_d_disequalities_vanish(self):
        out = eliminate_exists(A, {atom("!=", A, B), atom("!=", A, d("a"))})
        assert out is TRUE

    def test_unsat_projection(self):
        assert eliminate(X, frozenset({atom(">", X, c(1)), atom("<", X, c(0))})) == []

    @pytest.mark.parametrize("seed", range(40))
    def test_projection_matches_ground_search(self, seed):
        # compare exists X.y with a search over values around the constants
        rng = random.Random(seed)
        terms = [X, Y, Z, c(0), c(1)]
        atoms = set()
        for _ in range(rng.randint(1, 4)):
            l, r = rng.sample(terms, 2)
            if isinstance(l, Const) and isinstance(r, Const):
                continue
            a = atom(rng.choice(["=", "!=", "<", "<=", ">", ">="]), l, r)
            if a not in (TRUE, FALSE):
                atoms.add(a)
        if not atoms:
            return
        f = conj(*atoms)
        out = eliminate_exists(Y, atoms)
        grid = [Fraction(k, 4) for k in range(-8, 13)]
        for xv in grid[::4]:
            for zv in grid[::4]:
                env = {X: xv, Z: zv}
                truth = any(f.evaluate({**env, Y: yv}) for yv in grid)
                assert out.evaluate(env) == truth
