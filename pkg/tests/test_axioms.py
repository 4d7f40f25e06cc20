from __future__ import annotations

import random

import numpy as np
import pytest

from prefrev.axioms import (
    Derived,
    NotAnSPO,
    OrderClass,
    classify,
    classify_finite,
    classify_matrix,
    has_scp_finite,
    is_connected,
    is_irreflexive,
    is_negatively_transitive,
    is_transitive,
)
from prefrev.formula import parse_formula
from prefrev.oracle import axioms_matrix, build_grid, faithful_density, graph_axioms, materialize

from .gen import (
    C1_TEXT,
    C2_TEXT,
    C3_TEXT,
    C4_TEXT,
    CAR,
    CSTAR_TEXT,
    DQ,
    QQ,
    elements,
    matrix_pref,
    random_chain_spo,
    random_pref,
    random_spo,
    random_weak,
)


def car(text):
    return parse_formula(text, CAR)


@pytest.mark.parametrize("text", [C1_TEXT, C2_TEXT, C3_TEXT, CSTAR_TEXT, C4_TEXT])
def test_car_relations_are_spos_not_weak(text):
    cls = classify(car(text))
    assert cls.derived is Derived.SPO
    assert cls.describe().startswith("SPO (not weak)")


def test_describe_c1():
    assert classify(car(C1_TEXT)).describe() == (
        "SPO (not weak): irreflexive ✓ transitive ✓ neg-transitive ✗ connected ✗"
    )


def test_reflexive_relation():
    p = car("L.year >= R.year")
    assert not is_irreflexive(p)
    assert classify(p).derived is Derived.NONE


def test_weak_and_total():
    assert classify(car("L.year > R.year")).derived is Derived.WEAK
    q1 = parse_formula("L.x > R.x", QQ)
    assert classify(q1).derived is Derived.WEAK
    lex = parse_formula("L.x > R.x or L.x = R.x and L.y > R.y", QQ)
    assert classify(lex).derived is Derived.TOTAL
    assert is_connected(lex) and is_negatively_transitive(lex)


def test_not_transitive():
    p = car("L.make = 'a' and R.make = 'b' or L.make = 'b' and R.make = 'c'")
    assert is_irreflexive(p) and not is_transitive(p)


def test_order_class_properties():
    c = OrderClass(True, True, True, False)
    assert c.is_spo and c.is_weak and not c.is_total
    assert OrderClass(False, True, True, True).derived is Derived.NONE


@pytest.mark.parametrize("seed", range(60))
def test_symbolic_axioms_match_grid(seed):
    rng = random.Random(seed)
    s = rng.choice([DQ, QQ])
    p = random_pref(rng, s)
    dens, fresh = faithful_density(s, 3)
    u = build_grid(s, [p.formula], density=dens, fresh=fresh, cap=10**7)
    assert classify(p) == graph_axioms(materialize(p, u))


class TestFinite:
    def test_matrix_and_numpy_agree(self):
        rng = random.Random(9)
        for _ in range(200):
            n = rng.randint(1, 6)
            m = np.array([[rng.random() < 0.3 for _ in range(n)] for _ in range(n)])
            assert classify_matrix(m.tolist()) == axioms_matrix(m)

    def test_random_generators(self):
        rng = random.Random(1)
        for _ in range(50):
            n = rng.randint(2, 6)
            assert axioms_matrix(random_spo(rng, n)).is_spo
            assert axioms_matrix(random_weak(rng, n)).is_weak
            assert axioms_matrix(random_chain_spo(rng, n)).is_spo

    def test_scp_chain(self):
        m = np.zeros((4, 4), dtype=bool)
        m[0, 1] = m[0, 2] = m[1, 2] = True
        assert has_scp_finite(matrix_pref(m), elements(4))

    def test_scp_two_chains(self):
        m = np.zeros((4, 4), dtype=bool)
        m[0, 1] = m[2, 3] = True
        assert not has_scp_finite(matrix_pref(m), elements(4))

    def test_scp_needs_spo(self):
        m = np.zeros((3, 3), dtype=bool)
        m[0, 1] = m[1, 0] = True
        with pytest.raises(NotAnSPO):
            has_scp_finite(matrix_pref(m), elements(3))

    def test_scp_characterization(self):
        # SCP holds iff the comparable elements are totally ordered
        rng = random.Random(5)
        for _ in range(300):
            n = rng.randint(1, 6)
            m = random_spo(rng, n, 0.3) if rng.random() < 0.6 else random_chain_spo(rng, n)
            involved = [i for i in range(n) if m[i].any() or m[:, i].any()]
            total = all(m[i, j] or m[j, i] for i in involved for j in involved if i != j)
            assert has_scp_finite(matrix_pref(m), elements(n)) == total

    def test_classify_finite_sees_only_the_domain(self):
        m = random_weak(random.Random(2), 4)
        p = matrix_pref(m)
        assert classify_finite(p, elements(4)).is_weak
        # over the infinite domain a finite relation cannot be weak
        assert not classify(p).is_weak or not m.any()
