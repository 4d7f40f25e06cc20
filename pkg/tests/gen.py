"""Random generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from prefrev.formula import (
    Const,
    Domain,
    PrefRelation,
    Schema,
    Var,
    atom,
    conj,
    disj,
    finite_relation,
)
from prefrev.winnow import RelationInstance

DQ = Schema("S", (("a", Domain.D), ("x", Domain.Q)))
QQ = Schema("T", (("x", Domain.Q), ("y", Domain.Q)))
DD = Schema("V", (("a", Domain.D), ("b", Domain.D)))
SINGLE = Schema("E", (("v", Domain.D),))

D_CONSTS = ("a", "b")
Q_CONSTS = (Fraction(0), Fraction(1), Fraction(5, 2))
Q_OPS = ("=", "!=", "<", "<=", ">", ">=")
D_OPS = ("=", "!=")


def random_atom(rng: random.Random, schema: Schema):
    tv = rng.choice("LR")
    name, dom = rng.choice(schema.attrs)
    lhs = Var(tv, name, dom)
    ops = Q_OPS if dom is Domain.Q else D_OPS
    op = rng.choice(ops)
    if rng.random() < 0.4:
        consts = Q_CONSTS if dom is Domain.Q else D_CONSTS
        return atom(op, lhs, Const(dom, rng.choice(consts)))
    others = [Var(t, n, d) for t in "LR" for n, d in schema.attrs if d is dom and (t, n) != (tv, name)]
    return atom(op, lhs, rng.choice(others))


def random_formula(rng: random.Random, schema: Schema, max_conj: int = 3, max_atoms: int = 4):
    parts = [
        conj(*(random_atom(rng, schema) for _ in range(rng.randint(1, max_atoms))))
        for _ in range(rng.randint(1, max_conj))
    ]
    return disj(*parts)


def random_pref(rng: random.Random, schema: Schema, name: str | None = None, **kw) -> PrefRelation:
    return PrefRelation(schema, random_formula(rng, schema, **kw), name)


def random_spo_pref(rng: random.Random, schema: Schema, name: str | None = None) -> PrefRelation:
    """A strict comparison on one Q attribute, optionally restricted to equal
    D values and to unary conditions on each side; always an SPO."""
    qs = [a for a, d in schema.attrs if d is Domain.Q]
    ds = [a for a, d in schema.attrs if d is Domain.D]
    x = rng.choice(qs)
    parts = [atom(rng.choice((">", "<")), Var("L", x, Domain.Q), Var("R", x, Domain.Q))]
    if ds and rng.random() < 0.5:
        a = rng.choice(ds)
        parts.append(atom("=", Var("L", a, Domain.D), Var("R", a, Domain.D)))
    for tv in "LR":
        for _ in range(rng.randint(0, 2)):
            n, d = rng.choice(schema.attrs)
            if d is Domain.Q:
                parts.append(atom(rng.choice(Q_OPS), Var(tv, n, d), Const(d, rng.choice(Q_CONSTS))))
            else:
                parts.append(atom(rng.choice(D_OPS), Var(tv, n, d), Const(d, rng.choice(D_CONSTS))))
    return PrefRelation(schema, conj(*parts), name)


def random_rows(rng: random.Random, schema: Schema, n: int, span: int = 6) -> RelationInstance:
    rows = set()
    while len(rows) < n:
        rows.add(tuple(
            Fraction(rng.randint(0, span * 2), 2) if d is Domain.Q else rng.choice("abcdefgh")
            for _, d in schema.attrs
        ))
    rows = sorted(rows, key=lambda t: [str(v) for v in t])
    rng.shuffle(rows)
    return RelationInstance(schema, tuple(rows), tuple(f"t{i}" for i in range(1, n + 1)))


# finite relations over the elements of SINGLE


def elements(n: int) -> list[tuple]:
    return [(chr(ord("a") + i),) for i in range(n)]


def random_spo(rng: random.Random, n: int, density: float = 0.3) -> np.ndarray:
    """Transitive closure of a random DAG over a random permutation."""
    perm = list(range(n))
    rng.shuffle(perm)
    m = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                m[perm[i], perm[j]] = True
    for k in range(n):
        m |= np.outer(m[:, k], m[k, :])
    return m


def random_weak(rng: random.Random, n: int) -> np.ndarray:
    """A weak order: random ranks, higher rank preferred."""
    rank = [rng.randint(0, max(1, n - 2)) for _ in range(n)]
    return np.array([[rank[i] > rank[j] for j in range(n)] for i in range(n)], dtype=bool)


def random_chain_spo(rng: random.Random, n: int) -> np.ndarray:
    """An SPO with the single-chain property: a total order on a random subset."""
    k = rng.randint(0, n)
    chain = rng.sample(range(n), k)
    m = np.zeros((n, n), dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            m[chain[i], chain[j]] = True
    return m


def matrix_pref(m: np.ndarray, name: str | None = None, schema: Schema = SINGLE) -> PrefRelation:
    els = elements(m.shape[0])
    pairs = [(els[i], els[j]) for i, j in zip(*np.nonzero(m))]
    return finite_relation(schema, pairs, name)


def is_compatible_matrix(m: np.ndarray, m0: np.ndarray) -> bool:
    return not (m0 & m.T).any()


# the car example

CAR = Schema("Car", (("make", Domain.D), ("year", Domain.Q)))
C1_TEXT = "L.make = R.make and L.year > R.year"
C2_TEXT = "L.make = 'VW' and R.make != 'VW' and L.year = R.year"
C3_TEXT = "L.make = 'VW' and L.year = 1999 and R.make = 'Kia' and R.year = 1999"
CSTAR_TEXT = "L.make = R.make and L.year > R.year or L.make = 'VW' and R.make != 'VW' and L.year >= R.year"
C4_TEXT = (
    "L.make = R.make and L.year > R.year"
    " or L.make = 'VW' and L.year >= 1999 and R.make = 'Kia' and R.year <= 1999"
)
CAR_ROWS = (("VW", Fraction(2002)), ("VW", Fraction(1997)), ("Kia", Fraction(1997)))
CAR_CSV = "make,year\nVW,2002\nVW,1997\nKia,1997\n"
CAR_PREFS = f"""\
# car preferences
pref C1 over Car: {C1_TEXT};
pref C2 over Car: {C2_TEXT};
pref C3 over Car: {C3_TEXT};
pref Cstar over Car: {CSTAR_TEXT};
"""


def car_instance() -> RelationInstance:
    return RelationInstance(CAR, CAR_ROWS, ("t1", "t2", "t3"))
