"""Order axioms of symbolic preference relations.

Each axiom is instantiated over two or three fresh tuple variables and reduced
to an unsatisfiability question for the solver. ``classify_finite`` and
``has_scp_finite`` instead work on a relation restricted to a finite set of
tuples, which is how finite domains are handled.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .formula import (
    LEFT,
    RIGHT,
    Formula,
    PrefError,
    PrefRelation,
    Var,
    atom,
    compile_pref,
    conj,
    disj,
    neg,
)
from .solver import satisfiable


class Derived(Enum):
    NONE = "none"
    SPO = "SPO"
    WEAK = "weak"
    TOTAL = "total"


@dataclass(frozen=True)
class OrderClass:
    irreflexive: bool
    transitive: bool
    negatively_transitive: bool
    connected: bool

    @property
    def is_spo(self) -> bool:
        return self.irreflexive and self.transitive

    @property
    def is_weak(self) -> bool:
        return self.is_spo and self.negatively_transitive

    @property
    def is_total(self) -> bool:
        return self.is_spo and self.connected

    @property
    def derived(self) -> Derived:
        if self.is_total:
            return Derived.TOTAL
        if self.is_weak:
            return Derived.WEAK
        if self.is_spo:
            return Derived.SPO
        return Derived.NONE

    def describe(self) -> str:
        mark = lambda b: "✓" if b else "✗"  # noqa: E731
        flags = (
            f"irreflexive {mark(self.irreflexive)} transitive {mark(self.transitive)} "
            f"neg-transitive {mark(self.negatively_transitive)} connected {mark(self.connected)}"
        )
        d = self.derived
        if d is Derived.TOTAL:
            head = "total order"
        elif d is Derived.WEAK:
            head = "weak order"
        elif d is Derived.SPO:
            head = "SPO (not weak)"
        else:
            head = "not an SPO"
        return f"{head}: {flags}"


class NotAnSPO(PrefError):
    pass


def _at(p: PrefRelation, x: str, y: str) -> Formula:
    return p.formula.rename({LEFT: x, RIGHT: y}) if (x, y) != (LEFT, RIGHT) else p.formula


def _distinct(p: PrefRelation, x: str, y: str) -> Formula:
    return disj(*(atom("!=", Var(x, a, d), Var(y, a, d)) for a, d in p.schema.attrs))


def is_irreflexive(p: PrefRelation) -> bool:
    return not satisfiable(_at(p, "X", "X"))


def is_transitive(p: PrefRelation) -> bool:
    return not satisfiable(conj(_at(p, "X", "Y"), _at(p, "Y", "Z"), neg(_at(p, "X", "Z"))))


def is_negatively_transitive(p: PrefRelation) -> bool:
    return not satisfiable(
        conj(_at(p, "X", "Z"), neg(_at(p, "X", "Y")), neg(_at(p, "Y", "Z")))
    )


def is_connected(p: PrefRelation) -> bool:
    return not satisfiable(
        conj(_distinct(p, "X", "Y"), neg(_at(p, "X", "Y")), neg(_at(p, "Y", "X")))
    )


def classify(p: PrefRelation) -> OrderClass:
    return OrderClass(
        irreflexive=is_irreflexive(p),
        transitive=is_transitive(p),
        negatively_transitive=is_negatively_transitive(p),
        connected=is_connected(p),
    )


# ---------------------------------------------------------------------------
# finite domains


def finite_matrix(p: PrefRelation, tuples: Sequence[tuple]) -> list[list[bool]]:
    f = compile_pref(p)
    return [[f(a, b) for b in tuples] for a in tuples]


def classify_matrix(m: list[list[bool]]) -> OrderClass:
    n = len(m)
    rng = range(n)
    irr = not any(m[i][i] for i in rng)
    trans = all(m[i][k] for i in rng for j in rng if m[i][j] for k in rng if m[j][k])
    negtrans = all(
        not m[i][k] for i in rng for j in rng if not m[i][j] for k in rng if not m[j][k]
    )
    conn = all(m[i][j] or m[j][i] for i in rng for j in rng if i != j)
    return OrderClass(irr, trans, negtrans, conn)


def classify_finite(p: PrefRelation, tuples: Sequence[tuple]) -> OrderClass:
    """Classify ``p`` with its domain restricted to ``tuples``."""
    return classify_matrix(finite_matrix(p, tuples))


def _maximal_chains(m: list[list[bool]], limit: int) -> int:
    """Count maximal chains with at least two elements, stopping at ``limit``.

    Maximal chains of a finite strict order are the maximal paths of its
    cover (Hasse) graph from a minimal to a maximal element.
    """
    n = len(m)
    covers = [
        [j for j in range(n) if m[i][j] and not any(m[i][k] and m[k][j] for k in range(n))]
        for i in range(n)
    ]
    has_pred = [any(m[k][j] for k in range(n)) for j in range(n)]
    memo: dict[int, int] = {}

    def paths_from(i: int) -> int:
        if i not in memo:
            if not covers[i]:
                memo[i] = 1
            else:
                memo[i] = min(limit, sum(paths_from(j) for j in covers[i]))
        return memo[i]

    total = 0
    for i in range(n):
        if not has_pred[i] and covers[i]:
            total += paths_from(i)
            if total >= limit:
                return limit
    return total


def has_scp_finite(p: PrefRelation, tuples: Sequence[tuple]) -> bool:
    """Single-chain property of ``p`` restricted to ``tuples``: at most one
    maximal chain with two or more elements."""
    m = finite_matrix(p, tuples)
    if not classify_matrix(m).is_spo:
        raise NotAnSPO("relation is not a strict partial order on the given tuples")
    return _maximal_chains(m, 2) <= 1
