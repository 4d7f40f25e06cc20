"""Operators that build new preference relations from old ones."""

from __future__ import annotations

from .formula import (
    FALSE,
    LEFT,
    RIGHT,
    PrefError,
    PrefRelation,
    SchemaError,
    conj,
    disj,
    from_conjuncts,
    neg,
    swap,
    vars_of,
)
from .solver import Conjunct, conjunct_entails_formula, dnf, eliminate_all, sat_conjunct, subsume

MID = "M"
DEFAULT_MAX_ITER = 64


class IterationCapExceeded(PrefError):
    """The transitive-closure fixpoint did not stabilize within the cap."""


def _same_schema(p1: PrefRelation, p2: PrefRelation) -> None:
    if p1.schema != p2.schema:
        raise SchemaError(f"schema mismatch: {p1.schema.name} vs {p2.schema.name}")


def empty(schema) -> PrefRelation:
    return PrefRelation(schema, FALSE, "empty")


def union_pref(p1: PrefRelation, p2: PrefRelation) -> PrefRelation:
    _same_schema(p1, p2)
    return p1.with_formula(disj(p1.formula, p2.formula))


def indifference(p: PrefRelation) -> PrefRelation:
    """Pairs where neither tuple is preferred to the other."""
    return p.with_formula(conj(neg(p.formula), neg(swap(p.formula))))


def prioritized(p0: PrefRelation, p: PrefRelation) -> PrefRelation:
    """``p0`` first; ``p`` decides only between ``p0``-indifferent tuples."""
    _same_schema(p0, p)
    return p.with_formula(disj(p0.formula, conj(indifference(p0).formula, p.formula)))


def inverse(p: PrefRelation) -> PrefRelation:
    return p.with_formula(swap(p.formula))


def difference(p1: PrefRelation, p2: PrefRelation) -> PrefRelation:
    _same_schema(p1, p2)
    return p1.with_formula(conj(p1.formula, neg(p2.formula)))


def intersection(p1: PrefRelation, p2: PrefRelation) -> PrefRelation:
    _same_schema(p1, p2)
    return p1.with_formula(conj(p1.formula, p2.formula))


def _compose_conjuncts(schema, c1: Conjunct, c2: Conjunct) -> list[Conjunct]:
    """``∃M. c1(L, M) ∧ c2(M, R)`` for conjuncts over L/R."""
    left = frozenset(a.rename({RIGHT: MID}) for a in c1)
    right = frozenset(a.rename({LEFT: MID}) for a in c2)
    merged = left | right
    if not sat_conjunct(merged):
        return []
    return eliminate_all(vars_of(schema, MID), merged)


def compose_dnf(schema, d1: list[Conjunct], d2: list[Conjunct]) -> list[Conjunct]:
    out = []
    for c1 in d1:
        for c2 in d2:
            out.extend(_compose_conjuncts(schema, c1, c2))
    return subsume(out)


def compose(p1: PrefRelation, p2: PrefRelation) -> PrefRelation:
    """Relational composition: ``L`` relates to ``R`` through some middle tuple."""
    _same_schema(p1, p2)
    out = compose_dnf(p1.schema, dnf(p1.formula), dnf(p2.formula))
    return p1.with_formula(from_conjuncts(out))


def transitive_closure(p: PrefRelation, max_iter: int = DEFAULT_MAX_ITER) -> PrefRelation:
    """Least transitive relation containing ``p``.

    Left-linear semi-naive iteration: each round composes the base conjuncts
    with the conjuncts added in the previous round, keeping only those not
    already entailed by the accumulated formula. The loop stops when a round
    adds nothing, i.e. the next iterate is equivalent to the current one.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    base = dnf(p.formula)
    current = list(base)
    delta = list(base)
    for _ in range(max_iter):
        found: list[Conjunct] = []
        for c1 in base:
            for c2 in delta:
                for c in _compose_conjuncts(p.schema, c1, c2):
                    if not conjunct_entails_formula(c, from_conjuncts(current + found)):
                        found.append(c)
        if not found:
            return p.with_formula(from_conjuncts(current))
        current = subsume(current + found)
        delta = found
    raise IterationCapExceeded(f"transitive closure did not converge in {max_iter} iterations")
