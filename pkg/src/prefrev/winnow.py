"""Winnow: the undominated tuples of a finite instance."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .axioms import classify
from .formula import PrefError, PrefRelation, Schema, SchemaError, TupleValue, check_tuple, compile_pref
from .solver import entails

log = logging.getLogger(__name__)


class PreconditionError(PrefError):
    """An algorithm was applied to a relation outside its precondition."""


class ChainError(PrefError):
    def __init__(self, message: str, index: int):
        self.index = index
        super().__init__(message)


@dataclass(frozen=True)
class RelationInstance:
    schema: Schema
    rows: tuple[TupleValue, ...]
    names: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        for r in self.rows:
            check_tuple(self.schema, r)
        if len(set(self.rows)) != len(self.rows):
            raise SchemaError("instance contains duplicate tuples")
        if self.names is not None and len(self.names) != len(self.rows):
            raise SchemaError("one name per tuple expected")

    @classmethod
    def from_rows(cls, schema: Schema, rows, names=None) -> "RelationInstance":
        """Build an instance, collapsing duplicate tuples (first one wins)."""
        seen: dict = {}
        kept_names = []
        for i, r in enumerate(rows):
            r = tuple(r)
            if r in seen:
                log.warning("duplicate tuple %r dropped", r)
                continue
            seen[r] = None
            if names is not None:
                kept_names.append(names[i])
        return cls(schema, tuple(seen), tuple(kept_names) if names is not None else None)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __contains__(self, t):
        return t in self.rows

    def subset(self, keep: Sequence[bool]) -> "RelationInstance":
        rows = tuple(r for r, k in zip(self.rows, keep) if k)
        names = None
        if self.names is not None:
            names = tuple(n for n, k in zip(self.names, keep) if k)
        return RelationInstance(self.schema, rows, names)

    def name_of(self, t: TupleValue) -> str:
        if self.names is None:
            return repr(t)
        return self.names[self.rows.index(t)]


def _check(p: PrefRelation, r: RelationInstance) -> None:
    if p.schema != r.schema:
        raise SchemaError(f"schema mismatch: {p.schema.name} vs {r.schema.name}")


class _Counted:
    def __init__(self, fn: Callable):
        self.fn = fn
        self.calls = 0

    def __call__(self, a, b):
        self.calls += 1
        return self.fn(a, b)


def winnow_generic(p: PrefRelation, r: RelationInstance) -> RelationInstance:
    """Pairwise test of every tuple against every other; no axioms assumed."""
    _check(p, r)
    better = compile_pref(p)
    rows = r.rows
    return r.subset([not any(better(s, t) for s in rows) for t in rows])


def winnow_bnl(p: PrefRelation, r: RelationInstance) -> RelationInstance:
    """Block-nested-loop winnow. Requires ``p`` to be a strict partial order."""
    _check(p, r)
    better = compile_pref(p)
    window: list[int] = []
    rows = r.rows
    for i, t in enumerate(rows):
        if better(t, t):
            raise PreconditionError(f"relation is reflexive on {t!r}; not an SPO")
        dominated = False
        beaten = []
        for j in window:
            w = rows[j]
            wt = better(w, t)
            tw = better(t, w)
            if wt and tw:
                raise PreconditionError(f"dominance cycle between {w!r} and {t!r}; not an SPO")
            if wt:
                dominated = True
                break
            if tw:
                beaten.append(j)
        if dominated:
            continue
        if beaten:
            window = [j for j in window if j not in beaten]
        window.append(i)
    keep = set(window)
    return r.subset([i in keep for i in range(len(rows))])


def winnow_weak(p: PrefRelation, r: RelationInstance, stats: dict | None = None) -> RelationInstance:
    """Single pass for weak orders: members of the current top layer are
    mutually indifferent, so one representative is compared per tuple.

    ``stats["evaluations"]`` receives the number of ground comparisons.
    """
    _check(p, r)
    better = _Counted(compile_pref(p))
    top: list[int] = []
    rep = None
    for i, t in enumerate(r.rows):
        if rep is None:
            top, rep = [i], t
        elif better(rep, t):
            continue
        elif better(t, rep):
            top, rep = [i], t
        else:
            top.append(i)
    if stats is not None:
        stats["evaluations"] = better.calls
    keep = set(top)
    return r.subset([i in keep for i in range(len(r.rows))])


def winnow_auto(p: PrefRelation, r: RelationInstance) -> RelationInstance:
    cls = classify(p)
    if cls.is_weak:
        return winnow_weak(p, r)
    if cls.is_spo:
        return winnow_bnl(p, r)
    return winnow_generic(p, r)


ALGORITHMS = {
    "auto": winnow_auto,
    "generic": winnow_generic,
    "bnl": winnow_bnl,
    "weak": winnow_weak,
}


def iterate_winnow(
    chain: Sequence[PrefRelation],
    r: RelationInstance,
    assume_spo: bool = False,
) -> list[RelationInstance]:
    """Winnow a fixed instance under a growing chain of SPOs, each step
    starting from the previous result instead of the full instance."""
    if not chain:
        return [r]
    for i, p in enumerate(chain):
        _check(p, r)
        if not assume_spo and not classify(p).is_spo:
            raise ChainError(f"chain member {i} is not an SPO", i)
        if i and not entails(chain[i - 1].formula, p.formula):
            raise ChainError(f"chain member {i - 1} is not contained in member {i}", i)
    results = [r]
    for p in chain:
        results.append(winnow_bnl(p, results[-1]))
    return results
