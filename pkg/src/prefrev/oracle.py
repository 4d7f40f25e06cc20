"""Brute-force ground truth on finite universes.

Everything here works on explicit edge matrices and is deliberately
independent of the symbolic solver: formulas are evaluated directly on a grid
of values, closures are computed on graphs, and least revisions are found by
enumerating every candidate order.

Grid rule: the Q values of a grid are all constants occurring in the inputs,
``density`` points strictly between consecutive constants and ``density``
points beyond each end; the D values are all constants plus ``fresh``
symbols that occur nowhere else. Both constraint classes are invariant under
order- and equality-preserving relabelings, so a grid with enough points per
gap is a faithful finite proxy for the infinite domains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .formula import (
    FALSE,
    LEFT,
    RIGHT,
    TRUE,
    And,
    Atom,
    Const,
    Domain,
    Formula,
    Not,
    Or,
    PrefError,
    PrefRelation,
    Schema,
    TupleValue,
)
from .axioms import OrderClass

DEFAULT_CAP = 10_000


class UniverseTooLarge(PrefError):
    pass


class EnumerationCapExceeded(PrefError):
    pass


@dataclass(frozen=True)
class GridUniverse:
    schema: Schema
    tuples: tuple[TupleValue, ...]

    def __len__(self):
        return len(self.tuples)

    def index(self, t: TupleValue) -> int:
        return self.tuples.index(t)

    @classmethod
    def from_tuples(cls, schema: Schema, tuples: Iterable[TupleValue], cap: int = DEFAULT_CAP) -> "GridUniverse":
        ts = tuple(dict.fromkeys(tuple(t) for t in tuples))
        if len(ts) ** 2 > cap:
            raise UniverseTooLarge(f"{len(ts)} tuples give more than {cap} ground pairs")
        return cls(schema, ts)


def _constants(formulas: Iterable[Formula]) -> tuple[set, set]:
    qs, ds = set(), set()
    for f in formulas:
        for c in f.constants():
            (qs if c.domain is Domain.Q else ds).add(c.value)
    return qs, ds


def grid_values(q_consts: Iterable[Fraction], density: int = 1) -> list[Fraction]:
    cs = sorted(set(Fraction(c) for c in q_consts)) or [Fraction(0)]
    out = []
    step = Fraction(1, density + 1)
    for k in range(density, 0, -1):
        out.append(cs[0] - k)
    for a, b in zip(cs, cs[1:]):
        out.append(a)
        out.extend(a + (b - a) * step * i for i in range(1, density + 1))
    out.append(cs[-1])
    out.extend(cs[-1] + k for k in range(1, density + 1))
    return out


def faithful_density(schema: Schema, tuple_vars: int) -> tuple[int, int]:
    """Grid density and fresh-symbol count at which every formula over
    ``tuple_vars`` tuple variables of ``schema`` is decided correctly: each
    gap and each D column can host a distinct value for every variable."""
    nq = sum(1 for _, d in schema.attrs if d is Domain.Q)
    nd = len(schema) - nq
    return max(1, tuple_vars * nq), max(1, tuple_vars * nd)


def build_grid(
    schema: Schema,
    formulas: Iterable[Formula] = (),
    instances: Iterable[Iterable[TupleValue]] = (),
    density: int = 1,
    fresh: int = 2,
    cap: int = DEFAULT_CAP,
) -> GridUniverse:
    """Grid universe for ``schema`` covering every constant of the inputs."""
    qs, ds = _constants(formulas)
    for inst in instances:
        for t in inst:
            for v, (_, dom) in zip(t, schema.attrs):
                (qs if dom is Domain.Q else ds).add(v)
    qvals = grid_values(qs, density)
    dvals = sorted(ds) + [f"_fresh{i}" for i in range(1, fresh + 1)]
    per_attr = [qvals if dom is Domain.Q else dvals for _, dom in schema.attrs]
    size = 1
    for vs in per_attr:
        size *= len(vs)
    if size * size > cap:
        raise UniverseTooLarge(f"grid has {size} tuples, more than {cap} ground pairs")
    return GridUniverse(schema, tuple(product(*per_attr)))


def refine_grid(u: GridUniverse, density: int = 2, fresh: int = 2, cap: int = 10**8) -> GridUniverse:
    """A finer grid containing ``u``: ``density`` new values in every gap and
    beyond both ends of each Q column, ``fresh`` new symbols per D column."""
    per_attr = []
    for k, (_, dom) in enumerate(u.schema.attrs):
        vals = {t[k] for t in u.tuples}
        if dom is Domain.Q:
            per_attr.append(grid_values(vals, density))
        else:
            per_attr.append(sorted(vals) + [f"_extra{i}" for i in range(1, fresh + 1)])
    return GridUniverse.from_tuples(u.schema, product(*per_attr), cap)


@dataclass(frozen=True, eq=False)
class EdgeSet:
    universe: GridUniverse
    matrix: np.ndarray

    def __eq__(self, other):
        return (
            isinstance(other, EdgeSet)
            and self.universe.tuples == other.universe.tuples
            and np.array_equal(self.matrix, other.matrix)
        )

    def __len__(self):
        return int(self.matrix.sum())

    def __contains__(self, pair) -> bool:
        t1, t2 = pair
        u = self.universe
        return bool(self.matrix[u.index(tuple(t1)), u.index(tuple(t2))])

    def pairs(self) -> set[tuple[TupleValue, TupleValue]]:
        ts = self.universe.tuples
        return {(ts[i], ts[j]) for i, j in zip(*np.nonzero(self.matrix))}

    def issubset(self, other: "EdgeSet") -> bool:
        return not (self.matrix & ~other.matrix).any()

    @classmethod
    def from_pairs(cls, u: GridUniverse, pairs) -> "EdgeSet":
        m = np.zeros((len(u), len(u)), dtype=bool)
        for t1, t2 in pairs:
            m[u.index(tuple(t1)), u.index(tuple(t2))] = True
        return cls(u, m)


# ---------------------------------------------------------------------------
# materialization


class _Encoder:
    """Integer codes preserving order (Q) and identity (D)."""

    def __init__(self, u: GridUniverse, formulas: Sequence[Formula]):
        schema = u.schema
        qs, ds = _constants(formulas)
        for t in u.tuples:
            for v, (_, dom) in zip(t, schema.attrs):
                (qs if dom is Domain.Q else ds).add(v)
        self.q = {v: i for i, v in enumerate(sorted(qs))}
        self.d = {v: i for i, v in enumerate(sorted(ds))}
        cols = []
        for k, (_, dom) in enumerate(schema.attrs):
            table = self.q if dom is Domain.Q else self.d
            cols.append([table[t[k]] for t in u.tuples])
        self.codes = np.array(cols, dtype=np.int64).T.reshape(len(u.tuples), len(schema))
        self.schema = schema

    def term(self, t):
        if isinstance(t, Const):
            return (self.q if t.domain is Domain.Q else self.d)[t.value]
        col = self.codes[:, self.schema.index(t.attr)]
        if t.tvar == LEFT:
            return col[:, None]
        if t.tvar == RIGHT:
            return col[None, :]
        raise ValueError(f"cannot materialize tuple variable {t.tvar}")


_NP_OPS = {
    "=": np.equal,
    "!=": np.not_equal,
    "<": np.less,
    "<=": np.less_equal,
    ">": np.greater,
    ">=": np.greater_equal,
}


def _eval(f: Formula, enc: _Encoder, n: int) -> np.ndarray:
    if f is TRUE:
        return np.ones((n, n), dtype=bool)
    if f is FALSE:
        return np.zeros((n, n), dtype=bool)
    if isinstance(f, Atom):
        res = _NP_OPS[f.op](enc.term(f.lhs), enc.term(f.rhs))
        return np.broadcast_to(res, (n, n))
    if isinstance(f, Not):
        return ~_eval(f.arg, enc, n)
    parts = [_eval(a, enc, n) for a in f.args]
    if isinstance(f, And):
        return np.logical_and.reduce(parts)
    assert isinstance(f, Or)
    return np.logical_or.reduce(parts)


def materialize(p: PrefRelation, u: GridUniverse) -> EdgeSet:
    """All pairs of ``u`` related by ``p``."""
    n = len(u)
    enc = _Encoder(u, [p.formula])
    return EdgeSet(u, np.array(_eval(p.formula, enc, n), dtype=bool))


# ---------------------------------------------------------------------------
# graph algorithms


def _matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0


def tc_matrix(m: np.ndarray) -> np.ndarray:
    """Transitive closure by repeated squaring."""
    out = m.copy()
    while True:
        nxt = out | _matmul(out, out)
        if (nxt == out).all():
            return out
        out = nxt


def graph_tc(e: EdgeSet) -> EdgeSet:
    return EdgeSet(e.universe, tc_matrix(e.matrix))


def restrict(e: EdgeSet, u: GridUniverse) -> EdgeSet:
    """The edges of ``e`` between tuples of the sub-universe ``u``."""
    pos = {t: i for i, t in enumerate(e.universe.tuples)}
    idx = np.array([pos[t] for t in u.tuples], dtype=np.int64)
    return EdgeSet(u, e.matrix[np.ix_(idx, idx)])


def tc_on_grid(p: PrefRelation, u: GridUniverse, density: int = 2, fresh: int = 2) -> EdgeSet:
    """Graph transitive closure of ``p`` restricted to ``u``, with chains
    allowed to pass through the finer grid ``refine_grid(u)``."""
    fine = refine_grid(u, density, fresh)
    return restrict(graph_tc(materialize(p, fine)), u)


def axioms_matrix(m: np.ndarray) -> OrderClass:
    off = ~np.eye(m.shape[0], dtype=bool)
    return OrderClass(
        irreflexive=not np.diag(m).any(),
        transitive=not (_matmul(m, m) & ~m).any(),
        negatively_transitive=not (_matmul(~m, ~m) & m).any(),
        connected=bool((m | m.T)[off].all()),
    )


def graph_axioms(e: EdgeSet) -> OrderClass:
    return axioms_matrix(e.matrix)


def hidden_conflicts_prose(e: EdgeSet, e0: EdgeSet) -> set[tuple[TupleValue, TupleValue]]:
    """Pairs (t1, t2) with t1 ≻0 t2 and a chain t2 ≻ s1 ≻ ... ≻ sk ≻ t1
    (k ≥ 1) in ``e`` that uses no edge whose reverse is in ``e0``."""
    m, m0 = e.matrix, e0.matrix
    n = m.shape[0]
    allowed = m & ~m0.T
    succ = [np.nonzero(allowed[i])[0].tolist() for i in range(n)]
    ts = e.universe.tuples
    out = set()
    for t1, t2 in zip(*np.nonzero(m0)):
        # s1 ranges over successors of t2; sk must have an allowed edge to t1
        seen = set(succ[t2])
        stack = list(seen)
        found = False
        while stack:
            s = stack.pop()
            if allowed[s, t1]:
                found = True
                break
            for x in succ[s]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        if found:
            out.add((ts[t1], ts[t2]))
    return out


# ---------------------------------------------------------------------------
# brute-force least revisions


def _bits(m: np.ndarray) -> int:
    n = m.shape[0]
    out = 0
    for i, j in zip(*np.nonzero(m)):
        out |= 1 << (int(i) * n + int(j))
    return out


def _unbits(x: int, n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=bool)
    for k in range(n * n):
        if x >> k & 1:
            m[k // n, k % n] = True
    return m


def _spos_containing(n: int, base: np.ndarray, weak: bool, cap: int) -> Iterator[int]:
    """Every strict partial order (or weak order) on ``range(n)`` containing
    ``base``, as bitmasks. Built one element at a time: element k is placed
    by choosing the down-closed set below it and the up-closed set above it."""
    if np.diag(base).any():
        return
    req = [sum(1 << int(j) for j in np.nonzero(base[i])[0]) for i in range(n)]
    down = [0] * n
    up = [0] * n
    count = 0

    def submasks(free: int) -> Iterator[int]:
        sub = free
        while True:
            yield sub
            if sub == 0:
                return
            sub = (sub - 1) & free

    def members(mask: int) -> Iterator[int]:
        j = 0
        while mask:
            if mask & 1:
                yield j
            mask >>= 1
            j += 1

    def weak_ok(k: int) -> bool:
        # incomparability must stay transitive on 0..k
        for x in range(k + 1):
            for y in range(k + 1):
                if x == y or (down[x] >> y & 1) or (down[y] >> x & 1):
                    continue
                for z in range(k + 1):
                    if z == x or z == y or (down[y] >> z & 1) or (down[z] >> y & 1):
                        continue
                    if (down[x] >> z & 1) or (down[z] >> x & 1):
                        return False
        return True

    def rec(k: int) -> Iterator[int]:
        nonlocal count
        if k == n:
            count += 1
            if count > cap:
                raise EnumerationCapExceeded(f"more than {cap} candidate orders")
            out = 0
            for i in range(n):
                out |= down[i] << (i * n)
            yield out
            return
        prev = (1 << k) - 1
        if req[k] >> k & 1:
            return
        need_below = req[k] & prev
        need_above = sum(1 << j for j in range(k) if req[j] >> k & 1)
        for extra_b in submasks(prev & ~need_below):
            below = need_below | extra_b
            if any(down[j] & ~below for j in members(below)):
                continue
            for extra_a in submasks(prev & ~below & ~need_above):
                above = need_above | extra_a
                if above & below:
                    continue
                if any(up[j] & ~above for j in members(above)):
                    continue
                if any(below & ~down[a] for a in members(above)):
                    continue
                down[k], up[k] = below, above
                for j in members(below):
                    up[j] |= 1 << k
                for a in members(above):
                    down[a] |= 1 << k
                if not weak or weak_ok(k):
                    yield from rec(k + 1)
                for j in members(below):
                    up[j] &= ~(1 << k)
                for a in members(above):
                    down[a] &= ~(1 << k)
                down[k] = up[k] = 0

    yield from rec(0)


def _transitive_containing(n: int, base: np.ndarray, cap: int) -> Iterator[int]:
    if n > 4:
        raise EnumerationCapExceeded("transitive enumeration supports at most 4 tuples")
    b = _bits(base)
    free = ((1 << (n * n)) - 1) & ~b
    sub = free
    while True:
        x = b | sub
        if axioms_matrix(_unbits(x, n)).transitive:
            yield x
        if sub == 0:
            return
        sub = (sub - 1) & free


def revision_base(e: EdgeSet, e0: EdgeSet, mode: str) -> np.ndarray:
    m, m0 = e.matrix, e0.matrix
    if mode == "refine":
        return m | m0
    if mode == "override":
        indiff0 = ~m0 & ~m0.T
        return m0 | (indiff0 & m)
    raise ValueError(f"unknown mode {mode!r}")


def candidate_revisions(e: EdgeSet, e0: EdgeSet, mode: str, target: str, cap: int = 2_000_000) -> list[int]:
    n = len(e.universe)
    if n > 7:
        raise EnumerationCapExceeded("brute-force revision supports at most 7 tuples")
    base = revision_base(e, e0, mode)
    target = target.lower()
    if target == "spo":
        return list(_spos_containing(n, base, False, cap))
    if target == "weak":
        return list(_spos_containing(n, base, True, cap))
    if target == "transitive":
        return list(_transitive_containing(n, base, cap))
    raise ValueError(f"unknown target class {target!r}")


def minimal_revisions_bruteforce(e: EdgeSet, e0: EdgeSet, mode: str, target: str) -> list[EdgeSet]:
    """All revisions of the target class minimal in the closeness order."""
    n = len(e.universe)
    orig = _bits(e.matrix)
    cands = candidate_revisions(e, e0, mode, target)
    diffs = [c ^ orig for c in cands]
    minimal = []
    for c, d in zip(cands, diffs):
        if not any((d2 & ~d) == 0 and d2 != d for d2 in diffs):
            minimal.append(EdgeSet(e.universe, _unbits(c, n)))
    return minimal


def least_revision_bruteforce(e: EdgeSet, e0: EdgeSet, mode: str, target: str) -> EdgeSet | None:
    """The least revision of ``e`` with ``e0`` of the target class
    ("transitive", "spo" or "weak"), or None when there is no least one."""
    n = len(e.universe)
    orig = _bits(e.matrix)
    cands = candidate_revisions(e, e0, mode, target)
    if not cands:
        return None
    common = -1
    for c in cands:
        common &= c ^ orig
    for c in cands:
        if c ^ orig == common:
            return EdgeSet(e.universe, _unbits(c, n))
    return None
