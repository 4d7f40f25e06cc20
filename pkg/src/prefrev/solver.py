"""Decision procedures for equality constraints over D and dense-order
constraints over Q.

Conjuncts are frozensets of normalized atoms. The D part is decided with
union-find; the Q part with the closure of the bound graph (edges ``x <= y``
and ``x < y``, constants linked in their natural order). Because Q is dense,
a ``!=`` atom only fails when both sides are forced equal.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Const,
    Domain,
    Formula,
    Or,
    Var,
    atom,
    conj,
    from_conjuncts,
    neg,
    nnf,
)

Conjunct = frozenset


# ---------------------------------------------------------------------------
# conjunct satisfiability


def _sat_d(atoms: list[Atom]) -> bool:
    parent: dict = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != root:
            parent[x], x = root, parent[x]
        return root

    neqs = []
    for a in atoms:
        if a.op == "=":
            ra, rb = find(a.lhs), find(a.rhs)
            if ra != rb:
                # keep constants as class representatives
                if isinstance(ra, Const):
                    ra, rb = rb, ra
                if isinstance(ra, Const):
                    return False
                parent[ra] = rb
        else:
            neqs.append(a)
    return all(find(a.lhs) != find(a.rhs) for a in neqs)


def _q_closure(atoms: list[Atom]):
    """Return (index, rel) where rel[i][j] is None (no bound), 0 (i <= j)
    or 1 (i < j) after transitive closure."""
    nodes: dict = {}

    def idx(t):
        if t not in nodes:
            nodes[t] = len(nodes)
        return nodes[t]

    edges = []
    for a in atoms:
        i, j = idx(a.lhs), idx(a.rhs)
        op = a.op
        if op == "=":
            edges.append((i, j, 0))
            edges.append((j, i, 0))
        elif op == "<":
            edges.append((i, j, 1))
        elif op == "<=":
            edges.append((i, j, 0))
        elif op == ">":
            edges.append((j, i, 1))
        elif op == ">=":
            edges.append((j, i, 0))
    consts = sorted((t for t in nodes if isinstance(t, Const)), key=lambda c: c.value)
    for c1, c2 in zip(consts, consts[1:]):
        edges.append((nodes[c1], nodes[c2], 1))
    n = len(nodes)
    rel = [[None] * n for _ in range(n)]
    for i, j, s in edges:
        if rel[i][j] is None or rel[i][j] < s:
            rel[i][j] = s
    for k in range(n):
        rk = rel[k]
        for i in range(n):
            ik = rel[i][k]
            if ik is None:
                continue
            ri = rel[i]
            for j in range(n):
                kj = rk[j]
                if kj is None:
                    continue
                s = ik if ik > kj else kj
                if ri[j] is None or ri[j] < s:
                    ri[j] = s
    return nodes, rel


def _sat_q(atoms: list[Atom]) -> bool:
    nodes, rel = _q_closure(atoms)
    for i in range(len(nodes)):
        if rel[i][i] == 1:
            return False
    for a in atoms:
        if a.op == "!=":
            i, j = nodes[a.lhs], nodes[a.rhs]
            if rel[i][j] is not None and rel[j][i] is not None:
                return False
    return True


@lru_cache(maxsize=1 << 18)
def sat_conjunct(c: Conjunct) -> bool:
    """Is the conjunction of atoms satisfiable over infinite D and dense Q?"""
    d_atoms = [a for a in c if a.domain is Domain.D]
    q_atoms = [a for a in c if a.domain is Domain.Q]
    if d_atoms and not _sat_d(d_atoms):
        return False
    if q_atoms and not _sat_q(q_atoms):
        return False
    return True


def implies_atom(c: Conjunct, a: Atom) -> bool:
    return a in c or not sat_conjunct(c | {a.negate()})


def conjunct_entails(c1: Conjunct, c2: Conjunct) -> bool:
    """Does conjunct ``c1`` entail conjunct ``c2``?"""
    if c2 <= c1:
        return True
    return all(implies_atom(c1, a) for a in c2)


# ---------------------------------------------------------------------------
# DNF search


def _search(pending: list[Formula], conj_atoms: Conjunct, ors: list[Or]) -> Iterator[Conjunct]:
    """Enumerate satisfiable conjuncts covering ``pending ∧ conj_atoms ∧ ors``.

    ``pending`` holds NNF formulas still to be absorbed. Disjunctions are
    branched on one at a time, choosing unit clauses first, then disjunctions
    with compound alternatives, then the fewest remaining alternatives.
    """
    added = []
    ors = list(ors)
    stack = list(pending)
    while stack:
        f = stack.pop()
        if f is TRUE:
            continue
        if f is FALSE:
            return
        if isinstance(f, Atom):
            if f not in conj_atoms:
                added.append(f)
        elif isinstance(f, And):
            stack.extend(f.args)
        else:
            ors.append(f)
    if added:
        conj_atoms = conj_atoms.union(added)
        if not sat_conjunct(conj_atoms):
            return
    if not ors:
        yield conj_atoms
        return

    best = None
    best_key = None
    rest = []
    for o in ors:
        alts = []
        compound = False
        satisfied = False
        for d in o.args:
            if isinstance(d, Atom):
                if implies_atom(conj_atoms, d):
                    satisfied = True
                    break
                if not sat_conjunct(conj_atoms | {d}):
                    continue
            else:
                compound = True
            alts.append(d)
        if satisfied:
            continue
        if not alts:
            return
        key = (len(alts) > 1, not compound, len(alts))
        if best is None or key < best_key:
            if best is not None:
                rest.append(best[0])
            best, best_key = (o, alts), key
        else:
            rest.append(o)
    if best is None:
        yield conj_atoms
        return
    for alt in best[1]:
        yield from _search([alt], conj_atoms, rest)


def _raw_dnf(f: Formula) -> Iterator[Conjunct]:
    return _search([nnf(f)], frozenset(), [])


def subsume(conjuncts: Iterable[Conjunct]) -> list[Conjunct]:
    """Drop conjuncts entailed by another conjunct (keeping the first of any
    equivalent group)."""
    kept: list[Conjunct] = []
    for c in conjuncts:
        if any(conjunct_entails(c, k) for k in kept):
            continue
        kept = [k for k in kept if not conjunct_entails(k, c)]
        kept.append(c)
    return kept


def dnf(f: Formula) -> list[Conjunct]:
    """Satisfiable, subsumption-reduced DNF of ``f`` as atom sets."""
    return subsume(_raw_dnf(f))


def simplify(f: Formula) -> Formula:
    return from_conjuncts(dnf(f))


def satisfiable(f: Formula) -> bool:
    return next(iter(_raw_dnf(f)), None) is not None


def witness(f: Formula) -> Conjunct | None:
    """A satisfiable conjunct of ``f`` or None."""
    return next(iter(_raw_dnf(f)), None)


def entails(f: Formula, g: Formula) -> bool:
    """True iff every assignment satisfying ``f`` satisfies ``g``."""
    return not satisfiable(conj(f, neg(g)))


def equivalent(f: Formula, g: Formula) -> bool:
    return entails(f, g) and entails(g, f)


def conjunct_entails_formula(c: Conjunct, g: Formula) -> bool:
    if not sat_conjunct(c):
        return True
    return next(_search([nnf(neg(g))], c, []), None) is None


# ---------------------------------------------------------------------------
# quantifier elimination


def _substitute_all(c: Iterable[Atom], v: Var, t) -> Conjunct | None:
    out = []
    for a in c:
        b = a.substitute(v, t)
        if b is FALSE:
            return None
        if b is not TRUE:
            out.append(b)
    return frozenset(out)


def _bound(a: Atom, v: Var) -> tuple[str, object, bool]:
    """Orient an order atom around ``v``: ('lo', t, strict) means t < v or
    t <= v; ('hi', t, strict) means v < t or v <= t."""
    op = a.op
    if a.lhs == v:
        other = a.rhs
    else:
        other = a.lhs
        op = {"<": ">", "<=": ">=", ">": "<", ">=": "<="}[op]
    # now the atom reads ``v op other``
    if op == "<":
        return ("hi", other, True)
    if op == "<=":
        return ("hi", other, False)
    if op == ">":
        return ("lo", other, True)
    return ("lo", other, False)


def eliminate(v: Var, c: Conjunct) -> list[Conjunct]:
    """Quantifier-free DNF of ``∃v. c``."""
    if not sat_conjunct(c):
        return []
    mentioning = sorted(a for a in c if a.mentions(v))
    if not mentioning:
        return [c]
    others = [a for a in c if not a.mentions(v)]
    for a in mentioning:
        if a.op == "=":
            t = a.rhs if a.lhs == v else a.lhs
            out = _substitute_all(c - {a}, v, t)
            return [out] if out is not None and sat_conjunct(out) else []
    if v.domain is Domain.D:
        # only disequalities left; the infinite domain always has a witness
        return [frozenset(others)]

    neqs = [a for a in mentioning if a.op == "!="]
    orders = [a for a in mentioning if a.op != "!="]
    results = []
    for signs in product(("<", ">"), repeat=len(neqs)):
        split = list(orders)
        for a, s in zip(neqs, signs):
            split.append(atom(s, a.lhs, a.rhs))
        lows, highs = [], []
        for a in split:
            side, t, strict = _bound(a, v)
            (lows if side == "lo" else highs).append((t, strict))
        new = list(others)
        ok = True
        for (lo, s1), (hi, s2) in product(lows, highs):
            b = atom("<" if (s1 or s2) else "<=", lo, hi)
            if b is FALSE:
                ok = False
                break
            if b is not TRUE:
                new.append(b)
        if not ok:
            continue
        nc = frozenset(new)
        if sat_conjunct(nc):
            results.append(nc)
    return subsume(results)


def eliminate_exists(v: Var, c: Conjunct | Iterable[Atom]) -> Formula:
    """Quantifier-free formula equivalent to ``∃v. c``."""
    return from_conjuncts(eliminate(v, frozenset(c)))


def eliminate_all(vs: Sequence[Var], c: Conjunct) -> list[Conjunct]:
    """Eliminate ``vs`` in order, returning a subsumption-reduced DNF."""
    current = [c]
    for v in vs:
        nxt = []
        for x in current:
            nxt.extend(eliminate(v, x))
        current = nxt
        if not current:
            return []
    return subsume(current)
