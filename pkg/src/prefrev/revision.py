"""Refinement and overriding revision of preference relations.

``refine`` keeps both relations (the result contains ``p ∪ p0``); ``override``
lets the revising relation win (the result contains ``p0 ▷ p``). In both cases
the engine first tries the order-preservation results that license a cheap
construction and otherwise falls back to the transitive closure of the base,
which is always the least transitive revision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Collection, Sequence

from .algebra import (
    DEFAULT_MAX_ITER,
    difference,
    intersection,
    inverse,
    prioritized,
    transitive_closure,
    union_pref,
)
from .axioms import OrderClass, classify, classify_finite, finite_matrix, has_scp_finite
from .formula import (
    FALSE,
    LEFT,
    RIGHT,
    TRUE,
    Const,
    Domain,
    Formula,
    PrefError,
    PrefRelation,
    Schema,
    SchemaError,
    TupleValue,
    Var,
    atom,
    compile_pref,
    conj,
    disj,
    format_rational,
    swap,
)
from .solver import satisfiable, witness


class Mode(Enum):
    REFINE = "refine"
    OVERRIDE = "override"


class FastPath(Enum):
    SPO_UNION_SCP = "SPO_UNION_SCP"
    SPO_PRIORITY_SCP = "SPO_PRIORITY_SCP"
    SPO_WEAK_UNION = "SPO_WEAK_UNION"
    SPO_WEAK_PRIORITY = "SPO_WEAK_PRIORITY"
    WEAK_WEAK_UNION = "WEAK_WEAK_UNION"
    WEAK_WEAK_PRIORITY = "WEAK_WEAK_PRIORITY"
    GENERIC_TC = "GENERIC_TC"


@dataclass(frozen=True)
class CompatReport:
    compatible: bool
    semi_compatible: bool
    conflict_formula: Formula
    sample_conflict: str | None = None


@dataclass(frozen=True)
class RevisionReport:
    result: PrefRelation
    mode: Mode
    fast_path: FastPath
    result_class: OrderClass
    compat: CompatReport
    least: bool
    least_kind: str
    input_classes: tuple[OrderClass, OrderClass] = field(default=None, compare=False)

    def summary(self) -> str:
        checked = "guaranteed" if self.fast_path is not FastPath.GENERIC_TC else "checked"
        return (
            f"mode={self.mode.value} fast_path={self.fast_path.value} "
            f"class={self.result_class.derived.value} ({checked}) "
            f"least={'yes' if self.least else 'no'} ({self.least_kind}) "
            f"compatible={'yes' if self.compat.compatible else 'no'} "
            f"semi-compatible={'yes' if self.compat.semi_compatible else 'no'}"
        )


def _same_schema(p: PrefRelation, p0: PrefRelation) -> None:
    if p.schema != p0.schema:
        raise SchemaError(f"schema mismatch: {p.schema.name} vs {p0.schema.name}")


# ---------------------------------------------------------------------------
# conflicts


def conflicts(p: PrefRelation, p0: PrefRelation) -> Formula:
    """Pairs (L, R) with L preferred to R by ``p0`` and R preferred to L by ``p``."""
    _same_schema(p, p0)
    return conj(p0.formula, swap(p.formula))


def is_compatible(p: PrefRelation, p0: PrefRelation) -> bool:
    return not satisfiable(conflicts(p, p0))


def hidden_conflicts(p: PrefRelation, p0: PrefRelation, max_iter: int = DEFAULT_MAX_ITER) -> Formula:
    """Conflicts supported by a ``p``-chain none of whose edges ``p0`` reverses.

    Symbolically: inverse(p0) ∩ TC(p − inverse(p0)), read with (L, R) = (t2, t1).
    """
    _same_schema(p, p0)
    chains = transitive_closure(difference(p, inverse(p0)), max_iter)
    return intersection(inverse(p0), chains).formula


def is_semi_compatible(p: PrefRelation, p0: PrefRelation, max_iter: int = DEFAULT_MAX_ITER) -> bool:
    return not satisfiable(hidden_conflicts(p, p0, max_iter))


def _render_conjunct(c) -> str:
    return " and ".join(a.render() for a in sorted(c)) or "true"


def compat_report(p: PrefRelation, p0: PrefRelation, max_iter: int = DEFAULT_MAX_ITER) -> CompatReport:
    cf = conflicts(p, p0)
    w = witness(cf)
    compatible = w is None
    if compatible and classify(p).is_spo:
        semi = True
    else:
        semi = is_semi_compatible(p, p0, max_iter)
    return CompatReport(compatible, semi, cf, None if w is None else _render_conjunct(w))


def _finite_compat(p: PrefRelation, p0: PrefRelation, tuples: Sequence[TupleValue]) -> CompatReport:
    m = finite_matrix(p, tuples)
    m0 = finite_matrix(p0, tuples)
    n = len(tuples)
    sample = None
    for i in range(n):
        for j in range(n):
            if m0[i][j] and m[j][i]:
                sample = f"{tuples[i]!r} -> {tuples[j]!r}"
                break
        if sample:
            break
    # chains of p that p0 never reverses
    reach = [[m[i][j] and not m0[j][i] for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    semi = not any(m0[i][j] and reach[j][i] for i in range(n) for j in range(n))
    return CompatReport(sample is None, semi, conflicts(p, p0), sample)


# ---------------------------------------------------------------------------
# revision


class _Inputs:
    """Order classes, SCP and compatibility of the two inputs, either
    symbolically or with ``domain`` taken as the whole (finite) domain."""

    def __init__(self, p, p0, scp_assertions, domain, max_iter):
        _same_schema(p, p0)
        self.p, self.p0 = p, p0
        self.domain = None if domain is None else tuple(domain)
        self.max_iter = max_iter
        self.scp_assertions = set(scp_assertions)
        self.cls = self.classify(p)
        self.cls0 = self.classify(p0)
        if self.domain is None:
            self.compat = compat_report(p, p0, max_iter)
        else:
            self.compat = _finite_compat(p, p0, self.domain)

    def classify(self, q: PrefRelation) -> OrderClass:
        if self.domain is None:
            return classify(q)
        return classify_finite(q, self.domain)

    def scp(self, q: PrefRelation, cls: OrderClass) -> bool:
        if q.name is not None and q.name in self.scp_assertions:
            return True
        if self.domain is not None and cls.is_spo:
            return has_scp_finite(q, self.domain)
        return False


def _report(inputs: _Inputs, result, mode, fast_path, least_kind) -> RevisionReport:
    return RevisionReport(
        result=result,
        mode=mode,
        fast_path=fast_path,
        result_class=inputs.classify(result),
        compat=inputs.compat,
        least=True,
        least_kind=least_kind,
        input_classes=(inputs.cls, inputs.cls0),
    )


def refine(
    p: PrefRelation,
    p0: PrefRelation,
    scp_assertions: Collection[str] = (),
    domain: Sequence[TupleValue] | None = None,
    max_iter: int = DEFAULT_MAX_ITER,
) -> RevisionReport:
    """Revise ``p`` with ``p0`` keeping both.

    ``scp_assertions`` names relations the caller asserts to have the
    single-chain property. If ``domain`` is given, it is treated as the whole
    domain when checking order classes, SCP and compatibility; this is meant
    for relations whose pairs all lie within it.
    """
    ins = _Inputs(p, p0, scp_assertions, domain, max_iter)
    base = union_pref(p, p0)
    c, c0, ok = ins.cls, ins.cls0, ins.compat.compatible
    if ok and c.is_weak and c0.is_weak:
        return _report(ins, base, Mode.REFINE, FastPath.WEAK_WEAK_UNION, "weak order")
    if ok and ((c.is_spo and c0.is_weak) or (c.is_weak and c0.is_spo)):
        return _report(ins, base, Mode.REFINE, FastPath.SPO_WEAK_UNION, "SPO")
    if ok and c.is_spo and c0.is_spo and (ins.scp(p, c) or ins.scp(p0, c0)):
        result = transitive_closure(base, max_iter)
        return _report(ins, result, Mode.REFINE, FastPath.SPO_UNION_SCP, "SPO")
    result = transitive_closure(base, max_iter)
    return _report(ins, result, Mode.REFINE, FastPath.GENERIC_TC, "transitive")


def override(
    p: PrefRelation,
    p0: PrefRelation,
    scp_assertions: Collection[str] = (),
    domain: Sequence[TupleValue] | None = None,
    max_iter: int = DEFAULT_MAX_ITER,
) -> RevisionReport:
    """Revise ``p`` with ``p0``, letting ``p0`` override conflicting
    preferences of ``p``. Arguments as for :func:`refine`."""
    ins = _Inputs(p, p0, scp_assertions, domain, max_iter)
    base = prioritized(p0, p)
    c, c0 = ins.cls, ins.cls0
    if c0.is_weak and c.is_weak:
        return _report(ins, base, Mode.OVERRIDE, FastPath.WEAK_WEAK_PRIORITY, "weak order")
    if c0.is_weak and c.is_spo:
        return _report(ins, base, Mode.OVERRIDE, FastPath.SPO_WEAK_PRIORITY, "SPO")
    if c.is_spo and c0.is_spo and ins.compat.semi_compatible and ins.scp(p0, c0):
        result = transitive_closure(base, max_iter)
        return _report(ins, result, Mode.OVERRIDE, FastPath.SPO_PRIORITY_SCP, "SPO")
    result = transitive_closure(base, max_iter)
    return _report(ins, result, Mode.OVERRIDE, FastPath.GENERIC_TC, "transitive")


def revise(p, p0, mode: Mode | str, **kw) -> RevisionReport:
    mode = Mode(mode)
    return refine(p, p0, **kw) if mode is Mode.REFINE else override(p, p0, **kw)


# ---------------------------------------------------------------------------
# utilities


class InexpressibleUtility(PrefError):
    """The utility comparison is not expressible with order/equality atoms."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class UtilityExpr:
    """``const + Σ coeff·t.attr + Σ coeff·[t.attr = constant]``.

    Linear terms range over Q attributes, indicator terms over D attributes.
    """

    const: Fraction = Fraction(0)
    linear: tuple[tuple[str, Fraction], ...] = ()
    indicators: tuple[tuple[str, str, Fraction], ...] = ()

    def __post_init__(self):
        lin: dict[str, Fraction] = {}
        for a, k in self.linear:
            lin[a] = lin.get(a, Fraction(0)) + _frac(k)
        ind: dict[tuple[str, str], Fraction] = {}
        for a, v, k in self.indicators:
            ind[(a, v)] = ind.get((a, v), Fraction(0)) + _frac(k)
        object.__setattr__(self, "const", _frac(self.const))
        object.__setattr__(self, "linear", tuple(sorted((a, k) for a, k in lin.items() if k)))
        object.__setattr__(
            self, "indicators", tuple(sorted((a, v, k) for (a, v), k in ind.items() if k))
        )

    def check(self, schema: Schema) -> None:
        for a, _ in self.linear:
            if schema.domain_of(a) is not Domain.Q:
                raise SchemaError(f"linear utility term on non-Q attribute {a}")
        for a, _, _ in self.indicators:
            if schema.domain_of(a) is not Domain.D:
                raise SchemaError(f"indicator utility term on non-D attribute {a}")

    def evaluate(self, schema: Schema, t: TupleValue) -> Fraction:
        total = self.const
        for a, k in self.linear:
            total += k * t[schema.index(a)]
        for a, v, k in self.indicators:
            if t[schema.index(a)] == v:
                total += k
        return total

    def scaled(self, k) -> "UtilityExpr":
        k = _frac(k)
        return UtilityExpr(
            self.const * k,
            tuple((a, c * k) for a, c in self.linear),
            tuple((a, v, c * k) for a, v, c in self.indicators),
        )

    def __add__(self, other: "UtilityExpr") -> "UtilityExpr":
        return UtilityExpr(
            self.const + other.const,
            self.linear + other.linear,
            self.indicators + other.indicators,
        )

    @property
    def is_constant(self) -> bool:
        return not self.linear and not self.indicators

    def render(self) -> str:
        parts = []
        for a, k in self.linear:
            parts.append(f"{format_rational(k)}·x.{a}")
        for a, v, k in self.indicators:
            quoted = v.replace("'", "''")
            parts.append(f"{format_rational(k)}·[x.{a}='{quoted}']")
        if self.const or not parts:
            parts.append(format_rational(self.const))
        return " + ".join(parts)


def combine_utilities(u: UtilityExpr, u0: UtilityExpr, a, b, c=0) -> UtilityExpr:
    """``a·u + b·u0 + c`` with ``a, b > 0``."""
    a, b, c = _frac(a), _frac(b), _frac(c)
    if a <= 0 or b <= 0:
        raise ValueError("utility weights a and b must be positive")
    return u.scaled(a) + u0.scaled(b) + UtilityExpr(c)


def represents(u: UtilityExpr, p: PrefRelation, r) -> bool:
    """Does ``u`` represent ``p`` on the finite set of tuples ``r``?"""
    better = compile_pref(p)
    rows = list(r)
    values = [u.evaluate(p.schema, t) for t in rows]
    return all(
        better(t1, t2) == (v1 > v2)
        for t1, v1 in zip(rows, values)
        for t2, v2 in zip(rows, values)
    )


def _regions(u: UtilityExpr, schema: Schema) -> dict[Fraction, list]:
    """Map each value of an indicator-only utility to the list of case
    builders (tvar -> Formula) on which it takes that value."""
    per_attr: dict[str, dict[str, Fraction]] = {}
    for a, v, k in u.indicators:
        per_attr.setdefault(a, {})[v] = k
    attr_cases = []
    for a in sorted(per_attr):
        consts = per_attr[a]
        cases = [((a, v), k) for v, k in sorted(consts.items())]
        cases.append(((a, None), Fraction(0)))
        attr_cases.append(cases)
    regions: dict[Fraction, list] = {}
    for combo in product(*attr_cases):
        value = u.const + sum(k for _, k in combo)
        picks = [case for case, _ in combo]

        def build(tvar, picks=picks):
            atoms = []
            for a, v in picks:
                var = Var(tvar, a, Domain.D)
                if v is not None:
                    atoms.append(atom("=", var, Const(Domain.D, v)))
                else:
                    atoms.extend(atom("!=", var, Const(Domain.D, c)) for c in sorted(per_attr[a]))
            return conj(*atoms)

        regions.setdefault(value, []).append(build)
    return regions


def _utility_compare(u: UtilityExpr, schema: Schema, op: str) -> Formula:
    u.check(schema)
    if u.is_constant:
        return FALSE if op == ">" else TRUE
    if u.linear:
        if u.indicators or len(u.linear) > 1:
            raise InexpressibleUtility(
                f"comparing {u.render()} needs arithmetic over attributes"
            )
        a, k = u.linear[0]
        lv, rv = Var(LEFT, a, Domain.Q), Var(RIGHT, a, Domain.Q)
        if op == "=":
            return atom("=", lv, rv)
        return atom(">" if k > 0 else "<", lv, rv)
    regions = _regions(u, schema)
    region_formula = {
        v: (lambda tv, bs=bs: disj(*(b(tv) for b in bs))) for v, bs in regions.items()
    }
    values = sorted(region_formula)
    if op == "=":
        return disj(*(conj(region_formula[v](LEFT), region_formula[v](RIGHT)) for v in values))
    return disj(
        *(
            conj(region_formula[v](LEFT), region_formula[w](RIGHT))
            for v in values
            for w in values
            if v > w
        )
    )


def utility_relation(u: UtilityExpr, schema: Schema, name: str | None = None) -> PrefRelation:
    """The weak order ``u(L) > u(R)``."""
    return PrefRelation(schema, _utility_compare(u, schema, ">"), name)


def utility_tie(u: UtilityExpr, schema: Schema) -> Formula:
    return _utility_compare(u, schema, "=")


def refine_utility_scenario(u: UtilityExpr, u0: UtilityExpr, schema: Schema) -> PrefRelation:
    """Refine the order of ``u`` by breaking its ties with ``u0``."""
    base = utility_relation(u, schema)
    tie_break = PrefRelation(schema, conj(utility_tie(u, schema), _utility_compare(u0, schema, ">")))
    return union_pref(base, tie_break)
