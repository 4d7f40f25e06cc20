"""Constraint formulas over two tuple variables.

A preference relation is written as a boolean combination of atoms comparing
attributes of the left tuple ``L`` and the right tuple ``R`` with each other or
with constants. D attributes hold uninterpreted constants and admit only
``=``/``!=``; Q attributes hold exact rationals and admit the full set of order
comparisons.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union


class PrefError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PrefError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class SchemaError(PrefError):
    """Unknown attribute, arity mismatch or schema mismatch."""


class UnsupportedConstraint(ParseError):
    """An atom outside the equality / rational-order constraint classes."""


class Domain(Enum):
    D = "D"
    Q = "Q"


@dataclass(frozen=True)
class Schema:
    name: str
    attrs: tuple[tuple[str, Domain], ...]

    def __post_init__(self):
        if not self.attrs:
            raise SchemaError(f"schema {self.name} has no attributes")
        names = [a for a, _ in self.attrs]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate attribute names in schema {self.name}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.attrs)

    def __len__(self) -> int:
        return len(self.attrs)

    def index(self, attr: str) -> int:
        for i, (a, _) in enumerate(self.attrs):
            if a == attr:
                return i
        raise SchemaError(f"unknown attribute {attr!r} in schema {self.name}")

    def domain_of(self, attr: str) -> Domain:
        return self.attrs[self.index(attr)][1]

    def render(self) -> str:
        body = ", ".join(f"{a}: {d.value}" for a, d in self.attrs)
        return f"relation {self.name} ({body})"


# ---------------------------------------------------------------------------
# terms and atoms


class Var:
    """Attribute ``attr`` of tuple variable ``tvar``."""

    __slots__ = ("tvar", "attr", "domain", "_hash")

    def __init__(self, tvar: str, attr: str, domain: Domain):
        self.tvar = tvar
        self.attr = attr
        self.domain = domain
        self._hash = hash((tvar, attr, domain))

    def __eq__(self, other):
        return (
            isinstance(other, Var)
            and self.tvar == other.tvar
            and self.attr == other.attr
            and self.domain is other.domain
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.tvar}.{self.attr})"

    def key(self):
        return (0, self.tvar, self.attr)

    def render(self) -> str:
        return f"{self.tvar}.{self.attr}"


class Const:
    __slots__ = ("domain", "value", "_hash")

    def __init__(self, domain: Domain, value: str | Fraction):
        if domain is Domain.Q:
            if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
                value = Fraction(value)
            else:
                raise TypeError(f"Q constant must be rational, got {value!r}")
        elif not isinstance(value, str):
            raise TypeError(f"D constant must be a string, got {value!r}")
        self.domain = domain
        self.value = value
        self._hash = hash((domain, value))

    def __eq__(self, other):
        return isinstance(other, Const) and self.domain is other.domain and self.value == other.value

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Const({self.render()})"

    def key(self):
        if self.domain is Domain.Q:
            return (1, "", self.value)
        return (2, self.value, 0)

    def render(self) -> str:
        if self.domain is Domain.Q:
            return format_rational(self.value)
        return "'" + self.value.replace("'", "''") + "'"


Term = Union[Var, Const]

_SWAP = {"=": "=", "!=": "!=", "<": ">", "<=": ">=", ">": "<", ">=": "<="}
_NEGATE = {"=": "!=", "!=": "=", "<": ">=", "<=": ">", ">": "<=", ">=": "<"}
_PY_OPS: dict[str, Callable] = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}
OPS = tuple(_PY_OPS)


def format_rational(q: Fraction) -> str:
    """Exact textual form: integer, terminating decimal, or ``p/q``."""
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d == 1:
        places = max(twos, fives)
        scaled = abs(q.numerator) * (10**places) // q.denominator
        sign = "-" if q < 0 else ""
        digits = str(scaled).rjust(places + 1, "0")
        return f"{sign}{digits[:-places]}.{digits[-places:]}"
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# formulas


class Formula:
    """Immutable boolean formula. Subclasses: Atom, And, Or, Not, and the
    two literals TRUE / FALSE."""

    __slots__ = ()

    def atoms(self) -> Iterator["Atom"]:
        raise NotImplementedError

    def tuple_vars(self) -> set[str]:
        out = set()
        for a in self.atoms():
            for t in (a.lhs, a.rhs):
                if isinstance(t, Var):
                    out.add(t.tvar)
        return out

    def variables(self) -> set[Var]:
        return {t for a in self.atoms() for t in (a.lhs, a.rhs) if isinstance(t, Var)}

    def constants(self) -> set[Const]:
        return {t for a in self.atoms() for t in (a.lhs, a.rhs) if isinstance(t, Const)}

    def rename(self, mapping: Mapping[str, str]) -> "Formula":
        """Rename tuple variables, e.g. ``{"L": "R", "R": "L"}``."""
        return self.map_atoms(lambda a: a.rename(mapping))

    def map_atoms(self, fn: Callable[["Atom"], "Formula"]) -> "Formula":
        raise NotImplementedError

    def evaluate(self, env: Mapping[Var, object]) -> bool:
        raise NotImplementedError

    def render(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.render()

    def __and__(self, other: "Formula") -> "Formula":
        return conj(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return disj(self, other)

    def __invert__(self) -> "Formula":
        return neg(self)


class _Literal(Formula):
    __slots__ = ("value",)

    def __init__(self, value: bool):
        self.value = value

    def atoms(self):
        return iter(())

    def map_atoms(self, fn):
        return self

    def evaluate(self, env):
        return self.value

    def render(self):
        return "true" if self.value else "false"

    def __repr__(self):
        return "TRUE" if self.value else "FALSE"

    def __reduce__(self):
        return (_literal, (self.value,))


TRUE = _Literal(True)
FALSE = _Literal(False)


def _literal(value: bool) -> _Literal:
    return TRUE if value else FALSE


class Atom(Formula):
    """A normalized comparison. Build atoms with :func:`atom`, which folds
    trivial comparisons and puts constants on the right."""

    __slots__ = ("op", "lhs", "rhs", "_hash")

    def __init__(self, op: str, lhs: Term, rhs: Term):
        self.op = op
        self.lhs = lhs
        self.rhs = rhs
        self._hash = hash((op, lhs, rhs))

    def __eq__(self, other):
        return (
            isinstance(other, Atom)
            and self.op == other.op
            and self.lhs == other.lhs
            and self.rhs == other.rhs
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Atom({self.render()})"

    def __lt__(self, other: "Atom"):
        return self.key() < other.key()

    @property
    def domain(self) -> Domain:
        return self.lhs.domain

    @property
    def kind(self) -> str:
        return "EqD" if self.domain is Domain.D else "OrdQ"

    def key(self):
        return (self.lhs.key(), self.op, self.rhs.key())

    def atoms(self):
        yield self

    def negate(self) -> "Atom":
        return atom(_NEGATE[self.op], self.lhs, self.rhs)

    def rename(self, mapping: Mapping[str, str]) -> "Formula":
        return atom(self.op, _rename_term(self.lhs, mapping), _rename_term(self.rhs, mapping))

    def substitute(self, var: Var, term: Term) -> "Formula":
        lhs = term if self.lhs == var else self.lhs
        rhs = term if self.rhs == var else self.rhs
        if lhs is self.lhs and rhs is self.rhs:
            return self
        return atom(self.op, lhs, rhs)

    def mentions(self, var: Var) -> bool:
        return self.lhs == var or self.rhs == var

    def map_atoms(self, fn):
        return fn(self)

    def evaluate(self, env):
        lv = self.lhs.value if isinstance(self.lhs, Const) else env[self.lhs]
        rv = self.rhs.value if isinstance(self.rhs, Const) else env[self.rhs]
        return _PY_OPS[self.op](lv, rv)

    def render(self):
        if isinstance(self.rhs, Var) and self.op in ("<", "<=") and self.rhs.key() < self.lhs.key():
            return f"{self.rhs.render()} {_SWAP[self.op]} {self.lhs.render()}"
        return f"{self.lhs.render()} {self.op} {self.rhs.render()}"


def _rename_term(t: Term, mapping: Mapping[str, str]) -> Term:
    if isinstance(t, Var) and t.tvar in mapping:
        return Var(mapping[t.tvar], t.attr, t.domain)
    return t


def atom(op: str, lhs: Term, rhs: Term) -> Formula:
    """Construct a normalized atom, or TRUE/FALSE when the comparison is
    decided syntactically."""
    if op not in _PY_OPS:
        raise ParseError(f"unknown operator {op!r}")
    if lhs.domain is not rhs.domain:
        raise UnsupportedConstraint(
            f"cannot compare {lhs.render()} ({lhs.domain.value}) with {rhs.render()} ({rhs.domain.value})"
        )
    if lhs.domain is Domain.D and op not in ("=", "!="):
        raise UnsupportedConstraint(f"order comparison {op!r} on D values is not an equality constraint")
    if isinstance(lhs, Const) and isinstance(rhs, Const):
        return _literal(_PY_OPS[op](lhs.value, rhs.value))
    if lhs == rhs:
        return _literal(op in ("=", "<=", ">="))
    if isinstance(lhs, Const):
        lhs, rhs, op = rhs, lhs, _SWAP[op]
    if isinstance(rhs, Var):
        if op in (">", ">="):
            lhs, rhs, op = rhs, lhs, _SWAP[op]
        elif op in ("=", "!=") and rhs.key() < lhs.key():
            lhs, rhs = rhs, lhs
    return Atom(op, lhs, rhs)


class And(Formula):
    __slots__ = ("args",)

    def __init__(self, args: tuple[Formula, ...]):
        self.args = args

    def __eq__(self, other):
        return isinstance(other, And) and self.args == other.args

    def __hash__(self):
        return hash(("and", self.args))

    def __repr__(self):
        return f"And{self.args!r}"

    def atoms(self):
        for a in self.args:
            yield from a.atoms()

    def map_atoms(self, fn):
        return conj(*(a.map_atoms(fn) for a in self.args))

    def evaluate(self, env):
        return all(a.evaluate(env) for a in self.args)

    def render(self):
        return " and ".join(_paren(a, (Or,)) for a in self.args)


class Or(Formula):
    __slots__ = ("args",)

    def __init__(self, args: tuple[Formula, ...]):
        self.args = args

    def __eq__(self, other):
        return isinstance(other, Or) and self.args == other.args

    def __hash__(self):
        return hash(("or", self.args))

    def __repr__(self):
        return f"Or{self.args!r}"

    def atoms(self):
        for a in self.args:
            yield from a.atoms()

    def map_atoms(self, fn):
        return disj(*(a.map_atoms(fn) for a in self.args))

    def evaluate(self, env):
        return any(a.evaluate(env) for a in self.args)

    def render(self):
        return " or ".join(a.render() for a in self.args)


class Not(Formula):
    __slots__ = ("arg",)

    def __init__(self, arg: Formula):
        self.arg = arg

    def __eq__(self, other):
        return isinstance(other, Not) and self.arg == other.arg

    def __hash__(self):
        return hash(("not", self.arg))

    def __repr__(self):
        return f"Not({self.arg!r})"

    def atoms(self):
        return self.arg.atoms()

    def map_atoms(self, fn):
        return neg(self.arg.map_atoms(fn))

    def evaluate(self, env):
        return not self.arg.evaluate(env)

    def render(self):
        return "not " + _paren(self.arg, (And, Or))


def _paren(f: Formula, kinds) -> str:
    s = f.render()
    return f"({s})" if isinstance(f, kinds) else s


def conj(*fs: Formula) -> Formula:
    out: list[Formula] = []
    for f in fs:
        if f is FALSE:
            return FALSE
        if f is TRUE:
            continue
        if isinstance(f, And):
            out.extend(f.args)
        else:
            out.append(f)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(*fs: Formula) -> Formula:
    out: list[Formula] = []
    for f in fs:
        if f is TRUE:
            return TRUE
        if f is FALSE:
            continue
        if isinstance(f, Or):
            out.extend(f.args)
        else:
            out.append(f)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


def neg(f: Formula) -> Formula:
    if f is TRUE:
        return FALSE
    if f is FALSE:
        return TRUE
    return Not(f)


def nnf(f: Formula, positive: bool = True) -> Formula:
    """Push negations down to atoms and complement them there."""
    if isinstance(f, _Literal):
        return _literal(f.value == positive)
    if isinstance(f, Atom):
        return f if positive else f.negate()
    if isinstance(f, Not):
        return nnf(f.arg, not positive)
    parts = [nnf(a, positive) for a in f.args]
    if isinstance(f, And):
        return conj(*parts) if positive else disj(*parts)
    return disj(*parts) if positive else conj(*parts)


def from_conjuncts(conjuncts: Iterable[Iterable[Atom]]) -> Formula:
    """Build a DNF formula; atoms inside each conjunct are sorted so output
    is independent of set iteration order."""
    return disj(*(conj(*sorted(c)) for c in conjuncts))


def dnf_conjuncts(f: Formula) -> list[frozenset[Atom]]:
    """Purely syntactic DNF as a list of atom sets (no satisfiability pruning;
    the solver has the pruned variant)."""

    def go(g: Formula) -> list[frozenset[Atom]]:
        if g is TRUE:
            return [frozenset()]
        if g is FALSE:
            return []
        if isinstance(g, Atom):
            return [frozenset((g,))]
        if isinstance(g, Or):
            out: list[frozenset[Atom]] = []
            for a in g.args:
                out.extend(go(a))
            return out
        acc = [frozenset()]
        for a in g.args:
            acc = [x | y for x, y in product(acc, go(a))]
        return acc

    seen: dict[frozenset[Atom], None] = {}
    for c in go(nnf(f)):
        if not any(a.negate() in c for a in c):
            seen.setdefault(c)
    return list(seen)


def to_dnf(f: Formula) -> Formula:
    """Equivalent disjunction of conjunctions of atoms; negation is removed
    by complementing comparison operators."""
    return from_conjuncts(dnf_conjuncts(f))


# ---------------------------------------------------------------------------
# preference relations and tuples

TupleValue = tuple
LEFT, RIGHT = "L", "R"


@dataclass(frozen=True)
class PrefRelation:
    schema: Schema
    formula: Formula
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        for v in self.formula.variables():
            if v.tvar not in (LEFT, RIGHT):
                raise ParseError(f"variable {v.tvar!r} is not L or R")
            if self.schema.domain_of(v.attr) is not v.domain:
                raise SchemaError(f"attribute {v.attr} has domain {self.schema.domain_of(v.attr).value}")

    def with_formula(self, formula: Formula, name: str | None = None) -> "PrefRelation":
        return PrefRelation(self.schema, formula, name)

    def render(self) -> str:
        return self.formula.render()

    def to_line(self, name: str | None = None) -> str:
        return f"pref {name or self.name or 'P'} over {self.schema.name}: {self.render()};"

    def __call__(self, t1: TupleValue, t2: TupleValue) -> bool:
        return eval_ground(self, t1, t2)


def check_tuple(schema: Schema, t: TupleValue) -> None:
    if len(t) != len(schema):
        raise SchemaError(f"tuple {t!r} has arity {len(t)}, schema {schema.name} has {len(schema)}")
    for v, (name, dom) in zip(t, schema.attrs):
        if dom is Domain.Q:
            if not isinstance(v, (int, Fraction)) or isinstance(v, bool):
                raise SchemaError(f"value {v!r} for {name} is not an exact rational")
        elif not isinstance(v, str):
            raise SchemaError(f"value {v!r} for {name} is not a D constant")


def eval_ground(p: PrefRelation, t1: TupleValue, t2: TupleValue) -> bool:
    """Does ``t1`` dominate ``t2`` under ``p``?"""
    check_tuple(p.schema, t1)
    check_tuple(p.schema, t2)
    env = {}
    for i, (a, d) in enumerate(p.schema.attrs):
        env[Var(LEFT, a, d)] = t1[i]
        env[Var(RIGHT, a, d)] = t2[i]
    return p.formula.evaluate(env)


def compile_pref(p: PrefRelation) -> Callable[[TupleValue, TupleValue], bool]:
    """Compile ``p`` into a fast ``(t1, t2) -> bool`` closure. No tuple
    validation is done; callers are expected to have checked the instance."""
    schema = p.schema

    def term_fn(t: Term):
        if isinstance(t, Const):
            value = t.value
            return lambda a, b: value
        i = schema.index(t.attr)
        if t.tvar == LEFT:
            return lambda a, b: a[i]
        return lambda a, b: b[i]

    def build(f: Formula):
        if f is TRUE:
            return lambda a, b: True
        if f is FALSE:
            return lambda a, b: False
        if isinstance(f, Atom):
            op = _PY_OPS[f.op]
            lf, rf = term_fn(f.lhs), term_fn(f.rhs)
            if isinstance(f.rhs, Const):
                c = f.rhs.value
                return lambda a, b: op(lf(a, b), c)
            return lambda a, b: op(lf(a, b), rf(a, b))
        if isinstance(f, Not):
            g = build(f.arg)
            return lambda a, b: not g(a, b)
        parts = tuple(build(x) for x in f.args)
        if isinstance(f, And):
            return lambda a, b: all(g(a, b) for g in parts)
        return lambda a, b: any(g(a, b) for g in parts)

    return build(p.formula)


# ---------------------------------------------------------------------------
# concrete syntax

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<str>'(?:[^']|'')*')
  | (?P<num>-?\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>!=|<=|>=|=|<|>)
  | (?P<punct>[().])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"and", "or", "not", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos] == "'":
                raise ParseError("unterminated string literal", pos, text)
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind == "ident" and val.lower() in _KEYWORDS:
                kind, val = "kw", val.lower()
            out.append((kind, val, pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


def parse_rational(s: str) -> Fraction:
    try:
        if "/" in s:
            num, den = s.split("/")
            if int(den) == 0:
                raise ValueError
            return Fraction(int(num), int(den))
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational constant {s!r}") from None


class _Parser:
    def __init__(self, text: str, schema: Schema):
        self.text = text
        self.schema = schema
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind, val=None):
        tok = self.next()
        if tok[0] != kind or (val is not None and tok[1] != val):
            want = val or kind
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2], self.text)
        return tok

    def parse(self) -> Formula:
        f = self.disj()
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return f

    def disj(self):
        parts = [self.conj()]
        while self.peek()[:2] == ("kw", "or"):
            self.next()
            parts.append(self.conj())
        return disj(*parts) if len(parts) > 1 else parts[0]

    def conj(self):
        parts = [self.unit()]
        while self.peek()[:2] == ("kw", "and"):
            self.next()
            parts.append(self.unit())
        return conj(*parts) if len(parts) > 1 else parts[0]

    def unit(self):
        tok = self.peek()
        if tok[:2] == ("kw", "not"):
            self.next()
            return neg(self.unit())
        if tok[:2] == ("punct", "("):
            self.next()
            f = self.disj()
            self.expect("punct", ")")
            return f
        if tok[:2] == ("kw", "true"):
            self.next()
            return TRUE
        if tok[:2] == ("kw", "false"):
            self.next()
            return FALSE
        return self.atom()

    def atom(self):
        start = self.peek()[2]
        lhs = self.term()
        optok = self.next()
        if optok[0] != "op":
            raise ParseError(f"expected comparison operator, found {optok[1] or 'end of input'!r}", optok[2], self.text)
        rhs = self.term()
        lhs, rhs = self._resolve(lhs, rhs, start)
        try:
            return atom(optok[1], lhs, rhs)
        except UnsupportedConstraint as e:
            raise UnsupportedConstraint(str(e), start, self.text) from None

    def term(self):
        kind, val, pos = self.next()
        if kind == "ident":
            self.expect("punct", ".")
            attr = self.expect("ident")[1]
            if val not in (LEFT, RIGHT):
                raise ParseError(f"variable {val!r} is not L or R", pos, self.text)
            try:
                dom = self.schema.domain_of(attr)
            except SchemaError as e:
                raise SchemaError(f"{e} (at position {pos})") from None
            return Var(val, attr, dom)
        if kind == "str":
            return ("str", val[1:-1].replace("''", "'"))
        if kind == "num":
            return ("num", parse_rational(val))
        raise ParseError(f"expected a term, found {val or 'end of input'!r}", pos, self.text)

    def _resolve(self, lhs, rhs, pos):
        # constants take the domain of the attribute they are compared with
        if isinstance(lhs, tuple) and isinstance(rhs, tuple):
            dl = Domain.D if lhs[0] == "str" else Domain.Q
            dr = Domain.D if rhs[0] == "str" else Domain.Q
            return Const(dl, lhs[1]), Const(dr, rhs[1])
        var = lhs if isinstance(lhs, Var) else rhs

        def fix(t):
            if isinstance(t, Var):
                return t
            kind, value = t
            if var.domain is Domain.D and kind != "str":
                raise UnsupportedConstraint(
                    f"numeric constant compared with D attribute {var.attr}", pos, self.text
                )
            if var.domain is Domain.Q and kind != "num":
                raise UnsupportedConstraint(
                    f"string constant compared with Q attribute {var.attr}", pos, self.text
                )
            return Const(var.domain, value)

        return fix(lhs), fix(rhs)


def parse_condition(text: str, schema: Schema) -> Formula:
    return _Parser(text, schema).parse()


def parse_formula(text: str, schema: Schema, name: str | None = None) -> PrefRelation:
    """Parse a preference condition over ``L``/``R`` into a PrefRelation."""
    return PrefRelation(schema, parse_condition(text, schema), name)


_SCHEMA_RE = re.compile(r"^\s*relation\s+([A-Za-z_]\w*)\s*\((.*)\)\s*;?\s*$", re.IGNORECASE)


def parse_schema(line: str) -> Schema:
    """Parse ``relation Car (make: D, year: Q)``."""
    m = _SCHEMA_RE.match(line)
    if not m:
        raise ParseError(f"bad schema declaration: {line.strip()!r}")
    attrs = []
    for part in m.group(2).split(","):
        bits = [b.strip() for b in part.split(":")]
        if len(bits) != 2 or not re.fullmatch(r"[A-Za-z_]\w*", bits[0]):
            raise ParseError(f"bad attribute declaration {part.strip()!r}")
        try:
            dom = Domain(bits[1].upper())
        except ValueError:
            raise ParseError(f"unknown domain {bits[1]!r} (expected D or Q)") from None
        attrs.append((bits[0], dom))
    return Schema(m.group(1), tuple(attrs))


def swap(f: Formula) -> Formula:
    return f.rename({LEFT: RIGHT, RIGHT: LEFT})


def vars_of(schema: Schema, tvar: str) -> list[Var]:
    return [Var(tvar, a, d) for a, d in schema.attrs]


def tuple_equal(schema: Schema, x: str, y: str) -> Formula:
    return conj(*(atom("=", Var(x, a, d), Var(y, a, d)) for a, d in schema.attrs))


def finite_relation(schema: Schema, pairs: Sequence[tuple[TupleValue, TupleValue]], name=None) -> PrefRelation:
    """Encode a finite set of ordered tuple pairs as a formula."""

    def pin(tvar, t):
        return [atom("=", Var(tvar, a, d), Const(d, v)) for (a, d), v in zip(schema.attrs, t)]

    parts = []
    for t1, t2 in pairs:
        check_tuple(schema, t1)
        check_tuple(schema, t2)
        parts.append(conj(*pin(LEFT, t1), *pin(RIGHT, t2)))
    return PrefRelation(schema, disj(*parts), name)
