"""Schema files, preference files and CSV instances."""

from __future__ import annotations

import csv
import io
import re
from pathlib import Path
from typing import TextIO

from .formula import (
    Domain,
    ParseError,
    PrefRelation,
    Schema,
    SchemaError,
    format_rational,
    parse_formula,
    parse_rational,
    parse_schema,
)
from .winnow import RelationInstance


def _strip_comment(line: str) -> str:
    out = []
    quoted = False
    for ch in line:
        if ch == "'":
            quoted = not quoted
        if ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out)


def read_schemas(text: str) -> dict[str, Schema]:
    schemas = {}
    for line in text.splitlines():
        line = _strip_comment(line).strip()
        if not line:
            continue
        s = parse_schema(line)
        if s.name in schemas:
            raise ParseError(f"schema {s.name} declared twice")
        schemas[s.name] = s
    if not schemas:
        raise ParseError("no schema declaration found")
    return schemas


def load_schema(path: str | Path) -> Schema:
    """The first schema declared in ``path``."""
    return next(iter(read_schemas(Path(path).read_text()).values()))


def _statements(text: str):
    """Split on ``;`` outside string literals, yielding (start offset, text)."""
    buf, start, quoted = [], 0, False
    cleaned = "\n".join(_strip_comment(line) for line in text.splitlines())
    for i, ch in enumerate(cleaned):
        if ch == "'":
            quoted = not quoted
        if ch == ";" and not quoted:
            stmt = "".join(buf)
            if stmt.strip():
                yield start, stmt
            buf, start = [], i + 1
            continue
        buf.append(ch)
    rest = "".join(buf)
    if rest.strip():
        raise ParseError("preference statement not terminated by ';'", start)


_PREF_HEAD = re.compile(r"\s*pref\s+([A-Za-z_]\w*)\s+over\s+([A-Za-z_]\w*)\s*:", re.IGNORECASE)


def read_prefs(text: str, schemas: dict[str, Schema] | Schema) -> dict[str, PrefRelation]:
    """Parse ``pref C1 over Car: <formula>;`` statements, in file order."""
    if isinstance(schemas, Schema):
        schemas = {schemas.name: schemas}
    prefs: dict[str, PrefRelation] = {}
    for start, stmt in _statements(text):
        m = _PREF_HEAD.match(stmt)
        if not m:
            raise ParseError(f"expected 'pref <name> over <schema>:' in {stmt.strip()[:40]!r}", start)
        name, sname = m.groups()
        if sname not in schemas:
            raise SchemaError(f"preference {name} refers to unknown schema {sname}")
        if name in prefs:
            raise ParseError(f"preference {name} defined twice", start)
        prefs[name] = parse_formula(stmt[m.end():], schemas[sname], name)
    return prefs


def load_prefs(path: str | Path, schemas) -> dict[str, PrefRelation]:
    return read_prefs(Path(path).read_text(), schemas)


def parse_value(raw: str, dom: Domain):
    s = raw.strip()
    if dom is Domain.Q:
        return parse_rational(s)
    if len(s) >= 2 and s[0] == s[-1] == "'":
        return s[1:-1].replace("''", "'")
    return s


def read_csv(stream: TextIO, schema: Schema) -> RelationInstance:
    reader = csv.reader(stream)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("CSV file is empty; a header row is required") from None
    if tuple(header) != schema.names:
        raise SchemaError(f"CSV header {header} does not match schema attributes {list(schema.names)}")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec or all(not x.strip() for x in rec):
            continue
        if len(rec) != len(schema):
            raise ParseError(f"line {lineno}: expected {len(schema)} fields, found {len(rec)}")
        try:
            rows.append(tuple(parse_value(v, d) for v, (_, d) in zip(rec, schema.attrs)))
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e}") from None
    names = [f"t{i}" for i in range(1, len(rows) + 1)]
    return RelationInstance.from_rows(schema, rows, names)


def load_csv(path: str | Path, schema: Schema) -> RelationInstance:
    with open(path, newline="") as fh:
        return read_csv(fh, schema)


def format_value(v) -> str:
    if isinstance(v, str):
        return v
    return format_rational(v)


def write_csv(r: RelationInstance, stream: TextIO) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(r.schema.names)
    for t in r.rows:
        w.writerow([format_value(v) for v in t])


def csv_text(r: RelationInstance) -> str:
    buf = io.StringIO()
    write_csv(r, buf)
    return buf.getvalue()
