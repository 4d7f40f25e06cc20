"""Interactive iterated revision.

A session starts from the empty preference relation over a loaded instance.
Each ``refine`` or ``override`` revises the current relation and recomputes
the winnow. When the previous relation is contained in the new one and both
are SPOs, the new winnow is computed from the previous result alone;
otherwise the full instance is used and a notice is printed.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable, TextIO

from .algebra import empty
from .axioms import OrderClass, classify
from .formula import PrefError, PrefRelation, Schema, parse_formula
from .io import format_value
from .revision import Mode, RevisionReport, revise
from .solver import entails, simplify
from .winnow import RelationInstance, winnow_auto, winnow_bnl

HELP = """\
commands:
  pref <name>: <formula>   define a preference relation
  refine <name>            revise the current relation, keeping it
  override <name>          revise the current relation, letting <name> win
  show                     print the current relation and its class
  winnow                   print the best tuples under the current relation
  history                  list the revision steps
  undo                     drop the last revision step
  quit                     leave the session"""


@dataclass(frozen=True)
class Step:
    source: str
    report: RevisionReport
    relation: PrefRelation
    result: RelationInstance
    incremental: bool


class Session:
    def __init__(self, schema: Schema, instance: RelationInstance, prefs: dict[str, PrefRelation] | None = None):
        if instance.schema != schema:
            raise PrefError("instance does not match the session schema")
        self.schema = schema
        self.instance = instance
        self.prefs: dict[str, PrefRelation] = dict(prefs or {})
        self.history: list[Step] = []
        self._base = empty(schema)
        self._base_result = winnow_auto(self._base, instance)

    @property
    def current(self) -> PrefRelation:
        return self.history[-1].relation if self.history else self._base

    @property
    def current_class(self) -> OrderClass:
        return self.history[-1].report.result_class if self.history else classify(self._base)

    @property
    def result(self) -> RelationInstance:
        return self.history[-1].result if self.history else self._base_result

    def define(self, name: str, text: str) -> PrefRelation:
        p = parse_formula(text, self.schema, name)
        self.prefs[name] = p
        return p

    def revise(self, name: str, mode: Mode) -> tuple[Step, list[str]]:
        """Revise the current relation with ``name``; returns the new step
        and any notices."""
        if name not in self.prefs:
            raise PrefError(f"unknown preference {name!r}")
        prev, prev_cls, prev_result = self.current, self.current_class, self.result
        report = revise(prev, self.prefs[name], mode)
        k = len(self.history) + 1
        relation = report.result.with_formula(simplify(report.result.formula), f"S{k}")
        notices = []
        cls = report.result_class
        if not cls.is_spo:
            notices.append("warning: the revised relation is not an SPO; incremental winnow disabled for this step")
        contained = mode is Mode.REFINE and entails(prev.formula, relation.formula)
        incremental = prev_cls.is_spo and cls.is_spo and contained
        if incremental:
            result = winnow_bnl(relation, prev_result)
        else:
            if cls.is_spo:
                notices.append("notice: previous relation is not contained in the new one; winnow recomputed from the full instance")
            result = winnow_auto(relation, self.instance)
        step = Step(f"{mode.value} {name}", report, relation, result, incremental)
        self.history.append(step)
        return step, notices

    def undo(self) -> Step:
        if not self.history:
            raise PrefError("nothing to undo")
        step = self.history.pop()
        if self.history:
            last = self.history[-1]
            full = winnow_auto(last.relation, self.instance)
            self.history[-1] = Step(last.source, last.report, last.relation, full, False)
        return step

    def format_result(self) -> str:
        r = self.result
        if not len(r):
            return "(no tuples)"
        lines = []
        for i, t in enumerate(r.rows):
            label = r.names[i] if r.names else str(i + 1)
            lines.append(f"{label}: " + ", ".join(format_value(v) for v in t))
        return "\n".join(lines)


def execute(session: Session, line: str) -> tuple[list[str], bool]:
    """Run one command line; returns output lines and whether to continue."""
    line = line.strip()
    if not line or line.startswith("#"):
        return [], True
    cmd, _, rest = line.partition(" ")
    cmd = cmd.lower()
    rest = rest.strip()
    try:
        if cmd in ("quit", "exit"):
            return [], False
        if cmd == "help":
            return [HELP], True
        if cmd == "pref":
            name, sep, text = rest.partition(":")
            name = name.strip()
            if not sep or not name.isidentifier():
                return ["error: usage: pref <name>: <formula>"], True
            p = session.define(name, text.strip().rstrip(";"))
            return [f"{name}: {classify(p).describe()}"], True
        if cmd in ("refine", "override"):
            if not rest:
                return [f"error: usage: {cmd} <name>"], True
            step, notices = session.revise(rest, Mode(cmd))
            mode = "incremental" if step.incremental else "full"
            return notices + [step.report.summary(), f"winnow ({mode}): {len(step.result)} tuple(s)"], True
        if cmd == "show":
            p = session.current
            return [f"{p.render()}", session.current_class.describe()], True
        if cmd == "winnow":
            return [session.format_result()], True
        if cmd == "history":
            if not session.history:
                return ["(no revisions)"], True
            return [
                f"{i}. {s.source}: {s.report.fast_path.value}, {s.report.result_class.derived.value}, "
                f"{len(s.result)} tuple(s)"
                for i, s in enumerate(session.history, 1)
            ], True
        if cmd == "undo":
            step = session.undo()
            return [f"undid {step.source}"], True
        return [f"error: unknown command {cmd!r} (try 'help')"], True
    except PrefError as e:
        return [f"error: {e}"], True


def run(session: Session, lines: Iterable[str] | TextIO, out: TextIO, interactive: bool = False) -> None:
    if interactive:
        out.write("prefrev session; type 'help' for commands\n")
        lines = _prompted(out)
    for line in lines:
        output, more = execute(session, line)
        for text in output:
            out.write(text + "\n")
        if not more:
            break


def _prompted(out: TextIO):
    while True:
        out.write("> ")
        out.flush()
        line = sys.stdin.readline()
        if not line:
            return
        yield line
