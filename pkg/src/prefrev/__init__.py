"""Revision and querying of preference relations defined by constraint formulas."""

from __future__ import annotations

from .algebra import IterationCapExceeded, prioritized, transitive_closure, union_pref
from .axioms import OrderClass, classify
from .formula import Domain, ParseError, PrefRelation, Schema, UnsupportedConstraint, parse_formula
from .revision import FastPath, Mode, RevisionReport, override, refine, revise
from .solver import entails, equivalent, satisfiable
from .winnow import RelationInstance, winnow_auto, winnow_bnl, winnow_generic, winnow_weak

__all__ = [
    "Domain", "FastPath", "IterationCapExceeded", "Mode", "OrderClass", "ParseError",
    "PrefRelation", "RelationInstance", "RevisionReport", "Schema", "UnsupportedConstraint",
    "classify", "entails", "equivalent", "override", "parse_formula", "prioritized",
    "refine", "revise", "satisfiable", "transitive_closure", "union_pref",
    "winnow_auto", "winnow_bnl", "winnow_generic", "winnow_weak",
]
