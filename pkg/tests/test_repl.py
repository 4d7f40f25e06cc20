from __future__ import annotations

import io
import random

import pytest

from prefrev.repl import Session, execute, run
from prefrev.winnow import winnow_generic

from .gen import C1_TEXT, C2_TEXT, CAR, DQ, car_instance, random_formula, random_rows


@pytest.fixture
def session():
    s = Session(CAR, car_instance())
    s.define("C1", C1_TEXT)
    s.define("C2", C2_TEXT)
    return s


def transcript(session, *lines):
    out = io.StringIO()
    run(session, lines, out)
    return out.getvalue()


def winnow_names(session):
    return session.result.names


def test_walkthrough(session):
    execute(session, "refine C1")
    assert winnow_names(session) == ("t1", "t3")
    execute(session, "refine C2")
    assert winnow_names(session) == ("t1",)
    assert session.history[-1].incremental


def test_undo_restores(session):
    execute(session, "refine C1")
    execute(session, "refine C2")
    out, _ = execute(session, "undo")
    assert out == ["undid refine C2"]
    assert winnow_names(session) == ("t1", "t3")
    execute(session, "undo")
    assert winnow_names(session) == ("t1", "t2", "t3")


def test_undo_empty(session):
    assert execute(session, "undo")[0] == ["error: nothing to undo"]


def test_non_spo_disables_incremental(session):
    execute(session, "refine C1")
    execute(session, "pref G: L.year >= R.year")
    out, more = execute(session, "refine G")
    assert more
    assert out[0].startswith("warning:")
    assert not session.history[-1].incremental


def test_override_uses_full_recompute(session):
    execute(session, "refine C1")
    execute(session, "pref Old: L.year < R.year")
    out, _ = execute(session, "override Old")
    assert not session.history[-1].incremental
    assert any(line.startswith("notice:") for line in out)
    assert winnow_names(session) == ("t2", "t3")


def test_transcript(session):
    text = transcript(session, "refine C1", "winnow", "history", "show", "quit", "winnow")
    assert "t1: VW, 2002\nt3: Kia, 1997\n" in text
    assert "1. refine C1: SPO_WEAK_UNION, SPO, 2 tuple(s)" in text
    assert "SPO (not weak)" in text
    # nothing runs after quit
    assert text.count("t1: VW, 2002") == 1


@pytest.mark.parametrize(
    "line,needle",
    [
        ("bogus", "unknown command"),
        ("refine Nope", "unknown preference"),
        ("pref X L.year > R.year", "usage"),
        ("pref X: L.make < R.make", "error:"),
        ("pref X: L.year >", "error:"),
        ("refine", "usage"),
    ],
)
def test_errors_do_not_abort(session, line, needle):
    out, more = execute(session, line)
    assert more and needle in out[0]


def test_comments_and_blank_lines(session):
    assert execute(session, "") == ([], True)
    assert execute(session, "# note") == ([], True)


def test_help(session):
    assert "refine <name>" in execute(session, "help")[0][0]


@pytest.mark.parametrize("seed", range(15))
def test_incremental_equals_scratch_each_step(seed):
    rng = random.Random(seed)
    r = random_rows(rng, DQ, 25)
    s = Session(DQ, r)
    for k in range(4):
        s.define(f"P{k}", random_formula(rng, DQ, max_conj=2, max_atoms=3).render())
        mode = rng.choice(["refine", "refine", "override"])
        execute(s, f"{mode} P{k}")
        assert s.result == winnow_generic(s.current, r)
