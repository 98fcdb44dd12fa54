from __future__ import annotations

import dataclasses

import pytest

from normguard.calculus import Verdict
from normguard.dialogue import DialogueError, Session, read_script, run_script
from normguard.dsl import ACK, REFUSAL, UNKNOWN
from normguard.engine import Engine
from normguard.logic import KBSyntaxError, Literal
from normguard.planner import (
    Discourse, DuplicateMethod, GuardRailViolation, Planner, PlannerError, Status, default_methods_text,
    load_methods,
)

METHOD = load_methods(default_methods_text())[0]


def session(*lines, recheck=False):
    s = Session(recheck=recheck)
    out = [s.say(line) for line in lines]
    return s, out


def ask(*lines, asker="Jan", owner="Karli", polarity="like"):
    s, _ = session(f"#speaker: {owner}", *lines, f"#speaker: {asker}")
    return s, s.say(f"What does {owner} {polarity}?")


class TestDialogue:
    def test_permitted_preference_is_revealed(self):
        s, r = ask("I like AI.", "You may share my likes with Jan.")
        assert r.text == "Karli likes artificial intelligence."
        assert s.last_outcome.status is Status.EXECUTED
        assert s.last_judgment.verdict is Verdict.PERMISSIBLE

    def test_statements_are_acknowledged(self):
        _, out = session("#speaker: Karli", "I like AI.", "Do not share my likes.")
        assert out == [None, ACK, ACK]

    def test_no_testimony_means_refusal(self):
        s, r = ask("I like AI.")
        assert r == REFUSAL
        assert s.last_outcome.status is Status.REFUSED

    def test_unknown_preference(self):
        s, r = ask("You may share my preferences.")
        assert r == UNKNOWN
        assert s.last_outcome.status is Status.NO_BINDING

    def test_polarity_of_query_is_respected(self):
        _, r = ask("I like AI.", "You may share my preferences.", polarity="dislike")
        assert r == UNKNOWN
        _, r = ask("I dislike pizza.", "You may share my preferences.", polarity="dislike")
        assert r.text == "Karli dislikes pizza."

    def test_other_hearer_is_refused(self):
        _, r = ask("I like AI.", "You may share my likes with Jan.", asker="Bob")
        assert r == REFUSAL

    def test_backtracks_to_a_shareable_preference(self):
        _, r = ask("I like pizza.", "I like juice.", "You may share my preferences about drinks.")
        assert r.text == "Karli likes juice."

    def test_later_testimony_flips_the_answer(self):
        s, r = ask("I like juice.", "You may share my preferences.")
        assert r.text == "Karli likes juice."
        for line in ("#speaker: Karli", "Do not share my preferences about drinks.", "#speaker: Jan"):
            s.say(line)
        assert s.say("What does Karli like?") == REFUSAL
        for line in ("#speaker: Karli", "You may share my likes about juice.", "#speaker: Jan"):
            s.say(line)
        assert s.say("What does Karli like?").text == "Karli likes juice."

    def test_speaker_required(self):
        with pytest.raises(DialogueError):
            Session().say("I like juice.")

    def test_script_replays(self):
        s, _ = ask("I like juice.", "You may share my likes.")
        replay = Session()
        turns = run_script(replay, s.script())
        assert [t.response for t in turns] == [t.response for t in s.turns]

    def test_read_script_skips_comments(self):
        text = "# a comment\n\n#speaker: Karli\nI like juice.\n  # another\n"
        assert read_script(text) == ["#speaker: Karli", "I like juice."]

    def test_recheck_passes_on_honest_engine(self):
        s, _ = session("#speaker: Karli", "I like juice.", "You may share my likes.", "#speaker: Jan", recheck=True)
        assert s.say("What does Karli like?").text == "Karli likes juice."


class TestPlanner:
    def test_duplicate_method_needs_priority(self):
        p = Planner(Engine())
        p.register(METHOD)
        with pytest.raises(DuplicateMethod):
            p.register(METHOD)
        p.register(METHOD, priority=5)
        assert len(p.methods) == 2

    def test_two_norm_checks_rejected(self):
        text = default_methods_text()
        check = text[text.index("(ist-Information ?owner\n      (permissible"):text.rindex("?d-facts)))") + len("?d-facts))")]
        doubled = text.replace(check, check + "\n    " + check)
        with pytest.raises(PlannerError):
            load_methods(doubled)

    def test_check_must_use_discourse_facts(self):
        text = default_methods_text().replace("        ?d-facts)))", "        ?other)))")
        with pytest.raises(KBSyntaxError):
            load_methods(text)

    def test_no_method(self):
        p = Planner(Engine())
        out = p.attempt(Literal.of("danceFor", "Jan"), Discourse("WorldMt"))
        assert out.status is Status.NO_METHOD

    def test_guard_rail_trips_when_recheck_disagrees(self, monkeypatch):
        s, _ = session("#speaker: Karli", "I like juice.", "You may share my likes.", "#speaker: Jan", recheck=True)
        real = s.engine.permissible

        def flaky(mt, behavior, context, closure=None, fresh=False):
            j = real(mt, behavior, context, closure, fresh)
            return dataclasses.replace(j, verdict=Verdict.IMPERMISSIBLE) if fresh else j

        monkeypatch.setattr(s.engine, "permissible", flaky)
        with pytest.raises(GuardRailViolation):
            s.say("What does Karli like?")

