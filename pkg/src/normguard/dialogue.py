"""Dialogue sessions: feed statements in, get responses out."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional

from .calculus import Judgment
from .dsl import (
    ACK, REFUSAL, UNKNOWN, Polarity, Preference, PreferenceQuery, Response, SpeakerSwitch, Statement,
    Testimony, parse_statement, preference_fact, render_statement, testimony_behavior,
)
from .engine import WORLD_MT, Engine
from .logic import Literal
from .norms import NormFrame
from .planner import Discourse, Method, PlanOutcome, Planner, Status, default_methods_text, load_methods

DISCOURSE_MT = "DiscourseMt"


class DialogueError(ValueError):
    pass


@dataclass
class Turn:
    speaker: Optional[str]
    text: str
    response: Optional[Response]


class Session:
    """A single conversation with its own engine and planner."""

    def __init__(self, engine: Optional[Engine] = None, methods: Optional[Iterable[Method]] = None,
                 recheck: bool = False):
        self.engine = engine or Engine()
        self.planner = Planner(self.engine, recheck=recheck)
        for m in (methods if methods is not None else load_methods(default_methods_text())):
            self.planner.register(m)
        self.engine.kb.create_microtheory(DISCOURSE_MT, [WORLD_MT])
        self.discourse = Discourse(DISCOURSE_MT)
        self.speaker: Optional[str] = None
        self.last_outcome: Optional[PlanOutcome] = None
        self.last_frame: Optional[NormFrame] = None
        self.turns: List[Turn] = []
        self._sids = itertools.count(1)

    @property
    def last_judgment(self) -> Optional[Judgment]:
        return self.last_outcome.judgment if self.last_outcome else None

    def say(self, text: str) -> Optional[Response]:
        """Parse and handle one line.  Speaker switches return None."""
        statement = parse_statement(text, self.engine.taxonomy)
        response = self.handle(statement)
        self.turns.append(Turn(self.speaker, render_statement(statement), response))
        return response

    def handle(self, s: Statement) -> Optional[Response]:
        if isinstance(s, SpeakerSwitch):
            self.speaker = s.person
            self.engine.agent_mt(s.person)
            return None
        if self.speaker is None:
            raise DialogueError("no speaker set; use '#speaker: <name>' first")
        if isinstance(s, Preference):
            self.engine.kb.assert_fact(self.engine.agent_mt(self.speaker), preference_fact(s, self.speaker))
            return ACK
        if isinstance(s, Testimony):
            owner = self.engine.agent_mt(self.speaker)
            self.last_frame = self.engine.store(owner).add_testimony(
                testimony_behavior(s, self.speaker), s.deontic.evaluation)
            return ACK
        if isinstance(s, PreferenceQuery):
            return self.ask(s)
        raise DialogueError(f"unhandled statement {s!r}")

    def ask(self, q: PreferenceQuery) -> Response:
        self.engine.agent_mt(q.subject)
        sid = f"s{next(self._sids)}"
        self.engine.kb.assert_fact(
            DISCOURSE_MT, Literal.of("askingPreference", sid, q.polarity.value, q.subject, self.speaker))
        action = Literal.of("respondToUser", DISCOURSE_MT, sid, q.polarity.value, "?object", q.subject,
                            self.speaker)
        outcome = self.planner.attempt(action, self.discourse)
        self.last_outcome = outcome
        return self.respond(outcome)

    def respond(self, outcome: PlanOutcome) -> Response:
        if outcome.status is Status.REFUSED:
            return REFUSAL
        if outcome.status is not Status.EXECUTED:
            return UNKNOWN
        for step in outcome.steps:
            if step.operator == "respond" and len(step.args) == 2 and isinstance(step.args[1], Literal):
                said = step.args[1]
                polarity = Polarity(said.predicate)
                return Response.answer(polarity, said.args[0], self.engine.taxonomy.display(said.args[1]))
        return UNKNOWN

    def script(self) -> str:
        """The session so far as a replayable dialogue script."""
        return "".join(t.text + "\n" for t in self.turns)


def read_script(text: str) -> List[str]:
    """Statement lines of a dialogue script; ``#speaker:`` lines are kept,
    other ``#`` lines and blank lines are comments."""
    out = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#") and not stripped[1:].lstrip().lower().startswith("speaker"):
            continue
        out.append(stripped)
    return out


def run_script(session: Session, text: str) -> List[Turn]:
    for line in read_script(text):
        session.say(line)
    return session.turns


def run_script_file(session: Session, path) -> List[Turn]:
    return run_script(session, Path(path).read_text(encoding="utf-8"))
