"""Constrained statement language for preferences, privacy testimony and
preference queries.

Grammar (keywords are case-insensitive, names and topics are single tokens)::

    I (like|dislike) <object> .
    You (may|must) share my (preferences|likes|dislikes) [about <topic>] [with <person>] .
    Do not share my (preferences|likes|dislikes) [about <topic>] [with <person>] .
    What does <person> (like|dislike) ?
    #speaker: <person>

The module also fixes how statements become logic: preference facts, the
behavior conjunctions of testimony norm frames, and the response strings.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .logic import Conjunction, Literal
from .norms import DeonticEvaluation
from .taxonomy import Taxonomy, VocabularyError

SHARE_VAR = "?share"
TOPIC_VAR = "?topic"


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class Polarity(enum.Enum):
    LIKES = "likesType"
    DISLIKES = "dislikesType"

    @property
    def verb(self) -> str:
        return "like" if self is Polarity.LIKES else "dislike"


class Deontic(enum.Enum):
    MAY = "may"
    MUST = "must"
    MUST_NOT = "mustNot"

    @property
    def evaluation(self) -> DeonticEvaluation:
        return {
            Deontic.MAY: DeonticEvaluation.OPTIONAL,
            Deontic.MUST: DeonticEvaluation.OBLIGATORY,
            Deontic.MUST_NOT: DeonticEvaluation.IMPERMISSIBLE,
        }[self]


@dataclass(frozen=True)
class Topic:
    constant: str
    word: str
    is_category: bool = False


@dataclass(frozen=True)
class InfoScope:
    """Which of the owner's preferences a testimony is about.

    ``kind`` is ``preferences`` (either polarity), ``likes`` or ``dislikes``;
    ``topic`` narrows it to one object or to every object in a category.
    """

    kind: str = "preferences"
    topic: Optional[Topic] = None

    @property
    def polarity(self) -> Optional[Polarity]:
        return {"likes": Polarity.LIKES, "dislikes": Polarity.DISLIKES}.get(self.kind)


@dataclass(frozen=True)
class Preference:
    polarity: Polarity
    topic: Topic


@dataclass(frozen=True)
class Testimony:
    deontic: Deontic
    scope: InfoScope
    audience: Optional[str] = None


@dataclass(frozen=True)
class PreferenceQuery:
    subject: str
    polarity: Polarity = Polarity.LIKES


@dataclass(frozen=True)
class SpeakerSwitch:
    person: str


Statement = Union[Preference, Testimony, PreferenceQuery, SpeakerSwitch]

_TOKEN = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_'\-]*|[.?]")
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_\-]*\Z")
_SPEAKER = re.compile(r"\s*#\s*speaker\s*:\s*(\S+)\s*\Z", re.IGNORECASE)


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: List[Tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            self.items.append((m.group(), pos))
            pos = m.end()
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.items[self.i][0].lower() if self.i < len(self.items) else None

    @property
    def position(self) -> int:
        return self.items[self.i][1] if self.i < len(self.items) else len(self.text)

    def take(self) -> Tuple[str, int]:
        if self.i >= len(self.items):
            raise ParseError("unexpected end of statement", len(self.text))
        tok = self.items[self.i]
        self.i += 1
        return tok

    def expect(self, *words: str) -> str:
        pos = self.position
        tok, _ = self.take()
        if tok.lower() not in words:
            raise ParseError(f"expected {' or '.join(repr(w) for w in words)}, got {tok!r}", pos)
        return tok.lower()

    def accept(self, word: str) -> bool:
        if self.peek() == word:
            self.i += 1
            return True
        return False

    def finish(self, punct: str) -> None:
        self.accept(punct)
        if self.i < len(self.items):
            tok, pos = self.items[self.i]
            raise ParseError(f"unexpected {tok!r}", pos)


def _name(toks: _Tokens) -> str:
    pos = toks.position
    tok, _ = toks.take()
    if not _NAME.match(tok) or tok.lower() in _KEYWORDS:
        raise ParseError(f"expected a name, got {tok!r}", pos)
    return tok


def _topic(toks: _Tokens, taxonomy: Taxonomy, objects_only: bool = False) -> Topic:
    pos = toks.position
    tok, _ = toks.take()
    if tok in ".?":
        raise ParseError("expected a topic", pos)
    const = taxonomy.lookup(tok, pos)
    is_cat = taxonomy.is_category(const)
    if objects_only and is_cat:
        raise VocabularyError(tok, pos, "a topic object, not a category")
    return Topic(const, tok, is_cat)


_KEYWORDS = {"about", "with", "share", "my", "you", "do", "not", "may", "must", "what", "does"}


def _share_tail(toks: _Tokens, taxonomy: Taxonomy) -> Tuple[InfoScope, Optional[str]]:
    toks.expect("share")
    toks.expect("my")
    kind = toks.expect("preferences", "likes", "dislikes")
    topic = _topic(toks, taxonomy) if toks.accept("about") else None
    audience = _name(toks) if toks.accept("with") else None
    toks.finish(".")
    return InfoScope(kind, topic), audience


def parse_statement(text: str, taxonomy: Taxonomy) -> Statement:
    m = _SPEAKER.match(text)
    if m:
        person = m.group(1)
        if not _NAME.match(person):
            raise ParseError(f"bad speaker name {person!r}", m.start(1))
        return SpeakerSwitch(person)
    toks = _Tokens(text)
    first = toks.peek()
    if first == "i":
        toks.take()
        verb = toks.expect("like", "dislike")
        topic = _topic(toks, taxonomy, objects_only=True)
        toks.finish(".")
        return Preference(Polarity.LIKES if verb == "like" else Polarity.DISLIKES, topic)
    if first == "you":
        toks.take()
        modal = toks.expect("may", "must")
        scope, audience = _share_tail(toks, taxonomy)
        return Testimony(Deontic(modal), scope, audience)
    if first == "do":
        toks.take()
        toks.expect("not")
        scope, audience = _share_tail(toks, taxonomy)
        return Testimony(Deontic.MUST_NOT, scope, audience)
    if first == "what":
        toks.take()
        toks.expect("does")
        subject = _name(toks)
        verb = toks.expect("like", "dislike")
        toks.finish("?")
        return PreferenceQuery(subject, Polarity.LIKES if verb == "like" else Polarity.DISLIKES)
    if first is None:
        raise ParseError("empty statement", 0)
    raise ParseError(f"cannot start a statement with {toks.items[0][0]!r}", toks.position)


def render_statement(s: Statement) -> str:
    if isinstance(s, SpeakerSwitch):
        return f"#speaker: {s.person}"
    if isinstance(s, Preference):
        return f"I {s.polarity.verb} {s.topic.word}."
    if isinstance(s, PreferenceQuery):
        return f"What does {s.subject} {s.polarity.verb}?"
    head = {Deontic.MAY: "You may", Deontic.MUST: "You must", Deontic.MUST_NOT: "Do not"}[s.deontic]
    parts = [head, "share my", s.scope.kind]
    if s.scope.topic is not None:
        parts += ["about", s.scope.topic.word]
    if s.audience:
        parts += ["with", s.audience]
    return " ".join(parts) + "."


# -- encoding ----------------------------------------------------------------


def preference_fact(pref: Preference, speaker: str) -> Literal:
    return Literal.of(pref.polarity.value, speaker, pref.topic.constant)


def testimony_behavior(t: Testimony, owner: str) -> Conjunction:
    """Behavior conjunction for a sharing norm: which sharing acts it covers."""
    lits = [
        Literal.of("isa", SHARE_VAR, "SharingPref"),
        Literal.of("prefOwner", SHARE_VAR, owner),
    ]
    if t.scope.polarity is not None:
        lits.append(Literal.of("polarity", SHARE_VAR, t.scope.polarity.value))
    topic = t.scope.topic
    if topic is not None and topic.is_category:
        lits.append(Literal.of("object", SHARE_VAR, TOPIC_VAR))
        lits.append(Literal.of("genls", TOPIC_VAR, topic.constant))
    elif topic is not None:
        lits.append(Literal.of("object", SHARE_VAR, topic.constant))
    if t.audience:
        lits.append(Literal.of("hearer", SHARE_VAR, t.audience))
    return Conjunction(tuple(lits))


def sharing_act(owner: str, polarity: Union[Polarity, str], obj: str, hearer: str) -> Conjunction:
    """The act of telling ``hearer`` one of ``owner``'s preferences."""
    pol = polarity.value if isinstance(polarity, Polarity) else polarity
    return Conjunction((
        Literal.of("isa", SHARE_VAR, "SharingPref"),
        Literal.of("prefOwner", SHARE_VAR, owner),
        Literal.of("object", SHARE_VAR, obj),
        Literal.of("polarity", SHARE_VAR, pol),
        Literal.of("hearer", SHARE_VAR, hearer),
    ))


# -- responses ---------------------------------------------------------------


class ResponseKind(enum.Enum):
    LIKES = "LikesAnswer"
    DISLIKES = "DislikesAnswer"
    UNKNOWN = "Unknown"
    REFUSAL = "Refusal"
    ACK = "Ack"


UNKNOWN_TEXT = "I don't know."
REFUSAL_TEXT = "I can't say."
ACK_TEXT = "Okay."


@dataclass(frozen=True)
class Response:
    kind: ResponseKind
    text: str

    @classmethod
    def answer(cls, polarity: Polarity, person: str, topic_display: str) -> "Response":
        kind = ResponseKind.LIKES if polarity is Polarity.LIKES else ResponseKind.DISLIKES
        return cls(kind, f"{person} {polarity.verb}s {topic_display}.")

    @classmethod
    def parse(cls, text: str) -> "Response":
        text = text.strip()
        for kind, fixed in ((ResponseKind.UNKNOWN, UNKNOWN_TEXT), (ResponseKind.REFUSAL, REFUSAL_TEXT),
                            (ResponseKind.ACK, ACK_TEXT)):
            if text == fixed:
                return cls(kind, text)
        m = re.match(r"\S+ (likes|dislikes) .+\.\Z", text)
        if not m:
            raise ValueError(f"not a response: {text!r}")
        return cls(ResponseKind.LIKES if m.group(1) == "likes" else ResponseKind.DISLIKES, text)

    def __str__(self) -> str:
        return self.text


UNKNOWN = Response(ResponseKind.UNKNOWN, UNKNOWN_TEXT)
REFUSAL = Response(ResponseKind.REFUSAL, REFUSAL_TEXT)
ACK = Response(ResponseKind.ACK, ACK_TEXT)
