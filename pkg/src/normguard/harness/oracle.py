"""Reference answers for dialogue scripts, computed without the engine.

Sharing acts are enumerated explicitly as (polarity, object, hearer)
triples over the topic taxonomy and every person mentioned, plus one
anonymous hearer.  A testimony's application grounds are the set of
triples it mentions; "covers" is set inclusion.  The permission and
prohibition rules are then evaluated directly on those sets.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

LIKES, DISLIKES = "likesType", "dislikesType"
ANYONE = "$anyone"

_PREF = re.compile(r"I (like|dislike) (\S+)\.\Z", re.I)
_NORM = re.compile(r"(You may|You must|Do not) share my (preferences|likes|dislikes)"
                   r"(?: about (\S+?))?(?: with (\S+?))?\.\Z", re.I)
_QUERY = re.compile(r"What does (\S+) (like|dislike)\?\Z", re.I)
_SPEAKER = re.compile(r"#\s*speaker\s*:\s*(\S+)\Z", re.I)

Act = Tuple[str, str, str]


@dataclass(frozen=True)
class Vocabulary:
    """Plain-dict view of the topic taxonomy."""

    category_of: Mapping[str, str]
    words: Mapping[str, str]

    @property
    def objects(self) -> List[str]:
        return list(self.category_of)

    @classmethod
    def from_taxonomy(cls, tax) -> "Vocabulary":
        return cls(dict(tax.category_of), dict(tax.words))


@dataclass(frozen=True)
class _Norm:
    time: int
    permission: bool
    kind: str
    topic: Optional[str]
    hearer: Optional[str]


def _display(const: str) -> str:
    return " ".join(re.findall(r"[A-Z]+(?![a-z])|[A-Z]?[a-z0-9]+", const)).lower()


def _grounds(norm: _Norm, acts: Sequence[Act], vocab: Vocabulary) -> FrozenSet[Act]:
    out = set()
    for pol, obj, hearer in acts:
        if norm.kind == "likes" and pol != LIKES:
            continue
        if norm.kind == "dislikes" and pol != DISLIKES:
            continue
        if norm.topic is not None and obj != norm.topic and vocab.category_of.get(obj) != norm.topic:
            continue
        if norm.hearer is not None and hearer != norm.hearer:
            continue
        out.add((pol, obj, hearer))
    return frozenset(out)


def decide(norms: Sequence[_Norm], act: Act, acts: Sequence[Act], vocab: Vocabulary, closure: str) -> bool:
    """True when ``act`` is permissible.  All norms here have a trivial context."""
    grounds = {n: _grounds(n, acts, vocab) for n in norms}
    perms = [n for n in norms if n.permission]
    prohs = [n for n in norms if not n.permission]

    def perm_defeated(p):
        return any(
            (p.time < q.time and grounds[p] <= grounds[q])
            or (act in grounds[q] and not grounds[p] <= grounds[q])
            for q in prohs)

    def proh_defeated(q):
        return any(q.time < p.time and grounds[p] <= grounds[q] for p in perms)

    if closure == "prohibitive":
        return any(act in grounds[p] and not perm_defeated(p) for p in perms)
    return not any(act in grounds[q] and not proh_defeated(q) for q in prohs)


def respond(lines: Sequence[str], vocab: Vocabulary, closure: str = "prohibitive") -> List[Optional[str]]:
    """Expected response text for each line of a dialogue script."""
    speaker = None
    prefs: Dict[str, List[Tuple[str, str]]] = {}
    norms: Dict[str, List[_Norm]] = {}
    people = set()
    for line in lines:
        for m in re.finditer(r"(?:with|does|speaker:)\s*(\w+)", line):
            people.add(m.group(1))
    out: List[Optional[str]] = []
    for raw in lines:
        line = raw.strip()
        m = _SPEAKER.match(line)
        if m:
            speaker = m.group(1)
            people.add(speaker)
            out.append(None)
            continue
        m = _PREF.match(line)
        if m:
            pol = LIKES if m.group(1).lower() == "like" else DISLIKES
            fact = (pol, vocab.words[m.group(2).lower()])
            if fact not in prefs.setdefault(speaker, []):
                prefs[speaker].append(fact)
            out.append("Okay.")
            continue
        m = _NORM.match(line)
        if m:
            stack = norms.setdefault(speaker, [])
            topic = vocab.words[m.group(3).lower()] if m.group(3) else None
            stack.append(_Norm(len(stack) + 1, m.group(1).lower() != "do not", m.group(2).lower(),
                               topic, m.group(4)))
            out.append("Okay.")
            continue
        m = _QUERY.match(line)
        if not m:
            raise ValueError(f"oracle cannot read {line!r}")
        owner, pol = m.group(1), (LIKES if m.group(2).lower() == "like" else DISLIKES)
        hearers = sorted(people | {ANYONE})
        acts = list(itertools.product((LIKES, DISLIKES), vocab.objects, hearers))
        stated = [obj for p, obj in prefs.get(owner, []) if p == pol]
        if not stated:
            out.append("I don't know.")
            continue
        answer = "I can't say."
        for obj in stated:
            if decide(norms.get(owner, []), (pol, obj, speaker), acts, vocab, closure):
                verb = "likes" if pol == LIKES else "dislikes"
                answer = f"{owner} {verb} {_display(obj)}."
                break
        out.append(answer)
    return out


def oracle_judge(case, vocab: Vocabulary, closure: str = "prohibitive") -> str:
    """Label for one dialogue case: the response to its final query."""
    return respond(case.script(), vocab, closure)[-1]
