"""Entailment between conjunctions by query freezing.

``entails(kb, mt, c1, c2)`` holds when ``c2`` can be proven in ``mt`` after
the free variables of ``c1`` are replaced by fresh constants and the result
is added to a private scratch context.  The variables of ``c2`` stay
existential (bound consistently across its literals).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Optional

from .logic import Conjunction, DepthExceeded, KnowledgeBase, LogicError

FROZEN_PREFIX = "$frz"


class Indeterminate(LogicError):
    """An entailment check ran out of search depth; the answer is unknown."""


@dataclass(frozen=True)
class FrozenConjunction:
    ground: Conjunction
    mapping: Dict[str, str]


def freeze(c: Conjunction) -> FrozenConjunction:
    mapping = {v: f"{FROZEN_PREFIX}{i}" for i, v in enumerate(c.variables())}
    return FrozenConjunction(c.substitute(mapping), mapping)


def entails(kb: KnowledgeBase, mt: str, c1: Conjunction, c2: Conjunction, max_depth: Optional[int] = None) -> bool:
    if c2.is_top:
        return True
    frozen = freeze(c1)
    try:
        return kb.ask(list(c2), mt, max_depth=max_depth, scratch=frozen.ground)
    except DepthExceeded as exc:
        raise Indeterminate(f"cannot decide whether {c1} entails {c2}: {exc}") from exc


def equivalent(kb: KnowledgeBase, mt: str, c1: Conjunction, c2: Conjunction) -> bool:
    return entails(kb, mt, c1, c2) and entails(kb, mt, c2, c1)


def active_in(kb: KnowledgeBase, mt: str, frame, situation: Conjunction) -> bool:
    """A norm is active when the situation entails its context."""
    return entails(kb, mt, situation, frame.context)


def on_application_grounds(kb: KnowledgeBase, mt: str, behavior: Conjunction, frame) -> bool:
    return entails(kb, mt, behavior, frame.behavior)


class Subsumption(enum.Enum):
    NO = "no"
    STRICT = "strict"
    MUTUAL = "mutual"


def subsumes(kb: KnowledgeBase, mt: str, n1, n2) -> Subsumption:
    """Whether ``n1``'s application grounds contain ``n2``'s.

    That is the case when ``n2``'s behavior entails ``n1``'s: every act that
    falls under the narrower norm also falls under the broader one.
    """
    narrower_in_broader = entails(kb, mt, n2.behavior, n1.behavior)
    if not narrower_in_broader:
        return Subsumption.NO
    if entails(kb, mt, n1.behavior, n2.behavior):
        return Subsumption.MUTUAL
    return Subsumption.STRICT


def intersect_witness(kb: KnowledgeBase, mt: str, c1: Conjunction, c2: Conjunction, c3: Conjunction) -> bool:
    """True when ``c3`` lies on the application grounds of both ``c1`` and ``c2``."""
    return entails(kb, mt, c3, c1) and entails(kb, mt, c3, c2)


class Entailer:
    """Caching front end for one knowledge base.

    Results are keyed on the KB version, so any assertion invalidates them.
    """

    def __init__(self, kb: KnowledgeBase, max_depth: Optional[int] = None):
        self.kb = kb
        self.max_depth = max_depth
        self._cache: Dict[tuple, bool] = {}
        self._version = kb.version

    def __call__(self, mt: str, c1: Conjunction, c2: Conjunction) -> bool:
        if self._version != self.kb.version:
            self._cache.clear()
            self._version = self.kb.version
        key = (mt, c1, c2)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = entails(self.kb, mt, c1, c2, self.max_depth)
        return hit
