"""Norm frames, per-agent norm stores, and conflict classification."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Optional

from .entailment import entails, intersect_witness
from .logic import Conjunction, KBSyntaxError, KnowledgeBase, Literal, LogicError, parse_conjunction
from .sexpr import SExpr, dump


class DeonticEvaluation(enum.Enum):
    OBLIGATORY = "Obligatory"
    OPTIONAL = "Optional"
    IMPERMISSIBLE = "Impermissible"

    @property
    def is_permission(self) -> bool:
        return self is not DeonticEvaluation.IMPERMISSIBLE


class NormClass(enum.Enum):
    PERMISSION = "Permission"
    PROHIBITION = "Prohibition"


class ConflictType(enum.Enum):
    DIRECT = "Direct"
    INDIRECT = "Indirect"
    INTERSECTING = "Intersecting"


class NormError(LogicError):
    pass


@dataclass(frozen=True)
class NormFrame:
    id: str
    owner: str
    context: Conjunction
    behavior: Conjunction
    evaluation: DeonticEvaluation
    timestamp: int = 0

    @property
    def norm_class(self) -> NormClass:
        return NormClass.PERMISSION if self.evaluation.is_permission else NormClass.PROHIBITION

    @property
    def is_permission(self) -> bool:
        return self.evaluation.is_permission

    @property
    def is_prohibition(self) -> bool:
        return not self.evaluation.is_permission

    def to_sexpr(self) -> str:
        return (
            f"(norm {self.id} :context {self.context} :behavior {self.behavior} "
            f":evaluation {self.evaluation.value})"
        )

    def __str__(self) -> str:
        return f"{self.id} [{self.norm_class.value}/{self.evaluation.value} t={self.timestamp}]"


def norm_prior_to_norm(n1: NormFrame, n2: NormFrame) -> bool:
    return n1.timestamp < n2.timestamp


class NormStore:
    """The testimony of one agent, in the order it was given.

    Each store keeps its own logical clock; frames are stamped on insertion
    and never modified afterwards.
    """

    def __init__(self, owner: str):
        self.owner = owner
        self._frames: List[NormFrame] = []
        self._clock = itertools.count(1)
        self._ids = itertools.count(1)

    def add_testimony(
        self,
        behavior: Conjunction,
        evaluation: DeonticEvaluation,
        context: Conjunction = Conjunction(),
        id: Optional[str] = None,
    ) -> NormFrame:
        return self.add(NormFrame(id or "", self.owner, context, behavior, evaluation))

    def add(self, frame: NormFrame) -> NormFrame:
        """Stamp ``frame`` with the next tick and store it."""
        if frame.owner != self.owner:
            raise NormError(f"frame owned by {frame.owner} added to store of {self.owner}")
        for lit in frame.behavior:
            if not isinstance(lit, Literal):
                raise NormError(f"behavior literals must be positive: {lit}")
        frame_id = frame.id
        if not frame_id:
            taken = {f.id for f in self._frames}
            frame_id = f"norm{next(self._ids)}"
            while frame_id in taken:
                frame_id = f"norm{next(self._ids)}"
        if any(f.id == frame_id for f in self._frames):
            raise NormError(f"duplicate norm id {frame_id} in {self.owner}")
        stamped = replace(frame, id=frame_id, timestamp=next(self._clock))
        self._frames.append(stamped)
        return stamped

    def __iter__(self) -> Iterator[NormFrame]:
        return iter(self._frames)

    def __len__(self) -> int:
        return len(self._frames)

    def __getitem__(self, norm_id: str) -> NormFrame:
        for f in self._frames:
            if f.id == norm_id:
                return f
        raise KeyError(norm_id)

    def permissions(self) -> List[NormFrame]:
        return [f for f in self._frames if f.is_permission]

    def prohibitions(self) -> List[NormFrame]:
        return [f for f in self._frames if f.is_prohibition]


def classify_conflict(
    kb: KnowledgeBase,
    mt: str,
    n1: NormFrame,
    n2: NormFrame,
    witness: Optional[Conjunction] = None,
) -> Optional[ConflictType]:
    """Classify two norms with inconsistent evaluations.

    Intersecting conflicts need a caller-supplied ``witness`` behavior on both
    norms' application grounds; the engine does not search for one.  Returns
    None for consistent evaluations or when no conflict can be established.
    """
    if n1.is_permission == n2.is_permission:
        return None
    forward = entails(kb, mt, n1.behavior, n2.behavior)
    backward = entails(kb, mt, n2.behavior, n1.behavior)
    if forward and backward:
        return ConflictType.DIRECT
    if forward or backward:
        return ConflictType.INDIRECT
    if witness is not None and not witness.is_top:
        if intersect_witness(kb, mt, n1.behavior, n2.behavior, witness):
            return ConflictType.INTERSECTING
    return None


# -- norm file format ---------------------------------------------------------


def parse_norm(form: SExpr, owner: str) -> NormFrame:
    """Parse ``(norm <id> :context (and ..) :behavior (and ..) :evaluation <E>)``."""
    if not isinstance(form, list) or len(form) < 2 or form[0] != "norm" or not isinstance(form[1], str):
        raise KBSyntaxError(f"expected (norm <id> ...), got {dump(form)}")
    slots = form[2:]
    if len(slots) % 2:
        raise KBSyntaxError(f"unbalanced keyword slots in {dump(form)}")
    values: Dict[str, SExpr] = {}
    for key, value in zip(slots[::2], slots[1::2]):
        if key not in (":context", ":behavior", ":evaluation") or key in values:
            raise KBSyntaxError(f"bad slot {key!r} in {dump(form)}")
        values[key] = value
    try:
        evaluation = DeonticEvaluation(values[":evaluation"])
    except (KeyError, ValueError):
        raise KBSyntaxError(f"missing or unknown :evaluation in {dump(form)}") from None
    context = parse_conjunction(values.get(":context", ["and"]))
    behavior = parse_conjunction(values.get(":behavior", ["and"]))
    return NormFrame(form[1], owner, context, behavior, evaluation)
