"""Defeasible resolution of normative testimony into normative beliefs.

The two rules mirror each other:

* permission rule: a behavior is permissible in a context when an active
  permission applies to it and no prohibition defeats that permission.  A
  prohibition defeats a permission when it came later and covers all of the
  permission's grounds, or when it applies to the act but does not cover the
  permission's grounds (the act is at their intersection).
* prohibition rule: a behavior is impermissible when an active prohibition
  applies to it and no later, narrower, active permission carves it out.

Which rule runs depends on the closure assumption.  Under prohibitive
closure only the permission rule is consulted and anything it cannot prove
is impermissible; permissive closure is the dual.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .entailment import Entailer
from .logic import Conjunction, KnowledgeBase
from .norms import NormFrame, NormStore, norm_prior_to_norm


class Closure(enum.Enum):
    PROHIBITIVE = "prohibitive"
    PERMISSIVE = "permissive"


class Verdict(enum.Enum):
    PERMISSIBLE = "permissible"
    IMPERMISSIBLE = "impermissible"

    def negate(self) -> "Verdict":
        return Verdict.IMPERMISSIBLE if self is Verdict.PERMISSIBLE else Verdict.PERMISSIBLE


class DefeatKind(enum.Enum):
    LATER_COVERING_PROHIBITION = "later prohibition covering the permission"
    INTERSECTING_PROHIBITION = "prohibition applying to the act without covering the permission"
    LATER_NARROWER_PERMISSION = "later permission inside the prohibition"


@dataclass(frozen=True)
class Defeater:
    norm: NormFrame
    kind: DefeatKind

    def __str__(self) -> str:
        return f"{self.norm.id} ({self.kind.value})"


@dataclass(frozen=True)
class Basis:
    """Why a verdict was reached: a named undefeated norm, or the closure."""

    norm: Optional[str] = None
    examined: Tuple[str, ...] = ()

    @property
    def by_closure(self) -> bool:
        return self.norm is None

    def __str__(self) -> str:
        if self.by_closure:
            return "closure"
        return f"rule via {self.norm}"


@dataclass(frozen=True)
class Judgment:
    query: Verdict
    verdict: Verdict
    closure: Closure
    basis: Basis
    behavior: Conjunction
    context: Conjunction
    agent: str
    trace: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def holds(self) -> bool:
        """Whether the queried status is the agent's inferred belief."""
        return self.query is self.verdict

    def explain(self) -> str:
        return "\n".join(self.trace)


def _by_time(frames: List[NormFrame]) -> List[NormFrame]:
    return sorted(frames, key=lambda f: f.timestamp)


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


class _Run:
    """One query's worth of checks, collecting the trace as it goes."""

    def __init__(self, kb: KnowledgeBase, store: NormStore, b: Conjunction, c: Conjunction,
                 entailer: Optional[Entailer]):
        self.mt = store.owner
        self.store = store
        self.b = b
        self.c = c
        self.ent = entailer if entailer is not None and entailer.kb is kb else Entailer(kb)
        self.trace: List[str] = []

    def entails(self, c1: Conjunction, c2: Conjunction) -> bool:
        return self.ent(self.mt, c1, c2)

    def permission_defeater(self, perm: NormFrame, examined: List[str]) -> Optional[Defeater]:
        for proh in _by_time(self.store.prohibitions()):
            examined.append(proh.id)
            if not self.entails(self.c, proh.context):
                self.trace.append(f"    vs prohibition {proh}: not active")
                continue
            covers = self.entails(perm.behavior, proh.behavior)
            later = norm_prior_to_norm(perm, proh)
            if later and covers:
                self.trace.append(
                    f"    vs prohibition {proh}: active, later, covers permission -> defeats")
                return Defeater(proh, DefeatKind.LATER_COVERING_PROHIBITION)
            if not covers and self.entails(self.b, proh.behavior):
                self.trace.append(
                    f"    vs prohibition {proh}: active, applies to act, does not cover permission -> defeats")
                return Defeater(proh, DefeatKind.INTERSECTING_PROHIBITION)
            self.trace.append(
                f"    vs prohibition {proh}: active, later {_yn(later)}, covers permission {_yn(covers)}"
                " -> no defeat")
        return None

    def prohibition_defeater(self, proh: NormFrame, examined: List[str]) -> Optional[Defeater]:
        for perm in _by_time(self.store.permissions()):
            examined.append(perm.id)
            if not norm_prior_to_norm(proh, perm):
                self.trace.append(f"    vs permission {perm}: not later -> no defeat")
                continue
            if not self.entails(self.c, perm.context):
                self.trace.append(f"    vs permission {perm}: not active")
                continue
            if self.entails(perm.behavior, proh.behavior):
                self.trace.append(
                    f"    vs permission {perm}: active, later, inside prohibition -> defeats")
                return Defeater(perm, DefeatKind.LATER_NARROWER_PERMISSION)
            self.trace.append(f"    vs permission {perm}: active, later, not inside prohibition -> no defeat")
        return None

    def _rule(self, frames: List[NormFrame], label: str, defeater) -> Optional[Tuple[NormFrame, Tuple[str, ...]]]:
        for frame in _by_time(frames):
            if not self.entails(self.c, frame.context):
                self.trace.append(f"  {label} {frame}: not active")
                continue
            if not self.entails(self.b, frame.behavior):
                self.trace.append(f"  {label} {frame}: active, act not on its grounds")
                continue
            self.trace.append(f"  {label} {frame}: active, act on its grounds")
            examined: List[str] = []
            d = defeater(frame, examined)
            if d is not None:
                self.trace.append(f"  {label} {frame}: defeated by {d}")
                continue
            self.trace.append(f"  {label} {frame}: undefeated")
            return frame, tuple(examined)
        return None

    def permission_rule(self):
        return self._rule(self.store.permissions(), "permission", self.permission_defeater)

    def prohibition_rule(self):
        return self._rule(self.store.prohibitions(), "prohibition", self.prohibition_defeater)


def _judge(kb, store, b, c, closure: Closure, query: Verdict, entailer) -> Judgment:
    run = _Run(kb, store, b, c, entailer)
    run.trace.append(
        f"query: {query.value}? agent={store.owner} closure={closure.value}")
    run.trace.append(f"  behavior: {b}")
    run.trace.append(f"  context:  {c}")
    if closure is Closure.PROHIBITIVE:
        found = run.permission_rule()
        decided, default = Verdict.PERMISSIBLE, Verdict.IMPERMISSIBLE
    else:
        found = run.prohibition_rule()
        decided, default = Verdict.IMPERMISSIBLE, Verdict.PERMISSIBLE
    if found is not None:
        frame, examined = found
        verdict, basis = decided, Basis(frame.id, examined)
        run.trace.append(f"verdict: {verdict.value} by rule via {frame.id}")
    else:
        verdict, basis = default, Basis()
        kind = "permission" if closure is Closure.PROHIBITIVE else "prohibition"
        run.trace.append(f"verdict: {verdict.value} by {closure.value} closure (no undefeated {kind} applies)")
    return Judgment(query, verdict, closure, basis, b, c, store.owner, tuple(run.trace))


def permissible(kb: KnowledgeBase, store: NormStore, b: Conjunction, c: Conjunction,
                closure: Closure = Closure.PROHIBITIVE, entailer: Optional[Entailer] = None) -> Judgment:
    """Does the store's owner believe ``b`` is permissible in ``c``?

    Free variables of ``b`` and ``c`` are frozen, so ``b`` describes an
    arbitrary act of the given shape.  Raises
    :class:`~normguard.entailment.Indeterminate` if any entailment check
    runs out of depth.
    """
    return _judge(kb, store, b, c, closure, Verdict.PERMISSIBLE, entailer)


def impermissible(kb: KnowledgeBase, store: NormStore, b: Conjunction, c: Conjunction,
                  closure: Closure = Closure.PROHIBITIVE, entailer: Optional[Entailer] = None) -> Judgment:
    return _judge(kb, store, b, c, closure, Verdict.IMPERMISSIBLE, entailer)


def permission_defeated(kb: KnowledgeBase, store: NormStore, perm: NormFrame, b: Conjunction,
                        c: Conjunction, entailer: Optional[Entailer] = None) -> Optional[Defeater]:
    return _Run(kb, store, b, c, entailer).permission_defeater(perm, [])


def prohibition_defeated(kb: KnowledgeBase, store: NormStore, proh: NormFrame, b: Conjunction,
                         c: Conjunction, entailer: Optional[Entailer] = None) -> Optional[Defeater]:
    return _Run(kb, store, b, c, entailer).prohibition_defeater(proh, [])


def permission_rule(kb: KnowledgeBase, store: NormStore, b: Conjunction, c: Conjunction,
                    entailer: Optional[Entailer] = None) -> Optional[NormFrame]:
    """The earliest undefeated permission applying to ``b`` in ``c``, if any."""
    found = _Run(kb, store, b, c, entailer).permission_rule()
    return None if found is None else found[0]


def prohibition_rule(kb: KnowledgeBase, store: NormStore, b: Conjunction, c: Conjunction,
                     entailer: Optional[Entailer] = None) -> Optional[NormFrame]:
    found = _Run(kb, store, b, c, entailer).prohibition_rule()
    return None if found is None else found[0]
