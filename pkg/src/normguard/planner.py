"""One-level HTN planner whose methods may carry a normative precondition.

A method is tried by proving its preconditions left to right, backtracking
over bindings.  A :class:`NormCheck` asks the calculus whether the owning
agent believes the instantiated behavior is permissible given the facts of
the current discourse; if it does not, the method is refused rather than
executed.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .calculus import Judgment, Verdict
from .engine import Engine
from .logic import (
    Conjunction, KBSyntaxError, Literal, LogicError, check_term, is_variable, parse_conjunction, walk,
)
from .sexpr import SExpr, dump, read_all


class PlannerError(LogicError):
    pass


class DuplicateMethod(PlannerError):
    pass


class GuardRailViolation(PlannerError):
    """An executed plan failed its normative re-check."""


@dataclass(frozen=True)
class Lookup:
    """Prove ``literal`` inside the microtheory named (or owned) by ``mt``.

    The literal's predicate may be a variable bound by earlier preconditions.
    """

    mt: str
    literal: Literal


@dataclass(frozen=True)
class NormCheck:
    agent: str
    behavior: Conjunction
    context_source: str = "discourse"


Precondition = Union[Literal, Lookup, NormCheck]


@dataclass(frozen=True)
class Step:
    operator: str
    args: Tuple[Union[str, Literal], ...] = ()

    def substitute(self, s: Dict[str, str]) -> "Step":
        return Step(self.operator, tuple(
            _instantiate(a, s) if isinstance(a, Literal) else walk(a, s) for a in self.args))

    def is_ground(self) -> bool:
        for a in self.args:
            if isinstance(a, Literal):
                if is_variable(a.predicate) or not a.is_ground():
                    return False
            elif is_variable(a):
                return False
        return True

    def __str__(self) -> str:
        return "(" + " ".join([self.operator] + [str(a) for a in self.args]) + ")"


@dataclass(frozen=True)
class Method:
    action: Literal
    preconditions: Tuple[Precondition, ...]
    actions: Tuple[Step, ...]
    name: str = ""

    def __post_init__(self):
        checks = sum(isinstance(p, NormCheck) for p in self.preconditions)
        if checks > 1:
            raise PlannerError(f"method {self.name or self.action} has {checks} norm checks; at most one allowed")


@dataclass(frozen=True)
class Discourse:
    mt: str

    def facts(self, engine: Engine) -> Conjunction:
        return Conjunction(tuple(engine.kb.get(self.mt).all_facts()))


class Status(enum.Enum):
    EXECUTED = "Executed"
    REFUSED = "Refused"
    NO_BINDING = "NoBinding"
    NO_METHOD = "NoMethod"


@dataclass(frozen=True)
class PlanOutcome:
    status: Status
    steps: Tuple[Step, ...] = ()
    bindings: Dict[str, str] = field(default_factory=dict)
    judgment: Optional[Judgment] = None
    reason: str = ""
    judgments: Tuple[Judgment, ...] = ()

    @property
    def executed(self) -> bool:
        return self.status is Status.EXECUTED


def _instantiate(lit: Literal, s: Dict[str, str]) -> Literal:
    return Literal(walk(lit.predicate, s), tuple(walk(a, s) for a in lit.args))


class _Attempt:
    def __init__(self):
        self.judgments: List[Judgment] = []
        self.failed_at: Optional[str] = None


class Planner:
    def __init__(self, engine: Engine, recheck: bool = False):
        self.engine = engine
        self.recheck = recheck
        self._methods: List[Tuple[int, int, Method]] = []
        self._ids = itertools.count(1)

    def register(self, method: Method, priority: Optional[int] = None) -> int:
        """Add a method.  A second method for the same action predicate and
        arity needs an explicit ``priority`` (lower runs first)."""
        key = (method.action.predicate, method.action.arity)
        same = [m for _, _, m in self._methods if (m.action.predicate, m.action.arity) == key]
        if same and priority is None:
            raise DuplicateMethod(f"a method for {key[0]}/{key[1]} is already registered; give a priority")
        method_id = next(self._ids)
        self._methods.append((priority if priority is not None else 0, method_id, method))
        self._methods.sort(key=lambda t: (t[0], t[1]))
        return method_id

    @property
    def methods(self) -> List[Method]:
        return [m for _, _, m in self._methods]

    def attempt(self, action: Literal, discourse: Discourse) -> PlanOutcome:
        refused: Optional[PlanOutcome] = None
        no_binding: Optional[PlanOutcome] = None
        for n, method in enumerate(self.methods):
            renaming = {v: f"{v}#m{n}" for v in _method_vars(method)}
            head = _instantiate(method.action, renaming)
            s = _match(action, head)
            if s is None:
                continue
            state = _Attempt()
            pres = [_rename(p, renaming) for p in method.preconditions]
            for solution in self._prove(pres, 0, s, discourse, state):
                steps = tuple(step.substitute(renaming).substitute(solution) for step in method.actions)
                for step in steps:
                    if not step.is_ground():
                        raise PlannerError(f"plan step {step} is not ground after proving preconditions")
                judgment = state.judgments[-1] if state.judgments else None
                if self.recheck and judgment is not None:
                    again = self.engine.permissible(
                        self.engine.resolve_mt(judgment.agent), judgment.behavior, judgment.context, fresh=True)
                    if again.verdict is not Verdict.PERMISSIBLE:
                        raise GuardRailViolation(f"executed {steps} but the re-check says {again.verdict.value}")
                bindings = {v: walk(v, solution) for v in action.variables()}
                return PlanOutcome(Status.EXECUTED, steps, bindings, judgment, judgments=tuple(state.judgments))
            if state.judgments:
                refused = refused or PlanOutcome(
                    Status.REFUSED, judgment=state.judgments[-1], reason="normative check failed",
                    judgments=tuple(state.judgments))
            else:
                no_binding = no_binding or PlanOutcome(
                    Status.NO_BINDING, reason=f"no binding for {state.failed_at}")
        if refused is not None:
            return refused
        if no_binding is not None:
            return no_binding
        return PlanOutcome(Status.NO_METHOD, reason=f"no method matches {action}")

    def _prove(self, pres: Sequence[Precondition], i: int, s: Dict[str, str],
               discourse: Discourse, state: _Attempt) -> Iterator[Dict[str, str]]:
        if i == len(pres):
            yield s
            return
        pre = pres[i]
        engine = self.engine
        if isinstance(pre, NormCheck):
            behavior = Conjunction(tuple(_instantiate(l, s) for l in pre.behavior))
            mt = engine.resolve_mt(walk(pre.agent, s))
            judgment = engine.permissible(mt, behavior, discourse.facts(engine))
            state.judgments.append(judgment)
            if judgment.verdict is Verdict.PERMISSIBLE:
                yield from self._prove(pres, i + 1, s, discourse, state)
            return
        if isinstance(pre, Lookup):
            mt = engine.resolve_mt(walk(pre.mt, s))
            goal = _instantiate(pre.literal, s)
        else:
            mt = discourse.mt
            goal = _instantiate(pre, s)
        if is_variable(goal.predicate):
            raise PlannerError(f"predicate variable {goal.predicate} unbound in {goal}")
        found = False
        for b in engine.kb.solve([goal], mt):
            found = True
            s2 = dict(s)
            s2.update((k, v) for k, v in b.items() if k != v)
            yield from self._prove(pres, i + 1, s2, discourse, state)
        if not found and state.failed_at is None:
            state.failed_at = str(goal)


def _method_vars(method: Method) -> List[str]:
    out: List[str] = []

    def lit_vars(lit: Literal):
        if is_variable(lit.predicate):
            out.append(lit.predicate)
        out.extend(lit.variables())

    lit_vars(method.action)
    for p in method.preconditions:
        if isinstance(p, NormCheck):
            if is_variable(p.agent):
                out.append(p.agent)
            for l in p.behavior:
                lit_vars(l)
        elif isinstance(p, Lookup):
            if is_variable(p.mt):
                out.append(p.mt)
            lit_vars(p.literal)
        else:
            lit_vars(p)
    for step in method.actions:
        for a in step.args:
            if isinstance(a, Literal):
                lit_vars(a)
            elif is_variable(a):
                out.append(a)
    return list(dict.fromkeys(out))


def _rename(p: Precondition, r: Dict[str, str]) -> Precondition:
    if isinstance(p, NormCheck):
        return NormCheck(walk(p.agent, r), Conjunction(tuple(_instantiate(l, r) for l in p.behavior)),
                         p.context_source)
    if isinstance(p, Lookup):
        return Lookup(walk(p.mt, r), _instantiate(p.literal, r))
    return _instantiate(p, r)


def _match(action: Literal, pattern: Literal) -> Optional[Dict[str, str]]:
    if action.predicate != pattern.predicate or action.arity != pattern.arity:
        return None
    s: Dict[str, str] = {}
    for x, y in zip(action.args, pattern.args):
        x, y = walk(x, s), walk(y, s)
        if x == y:
            continue
        if is_variable(y):
            s[y] = x
        elif is_variable(x):
            s[x] = y
        else:
            return None
    return s


# -- method file format ---------------------------------------------------------


def _template_literal(form: SExpr) -> Literal:
    if not isinstance(form, list) or not form or not all(isinstance(x, str) for x in form):
        raise KBSyntaxError(f"expected a literal, got {dump(form)}")
    for x in form:
        check_term(x)
    return Literal(form[0], tuple(form[1:]))


def parse_method(form: SExpr) -> Method:
    """Parse one ``preconditionForMethod`` form::

        (preconditionForMethod
          (and (factsInDiscourse ?d ?d-facts)
               (askingPreference ?s-id ?dis-like ?owner ?asker)
               (ist-Information ?owner (?dis-like ?owner ?object))
               (ist-Information ?owner (permissible (and ...) ?d-facts)))
          (methodForAction (respondToUser ...)
            (actionSequence (TheList (respond ?d (?dis-like ?owner ?object))))))
    """
    try:
        tag, pre_form, mfa = form
        assert tag == "preconditionForMethod" and pre_form[0] == "and"
        mfa_tag, action_form, seq = mfa
        assert mfa_tag == "methodForAction" and seq[0] == "actionSequence"
        the_list = seq[1]
        assert the_list[0] == "TheList"
    except (ValueError, AssertionError, TypeError, IndexError):
        raise KBSyntaxError(f"malformed preconditionForMethod: {dump(form)}") from None
    facts_var = None
    pres: List[Precondition] = []
    for p in pre_form[1:]:
        if isinstance(p, list) and p[:1] == ["factsInDiscourse"]:
            facts_var = p[2] if len(p) == 3 else None
            continue
        if isinstance(p, list) and p[:1] == ["ist-Information"] and len(p) == 3:
            inner = p[2]
            if isinstance(inner, list) and inner[:1] == ["permissible"]:
                if len(inner) != 3 or inner[2] != facts_var:
                    raise KBSyntaxError(f"permissible check must use the factsInDiscourse bundle: {dump(p)}")
                pres.append(NormCheck(p[1], parse_conjunction(inner[1])))
            else:
                pres.append(Lookup(p[1], _template_literal(inner)))
            continue
        pres.append(_template_literal(p))
    steps = []
    for st in the_list[1:]:
        if not isinstance(st, list) or not st or not isinstance(st[0], str):
            raise KBSyntaxError(f"bad action step {dump(st)}")
        steps.append(Step(st[0], tuple(_template_literal(a) if isinstance(a, list) else a for a in st[1:])))
    action = _template_literal(action_form)
    return Method(action, tuple(pres), tuple(steps), name=action.predicate)


def load_methods(text: str) -> List[Method]:
    return [parse_method(f) for f in read_all(text)]


def default_methods_text() -> str:
    from importlib import resources
    return resources.files("normguard").joinpath("data/methods.kb").read_text(encoding="utf-8")


def load_methods_file(path) -> List[Method]:
    return load_methods(Path(path).read_text(encoding="utf-8"))
