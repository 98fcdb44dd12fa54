"""Function-free Horn-clause knowledge base with microtheories.

Terms are plain strings.  Variables start with ``?``; anything else is a
constant.  Constants starting with ``$`` are reserved for frozen query
constants and never come out of the parsers.

The solver is a depth-first backward chainer with negation as failure.
Search depth is bounded (``DEFAULT_MAX_DEPTH`` nested rule expansions along
one branch); running out of depth raises :class:`DepthExceeded` instead of
quietly failing, so callers can never mistake resource exhaustion for a
negative answer.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .sexpr import SExpr, dump, read_all

DEFAULT_MAX_DEPTH = 512

Substitution = Dict[str, str]

_CONSTANT = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_\-.]*\Z")
_VARIABLE = re.compile(r"\?[A-Za-z0-9_][A-Za-z0-9_\-]*\Z")


class LogicError(Exception):
    pass


class ArityError(LogicError):
    pass


class DepthExceeded(LogicError):
    pass


class UnknownMicrotheory(LogicError):
    pass


class GenlMtCycle(LogicError):
    pass


class KBSyntaxError(LogicError):
    pass


def is_variable(term: str) -> bool:
    return term[:1] == "?"


def check_term(term: str) -> str:
    if not isinstance(term, str) or not (_CONSTANT.match(term) or _VARIABLE.match(term)):
        raise KBSyntaxError(f"not a valid term: {term!r}")
    return term


@dataclass(frozen=True)
class Literal:
    predicate: str
    args: Tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    @classmethod
    def of(cls, predicate: str, *args: str) -> "Literal":
        return cls(predicate, args)

    @property
    def arity(self) -> int:
        return len(self.args)

    def variables(self) -> List[str]:
        return [a for a in self.args if is_variable(a)]

    def is_ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    def substitute(self, s: Mapping[str, str]) -> "Literal":
        if not s:
            return self
        return Literal(self.predicate, tuple(walk(a, s) for a in self.args))

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate,) + self.args) + ")"


@dataclass(frozen=True)
class Conjunction:
    literals: Tuple[Literal, ...] = ()

    def __post_init__(self):
        if not isinstance(self.literals, tuple):
            object.__setattr__(self, "literals", tuple(self.literals))

    @classmethod
    def of(cls, *literals: Literal) -> "Conjunction":
        return cls(literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    @property
    def is_top(self) -> bool:
        return not self.literals

    def normalized(self) -> "Conjunction":
        return Conjunction(tuple(dict.fromkeys(self.literals)))

    def variables(self) -> List[str]:
        return list(dict.fromkeys(v for lit in self.literals for v in lit.variables()))

    def is_ground(self) -> bool:
        return all(lit.is_ground() for lit in self.literals)

    def substitute(self, s: Mapping[str, str]) -> "Conjunction":
        return Conjunction(tuple(lit.substitute(s) for lit in self.literals))

    def __add__(self, other: "Conjunction") -> "Conjunction":
        return Conjunction(self.literals + tuple(other))

    def __str__(self) -> str:
        return "(and" + "".join(" " + str(lit) for lit in self.literals) + ")"


TOP = Conjunction()


@dataclass(frozen=True)
class Naf:
    """Negation as failure over a conjunction (existential closure)."""

    conjunction: Conjunction

    def variables(self) -> List[str]:
        return self.conjunction.variables()

    def __str__(self) -> str:
        return "(naf" + "".join(" " + str(lit) for lit in self.conjunction) + ")"


Goal = Union[Literal, Naf]


@dataclass(frozen=True)
class HornClause:
    head: Literal
    body: Tuple[Goal, ...] = ()

    def __post_init__(self):
        if not isinstance(self.body, tuple):
            object.__setattr__(self, "body", tuple(self.body))
        if not isinstance(self.head, Literal):
            raise LogicError("rule head must be a positive literal")

    def variables(self) -> List[str]:
        out = self.head.variables()
        for g in self.body:
            out.extend(g.variables())
        return list(dict.fromkeys(out))

    def __str__(self) -> str:
        return "(rule " + " ".join([str(self.head)] + [str(g) for g in self.body]) + ")"


def walk(term: str, s: Mapping[str, str]) -> str:
    while term[:1] == "?" and term in s:
        term = s[term]
    return term


def resolve(s: Mapping[str, str]) -> Substitution:
    """Fully dereference every binding so the result is idempotent."""
    return {v: walk(v, s) for v in s}


def _bind_args(xs: Sequence[str], ys: Sequence[str], s: Substitution) -> Optional[Substitution]:
    out = None
    for x, y in zip(xs, ys):
        x = walk(x, out if out is not None else s)
        y = walk(y, out if out is not None else s)
        if x == y:
            continue
        if out is None:
            out = dict(s)
        if x[:1] == "?":
            out[x] = y
        elif y[:1] == "?":
            out[y] = x
        else:
            return None
    return out if out is not None else s


def unify(a: Literal, b: Literal, s: Optional[Mapping[str, str]] = None) -> Optional[Substitution]:
    """Most general unifier of two literals extending ``s``, or None."""
    if a.predicate != b.predicate:
        return None
    if len(a.args) != len(b.args):
        raise ArityError(f"{a.predicate} used with arities {len(a.args)} and {len(b.args)}")
    out = _bind_args(a.args, b.args, dict(s or {}))
    return None if out is None else resolve(out)


class Microtheory:
    def __init__(self, name: str):
        self.name = name
        self.facts: Dict[str, Dict[Literal, None]] = {}
        self.rules: Dict[str, List[HornClause]] = {}
        self.parents: List[str] = []

    def add_fact(self, lit: Literal) -> None:
        self.facts.setdefault(lit.predicate, {})[lit] = None

    def add_rule(self, rule: HornClause) -> None:
        self.rules.setdefault(rule.head.predicate, []).append(rule)

    def all_facts(self) -> List[Literal]:
        return [f for bucket in self.facts.values() for f in bucket]

    def all_rules(self) -> List[HornClause]:
        return [r for bucket in self.rules.values() for r in bucket]

    def copy(self) -> "Microtheory":
        mt = Microtheory(self.name)
        mt.facts = {p: dict(b) for p, b in self.facts.items()}
        mt.rules = {p: list(b) for p, b in self.rules.items()}
        mt.parents = list(self.parents)
        return mt

    def __repr__(self) -> str:
        return f"Microtheory({self.name!r})"


class _Solver:
    def __init__(self, stack: Sequence[Microtheory], max_depth: int):
        self.stack = stack
        self.max_depth = max_depth
        self._fresh = itertools.count()
        self._rule_vars: Dict[int, List[str]] = {}

    def run(self, goals: Sequence[Goal], s: Substitution, depth: int = 0) -> Iterator[Substitution]:
        chain = None
        for g in reversed(goals):
            chain = ((g, depth), chain)
        frames: List[Iterator] = [iter(((chain, s),))]
        while frames:
            try:
                chain, s = next(frames[-1])
            except StopIteration:
                frames.pop()
                continue
            if chain is None:
                yield s
                continue
            (goal, d), rest = chain
            if type(goal) is Naf:
                inner = [lit.substitute(s) for lit in goal.conjunction]
                if next(self.run(inner, s, d), None) is None:
                    frames.append(iter(((rest, s),)))
            else:
                frames.append(self._expand(goal, d, rest, s))

    def _expand(self, goal: Literal, depth: int, rest, s: Substitution):
        lit = goal.substitute(s)
        pred, args = lit.predicate, lit.args
        ground = not any(a[:1] == "?" for a in args)
        for mt in self.stack:
            bucket = mt.facts.get(pred)
            if not bucket:
                continue
            if ground:
                if lit in bucket:
                    yield rest, s
                continue
            for fact in bucket:
                if len(fact.args) != len(args):
                    raise ArityError(f"{pred} used with arities {len(args)} and {len(fact.args)}")
                s2 = _bind_args(args, fact.args, s)
                if s2 is not None:
                    yield rest, s2
        for mt in self.stack:
            for rule in mt.rules.get(pred, ()):
                if len(rule.head.args) != len(args):
                    raise ArityError(f"{pred} used with arities {len(args)} and {len(rule.head.args)}")
                renaming = self._renaming(rule)
                head = rule.head.substitute(renaming)
                s2 = _bind_args(args, head.args, s)
                if s2 is None:
                    continue
                if depth + 1 > self.max_depth:
                    raise DepthExceeded(f"depth bound {self.max_depth} exceeded while proving {lit}")
                chain = rest
                for g in reversed(rule.body):
                    if type(g) is Naf:
                        g = Naf(g.conjunction.substitute(renaming))
                    else:
                        g = g.substitute(renaming)
                    chain = ((g, depth + 1), chain)
                yield chain, s2

    def _renaming(self, rule: HornClause) -> Substitution:
        key = id(rule)
        names = self._rule_vars.get(key)
        if names is None:
            names = self._rule_vars[key] = rule.variables()
        n = next(self._fresh)
        return {v: f"{v}#{n}" for v in names}


class KnowledgeBase:
    """A set of named microtheories linked by ``genlMt`` inheritance.

    Predicate arity is fixed the first time a predicate is asserted; later
    assertions with a different arity raise :class:`ArityError`.
    """

    def __init__(self, max_depth: int = DEFAULT_MAX_DEPTH):
        self.max_depth = max_depth
        self.microtheories: Dict[str, Microtheory] = {}
        self.arities: Dict[str, int] = {}
        self.version = 0

    # -- mutation ---------------------------------------------------------

    def create_microtheory(self, name: str, parents: Iterable[str] = ()) -> Microtheory:
        check_term(name)
        if is_variable(name):
            raise KBSyntaxError(f"microtheory name cannot be a variable: {name}")
        mt = self.microtheories.get(name)
        if mt is None:
            mt = self.microtheories[name] = Microtheory(name)
            self.version += 1
        for p in parents:
            self.add_genl_mt(name, p)
        return mt

    def ensure_microtheory(self, name: str, parents: Iterable[str] = ()) -> Microtheory:
        return self.create_microtheory(name, parents)

    def add_genl_mt(self, child: str, parent: str) -> None:
        c = self.get(child)
        self.get(parent)
        if parent in c.parents:
            return
        if child == parent or child in self.visible_names(parent):
            raise GenlMtCycle(f"genlMt {child} -> {parent} would create a cycle")
        c.parents.append(parent)
        self.version += 1

    def check_arity(self, lit: Literal, register: bool = True) -> None:
        known = self.arities.get(lit.predicate)
        if known is None:
            if register:
                self.arities[lit.predicate] = lit.arity
        elif known != lit.arity:
            raise ArityError(f"{lit.predicate} has arity {known}, got {lit.arity} in {lit}")

    def assert_fact(self, mt: str, lit: Literal) -> None:
        target = self.get(mt)
        if not lit.is_ground():
            raise LogicError(f"facts must be ground: {lit}")
        self.check_arity(lit)
        target.add_fact(lit)
        self.version += 1

    def assert_rule(self, mt: str, rule: HornClause) -> None:
        target = self.get(mt)
        self.check_arity(rule.head)
        for g in rule.body:
            for lit in (g.conjunction if isinstance(g, Naf) else (g,)):
                self.check_arity(lit)
        target.add_rule(rule)
        self.version += 1

    # -- access -----------------------------------------------------------

    def get(self, name: str) -> Microtheory:
        try:
            return self.microtheories[name]
        except KeyError:
            raise UnknownMicrotheory(name) from None

    def __contains__(self, name: str) -> bool:
        return name in self.microtheories

    def visible_names(self, mt: str) -> List[str]:
        """``mt`` followed by its transitive genlMt ancestors, breadth first."""
        order = [mt]
        seen = {mt}
        i = 0
        while i < len(order):
            for p in self.get(order[i]).parents:
                if p not in seen:
                    seen.add(p)
                    order.append(p)
            i += 1
        return order

    def visible(self, mt: str) -> List[Microtheory]:
        return [self.microtheories[n] for n in self.visible_names(mt)]

    def copy(self) -> "KnowledgeBase":
        kb = KnowledgeBase(self.max_depth)
        kb.microtheories = {n: mt.copy() for n, mt in self.microtheories.items()}
        kb.arities = dict(self.arities)
        return kb

    # -- queries ----------------------------------------------------------

    def solve(
        self,
        goals: Sequence[Goal],
        mt: str,
        max_depth: Optional[int] = None,
        scratch: Iterable[Literal] = (),
    ) -> Iterator[Substitution]:
        """Yield a substitution over the query variables for every proof.

        ``scratch`` literals are visible as if asserted in a private child of
        ``mt``; the KB itself is never touched.
        """
        stack = self.visible(mt)
        extra = Microtheory("$scratch")
        for lit in scratch:
            self.check_arity(lit, register=False)
            extra.add_fact(lit)
        if extra.facts:
            stack = [extra] + stack
        qvars: List[str] = []
        for g in goals:
            lits = g.conjunction if isinstance(g, Naf) else (g,)
            for lit in lits:
                self.check_arity(lit, register=False)
            qvars.extend(g.variables())
        qvars = list(dict.fromkeys(qvars))
        solver = _Solver(stack, self.max_depth if max_depth is None else max_depth)
        for s in solver.run(list(goals), {}):
            yield {v: walk(v, s) for v in qvars}

    def ask(self, goals: Sequence[Goal], mt: str, **kw) -> bool:
        return next(self.solve(goals, mt, **kw), None) is not None


# -- text format ------------------------------------------------------------


def parse_literal(form: SExpr) -> Literal:
    if not isinstance(form, list) or not form or not isinstance(form[0], str):
        raise KBSyntaxError(f"expected a literal, got {dump(form)}")
    pred, *args = form
    if pred in ("and", "naf", "not") or is_variable(pred):
        raise KBSyntaxError(f"not a literal: {dump(form)}")
    check_term(pred)
    for a in args:
        if not isinstance(a, str):
            raise KBSyntaxError(f"terms must be function-free: {dump(form)}")
        check_term(a)
    return Literal(pred, tuple(args))


def parse_conjunction(form: SExpr) -> Conjunction:
    if isinstance(form, list) and form[:1] == ["and"]:
        return Conjunction(tuple(parse_literal(f) for f in form[1:]))
    return Conjunction((parse_literal(form),))


def parse_goal(form: SExpr) -> Goal:
    if isinstance(form, list) and form[:1] == ["naf"]:
        return Naf(Conjunction(tuple(parse_literal(f) for f in form[1:])))
    return parse_literal(form)


def parse_rule(form: SExpr) -> HornClause:
    if not isinstance(form, list) or len(form) < 2 or form[0] != "rule":
        raise KBSyntaxError(f"expected (rule <head> <goal>*), got {dump(form)}")
    return HornClause(parse_literal(form[1]), tuple(parse_goal(g) for g in form[2:]))


FormHandler = Callable[[list, str], None]


def load_kb_text(
    kb: KnowledgeBase,
    text: str,
    default_mt: str = "BaseKB",
    handlers: Optional[Mapping[str, FormHandler]] = None,
) -> None:
    """Load ``(mt ..)``, ``(fact ..)``, ``(rule ..)`` and ``(genlMt ..)`` forms.

    ``handlers`` maps extra top-level keywords to callables receiving the form
    and the current microtheory name.
    """
    current = default_mt
    for form in read_all(text):
        if not isinstance(form, list) or not form or not isinstance(form[0], str):
            raise KBSyntaxError(f"unexpected top-level form: {dump(form)}")
        head = form[0]
        if head == "mt":
            if len(form) != 2 or not isinstance(form[1], str):
                raise KBSyntaxError(f"expected (mt <name>), got {dump(form)}")
            current = form[1]
            kb.ensure_microtheory(current)
        elif head == "genlMt":
            if len(form) != 3 or not all(isinstance(x, str) for x in form[1:]):
                raise KBSyntaxError(f"expected (genlMt <child> <parent>), got {dump(form)}")
            kb.ensure_microtheory(form[1])
            kb.ensure_microtheory(form[2])
            kb.add_genl_mt(form[1], form[2])
        elif head == "fact":
            if len(form) != 2:
                raise KBSyntaxError(f"expected (fact <literal>), got {dump(form)}")
            kb.ensure_microtheory(current)
            kb.assert_fact(current, parse_literal(form[1]))
        elif head == "rule":
            kb.ensure_microtheory(current)
            kb.assert_rule(current, parse_rule(form))
        elif handlers and head in handlers:
            kb.ensure_microtheory(current)
            handlers[head](form, current)
        else:
            raise KBSyntaxError(f"unknown top-level form: {head}")


def load_kb_file(kb: KnowledgeBase, path, **kw) -> None:
    load_kb_text(kb, Path(path).read_text(encoding="utf-8"), **kw)
