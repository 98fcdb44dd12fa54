"""Ground-enumeration semantics for small knowledge bases.

Nothing here uses unification or the backward chainer.  A program's model
is computed bottom-up: every rule is instantiated with every tuple of
constants from the Herbrand universe, strata are evaluated in order, and
negation as failure is read as "no ground instance of the negated
conjunction is in the model so far".  Entailment then checks whether some
ground instance of the consequent lies in the model of the program plus the
frozen antecedent.  The calculus verdicts are computed by applying the
permission and prohibition rules literally on top of that entailment.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from ..calculus import Closure, Verdict
from ..logic import Conjunction, HornClause, KnowledgeBase, Literal, Naf, is_variable
from ..norms import NormFrame

Atom = Tuple[str, Tuple[str, ...]]


def _atom(lit: Literal) -> Atom:
    return (lit.predicate, lit.args)


def _ground(lit: Literal, s: Dict[str, str]) -> Atom:
    return (lit.predicate, tuple(s.get(a, a) for a in lit.args))


def _vars(lits: Iterable[Literal]) -> List[str]:
    return list(dict.fromkeys(a for l in lits for a in l.args if is_variable(a)))


def _exists(lits: Sequence[Literal], s: Dict[str, str], universe: Sequence[str], model: Set[Atom]) -> bool:
    free = [v for v in _vars(lits) if v not in s]
    for values in itertools.product(universe, repeat=len(free)):
        t = dict(s)
        t.update(zip(free, values))
        if all(_ground(l, t) in model for l in lits):
            return True
    return False


@dataclass
class Program:
    facts: List[Literal] = field(default_factory=list)
    rules: List[HornClause] = field(default_factory=list)

    @classmethod
    def from_kb(cls, kb: KnowledgeBase, mt: str) -> "Program":
        prog = cls()
        for m in kb.visible(mt):
            prog.facts.extend(m.all_facts())
            prog.rules.extend(m.all_rules())
        return prog

    def constants(self) -> Set[str]:
        out = set()
        for f in self.facts:
            out.update(f.args)
        for r in self.rules:
            for l in [r.head] + [g for g in r.body if isinstance(g, Literal)]:
                out.update(a for a in l.args if not is_variable(a))
            for g in r.body:
                if isinstance(g, Naf):
                    out.update(a for l in g.conjunction for a in l.args if not is_variable(a))
        return out

    def strata(self) -> List[List[HornClause]]:
        """Rules grouped so each group only negates predicates settled earlier."""
        heads = {r.head.predicate for r in self.rules}
        level = {p: 0 for p in heads}
        for _ in range(len(heads) + 1):
            changed = False
            for r in self.rules:
                need = 0
                for g in r.body:
                    if isinstance(g, Naf):
                        need = max(need, *(level.get(l.predicate, -1) + 1 for l in g.conjunction))
                    else:
                        need = max(need, level.get(g.predicate, 0))
                if need > level[r.head.predicate]:
                    level[r.head.predicate] = need
                    changed = True
            if not changed:
                break
        else:
            raise ValueError("program is not stratified")
        out: Dict[int, List[HornClause]] = {}
        for r in self.rules:
            out.setdefault(level[r.head.predicate], []).append(r)
        return [out[k] for k in sorted(out)]

    def model(self, extra: Iterable[Literal] = (), universe: Optional[Sequence[str]] = None) -> Set[Atom]:
        model = {_atom(f) for f in self.facts}
        model.update(_atom(f) for f in extra)
        if universe is None:
            universe = sorted(self.constants() | {a for f in extra for a in f.args})
        for stratum in self.strata():
            while True:
                new = set()
                for r in stratum:
                    pos = [g for g in r.body if isinstance(g, Literal)]
                    negs = [g for g in r.body if isinstance(g, Naf)]
                    names = _vars([r.head] + pos)
                    for values in itertools.product(universe, repeat=len(names)):
                        s = dict(zip(names, values))
                        if not all(_ground(l, s) in model for l in pos):
                            continue
                        if any(_exists(list(n.conjunction), s, universe, model) for n in negs):
                            continue
                        head = _ground(r.head, s)
                        if head not in model:
                            new.add(head)
                if not new:
                    break
                model |= new
        return model

    def herbrand_size(self, extra_constants: int = 0) -> int:
        arities = {}
        for f in self.facts:
            arities[f.predicate] = f.arity
        for r in self.rules:
            arities[r.head.predicate] = r.head.arity
        n = len(self.constants()) + extra_constants
        return sum(n ** a for a in arities.values())


def _frozen(c: Conjunction) -> Tuple[List[Literal], List[str]]:
    names = {v: f"frozen_{i}" for i, v in enumerate(_vars(c))}
    return [Literal(l.predicate, tuple(names.get(a, a) for a in l.args)) for l in c], list(names.values())


def bf_entails(prog: Program, c1: Conjunction, c2: Conjunction) -> bool:
    if not len(c2):
        return True
    ground, fresh = _frozen(c1)
    universe = sorted(prog.constants() | set(fresh) | {a for l in ground for a in l.args}
                      | {a for l in c2 for a in l.args if not is_variable(a)})
    model = prog.model(ground, universe)
    return _exists(list(c2), {}, universe, model)


class _Memo:
    def __init__(self, prog: Program):
        self.prog = prog
        self.cache: Dict[Tuple[Conjunction, Conjunction], bool] = {}

    def __call__(self, c1: Conjunction, c2: Conjunction) -> bool:
        key = (c1, c2)
        if key not in self.cache:
            self.cache[key] = bf_entails(self.prog, c1, c2)
        return self.cache[key]


def bf_verdict(prog: Program, frames: Sequence[NormFrame], b: Conjunction, c: Conjunction,
               closure: Closure) -> Verdict:
    """Permissibility of ``b`` in ``c`` by direct application of the rules."""
    ent = _Memo(prog)
    perms = [f for f in frames if f.is_permission]
    prohs = [f for f in frames if f.is_prohibition]

    def active(n):
        return ent(c, n.context)

    def applies(n):
        return ent(b, n.behavior)

    def perm_defeated(p):
        return any(active(q) and ((p.timestamp < q.timestamp and ent(p.behavior, q.behavior))
                                  or (not ent(p.behavior, q.behavior) and applies(q)))
                   for q in prohs)

    def proh_defeated(q):
        return any(active(p) and q.timestamp < p.timestamp and ent(p.behavior, q.behavior) for p in perms)

    if closure is Closure.PROHIBITIVE:
        ok = any(active(p) and applies(p) and not perm_defeated(p) for p in perms)
        return Verdict.PERMISSIBLE if ok else Verdict.IMPERMISSIBLE
    bad = any(active(q) and applies(q) and not proh_defeated(q) for q in prohs)
    return Verdict.IMPERMISSIBLE if bad else Verdict.PERMISSIBLE


# -- random programs ----------------------------------------------------------


@dataclass
class RandomKB:
    program: Program
    parent_facts: List[Literal]
    child_facts: List[Literal]
    predicates: Dict[str, int]
    constants: List[str]

    def build(self, max_depth: Optional[int] = None) -> Tuple[KnowledgeBase, str]:
        """The same program split across a parent and a child microtheory."""
        kb = KnowledgeBase() if max_depth is None else KnowledgeBase(max_depth)
        kb.create_microtheory("BaseMt")
        kb.create_microtheory("QueryMt", ["BaseMt"])
        for f in self.parent_facts:
            kb.assert_fact("BaseMt", f)
        for f in self.child_facts:
            kb.assert_fact("QueryMt", f)
        for i, r in enumerate(self.program.rules):
            kb.assert_rule("BaseMt" if i % 2 else "QueryMt", r)
        return kb, "QueryMt"


def random_literal(rng: random.Random, predicates: Dict[str, int], terms: Sequence[str]) -> Literal:
    p = rng.choice(sorted(predicates))
    return Literal(p, tuple(rng.choice(terms) for _ in range(predicates[p])))


def random_kb(rng: random.Random, n_constants: int = 4, n_base: int = 3, n_derived: int = 3,
              n_facts: int = 8) -> RandomKB:
    """A non-recursive, range-restricted program with NAF goals last."""
    constants = [f"k{i}" for i in range(n_constants)]
    preds: Dict[str, int] = {}
    for i in range(n_base):
        preds[f"b{i}"] = rng.choice((1, 2))
    facts = [random_literal(rng, preds, constants) for _ in range(n_facts)]
    facts = list(dict.fromkeys(facts))
    rules = []
    variables = ["?x", "?y", "?z"]
    for i in range(n_derived):
        lower = dict(preds)
        name = f"d{i}"
        preds[name] = rng.choice((1, 2))
        for _ in range(rng.choice((1, 2))):
            body: List = [random_literal(rng, lower, variables + constants[:1]) for _ in range(rng.choice((1, 2)))]
            bound = _vars(body)
            if not bound:
                body.append(random_literal(rng, lower, ["?x"]))
                bound = ["?x"]
            head = Literal(name, tuple(rng.choice(bound) for _ in range(preds[name])))
            if rng.random() < 0.5:
                neg = random_literal(rng, lower, bound + ["?w"] + constants[:2])
                body.append(Naf(Conjunction((neg,))))
            rules.append(HornClause(head, tuple(body)))
    split = rng.randrange(len(facts) + 1)
    return RandomKB(Program(facts, rules), facts[:split], facts[split:], preds, constants)


def random_conjunction(rng: random.Random, kb: RandomKB, size: int, variables: Sequence[str]) -> Conjunction:
    terms = list(variables) + kb.constants
    return Conjunction(tuple(random_literal(rng, kb.predicates, terms) for _ in range(size)))
