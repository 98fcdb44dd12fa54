"""Scenarios for the four ways a permission and a prohibition can conflict.

``later_permission``: a later permission carves its acts out of an earlier
  wider prohibition (or there is no explicit prohibition at all).
``later_prohibition``: a later prohibition covering an earlier permission wins.
``narrow_prohibition``: a prohibition strictly inside a permission wins in
  either order.
``overlap``: neither covers the other; acts in both are impermissible in
  either order.

The Karli scenarios use the medical-record knowledge base; the randomized
ones draw testimony and sharing acts from the topic taxonomy and keep only
draws whose entailment relations fit the pattern's premises.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

from normguard.calculus import Closure, Verdict, permissible
from normguard.dsl import InfoScope, Polarity, Testimony, Topic, Deontic, sharing_act, testimony_behavior
from normguard.engine import Engine
from normguard.entailment import entails
from normguard.logic import TOP, Conjunction, KnowledgeBase, Literal
from normguard.norms import DeonticEvaluation, NormStore

import karli

OWNER = "Plato"
PATTERNS = ("later_permission", "later_prohibition", "narrow_prohibition", "overlap")
PEOPLE = ("Socrates", "Xenophon", "Crito")
PERMIT = (DeonticEvaluation.OPTIONAL, DeonticEvaluation.OBLIGATORY)
FORBID = DeonticEvaluation.IMPERMISSIBLE

Norm = Tuple[Conjunction, DeonticEvaluation, Conjunction]


@dataclass
class Scenario:
    name: str
    kb: KnowledgeBase
    mt: str
    norms: List[Norm]
    act: Conjunction
    situation: Conjunction
    expected: Verdict
    permutable: bool = False
    # acts whose verdict must not depend on statement order
    probes: List[Conjunction] = field(default_factory=list)

    def verdict(self, norms: Sequence[Norm], act: Conjunction, closure=Closure.PROHIBITIVE) -> Verdict:
        store = NormStore(self.mt)
        for b, e, c in norms:
            store.add_testimony(b, e, c)
        return permissible(self.kb, store, act, self.situation, closure).verdict

    def failures(self, closure=Closure.PROHIBITIVE) -> List[str]:
        out = []
        orders = list(itertools.permutations(self.norms)) if self.permutable else [tuple(self.norms)]
        for order in orders:
            got = self.verdict(order, self.act, closure)
            if got is not self.expected:
                out.append(f"{self.name} [{closure.value}]: expected {self.expected.value}, got {got.value}")
        if self.permutable:
            for probe in self.probes:
                seen = {self.verdict(order, probe, closure) for order in orders}
                if len(seen) > 1:
                    out.append(f"{self.name} [{closure.value}]: verdict on {probe} depends on order")
        return out


# -- Karli scenarios -------------------------------------------------------------


def karli_scenarios(kb: KnowledgeBase) -> dict:
    """Pattern name -> hand-built medical scenarios."""
    K = karli
    P, I = Verdict.PERMISSIBLE, Verdict.IMPERMISSIBLE
    husband_perm = (K.PRESCRIPTIONS_TO_HUSBAND, K.OPTIONAL, K.HUSBAND)
    records_proh = (K.RECORDS, K.IMPERMISSIBLE, TOP)
    records_perm = (K.RECORDS, K.OPTIONAL, TOP)
    s = lambda name, norms, act, v, perm=False, probes=(): Scenario(
        name, kb, K.MT, list(norms), act, K.SITUATION, v, perm, list(probes))
    return {
        "later_permission": [s("karli: prescriptions to husband", [husband_perm], K.PRESCRIPTION_TO_BOB, P),
            s("karli: other medical information", [husband_perm], K.CONDITION_TO_BOB, I),
            s("karli: after a records prohibition", [records_proh, husband_perm], K.PRESCRIPTION_TO_BOB, P)],
        "later_prohibition": [s("karli: before the prohibition", [(K.CONDITIONS_TO_CHILDREN, K.OBLIGATORY, K.CHILD)],
              K.CONDITION_TO_ANN, P),
            s("karli: after the prohibition",
              [(K.CONDITIONS_TO_CHILDREN, K.OBLIGATORY, K.CHILD), records_proh], K.CONDITION_TO_ANN, I)],
        "narrow_prohibition": [s("karli: prescriptions to husband",
              [records_perm, (K.PRESCRIPTIONS_TO_HUSBAND, K.IMPERMISSIBLE, K.HUSBAND)], K.PRESCRIPTION_TO_BOB, I,
              True, [K.CONDITION_TO_BOB, K.CONDITION_TO_ANN]),
            s("karli: other records",
              [records_perm, (K.PRESCRIPTIONS_TO_HUSBAND, K.IMPERMISSIBLE, K.HUSBAND)], K.CONDITION_TO_BOB, P, True)],
        "overlap": [s("karli: upsetting disclosure",
              [records_perm, (K.UPSET_HUSBAND, K.IMPERMISSIBLE, K.HUSBAND)], K.UPSETTING_CONDITION_TO_BOB, I,
              True, [K.CONDITION_TO_BOB, K.PRESCRIPTION_TO_BOB]),
            s("karli: harmless disclosure",
              [records_perm, (K.UPSET_HUSBAND, K.IMPERMISSIBLE, K.HUSBAND)], K.CONDITION_TO_BOB, P, True)],
    }


# -- randomized instantiations over the taxonomy ---------------------------------------


class TaxonomyDraws:
    def __init__(self, seed: int = 0, engine: Engine = None):
        self.engine = engine or Engine()
        self.mt = self.engine.agent_mt(OWNER)
        self.rng = random.Random(seed)
        tax = self.engine.taxonomy
        topics = [None] + [Topic(o, tax.word(o)) for o in tax.objects] + \
                 [Topic(c, tax.word(c), True) for c in tax.categories]
        self.behaviors = [
            testimony_behavior(Testimony(Deontic.MAY, InfoScope(kind, topic), aud), OWNER)
            for kind in ("preferences", "likes", "dislikes") for topic in topics for aud in (None,) + PEOPLE]
        self.acts = [sharing_act(OWNER, pol, obj, who)
                     for pol in Polarity for obj in tax.objects for who in PEOPLE]
        self._cache = {}

    def ent(self, a, b) -> bool:
        key = (a, b)
        if key not in self._cache:
            self._cache[key] = entails(self.engine.kb, self.mt, a, b)
        return self._cache[key]

    def context(self) -> Tuple[Conjunction, Conjunction]:
        """(norm context, situation) with the situation activating it."""
        place = self.rng.choice(("Home", "Office", None))
        if place is None:
            return TOP, Conjunction.of(Literal.of("location", "here", "Cafe"))
        return (Conjunction.of(Literal.of("location", "?where", place)),
                Conjunction.of(Literal.of("location", "here", place), Literal.of("weather", "here", "Sunny")))

    def find(self, n: int, name: str, premise: Callable, act_on: Callable, order: Callable, expected: Verdict,
             permutable: bool) -> List[Scenario]:
        out, tries = [], 0
        while len(out) < n:
            tries += 1
            if tries > 200_000:
                raise RuntimeError(f"could not draw {n} instances for {name}")
            perm_b, proh_b = self.rng.choice(self.behaviors), self.rng.choice(self.behaviors)
            if not premise(perm_b, proh_b):
                continue
            acts = [a for a in self.acts if act_on(a, perm_b, proh_b)]
            if not acts:
                continue
            (c1, s1), (c2, s2) = self.context(), self.context()
            situation = s1 + s2
            perm = (perm_b, self.rng.choice(PERMIT), c1)
            proh = (proh_b, FORBID, c2)
            out.append(Scenario(f"{name} #{len(out) + 1}", self.engine.kb, self.mt, order(perm, proh),
                                self.rng.choice(acts), situation, expected, permutable,
                                self.rng.sample(self.acts, 8)))
        return out

    def later_permission(self, n: int) -> List[Scenario]:
        """Prohibition first, then a permission it subsumes; the permission's acts are permissible."""
        alone = self.find(max(1, n // 4), "later permission, implicit prohibition", lambda p, q: True,
                          lambda a, p, q: self.ent(a, p), lambda perm, proh: [perm], Verdict.PERMISSIBLE, False)
        explicit = self.find(n, "later permission, explicit prohibition", lambda p, q: self.ent(p, q),
                             lambda a, p, q: self.ent(a, p), lambda perm, proh: [proh, perm],
                             Verdict.PERMISSIBLE, False)
        return alone + explicit

    def later_prohibition(self, n: int) -> List[Scenario]:
        """Permission first, then a prohibition subsuming it; the permission's acts are impermissible."""
        return self.find(n, "later prohibition", lambda p, q: self.ent(p, q), lambda a, p, q: self.ent(a, p),
                         lambda perm, proh: [perm, proh], Verdict.IMPERMISSIBLE, False)

    def narrow_prohibition(self, n: int) -> List[Scenario]:
        """Permission strictly subsumes the prohibition; the prohibition's acts are impermissible in any order."""
        return self.find(n, "narrow prohibition", lambda p, q: self.ent(q, p) and not self.ent(p, q),
                         lambda a, p, q: self.ent(a, q), lambda perm, proh: [perm, proh],
                         Verdict.IMPERMISSIBLE, True)

    def overlap(self, n: int) -> List[Scenario]:
        """Neither subsumes the other; acts at the intersection are impermissible in any order."""
        return self.find(n, "overlap", lambda p, q: not self.ent(q, p) and not self.ent(p, q),
                         lambda a, p, q: self.ent(a, p) and self.ent(a, q), lambda perm, proh: [perm, proh],
                         Verdict.IMPERMISSIBLE, True)


def conflict_suites(medical_kb: KnowledgeBase, n_random: int = 20, seed: int = 0) -> dict:
    """Pattern name -> scenarios (Karli ones first)."""
    draws = TaxonomyDraws(seed)
    ex = karli_scenarios(medical_kb)
    return {
        "later_permission": ex["later_permission"] + draws.later_permission(n_random),
        "later_prohibition": ex["later_prohibition"] + draws.later_prohibition(n_random),
        "narrow_prohibition": ex["narrow_prohibition"] + draws.narrow_prohibition(n_random),
        "overlap": ex["overlap"] + draws.overlap(n_random),
    }
