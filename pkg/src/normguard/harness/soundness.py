"""Random testimony stores over the topic vocabulary, probed for incoherent verdicts."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

from ..calculus import Closure, Verdict, impermissible, permissible
from ..dsl import Deontic, InfoScope, Polarity, Testimony, Topic, sharing_act, testimony_behavior
from ..engine import Engine
from ..logic import TOP, Conjunction, Literal
from ..norms import NormStore

OWNER = "Plato"
PEOPLE = ("Socrates", "Xenophon", "Crito")
PLACES = ("Home", "Office", "Cafe")


def _place(term: str, place: str) -> Literal:
    return Literal.of("location", term, place)


@dataclass
class Violation:
    store: int
    probe: str
    message: str


@dataclass
class SoundnessReport:
    stores: int = 0
    probes: int = 0
    checks: int = 0
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        head = (f"{self.stores} stores, {self.probes} probes, {self.checks} checks: "
                f"{len(self.violations)} violations")
        return "\n".join([head] + [f"  store {v.store}: {v.probe}: {v.message}" for v in self.violations[:20]])


class StoreFuzzer:
    """Draws stores of at most ``max_frames`` testimonies and matching probes."""

    def __init__(self, engine: Optional[Engine] = None, seed: int = 0, max_frames: int = 6):
        self.engine = engine or Engine()
        self.rng = random.Random(seed)
        self.max_frames = max_frames
        self.mt = self.engine.agent_mt(OWNER)
        tax = self.engine.taxonomy
        self.topics = [Topic(o, tax.word(o)) for o in tax.objects] + \
                      [Topic(c, tax.word(c), True) for c in tax.categories]

    def context(self, var: bool) -> Conjunction:
        r = self.rng.random()
        if r < 0.5:
            return TOP
        term = "?where" if var else "here"
        lits = [_place(term, p) for p in self.rng.sample(PLACES, 1 if r < 0.85 else 2)]
        return Conjunction(tuple(lits))

    def testimony(self) -> Testimony:
        rng = self.rng
        scope = InfoScope(rng.choice(("preferences", "likes", "dislikes")),
                          rng.choice(self.topics) if rng.random() < 0.8 else None)
        audience = rng.choice(PEOPLE) if rng.random() < 0.5 else None
        return Testimony(rng.choice(list(Deontic)), scope, audience)

    def store(self) -> NormStore:
        store = NormStore(self.mt)
        for _ in range(self.rng.randint(0, self.max_frames)):
            t = self.testimony()
            store.add_testimony(testimony_behavior(t, OWNER), t.deontic.evaluation, self.context(var=True))
        return store

    def probes(self, n: int) -> Iterator[Tuple[Conjunction, Conjunction]]:
        tax = self.engine.taxonomy
        for _ in range(n):
            if self.rng.random() < 0.8:
                b = sharing_act(OWNER, self.rng.choice(list(Polarity)), self.rng.choice(tax.objects),
                                self.rng.choice(PEOPLE))
            else:
                b = testimony_behavior(self.testimony(), OWNER)
            yield b, self.context(var=False)


def check_store(engine: Engine, store: NormStore, probes: Sequence[Tuple[Conjunction, Conjunction]],
                index: int, report: SoundnessReport) -> None:
    kb, ent = engine.kb, engine.entailer
    ids = {f.id: f for f in store}
    for b, c in probes:
        report.probes += 1
        where = f"{b} in {c}"
        verdicts = {}
        for closure in Closure:
            pos = permissible(kb, store, b, c, closure, ent)
            neg = impermissible(kb, store, b, c, closure, ent)
            report.checks += 1
            if pos.holds == neg.holds:
                report.violations.append(Violation(
                    index, where, f"{closure.value}: permissible={pos.holds} impermissible={neg.holds}"))
            verdicts[closure] = pos.verdict
            by_rule = pos.verdict is (Verdict.PERMISSIBLE if closure is Closure.PROHIBITIVE else Verdict.IMPERMISSIBLE)
            frame = ids.get(pos.basis.norm) if pos.basis.norm else None
            if by_rule and (frame is None or frame.is_permission != (closure is Closure.PROHIBITIVE)):
                report.violations.append(Violation(index, where, f"{closure.value}: basis {pos.basis} is wrong"))
            if not by_rule and pos.basis.norm is not None:
                report.violations.append(Violation(index, where, f"{closure.value}: default verdict cites a norm"))
        report.checks += 1
        if verdicts[Closure.PROHIBITIVE] is Verdict.PERMISSIBLE and verdicts[Closure.PERMISSIVE] is not Verdict.PERMISSIBLE:
            report.violations.append(Violation(
                index, where, "an undefeated permission and an undefeated prohibition both apply"))


def check_soundness(n_stores: int = 10_000, probes_per_store: int = 4, seed: int = 0,
                    max_frames: int = 6, engine: Optional[Engine] = None) -> SoundnessReport:
    fuzz = StoreFuzzer(engine, seed, max_frames)
    report = SoundnessReport()
    for i in range(n_stores):
        store = fuzz.store()
        report.stores += 1
        check_store(fuzz.engine, store, list(fuzz.probes(probes_per_store)), i, report)
    return report
