"""Run dialogue cases through fresh sessions and compare with their labels."""

from __future__ import annotations

import json
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

from ..calculus import Closure
from ..dialogue import Session
from ..engine import Engine
from ..planner import GuardRailViolation, default_methods_text, load_methods
from .dataset import DialogueCase

REPORT_SCHEMA = "normguard.eval-report/1"
RESPONSES = ("LikesAnswer", "DislikesAnswer", "Unknown", "Refusal", "Ack")


@dataclass
class Mismatch:
    id: int
    expected: str
    got: str
    trace: str = ""


@dataclass
class EvalReport:
    total: int = 0
    correct: int = 0
    per_type: Dict[str, Dict[str, int]] = field(default_factory=dict)
    mismatches: List[Mismatch] = field(default_factory=list)
    guard_rail_violations: int = 0
    closure: str = Closure.PROHIBITIVE.value

    @property
    def all_correct(self) -> bool:
        return self.total == self.correct

    def record(self, case: DialogueCase, got: str, trace: str = "", violation: bool = False) -> None:
        row = self.per_type.setdefault(case.conflict_type.value, {"total": 0, "correct": 0})
        row["total"] += 1
        self.total += 1
        self.guard_rail_violations += violation
        if got == case.label:
            row["correct"] += 1
            self.correct += 1
        else:
            self.mismatches.append(Mismatch(case.id, case.label, got, trace))

    def merge(self, other: "EvalReport") -> "EvalReport":
        out = EvalReport(closure=self.closure)
        for rep in (self, other):
            out.total += rep.total
            out.correct += rep.correct
            out.guard_rail_violations += rep.guard_rail_violations
            out.mismatches.extend(rep.mismatches)
            for k, row in rep.per_type.items():
                mine = out.per_type.setdefault(k, {"total": 0, "correct": 0})
                mine["total"] += row["total"]
                mine["correct"] += row["correct"]
        out.mismatches.sort(key=lambda m: m.id)
        return out

    def to_json(self) -> str:
        body = {"schema": REPORT_SCHEMA, "response_inventory": list(RESPONSES), **asdict(self)}
        body["per_type"] = dict(sorted(self.per_type.items()))
        return json.dumps(body, indent=2)

    def summary(self) -> str:
        lines = [f"{self.correct}/{self.total} correct ({self.closure} closure)"]
        for k, row in sorted(self.per_type.items()):
            lines.append(f"  {k}: {row['correct']}/{row['total']}")
        if self.guard_rail_violations:
            lines.append(f"  guard-rail violations: {self.guard_rail_violations}")
        for m in self.mismatches[:20]:
            lines.append(f"  case {m.id}: expected {m.expected!r}, got {m.got!r}")
        return "\n".join(lines)


class CaseRunner:
    """Holds the parsed base engine and methods so each case only copies them."""

    def __init__(self, engine: Optional[Engine] = None, closure: Closure = Closure.PROHIBITIVE,
                 recheck: bool = True):
        self.base = engine or Engine()
        self.base.closure = closure
        self.methods = load_methods(default_methods_text())
        self.recheck = recheck

    def session(self) -> Session:
        return Session(engine=self.base.copy(), methods=self.methods, recheck=self.recheck)

    def run(self, case: DialogueCase):
        """(response text, trace, guard-rail violated)."""
        session = self.session()
        try:
            response = None
            for line in case.script():
                response = session.say(line)
        except GuardRailViolation as e:
            return "<guard-rail violation>", str(e), True
        except Exception:
            return "<error>", traceback.format_exc(limit=4), False
        got = response.text if response else ""
        trace = ""
        if got != case.label and session.last_outcome is not None:
            trace = "\n".join(j.explain() for j in session.last_outcome.judgments) or session.last_outcome.reason
        return got, trace, False


def run_case(case: DialogueCase, runner: Optional[CaseRunner] = None) -> str:
    return (runner or CaseRunner()).run(case)[0]


def _evaluate_chunk(args) -> EvalReport:
    cases, closure, recheck = args
    runner = CaseRunner(closure=Closure(closure), recheck=recheck)
    report = EvalReport(closure=closure)
    for case in cases:
        got, trace, violation = runner.run(case)
        report.record(case, got, trace, violation)
    return report


def evaluate(cases: Sequence[DialogueCase], closure: Closure = Closure.PROHIBITIVE, jobs: int = 1,
             recheck: bool = True) -> EvalReport:
    cases = list(cases)
    if jobs <= 1 or len(cases) < 2:
        return _evaluate_chunk((cases, closure.value, recheck))
    chunks = [cases[i::jobs] for i in range(jobs)]
    report = EvalReport(closure=closure.value)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_evaluate_chunk, [(c, closure.value, recheck) for c in chunks]):
            report = report.merge(part)
    return report


def relabel(cases: Sequence[DialogueCase], closure: Closure, engine: Optional[Engine] = None) -> List[DialogueCase]:
    """The same cases with oracle labels computed under ``closure``."""
    from .oracle import Vocabulary, oracle_judge
    vocab = Vocabulary.from_taxonomy((engine or Engine()).taxonomy)
    return [c.with_label(oracle_judge(c, vocab, closure.value)) for c in cases]
