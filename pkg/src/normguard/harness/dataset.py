"""Synthetic dialogue cases covering every combination of testimony conflict.

Each case is one speaker stating two preferences and two conflicting
privacy testimonies, followed by a second speaker asking about the first
speaker's likes or dislikes.  The grid is a full Cartesian product; every generated
testimony pair is checked against :func:`classify_conflict` before it is
emitted.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from ..dsl import Testimony, parse_statement, sharing_act, testimony_behavior
from ..engine import Engine
from ..logic import TOP
from ..norms import ConflictType, NormFrame, classify_conflict


class CertificationError(ValueError):
    """A generated testimony pair does not have its declared conflict type."""


class DatasetFormatError(ValueError):
    pass


@dataclass(frozen=True)
class DialogueCase:
    conflict_type: ConflictType
    id: int
    speaker_a: str
    pref1: str
    pref2: str
    testimony1: str
    testimony2: str
    speaker_b: str
    query: str
    label: str

    def script(self) -> List[str]:
        """The dialogue as lines for a session, speaker switches included."""
        return [f"#speaker: {self.speaker_a}", self.pref1, self.pref2, self.testimony1, self.testimony2,
                f"#speaker: {self.speaker_b}", self.query]

    def to_line(self) -> str:
        def q(s: str) -> str:
            return '"' + s.replace('"', '""') + '"'

        return "|".join([
            self.conflict_type.value, str(self.id), f"speaker: {self.speaker_a}",
            q(self.pref1), q(self.pref2), q(self.testimony1), q(self.testimony2),
            f"speaker: {self.speaker_b}", q(self.query), q(self.label),
        ])

    @classmethod
    def from_line(cls, line: str) -> "DialogueCase":
        rows = list(csv.reader(io.StringIO(line), delimiter="|"))
        if len(rows) != 1 or len(rows[0]) != 10:
            raise DatasetFormatError(f"expected 10 pipe-separated fields: {line!r}")
        row = [x.strip() for x in rows[0]]
        try:
            ctype = ConflictType(row[0])
            case_id = int(row[1])
        except ValueError as e:
            raise DatasetFormatError(str(e)) from None
        speakers = []
        for raw in (row[2], row[7]):
            tag, _, name = raw.partition(":")
            if tag.strip().lower() != "speaker" or not name.strip():
                raise DatasetFormatError(f"bad speaker field {raw!r}")
            speakers.append(name.strip())
        return cls(ctype, case_id, speakers[0], row[3], row[4], row[5], row[6], speakers[1], row[8], row[9])

    def with_label(self, label: str) -> "DialogueCase":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values["label"] = label
        return DialogueCase(**values)


@dataclass(frozen=True)
class FactorGrid:
    """Factor levels, listed outermost first.  Ids follow this order."""

    conflict_types: Tuple[ConflictType, ...] = (
        ConflictType.DIRECT, ConflictType.INTERSECTING, ConflictType.INDIRECT)
    query_polarities: Tuple[str, ...] = ("like", "dislike")
    pref_polarities: Tuple[str, ...] = ("dislike", "like")
    speaker: str = "Plato"
    askers: Tuple[str, ...] = ("Xenophon", "Socrates")
    audience: str = "Socrates"
    object: str = "juice"
    category: str = "drinks"
    same_category_object: str = "soda"
    other_category_object: str = "pizza"
    perm_deontics: Tuple[str, ...] = ("must", "may")
    orders: Tuple[str, ...] = ("permission-first", "prohibition-first")

    @property
    def size(self) -> int:
        return len(self.conflict_types) * len(self.query_polarities) * len(self.pref_polarities) ** 2 * 2 * len(self.orders) \
            * len(self.perm_deontics) * 2 * 2 * len(self.askers)


def _share(head: str, kind: str, topic: Optional[str], audience: Optional[str]) -> str:
    s = f"{head} share my {kind}"
    if topic:
        s += f" about {topic}"
    if audience:
        s += f" with {audience}"
    return s + "."


def testimony_pair(grid: FactorGrid, ctype: ConflictType, perm_deontic: str, specific_audience: bool,
                   perm_on_object: bool) -> Tuple[str, str]:
    """(permission sentence, prohibition sentence) with the requested conflict."""
    perm_topic = grid.object if perm_on_object else grid.category
    other_topic = grid.category if perm_on_object else grid.object
    audience = grid.audience if specific_audience else None
    head = f"You {perm_deontic}"
    if ctype is ConflictType.DIRECT:
        perm = ("preferences", perm_topic, audience)
        proh = ("preferences", perm_topic, audience)
    elif ctype is ConflictType.INDIRECT:
        perm = ("preferences", perm_topic, audience)
        proh = ("preferences", other_topic, audience)
    elif specific_audience:
        # the prohibition names the hearer, the permission names none
        perm = ("preferences", perm_topic, None)
        proh = ("preferences", grid.category, grid.audience) if perm_on_object else ("likes", None, grid.audience)
    else:
        perm = ("preferences", perm_topic, grid.audience)
        proh = ("likes", None, None) if perm_on_object else ("preferences", grid.object, None)
    return _share(head, *perm), _share("Do not", *proh)


def _certify(engine: Engine, grid: FactorGrid, ctype: ConflictType, perm: str, proh: str, where: str) -> None:
    owner = grid.speaker
    frames = []
    for n, text in enumerate((perm, proh), 1):
        t = parse_statement(text, engine.taxonomy)
        assert isinstance(t, Testimony)
        frames.append(NormFrame(f"c{n}", owner, TOP, testimony_behavior(t, owner),
                                t.deontic.evaluation, n))
    obj = engine.taxonomy.lookup(grid.object)
    witness = sharing_act(owner, "likesType", obj, grid.audience)
    got = classify_conflict(engine.kb, engine.taxonomy.mt, frames[0], frames[1], witness=witness)
    if got is not ctype:
        raise CertificationError(
            f"{where}: {perm!r} / {proh!r} classified as {got.value if got else 'no conflict'}, "
            f"declared {ctype.value}")


def generate_dataset(grid: Optional[FactorGrid] = None, engine: Optional[Engine] = None,
                     labeler=None) -> List[DialogueCase]:
    """All cases of ``grid``.  ``labeler(case) -> str`` fills in the label;
    by default the independent oracle does."""
    grid = grid or FactorGrid()
    engine = engine or Engine()
    if labeler is None:
        from .oracle import Vocabulary, oracle_judge
        vocab = Vocabulary.from_taxonomy(engine.taxonomy)

        def labeler(case):
            return oracle_judge(case, vocab)

    certified = {}
    cases = []
    ids = itertools.count(1)
    for (ctype, qpol, pol1, pol2, same_cat, order, deontic, specific, on_object, asker) in itertools.product(
            grid.conflict_types, grid.query_polarities, grid.pref_polarities, grid.pref_polarities, (False, True), grid.orders,
            grid.perm_deontics, (False, True), (True, False), grid.askers):
        case_id = next(ids)
        key = (ctype, deontic, specific, on_object)
        perm, proh = testimony_pair(grid, *key)
        if key not in certified:
            _certify(engine, grid, ctype, perm, proh, f"case {case_id} {key}")
            certified[key] = True
        first, second = (perm, proh) if order == "permission-first" else (proh, perm)
        obj2 = grid.same_category_object if same_cat else grid.other_category_object
        case = DialogueCase(
            ctype, case_id, grid.speaker,
            f"I {pol1} {grid.object}.", f"I {pol2} {obj2}.",
            first, second, asker, f"What does {grid.speaker} {qpol}?", "")
        cases.append(case.with_label(labeler(case)))
    return cases


def dump_dataset(cases: Iterable[DialogueCase]) -> str:
    return "".join(c.to_line() + "\n" for c in cases)


def parse_dataset(text: str) -> List[DialogueCase]:
    return [DialogueCase.from_line(line) for line in text.splitlines() if line.strip()]


def write_dataset(cases: Sequence[DialogueCase], path) -> None:
    Path(path).write_text(dump_dataset(cases), encoding="utf-8", newline="\n")


def read_dataset(path) -> List[DialogueCase]:
    return parse_dataset(Path(path).read_text(encoding="utf-8"))
