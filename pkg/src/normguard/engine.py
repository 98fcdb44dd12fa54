"""Knowledge base plus one norm store per agent microtheory."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Iterable, Optional

from .calculus import Closure, Judgment, permissible
from .entailment import Entailer
from .logic import Conjunction, KnowledgeBase, is_variable, load_kb_text
from .norms import NormFrame, NormStore, parse_norm
from .taxonomy import TAXONOMY_MT, Taxonomy, load_taxonomy

WORLD_MT = "WorldMt"


class Engine:
    """Shared state for a dialogue: facts, rules, testimony, and the closure
    assumption used when answering normative queries.

    People map to microtheories named ``<Person>Mt`` that inherit from
    ``WorldMt``, which in turn inherits the topic taxonomy.
    """

    def __init__(
        self,
        kb: Optional[KnowledgeBase] = None,
        taxonomy: Optional[Taxonomy] = None,
        closure: Closure = Closure.PROHIBITIVE,
    ):
        if kb is None:
            kb = KnowledgeBase()
            taxonomy = load_taxonomy(kb)
        self.kb = kb
        self.taxonomy = taxonomy if taxonomy is not None else Taxonomy.from_kb(kb)
        self.closure = closure
        self.stores: Dict[str, NormStore] = {}
        kb.ensure_microtheory(WORLD_MT)
        if self.taxonomy.mt in kb and self.taxonomy.mt not in kb.get(WORLD_MT).parents:
            kb.add_genl_mt(WORLD_MT, self.taxonomy.mt)
        self.entailer = Entailer(kb)

    @classmethod
    def from_files(
        cls,
        taxonomy: Optional[Path] = None,
        kb_files: Iterable[Path] = (),
        closure: Closure = Closure.PROHIBITIVE,
        max_depth: Optional[int] = None,
    ) -> "Engine":
        kb = KnowledgeBase() if max_depth is None else KnowledgeBase(max_depth)
        tax = load_taxonomy(kb, taxonomy)
        engine = cls(kb, tax, closure)
        for path in kb_files:
            engine.load_text(Path(path).read_text(encoding="utf-8"))
        return engine

    def copy(self) -> "Engine":
        """A fresh engine over a copy of the KB, with empty norm stores."""
        return Engine(self.kb.copy(), self.taxonomy, self.closure)

    # -- microtheories and stores -------------------------------------------

    def agent_mt(self, person: str) -> str:
        name = person if person.endswith("Mt") else f"{person}Mt"
        if name not in self.kb:
            self.kb.create_microtheory(name, [WORLD_MT])
        return name

    def resolve_mt(self, term: str) -> str:
        """Map a microtheory-or-person term to a microtheory name."""
        if is_variable(term):
            raise ValueError(f"unbound microtheory term {term}")
        return term if term in self.kb else self.agent_mt(term)

    def store(self, mt: str) -> NormStore:
        st = self.stores.get(mt)
        if st is None:
            self.kb.get(mt)
            st = self.stores[mt] = NormStore(mt)
        return st

    def add_norm(self, frame: NormFrame) -> NormFrame:
        return self.store(frame.owner).add(frame)

    def frames(self):
        for st in self.stores.values():
            yield from st

    # -- loading ------------------------------------------------------------

    def load_text(self, text: str, default_mt: str = WORLD_MT) -> None:
        def norm_form(form, current):
            self.add_norm(parse_norm(form, current))

        load_kb_text(self.kb, text, default_mt=default_mt, handlers={"norm": norm_form})

    # -- queries ------------------------------------------------------------

    def permissible(self, mt: str, behavior: Conjunction, context: Conjunction,
                    closure: Optional[Closure] = None, fresh: bool = False) -> Judgment:
        return permissible(
            self.kb, self.store(mt), behavior, context,
            closure or self.closure,
            entailer=None if fresh else self.entailer,
        )
