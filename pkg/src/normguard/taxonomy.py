"""Topic vocabulary: which objects exist, which category each belongs to,
and which surface tokens name them."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional

from .logic import KnowledgeBase, Literal, load_kb_text

TAXONOMY_MT = "TopicTaxonomyMt"


def default_taxonomy_text() -> str:
    return resources.files("normguard").joinpath("data/taxonomy.kb").read_text(encoding="utf-8")


class VocabularyError(ValueError):
    def __init__(self, word: str, position: int = 0, expected: str = "a known topic"):
        super().__init__(f"unknown word {word!r} at position {position}: expected {expected}")
        self.word = word
        self.position = position


@dataclass
class Taxonomy:
    mt: str = TAXONOMY_MT
    members: Dict[str, List[str]] = field(default_factory=dict)
    category_of: Dict[str, str] = field(default_factory=dict)
    words: Dict[str, str] = field(default_factory=dict)
    surface: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_kb(cls, kb: KnowledgeBase, mt: str = TAXONOMY_MT) -> "Taxonomy":
        tax = cls(mt)
        for s in kb.solve([Literal.of("isa", "?c", "TopicCategory")], mt):
            tax.members.setdefault(s["?c"], [])
        for s in kb.solve([Literal.of("genls", "?o", "?c")], mt):
            obj, cat = s["?o"], s["?c"]
            if cat in tax.members and obj not in tax.category_of:
                tax.category_of[obj] = cat
                tax.members[cat].append(obj)
        for s in kb.solve([Literal.of("wordForm", "?x", "?w")], mt):
            const, word = s["?x"], s["?w"]
            tax.words.setdefault(word.lower(), const)
            tax.surface.setdefault(const, word)
        return tax

    @property
    def categories(self) -> List[str]:
        return list(self.members)

    @property
    def objects(self) -> List[str]:
        return list(self.category_of)

    def is_category(self, const: str) -> bool:
        return const in self.members

    def is_object(self, const: str) -> bool:
        return const in self.category_of

    def lookup(self, word: str, position: int = 0) -> str:
        const = self.words.get(word.lower())
        if const is None:
            raise VocabularyError(word, position)
        return const

    def word(self, const: str) -> str:
        return self.surface.get(const, const)

    def display(self, const: str) -> str:
        """Human-readable name: ``ArtificialIntelligence`` -> ``artificial intelligence``."""
        return " ".join(re.findall(r"[A-Z]+(?![a-z])|[A-Z]?[a-z0-9]+", const)).lower() or const


def load_taxonomy(kb: KnowledgeBase, path: Optional[Path] = None, mt: str = TAXONOMY_MT) -> Taxonomy:
    text = Path(path).read_text(encoding="utf-8") if path else default_taxonomy_text()
    load_kb_text(kb, text, default_mt=mt)
    return Taxonomy.from_kb(kb, mt)
