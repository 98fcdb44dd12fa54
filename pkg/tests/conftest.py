from __future__ import annotations

from pathlib import Path

import pytest

from normguard.logic import Conjunction, KnowledgeBase, load_kb_text, parse_conjunction
from normguard.sexpr import read_one

DATA = Path(__file__).parent / "data"


def conj(text: str) -> Conjunction:
    """``"(and (p a) (q ?x))"`` -> Conjunction."""
    return parse_conjunction(read_one(text))


@pytest.fixture
def medical_kb() -> KnowledgeBase:
    kb = KnowledgeBase()
    load_kb_text(kb, (DATA / "medical.kb").read_text())
    return kb
