"""Defeasible reasoning over normative testimony, used as guard rails on plans."""

from .calculus import Closure, Judgment, Verdict, impermissible, permissible
from .engine import Engine
from .entailment import Indeterminate, entails
from .logic import TOP, Conjunction, HornClause, KnowledgeBase, Literal, Naf
from .norms import ConflictType, DeonticEvaluation, NormFrame, NormStore

__version__ = "0.1.0"

__all__ = [
    "Closure", "Conjunction", "ConflictType", "DeonticEvaluation", "Engine", "HornClause", "Indeterminate",
    "Judgment", "KnowledgeBase", "Literal", "Naf", "NormFrame", "NormStore", "TOP", "Verdict", "entails",
    "impermissible", "permissible",
]
