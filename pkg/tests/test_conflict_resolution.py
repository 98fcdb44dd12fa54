from __future__ import annotations

import pytest

from normguard.calculus import Closure, Verdict

from conflicts import PATTERNS, TaxonomyDraws, conflict_suites


@pytest.fixture(scope="module")
def suites():
    from normguard.logic import KnowledgeBase, load_kb_text
    from conftest import DATA
    kb = KnowledgeBase()
    load_kb_text(kb, (DATA / "medical.kb").read_text())
    return conflict_suites(kb, n_random=20, seed=11)


@pytest.mark.parametrize("pattern", PATTERNS)
def test_pattern_under_prohibitive_closure(suites, pattern):
    scenarios = suites[pattern]
    assert len([s for s in scenarios if "#" in s.name]) >= 20
    failures = [f for s in scenarios for f in s.failures(Closure.PROHIBITIVE)]
    assert not failures, "\n".join(failures)


@pytest.mark.parametrize("pattern", PATTERNS[1:])
def test_impermissible_conclusions_hold_under_permissive_closure(suites, pattern):
    # the impermissibility conclusions also follow from the prohibition rule
    scenarios = [s for s in suites[pattern] if s.expected is Verdict.IMPERMISSIBLE]
    failures = [f for s in scenarios for f in s.failures(Closure.PERMISSIVE)]
    assert not failures, "\n".join(failures)


def test_later_permission_under_permissive_closure(suites):
    scenarios = [s for s in suites["later_permission"] if "explicit" in s.name]
    failures = [f for s in scenarios for f in s.failures(Closure.PERMISSIVE)]
    assert not failures, "\n".join(failures)


def test_order_checks_really_permute(suites):
    s = suites["narrow_prohibition"][0]
    assert s.permutable and len(s.norms) == 2


def test_draws_are_reproducible():
    a = [s.name + str(s.act) for s in TaxonomyDraws(5).overlap(5)]
    b = [s.name + str(s.act) for s in TaxonomyDraws(5).overlap(5)]
    assert a == b
