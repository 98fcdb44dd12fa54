from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normguard.dsl import parse_statement, sharing_act
from normguard.dsl import testimony_behavior as behavior_of
from normguard.engine import Engine
from normguard.logic import TOP, Conjunction, KBSyntaxError, LogicError, Literal, Naf
from normguard.norms import (
    ConflictType, DeonticEvaluation, NormClass, NormError, NormFrame, NormStore, classify_conflict,
    norm_prior_to_norm, parse_norm,
)
from normguard.sexpr import read_one

from conftest import conj

RECORDS = conj("(and (isa ?act RevealingMedicalRecord) (medicalRecordOf ?act Karli) (senderOfInfo ?act SelfToken))")
PRESCRIPTIONS_TO_HUSBAND = conj(
    "(and (isa ?act RevealingPrescription) (prescriptionOf ?act Karli)"
    " (recipientOfInfo ?act ?hubby) (senderOfInfo ?act SelfToken))")


class TestStore:
    def test_successive_adds_are_ordered(self):
        st_ = NormStore("KarliMt")
        a = st_.add_testimony(RECORDS, DeonticEvaluation.IMPERMISSIBLE)
        b = st_.add_testimony(RECORDS, DeonticEvaluation.OPTIONAL)
        assert norm_prior_to_norm(a, b)
        assert not norm_prior_to_norm(b, a)
        assert not norm_prior_to_norm(a, a)

    def test_restated_norm_gets_later_stamp(self):
        st_ = NormStore("KarliMt")
        a = st_.add_testimony(RECORDS, DeonticEvaluation.IMPERMISSIBLE)
        b = st_.add_testimony(RECORDS, DeonticEvaluation.IMPERMISSIBLE)
        assert b.timestamp > a.timestamp and a.id != b.id
        assert len(st_) == 2

    def test_classification(self):
        st_ = NormStore("KarliMt")
        norm1 = st_.add_testimony(PRESCRIPTIONS_TO_HUSBAND, DeonticEvaluation.OPTIONAL,
                                  conj("(and (husbandOf Karli ?hubby))"), id="norm1")
        assert norm1.norm_class is NormClass.PERMISSION
        records = st_.add_testimony(RECORDS, DeonticEvaluation.IMPERMISSIBLE)
        assert records.norm_class is NormClass.PROHIBITION
        assert st_.add_testimony(RECORDS, DeonticEvaluation.OBLIGATORY).is_permission
        assert st_["norm1"] is norm1
        assert st_.permissions() == [norm1, st_["norm3"]] and st_.prohibitions() == [records]

    def test_empty_behavior_is_allowed(self):
        f = NormStore("M").add_testimony(TOP, DeonticEvaluation.IMPERMISSIBLE)
        assert f.behavior.is_top

    def test_negative_literal_rejected(self):
        with pytest.raises((NormError, LogicError, TypeError)):
            NormStore("M").add_testimony(Conjunction((Naf(conj("(and (p ?x))")),)), DeonticEvaluation.OPTIONAL)

    def test_duplicate_id_and_foreign_owner(self):
        st_ = NormStore("M")
        st_.add_testimony(TOP, DeonticEvaluation.OPTIONAL, id="n")
        with pytest.raises(NormError):
            st_.add_testimony(TOP, DeonticEvaluation.OPTIONAL, id="n")
        with pytest.raises(NormError):
            st_.add(NormFrame("x", "Other", TOP, TOP, DeonticEvaluation.OPTIONAL))

    def test_frames_are_immutable(self):
        f = NormStore("M").add_testimony(TOP, DeonticEvaluation.OPTIONAL)
        with pytest.raises(Exception):
            f.timestamp = 99


class TestParse:
    def test_norm_form(self):
        f = parse_norm(read_one(
            "(norm norm1 :context (and (husbandOf Karli ?hubby)) :behavior (and (isa ?act RevealingPrescription)"
            " (prescriptionOf ?act Karli) (recipientOfInfo ?act ?hubby) (senderOfInfo ?act SelfToken))"
            " :evaluation Optional)"), "KarliMt")
        assert f.id == "norm1" and f.evaluation is DeonticEvaluation.OPTIONAL
        assert f.behavior == PRESCRIPTIONS_TO_HUSBAND
        assert parse_norm(read_one(f.to_sexpr()), "KarliMt") == f

    @pytest.mark.parametrize("text", [
        "(norm n :evaluation Maybe)", "(norm n :behavior (and (p a)))", "(norm n :colour red :evaluation Optional)",
        "(norm :evaluation Optional)", "(norm n :evaluation)",
    ])
    def test_bad_forms(self, text):
        with pytest.raises(KBSyntaxError):
            parse_norm(read_one(text), "M")

    def test_engine_loads_norm_files(self):
        engine = Engine()
        engine.load_text("(mt KarliMt) (norm n1 :behavior (and (p ?x)) :evaluation Impermissible)")
        assert [f.id for f in engine.store("KarliMt")] == ["n1"]


class TestConflicts:
    def test_direct(self, medical_kb):
        a = NormFrame("a", "KarliMt", TOP, RECORDS, DeonticEvaluation.OPTIONAL, 1)
        b = NormFrame("b", "KarliMt", TOP, RECORDS, DeonticEvaluation.IMPERMISSIBLE, 2)
        assert classify_conflict(medical_kb, "KarliMt", a, b) is ConflictType.DIRECT

    def test_indirect_records_vs_prescriptions(self, medical_kb):
        a = NormFrame("a", "KarliMt", TOP, RECORDS, DeonticEvaluation.IMPERMISSIBLE, 1)
        b = NormFrame("b", "KarliMt", TOP, PRESCRIPTIONS_TO_HUSBAND, DeonticEvaluation.OPTIONAL, 2)
        assert classify_conflict(medical_kb, "KarliMt", a, b) is ConflictType.INDIRECT
        assert classify_conflict(medical_kb, "KarliMt", b, a) is ConflictType.INDIRECT

    def test_consistent_evaluations(self, medical_kb):
        a = NormFrame("a", "KarliMt", TOP, RECORDS, DeonticEvaluation.OPTIONAL, 1)
        b = NormFrame("b", "KarliMt", TOP, RECORDS, DeonticEvaluation.OBLIGATORY, 2)
        assert classify_conflict(medical_kb, "KarliMt", a, b) is None

    def test_intersecting_data_point_766(self):
        engine = Engine()
        tax = engine.taxonomy
        frames = []
        for n, text in enumerate(("Do not share my preferences about drinks with Socrates.",
                                  "You may share my preferences about juice."), 1):
            t = parse_statement(text, tax)
            frames.append(NormFrame(f"n{n}", "PlatoMt", TOP, behavior_of(t, "Plato"),
                                    t.deontic.evaluation, n))
        witness = sharing_act("Plato", "likesType", "Juice", "Socrates")
        assert classify_conflict(engine.kb, tax.mt, *frames, witness=witness) is ConflictType.INTERSECTING
        assert classify_conflict(engine.kb, tax.mt, *frames) is None
        assert classify_conflict(engine.kb, tax.mt, *frames, witness=TOP) is None


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from(list(DeonticEvaluation)), min_size=1, max_size=12))
def test_timestamps_form_a_strict_total_order(evals):
    store = NormStore("M")
    frames = [store.add_testimony(TOP, e) for e in evals]
    for i, a in enumerate(frames):
        for j, b in enumerate(frames):
            assert norm_prior_to_norm(a, b) == (i < j)
        assert a.is_permission != a.is_prohibition
