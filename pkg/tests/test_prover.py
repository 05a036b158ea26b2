import pytest
from conftest import formulas
from hypothesis import given

from glcirc.formula import TOP, parse
from glcirc.oracle import find_countermodel
from glcirc.proofs import check_circular, check_glseq
from glcirc.prover import (ABORTED, NOT_PROVABLE, PROVABLE, CircularProver, ProofSearchAborted,
                           SequentProver, default_budget, prove_circ, prove_glseq,
                           provable_formula)
from glcirc.sequent import Sequent

LOEB = parse("<>([]p & ~p) | []p")


def test_loeb_axiom_has_a_small_circular_proof():
    result = prove_circ(LOEB)
    assert result.verdict == PROVABLE
    proof = result.certificate
    assert check_circular(proof)
    assert len(proof.backlinks) == 1
    assert proof.rule_counts()["box_k4"] >= 2
    assert result.stats.backlinks >= 1


def test_top_is_one_axiom():
    proof = prove_circ(TOP).certificate
    assert [n.rule for n in proof.preorder()] == ["ax_top"]


def test_reflexivity_fails():
    assert prove_circ(Sequent.from_text("<>~p, p")).verdict == NOT_PROVABLE
    assert prove_glseq(Sequent.from_text("<>~p, p")).verdict == NOT_PROVABLE


def test_distribution_and_loeb_under_the_gl_rule():
    k = parse("[](p -> q) -> ([]p -> []q)")
    for f in (k, LOEB):
        result = prove_glseq(f)
        assert result.provable and check_glseq(result.certificate)


def test_atom_is_not_provable():
    assert prove_glseq(parse("p")).verdict == NOT_PROVABLE
    assert prove_circ(parse("p")).verdict == NOT_PROVABLE


def test_provable_formula():
    assert provable_formula(LOEB)
    assert provable_formula(parse("p | ~p"))
    assert not provable_formula(parse("[]~p | []p"))
    assert find_countermodel(parse("[]~p | []p"), 4) is not None


@pytest.mark.parametrize("text", [
    "[][]p -> [][][]p", "[]p -> [][]p", "[]([]p -> p) -> []p", "[]F | <>[]F",
    "<>T -> <>[]F", "[](p & q) <-> []p & []q", "<>p -> <>(p & []~p)",
])
def test_gl_theorems(text):
    f = parse(text)
    assert prove_circ(f).provable
    assert prove_glseq(f).provable


@pytest.mark.parametrize("text", ["[]p -> p", "<>T", "[]<>T", "<>p -> <>[]p & p", "[]F"])
def test_non_theorems_have_countermodels(text):
    f = parse(text)
    assert not prove_circ(f).provable
    assert not prove_glseq(f).provable
    assert find_countermodel(f, 3) is not None


def test_budget_abort_is_distinct():
    result = prove_circ(LOEB, budget=1)
    assert result.verdict == ABORTED and result.certificate is None
    assert prove_glseq(parse("[](p -> q) -> ([]p -> []q)"), budget=1).verdict == ABORTED
    with pytest.raises(ProofSearchAborted):
        provable_formula(LOEB, budget=1)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("GLC_BUDGET", "7")
    assert default_budget() == 7
    monkeypatch.setenv("GLC_BUDGET", "lots")
    with pytest.raises(ValueError):
        default_budget()
    monkeypatch.delenv("GLC_BUDGET")
    assert default_budget() == 10**6


def test_provers_are_reusable():
    circ, seq = CircularProver(), SequentProver()
    for text in ("[]p -> [][]p", "p", "[]([]p -> p) -> []p", "[]p -> p"):
        f = Sequent([parse(text)])
        assert circ.prove(f).verdict == prove_circ(f).verdict
        assert seq.prove(f).verdict == prove_glseq(f).verdict
        assert circ.decide(f) == prove_circ(f).verdict


@given(formulas(max_leaves=10))
def test_calculi_agree(f):
    assert prove_circ(f).verdict == prove_glseq(f).verdict


@given(formulas(names=("p", "q"), max_leaves=8))
def test_refutations_are_sound(f):
    if find_countermodel(f, 3) is not None:
        assert not prove_circ(f).provable


@given(formulas(names=("p",), max_leaves=7))
def test_provable_means_no_small_countermodel(f):
    if prove_circ(f).provable:
        assert find_countermodel(f, 4) is None
