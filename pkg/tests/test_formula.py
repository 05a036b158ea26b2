import pytest
from conftest import formulas
from hypothesis import given

from glcirc.corpus import CorpusSpec, generate_corpus
from glcirc.formula import (BOTTOM, TOP, And, Atom, Box, Diamond, FormulaSyntaxError,
                            MarkedLiteral, NegAtom, Or, atoms, closure, depth, iff, mark_closure,
                            modal_depth, negate, parse, render, simplify, substitute, vocab,
                            vocab_star)

p, q = Atom("p"), Atom("q")
np_ = NegAtom("p")


def lits(*texts):
    return frozenset(MarkedLiteral.from_str(t) for t in texts)


class TestParse:
    def test_implication_lowers_to_disjunction(self):
        assert parse("p -> q") == Or(np_, q)

    def test_negated_diamond_is_box(self):
        assert parse("~(<>p)") == Box(np_)

    def test_constants(self):
        assert parse("T") is TOP
        assert parse("F") is BOTTOM

    def test_negation_is_pushed_through_everything(self):
        assert parse("~([]p & (q | T))") == Or(Diamond(np_), And(NegAtom("q"), BOTTOM))
        assert parse("~~p") == p

    def test_iff_expands(self):
        assert parse("p <-> q") == iff(p, q)
        assert parse("p <-> q") == And(Or(np_, q), Or(NegAtom("q"), p))

    def test_precedence(self):
        assert parse("p | q & r") == Or(p, And(q, Atom("r")))
        assert parse("[]p & q") == And(Box(p), q)
        assert parse("p -> q -> r") == parse("p -> (q -> r)")
        assert parse("p | q -> r") == parse("(p | q) -> r")
        assert parse("p -> q <-> r") == parse("(p -> q) <-> r")

    def test_identifiers(self):
        assert parse("foo_1 & bar2X") == And(Atom("foo_1"), Atom("bar2X"))

    @pytest.mark.parametrize("text, pos", [("p &", 3), ("(p", 2), ("p q", 2), ("", 0),
                                           ("P", 0), ("p $ q", 2), ("[]", 2)])
    def test_syntax_errors_carry_positions(self, text, pos):
        with pytest.raises(FormulaSyntaxError) as err:
            parse(text)
        assert err.value.position == pos


class TestRender:
    def test_loeb_axiom(self):
        f = Or(Diamond(And(Box(p), np_)), Box(p))
        assert render(f) == "<>([]p & ~p) | []p"

    def test_atom(self):
        assert render(p) == "p"

    def test_left_association_is_bare(self):
        assert render(And(And(p, q), p)) == "p & q & p"
        assert render(And(p, And(q, p))) == "p & (q & p)"

    @given(formulas())
    def test_round_trip(self, f):
        assert parse(render(f)) == f

    def test_round_trip_on_corpus(self):
        for f in generate_corpus(CorpusSpec(3, 500, max_atoms=3, max_depth=5)):
            assert parse(render(f)) == f


class TestNegate:
    def test_clauses(self):
        assert negate(Box(p)) == Diamond(np_)
        assert negate(And(p, q)) == Or(np_, NegAtom("q"))
        assert negate(TOP) is BOTTOM
        assert negate(np_) == p

    @given(formulas())
    def test_involution(self, f):
        assert negate(negate(f)) == f

    @given(formulas())
    def test_vocabulary_duality(self, f):
        u, v, _ = vocab(f)
        nu, nv, _ = vocab(negate(f))
        assert nu == {lit.complement() for lit in u}
        assert nv == {lit.complement() for lit in v}


class TestStructure:
    def test_equality_and_hash_are_structural(self):
        a, b = parse("[](p & q) | <>~r"), parse("[](p & q) | <>~r")
        assert a == b and hash(a) == hash(b) and a is not b
        assert parse("p & q") != parse("q & p")

    def test_order_is_by_size_first(self):
        assert p < Box(p) < And(p, Box(p))

    def test_depths(self):
        f = parse("[](p & <>q) | r")
        assert depth(f) == 4
        assert modal_depth(f) == 2
        assert depth(p) == 0

    def test_atoms(self):
        assert atoms(parse("[]~p | q & T")) == {"p", "q"}

    def test_substitute_uses_negation_for_complements(self):
        f = parse("[]p & <>~p")
        assert substitute(f, "p", parse("q | []r")) == parse("[](q | []r) & <>~(q | []r)")

    def test_simplify(self):
        assert simplify(parse("[](p & T) | <>(F & q)")) == Box(p)
        assert simplify(parse("p | q | p")) == parse("p | q")
        assert simplify(parse("q & (p | ~p)")) == q
        assert simplify(parse("[]T & <>F")) is BOTTOM

    @given(formulas())
    def test_simplify_never_grows_vocabulary(self, f):
        assert vocab(simplify(f))[2] <= vocab(f)[2]


class TestVocabulary:
    def test_outside_and_inside(self):
        assert vocab(parse("p & []q")) == (lits("p"), lits("q°"), lits("p", "q°"))

    def test_polarity_is_kept(self):
        assert vocab(parse("<>~p | p")) == (lits("p"), lits("~p°"), lits("p", "~p°"))

    def test_constants_have_none(self):
        assert vocab(TOP) == (frozenset(),) * 3

    def test_both_sides(self):
        u, v, w = vocab(parse("p & []p"))
        assert u == lits("p") and v == lits("p°")

    def test_mark_closure(self):
        assert mark_closure(lits("p", "q°")) == lits("p°", "q°")
        assert mark_closure(frozenset()) == frozenset()
        s = lits("p", "~q", "r°")
        assert mark_closure(mark_closure(s)) == mark_closure(s)

    def test_vocab_star(self):
        assert vocab_star(parse("[]p")) == lits("p°")
        assert vocab_star(p) == lits("p", "p°")
        assert vocab_star(parse("p & []q")) == lits("p", "p°", "q°")

    def test_literal_text(self):
        for text in ("p", "~p", "p°", "~q_1°"):
            assert str(MarkedLiteral.from_str(text)) == text
        with pytest.raises(ValueError):
            MarkedLiteral.from_str("~°")


class TestClosure:
    def test_examples(self):
        assert closure([Box(p)]) == {Box(p), p}
        assert closure([And(p, q)]) == {And(p, q), p, q}

    @given(formulas())
    def test_bounded_by_size(self, f):
        assert len(closure([f])) <= f.size

    @given(formulas(), formulas())
    def test_monotone_and_idempotent(self, f, g):
        c = closure([f])
        assert c <= closure([f, g])
        assert closure(c) == c
