import itertools
import random

import numpy as np
import pytest
from conftest import extension, formulas
from hypothesis import given
from hypothesis import strategies as st

from glcirc import kernel, oracle
from glcirc.formula import TOP, parse
from glcirc.oracle import (KripkeModel, _tables, compile_formula, find_countermodel, forces,
                           strict_orders)

LOEB = parse("<>([]p & ~p) | []p")


def chain(n, val=None):
    rel = {(i, j) for i in range(n) for j in range(i + 1, n)}
    return KripkeModel(n, frozenset(rel), val or {})


def test_model_validation():
    with pytest.raises(ValueError, match="irreflexive"):
        KripkeModel(2, frozenset({(0, 0)}))
    with pytest.raises(ValueError, match="transitive"):
        KripkeModel(3, frozenset({(0, 1), (1, 2)}))
    with pytest.raises(ValueError):
        KripkeModel(0, frozenset())
    with pytest.raises(ValueError):
        KripkeModel(2, frozenset({(0, 5)}))


def test_dead_end_forces_every_box():
    m = chain(2)
    for text in ("[]F", "[]p", "[](p & ~p)"):
        assert forces(m, 1, parse(text))


def test_diamond_top_means_a_successor():
    m = chain(3)
    assert [forces(m, w, parse("<>T")) for w in range(3)] == [True, True, False]


def test_loeb_on_a_two_chain():
    m = chain(2, {"p": {1}})
    assert forces(m, 0, LOEB)
    assert forces(m, 0, parse("[]p & ~p"))
    assert not forces(m, 0, parse("<>([]p & ~p)"))


def test_reflexivity_fails_on_one_world():
    cm = find_countermodel(parse("[]p -> p"), 1)
    assert cm.model.worlds == 1 and cm.world == 0
    assert cm.model.valuation == {"p": frozenset()}
    assert cm.to_json() == {"worlds": 1, "relation": [], "valuation": {"p": []}, "failWorld": 0}


def test_loeb_is_valid_up_to_four_worlds():
    assert find_countermodel(LOEB, 4) is None


def test_top_never_fails():
    assert find_countermodel(TOP, 5) is None


def test_countermodel_json_round_trip():
    cm = find_countermodel(parse("[]~p | []p"), 4)
    assert not forces(cm.model, cm.world, parse("[]~p | []p"))
    again = KripkeModel.from_json(cm.to_json())
    assert again == cm.model


def _naive_orders(n):
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = set()
    for bits in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if bits >> k & 1}
        if all((a, d) in rel for a, b in rel for c, d in rel if b == c) and \
                not any((b, a) in rel for a, b in rel):
            out.add(frozenset(rel))
    return out


@pytest.mark.parametrize("n, count", [(1, 1), (2, 3), (3, 19), (4, 219), (5, 4231)])
def test_number_of_strict_orders(n, count):
    assert len(strict_orders(n)) == count


@pytest.mark.parametrize("n", [1, 2, 3])
def test_strict_orders_match_brute_force(n):
    got = {frozenset((i, j) for i in range(n) for j in range(n) if s[i] >> j & 1)
           for s in strict_orders(n)}
    assert got == _naive_orders(n)


def _random_model(rnd, n, names):
    orders = strict_orders(n)
    succ = orders[rnd.randrange(len(orders))]
    rel = frozenset((i, j) for i in range(n) for j in range(n) if succ[i] >> j & 1)
    val = {a: frozenset(w for w in range(n) if rnd.random() < 0.5) for a in names}
    return KripkeModel(n, rel, val)


@given(formulas(), st.randoms(use_true_random=False), st.integers(1, 4))
def test_forces_agrees_with_set_semantics(f, rnd, n):
    m = _random_model(rnd, n, ("p", "q", "r"))
    succ = {w: frozenset(m.successors(w)) for w in range(n)}
    ext = extension(f, range(n), succ, m.valuation)
    assert {w for w in range(n) if forces(m, w, f)} == ext


@given(formulas(names=("p", "q"), max_leaves=8))
def test_countermodels_really_fail(f):
    cm = find_countermodel(f, 3)
    if cm is not None:
        assert not forces(cm.model, cm.world, f)


@given(formulas(names=("p",), max_leaves=8), st.integers(1, 3))
def test_bound_monotonicity(f, n):
    if find_countermodel(f, n) is not None:
        assert find_countermodel(f, n + 1) is not None


@given(formulas(names=("p", "q"), max_leaves=10))
def test_backends_agree(f):
    results = {name: find_countermodel(f, 3, backend=name) for name in kernel.IMPLEMENTATIONS}
    found = list(results.values())
    assert all(r == found[0] for r in found)


def test_scan_order_is_first_failure():
    # brute-force the same (frame, valuation, world) order in pure Python
    f = parse("[]p | <>~q & q")
    names = ("p", "q")
    prog = compile_formula(f, names)
    for n in (1, 2, 3):
        box, dia = _tables(n)
        expected = None
        for fi, succ in enumerate(strict_orders(n)):
            for v in range(1 << (n * len(names))):
                val = {a: frozenset(w for w in range(n) if v >> (k * n + w) & 1)
                       for k, a in enumerate(names)}
                ext = extension(f, range(n), {w: frozenset(j for j in range(n) if succ[w] >> j & 1)
                                              for w in range(n)}, val)
                if len(ext) < n:
                    expected = (fi, v, min(set(range(n)) - ext))
                    break
            if expected:
                break
        for impl in kernel.IMPLEMENTATIONS.values():
            got = impl(prog, n, len(names), box, dia)
            assert (None if got is None else tuple(int(x) for x in got)) == expected


def test_tables_are_read_only():
    box, _ = _tables(2)
    with pytest.raises(ValueError):
        box[0, 0] = 1


def test_large_valuation_spaces_are_refused(monkeypatch):
    monkeypatch.setattr(oracle, "MAX_VALUATION_BITS", 8)
    valid = parse(" | ".join(f"a{i}" for i in range(9)) + " | ~a0")
    with pytest.raises(ValueError, match="too many"):
        find_countermodel(valid, 1)


def test_exhaustive_agreement_on_tiny_formulas():
    rnd = random.Random(0)
    for text in ("[]p", "<>p | []~p", "[][]p -> []p", "[](p -> []p)"):
        f = parse(text)
        for _ in range(20):
            m = _random_model(rnd, 3, ("p",))
            succ = {w: frozenset(m.successors(w)) for w in range(3)}
            assert {w for w in range(3) if forces(m, w, f)} == extension(f, range(3), succ,
                                                                         m.valuation)


def test_compiled_kernel_available():
    assert "compiled" in kernel.IMPLEMENTATIONS
    assert kernel.BACKEND == "compiled"
    prog = compile_formula(LOEB, ("p",))
    assert prog.dtype == np.int32 and prog.shape[1] == 2
    assert list(itertools.chain(*prog.tolist()))
