import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from glcirc.formula import BOTTOM, TOP, And, Atom, Box, Diamond, NegAtom, Or

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=120,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMES = ("p", "q", "r")


def formulas(names=NAMES, max_leaves=12, modal=True):
    leaves = st.one_of(st.sampled_from(names).map(Atom), st.sampled_from(names).map(NegAtom),
                       st.sampled_from((TOP, BOTTOM)))

    def extend(children):
        binary = st.tuples(children, children)
        options = [binary.map(lambda t: And(*t)), binary.map(lambda t: Or(*t))]
        if modal:
            options += [children.map(Box), children.map(Diamond)]
        return st.one_of(*options)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def extension(f, worlds, succ, val):
    """Set of worlds where ``f`` holds, computed bottom-up over sets.  Written
    independently of the library's evaluator, for cross-checking."""
    if isinstance(f, Atom):
        return frozenset(w for w in worlds if w in val.get(f.name, ()))
    if isinstance(f, NegAtom):
        return frozenset(w for w in worlds if w not in val.get(f.name, ()))
    if f == TOP:
        return frozenset(worlds)
    if f == BOTTOM:
        return frozenset()
    if isinstance(f, And):
        return extension(f.left, worlds, succ, val) & extension(f.right, worlds, succ, val)
    if isinstance(f, Or):
        return extension(f.left, worlds, succ, val) | extension(f.right, worlds, succ, val)
    body = extension(f.body, worlds, succ, val)
    if isinstance(f, Box):
        return frozenset(w for w in worlds if succ[w] <= body)
    return frozenset(w for w in worlds if succ[w] & body)



def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module and module.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(module.LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
