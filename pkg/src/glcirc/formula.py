"""Modal formulas in negation normal form.

Formulas are immutable trees built from literals, the constants ``T`` / ``F``,
binary ``&`` / ``|`` and the modalities ``[]`` / ``<>``.  Negation lives only on
atoms; ``~`` applied to anything larger is eliminated while parsing.

Every node carries a canonical sort key ``(size, tag, ...)`` so that multisets of
formulas can be stored in a stable order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

__all__ = [
    "Formula", "Atom", "NegAtom", "Top", "Bottom", "And", "Or", "Box", "Diamond",
    "TOP", "BOTTOM", "FormulaSyntaxError", "MarkedLiteral", "VocabularySet",
    "parse", "render", "negate", "implies", "iff", "boxdot", "conj", "disj",
    "vocab", "mark_closure", "vocab_star", "closure", "atoms", "subformulas",
    "substitute", "simplify", "modal_depth", "depth", "occurs_unmodalized",
]

_TAG_BOTTOM, _TAG_TOP, _TAG_ATOM, _TAG_NEGATOM = 0, 1, 2, 3
_TAG_AND, _TAG_OR, _TAG_BOX, _TAG_DIAMOND = 4, 5, 6, 7

IDENT = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


class Formula:
    """Base class of the NNF syntax tree.

    Equality is structural; ordering follows the canonical key (smaller formulas
    first, ties broken structurally).
    """

    __slots__ = ()

    size: int
    _key: tuple
    _hash: int

    def _init_key(self, key: tuple, size: int, *parts) -> None:
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash((key[1],) + parts))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __lt__(self, other: Formula) -> bool:
        return self._key < other._key

    def __le__(self, other: Formula) -> bool:
        return self._key <= other._key

    def __gt__(self, other: Formula) -> bool:
        return self._key > other._key

    def __ge__(self, other: Formula) -> bool:
        return self._key >= other._key

    def __str__(self) -> str:
        return render(self)

    @property
    def children(self) -> tuple[Formula, ...]:
        return ()

    @property
    def is_literal(self) -> bool:
        return False

    @property
    def is_modal(self) -> bool:
        return False


@dataclass(frozen=True, eq=False, slots=True)
class Atom(Formula):
    name: str
    size: int = field(init=False, repr=False)
    _key: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)
    _neg: Formula | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        self._init_key((1, _TAG_ATOM, self.name), 1, self.name)

    @property
    def is_literal(self) -> bool:
        return True


@dataclass(frozen=True, eq=False, slots=True)
class NegAtom(Formula):
    name: str
    size: int = field(init=False, repr=False)
    _key: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)
    _neg: Formula | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        self._init_key((1, _TAG_NEGATOM, self.name), 1, self.name)

    @property
    def is_literal(self) -> bool:
        return True


@dataclass(frozen=True, eq=False, slots=True)
class Top(Formula):
    size: int = field(init=False, repr=False)
    _key: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)
    _neg: Formula | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        self._init_key((1, _TAG_TOP), 1)


@dataclass(frozen=True, eq=False, slots=True)
class Bottom(Formula):
    size: int = field(init=False, repr=False)
    _key: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)
    _neg: Formula | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        self._init_key((1, _TAG_BOTTOM), 1)


@dataclass(frozen=True, eq=False, slots=True)
class And(Formula):
    left: Formula
    right: Formula
    size: int = field(init=False, repr=False)
    _key: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)
    _neg: Formula | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        size = 1 + self.left.size + self.right.size
        self._init_key((size, _TAG_AND, self.left._key, self.right._key), size,
                       self.left._hash, self.right._hash)

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, eq=False, slots=True)
class Or(Formula):
    left: Formula
    right: Formula
    size: int = field(init=False, repr=False)
    _key: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)
    _neg: Formula | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        size = 1 + self.left.size + self.right.size
        self._init_key((size, _TAG_OR, self.left._key, self.right._key), size,
                       self.left._hash, self.right._hash)

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, eq=False, slots=True)
class Box(Formula):
    body: Formula
    size: int = field(init=False, repr=False)
    _key: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)
    _neg: Formula | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        size = 1 + self.body.size
        self._init_key((size, _TAG_BOX, self.body._key), size, self.body._hash)

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.body,)

    @property
    def is_modal(self) -> bool:
        return True


@dataclass(frozen=True, eq=False, slots=True)
class Diamond(Formula):
    body: Formula
    size: int = field(init=False, repr=False)
    _key: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)
    _neg: Formula | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        size = 1 + self.body.size
        self._init_key((size, _TAG_DIAMOND, self.body._key), size, self.body._hash)

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.body,)

    @property
    def is_modal(self) -> bool:
        return True


TOP = Top()
BOTTOM = Bottom()


# ---------------------------------------------------------------------------
# negation and derived connectives

def negate(f: Formula) -> Formula:
    """Dual of ``f``: De Morgan, double negation and box/diamond duality."""
    cached = f._neg
    if cached is not None:
        return cached
    if isinstance(f, Atom):
        g = NegAtom(f.name)
    elif isinstance(f, NegAtom):
        g = Atom(f.name)
    elif isinstance(f, Top):
        g = BOTTOM
    elif isinstance(f, Bottom):
        g = TOP
    elif isinstance(f, And):
        g = Or(negate(f.left), negate(f.right))
    elif isinstance(f, Or):
        g = And(negate(f.left), negate(f.right))
    elif isinstance(f, Box):
        g = Diamond(negate(f.body))
    elif isinstance(f, Diamond):
        g = Box(negate(f.body))
    else:
        raise TypeError(f"not a formula: {f!r}")
    object.__setattr__(f, "_neg", g)
    object.__setattr__(g, "_neg", f)
    return g


def implies(a: Formula, b: Formula) -> Formula:
    return Or(negate(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def boxdot(a: Formula) -> Formula:
    """``a & []a``."""
    return And(a, Box(a))


def conj(fs: Iterable[Formula]) -> Formula:
    """Left-associated conjunction; ``T`` when empty."""
    out = None
    for f in fs:
        out = f if out is None else And(out, f)
    return TOP if out is None else out


def disj(fs: Iterable[Formula]) -> Formula:
    """Left-associated disjunction; ``F`` when empty."""
    out = None
    for f in fs:
        out = f if out is None else Or(out, f)
    return BOTTOM if out is None else out


# ---------------------------------------------------------------------------
# concrete syntax

class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


_TOKEN = re.compile(r"\s*(?:(<->)|(->)|(\[\])|(<>)|([~&|()])|([a-zA-Z][a-zA-Z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", start, text)
        tok = m.group(m.lastindex)
        start = m.start(m.lastindex)
        if m.lastindex == 6 and tok not in ("T", "F") and not IDENT.match(tok):
            raise FormulaSyntaxError(f"bad atom name {tok!r}", start, text)
        tokens.append((tok, start))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self) -> tuple[str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str):
        tok, pos = self.tokens[self.i]
        found = repr(tok) if tok else "end of input"
        raise FormulaSyntaxError(f"{message}, found {found}", pos, self.text)

    def parse(self) -> Formula:
        f = self.equivalence()
        if self.peek() != "":
            self.fail("expected end of input")
        return f

    def equivalence(self) -> Formula:
        f = self.implication()
        while self.peek() == "<->":
            self.take()
            f = iff(f, self.implication())
        return f

    def implication(self) -> Formula:
        f = self.disjunction()
        if self.peek() == "->":
            self.take()
            return implies(f, self.implication())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            return negate(self.unary())
        if tok == "[]":
            self.take()
            return Box(self.unary())
        if tok == "<>":
            self.take()
            return Diamond(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok, _ = self.tokens[self.i]
        if tok == "(":
            self.take()
            f = self.equivalence()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return f
        if tok == "T":
            self.take()
            return TOP
        if tok == "F":
            self.take()
            return BOTTOM
        if tok and IDENT.match(tok):
            self.take()
            return Atom(tok)
        self.fail("expected a formula")


def parse(text: str) -> Formula:
    """Parse ASCII syntax into an NNF formula.

    >>> render(parse("~(<>p)"))
    '[]~p'
    >>> render(parse("p -> q"))
    '~p | q'
    """
    return _Parser(text).parse()


_PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3


def _render(f: Formula, need: int, out: list[str]) -> None:
    if isinstance(f, Atom):
        out.append(f.name)
    elif isinstance(f, NegAtom):
        out.append("~" + f.name)
    elif isinstance(f, Top):
        out.append("T")
    elif isinstance(f, Bottom):
        out.append("F")
    elif isinstance(f, (Box, Diamond)):
        out.append("[]" if isinstance(f, Box) else "<>")
        _render(f.body, _PREC_UNARY, out)
    else:
        prec = _PREC_AND if isinstance(f, And) else _PREC_OR
        op = " & " if prec == _PREC_AND else " | "
        paren = prec < need
        if paren:
            out.append("(")
        _render(f.left, prec, out)
        out.append(op)
        _render(f.right, prec + 1, out)
        if paren:
            out.append(")")


def render(f: Formula) -> str:
    """Canonical text with minimal parentheses; ``parse(render(f)) == f``."""
    out: list[str] = []
    _render(f, 0, out)
    return "".join(out)


# ---------------------------------------------------------------------------
# vocabulary

@dataclass(frozen=True, order=True)
class MarkedLiteral:
    """A literal, optionally complemented, optionally marked as occurring under a modality."""

    name: str
    complemented: bool = False
    marked: bool = False

    def complement(self) -> MarkedLiteral:
        return MarkedLiteral(self.name, not self.complemented, self.marked)

    def as_marked(self) -> MarkedLiteral:
        return MarkedLiteral(self.name, self.complemented, True)

    def __str__(self) -> str:
        return ("~" if self.complemented else "") + self.name + ("°" if self.marked else "")

    @classmethod
    def from_str(cls, text: str) -> MarkedLiteral:
        marked = text.endswith("°")
        body = text[:-1] if marked else text
        complemented = body.startswith("~")
        name = body[1:] if complemented else body
        if not IDENT.match(name):
            raise ValueError(f"bad literal {text!r}")
        return cls(name, complemented, marked)


VocabularySet = frozenset  # of MarkedLiteral


def _collect_vocab(f: Formula, modal: bool, u: set, v: set) -> None:
    stack = [(f, modal)]
    while stack:
        g, m = stack.pop()
        if isinstance(g, (Atom, NegAtom)):
            lit = MarkedLiteral(g.name, isinstance(g, NegAtom), m)
            (v if m else u).add(lit)
        elif isinstance(g, (Box, Diamond)):
            stack.append((g.body, True))
        else:
            stack.extend((c, m) for c in g.children)


def vocab(f: Formula) -> tuple[frozenset, frozenset, frozenset]:
    """Return ``(u, v, w)``: literals outside any modality, marked literals under one, and their union."""
    u: set = set()
    v: set = set()
    _collect_vocab(f, False, u, v)
    return frozenset(u), frozenset(v), frozenset(u | v)


def mark_closure(s: Iterable[MarkedLiteral]) -> frozenset:
    return frozenset(lit.as_marked() for lit in s)


def vocab_star(f: Formula) -> frozenset:
    w = vocab(f)[2]
    return w | mark_closure(w)


# ---------------------------------------------------------------------------
# structural helpers

def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, with repetitions."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children))


def closure(fs: Iterable[Formula]) -> frozenset:
    """Smallest subformula-closed superset of ``fs``."""
    out: set = set()
    stack = list(fs)
    while stack:
        g = stack.pop()
        if g not in out:
            out.add(g)
            stack.extend(g.children)
    return frozenset(out)


def atoms(f: Formula | Iterable[Formula]) -> frozenset:
    fs = [f] if isinstance(f, Formula) else list(f)
    return frozenset(g.name for h in fs for g in subformulas(h) if isinstance(g, (Atom, NegAtom)))


def depth(f: Formula) -> int:
    """Syntactic depth; literals and constants have depth 0."""
    if not f.children:
        return 0
    return 1 + max(depth(c) for c in f.children)


def modal_depth(f: Formula) -> int:
    if isinstance(f, (Box, Diamond)):
        return 1 + modal_depth(f.body)
    return max((modal_depth(c) for c in f.children), default=0)


def occurs_unmodalized(name: str, f: Formula, complemented: bool | None = None) -> bool:
    """True if a literal over ``name`` (optionally of the given polarity) occurs outside every modality."""
    u = vocab(f)[0]
    return any(lit.name == name and (complemented is None or lit.complemented == complemented)
               for lit in u)


def substitute(f: Formula, name: str, g: Formula) -> Formula:
    """Replace atom ``name`` by ``g`` and its complement by ``negate(g)``."""
    memo: dict = {}

    def go(h: Formula) -> Formula:
        r = memo.get(h)
        if r is not None:
            return r
        if isinstance(h, Atom):
            r = g if h.name == name else h
        elif isinstance(h, NegAtom):
            r = negate(g) if h.name == name else h
        elif isinstance(h, And):
            r = And(go(h.left), go(h.right))
        elif isinstance(h, Or):
            r = Or(go(h.left), go(h.right))
        elif isinstance(h, Box):
            r = Box(go(h.body))
        elif isinstance(h, Diamond):
            r = Diamond(go(h.body))
        else:
            r = h
        memo[h] = r
        return r

    return go(f)


def simplify(f: Formula) -> Formula:
    """Constant folding plus tidying of ``&``/``|`` chains.

    ``T``/``F`` are absorbed through ``&``, ``|``, ``[]T`` and ``<>F``; chains are
    flattened, repeated operands dropped, and a chain holding both ``A`` and
    ``~A`` collapses to its absorbing constant.  Every step only deletes
    subformulas, so the vocabulary never grows.
    """
    memo: dict = {}

    def go(g: Formula) -> Formula:
        r = memo.get(g)
        if r is None:
            r = memo[g] = _simplify_step(g, go)
        return r

    return go(f)


def _simplify_step(f: Formula, go) -> Formula:
    if isinstance(f, (And, Or)):
        kind = type(f)
        absorbing, neutral = (BOTTOM, TOP) if kind is And else (TOP, BOTTOM)
        operands: list[Formula] = []
        seen: set = set()
        stack = [f]
        while stack:
            g = stack.pop()
            if type(g) is kind:
                stack.extend((g.right, g.left))
                continue
            g = go(g)
            parts = [g]
            if type(g) is kind:  # simplification can expose a nested chain
                parts = []
                inner = [g]
                while inner:
                    h = inner.pop()
                    if type(h) is kind:
                        inner.extend((h.right, h.left))
                    else:
                        parts.append(h)
            for h in parts:
                if h == absorbing or negate(h) in seen:
                    return absorbing
                if h != neutral and h not in seen:
                    seen.add(h)
                    operands.append(h)
        if not operands:
            return neutral
        return conj(operands) if kind is And else disj(operands)
    if isinstance(f, Box):
        a = go(f.body)
        return TOP if a == TOP else Box(a)
    if isinstance(f, Diamond):
        a = go(f.body)
        return BOTTOM if a == BOTTOM else Diamond(a)
    return f
