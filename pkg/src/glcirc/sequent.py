"""One-sided sequents (finite multisets of formulas) and split sequents."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .formula import BOTTOM, Diamond, Formula, disj, parse, render, vocab


@dataclass(frozen=True, init=False, eq=False)
class Sequent:
    """A finite multiset of formulas, stored in canonical order."""

    items: tuple[Formula, ...] = ()
    _hash: int = field(init=False, repr=False, compare=False)

    def __init__(self, items: Iterable[Formula] = ()):
        items = tuple(sorted(items))
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "_hash", hash(items))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sequent):
            return NotImplemented
        return self._hash == other._hash and self.items == other.items

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, f: object) -> bool:
        return f in self.items

    def __str__(self) -> str:
        return ", ".join(render(f) for f in self.items)

    def count(self, f: Formula) -> int:
        return self.items.count(f)

    def add(self, *fs: Formula) -> Sequent:
        return Sequent(self.items + fs)

    def union(self, other: Iterable[Formula]) -> Sequent:
        return Sequent(self.items + tuple(other))

    def remove(self, f: Formula) -> Sequent:
        """Drop one occurrence of ``f``; ``KeyError`` if absent."""
        items = list(self.items)
        try:
            items.remove(f)
        except ValueError:
            raise KeyError(f) from None
        return Sequent(items)

    def difference(self, other: Iterable[Formula]) -> Sequent:
        """Multiset difference; ``KeyError`` if ``other`` is not a sub-multiset."""
        rest = Counter(self.items)
        for f in other:
            if rest[f] == 0:
                raise KeyError(f)
            rest[f] -= 1
        return Sequent(rest.elements())

    def includes(self, other: Iterable[Formula]) -> bool:
        mine = Counter(self.items)
        mine.subtract(Counter(other))
        return all(n >= 0 for n in mine.values())

    def distinct(self) -> tuple[Formula, ...]:
        return tuple(dict.fromkeys(self.items))

    def to_json(self) -> list[str]:
        return [render(f) for f in self.items]

    @classmethod
    def from_json(cls, data: Iterable[str]) -> Sequent:
        return cls(parse(s) for s in data)

    @classmethod
    def from_text(cls, text: str) -> Sequent:
        """Comma-separated formulas; an empty string is the empty sequent."""
        parts = [p for p in text.split(",")]
        if len(parts) == 1 and not parts[0].strip():
            return cls()
        return cls(parse(p) for p in parts)


def sharp(g: Sequent) -> Formula:
    """Disjunction of the members in canonical order; ``F`` for the empty sequent."""
    if not g.items:
        return BOTTOM
    return disj(g.items)


def diamonds(g: Iterable[Formula]) -> Sequent:
    return Sequent(Diamond(f) for f in g)


def underlying_set(g: Sequent) -> Sequent:
    return Sequent(g.distinct())


def sequent_vocab(g: Iterable[Formula]) -> frozenset:
    """Union of ``w(A)`` over the members."""
    out: frozenset = frozenset()
    for f in g:
        out |= vocab(f)[2]
    return out


@dataclass(frozen=True)
class SplitSequent:
    """An ordered partition ``left | right`` of a sequent."""

    left: Sequent = Sequent()
    right: Sequent = Sequent()

    def flatten(self) -> Sequent:
        return self.left.union(self.right)

    def __str__(self) -> str:
        return f"{self.left} | {self.right}"

    def to_json(self) -> dict:
        return {"left": self.left.to_json(), "right": self.right.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> SplitSequent:
        return cls(Sequent.from_json(data["left"]), Sequent.from_json(data["right"]))
