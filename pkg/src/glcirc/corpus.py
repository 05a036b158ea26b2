"""Seeded random NNF formulas for tests and benchmarks.

Generation is grammar-directed: at each position a production is drawn by
weight among those the remaining depth and modal-depth budgets allow.  Only
``random.Random`` drives the choices, so equal ``CorpusSpec`` values yield equal corpora.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .formula import BOTTOM, TOP, And, Atom, Box, Diamond, Formula, NegAtom, Or

ATOM_NAMES = ("p", "q", "r", "s", "t", "u", "v", "w")

DEFAULT_WEIGHTS = {
    "atom": 2.0, "negatom": 2.0, "top": 0.5, "bottom": 0.5,
    "and": 2.0, "or": 2.0, "box": 2.0, "diamond": 2.0,
}

_LEAVES = ("atom", "negatom", "top", "bottom")
_MODAL = ("box", "diamond")


@dataclass(frozen=True)
class CorpusSpec:
    seed: int
    count: int
    max_atoms: int = 2
    max_depth: int = 3
    max_modal_depth: int = 2
    weights: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHTS), hash=False)

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be non-negative")
        if not 1 <= self.max_atoms <= len(ATOM_NAMES):
            raise ValueError(f"max_atoms must be between 1 and {len(ATOM_NAMES)}")
        if self.max_depth < 0 or self.max_modal_depth < 0:
            raise ValueError("depth bounds must be non-negative")
        unknown = set(self.weights) - set(DEFAULT_WEIGHTS)
        if unknown:
            raise ValueError(f"unknown productions in weights: {sorted(unknown)}")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be non-negative")


class _Generator:
    def __init__(self, spec: CorpusSpec):
        self.rng = random.Random(spec.seed)
        self.names = ATOM_NAMES[:spec.max_atoms]
        self.weights = {**DEFAULT_WEIGHTS, **spec.weights}

    def pick(self, allowed: tuple[str, ...]) -> str:
        ws = [self.weights[k] for k in allowed]
        if sum(ws) <= 0:
            ws = [1.0] * len(allowed)
        return self.rng.choices(allowed, ws)[0]

    def formula(self, depth: int, modal: int) -> Formula:
        allowed = _LEAVES
        if depth > 0:
            allowed += ("and", "or") + (_MODAL if modal > 0 else ())
        kind = self.pick(allowed)
        if kind == "atom":
            return Atom(self.rng.choice(self.names))
        if kind == "negatom":
            return NegAtom(self.rng.choice(self.names))
        if kind == "top":
            return TOP
        if kind == "bottom":
            return BOTTOM
        if kind in ("and", "or"):
            left = self.formula(depth - 1, modal)
            right = self.formula(depth - 1, modal)
            return And(left, right) if kind == "and" else Or(left, right)
        body = self.formula(depth - 1, modal - 1)
        return Box(body) if kind == "box" else Diamond(body)


def generate_corpus(spec: CorpusSpec) -> list[Formula]:
    gen = _Generator(spec)
    return [gen.formula(spec.max_depth, spec.max_modal_depth) for _ in range(spec.count)]


def sample_pairs(formulas: list[Formula], count: int, seed: int) -> list[tuple[Formula, Formula]]:
    """``count`` ordered pairs drawn with replacement, deterministic in ``seed``."""
    if not formulas:
        return []
    rng = random.Random(seed)
    return [(rng.choice(formulas), rng.choice(formulas)) for _ in range(count)]
