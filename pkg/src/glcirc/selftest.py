"""Extensional checks of the structural properties of GL provability.

Each property is an implication between provability facts.  Instances are
assembled from a generated corpus and decided with one shared prover; an
instance is *live* when its hypotheses hold, and a *violation* when they hold
but the conclusion does not.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .corpus import CorpusSpec, generate_corpus
from .formula import BOTTOM, And, Diamond, Formula, Or, negate, render
from .prover import ABORTED, CircularProver, ProofSearchAborted
from .sequent import Sequent

PROPERTIES = ("cut", "loeb", "inversion_and", "inversion_or", "inversion_bottom",
              "weakening", "contraction")


@dataclass
class PropertyReport:
    name: str
    instances: int = 0
    live: int = 0
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"property": self.name, "instances": self.instances, "live": self.live,
                "violations": self.violations}


class _Oracle:
    def __init__(self, budget: int | None):
        self.prover = CircularProver(budget)

    def __call__(self, *parts: Formula | tuple) -> bool:
        items: list[Formula] = []
        for p in parts:
            items.extend(p if isinstance(p, tuple) else (p,))
        result = self.prover.prove(Sequent(items))
        if result.verdict == ABORTED:
            raise ProofSearchAborted(f"budget exhausted on [{Sequent(items)}]")
        return result.provable


def _context(rng: random.Random, pool: list[Formula], hi: int = 2) -> tuple[Formula, ...]:
    return tuple(rng.choice(pool) for _ in range(rng.randint(0, hi)))


def _seq(*parts) -> str:
    items: list[Formula] = []
    for p in parts:
        items.extend(p if isinstance(p, tuple) else (p,))
    return ", ".join(render(f) for f in items)


# Each check draws one instance and returns (live, violated, description).
Check = Callable[[random.Random, list, _Oracle], tuple[bool, bool, str]]


def _cut(rng, pool, prov):
    g, a = _context(rng, pool), rng.choice(pool)
    live = prov(g, a) and prov(g, negate(a))
    return live, live and not prov(g), _seq(g, a) + " / " + _seq(g, negate(a))


def _loeb(rng, pool, prov):
    g, a = _context(rng, pool), rng.choice(pool)
    dg = tuple(Diamond(f) for f in g)
    live = prov(g, dg, Diamond(negate(a)), a)
    return live, live and not prov(g, dg, a), _seq(g, dg, Diamond(negate(a)), a)


def _inv_and(rng, pool, prov):
    g, a, b = _context(rng, pool), rng.choice(pool), rng.choice(pool)
    live = prov(g, And(a, b))
    return live, live and not (prov(g, a) and prov(g, b)), _seq(g, And(a, b))


def _inv_or(rng, pool, prov):
    g, a, b = _context(rng, pool), rng.choice(pool), rng.choice(pool)
    live = prov(g, Or(a, b))
    return live, live and not prov(g, a, b), _seq(g, Or(a, b))


def _inv_bottom(rng, pool, prov):
    g = _context(rng, pool, 3)
    live = prov(g, BOTTOM)
    return live, live and not prov(g), _seq(g, BOTTOM)


def _weakening(rng, pool, prov):
    g, a = _context(rng, pool, 3), rng.choice(pool)
    live = prov(g)
    return live, live and not prov(g, a), _seq(g) + " + " + render(a)


def _contraction(rng, pool, prov):
    g, a = _context(rng, pool), rng.choice(pool)
    live = prov(g, a, a)
    return live, live and not prov(g, a), _seq(g, a, a)


CHECKS: dict[str, Check] = {
    "cut": _cut, "loeb": _loeb, "inversion_and": _inv_and, "inversion_or": _inv_or,
    "inversion_bottom": _inv_bottom, "weakening": _weakening, "contraction": _contraction,
}


def run_selftest(seed: int, count: int, spec: CorpusSpec | None = None,
                 properties: tuple[str, ...] = PROPERTIES,
                 budget: int | None = None) -> list[PropertyReport]:
    """Draw ``count`` instances of each property from a corpus.

    Half of the formula pool is the corpus' provable members, so that the
    hypotheses of the implications hold often enough to say something.
    """
    spec = spec or CorpusSpec(seed, max(count, 50))
    corpus = generate_corpus(spec)
    prov = _Oracle(budget)
    provable = [f for f in corpus if prov(f)]
    reports = []
    for name in properties:
        rng = random.Random(f"{seed}:{name}")
        report = PropertyReport(name)
        for _ in range(count):
            pool = provable if provable and rng.random() < 0.5 else corpus
            live, violated, text = CHECKS[name](rng, pool, prov)
            report.instances += 1
            report.live += live
            if violated:
                report.violations.append(text)
        reports.append(report)
    return reports
