"""Kripke semantics on finite strict partial orders: model checking and
exhaustive countermodel search.

Finite transitive irreflexive frames are exactly the finite GL frames, so a
formula that fails somewhere in such a model is not a GL theorem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from . import kernel
from .formula import And, Atom, Bottom, Box, Diamond, Formula, NegAtom, Or, Top, atoms

MAX_VALUATION_BITS = 40


@dataclass(frozen=True, eq=True)
class KripkeModel:
    worlds: int
    relation: frozenset
    valuation: Mapping[str, frozenset] = field(default_factory=dict, hash=False)
    _succ: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.worlds < 1:
            raise ValueError("a model needs at least one world")
        rel = frozenset((int(a), int(b)) for a, b in self.relation)
        for a, b in rel:
            if not (0 <= a < self.worlds and 0 <= b < self.worlds):
                raise ValueError(f"relation pair {(a, b)} outside the worlds")
            if a == b:
                raise ValueError(f"relation is not irreflexive at {a}")
        for a, b in rel:
            for c, d in rel:
                if b == c and (a, d) not in rel:
                    raise ValueError(f"relation is not transitive: {a}->{b}->{d}")
        object.__setattr__(self, "relation", rel)
        object.__setattr__(self, "valuation",
                           {k: frozenset(v) for k, v in sorted(self.valuation.items())})
        succ = tuple(tuple(sorted(b for a, b in rel if a == w)) for w in range(self.worlds))
        object.__setattr__(self, "_succ", succ)

    def successors(self, w: int) -> tuple[int, ...]:
        return self._succ[w]

    def to_json(self) -> dict:
        return {
            "worlds": self.worlds,
            "relation": [list(p) for p in sorted(self.relation)],
            "valuation": {k: sorted(v) for k, v in self.valuation.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> KripkeModel:
        return cls(int(data["worlds"]), frozenset(tuple(p) for p in data["relation"]),
                   {k: frozenset(v) for k, v in data.get("valuation", {}).items()})


@dataclass(frozen=True)
class Countermodel:
    model: KripkeModel
    world: int

    def to_json(self) -> dict:
        out = self.model.to_json()
        out["failWorld"] = self.world
        return out


def forces(m: KripkeModel, w: int, f: Formula) -> bool:
    if isinstance(f, Atom):
        return w in m.valuation.get(f.name, ())
    if isinstance(f, NegAtom):
        return w not in m.valuation.get(f.name, ())
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, And):
        return forces(m, w, f.left) and forces(m, w, f.right)
    if isinstance(f, Or):
        return forces(m, w, f.left) or forces(m, w, f.right)
    if isinstance(f, Box):
        return all(forces(m, v, f.body) for v in m.successors(w))
    if isinstance(f, Diamond):
        return any(forces(m, v, f.body) for v in m.successors(w))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# frames

@lru_cache(maxsize=None)
def strict_orders(n: int) -> tuple[tuple[int, ...], ...]:
    """All strict partial orders on worlds ``0..n-1`` as successor bitmasks, sorted by the
    relation's bit encoding (pair ``(i, j)`` is bit ``i*n + j``)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return ((0,),)
    out = []
    x = n - 1
    for succ in strict_orders(n - 1):
        preds = [sum(1 << a for a in range(n - 1) if succ[a] >> b & 1) for b in range(n - 1)]
        for down in range(1 << (n - 1)):
            if any(down >> d & 1 and preds[d] & ~down for d in range(n - 1)):
                continue
            for up in range(1 << (n - 1)):
                if up & down:
                    continue
                if any(up >> u & 1 and succ[u] & ~up for u in range(n - 1)):
                    continue
                if any(down >> d & 1 and up & ~succ[d] for d in range(n - 1)):
                    continue
                new = tuple((s | (1 << x)) if down >> i & 1 else s for i, s in enumerate(succ))
                out.append(new + (up,))
    out.sort(key=lambda s: _encode(s, n))
    return tuple(out)


def _encode(succ: tuple[int, ...], n: int) -> int:
    return sum(1 << (i * n + j) for i in range(n) for j in range(n) if succ[i] >> j & 1)


@lru_cache(maxsize=None)
def _tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per frame, the world-set transformers of ``[]`` and ``<>`` indexed by argument set."""
    succ = np.array(strict_orders(n), dtype=np.uint32)
    sets = np.arange(1 << n, dtype=np.uint32)
    box = np.zeros((len(succ), 1 << n), dtype=np.uint32)
    dia = np.zeros_like(box)
    for w in range(n):
        s = succ[:, w][:, None]
        box |= ((s & ~sets[None, :]) == 0).astype(np.uint32) << np.uint32(w)
        dia |= ((s & sets[None, :]) != 0).astype(np.uint32) << np.uint32(w)
    box.setflags(write=False)
    dia.setflags(write=False)
    return np.ascontiguousarray(box), np.ascontiguousarray(dia)


def compile_formula(f: Formula, names: tuple[str, ...]) -> np.ndarray:
    """Postfix program for :func:`kernel.first_failure`."""
    index = {a: i for i, a in enumerate(names)}
    prog: list[tuple[int, int]] = []

    def emit(g: Formula) -> None:
        if isinstance(g, Atom):
            prog.append((0, index[g.name]))
        elif isinstance(g, NegAtom):
            prog.append((1, index[g.name]))
        elif isinstance(g, Top):
            prog.append((2, 0))
        elif isinstance(g, Bottom):
            prog.append((3, 0))
        elif isinstance(g, (And, Or)):
            emit(g.left)
            emit(g.right)
            prog.append((4 if isinstance(g, And) else 5, 0))
        else:
            emit(g.body)
            prog.append((6 if isinstance(g, Box) else 7, 0))

    emit(f)
    return np.array(prog, dtype=np.int32).reshape(-1, 2)


def model_from_index(n: int, frame: int, valuation: int, names: tuple[str, ...]) -> KripkeModel:
    succ = strict_orders(n)[frame]
    relation = frozenset((i, j) for i in range(n) for j in range(n) if succ[i] >> j & 1)
    val = {a: frozenset(w for w in range(n) if valuation >> (k * n + w) & 1)
           for k, a in enumerate(names)}
    return KripkeModel(n, relation, val)


def find_countermodel(f: Formula, max_worlds: int, backend: str | None = None) -> Countermodel | None:
    """First falsifying (model, world) over 1..max_worlds worlds, or ``None``.

    Order: world count, then frame encoding, then valuation index (atom ``k`` at
    world ``w`` is bit ``k*n + w``, atoms sorted by name), then world.
    """
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    scan = kernel.first_failure if backend is None else kernel.IMPLEMENTATIONS[backend]
    names = tuple(sorted(atoms(f)))
    prog = compile_formula(f, names)
    for n in range(1, max_worlds + 1):
        if n * len(names) > MAX_VALUATION_BITS:
            raise ValueError(f"{len(names)} atoms over {n} worlds is too many valuations to enumerate")
        box, dia = _tables(n)
        hit = scan(prog, n, len(names), box, dia)
        if hit is not None:
            frame, valuation, world = hit
            return Countermodel(model_from_index(n, frame, int(valuation), names), world)
    return None


def valid_to_bound(f: Formula, max_worlds: int) -> bool:
    return find_countermodel(f, max_worlds) is None
