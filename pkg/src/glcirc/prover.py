"""Backward proof search for GL.

``prove_circ`` searches for circular K4-rule proofs: a branch closes on an initial
sequent or on a repeat of an ancestor's sequent (every repeat is separated by a
box step because the logical rules strictly shrink sequents).  ``prove_glseq``
searches the GL box rule, whose premise adds ``<>~A``; there the set of diamond
formulas grows strictly along a branch, which bounds the search.

Both apply the invertible ``&``/``|`` rules eagerly and branch only over the
principal box formula at saturated sequents.  At a box step the context takes
every distinct diamond formula once; duplicates go to the weakened part, which
keeps the number of distinct box premises finite.
"""

from __future__ import annotations

import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator

from .formula import TOP, And, Box, Diamond, Formula, Or, negate
from .proofs import (GLCIRC, GLSEQ, LEAF, Principal, Proof, ProofNode, check_circular,
                     check_glseq)
from .sequent import Sequent

DEFAULT_BUDGET = 10**6

PROVABLE = "provable"
NOT_PROVABLE = "not-provable"
ABORTED = "aborted"


class ProofSearchAborted(RuntimeError):
    """The node-expansion budget ran out before a verdict was reached."""


class SoundnessError(AssertionError):
    """An emitted certificate failed its checker.  Always a bug."""


def default_budget() -> int:
    env = os.environ.get("GLC_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"GLC_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    backlinks: int = 0
    memo_hits: int = 0

    def to_json(self) -> dict:
        return {"nodes_expanded": self.nodes_expanded, "backlinks": self.backlinks,
                "memo_hits": self.memo_hits}


@dataclass
class ProveResult:
    verdict: str
    certificate: Proof | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def provable(self) -> bool:
        return self.verdict == PROVABLE


class _Node:
    """Search-tree node; converted to a :class:`Proof` once the search succeeds."""

    __slots__ = ("sequent", "rule", "principal", "children", "target")

    def __init__(self, sequent: Sequent, rule: str = LEAF, principal: Principal = Principal()):
        self.sequent = sequent
        self.rule = rule
        self.principal = principal
        self.children: list[_Node] = []
        self.target: _Node | None = None


_NO_DEPS: frozenset = frozenset()


def initial(seq: Sequent) -> tuple[str, Formula] | None:
    """Return the axiom instance closing ``seq``, if any."""
    if TOP in seq:
        return "ax_top", TOP
    present = set(seq.items)
    for f in seq.distinct():
        if negate(f) in present:
            return "ax_clash", f
    return None


def _first_logical(seq: Sequent) -> Formula | None:
    """The next invertible rule to apply: any ``|`` first, then a ``&`` with a premise that is
    immediately initial, then the first ``&``.  All orders are complete; this one branches least."""
    present = set(seq.items)
    first_and = None
    for f in seq.items:
        if isinstance(f, Or):
            return f
        if isinstance(f, And):
            if first_and is None:
                first_and = f
            for part in (f.left, f.right):
                if part == TOP or negate(part) in present:
                    return f
    return first_and


def box_steps(seq: Sequent, diagonal: bool) -> Iterator[tuple[Principal, Sequent]]:
    """Backward box-rule instances at a saturated sequent, principal boxes in canonical order."""
    context = tuple(f for f in seq.distinct() if isinstance(f, Diamond))
    bodies = tuple(d.body for d in context)
    for box in seq.distinct():
        if not isinstance(box, Box):
            continue
        weakened = seq.difference(context + (box,))
        extra = (Diamond(negate(box.body)),) if diagonal else ()
        premise = Sequent(bodies + context + extra + (box.body,))
        yield Principal(box, context, weakened.items), premise


@contextmanager
def _recursion_room(limit: int = 20000):
    old = sys.getrecursionlimit()
    if old < limit:
        sys.setrecursionlimit(limit)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def _to_proof(root: _Node, calculus: str, limit: int) -> Proof:
    """Unfold the search graph into a certificate tree of at most ``limit`` nodes.

    Subproofs reused from the cache are copied, so the tree can be much larger
    than the number of sequents searched.
    """
    nodes: dict[str, ProofNode] = {}
    backlinks: dict[str, str] = {}
    on_path: dict[int, str] = {}

    def visit(n: _Node) -> str:
        if len(nodes) >= limit:
            raise ProofSearchAborted(f"certificate exceeds {limit} nodes")
        nid = f"n{len(nodes)}"
        nodes[nid] = None  # reserve the id in pre-order
        if n.target is not None:
            backlinks[nid] = on_path[id(n.target)]
            nodes[nid] = ProofNode(nid, n.sequent, LEAF)
            return nid
        on_path[id(n)] = nid
        premises = tuple(visit(c) for c in n.children)
        del on_path[id(n)]
        nodes[nid] = ProofNode(nid, n.sequent, n.rule, premises, n.principal)
        return nid

    visit(root)
    return Proof(calculus, "n0", nodes, backlinks)


class _Budget:
    """Node-expansion allowance, renewed for every top-level query."""

    def __init__(self, budget: int | None, stats: SearchStats):
        self.limit = default_budget() if budget is None else budget
        self.stats = stats
        self.ceiling = self.limit

    def restart(self) -> None:
        self.ceiling = self.stats.nodes_expanded + self.limit

    def tick(self) -> None:
        self.stats.nodes_expanded += 1
        if self.stats.nodes_expanded > self.ceiling:
            raise ProofSearchAborted(f"node budget of {self.limit} exhausted")


class CircularProver:
    """Search for circular proofs.

    Instances may be reused across queries: cached failures are unprovable
    sequents and cached successes use no back-link leaving their own subtree, so
    both caches hold path-independent facts.
    """

    def __init__(self, budget: int | None = None):
        self.stats = SearchStats()
        self._budget = _Budget(budget, self.stats)
        self._failed: set[Sequent] = set()
        self._proved: dict[Sequent, _Node] = {}

    @property
    def budget(self) -> int:
        return self._budget.limit

    def prove(self, seq: Sequent) -> ProveResult:
        self._budget.restart()
        before = SearchStats(**vars(self.stats))
        try:
            with _recursion_room():
                node, _ = self._search(seq, {})
        except ProofSearchAborted:
            return ProveResult(ABORTED, None, _delta(self.stats, before))
        stats = _delta(self.stats, before)
        if node is None:
            return ProveResult(NOT_PROVABLE, None, stats)
        try:
            proof = _to_proof(node, GLCIRC, self._budget.limit)
        except ProofSearchAborted:
            return ProveResult(ABORTED, None, stats)
        verdict = check_circular(proof)
        if not verdict:
            raise SoundnessError(f"circular certificate rejected: {verdict.reason}: {verdict.message}")
        return ProveResult(PROVABLE, proof, stats)

    def decide(self, seq: Sequent) -> str:
        """Verdict only.  Skips building and re-checking the certificate, which for
        large proofs is a tree far bigger than the set of sequents searched."""
        self._budget.restart()
        try:
            with _recursion_room():
                node, _ = self._search(seq, {})
        except ProofSearchAborted:
            return ABORTED
        return NOT_PROVABLE if node is None else PROVABLE

    def _search(self, seq: Sequent, path: dict[Sequent, _Node]):
        ax = initial(seq)
        if ax is not None:
            return _Node(seq, ax[0], Principal(ax[1])), _NO_DEPS
        target = path.get(seq)
        if target is not None:
            self.stats.backlinks += 1
            leaf = _Node(seq)
            leaf.target = target
            return leaf, frozenset((target,))
        if seq in self._failed:
            self.stats.memo_hits += 1
            return None, _NO_DEPS
        cached = self._proved.get(seq)
        if cached is not None:
            self.stats.memo_hits += 1
            return cached, _NO_DEPS
        self._budget.tick()

        node = _Node(seq)
        path[seq] = node
        deps: frozenset | None = None
        try:
            f = _first_logical(seq)
            if isinstance(f, And):
                rest = seq.remove(f)
                left, d1 = self._search(rest.add(f.left), path)
                if left is not None:
                    right, d2 = self._search(rest.add(f.right), path)
                    if right is not None:
                        node.rule, node.principal, node.children = "and", Principal(f), [left, right]
                        deps = d1 | d2
            elif isinstance(f, Or):
                child, d = self._search(seq.remove(f).add(f.left, f.right), path)
                if child is not None:
                    node.rule, node.principal, node.children = "or", Principal(f), [child]
                    deps = d
            else:
                for principal, premise in box_steps(seq, diagonal=False):
                    child, d = self._search(premise, path)
                    if child is not None:
                        node.rule, node.principal, node.children = "box_k4", principal, [child]
                        deps = d
                        break
        finally:
            del path[seq]

        if deps is None:
            self._failed.add(seq)
            return None, _NO_DEPS
        if node in deps:
            deps = deps - {node}
        if not deps:
            self._proved[seq] = node
        return node, deps


class SequentProver:
    """Search for GL_Seq proofs (no back-links).  Provability is absolute, so both
    outcomes are memoized."""

    def __init__(self, budget: int | None = None):
        self.stats = SearchStats()
        self._budget = _Budget(budget, self.stats)
        self._memo: dict[Sequent, _Node | None] = {}

    @property
    def budget(self) -> int:
        return self._budget.limit

    def prove(self, seq: Sequent) -> ProveResult:
        self._budget.restart()
        before = SearchStats(**vars(self.stats))
        try:
            with _recursion_room():
                node = self._search(seq, set())
        except ProofSearchAborted:
            return ProveResult(ABORTED, None, _delta(self.stats, before))
        stats = _delta(self.stats, before)
        if node is None:
            return ProveResult(NOT_PROVABLE, None, stats)
        try:
            proof = _to_proof(node, GLSEQ, self._budget.limit)
        except ProofSearchAborted:
            return ProveResult(ABORTED, None, stats)
        verdict = check_glseq(proof)
        if not verdict:
            raise SoundnessError(f"GL_Seq certificate rejected: {verdict.reason}: {verdict.message}")
        return ProveResult(PROVABLE, proof, stats)

    def _search(self, seq: Sequent, history: set) -> _Node | None:
        ax = initial(seq)
        if ax is not None:
            return _Node(seq, ax[0], Principal(ax[1]))
        if seq in self._memo:
            self.stats.memo_hits += 1
            return self._memo[seq]
        self._budget.tick()

        node: _Node | None = _Node(seq)
        f = _first_logical(seq)
        if isinstance(f, And):
            rest = seq.remove(f)
            left = self._search(rest.add(f.left), history)
            right = self._search(rest.add(f.right), history) if left is not None else None
            if right is not None:
                node.rule, node.principal, node.children = "and", Principal(f), [left, right]
            else:
                node = None
        elif isinstance(f, Or):
            child = self._search(seq.remove(f).add(f.left, f.right), history)
            if child is not None:
                node.rule, node.principal, node.children = "or", Principal(f), [child]
            else:
                node = None
        else:
            found = False
            for principal, premise in box_steps(seq, diagonal=True):
                key = (seq, principal.formula)
                if key in history:
                    continue
                history.add(key)
                try:
                    child = self._search(premise, history)
                finally:
                    history.discard(key)
                if child is not None:
                    node.rule, node.principal, node.children = "box_gl", principal, [child]
                    found = True
                    break
            if not found:
                node = None
        self._memo[seq] = node
        return node


def _delta(now: SearchStats, before: SearchStats) -> SearchStats:
    return SearchStats(now.nodes_expanded - before.nodes_expanded,
                       now.backlinks - before.backlinks,
                       now.memo_hits - before.memo_hits)


def _as_sequent(g: Sequent | Formula) -> Sequent:
    return Sequent((g,)) if isinstance(g, Formula) else g


def prove_circ(g: Sequent | Formula, budget: int | None = None) -> ProveResult:
    """Decide ``g`` by circular proof search; a provable verdict carries a checked certificate."""
    return CircularProver(budget).prove(_as_sequent(g))


def prove_glseq(g: Sequent | Formula, budget: int | None = None) -> ProveResult:
    return SequentProver(budget).prove(_as_sequent(g))


def provable_formula(f: Formula, budget: int | None = None,
                     prover: CircularProver | None = None) -> bool:
    """GL-validity of ``f``; raises :class:`ProofSearchAborted` when the budget runs out."""
    result = (prover or CircularProver(budget)).prove(Sequent((f,)))
    if result.verdict == ABORTED:
        raise ProofSearchAborted(f"budget exhausted deciding {f}")
    return result.provable
