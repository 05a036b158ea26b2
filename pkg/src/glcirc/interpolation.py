"""Lyndon interpolants from circular proofs.

The pipeline proves ``~A, B``, splits the root as ``~A | B``, pushes the split up
through the proof and reads an interpolant off the split proof rule by rule.
Back-linked leaves contribute fresh unknown atoms; each unknown is removed at
its target node by solving a modal fixed-point equation, innermost cycle first.
Every stage's output is re-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import count

from .formula import (BOTTOM, TOP, And, Atom, Box, Diamond, Formula, NegAtom, Or, atoms, boxdot,
                      iff, implies, negate, occurs_unmodalized, render, simplify, subformulas,
                      substitute, vocab, vocab_star)
from .proofs import (AXIOMS, GLCIRC_SPLIT, LEAF, Principal, Proof, ProofNode, check_circular,
                     check_split_circular)
from .prover import (ABORTED, PROVABLE, CircularProver, ProofSearchAborted, SoundnessError,
                     _recursion_room, default_budget)
from .sequent import Sequent, SplitSequent

INTERPOLANT = "interpolant"
NOT_PROVABLE = "not-provable"


class InterpolationError(SoundnessError):
    """A pipeline invariant failed: malformed split proof, unguarded unknown, uncertified fixpoint."""


class FixpointError(ValueError):
    """``fixpoint`` was called on a formula where the atom is not modalized."""


# ---------------------------------------------------------------------------
# splitting

def _split_axiom(split: SplitSequent) -> tuple[str, Formula] | None:
    """Pick the axiom closing ``split``, preferring those whose interpolant is a constant."""
    left, right = split.left, split.right
    if TOP in right:
        return "ax_top_r", TOP
    if TOP in left:
        return "ax_top_l", TOP
    for side, rule in ((right, "ax_clash_r"), (left, "ax_clash_l")):
        present = set(side.items)
        for f in side.distinct():
            if negate(f) in present:
                return rule, f
    present = set(right.items)
    for f in left.distinct():
        if negate(f) in present:
            return "ax_clash_lr", f
    return None


def _split_box(split: SplitSequent, principal: Principal) -> tuple[str, Principal, SplitSequent]:
    left, right = split.left, split.right
    box = principal.formula
    on_left = box in left
    ctx_l = tuple(d for d in principal.context if d in left)
    ctx_r = tuple(d for d in principal.context if d not in left)
    weak_l = left.difference(ctx_l + ((box,) if on_left else ()))
    weak_r = right.difference(ctx_r + (() if on_left else (box,)))
    prem_l = Sequent(tuple(d.body for d in ctx_l) + ctx_l + ((box.body,) if on_left else ()))
    prem_r = Sequent(tuple(d.body for d in ctx_r) + ctx_r + (() if on_left else (box.body,)))
    rule = "box_l" if on_left else "box_r"
    return (rule, Principal(box, ctx_l, weak_l.items, ctx_r, weak_r.items),
            SplitSequent(prem_l, prem_r))


def split_propagate(proof: Proof, root_split: SplitSequent, limit: int | None = None) -> Proof:
    """Push ``root_split`` up through a circular proof.

    Each formula occurrence keeps the side of the occurrence it came from.  A node
    closes by back-link only on an ancestor with the same *split* sequent; where a
    plain back-link would join different splits the proof is unfolded by
    continuing from the link's target.  Unfolding that would exceed ``limit``
    nodes (default: the prover budget) raises :class:`ProofSearchAborted`.
    """
    verdict = check_circular(proof)
    if not verdict:
        raise ValueError(f"not a valid circular proof: {verdict.reason}: {verdict.message}")
    if root_split.flatten() != proof.conclusion:
        raise ValueError(f"split [{root_split}] does not flatten to the root [{proof.conclusion}]")

    nodes: dict[str, ProofNode] = {}
    backlinks: dict[str, str] = {}
    path: dict[SplitSequent, str] = {}
    ids = count()
    limit = default_budget() if limit is None else limit

    def build(pid: str, split: SplitSequent) -> str:
        if len(nodes) >= limit:
            raise ProofSearchAborted(f"split proof exceeds {limit} nodes")
        nid = f"s{next(ids)}"
        nodes[nid] = None  # reserve pre-order position
        seq = split.flatten()
        pnode = proof.nodes[pid]
        if pnode.rule in AXIOMS:
            ax = _split_axiom(split)
            if ax is None:
                raise InterpolationError(f"no split axiom for [{split}]")
            nodes[nid] = ProofNode(nid, seq, ax[0], (), Principal(ax[1]), split)
            return nid
        target = path.get(split)
        if target is not None:
            backlinks[nid] = target
            nodes[nid] = ProofNode(nid, seq, LEAF, (), Principal(), split)
            return nid
        while pnode.rule == LEAF:
            pnode = proof.nodes[proof.backlinks[pnode.id]]

        left, right = split.left, split.right
        f = pnode.principal.formula
        premises: list[tuple[str, SplitSequent]] = []
        if pnode.rule == "and":
            if f in left:
                rule = "and_l"
                premises = [(p, SplitSequent(left.remove(f).add(part), right))
                            for p, part in zip(pnode.premises, (f.left, f.right))]
            else:
                rule = "and_r"
                premises = [(p, SplitSequent(left, right.remove(f).add(part)))
                            for p, part in zip(pnode.premises, (f.left, f.right))]
            principal = Principal(f)
        elif pnode.rule == "or":
            if f in left:
                rule, prem = "or_l", SplitSequent(left.remove(f).add(f.left, f.right), right)
            else:
                rule, prem = "or_r", SplitSequent(left, right.remove(f).add(f.left, f.right))
            principal = Principal(f)
            premises = [(pnode.premises[0], prem)]
        elif pnode.rule == "box_k4":
            rule, principal, prem = _split_box(split, pnode.principal)
            premises = [(pnode.premises[0], prem)]
        else:
            raise InterpolationError(f"unexpected rule {pnode.rule!r} in a circular proof")

        path[split] = nid
        try:
            children = tuple(build(p, s) for p, s in premises)
        finally:
            del path[split]
        nodes[nid] = ProofNode(nid, seq, rule, children, principal, split)
        return nid

    with _recursion_room():
        build(proof.root, root_split)
    out = Proof(GLCIRC_SPLIT, "s0", nodes, backlinks)
    verdict = check_split_circular(out)
    if not verdict:
        raise InterpolationError(f"split proof rejected: {verdict.reason}: {verdict.message}")
    return out


# ---------------------------------------------------------------------------
# fixed points

def _occurrences(name: str, f: Formula) -> int:
    return sum(1 for g in subformulas(f) if isinstance(g, (Atom, NegAtom)) and g.name == name)


def _provable(f: Formula, prover: CircularProver) -> bool:
    verdict = prover.decide(Sequent((f,)))
    if verdict == ABORTED:
        raise ProofSearchAborted(f"budget exhausted deciding {render(f)}")
    return verdict == PROVABLE


def _iterate(x: str, a: Formula, prover: CircularProver) -> Formula | None:
    """Iterate ``a`` from ``T`` until two successive iterates are provably equivalent."""
    current = TOP
    for _ in range(_occurrences(x, a) + 2):
        nxt = simplify(substitute(a, x, current))
        if _provable(iff(nxt, current), prover):
            return current
        current = nxt
    return None


def fixpoint(x: str, a: Formula, prover: CircularProver | None = None) -> Formula:
    """An ``x``-free ``F`` with ``[.](x <-> a) <-> [.](x <-> F)`` provable in GL.

    ``x`` and its complement must occur in ``a`` only under modal operators.
    The candidate comes from :func:`explicit_fixpoint`; if the prover does not
    confirm it, iteration from ``T`` is tried.  The equivalence and the
    vocabulary bound are both checked before returning.
    """
    if occurs_unmodalized(x, a):
        raise FixpointError(f"{x} occurs outside modal scope in {render(a)}")
    prover = prover or CircularProver()
    current = explicit_fixpoint(x, a)
    if not _provable(iff(simplify(substitute(a, x, current)), current), prover):
        current = _iterate(x, a, prover)
        if current is None:
            raise InterpolationError(f"no certified fixpoint of {x} in {render(a)}")

    if x in atoms(current):
        raise InterpolationError(f"fixpoint of {x} still mentions {x}")
    claim = iff(boxdot(iff(Atom(x), a)), boxdot(iff(Atom(x), current)))
    if not _provable(claim, prover):
        raise InterpolationError(f"fixpoint {render(current)} of {x} in {render(a)} not certified")
    if not vocab(current)[2] <= fixpoint_bound(x, a):
        raise InterpolationError(f"fixpoint {render(current)} exceeds the vocabulary bound")
    return current


def _modal_slots(x: str, a: Formula) -> list[Formula]:
    """Outermost modal subformulas of ``a`` that mention ``x``, distinct, in canonical order."""
    found: set = set()
    stack = [a]
    while stack:
        g = stack.pop()
        if isinstance(g, (Box, Diamond)):
            if x in atoms(g):
                found.add(g)
        else:
            stack.extend(g.children)
    return sorted(found)


def _fill_slots(a: Formula, fill: dict) -> Formula:
    if a in fill:
        return fill[a]
    if isinstance(a, And):
        return And(_fill_slots(a.left, fill), _fill_slots(a.right, fill))
    if isinstance(a, Or):
        return Or(_fill_slots(a.left, fill), _fill_slots(a.right, fill))
    return a


@lru_cache(maxsize=4096)
def explicit_fixpoint(x: str, a: Formula) -> Formula:
    """Fixed point by recursion on the modal slots mentioning ``x``.

    Writing ``a`` as ``B(M1, ..., Mn)`` over its outermost modal subformulas
    containing ``x``, the answer is ``B(M1[x:=D1], ..., Mn[x:=Dn])`` where ``Di`` is
    the fixed point of ``a`` with ``Mi`` replaced by the constant it takes at a
    world without successors.  Uncertified; callers check the result.
    """
    slots = _modal_slots(x, a)
    if not slots:
        return a
    fill = {}
    for m in slots:
        const = TOP if isinstance(m, Box) else BOTTOM
        d = explicit_fixpoint(x, simplify(_fill_slots(a, {m: const})))
        fill[m] = substitute(m, x, d)
    return simplify(_fill_slots(a, fill))


def fixpoint_bound(x: str, a: Formula) -> frozenset:
    """Marked literals a fixed point of ``x`` in ``a`` may use."""
    drop = {lit for lit in vocab_star(a) | vocab_star(negate(a)) if lit.name == x}
    if any(isinstance(g, NegAtom) and g.name == x for g in subformulas(a)):
        return (vocab_star(a) | vocab_star(negate(a))) - drop
    return vocab_star(a) - drop


# ---------------------------------------------------------------------------
# extraction

def _unknown_names(proof: Proof) -> dict[str, str]:
    taken = atoms(f for node in proof.nodes.values() for f in node.sequent.items)
    names: dict[str, str] = {}
    for leaf in sorted(proof.backlinks, key=lambda s: int(s.lstrip("sn") or 0)):
        name = f"x_{leaf}"
        while name in taken:
            name = "x" + name
        names[leaf] = name
    return names


def _guarded(name: str, f: Formula) -> bool:
    return (not occurs_unmodalized(name, f)
            and not any(isinstance(g, NegAtom) and g.name == name for g in subformulas(f)))


def extract_interpolant(proof: Proof, prover: CircularProver | None = None) -> Formula:
    """Read an interpolant off a split circular proof."""
    verdict = check_split_circular(proof)
    if not verdict:
        raise InterpolationError(f"split proof rejected: {verdict.reason}: {verdict.message}")
    prover = prover or CircularProver()
    unknown = _unknown_names(proof)
    incoming: dict[str, list[str]] = {}
    for src, dst in proof.backlinks.items():
        incoming.setdefault(dst, []).append(src)

    def go(nid: str) -> Formula:
        node = proof.nodes[nid]
        rule, f = node.rule, node.principal.formula
        if rule == LEAF:
            return Atom(unknown[nid])
        if rule in ("ax_top_l", "ax_clash_l"):
            c = BOTTOM
        elif rule in ("ax_top_r", "ax_clash_r"):
            c = TOP
        elif rule == "ax_clash_lr":
            c = negate(f)
        else:
            parts = [go(p) for p in node.premises]
            if rule == "and_l":
                c = Or(parts[0], parts[1])
            elif rule == "and_r":
                c = And(parts[0], parts[1])
            elif rule in ("or_l", "or_r"):
                c = parts[0]
            elif rule == "box_l":
                c = Diamond(parts[0])
            else:
                c = Box(parts[0])
        for src in sorted(incoming.get(nid, ()), key=lambda s: int(s[1:])):
            name = unknown[src]
            c = simplify(c)
            if not _guarded(name, c):
                raise InterpolationError(f"unknown {name} is not modalized and positive in {render(c)}")
            c = simplify(substitute(c, name, fixpoint(name, c, prover)))
        return c

    with _recursion_room():
        result = simplify(go(proof.root))
    left_over = atoms(result) & set(unknown.values())
    if left_over:
        raise InterpolationError(f"unknowns {sorted(left_over)} survive extraction")
    return result


# ---------------------------------------------------------------------------
# checking and the full pipeline

@dataclass
class InterpolantCheck:
    """Outcome of checking ``C`` against ``A -> B``.

    ``failures`` lists every failed condition and ``reason`` is the first of them.
    """

    left_ok: bool
    right_ok: bool
    vocab_ok: bool
    left_proof: Proof | None = None
    right_proof: Proof | None = None
    vocab_a: frozenset = frozenset()
    vocab_b: frozenset = frozenset()
    vocab_c: frozenset = frozenset()

    @property
    def accepted(self) -> bool:
        return self.left_ok and self.right_ok and self.vocab_ok

    def __bool__(self) -> bool:
        return self.accepted

    @property
    def failures(self) -> tuple[str, ...]:
        flags = (("left_implication", self.left_ok), ("right_implication", self.right_ok),
                 ("vocabulary", self.vocab_ok))
        return tuple(name for name, ok in flags if not ok)

    @property
    def reason(self) -> str | None:
        return self.failures[0] if self.failures else None


def check_interpolant(a: Formula, b: Formula, c: Formula,
                      prover: CircularProver | None = None) -> InterpolantCheck:
    """Check ``A -> C`` and ``C -> B`` with the prover and ``w(C) <= w(A) & w(B)``."""
    prover = prover or CircularProver()

    def certify(f: Formula) -> Proof | None:
        result = prover.prove(Sequent((f,)))
        if result.verdict == ABORTED:
            raise ProofSearchAborted(f"budget exhausted deciding {render(f)}")
        return result.certificate

    left = certify(implies(a, c))
    right = certify(implies(c, b))
    wa, wb, wc = vocab(a)[2], vocab(b)[2], vocab(c)[2]
    return InterpolantCheck(left is not None, right is not None, wc <= wa & wb,
                            left, right, wa, wb, wc)


def _literals(s: frozenset) -> list[str]:
    return sorted(str(lit) for lit in s)


@dataclass
class InterpolantResult:
    verdict: str
    interpolant: Formula | None = None
    left_proof: Proof | None = None
    right_proof: Proof | None = None
    vocab_a: frozenset = frozenset()
    vocab_b: frozenset = frozenset()
    vocab_c: frozenset = frozenset()
    split_proof: Proof | None = field(default=None, repr=False)

    @property
    def found(self) -> bool:
        return self.verdict == INTERPOLANT

    @property
    def vocab_ok(self) -> bool:
        return self.found and self.vocab_c <= self.vocab_a & self.vocab_b

    def to_json(self) -> dict:
        return {
            "interpolant": None if self.interpolant is None else render(self.interpolant),
            "left_proof": None if self.left_proof is None else self.left_proof.to_json(),
            "right_proof": None if self.right_proof is None else self.right_proof.to_json(),
            "vocab": {"a": _literals(self.vocab_a), "b": _literals(self.vocab_b),
                      "c": _literals(self.vocab_c), "included": self.vocab_ok},
            "verdict": self.verdict,
        }


def interpolate(a: Formula, b: Formula, budget: int | None = None) -> InterpolantResult:
    """A checked Lyndon interpolant for ``A -> B``, or a not-provable verdict."""
    prover = CircularProver(budget)
    left, right = Sequent((negate(a),)), Sequent((b,))
    result = prover.prove(left.union(right))
    if result.verdict == ABORTED:
        raise ProofSearchAborted(f"budget exhausted proving {render(implies(a, b))}")
    wa, wb = vocab(a)[2], vocab(b)[2]
    if not result.provable:
        return InterpolantResult(NOT_PROVABLE, vocab_a=wa, vocab_b=wb)
    split = split_propagate(result.certificate, SplitSequent(left, right), prover.budget)
    c = extract_interpolant(split, prover)
    checked = check_interpolant(a, b, c, prover)
    if not checked:
        raise InterpolationError(f"extracted {render(c)} fails the {checked.reason} condition")
    return InterpolantResult(INTERPOLANT, c, checked.left_proof, checked.right_proof,
                             wa, wb, checked.vocab_c, split)

