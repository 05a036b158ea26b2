"""Proof certificates and their checkers.

Three calculi share one certificate shape:

* ``glseq``        -- finite trees with the GL box rule (premise carries ``<>~A``);
* ``glcirc``       -- finite trees with the K4 box rule plus back-links from
  leaves to ancestors carrying the same sequent;
* ``glcirc-split`` -- as ``glcirc`` but every node carries a split sequent and
  rules are annotated with the side of their principal formula.

Rule instances record their decomposition explicitly, so checking is matching
rather than search.  Checkers never raise on a certificate: they return a
:class:`Verdict` naming the first offending node and a reason code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .formula import TOP, And, Box, Diamond, Formula, FormulaSyntaxError, Or, negate, parse, render
from .sequent import Sequent, SplitSequent

GLSEQ, GLCIRC, GLCIRC_SPLIT = "glseq", "glcirc", "glcirc-split"
CALCULI = (GLSEQ, GLCIRC, GLCIRC_SPLIT)

LEAF = "leaf"

ARITY = {
    "ax_clash": 0, "ax_top": 0, "and": 2, "or": 1, "box_gl": 1, "box_k4": 1, LEAF: 0,
    "ax_top_l": 0, "ax_top_r": 0, "ax_clash_l": 0, "ax_clash_lr": 0, "ax_clash_r": 0,
    "and_l": 2, "and_r": 2, "or_l": 1, "or_r": 1, "box_l": 1, "box_r": 1,
}

RULES = {
    GLSEQ: frozenset({"ax_clash", "ax_top", "and", "or", "box_gl"}),
    GLCIRC: frozenset({"ax_clash", "ax_top", "and", "or", "box_k4", LEAF}),
    GLCIRC_SPLIT: frozenset({"ax_top_l", "ax_top_r", "ax_clash_l", "ax_clash_lr", "ax_clash_r",
                             "and_l", "and_r", "or_l", "or_r", "box_l", "box_r", LEAF}),
}

BOX_RULES = frozenset({"box_gl", "box_k4", "box_l", "box_r"})
AXIOMS = frozenset({"ax_clash", "ax_top", "ax_top_l", "ax_top_r",
                    "ax_clash_l", "ax_clash_lr", "ax_clash_r"})

# reason codes
MALFORMED = "malformed"
WRONG_RULE = "wrong_rule"
ARITY_MISMATCH = "arity"
BAD_AXIOM = "bad_axiom"
PREMISE_MISMATCH = "premise_mismatch"
BAD_DECOMPOSITION = "bad_decomposition"
SPLIT_MISMATCH = "split_mismatch"
DANGLING_LEAF = "dangling_leaf"
UNEXPECTED_BACKLINK = "unexpected_backlink"
BAD_BACKLINK = "bad_backlink"
NON_ANCESTOR_BACKLINK = "non_ancestor_backlink"
BACKLINK_SEQUENT_MISMATCH = "backlink_sequent_mismatch"
BACKLINK_SPLIT_MISMATCH = "backlink_split_mismatch"
MISSING_BOX_ON_CYCLE = "missing_box_on_cycle"


class CertificateError(ValueError):
    """Raised when a certificate cannot even be decoded."""


@dataclass(frozen=True)
class Principal:
    """The rule instance: principal formula and, for box rules, the ``<>Gamma`` context and
    the weakened remainder.  Split box rules use the ``*_right`` fields for the right side."""

    formula: Formula | None = None
    context: tuple[Formula, ...] = ()
    weakened: tuple[Formula, ...] = ()
    context_right: tuple[Formula, ...] = ()
    weakened_right: tuple[Formula, ...] = ()

    def to_json(self, rule: str) -> dict:
        out: dict = {}
        if self.formula is not None:
            out["formula"] = render(self.formula)
        if rule in ("box_gl", "box_k4"):
            out["context"] = [render(f) for f in self.context]
            out["weakened"] = [render(f) for f in self.weakened]
        elif rule in ("box_l", "box_r"):
            out["context"] = {"left": [render(f) for f in self.context],
                              "right": [render(f) for f in self.context_right]}
            out["weakened"] = {"left": [render(f) for f in self.weakened],
                               "right": [render(f) for f in self.weakened_right]}
        return out

    @classmethod
    def from_json(cls, data: dict) -> Principal:
        def fs(xs) -> tuple[Formula, ...]:
            if not isinstance(xs, list):
                raise CertificateError("expected a list of formulas")
            return tuple(parse(x) for x in xs)

        formula = parse(data["formula"]) if "formula" in data else None
        ctx, wk = data.get("context", []), data.get("weakened", [])
        if isinstance(ctx, dict) or isinstance(wk, dict):
            ctx = ctx if isinstance(ctx, dict) else {}
            wk = wk if isinstance(wk, dict) else {}
            return cls(formula, fs(ctx.get("left", [])), fs(wk.get("left", [])),
                       fs(ctx.get("right", [])), fs(wk.get("right", [])))
        return cls(formula, fs(ctx), fs(wk))


@dataclass(frozen=True)
class ProofNode:
    id: str
    sequent: Sequent
    rule: str
    premises: tuple[str, ...] = ()
    principal: Principal = Principal()
    split: SplitSequent | None = None

    def to_json(self) -> dict:
        out = {"id": self.id, "sequent": self.sequent.to_json()}
        if self.split is not None:
            out["split"] = self.split.to_json()
        out["rule"] = self.rule
        out["premises"] = list(self.premises)
        out["principal"] = self.principal.to_json(self.rule)
        return out


@dataclass
class Proof:
    """A certificate: a finite tree of nodes plus a back-link map (leaf id -> ancestor id)."""

    calculus: str
    root: str
    nodes: dict[str, ProofNode]
    backlinks: dict[str, str] = field(default_factory=dict)

    @property
    def root_node(self) -> ProofNode:
        return self.nodes[self.root]

    @property
    def conclusion(self) -> Sequent:
        return self.nodes[self.root].sequent

    def preorder(self) -> Iterator[ProofNode]:
        """Nodes reachable from the root, premises left to right.  Assumes a tree."""
        stack = [self.root]
        while stack:
            node = self.nodes[stack.pop()]
            yield node
            stack.extend(reversed(node.premises))

    def rule_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for node in self.nodes.values():
            counts[node.rule] = counts.get(node.rule, 0) + 1
        return counts

    def to_json(self) -> dict:
        return {
            "calculus": self.calculus,
            "root": self.root,
            "nodes": [n.to_json() for n in self.preorder()],
            "backlinks": dict(sorted(self.backlinks.items(), key=lambda kv: _id_order(kv[0]))),
        }

    @classmethod
    def from_json(cls, data: dict) -> Proof:
        try:
            calculus = data["calculus"]
            if calculus not in CALCULI:
                raise CertificateError(f"unknown calculus {calculus!r}")
            nodes: dict[str, ProofNode] = {}
            for raw in data["nodes"]:
                nid = raw["id"]
                if not isinstance(nid, str) or nid in nodes:
                    raise CertificateError(f"bad or duplicate node id {nid!r}")
                premises = raw.get("premises", [])
                if not isinstance(premises, list) or not all(isinstance(p, str) for p in premises):
                    raise CertificateError(f"node {nid}: premises must be a list of ids")
                split = SplitSequent.from_json(raw["split"]) if raw.get("split") is not None else None
                nodes[nid] = ProofNode(
                    id=nid,
                    sequent=Sequent.from_json(raw["sequent"]),
                    rule=str(raw["rule"]),
                    premises=tuple(premises),
                    principal=Principal.from_json(raw.get("principal") or {}),
                    split=split,
                )
            backlinks = data.get("backlinks") or {}
            if not isinstance(backlinks, dict):
                raise CertificateError("backlinks must be an object")
            root = data["root"]
            if not isinstance(root, str):
                raise CertificateError("root must be a node id")
            return cls(calculus, root, nodes, {str(k): str(v) for k, v in backlinks.items()})
        except CertificateError:
            raise
        except FormulaSyntaxError as exc:
            raise CertificateError(f"bad formula: {exc}") from exc
        except (KeyError, TypeError, AttributeError) as exc:
            raise CertificateError(f"malformed certificate: {exc!r}") from exc


def _id_order(nid: str):
    # "n12" sorts after "n2"
    digits = nid.lstrip("abcdefghijklmnopqrstuvwxyz_")
    return (0, int(digits), nid) if digits.isdigit() else (1, 0, nid)


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: str | None = None
    node: str | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.accepted

    def to_json(self) -> dict:
        if self.accepted:
            return {"verdict": "accept"}
        return {"verdict": "reject", "reason": self.reason, "node": self.node,
                "message": self.message}


ACCEPT = Verdict(True)


class _Reject(Exception):
    def __init__(self, reason: str, node: str | None, message: str):
        super().__init__(message)
        self.verdict = Verdict(False, reason, node, message)


def _fail(reason: str, node: str | None, message: str):
    raise _Reject(reason, node, message)


# ---------------------------------------------------------------------------
# structure

def _structure(proof: Proof) -> tuple[list[str], dict[str, str]]:
    """Return (preorder ids, parent map); reject anything that is not a finite tree."""
    if proof.root not in proof.nodes:
        _fail(MALFORMED, proof.root, "root is not a node")
    parent: dict[str, str] = {}
    order: list[str] = []
    seen = {proof.root}
    stack = [proof.root]
    while stack:
        nid = stack.pop()
        node = proof.nodes[nid]
        if node.id != nid:
            _fail(MALFORMED, nid, f"node stored under id {nid!r} names itself {node.id!r}")
        order.append(nid)
        for pid in node.premises:
            if pid not in proof.nodes:
                _fail(MALFORMED, nid, f"premise {pid!r} does not exist")
            if pid in seen:
                _fail(MALFORMED, nid, f"premise {pid!r} has several parents or closes a cycle")
            seen.add(pid)
            parent[pid] = nid
        stack.extend(reversed(node.premises))
    unreachable = sorted(set(proof.nodes) - seen, key=_id_order)
    if unreachable:
        _fail(MALFORMED, unreachable[0], "node is not reachable from the root")
    for nid in order:
        node = proof.nodes[nid]
        if node.rule not in RULES[proof.calculus]:
            _fail(WRONG_RULE, nid, f"rule {node.rule!r} is not a {proof.calculus} rule")
        if len(node.premises) != ARITY[node.rule]:
            _fail(ARITY_MISMATCH, nid,
                  f"rule {node.rule} takes {ARITY[node.rule]} premises, got {len(node.premises)}")
    return order, parent


def _check_backlinks(proof: Proof, order: list[str], parent: dict[str, str]) -> None:
    position = {nid: i for i, nid in enumerate(order)}
    for src in sorted(proof.backlinks, key=lambda s: position.get(s, len(order))):
        dst = proof.backlinks[src]
        if src not in proof.nodes or dst not in proof.nodes:
            _fail(MALFORMED, src, f"back-link {src!r} -> {dst!r} names a missing node")
        if proof.nodes[src].rule != LEAF:
            _fail(BAD_BACKLINK, src, "back-link source must be a leaf")
        path = []
        cur = src
        while cur in parent and cur != dst:
            cur = parent[cur]
            path.append(cur)
        if cur != dst or src == dst:
            _fail(NON_ANCESTOR_BACKLINK, src, f"back-link target {dst!r} is not a strict ancestor")
        a, b = proof.nodes[src], proof.nodes[dst]
        if a.sequent != b.sequent:
            _fail(BACKLINK_SEQUENT_MISMATCH, src,
                  f"back-linked sequents differ: [{a.sequent}] vs [{b.sequent}]")
        if proof.calculus == GLCIRC_SPLIT and a.split != b.split:
            _fail(BACKLINK_SPLIT_MISMATCH, src,
                  f"back-linked split sequents differ: [{a.split}] vs [{b.split}]")
        if not any(proof.nodes[n].rule in BOX_RULES for n in path):
            _fail(MISSING_BOX_ON_CYCLE, src, f"no box rule between {dst!r} and {src!r}")


# ---------------------------------------------------------------------------
# rule instances on plain sequents

def _premise(proof: Proof, node: ProofNode, i: int) -> ProofNode:
    return proof.nodes[node.premises[i]]


def _principal_in(node: ProofNode, side: Sequent, kind: type, what: str) -> Formula:
    f = node.principal.formula
    if not isinstance(f, kind):
        _fail(BAD_DECOMPOSITION, node.id, f"principal formula must be a {what}")
    if f not in side:
        _fail(BAD_DECOMPOSITION, node.id, f"principal formula {render(f)} does not occur")
    return f


def _expect(node: ProofNode, got: Sequent, want: Sequent, which: str) -> None:
    if got != want:
        _fail(PREMISE_MISMATCH, node.id, f"{which} is [{got}], expected [{want}]")


def _box_premise(node: ProofNode, box: Formula, context, weakened, conclusion: Sequent,
                 diagonal: bool) -> Sequent:
    """Validate ``<>Gamma, []A, Delta`` and return ``Gamma, <>Gamma, A`` (plus ``<>~A`` for GL)."""
    if not all(isinstance(c, Diamond) for c in context):
        _fail(BAD_DECOMPOSITION, node.id, "box context must consist of diamond formulas")
    if Sequent(tuple(context) + (box,) + tuple(weakened)) != conclusion:
        _fail(BAD_DECOMPOSITION, node.id, "conclusion is not <>Gamma, []A, Delta for the given parts")
    extra = (Diamond(negate(box.body)),) if diagonal else ()
    return Sequent(tuple(c.body for c in context) + tuple(context) + extra + (box.body,))


def _check_plain_rule(proof: Proof, node: ProofNode) -> None:
    seq = node.sequent
    rule = node.rule
    if rule == "ax_top":
        if TOP not in seq:
            _fail(BAD_AXIOM, node.id, "no T in an ax_top node")
    elif rule == "ax_clash":
        f = node.principal.formula
        if f is None or f not in seq or negate(f) not in seq:
            _fail(BAD_AXIOM, node.id, "ax_clash needs a formula and its negation")
    elif rule == "and":
        f = _principal_in(node, seq, And, "conjunction")
        rest = seq.remove(f)
        _expect(node, _premise(proof, node, 0).sequent, rest.add(f.left), "left premise")
        _expect(node, _premise(proof, node, 1).sequent, rest.add(f.right), "right premise")
    elif rule == "or":
        f = _principal_in(node, seq, Or, "disjunction")
        _expect(node, _premise(proof, node, 0).sequent, seq.remove(f).add(f.left, f.right), "premise")
    elif rule in ("box_gl", "box_k4"):
        f = _principal_in(node, seq, Box, "box formula")
        p = node.principal
        want = _box_premise(node, f, p.context, p.weakened, seq, diagonal=rule == "box_gl")
        _expect(node, _premise(proof, node, 0).sequent, want, "premise")


# ---------------------------------------------------------------------------
# rule instances on split sequents

def _check_split_rule(proof: Proof, node: ProofNode) -> None:
    sp = node.split
    rule = node.rule
    left, right = sp.left, sp.right

    def prem(i: int) -> SplitSequent:
        split = _premise(proof, node, i).split
        return split

    def expect_split(got: SplitSequent, want: SplitSequent, which: str) -> None:
        if got != want:
            _fail(PREMISE_MISMATCH, node.id, f"{which} is [{got}], expected [{want}]")

    if rule in ("ax_top_l", "ax_top_r"):
        if TOP not in (left if rule == "ax_top_l" else right):
            _fail(BAD_AXIOM, node.id, f"no T on the {'left' if rule == 'ax_top_l' else 'right'}")
    elif rule in ("ax_clash_l", "ax_clash_lr", "ax_clash_r"):
        f = node.principal.formula
        first = right if rule == "ax_clash_r" else left
        second = left if rule == "ax_clash_l" else right
        if f is None or f not in first or negate(f) not in second:
            _fail(BAD_AXIOM, node.id, f"{rule} needs A and ~A on the designated sides")
    elif rule in ("and_l", "and_r"):
        on_left = rule == "and_l"
        f = _principal_in(node, left if on_left else right, And, "conjunction")
        for i, part in enumerate((f.left, f.right)):
            if on_left:
                want = SplitSequent(left.remove(f).add(part), right)
            else:
                want = SplitSequent(left, right.remove(f).add(part))
            expect_split(prem(i), want, ("left", "right")[i] + " premise")
    elif rule in ("or_l", "or_r"):
        on_left = rule == "or_l"
        f = _principal_in(node, left if on_left else right, Or, "disjunction")
        if on_left:
            want = SplitSequent(left.remove(f).add(f.left, f.right), right)
        else:
            want = SplitSequent(left, right.remove(f).add(f.left, f.right))
        expect_split(prem(0), want, "premise")
    elif rule in ("box_l", "box_r"):
        on_left = rule == "box_l"
        f = _principal_in(node, left if on_left else right, Box, "box formula")
        p = node.principal
        ctx_l, ctx_r = p.context, p.context_right
        if not all(isinstance(c, Diamond) for c in ctx_l + ctx_r):
            _fail(BAD_DECOMPOSITION, node.id, "box context must consist of diamond formulas")
        extra_l, extra_r = ((f,), ()) if on_left else ((), (f,))
        if (Sequent(ctx_l + extra_l + p.weakened) != left
                or Sequent(ctx_r + extra_r + p.weakened_right) != right):
            _fail(BAD_DECOMPOSITION, node.id,
                  "conclusion is not <>G1, Delta1 | <>G2, Delta2 with []A on the rule's side")
        want_l = Sequent(tuple(c.body for c in ctx_l) + ctx_l + ((f.body,) if on_left else ()))
        want_r = Sequent(tuple(c.body for c in ctx_r) + ctx_r + (() if on_left else (f.body,)))
        expect_split(prem(0), SplitSequent(want_l, want_r), "premise")


# ---------------------------------------------------------------------------
# entry points

def _run(proof: Proof, calculus: str) -> Verdict:
    try:
        if proof.calculus != calculus:
            _fail(WRONG_RULE, None, f"expected a {calculus} certificate, got {proof.calculus}")
        order, parent = _structure(proof)
        if calculus == GLCIRC_SPLIT:
            for nid in order:
                node = proof.nodes[nid]
                if node.split is None:
                    _fail(SPLIT_MISMATCH, nid, "split certificate node without a split sequent")
                if node.split.flatten() != node.sequent:
                    _fail(SPLIT_MISMATCH, nid, "split sequent does not flatten to the node's sequent")
        if calculus == GLSEQ:
            if proof.backlinks:
                src = sorted(proof.backlinks, key=_id_order)[0]
                _fail(UNEXPECTED_BACKLINK, src, "glseq proofs have no back-links")
        else:
            _check_backlinks(proof, order, parent)
        for nid in order:
            node = proof.nodes[nid]
            if node.rule == LEAF and nid not in proof.backlinks:
                _fail(DANGLING_LEAF, nid, "leaf is neither an initial sequent nor back-linked")
        for nid in order:
            node = proof.nodes[nid]
            if calculus == GLCIRC_SPLIT:
                _check_split_rule(proof, node)
            else:
                _check_plain_rule(proof, node)
    except _Reject as rej:
        return rej.verdict
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        return Verdict(False, MALFORMED, None, f"certificate could not be analysed: {exc!r}")
    return ACCEPT


def check_glseq(proof: Proof) -> Verdict:
    """Accept iff ``proof`` is a GL_Seq derivation with every leaf initial."""
    return _run(proof, GLSEQ)


def check_circular(proof: Proof) -> Verdict:
    """Accept iff ``proof`` is a circular K4-rule proof whose leaves are initial or back-linked."""
    return _run(proof, GLCIRC)


def check_split_circular(proof: Proof) -> Verdict:
    return _run(proof, GLCIRC_SPLIT)


def check(proof: Proof) -> Verdict:
    """Dispatch on ``proof.calculus``."""
    return _run(proof, proof.calculus)


_SPLIT_TO_PLAIN = {
    "ax_top_l": "ax_top", "ax_top_r": "ax_top",
    "ax_clash_l": "ax_clash", "ax_clash_lr": "ax_clash", "ax_clash_r": "ax_clash",
    "and_l": "and", "and_r": "and", "or_l": "or", "or_r": "or",
    "box_l": "box_k4", "box_r": "box_k4", LEAF: LEAF,
}


def flatten_split(proof: Proof) -> Proof:
    """Forget the splitting: a ``glcirc-split`` certificate becomes a ``glcirc`` one."""
    nodes = {}
    for nid, node in proof.nodes.items():
        rule = _SPLIT_TO_PLAIN.get(node.rule, node.rule)
        p = node.principal
        if rule == "ax_top":
            principal = Principal(TOP)
        elif rule == "box_k4":
            principal = Principal(p.formula, p.context + p.context_right, p.weakened + p.weakened_right)
        else:
            principal = Principal(p.formula)
        sequent = node.split.flatten() if node.split is not None else node.sequent
        nodes[nid] = ProofNode(nid, sequent, rule, node.premises, principal)
    return Proof(GLCIRC, proof.root, nodes, dict(proof.backlinks))
