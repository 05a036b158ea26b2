"""``glc``: command-line front end.

Results go to stdout as JSON (the corpus command prints one formula per line);
diagnostics go to stderr.  Exit status: 0 affirmative, 1 negative, 2 usage or
input error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from contextlib import contextmanager

from .corpus import DEFAULT_WEIGHTS, CorpusSpec, generate_corpus
from .formula import FormulaSyntaxError, parse, render
from .interpolation import FixpointError, fixpoint, interpolate
from .oracle import find_countermodel
from .proofs import CertificateError, Proof, check
from .prover import (ABORTED, PROVABLE, CircularProver, ProofSearchAborted, SequentProver,
                     SoundnessError)
from .selftest import PROPERTIES, run_selftest
from .sequent import Sequent

OK, NEGATIVE, USAGE, ABORT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


def _read_text(arg: str | None, path: str | None, what: str) -> str:
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                return fh.read().strip()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if arg is None:
        raise InputError(f"no {what} given")
    return arg


def _write_json(path: str, obj) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


@contextmanager
def _timed(args, label: str):
    start = time.perf_counter()
    yield
    if getattr(args, "stats", False):
        print(f"{label}: {time.perf_counter() - start:.3f}s", file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands

def cmd_prove(args) -> int:
    seq = Sequent.from_text(_read_text(args.sequent, args.file, "sequent"))
    prover = (CircularProver if args.calculus == "circ" else SequentProver)(args.budget)
    with _timed(args, "prove"):
        result = prover.prove(seq)
    out = {"sequent": seq.to_json(), "calculus": args.calculus, "verdict": result.verdict,
           "stats": result.stats.to_json()}
    if result.verdict == PROVABLE:
        verdict = check(result.certificate)
        if not verdict:
            raise SoundnessError(f"certificate rejected: {verdict.reason}: {verdict.message}")
        out["rules"] = result.certificate.rule_counts()
        out["backlinks"] = len(result.certificate.backlinks)
        if args.emit_proof:
            _write_json(args.emit_proof, result.certificate.to_json())
    _emit(out)
    if result.verdict == ABORTED:
        return ABORT
    return OK if result.verdict == PROVABLE else NEGATIVE


def cmd_check(args) -> int:
    try:
        with open(args.path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {args.path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.path} is not JSON: {exc}") from None
    try:
        proof = Proof.from_json(data)
    except CertificateError as exc:
        raise InputError(f"{args.path}: {exc}") from None
    verdict = check(proof)
    _emit(verdict.to_json())
    return OK if verdict else NEGATIVE


def cmd_interpolate(args) -> int:
    a, b = parse(args.a), parse(args.b)
    with _timed(args, "interpolate"):
        result = interpolate(a, b, args.budget)
    report = result.to_json()
    if args.report:
        _write_json(args.report, report)
    _emit({k: report[k] for k in ("verdict", "interpolant", "vocab")})
    return OK if result.found else NEGATIVE


def cmd_fixpoint(args) -> int:
    a = parse(args.formula)
    if not args.atom.isidentifier() or not args.atom[0].islower():
        raise InputError(f"not an atom name: {args.atom!r}")
    try:
        f = fixpoint(args.atom, a, CircularProver(args.budget))
    except FixpointError as exc:
        raise InputError(str(exc)) from None
    _emit({"atom": args.atom, "formula": render(a), "fixpoint": render(f)})
    return OK


def cmd_oracle(args) -> int:
    f = parse(_read_text(args.formula, args.file, "formula"))
    if args.max_worlds < 1:
        raise InputError("--max-worlds must be at least 1")
    with _timed(args, "oracle"):
        try:
            cm = find_countermodel(f, args.max_worlds)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    out = {"formula": render(f), "max_worlds": args.max_worlds}
    if cm is None:
        out["verdict"] = "valid-to-bound"
        _emit(out)
        return OK
    out["verdict"] = "countermodel"
    out["countermodel"] = cm.to_json()
    _emit(out)
    return NEGATIVE


def cmd_corpus(args) -> int:
    weights = dict(DEFAULT_WEIGHTS)
    if args.weights:
        try:
            weights.update(json.loads(args.weights))
        except (json.JSONDecodeError, TypeError) as exc:
            raise InputError(f"--weights must be a JSON object: {exc}") from None
    try:
        spec = CorpusSpec(args.seed, args.count, args.max_atoms, args.max_depth,
                          args.max_modal_depth, weights)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    for f in generate_corpus(spec):
        sys.stdout.write(render(f) + "\n")
    return OK


def cmd_selftest(args) -> int:
    with _timed(args, "selftest"):
        reports = run_selftest(args.seed, args.count, budget=args.budget)
    _emit([r.to_json() for r in reports])
    return OK if all(not r.violations for r in reports) else NEGATIVE


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glc", description="Provability logic GL: circular "
                                     "proofs, certificates, Lyndon interpolants, countermodels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, budget=True):
        p.add_argument("--stats", action="store_true", help="timing on stderr")
        if budget:
            p.add_argument("--budget", type=int, default=None,
                           help="node-expansion budget (default: $GLC_BUDGET or 10^6)")

    p = sub.add_parser("prove", help="decide a sequent (comma-separated formulas)")
    p.add_argument("sequent", nargs="?")
    p.add_argument("--file", help="read the sequent from a file")
    p.add_argument("--calculus", choices=("circ", "seq"), default="circ")
    p.add_argument("--emit-proof", metavar="PATH", help="write the certificate as JSON")
    common(p)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check", help="check a JSON certificate")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("interpolate", help="Lyndon interpolant for A -> B")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--report", metavar="PATH", help="write the full report with both proofs")
    common(p)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("fixpoint", help="solve atom <-> formula, atom modalized")
    p.add_argument("atom")
    p.add_argument("formula")
    common(p)
    p.set_defaults(func=cmd_fixpoint)

    p = sub.add_parser("oracle", help="search finite GL models for a countermodel")
    p.add_argument("formula", nargs="?")
    p.add_argument("--file", help="read the formula from a file")
    p.add_argument("--max-worlds", type=int, required=True)
    common(p, budget=False)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("corpus", help="print a seeded random formula corpus")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--max-atoms", type=int, default=2)
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--max-modal-depth", type=int, default=2)
    p.add_argument("--weights", help="JSON object of production weights, e.g. '{\"box\": 4}'")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("selftest", help="structural-rule checks over a corpus: "
                       + ", ".join(PROPERTIES))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormulaSyntaxError, InputError) as exc:
        print(f"glc: {exc}", file=sys.stderr)
        return USAGE
    except ProofSearchAborted as exc:
        print(f"glc: aborted: {exc}", file=sys.stderr)
        return ABORT
    except ValueError as exc:
        print(f"glc: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
