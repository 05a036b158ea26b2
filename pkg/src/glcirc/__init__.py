"""Provability logic GL: circular proof search, checkable certificates, Lyndon
interpolation via fixed points, and a finite-model oracle."""

from .corpus import CorpusSpec, generate_corpus, sample_pairs
from .formula import (BOTTOM, TOP, And, Atom, Bottom, Box, Diamond, Formula, FormulaSyntaxError,
                      MarkedLiteral, NegAtom, Or, Top, negate, parse, render, simplify, vocab)
from .interpolation import (InterpolantResult, check_interpolant, extract_interpolant, fixpoint,
                            interpolate, split_propagate)
from .oracle import KripkeModel, find_countermodel, forces
from .proofs import Proof, Verdict, check, check_circular, check_glseq, check_split_circular
from .prover import (CircularProver, ProofSearchAborted, ProveResult, SequentProver, prove_circ,
                     prove_glseq, provable_formula)
from .sequent import Sequent, SplitSequent

__all__ = [
    "BOTTOM", "TOP", "And", "Atom", "Bottom", "Box", "Diamond", "Formula", "FormulaSyntaxError",
    "MarkedLiteral", "NegAtom", "Or", "Top", "negate", "parse", "render", "simplify", "vocab",
    "Sequent", "SplitSequent",
    "Proof", "Verdict", "check", "check_circular", "check_glseq", "check_split_circular",
    "CircularProver", "SequentProver", "ProofSearchAborted", "ProveResult",
    "prove_circ", "prove_glseq", "provable_formula",
    "InterpolantResult", "check_interpolant", "extract_interpolant", "fixpoint", "interpolate",
    "split_propagate",
    "KripkeModel", "find_countermodel", "forces",
    "CorpusSpec", "generate_corpus", "sample_pairs",
]
