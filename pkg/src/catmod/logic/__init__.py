"""Multi-sorted first-order syntax, parsing, printing and evaluation."""
from catmod.logic.signature import GROUP_SIG, L_CAT, L_HOMO, L_HOMO_ISO, FuncSym, Signature, one_sorted
from catmod.logic.syntax import (
    And, App, Atom, Bottom, Const, Equals, Exists, Forall, Iff, Implies, Not, Or, Top, Var,
    conj, disj, formula_size, free_vars, has_equality, is_sentence, quantifier_depth, to_text,
    term_to_text,
)
from catmod.logic.parser import parse_formula, parse_term
from catmod.logic.semantics import Evaluator, compile_formula, eval_formula, eval_term
from catmod.logic.enumerate import (
    SentenceSpace, canonicalize, count_sentences, enumerate_sentences, sample_sentences, sentence_at,
)
