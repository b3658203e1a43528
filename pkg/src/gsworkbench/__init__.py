"""Workbench for cooperating distributed grammar systems working in hybrid
derivation modes, programmed grammars of finite index, and the standard
transformations between them.

Submodules:
  model          grammar formalisms, derivation modes, validation
  engine         bounded enumeration, derivation traces, word index
  constructions  grammar-to-grammar transformations and named examples
  verifier       reference languages, bounded equality, NSF checking
  fileformat     the .gsw text format
  cli            the `gsw` command-line tool
"""

from .model import (
    CdSystem,
    HcdSystem,
    Mode,
    ProgrammedGrammar,
    Rule,
    Symbol,
    at_least,
    at_most,
    between,
    exactly,
    mode_text,
    nonterminal,
    STAR,
    T_MODE,
    t_and,
    terminal,
    validate,
)
from .engine import (
    Bounds,
    BoundedLanguage,
    DerivationTrace,
    enumerate_grammar,
    trace_index,
    validate_trace,
    word_index,
)

__version__ = "0.1.0"
