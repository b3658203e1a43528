"""Data model for symbols, rules, derivation modes and grammar formalisms.

Three formalisms share one context-free rule representation: plain CD
grammar systems (all components run in one mode), externally hybrid CD
systems (one mode per component), and programmed grammars (labelled rules
with success/failure fields).  All values are immutable after construction;
`validate` reports invariant violations as data instead of raising.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

NAME_PATTERN = re.compile(r"[A-Za-z0-9_'<>,()\-]+\Z")

NONTERMINAL = "N"
TERMINAL = "T"


@dataclass(frozen=True, order=True)
class Symbol:
    """An interned grammar symbol: a name plus a fixed kind."""

    name: str
    kind: str  # NONTERMINAL or TERMINAL

    def __post_init__(self):
        if not self.name:
            raise ValueError("symbol name must be non-empty")
        if self.kind not in (NONTERMINAL, TERMINAL):
            raise ValueError("symbol kind must be %r or %r" % (NONTERMINAL, TERMINAL))

    def is_terminal(self) -> bool:
        return self.kind == TERMINAL

    def __repr__(self):
        return self.name if self.is_terminal() else "<%s>" % self.name


def nonterminal(name: str) -> Symbol:
    return Symbol(name, NONTERMINAL)


def terminal(name: str) -> Symbol:
    return Symbol(name, TERMINAL)


# A sentential form is simply a tuple of symbols; the empty tuple is lambda.
Form = Tuple[Symbol, ...]


def form_text(form: Form) -> str:
    """Render a form as space-separated symbol names (`#` for lambda)."""
    if not form:
        return "#"
    return " ".join(s.name for s in form)


@dataclass(frozen=True)
class Rule:
    """A context-free rule ``lhs -> rhs`` (empty rhs encodes lambda)."""

    lhs: Symbol
    rhs: Tuple[Symbol, ...]

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))

    def is_erasing(self) -> bool:
        return len(self.rhs) == 0

    def __repr__(self):
        return "%s -> %s" % (self.lhs.name, form_text(self.rhs))


RuleSet = Tuple[Rule, ...]


# ---------------------------------------------------------------------------
# Derivation modes
# ---------------------------------------------------------------------------

_BASIC_BOUNDED = ("le", "eq", "ge")


@dataclass(frozen=True)
class Mode:
    """A derivation mode: ``*``, ``t``, a step-count comparison, or a
    conjunction of two modes.

    The bounded comparisons carry the bound in ``k``.  Conjunctions keep
    their operands, so ``between(k, k)`` and ``exactly(k)`` stay distinct
    values even though they are semantically equivalent.
    """

    kind: str  # "*", "t", "le", "eq", "ge", "and"
    k: int = 0
    left: Optional["Mode"] = None
    right: Optional["Mode"] = None

    def __repr__(self):
        return mode_text(self)


STAR = Mode("*")
T_MODE = Mode("t")


def at_most(k: int) -> Mode:
    if k < 1:
        raise ValueError("mode bound must be positive")
    return Mode("le", k)


def exactly(k: int) -> Mode:
    if k < 1:
        raise ValueError("mode bound must be positive")
    return Mode("eq", k)


def at_least(k: int) -> Mode:
    if k < 1:
        raise ValueError("mode bound must be positive")
    return Mode("ge", k)


def between(k: int, l: int) -> Mode:
    if k < 1:
        raise ValueError("mode bound must be positive")
    if k > l:
        raise ValueError("between(k, l) requires k <= l")
    return Mode("and", left=at_least(k), right=at_most(l))


def t_and(inner: Mode) -> Mode:
    if inner.kind not in _BASIC_BOUNDED:
        raise ValueError("t_and nests only <=k, =k, >=k modes")
    return Mode("and", left=T_MODE, right=inner)


def conj(left: Mode, right: Mode) -> Mode:
    """General conjunction; used for predicate-level algebra checks."""
    return Mode("and", left=left, right=right)


def mode_text(mode: Mode) -> str:
    if mode.kind == "*":
        return "*"
    if mode.kind == "t":
        return "t"
    if mode.kind == "le":
        return "<=%d" % mode.k
    if mode.kind == "eq":
        return "=%d" % mode.k
    if mode.kind == "ge":
        return ">=%d" % mode.k
    return "(%s & %s)" % (mode_text(mode.left), mode_text(mode.right))


def mode_step_cap(mode: Mode) -> Optional[int]:
    """Largest inner step count the mode can accept, or None if unbounded."""
    if mode.kind in ("le", "eq"):
        return mode.k
    if mode.kind in ("*", "t", "ge"):
        return None
    caps = [mode_step_cap(m) for m in (mode.left, mode.right)]
    caps = [c for c in caps if c is not None]
    return min(caps) if caps else None


def is_in_mode_set_d(mode: Mode) -> bool:
    """True iff the mode belongs to the mode set D usable by components."""
    if mode.kind in ("*", "t", "le", "eq", "ge"):
        return True
    if mode.kind == "and":
        l, r = mode.left, mode.right
        if l.kind == "ge" and r.kind == "le" and l.k <= r.k:
            return True
        if l.kind == "t" and r.kind in _BASIC_BOUNDED:
            return True
    return False


# ---------------------------------------------------------------------------
# Grammar formalisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CdSystem:
    """A cooperating distributed grammar system of degree ``len(components)``."""

    nonterminals: FrozenSet[Symbol]
    terminals: FrozenSet[Symbol]
    axiom: Symbol
    components: Tuple[RuleSet, ...]
    lambda_free: bool = True
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(
            self, "components", tuple(tuple(c) for c in self.components)
        )

    @property
    def degree(self) -> int:
        return len(self.components)

    def alphabet(self) -> FrozenSet[Symbol]:
        return self.nonterminals | self.terminals


@dataclass(frozen=True)
class HcdSystem:
    """An externally hybrid CD system: each component carries its own mode."""

    nonterminals: FrozenSet[Symbol]
    terminals: FrozenSet[Symbol]
    axiom: Symbol
    components: Tuple[RuleSet, ...]
    modes: Tuple[Mode, ...]
    lambda_free: bool = True
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(
            self, "components", tuple(tuple(c) for c in self.components)
        )
        object.__setattr__(self, "modes", tuple(self.modes))

    @property
    def degree(self) -> int:
        return len(self.components)

    def alphabet(self) -> FrozenSet[Symbol]:
        return self.nonterminals | self.terminals


@dataclass(frozen=True)
class ProgrammedGrammar:
    """A programmed grammar: labelled rules with success/failure fields.

    ``failure[p]`` transitions are taken in appearance-checking steps, with
    the sentential form left unchanged.  ``nsf_counts``, when present, maps
    each label to the fixed nonterminal Parikh vector of the forms the rule
    is applied to (the function f of the nonterminal separation form).
    """

    nonterminals: FrozenSet[Symbol]
    terminals: FrozenSet[Symbol]
    axiom: Symbol
    labels: Tuple[str, ...]
    rule_of: Mapping[str, Rule]
    success: Mapping[str, FrozenSet[str]]
    failure: Mapping[str, FrozenSet[str]]
    lambda_free: bool = True
    nsf_counts: Optional[Mapping[str, Mapping[Symbol, int]]] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "rule_of", dict(self.rule_of))
        object.__setattr__(
            self, "success", {p: frozenset(s) for p, s in self.success.items()}
        )
        object.__setattr__(
            self, "failure", {p: frozenset(s) for p, s in self.failure.items()}
        )
        if self.nsf_counts is not None:
            object.__setattr__(
                self,
                "nsf_counts",
                {p: dict(v) for p, v in self.nsf_counts.items()},
            )

    def alphabet(self) -> FrozenSet[Symbol]:
        return self.nonterminals | self.terminals


Grammar = "CdSystem | HcdSystem | ProgrammedGrammar"


@dataclass(frozen=True)
class Configuration:
    """Derivation state of a programmed grammar: a form plus the next label."""

    form: Form
    label: str


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def parikh(form: Form, over: Iterable[Symbol]) -> Dict[Symbol, int]:
    """Occurrence counts of each symbol in `over` within `form`."""
    counts = {s: 0 for s in over}
    for s in form:
        if s in counts:
            counts[s] += 1
    return counts


def nonterminal_count(form: Form) -> int:
    return sum(1 for s in form if not s.is_terminal())


def is_terminal_form(form: Form) -> bool:
    return all(s.is_terminal() for s in form)


def _check_rules(rules, nts, ts, lambda_free, where, out):
    alphabet = nts | ts
    for rule in rules:
        if rule.lhs not in nts:
            out.append(
                "lhs-not-nonterminal: %s rule %r has lhs outside the "
                "nonterminal alphabet" % (where, rule)
            )
        for s in rule.rhs:
            if s not in alphabet:
                out.append(
                    "alien-symbol: %s rule %r uses symbol %s not in the "
                    "grammar alphabets" % (where, rule, s.name)
                )
        if lambda_free and rule.is_erasing():
            out.append(
                "erasing-rule: erasing rule in λ-free grammar (%s rule %r)"
                % (where, rule)
            )


def _check_alphabets(g, out):
    nt_names = {s.name for s in g.nonterminals}
    t_names = {s.name for s in g.terminals}
    for name in sorted(nt_names & t_names):
        out.append(
            "alphabet-overlap: name %r is both nonterminal and terminal" % name
        )
    for s in g.nonterminals | g.terminals:
        if not NAME_PATTERN.match(s.name):
            out.append("bad-name: symbol name %r not an identifier" % s.name)
    for s in g.nonterminals:
        if s.is_terminal():
            out.append("kind-mismatch: %s listed as nonterminal" % s.name)
    for s in g.terminals:
        if not s.is_terminal():
            out.append("kind-mismatch: %s listed as terminal" % s.name)
    if g.axiom not in g.nonterminals:
        out.append("axiom: axiom %s not a nonterminal of the grammar" % g.axiom.name)


def validate(grammar) -> list:
    """Validation report: an empty list iff all type invariants hold.

    Violations are returned as stable ``code: detail`` strings; validation
    never raises and is pure.
    """
    out = []
    if isinstance(grammar, (CdSystem, HcdSystem)):
        _check_alphabets(grammar, out)
        if grammar.degree < 1:
            out.append("degree: degree ≥ 1 required")
        for i, rules in enumerate(grammar.components, start=1):
            _check_rules(
                rules,
                grammar.nonterminals,
                grammar.terminals,
                grammar.lambda_free,
                "component %d" % i,
                out,
            )
        if isinstance(grammar, HcdSystem):
            if len(grammar.modes) != grammar.degree:
                out.append("modes: one mode per component required")
            for i, mode in enumerate(grammar.modes, start=1):
                if not is_in_mode_set_d(mode):
                    out.append(
                        "mode-invalid: component %d mode %s outside the mode set"
                        % (i, mode_text(mode))
                    )
        return out
    if isinstance(grammar, ProgrammedGrammar):
        _check_alphabets(grammar, out)
        if not grammar.labels:
            out.append("labels: at least one label required")
        label_set = set(grammar.labels)
        if len(label_set) != len(grammar.labels):
            out.append("labels: duplicate labels")
        for p in grammar.labels:
            if p not in grammar.rule_of:
                out.append("rule-missing: label %s has no rule" % p)
        _check_rules(
            [grammar.rule_of[p] for p in grammar.labels if p in grammar.rule_of],
            grammar.nonterminals,
            grammar.terminals,
            grammar.lambda_free,
            "programmed",
            out,
        )
        for field_name, mapping in (("succ", grammar.success), ("fail", grammar.failure)):
            for p in grammar.labels:
                if p not in mapping:
                    out.append(
                        "field-missing: %s field not defined for label %s"
                        % (field_name, p)
                    )
                    continue
                for q in mapping[p]:
                    if q not in label_set:
                        out.append(
                            "field-target: %s field of %s names unknown label %s"
                            % (field_name, p, q)
                        )
        if grammar.nsf_counts is not None:
            for p, vec in grammar.nsf_counts.items():
                if p not in label_set:
                    out.append("nsf-counts: unknown label %s" % p)
                    continue
                for sym, c in vec.items():
                    if c < 0:
                        out.append(
                            "nsf-counts: negative count for %s at label %s"
                            % (sym.name, p)
                        )
                rule = grammar.rule_of.get(p)
                if rule is not None and vec.get(rule.lhs, 0) < 1:
                    out.append(
                        "nsf-counts: label %s rewrites %s but its count is 0"
                        % (p, rule.lhs.name)
                    )
        return out
    raise TypeError("not a grammar: %r" % (grammar,))
