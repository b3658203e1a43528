"""Derivation engine: single steps, mode predicate, bounded enumeration.

Enumeration is a breadth-first fixpoint search over sentential forms with
global deduplication.  For λ-free systems with no inner step cap the result
is exactly the generated language intersected with the words of bounded
length, because rule application never shortens a form.  Every enumerated
word can be traced: the engine keeps parent pointers and reconstructs a
step-by-step derivation on demand.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .model import (
    CdSystem,
    Form,
    HcdSystem,
    Mode,
    ProgrammedGrammar,
    Rule,
    RuleSet,
    is_terminal_form,
    mode_step_cap,
    nonterminal_count,
)

# Safety net for cycle detection in unbounded modes when no inner step cap
# was requested; hitting it sets the truncation flag.
_HARD_INNER_CAP = 10000

Word = Tuple[str, ...]


@dataclass(frozen=True)
class Bounds:
    """Desk-scale caps for enumeration.

    ``max_word_len`` caps emitted terminal words, ``max_form_len`` caps the
    sentential forms explored, and ``max_inner_steps`` (optional) caps the
    per-component inner search, needed only for unbounded modes on grammars
    whose components can loop without growing.
    """

    max_word_len: int
    max_form_len: int
    max_inner_steps: Optional[int] = None

    def __post_init__(self):
        if self.max_word_len < 1 or self.max_form_len < 1:
            raise ValueError("bounds must be positive")
        if self.max_form_len < self.max_word_len:
            raise ValueError("max_form_len must be >= max_word_len")

    @classmethod
    def for_words(cls, max_word_len: int, slack: int = 0) -> "Bounds":
        return cls(max_word_len, max_word_len + slack)


@dataclass(frozen=True)
class BoundedLanguage:
    """A finite, λ-normalized, length-lexicographically ordered word set."""

    words: Tuple[Word, ...]
    bounds: Bounds
    lambda_normalized: bool = True
    truncated: bool = False

    def word_set(self) -> frozenset:
        return frozenset(self.words)

    def __contains__(self, word: Word) -> bool:
        return tuple(word) in self.word_set()

    def __len__(self):
        return len(self.words)


def length_lex(words) -> Tuple[Word, ...]:
    return tuple(sorted(set(words), key=lambda w: (len(w), w)))


def make_language(words, bounds: Bounds, truncated: bool = False) -> BoundedLanguage:
    """λ-normalize, order and package a raw word collection."""
    kept = [tuple(w) for w in words if len(w) > 0 and len(w) <= bounds.max_word_len]
    return BoundedLanguage(length_lex(kept), bounds, True, truncated)


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceSegment:
    """One mode-step of a component (CD/HCD) or one programmed step.

    ``forms`` holds the form after each inner rule application.  For
    programmed grammars a segment is a single step; ``appearance_checking``
    marks failure-field steps, whose single form equals the previous one.
    """

    actor: object  # component index (int, 1-based) or label (str)
    forms: Tuple[Form, ...]
    appearance_checking: bool = False


@dataclass(frozen=True)
class DerivationTrace:
    start: Form
    segments: Tuple[TraceSegment, ...]

    def all_forms(self):
        yield self.start
        for seg in self.segments:
            for f in seg.forms:
                yield f

    def final_form(self) -> Form:
        if self.segments:
            return self.segments[-1].forms[-1]
        return self.start

    def steps(self):
        """Flat (actor, form) view, one entry per single derivation step."""
        for seg in self.segments:
            for f in seg.forms:
                yield (seg.actor, f)


def trace_index(trace: DerivationTrace) -> int:
    """Maximum number of nonterminal occurrences in any form of the trace."""
    return max(nonterminal_count(f) for f in trace.all_forms())


# ---------------------------------------------------------------------------
# Single steps and the mode predicate
# ---------------------------------------------------------------------------


def apply_at(form: Form, rule: Rule, position: int) -> Form:
    """Replace the `position`-th occurrence (1-based) of rule.lhs in `form`."""
    if position < 1:
        raise ValueError("occurrence index is 1-based")
    seen = 0
    for i, s in enumerate(form):
        if s == rule.lhs:
            seen += 1
            if seen == position:
                return form[:i] + rule.rhs + form[i + 1 :]
    raise ValueError(
        "occurrence %d of %s not present in form" % (position, rule.lhs.name)
    )


def one_step(form: Form, ruleset: Sequence[Rule]):
    """All forms reachable by one rule application at any occurrence."""
    out = []
    for i, s in enumerate(form):
        if s.is_terminal():
            continue
        for rule in ruleset:
            if rule.lhs == s:
                out.append(form[:i] + rule.rhs + form[i + 1 :])
    return out


def applicable(ruleset: Sequence[Rule], form: Form) -> bool:
    """True iff some rule's lhs occurs in `form`."""
    lhs_set = {r.lhs for r in ruleset}
    return any(s in lhs_set for s in form)


def mode_predicate(f: Mode, m: int, ruleset: Sequence[Rule], y: Form) -> bool:
    """The predicate licensing a component to hand back `y` after m steps."""
    if f.kind == "eq":
        return m == f.k
    if f.kind == "le":
        return m <= f.k
    if f.kind == "ge":
        return m >= f.k
    if f.kind == "*":
        return m >= 0
    if f.kind == "t":
        return not applicable(ruleset, y)
    if f.kind == "and":
        return mode_predicate(f.left, m, ruleset, y) and mode_predicate(
            f.right, m, ruleset, y
        )
    raise ValueError("unknown mode kind %r" % f.kind)


# ---------------------------------------------------------------------------
# Mode steps
# ---------------------------------------------------------------------------


@dataclass
class ModeStepResult:
    """Outcome of one component turn: target forms with witness inner paths.

    ``results[y]`` is the tuple of forms after each inner step of one
    witness derivation x => ... => y (empty tuple when y was accepted with
    zero steps).  ``truncated`` is set when the inner step cap cut off live
    branches before the search stabilized.
    """

    results: Dict[Form, Tuple[Form, ...]]
    truncated: bool = False
    # a live branch exceeded max_form_len; harmless for λ-free grammars
    # (forms never shrink) but a completeness loss otherwise
    length_pruned: bool = False

    def forms(self) -> frozenset:
        return frozenset(self.results)


def mode_step(form: Form, ruleset: Sequence[Rule], f: Mode, bounds: Bounds) -> ModeStepResult:
    """All y with form =>^m y via `ruleset` and P(f, m, ruleset, y) true.

    Exploration over the step count m is exhaustive: it stops when the mode
    bounds m, when no forms of admissible length remain, or when the level
    sets provably cycle.  Only an explicit ``max_inner_steps`` cutoff (or
    the hard safety cap) can truncate, and that is flagged.
    """
    cap = mode_step_cap(f)
    user_cap = bounds.max_inner_steps
    hard_cap = _HARD_INNER_CAP
    results: Dict[Form, Tuple[Form, ...]] = {}
    truncated = False
    length_pruned = False

    # level: form -> witness path (forms after each inner step)
    level: Dict[Form, Tuple[Form, ...]] = {form: ()}
    seen_levels = {}
    m = 0
    while True:
        for y, path in level.items():
            if y not in results and mode_predicate(f, m, ruleset, y):
                results[y] = path
        if cap is not None and m >= cap:
            break
        if user_cap is not None and m >= user_cap:
            if any(one_step(y, ruleset) for y in level):
                truncated = True
            break
        if m >= hard_cap:
            truncated = True
            break
        key = frozenset(level)
        if cap is None:
            if key in seen_levels:
                break  # level sets cycle: no new (form, depth>=k) information
            seen_levels[key] = m
        nxt: Dict[Form, Tuple[Form, ...]] = {}
        for y, path in level.items():
            for z in one_step(y, ruleset):
                if len(z) > bounds.max_form_len:
                    length_pruned = True
                    continue
                if z not in nxt:
                    nxt[z] = path + (z,)
        if not nxt:
            break
        level = nxt
        m += 1
    return ModeStepResult(results, truncated, length_pruned)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


@dataclass
class EnumerationResult:
    language: BoundedLanguage
    traces: Dict[Word, DerivationTrace] = field(default_factory=dict)


def _enumerate_cd_like(components, modes, axiom, bounds, want_traces, lambda_free=True):
    start: Form = (axiom,)
    visited = {start}
    # parent[form] = (previous form, component index, witness inner forms)
    parent = {}
    frontier = deque([start])
    truncated = False
    words = set()
    word_forms = {}
    while frontier:
        x = frontier.popleft()
        for i, (rules, mode) in enumerate(zip(components, modes), start=1):
            step = mode_step(x, rules, mode, bounds)
            truncated = truncated or step.truncated
            if step.length_pruned and not lambda_free:
                truncated = True
            for y, path in step.results.items():
                if y == x or y in visited:
                    continue
                visited.add(y)
                parent[y] = (x, i, path)
                if is_terminal_form(y) and 0 < len(y) <= bounds.max_word_len:
                    word = tuple(s.name for s in y)
                    words.add(word)
                    word_forms[word] = y
                frontier.append(y)
    language = make_language(words, bounds, truncated)
    result = EnumerationResult(language)
    if want_traces:
        for word in language.words:
            segments = []
            form = word_forms[word]
            while form != start:
                prev, actor, path = parent[form]
                segments.append(TraceSegment(actor, tuple(path)))
                form = prev
            segments.reverse()
            result.traces[word] = DerivationTrace(start, tuple(segments))
    return result


def enumerate_cd(system: CdSystem, f: Mode, bounds: Bounds, with_traces: bool = False) -> EnumerationResult:
    """Bounded language of a CD system with every component in mode `f`."""
    return _enumerate_cd_like(
        system.components, [f] * system.degree, system.axiom, bounds, with_traces,
        system.lambda_free,
    )


def enumerate_hcd(system: HcdSystem, bounds: Bounds, with_traces: bool = False) -> EnumerationResult:
    """Bounded language of a hybrid CD system (per-component modes)."""
    return _enumerate_cd_like(
        system.components, system.modes, system.axiom, bounds, with_traces,
        system.lambda_free,
    )


def _programmed_successors(pg: ProgrammedGrammar, form: Form, label: str):
    """Yield (next form, next label, appearance checking flag)."""
    rule = pg.rule_of[label]
    if rule.lhs in form:
        seen = set()
        for i, s in enumerate(form):
            if s == rule.lhs:
                y = form[:i] + rule.rhs + form[i + 1 :]
                if y in seen:
                    continue
                seen.add(y)
                for q in sorted(pg.success[label]):
                    yield y, q, False
    else:
        for q in sorted(pg.failure[label]):
            yield form, q, True


def enumerate_programmed(pg: ProgrammedGrammar, bounds: Bounds, with_traces: bool = False) -> EnumerationResult:
    """Bounded language of a programmed grammar.

    The search starts from (axiom, r) for every label r, per the existential
    over the first label in the language definition, and deduplicates on
    (form, label) pairs.
    """
    start: Form = (pg.axiom,)
    states = deque()
    visited = set()
    parent = {}
    truncated = False
    words = set()
    word_states = {}
    for r in pg.labels:
        st = (start, r)
        visited.add(st)
        states.append(st)
    while states:
        form, label = states.popleft()
        for y, q, ac in _programmed_successors(pg, form, label):
            if len(y) > bounds.max_form_len:
                # a live branch was pruned by form length; only a
                # completeness loss when rules can erase
                truncated = truncated or not pg.lambda_free
                continue
            st = (y, q)
            if st in visited:
                continue
            visited.add(st)
            parent[st] = ((form, label), ac)
            if is_terminal_form(y) and 0 < len(y) <= bounds.max_word_len:
                word = tuple(s.name for s in y)
                if word not in words:
                    words.add(word)
                    word_states[word] = st
            states.append(st)
    language = make_language(words, bounds, truncated)
    result = EnumerationResult(language)
    if with_traces:
        for word in language.words:
            segments = []
            st = word_states[word]
            while st in parent:
                (prev, prev_label), ac = parent[st]
                segments.append(TraceSegment(prev_label, (st[0],), ac))
                st = (prev, prev_label)
            segments.reverse()
            result.traces[word] = DerivationTrace(start, tuple(segments))
    return result


def enumerate_grammar(grammar, bounds: Bounds, mode: Optional[Mode] = None, with_traces: bool = False) -> EnumerationResult:
    """Dispatch enumeration on the grammar kind (mode required for CdSystem)."""
    if isinstance(grammar, CdSystem):
        if mode is None:
            raise ValueError("a CD system needs a derivation mode")
        return enumerate_cd(grammar, mode, bounds, with_traces)
    if isinstance(grammar, HcdSystem):
        return enumerate_hcd(grammar, bounds, with_traces)
    if isinstance(grammar, ProgrammedGrammar):
        return enumerate_programmed(grammar, bounds, with_traces)
    raise TypeError("not a grammar: %r" % (grammar,))


# ---------------------------------------------------------------------------
# Trace validation
# ---------------------------------------------------------------------------


def _is_one_step(x: Form, y: Form, ruleset) -> bool:
    return any(y == z for z in one_step(x, ruleset))


def validate_trace(grammar, trace: DerivationTrace, mode: Optional[Mode] = None) -> list:
    """Re-check a derivation trace against the grammar's step semantics.

    Returns a list of violation strings (empty iff the trace is valid).
    For CD/HCD grammars every segment must be a legal mode-step of its
    component; for programmed grammars the label chaining through success
    and failure fields is verified.
    """
    problems = []
    if isinstance(grammar, (CdSystem, HcdSystem)):
        if isinstance(grammar, CdSystem):
            if mode is None:
                raise ValueError("a CD system needs a derivation mode")
            modes = [mode] * grammar.degree
        else:
            modes = list(grammar.modes)
        current = trace.start
        for n, seg in enumerate(trace.segments):
            if not isinstance(seg.actor, int) or not (1 <= seg.actor <= grammar.degree):
                problems.append("segment %d: bad component index %r" % (n, seg.actor))
                continue
            rules = grammar.components[seg.actor - 1]
            prev = current
            ok = True
            for f in seg.forms:
                if not _is_one_step(prev, f, rules):
                    problems.append(
                        "segment %d: form not reachable in one step of component %d"
                        % (n, seg.actor)
                    )
                    ok = False
                    break
                prev = f
            if ok:
                final = seg.forms[-1] if seg.forms else current
                if not mode_predicate(
                    modes[seg.actor - 1], len(seg.forms), rules, final
                ):
                    problems.append(
                        "segment %d: mode predicate fails for component %d after %d steps"
                        % (n, seg.actor, len(seg.forms))
                    )
                current = final
        return problems
    if isinstance(grammar, ProgrammedGrammar):
        current = trace.start
        for n, seg in enumerate(trace.segments):
            label = seg.actor
            if label not in grammar.rule_of:
                problems.append("segment %d: unknown label %r" % (n, label))
                continue
            if len(seg.forms) != 1:
                problems.append("segment %d: programmed steps are single steps" % n)
                continue
            rule = grammar.rule_of[label]
            y = seg.forms[0]
            if seg.appearance_checking:
                if rule.lhs in current:
                    problems.append(
                        "segment %d: appearance-checking step but %s occurs"
                        % (n, rule.lhs.name)
                    )
                if y != current:
                    problems.append(
                        "segment %d: appearance-checking step changed the form" % n
                    )
            else:
                if not _is_one_step(current, y, [rule]):
                    problems.append(
                        "segment %d: form not one application of %r" % (n, rule)
                    )
            current = y
        # label chaining: step n-1 at label p yields its successor label from
        # sigma(p) when it rewrote and from phi(p) when it appearance-checked
        for n in range(1, len(trace.segments)):
            prev = trace.segments[n - 1]
            this = trace.segments[n]
            field_ = (
                grammar.failure[prev.actor]
                if prev.appearance_checking
                else grammar.success[prev.actor]
            )
            if this.actor not in field_:
                problems.append(
                    "segment %d: label %r not in the %s field of %r"
                    % (
                        n,
                        this.actor,
                        "failure" if prev.appearance_checking else "success",
                        prev.actor,
                    )
                )
        return problems
    raise TypeError("not a grammar: %r" % (grammar,))


# ---------------------------------------------------------------------------
# Index metrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WordIndexResult:
    index: Optional[int]  # None when no derivation was found within bounds
    truncated: bool = False


def _word_index_cd(components, modes, axiom, target: Form, bounds: Bounds) -> WordIndexResult:
    """Min over derivations of the max nonterminal count (minimax search).

    States are (form, active component or 0, steps in the current segment);
    a state is re-expanded only with a strictly smaller max-index, which is
    sound because extending a derivation can only raise its max.
    """
    truncated = False
    caps = []
    for mode in modes:
        cap = mode_step_cap(mode)
        if cap is None:
            cap = bounds.max_inner_steps
            if cap is None:
                cap = _HARD_INNER_CAP
                truncated = True
        caps.append(cap)
    start = ((axiom,), 0, 0)
    best = {start: 1}
    heap = [(1, start)]
    while heap:
        cost, state = heapq.heappop(heap)
        if cost > best.get(state, cost):
            continue
        form, comp, m = state
        if comp == 0:
            if form == target:
                return WordIndexResult(cost, truncated)
            # open a segment with any component
            for i in range(1, len(components) + 1):
                nxt = (form, i, 0)
                if cost < best.get(nxt, cost + 1):
                    best[nxt] = cost
                    heapq.heappush(heap, (cost, nxt))
            continue
        rules = components[comp - 1]
        mode = modes[comp - 1]
        # close the segment if the predicate licenses it
        if mode_predicate(mode, m, rules, form):
            nxt = (form, 0, 0)
            if cost < best.get(nxt, cost + 1):
                best[nxt] = cost
                heapq.heappush(heap, (cost, nxt))
        if m < caps[comp - 1]:
            for y in one_step(form, rules):
                if len(y) > bounds.max_form_len:
                    continue
                ncost = max(cost, nonterminal_count(y))
                nxt = (y, comp, m + 1)
                if ncost < best.get(nxt, ncost + 1):
                    best[nxt] = ncost
                    heapq.heappush(heap, (ncost, nxt))
    return WordIndexResult(None, truncated)


def _word_index_programmed(pg: ProgrammedGrammar, target: Form, bounds: Bounds) -> WordIndexResult:
    start: Form = (pg.axiom,)
    heap = []
    best = {}
    for r in pg.labels:
        st = (start, r)
        best[st] = 1
        heapq.heappush(heap, (1, st))
    found = None
    while heap:
        cost, st = heapq.heappop(heap)
        if cost > best.get(st, cost):
            continue
        form, label = st
        if form == target:
            found = cost if found is None else min(found, cost)
            continue
        for y, q, ac in _programmed_successors(pg, form, label):
            if len(y) > bounds.max_form_len:
                continue
            ncost = max(cost, nonterminal_count(y))
            nxt = (y, q)
            if ncost < best.get(nxt, ncost + 1):
                best[nxt] = ncost
                heapq.heappush(heap, (ncost, nxt))
    return WordIndexResult(found, False)


def word_index(grammar, word: Word, bounds: Bounds, mode: Optional[Mode] = None) -> WordIndexResult:
    """Minimum trace index over all bounded derivations of `word`.

    A ``None`` index means no derivation was found within the bounds; it
    does not prove the word lies outside the language.
    """
    if len(word) > bounds.max_word_len:
        raise ValueError("word longer than max_word_len")
    name_to_sym = {s.name: s for s in grammar.terminals}
    try:
        target = tuple(name_to_sym[n] for n in word)
    except KeyError as e:
        raise ValueError("unknown terminal %s" % e)
    if isinstance(grammar, CdSystem):
        if mode is None:
            raise ValueError("a CD system needs a derivation mode")
        return _word_index_cd(
            grammar.components, [mode] * grammar.degree, grammar.axiom, target, bounds
        )
    if isinstance(grammar, HcdSystem):
        return _word_index_cd(
            grammar.components, list(grammar.modes), grammar.axiom, target, bounds
        )
    if isinstance(grammar, ProgrammedGrammar):
        return _word_index_programmed(grammar, target, bounds)
    raise TypeError("not a grammar: %r" % (grammar,))
