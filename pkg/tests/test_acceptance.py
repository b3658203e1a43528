"""Acceptance suite: the nine primary criteria.

Each criterion is one test (or one parametrized test) asserting exact set
equality against an independent closed-form oracle, plus the stated
runtime ceiling.  Criterion 1 is split: the (t & =2) half holds, the
(t & <=2) half is asserted as stated and fails because the two-component
system provably overgenerates in the at-most mode (components may stop
after one step mid-round, e.g. S1 =>(1) A1 A2 =>(2) a1 A1' a2 a3
=>(1) a1 A1 a2 a3 =>(2) a1 a1 a2 a3, a word outside the reference
language); see the repository notes for the analysis.
"""

import random
import time

import pytest

from collections import deque

from gsworkbench import constructions as C
from gsworkbench import verifier as V
from gsworkbench.engine import (
    Bounds,
    applicable,
    enumerate_grammar,
    mode_predicate,
    mode_step,
    validate_trace,
)
from gsworkbench.model import (
    Rule,
    STAR,
    T_MODE,
    at_least,
    at_most,
    between,
    conj,
    exactly,
    nonterminal,
    t_and,
    terminal,
)

from conftest import cf_bounded, make_pg_abc


def words_of(grammar, mode, max_len):
    lang = enumerate_grammar(grammar, Bounds.for_words(max_len), mode=mode).language
    return set(lang.words)


def timed(limit):
    start = time.monotonic()

    def check():
        assert time.monotonic() - start < limit

    return check


# -- criterion 1: Example 1 fidelity ---------------------------------------


def test_criterion_1_example1_exactly():
    done = timed(5.0)
    got = words_of(C.build_example1(2), t_and(exactly(2)), 9)
    assert got == set(V.expand(V.equal_powers(2), 9).words)
    done()


@pytest.mark.xfail(
    strict=True,
    reason="stated criterion does not hold: the Example 1 system "
    "overgenerates under (t & <=2); components may hand back after a "
    "single step, desynchronizing the blocks (see the decisions ledger)",
)
def test_criterion_1_example1_atmost():
    done = timed(5.0)
    got = words_of(C.build_example1(2), t_and(at_most(2)), 9)
    assert got == set(V.expand(V.equal_powers(2), 9).words)
    done()


# -- criterion 2: programmed-grammar differential ---------------------------


@pytest.mark.parametrize("variant,mode", [
    ("exactly", t_and(exactly(2))),
    ("atmost", t_and(at_most(2))),
])
def test_criterion_2_cd_to_programmed(variant, mode):
    done = timed(30.0)
    g = C.build_example1(2)
    pg = C.cd_to_programmed(g, 2, variant)
    assert words_of(pg, None, 9) == words_of(g, mode, 9)
    cert = V.certify_index_bound(pg, 4, Bounds.for_words(9))
    assert cert.passed and not cert.truncated
    done()


# -- criterion 3: block-pump systems ----------------------------------------


def test_criterion_3_snk():
    done = timed(60.0)
    got11 = words_of(C.build_snk_cdgs(1, 1, "exactly"), t_and(exactly(2)), 11)
    assert got11 == set(V.expand(V.block_pump(1), 11).words)
    got21 = words_of(C.build_snk_cdgs(2, 1, "exactly"), t_and(exactly(2)), 13)
    assert got21 == set(V.expand(V.block_pump(2), 13).words)
    g_le = C.build_snk_cdgs(1, 1, "atmost")
    assert g_le.degree == 3
    assert words_of(g_le, t_and(at_most(2)), 11) == got11
    done()


# -- criterion 4: randomized construction round-trips ------------------------


def test_criterion_4_finite_linear_cf_roundtrips():
    rng = random.Random(424242)
    ts = [terminal("a"), terminal("b")]

    for _ in range(20):
        words = {
            tuple(rng.choice("ab") for _ in range(rng.randint(1, 4)))
            for _ in range(rng.randint(1, 5))
        }
        k = rng.randint(1, 3)
        g = C.finite_to_cd1(words, k)
        assert words_of(g, t_and(exactly(k)), 8) == words

    for _ in range(10):
        n = rng.randint(1, 4)
        nts = [nonterminal("N%d" % i) for i in range(n)]
        rules = []
        for nt in nts:
            for _ in range(rng.randint(1, 3)):
                left = tuple(rng.choice(ts) for _ in range(rng.randint(0, 2)))
                right = tuple(rng.choice(ts) for _ in range(rng.randint(0, 2)))
                if rng.random() < 0.6:
                    rhs = left + (rng.choice(nts),) + right
                else:
                    rhs = left + right or (rng.choice(ts),)
                rules.append(Rule(nt, rhs))
        lg = C.LinearGrammar(frozenset(nts), frozenset(ts), nts[0], tuple(rules))
        assert words_of(C.linear_to_cd2(lg), t_and(exactly(1)), 8) == cf_bounded(
            lg.rules, lg.axiom, 8
        )

    S, A, B = nonterminal("S"), nonterminal("A"), nonterminal("B")
    a, b, c = terminal("a"), terminal("b"), terminal("c")
    cf_instances = [
        ((Rule(S, (a, S, b)), Rule(S, (a, b))), (S,), (a, b)),
        ((Rule(S, (a, S, b)), Rule(S, (c,))), (S,), (a, b, c)),
        ((Rule(S, (A, B)), Rule(A, (a, A)), Rule(A, (a,)),
          Rule(B, (b, B)), Rule(B, (b,))), (S, A, B), (a, b)),
        ((Rule(S, (A, A)), Rule(A, (a, A)), Rule(A, (a,))), (S, A), (a,)),
        ((Rule(S, (A, B)), Rule(A, (a, A, b)), Rule(A, (a, b)),
          Rule(B, (b, B, a)), Rule(B, (b, a))), (S, A, B), (a, b)),
    ]
    for rules, nts, terms in cf_instances:
        src = C.IndexedCfGrammar(frozenset(nts), frozenset(terms), S, rules, 2)
        g = C.cf_indexk_to_cd2(src)
        assert words_of(g, t_and(exactly(2)), 8) == cf_bounded(rules, S, 8)


# -- criterion 5: the two corollary grammars ---------------------------------


def test_criterion_5_anbnambm_and_s3():
    got = words_of(C.build_anbnambm(), t_and(exactly(1)), 8)
    assert got == set(V.expand(V.two_block(), 8).words)
    got = words_of(C.build_s3_cd3(), t_and(exactly(2)), 13)
    assert got == set(V.expand(V.block_pump(3), 13).words)


# -- criterion 6: prolongation lattice ---------------------------------------


@pytest.mark.parametrize("ell", [2, 3])
@pytest.mark.parametrize("case", ["example1", "anbnambm", "snk11"])
def test_criterion_6_prolongation(case, ell):
    g, k, max_len = {
        "example1": (C.build_example1(2), 2, 9),
        "anbnambm": (C.build_anbnambm(), 1, 8),
        "snk11": (C.build_snk_cdgs(1, 1, "exactly"), 2, 11),
    }[case]
    base = words_of(g, t_and(exactly(k)), max_len)
    assert words_of(C.prolong(g, ell), t_and(exactly(ell * k)), max_len) == base


# -- criterion 7: NSF simulation ---------------------------------------------


def test_criterion_7_nsf_simulation(pg_abc):
    # depth 20 exhausts every reachable (form, label) state over forms of
    # length <= 9 (the longest such derivation has 14 steps)
    report = V.nsf_check(pg_abc, 20)
    assert report.holds

    g = C.nsf_programmed_to_cdgs(pg_abc, 3, t_and(exactly(3)))
    got = words_of(g, t_and(exactly(3)), 9)
    assert got == {tuple("abc"), tuple("aabbcc"), tuple("aaabbbccc")}

    # instrumented step discipline: explore every reachable inter-turn
    # form; each component either has no applicable rule (0 steps) or can
    # complete a full 3-step turn, and every accepted turn took 3 steps
    mode = t_and(exactly(3))
    bounds = Bounds.for_words(9)
    seen = {(g.axiom,)}
    frontier = deque(seen)
    while frontier:
        x = frontier.popleft()
        for comp in g.components:
            step = mode_step(x, comp, mode, bounds)
            if applicable(comp, x) and len(x) <= bounds.max_form_len - 2:
                assert step.results or step.length_pruned
            for y, path in step.results.items():
                assert len(path) == 3
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)


# -- criterion 8: mode algebra on 1000 random triples ------------------------


def test_criterion_8_mode_algebra():
    rng = random.Random(8)
    nts = [nonterminal(n) for n in "SAB"]
    ts = [terminal(n) for n in "ab"]
    pool = nts + ts

    def random_form():
        return tuple(rng.choice(pool) for _ in range(rng.randint(0, 6)))

    def random_ruleset():
        out = []
        for _ in range(rng.randint(1, 4)):
            rhs = tuple(rng.choice(pool) for _ in range(rng.randint(1, 3)))
            out.append(Rule(rng.choice(nts), rhs))
        return tuple(out)

    def random_basic():
        ctor = rng.choice([at_most, exactly, at_least])
        return ctor(rng.randint(1, 4))

    passes = 0
    for _ in range(1000):
        y, rs, m = random_form(), random_ruleset(), rng.randint(0, 6)
        k = rng.randint(1, 4)
        assert mode_predicate(between(k, k), m, rs, y) == mode_predicate(
            exactly(k), m, rs, y
        )
        f = random_basic() if rng.random() < 0.7 else rng.choice([STAR, T_MODE])
        assert mode_predicate(conj(STAR, f), m, rs, y) == mode_predicate(f, m, rs, y)
        assert mode_predicate(conj(f, STAR), m, rs, y) == mode_predicate(f, m, rs, y)
        inner = random_basic()
        assert mode_predicate(t_and(inner), m, rs, y) == (
            mode_predicate(T_MODE, m, rs, y) and mode_predicate(inner, m, rs, y)
        )
        passes += 1
    assert passes == 1000


# -- criterion 9: every emitted trace re-validates ----------------------------


def corpus():
    pg_abc = make_pg_abc()
    yield C.build_example1(2), t_and(exactly(2)), 9
    yield C.build_example1(2), t_and(at_most(2)), 9
    yield C.cd_to_programmed(C.build_example1(2), 2, "exactly"), None, 9
    yield C.cd_to_programmed(C.build_example1(2), 2, "atmost"), None, 9
    yield C.build_snk_cdgs(1, 1, "exactly"), t_and(exactly(2)), 11
    yield C.build_snk_cdgs(2, 1, "exactly"), t_and(exactly(2)), 13
    yield C.build_snk_cdgs(1, 1, "atmost"), t_and(at_most(2)), 11
    yield C.build_anbnambm(), t_and(exactly(1)), 8
    yield C.build_s3_cd3(), t_and(exactly(2)), 13
    yield C.prolong(C.build_anbnambm(), 2), t_and(exactly(2)), 8
    yield C.prolong(C.build_anbnambm(), 3), t_and(exactly(3)), 8
    yield pg_abc, None, 9
    yield C.nsf_programmed_to_cdgs(pg_abc, 3, t_and(exactly(3))), t_and(exactly(3)), 9


def test_criterion_9_traces_revalidate():
    checked = 0
    for grammar, mode, max_len in corpus():
        res = enumerate_grammar(
            grammar, Bounds.for_words(max_len), mode=mode, with_traces=True
        )
        assert set(res.traces) == set(res.language.words)
        for word, trace in res.traces.items():
            assert validate_trace(grammar, trace, mode) == [], (grammar.name, word)
            assert tuple(s.name for s in trace.final_form()) == word
            checked += 1
    assert checked > 30
