import pytest

from gsworkbench import constructions as C
from gsworkbench import verifier as V
from gsworkbench.engine import Bounds, enumerate_grammar, make_language
from gsworkbench.model import Rule, nonterminal, t_and, exactly, terminal

S = nonterminal("S")
a = terminal("a")
b = terminal("b")


class TestReferenceLanguages:
    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            V.ReferenceLanguage("mystery")

    def test_an_bn_expand(self):
        lang = V.expand(V.an_bn(), 6)
        assert lang.words == (
            ("a", "b"),
            ("a", "a", "b", "b"),
            ("a", "a", "a", "b", "b", "b"),
        )

    def test_equal_powers_expand(self):
        lang = V.expand(V.equal_powers(2), 9)
        assert [len(w) for w in lang.words] == [3, 6, 9]
        assert lang.words[0] == ("a1", "a2", "a3")

    def test_block_pump_expand(self):
        lang = V.expand(V.block_pump(1), 11)
        assert lang.words[0] == ("b", "a", "b", "a", "b")
        assert len(lang.words) == 4

    def test_two_block_expand(self):
        lang = V.expand(V.two_block(), 8)
        assert ("a", "b", "a", "b") in lang.words
        assert ("a", "a", "b", "b", "a", "b") in lang.words

    def test_finite_expand_filters_by_length(self):
        ref = V.finite([("a",), ("a", "a", "a")])
        assert V.expand(ref, 2).words == (("a",),)

    @pytest.mark.parametrize("ref,max_len", [
        (V.an_bn(), 10),
        (V.equal_powers(2), 12),
        (V.equal_powers(3), 12),
        (V.block_pump(1), 13),
        (V.block_pump(3), 19),
        (V.two_block(), 10),
    ])
    def test_member_agrees_with_expand(self, ref, max_len):
        # cross-check the two independent implementations on all words
        # over the alphabet up to a modest length is too big; instead check
        # every expanded word is a member, and mutations are not
        lang = V.expand(ref, max_len)
        assert lang.words
        for w in lang.words:
            assert V.member(ref, w)
            assert not V.member(ref, w + (w[0],)) or len(w) + 1 > max_len
            mutated = (w[-1],) + w[1:]
            if mutated != w:
                assert not V.member(ref, mutated)


class TestBoundedEqual:
    def test_reports_both_directions(self):
        bounds = Bounds(4, 4)
        l1 = make_language([("a",), ("b",)], bounds)
        l2 = make_language([("a",), ("a", "b")], bounds)
        rep = V.bounded_equal(l1, l2)
        assert not rep.equal
        assert rep.lines() == ["MISSING b", "EXTRA a b"]

    def test_rejects_mismatched_caps(self):
        l1 = make_language([("a",)], Bounds(3, 3))
        l2 = make_language([("a",)], Bounds(4, 4))
        with pytest.raises(ValueError):
            V.bounded_equal(l1, l2)

    def test_equal_is_symmetric_empty_report(self):
        l1 = make_language([("a",)], Bounds(3, 3))
        rep = V.bounded_equal(l1, l1)
        assert rep.equal and rep.lines() == []


class TestNsfCheck:
    def test_pg_abc_holds(self, pg_abc):
        rep = V.nsf_check(pg_abc, 16)
        assert rep.holds
        # inferred f matches the hand-written vectors
        A, B, Cn = nonterminal("A"), nonterminal("B"), nonterminal("C")
        vec = rep.inferred_counts["p5"]
        assert vec[B] == 1 and vec[Cn] == 1 and vec[A] == 0

    def test_with_inferred_counts_round_trip(self, pg_abc):
        rep = V.nsf_check(pg_abc, 16)
        pg2 = V.with_inferred_counts(pg_abc, rep)
        assert pg2.nsf_counts is not None
        assert pg2.nsf_counts["p0"][nonterminal("S")] == 1

    def test_detects_duplicate_nonterminal(self):
        from gsworkbench.model import ProgrammedGrammar
        pg = ProgrammedGrammar(
            nonterminals=frozenset({S}),
            terminals=frozenset({a}),
            axiom=S,
            labels=("p", "q"),
            rule_of={"p": Rule(S, (S, S)), "q": Rule(S, (a,))},
            success={"p": frozenset({"q"}), "q": frozenset({"q"})},
            failure={"p": frozenset(), "q": frozenset()},
        )
        rep = V.nsf_check(pg, 8)
        assert any(item == 3 for item, _ in rep.violations)

    def test_detects_varying_parikh_vector(self):
        from gsworkbench.model import ProgrammedGrammar
        A = nonterminal("A")
        # q is applied both to forms with one A and with two As
        pg = ProgrammedGrammar(
            nonterminals=frozenset({S, A}),
            terminals=frozenset({a}),
            axiom=S,
            labels=("p0", "p1", "q"),
            rule_of={
                "p0": Rule(S, (A,)),
                "p1": Rule(A, (A, A)),
                "q": Rule(A, (a,)),
            },
            success={
                "p0": frozenset({"p1", "q"}),
                "p1": frozenset({"q"}),
                "q": frozenset({"q"}),
            },
            failure={p: frozenset() for p in ("p0", "p1", "q")},
        )
        rep = V.nsf_check(pg, 8)
        assert any(item == 2 for item, _ in rep.violations)

    def test_violation_lines_format(self):
        rep = V.NsfReport(violations=[(1, "start symbol appears twice")])
        assert rep.lines() == ["VIOLATION 1 start symbol appears twice"]


class TestCertifyIndexBound:
    def test_example1_programmed_bound(self):
        pg = C.cd_to_programmed(C.build_example1(2), 2, "exactly")
        cert = V.certify_index_bound(pg, 4, Bounds.for_words(9))
        assert cert.passed and not cert.truncated
        assert cert.checked_words == 3

    def test_fails_when_bound_too_small(self, pg_abc):
        cert = V.certify_index_bound(pg_abc, 2, Bounds.for_words(9))
        assert not cert.passed
        assert all(idx == 3 for _, idx in cert.counterexamples)
        assert cert.lines()[0].startswith("VIOLATION index-bound")
