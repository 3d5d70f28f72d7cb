import re
from itertools import product

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import AB, ABC, dfas, words_over
from windowlang import Dfa, build_dfa, last_n, minimize, regex_to_dfa, reverse
from windowlang.automata import (AutomatonError, BifixFreeLeftIdeal, LeftIdeal, LengthMod, Nfa, PrefixFree,
                                 SuffixFree, SuffixPattern, check_atom_tag, combine, determinize, equivalent,
                                 is_empty, sccs, words)
from windowlang.regex import RegexSyntaxError


def agrees_with_re(dfa, pattern, alphabet, max_len):
    rx = re.compile(pattern)
    return all(dfa.accepts(w) == bool(rx.fullmatch("".join(w))) for w in words(alphabet, max_len))


class TestRegex:
    def test_a_sigma_star_has_three_states(self):
        dfa = regex_to_dfa("a(a|b|c)*", ABC)
        assert dfa.state_count == 3
        assert agrees_with_re(dfa, "a[abc]*", ABC, 4)

    @pytest.mark.parametrize("rx", ["a*b", "ab*", "(a|b)*ab", "a(a|b)*c|(a|b)*", "a+b+", "((a|b)(a|b))*",
                                    "(ab|ba)+c*"])
    def test_matches_python_re(self, rx):
        assert agrees_with_re(regex_to_dfa(rx, ABC), rx, ABC, 5)

    def test_epsilon_and_empty_tokens(self):
        assert regex_to_dfa("ε", AB).accepts("")
        assert not regex_to_dfa("ε", AB).accepts("a")
        assert is_empty(regex_to_dfa("∅", AB))
        assert is_empty(regex_to_dfa("", AB))
        assert agrees_with_re(regex_to_dfa("a(b|ε)", AB), "ab?", AB, 4)

    @pytest.mark.parametrize("rx,pos", [("a|", 2), ("(a", 2), ("a)", 1), ("*a", 0), ("ad", 1)])
    def test_syntax_errors_carry_positions(self, rx, pos):
        with pytest.raises(RegexSyntaxError) as err:
            regex_to_dfa(rx, AB)
        assert err.value.position == pos


class TestDfa:
    def test_incomplete_delta(self):
        with pytest.raises(AutomatonError, match="incomplete delta"):
            build_dfa({"alphabet": ["a", "b"], "delta": [[0]], "finals": [0]})
        with pytest.raises(AutomatonError, match="incomplete delta"):
            build_dfa({"alphabet": ["a", "b"], "delta": [[0, None]], "finals": [0]})

    def test_foreign_symbol(self, sigma_a):
        with pytest.raises(AutomatonError, match="position 1"):
            sigma_a.accepts("az")

    def test_json_round_trip(self, sigma_a):
        assert build_dfa(sigma_a.to_json()) == sigma_a

    def test_accepts_examples(self, sigma_a):
        assert sigma_a.accepts("ba")
        assert not sigma_a.accepts("")
        assert regex_to_dfa("a(a|b)*c|(a|b)*", ABC).accepts("abc")

    def test_pad_defaults_to_first_symbol(self):
        assert regex_to_dfa("a", "ba").pad == "b"


class TestConstructions:
    def test_determinize_finite_language(self):
        nfa = Nfa(AB, 4, frozenset({0}), frozenset({1, 3}), frozenset({(0, 0, 1), (0, 0, 2), (2, 1, 3)}))
        dfa = determinize(nfa)
        assert {"".join(w) for w in words(AB, 3) if dfa.accepts(w)} == {"a", "ab"}

    def test_determinize_without_initial_states(self):
        assert is_empty(determinize(Nfa(AB, 2, frozenset(), frozenset({1}), frozenset({(0, 0, 1)}))))

    def test_reverse_sigma_a(self, sigma_a):
        assert equivalent(reverse(sigma_a), regex_to_dfa("a(a|b|c)*", ABC))

    def test_minimize_redundant_a_star_b(self):
        # states 0,1 both "before b", 2,3 both "after b", 4 sink
        delta = [[1, 2], [0, 3], [4, 4], [4, 4], [4, 4]]
        dfa = Dfa(AB, 0, {2, 3}, delta)
        assert minimize(dfa).state_count == 3 == nerode_classes(dfa, 6)
        assert minimize(regex_to_dfa("(a|b|c)*", ABC)).state_count == 1

    def test_union_example(self):
        u = combine("union", regex_to_dfa("a*b", ABC), regex_to_dfa("(a|b|c)*a", ABC))
        assert all(u.accepts(w) for w in ("b", "ba", "aab"))
        assert not u.accepts("bb")

    def test_intersection_with_empty(self, sigma_a):
        assert is_empty(combine("intersection", sigma_a, regex_to_dfa("∅", ABC)))

    @given(dfas(), dfas())
    def test_boolean_ops_pointwise(self, a, b):
        b = Dfa(a.alphabet, b.initial, b.finals, b.delta, a.pad)
        ops = {"union": bool.__or__, "intersection": bool.__and__, "difference": lambda x, y: x and not y,
               "xor": bool.__xor__}
        for op, f in ops.items():
            c = combine(op, a, b)
            assert all(c.accepts(w) == f(a.accepts(w), b.accepts(w)) for w in words(AB, 4))
        assert equivalent(combine("complement", combine("complement", a)), a)

    @given(dfas())
    def test_minimize_preserves_language_and_is_minimal(self, dfa):
        m = minimize(dfa)
        assert equivalent(m, dfa)
        assert all(m.accepts(w) == dfa.accepts(w) for w in words(AB, 5))
        assert m.state_count == nerode_classes(dfa, 6)

    @given(dfas())
    def test_reverse_is_an_involution(self, dfa):
        r = reverse(dfa)
        assert all(r.accepts(w) == dfa.accepts(w[::-1]) for w in words(AB, 5))
        assert equivalent(reverse(r), dfa)


def nerode_classes(dfa, depth):
    """Distinct residual signatures of reachable states, probed with words of length <= depth."""
    probes = list(words(dfa.alphabet, depth))
    sigs = {tuple(dfa.run(w, start=q) in dfa.finals for w in probes) for q in dfa.reachable()}
    return len(sigs)


class TestScc:
    def test_a_star_b(self):
        dfa = regex_to_dfa("a*b", AB)
        info = sccs(dfa)
        q0, f = dfa.initial, next(iter(dfa.finals))
        sink = ({0, 1, 2} - {q0, f}).pop()
        assert sorted(map(sorted, info.components)) == [[0], [1], [2]]
        assert [info.nontrivial[q] for q in (q0, f, sink)] == [True, False, True]
        assert [info.maximal[info.component_of[q]] for q in (q0, f, sink)] == [False, False, True]

    @given(dfas(max_states=6))
    def test_against_networkx(self, dfa):
        g = nx.DiGraph()
        g.add_nodes_from(range(dfa.state_count))
        g.add_edges_from((p, q) for p, row in enumerate(dfa.delta) for q in row)
        expected = {frozenset(c) for c in nx.strongly_connected_components(g)}
        info = sccs(dfa)
        assert set(info.components) == expected
        cond = nx.condensation(g)
        for comp in info.components:
            node = cond.graph["mapping"][next(iter(comp))]
            assert info.maximal[info.component_of[next(iter(comp))]] == (cond.out_degree(node) == 0)
        for q in range(dfa.state_count):
            assert info.nontrivial[q] == (len(info.components[info.component_of[q]]) > 1 or g.has_edge(q, q))


class TestAtomTags:
    def test_examples(self):
        assert check_atom_tag(regex_to_dfa("a*b", ABC), PrefixFree())
        ab_star = regex_to_dfa("ab*", ABC)
        assert not check_atom_tag(ab_star, PrefixFree())
        assert check_atom_tag(ab_star, SuffixFree())
        assert check_atom_tag(regex_to_dfa("(a|b|c)*a(a|b|c)*", ABC), LeftIdeal())
        assert check_atom_tag(regex_to_dfa("(a|b)*ab", AB), BifixFreeLeftIdeal())
        assert check_atom_tag(regex_to_dfa("(a|b)*aa", AB), BifixFreeLeftIdeal())
        assert not check_atom_tag(regex_to_dfa("(a|b)*a(a|b)*", AB), BifixFreeLeftIdeal())
        assert check_atom_tag(regex_to_dfa("(a|b|c)*ab", ABC), SuffixPattern(("a", "b")))
        assert check_atom_tag(regex_to_dfa("((a|b)(a|b))*", AB), LengthMod(2, 0))
        assert check_atom_tag(regex_to_dfa("(a|b)((a|b)(a|b)(a|b))*", AB), LengthMod())

    @given(dfas())
    def test_against_brute_force(self, dfa):
        short = {w for w in words(AB, 3) if dfa.accepts(w)}
        if check_atom_tag(dfa, PrefixFree()):
            assert not any(u != v and v[: len(u)] == u for u in short for v in short)
        if check_atom_tag(dfa, SuffixFree()):
            assert not any(u != v and v[len(v) - len(u):] == u for u in short for v in short)
        if check_atom_tag(dfa, LeftIdeal()):
            assert all(dfa.accepts(x + w) for w in short for x in words(AB, 2))


class TestLastN:
    def test_examples(self):
        assert last_n(3, "", "a") == list("aaa")
        assert last_n(2, "abc", "a") == list("bc")
        assert last_n(4, "abc", "b") == list("babc")
        assert last_n(0, "abc", "a") == []

    @given(st.integers(0, 6), words_over(max_size=10))
    def test_is_suffix_of_padded_stream(self, n, w):
        assert "".join(last_n(n, w, "b")) == ("b" * n + w)[len(w):]


def test_window_truth_matches_brute_force():
    from windowlang.oracles import brute_window_truth
    from windowlang.swa import window_truth

    rng = np.random.default_rng(0)
    for rx in ("(a|b)*a", "ab*", "a(a|b)*", "((a|b)(a|b))*"):
        dfa = regex_to_dfa(rx, AB)
        for n in range(5):
            w = "".join(rng.choice(list(AB), size=12))
            assert (window_truth(dfa, n, dfa.encode(w)) == brute_window_truth(dfa, n, w)).all()


def test_words_enumeration():
    assert len(list(words(AB, 3))) == 15
    assert list(product(AB, repeat=0)) == [()]
