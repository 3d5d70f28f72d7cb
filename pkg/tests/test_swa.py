import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import AB, ABC, dfas, words_over
from windowlang import minimize, regex_to_dfa, reverse
from windowlang.automata import left_ideal_closure
from windowlang.oracles import brute_ell
from windowlang.swa import (QueryMode, SwaError, bernoulli_swa, const_left_ideal_swa, exact_oracle, lb_direct_swa,
                            loglog_suffix_free_swa, mod_prime_swa, path_summary_swa, prime_pool, solve_xi_epsilon,
                            trivial_reject_swa, window_truth)
from windowlang.swa.algorithms import LOGLOG_MIN_N, normalize_prefix_free
from windowlang.swa.base import INF


def rev(rx, alphabet=AB, pad=None):
    return minimize(reverse(regex_to_dfa(rx, alphabet, pad)))


def accept_rate(inst, word):
    inst.feed(word)
    return inst.query().mean()


def sigma(p, trials):
    return math.sqrt(p * (1 - p) / trials)


class TestExactOracle:
    def test_padded_window(self):
        dfa = regex_to_dfa("(a|b|c)*a", ABC)
        inst = exact_oracle(dfa, 3)
        inst.feed("ab")
        assert not inst.query()[0]  # window "aab" ends in b
        inst = exact_oracle(dfa, 2)
        inst.feed("b")
        assert not inst.query()[0]
        inst.feed("a")
        assert inst.query()[0]

    def test_empty_window(self):
        for rx, expected in (("(a|b)*", True), ("a(a|b)*", False)):
            out, _ = exact_oracle(regex_to_dfa(rx, AB), 0).run([0, 1, 1, 0])
            assert (out == expected).all()

    def test_space_is_a_ring_buffer(self):
        inst = exact_oracle(regex_to_dfa("(a|b|c)*a", ABC), 10, batch=3)
        assert inst.space_bound() == 20
        assert (inst.space_bits() == 20).all()
        assert inst.metadata["algorithm"] == "exact_oracle"

    def test_foreign_symbol(self):
        with pytest.raises(SwaError, match="position 2"):
            exact_oracle(regex_to_dfa("a", AB), 2).feed("abz")


class TestPathSummary:
    def test_sigma_a(self):
        inst = path_summary_swa(rev("(a|b)*a", pad="b"), 5)
        inst.feed("b")
        assert inst.value() == INF
        inst.feed("a")
        assert inst.value() == 1
        assert inst.query()[0]

    def test_finals_are_zero(self):
        a = rev("(a|b)*a(a|b)*")
        inst = path_summary_swa(a, 4)
        for s in "abba":
            inst.feed(s)
            assert (inst.ell[list(a.finals)] == 0).all()

    def test_ab_star_exactly_n(self):
        dfa = regex_to_dfa("ab*", AB, pad="b")
        a = minimize(reverse(dfa))
        for n in range(1, 5):
            for m in range(9):
                for w in product(AB, repeat=m):
                    inst = path_summary_swa(a, n, QueryMode.EXACTLY_N)
                    out, _ = inst.run(a.encode(w))
                    assert (out[:, 0] == window_truth(dfa, n, dfa.encode(w))).all()
        inst = path_summary_swa(a, 4, "ExactlyN")
        inst.feed("abbb")
        assert inst.value() == 4 and inst.query()[0]
        inst.feed("b")
        assert not inst.query()[0]

    @given(dfas(), st.integers(0, 5), words_over(max_size=10))
    def test_against_brute_ell(self, dfa, n, w):
        inst = path_summary_swa(dfa, n)
        for t in range(len(w) + 1):
            expected = brute_ell(dfa, w[:t], dfa.initial, n)
            got = inst.value()
            if expected is None:
                assert got in (n + 1, INF)
            else:
                assert got == expected
            if t < len(w):
                inst.feed(w[t])

    @given(dfas(), st.integers(0, 5), words_over(max_size=10))
    def test_at_most_n_decides_the_left_ideal_closure(self, dfa_for_l, n, w):
        closure = left_ideal_closure(dfa_for_l)
        out, _ = path_summary_swa(minimize(reverse(dfa_for_l)), n).run(dfa_for_l.encode(w))
        assert (out[:, 0] == window_truth(closure, n, closure.encode(w))).all()

    def test_space(self):
        a = rev("(a|b)*a(a|b)*")
        assert path_summary_swa(a, 16).space_bound() == a.state_count * math.ceil(math.log2(19))


class TestBernoulli:
    def test_law_at_ell_equal_n(self):
        n, trials = 12, 20_000
        inst = bernoulli_swa(rev("ab*", pad="b"), n, 1 / (2 * n), seed=1, batch=trials)
        p = (23 / 24) ** 12
        assert abs(p - 0.600) < 1e-3
        assert abs(accept_rate(inst, "a" + "b" * (n - 1)) - p) < 4 * sigma(p, trials)

    def test_extremes(self):
        a = rev("ab*", pad="b")
        inst = bernoulli_swa(a, 8, 0.3, seed=0, batch=500)
        assert not inst.query().any()  # l = inf on the pad stream
        inst = bernoulli_swa(rev("(a|b)*"), 8, 0.3, seed=0, batch=500)
        inst.feed("abab")
        assert inst.query().all()  # l = 0

    def test_rejects_bad_beta(self):
        with pytest.raises(SwaError):
            bernoulli_swa(rev("ab*"), 4, 1.5)

    def test_space_is_constant(self):
        a = rev("ab*", pad="b")
        assert {bernoulli_swa(a, n, 1 / (2 * n)).space_bound() for n in (16, 1024, 65536)} == {
            a.state_count - len(a.finals)}

    def test_seed_reproducible(self):
        a = rev("ab*", pad="b")
        runs = [bernoulli_swa(a, 32, 1 / 64, seed=7, batch=50).run(a.encode("ab" * 40))[0] for _ in range(2)]
        assert (runs[0] == runs[1]).all()


class TestModPrime:
    def test_pools(self):
        assert prime_pool(2) == (2, 3, 5)
        assert prime_pool(30) == (2, 3, 5, 7, 11, 13, 17, 19, 23)
        assert prime_pool(31)[-1] == 37  # k = 4 -> 12 primes

    def test_ell_equal_n_always_accepts(self):
        n = 40
        inst = mod_prime_swa(rev("ab*", pad="b"), n, seed=3, batch=2000)
        assert accept_rate(inst, "a" + "b" * (n - 1)) == 1.0

    def test_space_depends_on_the_drawn_prime(self):
        a = rev("ab*", pad="b")
        inst = mod_prime_swa(a, 1000, seed=0, batch=200)
        bits = inst.space_bits()
        expected = inst.params["prime_index_bits"] + a.state_count * (np.ceil(np.log2(inst.p)) + 1)
        assert (bits == expected).all()
        assert bits.max() <= inst.space_bound()
        parts = inst.space_breakdown()
        assert (parts["prime_index"] + parts["residues"] == bits).all()


class TestLogLog:
    n = 64
    trials = 10_000

    def inst(self, seed=0):
        return loglog_suffix_free_swa(rev("ab*", pad="b"), self.n, seed=seed, batch=self.trials)

    def test_case_ell_equal_n(self):
        p = (1 - 1 / (2 * self.n)) ** self.n
        rate = accept_rate(self.inst(), "a" + "b" * (self.n - 1))
        assert rate >= 0.6 - 3 * sigma(0.6, self.trials)
        assert abs(rate - p) < 0.02

    def test_case_ell_at_least_2n(self):
        rate = accept_rate(self.inst(1), "a" + "b" * (2 * self.n - 1))
        assert rate <= math.exp(-1) + 3 * sigma(math.exp(-1), self.trials)

    @pytest.mark.parametrize("ell", [1, 30, 63, 65, 96, 127])
    def test_case_ell_below_2n(self, ell):
        rate = accept_rate(self.inst(ell), "a" + "b" * (ell - 1))
        assert rate <= 1 / 3 + 3 * sigma(1 / 3, self.trials)

    def test_requires_suffix_free(self):
        with pytest.raises(SwaError, match="not suffix-free"):
            loglog_suffix_free_swa(rev("a*b"), 64)

    def test_normalized_form(self):
        a = normalize_prefix_free(rev("ab*", pad="b"))
        (f,) = a.finals
        sink = a.delta[f][0]
        assert set(a.delta[f]) == {sink} and set(a.delta[sink]) == {sink}

    def test_small_windows_are_exact(self):
        inst = loglog_suffix_free_swa(rev("ab*", pad="b"), LOGLOG_MIN_N - 1)
        assert inst.deterministic and inst.params["fallback_for"] == "loglog_suffix_free"

    def test_metadata(self):
        meta = self.inst().metadata
        assert meta["algorithm"] == "loglog_suffix_free"
        assert meta["params"]["beta"] == 1 / (2 * self.n)


def bisect(f, lo, hi, tol=1e-13):
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if (f(mid) > 0) == (f(hi) > 0):
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def n1_by_scan(q, phi, xi, eps):
    c = math.log(1 / eps)
    m = max(1, math.ceil(c))
    while not ((1 - xi + 1 / m) * q * (1 + 1 / xi) <= phi and (1 - c / m) ** (xi * m) >= 1 - eps):
        m += 1
    return m


class TestSolveXiEpsilon:
    @pytest.mark.parametrize("q,phi", [(2, 0.1), (3, 0.5), (3, 0.2), (5, 0.05), (1, 0.9)])
    def test_against_independent_solution(self, q, phi):
        xi, eps, n1 = solve_xi_epsilon(q, phi)
        c = phi / (2 * q)
        assert xi == pytest.approx((-c + math.sqrt(c * c + 4)) / 2, abs=1e-9)
        assert (1 - xi) * q * (1 + 1 / xi) < phi / 2
        root = bisect(lambda x: x ** xi + x - 1, 1e-9, 0.5)
        assert eps == pytest.approx((root + 0.5) / 2, abs=1e-9)
        assert eps < 0.5 and eps ** xi + eps > 1
        assert n1 == n1_by_scan(q, phi, xi, eps)

    def test_known_values(self):
        xi, eps, n1 = solve_xi_epsilon(3, 0.5)
        assert xi == pytest.approx(0.9592, abs=1e-4)
        assert n1 == 25
        assert solve_xi_epsilon(2, 0.1) == pytest.approx((0.98758, 0.498917, 81), abs=1e-5)

    def test_monotone_in_phi(self):
        rows = [solve_xi_epsilon(3, phi) for phi in (0.5, 0.2, 0.1, 0.05)]
        assert all(a[0] < b[0] for a, b in zip(rows, rows[1:]))
        assert all(a[2] <= b[2] for a, b in zip(rows, rows[1:]))

    def test_bad_input(self):
        with pytest.raises(SwaError):
            solve_xi_epsilon(3, 0.0)


class TestConstLeftIdeal:
    trials = 4000

    def setup_method(self):
        self.a = rev("(a|b)*a(a|b)*", pad="b")
        self.n = 256

    def test_error_bounds(self):
        inst = const_left_ideal_swa(self.a, self.n, 0.5, seed=0, batch=self.trials)
        xi, eps = inst.params["xi"], inst.params["epsilon"]
        margin = 3 * sigma(eps, self.trials)
        inside = math.floor(xi * self.n)
        assert 1 - accept_rate(inst, "a" + "b" * (inside - 1)) <= eps + margin
        inst = const_left_ideal_swa(self.a, self.n, 0.5, seed=1, batch=self.trials)
        assert accept_rate(inst, "a" + "b" * self.n) <= eps + margin

    def test_small_windows_are_exact(self):
        inst = const_left_ideal_swa(self.a, 4, 0.5)
        assert inst.deterministic and inst.params["fallback_for"] == "const_left_ideal"

    def test_rejects_non_left_ideal(self):
        with pytest.raises(SwaError, match="left ideal"):
            const_left_ideal_swa(rev("ab*"), 64, 0.5)
        with pytest.raises(SwaError, match="empty"):
            const_left_ideal_swa(rev("∅"), 64, 0.5)


class TestFailureRatioAlgorithms:
    def test_trivial_reject_threshold(self):
        dfa = regex_to_dfa("a*b", ABC)
        assert dfa.state_count == 3
        inst = trivial_reject_swa(3, 60, 0.1, dfa)
        assert inst.params["n0"] == 60 and inst.algorithm == "trivial_reject"
        assert trivial_reject_swa(3, 59, 0.1, dfa).params["fallback_for"] == "trivial_reject"

    @pytest.mark.parametrize("n", [60, 100, 257])
    def test_trivial_reject_failure_ratio(self, n):
        dfa = regex_to_dfa("a*b", ABC)
        stream = dfa.encode(("a" * (n - 1) + "b") * 8)
        out, space = trivial_reject_swa(3, n, 0.1, dfa).run(stream)
        assert not out.any() and (space == 0).all()
        assert window_truth(dfa, n, stream).mean() <= 2 * 3 / n

    def test_lb_direct_only_false_positives(self):
        dfa = regex_to_dfa("(a|b)*ab", AB)
        rng = np.random.default_rng(5)
        for n in (40, 80, 160):
            stream = rng.integers(0, 2, size=4 * n).tolist()
            out, _ = lb_direct_swa(dfa, n, 0.2).run(stream)
            truth = window_truth(dfa, n, stream)
            assert not (truth & ~out[:, 0]).any()
            assert (out[:, 0] != truth).mean() <= 0.2

    def test_lb_direct_constant_space(self):
        dfa = regex_to_dfa("(a|b)*ab", AB)
        assert {lb_direct_swa(dfa, n, 0.2).space_bound() for n in (40, 4000, 400000)} == {2}
