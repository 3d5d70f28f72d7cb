import math

import numpy as np
import pytest

from conftest import AB, ABC
from windowlang import minimize, regex_to_dfa, reverse
from windowlang.classify import WitnessPattern, extract_witness
from windowlang.harness import (SHAPES, StreamSpec, TrialReport, binomial_margin, estimate_errors, fit_shapes,
                                gen_stream, measure_space_growth, parse_stream, stream_window, verify_bounds,
                                witness_stream)
from windowlang.swa import (SwaError, bernoulli_swa, exact_oracle, loglog_suffix_free_swa, path_summary_swa,
                            trivial_reject_swa)


def oracle_factory(dfa):
    return lambda n, batch=1, seed=None: exact_oracle(dfa, n, batch)


def report(errors, trials, eps=1 / 3):
    return TrialReport(n=1, m=len(errors) - 1, trials=trials, eps=eps, seed=0, errors=errors,
                       truth=[False] * len(errors), failure_ratio=0.0, strict_error=0.0, space_max=3,
                       space_mean=3.0, metadata={})


class TestStreams:
    def test_literal_and_repeat(self):
        assert gen_stream(StreamSpec.literal("abab"), AB) == list("abab")
        assert "".join(gen_stream(StreamSpec.repeat("aaab", 5), AB)) == "aaab" * 5

    def test_parse(self):
        assert parse_stream("uniform:100:7") == StreamSpec.uniform(100, 7)
        assert parse_stream("repeat:ab:3").params == {"block": ["a", "b"], "count": 3}
        spec = parse_stream("witness:LI-Len:m=3,i=2,alpha=101")
        assert spec.params == {"pattern": "LI-Len", "m": 3, "i": 2, "alpha": "101"}
        with pytest.raises(SwaError):
            parse_stream("uniform:many")

    def test_uniform_is_seeded(self):
        a = gen_stream(StreamSpec.uniform(50, 1), ABC)
        assert a == gen_stream(StreamSpec.uniform(50, 1), ABC) != gen_stream(StreamSpec.uniform(50, 2), ABC)

    def test_foreign_symbol(self):
        with pytest.raises(SwaError, match="position 2"):
            gen_stream(StreamSpec.literal("abz"), AB)

    def test_linear_gap_expansion(self):
        words = {"x0": ("a",), "u0": ("b",), "x1": ("a",), "u1": ("a",), "u": ()}
        wp = WitnessPattern("LinearGap", "LI-Len", 1, words)
        stream, n = witness_stream(wp, alpha="10", i=1)
        # w_10 = (x1 u1)(x0 u0), then (x0 u0)^1 u
        assert "".join(stream) == "aa" + "ab" + "ab"
        assert n == 1 + 2 * 2

    def test_linear_gap_separates_alpha(self):
        dfa = regex_to_dfa("a(a|b|c)*", ABC)
        wp = extract_witness(dfa, "LI-Len")
        for alpha in ("0110", "1110"):
            stream, n = witness_stream(wp, alpha=alpha, i=1)
            for i in range(1, len(alpha) + 1):
                s, _ = witness_stream(wp, alpha=alpha, i=i)
                window = s[len(s) - n:]
                assert dfa.accepts(window) == (alpha[i - 1] == "1")

    def test_witness_class_needs_language(self):
        with pytest.raises(SwaError):
            gen_stream(StreamSpec.witness("LI-Len"), ABC)
        dfa = regex_to_dfa("(a|b|c)*a(a|b|c)*", ABC)
        assert stream_window(StreamSpec.witness("ST-SF-Len", m=3), dfa) > 0
        assert stream_window(StreamSpec.uniform(5), dfa) is None


class TestEstimateErrors:
    dfa = regex_to_dfa("(a|b)*ab", AB)

    def test_exact_oracle_is_error_free(self):
        stream = gen_stream(StreamSpec.uniform(300, 1), AB)
        r = estimate_errors(oracle_factory(self.dfa), self.dfa, 6, stream, trials=10)
        assert max(r.errors) == 0 and r.failure_ratio == 0 and r.strict_error == 0
        assert r.space_max == 6 and r.m == 300 and len(r.truth) == 301

    def test_bernoulli_matches_closed_form(self):
        n, trials = 32, 10_000
        a = minimize(reverse(regex_to_dfa("ab*", AB, pad="b")))
        truth = regex_to_dfa("ab*", AB, pad="b")
        r = estimate_errors(lambda n, batch=1, seed=None: bernoulli_swa(a, n, 1 / (2 * n), seed, batch),
                            truth, n, list("a" + "b" * (n - 1)), trials, seed=2)
        expected = 1 - (1 - 1 / (2 * n)) ** n
        assert expected <= 0.4
        assert abs(r.errors[-1] - expected) <= binomial_margin(expected, trials)

    def test_trivial_reject_counts_hits(self):
        dfa = regex_to_dfa("a*b", ABC)
        n = 60
        stream = list(("a" * (n - 1) + "b") * 6)
        r = estimate_errors(lambda n, batch=1, seed=None: trivial_reject_swa(3, n, 0.1, dfa, batch),
                            dfa, n, stream, trials=1)
        assert r.failure_ratio == pytest.approx(6 / (len(stream) + 1))
        assert r.failure_ratio <= 2 * 3 / n

    def test_independent_of_jobs_and_reproducible(self):
        a = minimize(reverse(regex_to_dfa("ab*", AB, pad="b")))
        truth = regex_to_dfa("ab*", AB, pad="b")
        factory = lambda n, batch=1, seed=None: loglog_suffix_free_swa(a, n, seed, batch)  # noqa: E731
        stream = gen_stream(StreamSpec.uniform(80, 3), AB)
        runs = [estimate_errors(factory, truth, 16, stream, 700, seed=5, jobs=j, chunk=200) for j in (1, 3, 3)]
        assert runs[0].errors == runs[1].errors == runs[2].errors
        assert runs[0].to_json() == runs[1].to_json()

    def test_alphabet_mismatch(self):
        with pytest.raises(SwaError):
            estimate_errors(oracle_factory(regex_to_dfa("a", ABC)), self.dfa, 2, list("ab"), 1)

    def test_serialization(self):
        r = estimate_errors(oracle_factory(self.dfa), self.dfa, 2, list("abab"), trials=2)
        assert TrialReport.from_json(r.to_json()) == r
        rows = r.to_csv().splitlines()
        assert rows[0] == "t,error,truth" and len(rows) == 6
        assert rows[3] == "2,0.0,1"


class TestVerifyBounds:
    def test_zero_errors_pass(self):
        (check,) = verify_bounds(report([0.0] * 5, 1000), error=1 / 3)
        assert check.passed and check.slack > 0

    def test_half_fails(self):
        (check,) = verify_bounds(report([0.0, 0.5, 0.1], 10_000), error=1 / 3)
        assert not check.passed
        assert check.margin == pytest.approx(3 * math.sqrt((1 / 3) * (2 / 3) / 10_000))
        assert check.margin == pytest.approx(0.014, abs=1e-3)

    def test_failure_threshold_is_shifted_for_random_runs(self):
        r = report([0.34, 0.34, 0.0, 0.0], 1000)
        (check,) = verify_bounds(r, failure=0.1)
        assert check.passed and check.observed == 0.0
        (check,) = verify_bounds(r, failure=0.1, deterministic=True)
        assert not check.passed and check.observed == 0.5

    def test_space(self):
        assert verify_bounds(report([0.0], 1), space=3)[0].passed
        assert not verify_bounds(report([0.0], 1), space=2)[0].passed

    def test_loglog_before_amplification(self):
        n = 64
        truth = regex_to_dfa("ab*", AB, pad="b")
        a = minimize(reverse(truth))
        factory = lambda n, batch=1, seed=None: loglog_suffix_free_swa(a, n, seed, batch)  # noqa: E731
        stream = list(("a" + "b" * (n - 1)) * 2 + "ab" * 40)
        r = estimate_errors(factory, truth, n, stream, 10_000, seed=11)
        assert all(c.passed for c in verify_bounds(r, error=0.4))

    def test_no_flakes_across_seeds(self):
        n = 32
        truth = regex_to_dfa("ab*", AB, pad="b")
        a = minimize(reverse(truth))
        factory = lambda n, batch=1, seed=None: loglog_suffix_free_swa(a, n, seed, batch)  # noqa: E731
        stream = list("a" + "b" * (n - 1) + "a" + "b" * 10)
        fails = [s for s in range(20)
                 if not verify_bounds(estimate_errors(factory, truth, n, stream, 2000, seed=s), error=0.4)[0].passed]
        assert fails == []


class TestSpaceGrowth:
    @pytest.mark.parametrize("shape", list(SHAPES))
    def test_fit_recovers_exact_shapes(self, shape):
        ns = [2 ** k for k in range(4, 17)]
        x = np.asarray(ns)
        y = np.ceil(3 + 2 * SHAPES[shape](x)).astype(int)
        best, fits = fit_shapes(ns, y.tolist())
        assert best == shape, fits

    def test_noisy_data_falls_back_to_least_squares(self):
        ns = [2 ** k for k in range(4, 12)]
        y = [k * 3 + (k % 2) * 5 for k in range(4, 12)]
        best, fits = fit_shapes(ns, y)
        assert not any(f["explains"] for f in fits.values())
        assert best == "log2 n"

    def test_measured_families(self):
        dfa = regex_to_dfa("(a|b)*a(a|b)*", AB)
        a = minimize(reverse(dfa))
        ns = [2 ** k for k in range(4, 11)]
        assert measure_space_growth(oracle_factory(dfa), ns, AB, probe_factor=2).best_fit == "n"
        ps = measure_space_growth(lambda n, batch=1, seed=None: path_summary_swa(a, n, batch=batch), ns, AB,
                                  probe_factor=2)
        assert ps.best_fit == "log2 n"
        bern = measure_space_growth(lambda n, batch=1, seed=None: bernoulli_swa(a, n, 0.1, seed, batch), ns, AB,
                                    probe_factor=2)
        assert bern.best_fit == "1"

    def test_ns_must_increase(self):
        with pytest.raises(SwaError):
            measure_space_growth(oracle_factory(regex_to_dfa("a", AB)), [8, 4], AB)
