"""Executable acceptance criteria, shared by the test suite and ``windowlang verify``."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .automata import Dfa, minimize, random_dfa, reverse
from .classify import CLASSES, check_witness, classify, extract_witness, synchronized_pairs
from .harness import estimate_errors, measure_space_growth, verify_bounds, witness_stream
from .oracles import per_length_sync_pairs, triple_sync_pairs
from .regex import regex_to_dfa
from .swa import (QueryMode, amplification_copies, amplify, bernoulli_swa, const_left_ideal_swa, exact_oracle,
                  lb_direct_swa, loglog_suffix_free_swa, mod_prime_swa, path_summary_swa, solve_xi_epsilon,
                  trivial_reject_swa)
from .swa.base import window_truth

ABC = ("a", "b", "c")
AB = ("a", "b")
TRIALS = 10_000

# flags in CLASSES order: ST-Len, ST-SF-Len, LI-Len, LB-PF-SF-Len, LI-PF-Len
GOLDENS = {
    "Σ*a": ("(a|b|c)*a", (True, True, True, True, True)),
    "ab*": ("ab*", (False, True, True, True, True)),
    "Σ*aΣ*": ("(a|b|c)*a(a|b|c)*", (False, False, True, False, True)),
    "a*b": ("a*b", (False, False, True, True, True)),
    "a{a,b}*c ∪ {a,b}*": ("a(a|b)*c|(a|b)*", (False, False, False, False, True)),
    "aΣ*": ("a(a|b|c)*", (False, False, False, False, False)),
}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:>2}: {self.title} ({self.seconds:.1f}s / {self.budget:.0f}s) {self.detail}"


def _timed(number: int, title: str, budget: float, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    start = time.perf_counter()
    ok, detail = body()
    seconds = time.perf_counter() - start
    if seconds >= budget:
        detail += "; over time budget"
    return CriterionResult(number, title, ok and seconds < budget, detail, seconds, budget)


def golden_dfas() -> dict[str, Dfa]:
    return {name: regex_to_dfa(rx, ABC) for name, (rx, _) in GOLDENS.items()}


# ---------------------------------------------------------------------------


def _c1() -> tuple[bool, str]:
    wrong = []
    for name, dfa in golden_dfas().items():
        verdict = classify(dfa)
        got = tuple(verdict.classes[c] for c in CLASSES)
        if got != GOLDENS[name][1]:
            wrong.append(f"{name}: {got}")
        for cls, wp in verdict.witnesses.items():
            if check_witness(dfa, wp):
                wrong.append(f"{name}/{cls}: witness invalid")
    return not wrong, "; ".join(wrong) or "6 languages match"


def _c2(count: int = 200, seed: int = 2) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(count):
        k = int(rng.integers(2, 4))
        dfa = minimize(random_dfa(rng, int(rng.integers(1, 7)), ABC[:k]))
        bad += bool(classify(dfa, witnesses=False).lattice_violations())
    return bad == 0, f"{bad}/{count} lattice violations"


def _c3(count: int = 500, seed: int = 3) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(count):
        dfa = random_dfa(rng, int(rng.integers(1, 5)), AB)
        fast = synchronized_pairs(dfa)
        bad += fast != triple_sync_pairs(dfa) or fast != per_length_sync_pairs(dfa)
    return bad == 0, f"{bad}/{count} disagreements"


def _c4() -> tuple[bool, str]:
    worst = 0.0
    ok = (23 / 24) ** 12 >= 0.6
    suffix_free = regex_to_dfa("ab*", AB, pad="b")
    with_empty = regex_to_dfa("ε|ab*", AB, pad="b")
    for n in (12, 64, 256):
        beta = 1 / (2 * n)
        for ell in (0, n // 2, n, 2 * n, None):
            lang = with_empty if ell == 0 else suffix_free
            stream = "b" * n if ell in (0, None) else "a" + "b" * (ell - 1)
            inst = bernoulli_swa(minimize(reverse(lang)), n, beta, seed=(n, 0 if ell is None else ell + 1), batch=TRIALS)
            inst.feed(stream)
            expected = 0.0 if ell is None else (1 - beta) ** ell
            gap = abs(float(inst.query().mean()) - expected)
            worst = max(worst, gap)
            ok &= gap <= 0.02
    return ok, f"max |freq - (1-β)^ℓ| = {worst:.4f}; (23/24)^12 = {(23 / 24) ** 12:.4f}"


def _loglog_streams(n: int) -> list[str]:
    rng = np.random.default_rng(n)
    return [
        "a" + "b" * (5 * n - 1),  # ℓ sweeps 1..5n: all three cases
        ("a" + "b" * (n - 1)) * 5,  # ℓ = n once per period
        "".join(rng.choice(list("ab"), size=5 * n, p=[0.02, 0.98])),
    ]


def _c5() -> tuple[bool, str]:
    dfa = regex_to_dfa("ab*", AB, pad="b")
    rev = minimize(reverse(dfa))
    raw = lambda n, b, r: loglog_suffix_free_swa(rev, n, r, b)  # noqa: E731
    amp = amplify(raw, 0.4, 1 / 3)
    ok, worst_raw, worst_amp = True, 0.0, 0.0
    for n in (16, 64, 256):
        for k, s in enumerate(_loglog_streams(n)):
            r1 = estimate_errors(raw, dfa, n, s, TRIALS, seed=10 * n + k)
            r2 = estimate_errors(amp, dfa, n, s, TRIALS, seed=10 * n + k + 5)
            ok &= verify_bounds(r1, error=0.4, deterministic=False)[0].passed
            ok &= verify_bounds(r2, error=1 / 3, deterministic=False)[0].passed
            worst_raw, worst_amp = max(worst_raw, max(r1.errors)), max(worst_amp, max(r2.errors))
    return ok, f"max error raw {worst_raw:.4f} (bound 0.4), amplified {worst_amp:.4f} (bound 1/3)"


def _c6() -> tuple[bool, str]:
    ok, worst = True, 0.0
    a_star_b = regex_to_dfa("a*b", ABC)
    sigma_ab = regex_to_dfa("(a|b|c)*ab", ABC)
    runs = 0
    for n in (64, 256, 1024):
        rng = np.random.default_rng(n)
        uniform = "".join(rng.choice(list(ABC), size=8 * n))
        cases = [
            (a_star_b, lambda: trivial_reject_swa(a_star_b.state_count, n, 0.1, a_star_b),
             [uniform, ("a" * (n - 1) + "b") * 8]),
            (sigma_ab, lambda: lb_direct_swa(sigma_ab, n, 0.1),
             [uniform, ("a" * (n - 2) + "ab") * 8, "ab" * (4 * n), ("ab" + "c" * (n - 2)) * 8]),
        ]
        for dfa, build, streams in cases:
            bound = 2 * dfa.state_count / n
            for s in streams:
                rep = estimate_errors(lambda nn, b, r: build(), dfa, n, s, trials=1, eps=0.5)
                ok &= verify_bounds(rep, failure=bound, deterministic=True)[0].passed
                worst = max(worst, rep.failure_ratio * n / (2 * dfa.state_count))
                runs += 1
    return ok, f"{runs} runs; worst ratio / (2|Q|/n) = {worst:.3f}"


def _c7() -> tuple[bool, str]:
    phi = 0.1
    dfa = regex_to_dfa("(a|b|c)*a(a|b|c)*", ABC, pad="b")
    rev = minimize(reverse(dfa))
    xi, eps, n1 = solve_xi_epsilon(rev.state_count, phi)
    factory = lambda n, b, r: const_left_ideal_swa(rev, n, phi, r, b)  # noqa: E731
    ok, worst, spaces = True, 0.0, set()
    for n in (n1, 2 * n1, 4 * n1):
        rng = np.random.default_rng(n)
        streams = [
            "".join(rng.choice(list(ABC), size=4 * n)),
            "a" + "b" * (4 * n),
            ("a" + "b" * (n - 1)) * 4,
            ("a" + "c" * (n + n // 2)) * 3,
        ]
        for k, s in enumerate(streams):
            rep = estimate_errors(factory, dfa, n, s, TRIALS, eps=eps, seed=100 * n + k)
            check = verify_bounds(rep, failure=phi, deterministic=False)[0]
            # also at the literal threshold, without the sampling margin
            ok &= check.passed and rep.failure_ratio <= phi
            worst = max(worst, check.observed, rep.failure_ratio)
            spaces.add(rep.space_max)
    ok &= len(spaces) == 1
    return ok, f"n1={n1}, eps={eps:.4f}, worst failure ratio {worst:.4f} <= {phi}; space bits {sorted(spaces)}"


def _c8() -> tuple[bool, str]:
    from itertools import product

    languages = [
        ("(a|b)*a", QueryMode.AT_MOST_N), ("(a|b)*a(a|b)*", QueryMode.AT_MOST_N),
        ("(a|b)*ab", QueryMode.AT_MOST_N), ("(a|b)*(aa|bab)", QueryMode.AT_MOST_N),
        ("ab*", QueryMode.EXACTLY_N), ("ab", QueryMode.EXACTLY_N), ("(a|b)*", QueryMode.AT_MOST_N),
        ("a(ab)*b", QueryMode.EXACTLY_N), ("∅", QueryMode.EXACTLY_N),
    ]
    bad = checked = 0
    for rx, mode in languages:
        for pad in AB:
            dfa = regex_to_dfa(rx, AB, pad=pad)
            rev = minimize(reverse(dfa))
            for n in range(5):
                for w in product(range(2), repeat=10):
                    out, _ = path_summary_swa(rev, n, mode).run(w)
                    truth = window_truth(dfa, n, w)
                    bad += int(np.sum(out[:, 0] != truth))
                    checked += len(truth)
    return bad == 0, f"{bad} disagreements over {checked} instants"


def _c9() -> tuple[bool, str]:
    ns = [2 ** k for k in range(4, 17)]
    ab_star = regex_to_dfa("ab*", AB, pad="b")
    rev = minimize(reverse(ab_star))
    a_star_b = regex_to_dfa("a*b", AB)
    sigma_ab = regex_to_dfa("(a|b)*ab", AB)
    wp = extract_witness(ab_star, "ST-Len")

    def probes(n):
        m = max(1, (n - len(wp.words["u"])) // len(wp.words["x"]) - 1)
        return [witness_stream(wp, m=m, i=1, j=1)[0], witness_stream(wp, m=m, i=m, j=1)[0]]

    runs = {
        "bernoulli": ("1", lambda n, b, r: bernoulli_swa(rev, n, 1 / (2 * n), r, b), None),
        "trivial_reject": ("1", lambda n, b, r: trivial_reject_swa(a_star_b.state_count, n, 0.5, a_star_b, b), None),
        "lb_direct": ("1", lambda n, b, r: lb_direct_swa(sigma_ab, n, 0.5, b), None),
        "path_summary": ("log2 n", lambda n, b, r: path_summary_swa(rev, n, QueryMode.EXACTLY_N, b), None),
        "mod_prime index": ("log2 log2 n", lambda n, b, r: mod_prime_swa(rev, n, r, b),
                            lambda inst: inst.space_breakdown()["prime_index"]),
        "exact_oracle": ("n", lambda n, b, r: exact_oracle(ab_star, n, b), None),
    }
    ok, notes = True, []
    for name, (want, factory, measure) in runs.items():
        g = measure_space_growth(factory, ns, AB, probe_factor=4, seed=9, batch=4, probes=probes, measure=measure)
        ok &= g.best_fit == want
        notes.append(f"{name}: {g.best_fit}")
    return ok, "; ".join(notes)


def _c10() -> tuple[bool, str]:
    bad, count = [], 0
    for name, dfa in golden_dfas().items():
        verdict = classify(dfa, witnesses=False)
        for cls in CLASSES:
            if not verdict.classes[cls]:
                count += 1
                if check_witness(dfa, extract_witness(dfa, cls), max_exp=5):
                    bad.append(f"{name}/{cls}")
    return not bad, f"{count} witnesses, invalid: {bad or 'none'}"


def _c11() -> tuple[bool, str]:
    k = amplification_copies(0.4, 1 / 3)
    dfa = regex_to_dfa("ab*", AB, pad="b")
    rev = minimize(reverse(dfa))
    raw = lambda n, b, r: loglog_suffix_free_swa(rev, n, r, b)  # noqa: E731
    amp = amplify(raw, 0.4, 1 / 3)
    ok, worst = k == 133, 0.0
    for n in (32, 128):
        for j, s in enumerate(_loglog_streams(n)[:2]):
            child = estimate_errors(raw, dfa, n, s, TRIALS, seed=7 * n + j)
            big = estimate_errors(amp, dfa, n, s, TRIALS, seed=7 * n + j + 1)
            child_ok = np.asarray(child.errors) <= 0.4
            margin = 3 * math.sqrt((1 / 3) * (2 / 3) / TRIALS)
            errs = np.asarray(big.errors)[child_ok]
            worst = max(worst, float(errs.max()))
            ok &= bool(np.all(errs <= 1 / 3 + margin))
    return ok, f"k={k}; max post-amplification error {worst:.4f} where child error <= 0.4"


CRITERIA: list[tuple[int, str, float, Callable[[], tuple[bool, str]]]] = [
    (1, "classification goldens", 5, _c1),
    (2, "lattice on 200 random DFAs", 60, _c2),
    (3, "synchronized-pair oracle equivalence", 60, _c3),
    (4, "Bernoulli acceptance law", 120, _c4),
    (5, "loglog algorithm error", 300, _c5),
    (6, "deterministic failure ratio", 60, _c6),
    (7, "constant-space left ideal", 300, _c7),
    (8, "path-summary exactness", 60, _c8),
    (9, "space shapes", 120, _c9),
    (10, "witness soundness", 10, _c10),
    (11, "amplification", 300, _c11),
]


def run_criterion(number: int) -> CriterionResult:
    for num, title, budget, body in CRITERIA:
        if num == number:
            return _timed(num, title, budget, body)
    raise KeyError(number)


def run_all(numbers=None, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    results = []
    for num, *_ in CRITERIA:
        if numbers is None or num in numbers:
            res = run_criterion(num)
            if echo:
                echo(res.line())
            results.append(res)
    return results
