"""The sliding-window algorithms themselves.

Most of them work on a DFA for the reversed language L^R and maintain, per
state q, information about l_w(q): the least k such that the reversed suffix
of length k of the stream leads q into a final state.  The window is in a
left ideal L iff l_w(q0) <= n, and in a suffix-free L iff l_w(q0) == n.
"""
from __future__ import annotations

import math
from enum import Enum

import numpy as np
from scipy.optimize import brentq
from sympy import prime

from ..automata import Dfa, LeftIdeal, PrefixFree, check_atom_tag, is_empty, minimize, reverse
from .base import (INF, Constant, ExactOracle, SwaError, SwaInstance, as_rng, bits_for, iterate_symbol,
                   pad_distance)


class QueryMode(Enum):
    AT_MOST_N = "AtMostN"  # left ideals
    EXACTLY_N = "ExactlyN"  # suffix-free languages


def exact_oracle(dfa_for_L: Dfa, n: int, batch: int = 1) -> ExactOracle:
    return ExactOracle(dfa_for_L, n, batch)


# ---------------------------------------------------------------------------
# path summary


class PathSummary(SwaInstance):
    """Deterministic: keeps l_w(q) for every q, saturated at n+1.

    INF marks "no suffix works"; it is kept apart from the finite cap n+1 but
    both behave the same for queries.
    """

    algorithm = "path_summary"

    def __init__(self, dfa_rev: Dfa, n: int, mode: QueryMode = QueryMode.AT_MOST_N, batch: int = 1):
        mode = QueryMode(mode)
        super().__init__(n, batch, dfa_rev.alphabet, True, {"mode": mode.value, "states": dfa_rev.state_count})
        self.dfa = dfa_rev
        self.mode = mode
        self.ell = pad_distance(dfa_rev, cap=n + 1)
        self._bits = dfa_rev.state_count * math.ceil(math.log2(n + 3))

    def step(self, symbol: int) -> None:
        nxt = self.ell[self.dfa.table[:, symbol]]
        ell = np.where(nxt >= INF, INF, np.minimum(nxt + 1, self.n + 1))
        ell[self.dfa.final_mask] = 0
        self.ell = ell

    def value(self) -> int:
        return int(self.ell[self.dfa.initial])

    def query(self) -> np.ndarray:
        v = self.value()
        hit = v <= self.n if self.mode is QueryMode.AT_MOST_N else v == self.n
        return np.full(self.batch, hit)

    def space_bits(self) -> np.ndarray:
        return np.full(self.batch, self._bits)

    def space_bound(self) -> int:
        return self._bits


def path_summary_swa(dfa_rev: Dfa, n: int, query_mode: QueryMode | str = QueryMode.AT_MOST_N,
                     batch: int = 1) -> PathSummary:
    return PathSummary(dfa_rev, n, query_mode, batch)


# ---------------------------------------------------------------------------
# Bernoulli flags


class Bernoulli(SwaInstance):
    """One flag per state; accepts a window with probability (1-beta)^l_w(q0).

    The per-step coins of each (state, copy) are simulated by sampling the gap
    to the next zeroing coin from a geometric law.  Arrays are state-major.
    """

    algorithm = "bernoulli"

    def __init__(self, dfa_rev: Dfa, n: int, beta: float, batch: int = 1, seed=None):
        if not 0.0 <= beta <= 1.0:
            raise SwaError(f"beta must lie in [0, 1], got {beta}")
        super().__init__(n, batch, dfa_rev.alphabet, False, {"beta": beta})
        self.dfa = dfa_rev
        self.beta = beta
        self.rng = as_rng(seed)
        finals = dfa_rev.final_mask
        self._nonfinal = np.flatnonzero(~finals)
        ell = pad_distance(dfa_rev)
        p = np.where(ell >= INF, 0.0, (1.0 - beta) ** np.minimum(ell, INF - 1).astype(float))
        self.flags = self.rng.random((dfa_rev.state_count, batch)) < p[:, None]
        self.flags[finals] = True
        self.t = 0
        self._next_zero = self._gaps((len(self._nonfinal), batch))

    def _gaps(self, shape) -> np.ndarray:
        if self.beta == 0.0:
            return np.full(shape, INF, dtype=np.int64)
        return self.t + self.rng.geometric(self.beta, size=shape).astype(np.int64)

    def step(self, symbol: int) -> None:
        self.t += 1
        flags = self.flags[self.dfa.table[:, symbol]]
        fire = self._next_zero == self.t
        if fire.any():
            sub = flags[self._nonfinal]
            sub &= ~fire
            flags[self._nonfinal] = sub
            self._next_zero[fire] = self._gaps(int(fire.sum()))
        flags[self.dfa.final_mask] = True
        self.flags = flags

    def query(self) -> np.ndarray:
        return self.flags[self.dfa.initial].copy()

    def space_bits(self) -> np.ndarray:
        return np.full(self.batch, len(self._nonfinal))

    def space_bound(self) -> int:
        return len(self._nonfinal)


def bernoulli_swa(dfa_rev: Dfa, n: int, beta: float, seed=None, batch: int = 1) -> Bernoulli:
    return Bernoulli(dfa_rev, n, beta, batch, seed)


# ---------------------------------------------------------------------------
# residues modulo a random prime


def prime_pool(n: int) -> tuple[int, ...]:
    """First 3k primes, k least with p_1 * ... * p_k >= n."""
    if n < 1:
        raise SwaError("window size must be at least 1")
    k, product = 1, 2
    while product < n:
        k += 1
        product *= prime(k)
    return tuple(int(prime(i)) for i in range(1, 3 * k + 1))


class ModPrime(SwaInstance):
    """Tracks l_w(q) mod p (or "infinite") for a prime p drawn per copy.

    A copy's encoding uses ceil(log2 p) bits per residue plus one finiteness
    bit per state, for its own prime, so space varies across copies;
    ``space_bound`` uses the largest prime.  Residues are stored state-major
    with -1 for an infinite value.
    """

    algorithm = "mod_prime"

    def __init__(self, dfa_rev: Dfa, n: int, batch: int = 1, seed=None):
        pool = prime_pool(n)
        super().__init__(n, batch, dfa_rev.alphabet, False,
                         {"pool_size": len(pool), "p_max": pool[-1],
                          "prime_index_bits": bits_for(len(pool))})
        self.dfa = dfa_rev
        self.rng = as_rng(seed)
        self.pool = pool
        self.p = self.rng.choice(np.asarray(pool, dtype=np.int32), size=batch)
        ell = pad_distance(dfa_rev)
        self.residue = np.where((ell < INF)[:, None], np.minimum(ell, INF - 1)[:, None] % self.p, -1).astype(np.int32)
        self._target = (n % self.p).astype(np.int32)
        q = dfa_rev.state_count
        self._bits = self.params["prime_index_bits"] + q * (np.ceil(np.log2(self.p)).astype(np.int64) + 1)
        self._bound = self.params["prime_index_bits"] + q * (bits_for(pool[-1]) + 1)

    def step(self, symbol: int) -> None:
        r = self.residue[self.dfa.table[:, symbol]]
        finite = r >= 0
        r += finite
        r[r == self.p] = 0
        r[self.dfa.final_mask] = 0
        self.residue = r

    def query(self) -> np.ndarray:
        return self.residue[self.dfa.initial] == self._target

    def space_bits(self) -> np.ndarray:
        return self._bits.copy()

    def space_breakdown(self) -> dict[str, np.ndarray]:
        index = np.full(self.batch, self.params["prime_index_bits"])
        return {"prime_index": index, "residues": self._bits - index}

    def space_bound(self) -> int:
        return self._bound


def mod_prime_swa(dfa_rev: Dfa, n: int, seed=None, batch: int = 1) -> ModPrime:
    return ModPrime(dfa_rev, n, batch, seed)


# ---------------------------------------------------------------------------
# suffix-free languages in O(log log n)

LOGLOG_MIN_N = 12


class Conjunction(SwaInstance):
    """Accepts iff both children accept; space is the plain sum."""

    def __init__(self, algorithm: str, first: SwaInstance, second: SwaInstance, params=None):
        super().__init__(first.n, first.batch, first.alphabet, first.deterministic and second.deterministic, params)
        self.algorithm = algorithm
        self.children = (first, second)

    def step(self, symbol: int) -> None:
        for c in self.children:
            c.step(symbol)

    def query(self) -> np.ndarray:
        return self.children[0].query() & self.children[1].query()

    def space_bits(self) -> np.ndarray:
        return self.children[0].space_bits() + self.children[1].space_bits()

    def space_bound(self) -> int:
        return self.children[0].space_bound() + self.children[1].space_bound()


def normalize_prefix_free(dfa_rev: Dfa) -> Dfa:
    """Minimal DFA for a prefix-free language: one final state whose moves all
    enter the rejecting sink (or no final state when the language is empty)."""
    if not check_atom_tag(dfa_rev, PrefixFree()):
        raise SwaError("the language is not suffix-free (its reversal is not prefix-free)")
    a = minimize(dfa_rev)
    if len(a.finals) > 1:
        raise SwaError("normalization failed: more than one final state")
    for f in a.finals:
        sinks = set(a.delta[f])
        if len(sinks) != 1 or any(a.delta[s] != (next(iter(sinks)),) * len(a.alphabet) for s in sinks):
            raise SwaError("normalization failed: final state does not lead to a sink")
    return a


def loglog_suffix_free_swa(dfa_rev: Dfa, n: int, seed=None, batch: int = 1) -> SwaInstance:
    """Raw error at most 0.4 at every instant; wrap in ``amplify`` for 1/3."""
    a = normalize_prefix_free(dfa_rev)
    if n < LOGLOG_MIN_N:
        oracle = ExactOracle(minimize(reverse(a)), n, batch)
        oracle.params["fallback_for"] = "loglog_suffix_free"
        return oracle
    r_bern, r_mod = as_rng(seed).spawn(2)
    return Conjunction("loglog_suffix_free", Bernoulli(a, n, 1.0 / (2 * n), batch, r_bern),
                       ModPrime(a, n, batch, r_mod), {"beta": 1.0 / (2 * n)})


# ---------------------------------------------------------------------------
# left ideals in constant space with a small failure ratio


def solve_xi_epsilon(q_count: int, phi: float) -> tuple[float, float, int]:
    """Parameters (xi, eps, n1) of the constant-space left-ideal algorithm.

    xi:  (1 - xi) q (1 + 1/xi) < phi/2
    eps: eps^xi + eps > 1 with eps < 1/2
    n1:  least n >= ceil(ln(1/eps)) with (1 - xi + 1/n) q (1 + 1/xi) <= phi
         and (1 - ln(1/eps)/n)^(xi n) >= 1 - eps
    """
    if not 0 < phi < 1 or q_count < 1:
        raise SwaError("need 0 < phi < 1 and q_count >= 1")

    def slack(x):
        return (1 - x) * q_count * (1 + 1 / x) - phi / 2

    xi = brentq(slack, 1e-12, 1.0, xtol=1e-15)
    while slack(xi) >= 0:
        xi = np.nextafter(xi, 1.0)
    if xi >= 1.0:
        raise SwaError("phi too small for double precision")
    root = brentq(lambda x: x ** xi + x - 1, 1e-12, 0.5, xtol=1e-15)
    eps = (root + 0.5) / 2
    c = math.log(1 / eps)

    def good(m: int) -> bool:
        return ((1 - xi + 1 / m) * q_count * (1 + 1 / xi) <= phi
                and (1 - c / m) ** (xi * m) >= 1 - eps)

    lo = max(1, math.ceil(c))
    hi = lo
    while not good(hi):
        hi *= 2
    while lo < hi:  # both conditions are monotone in n
        mid = (lo + hi) // 2
        if good(mid):
            hi = mid
        else:
            lo = mid + 1
    return float(xi), float(eps), int(hi)


def _check_left_ideal(dfa_rev: Dfa) -> Dfa:
    dfa_for_L = minimize(reverse(dfa_rev))
    if is_empty(dfa_for_L):
        raise SwaError("the language is empty")
    if not check_atom_tag(dfa_for_L, LeftIdeal()):
        raise SwaError("the language is not a left ideal")
    return dfa_for_L


def const_left_ideal_swa(dfa_rev: Dfa, n: int, phi: float, seed=None, batch: int = 1) -> SwaInstance:
    """Failure ratio at most phi at error threshold eps (close to 1/2)."""
    dfa_for_L = _check_left_ideal(dfa_rev)
    a = minimize(dfa_rev)
    xi, eps, n1 = solve_xi_epsilon(a.state_count, phi)
    params = {"phi": phi, "xi": xi, "epsilon": eps, "n1": n1}
    if n < n1:
        inst: SwaInstance = ExactOracle(dfa_for_L, n, batch)
        params["fallback_for"] = "const_left_ideal"
    else:
        inst = Bernoulli(a, n, math.log(1 / eps) / n, batch, seed)
        inst.algorithm = "const_left_ideal"
    inst.params.update(params)
    return inst


# ---------------------------------------------------------------------------
# deterministic failure-ratio algorithms


def failure_threshold(q_count: int, phi: float) -> int:
    if not 0 < phi <= 1:
        raise SwaError("phi must lie in (0, 1]")
    return math.ceil(2 * q_count / phi)


def trivial_reject_swa(q_count: int, n: int, phi: float, dfa_for_L: Dfa | None = None,
                       batch: int = 1) -> SwaInstance:
    """Always reject once n >= n0 = ceil(2 q / phi); exact below that."""
    n0 = failure_threshold(q_count, phi)
    if n >= n0:
        if dfa_for_L is None:
            raise SwaError("need an alphabet: pass dfa_for_L")
        inst: SwaInstance = Constant(dfa_for_L.alphabet, n, False, batch, {"n0": n0})
        inst.algorithm = "trivial_reject"
        return inst
    if dfa_for_L is None:
        raise SwaError(f"n < n0 = {n0} needs dfa_for_L for the exact fallback")
    inst = ExactOracle(dfa_for_L, n, batch)
    inst.params.update(n0=n0, fallback_for="trivial_reject")
    return inst


class DirectRun(SwaInstance):
    """Runs the DFA for L from delta(q0, pad^n) over the whole stream."""

    algorithm = "lb_direct"

    def __init__(self, dfa_for_L: Dfa, n: int, batch: int = 1, params=None):
        super().__init__(n, batch, dfa_for_L.alphabet, True, params)
        self.dfa = dfa_for_L
        self.state = iterate_symbol(dfa_for_L, dfa_for_L.initial, dfa_for_L.pad_index, n)
        self._bits = bits_for(dfa_for_L.state_count)

    def step(self, symbol: int) -> None:
        self.state = self.dfa.delta[self.state][symbol]

    def query(self) -> np.ndarray:
        return np.full(self.batch, self.state in self.dfa.finals)

    def space_bits(self) -> np.ndarray:
        return np.full(self.batch, self._bits)

    def space_bound(self) -> int:
        return self._bits


def lb_direct_swa(dfa_for_L: Dfa, n: int, phi: float, batch: int = 1) -> SwaInstance:
    """For L = Sigma* K with K bifix-free: only false positives, failure ratio <= phi."""
    a = minimize(dfa_for_L)
    n0 = failure_threshold(a.state_count, phi)
    if n >= n0:
        return DirectRun(a, n, batch, {"n0": n0})
    inst = ExactOracle(a, n, batch)
    inst.params.update(n0=n0, fallback_for="lb_direct")
    return inst
