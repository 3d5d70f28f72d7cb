"""Slow, literal reference computations used to cross-check the fast paths."""
from __future__ import annotations

from collections import deque
from typing import Sequence

import numpy as np

from .automata import Dfa, last_n


def triple_sync_pairs(dfa: Dfa) -> frozenset[tuple[int, int]]:
    """(p, q) such that (p, q, q) is reachable from (p, p, q) by >= 1 steps of
    the triple graph where each component reads its own letter."""
    n = dfa.state_count
    succ = [sorted(set(row)) for row in dfa.delta]
    out = set()
    for p in range(n):
        for q in range(n):
            start = (p, p, q)
            seen = set()
            todo = deque([start])
            while todo:
                a, b, c = todo.popleft()
                for x in succ[a]:
                    for y in succ[b]:
                        for z in succ[c]:
                            node = (x, y, z)
                            if node not in seen:
                                seen.add(node)
                                todo.append(node)
            if (p, q, q) in seen:
                out.add((p, q))
    return frozenset(out)


def per_length_sync_pairs(dfa: Dfa) -> frozenset[tuple[int, int]]:
    """(p, q) with some l in [1, |Q|^3] and words x, y, z of length l such that
    p -x-> p, p -y-> q, q -z-> q; reach sets recomputed for every l."""
    n = dfa.state_count
    out = set()
    for p in range(n):
        for q in range(n):
            reach_p = {p}
            reach_q = {q}
            for _ in range(n ** 3):
                reach_p = {t for s in reach_p for t in dfa.delta[s]}
                reach_q = {t for s in reach_q for t in dfa.delta[s]}
                if p in reach_p and q in reach_p and q in reach_q:
                    out.add((p, q))
                    break
    return frozenset(out)


def brute_ell(dfa_rev: Dfa, stream: Sequence[str], q: int, n: int) -> int | None:
    """inf{k <= n+1 : delta(q, reverse(last_k(stream))) final}, None if no such k."""
    for k in range(n + 2):
        window = last_n(k, stream, dfa_rev.pad)
        if dfa_rev.run(list(reversed(window)), start=q) in dfa_rev.finals:
            return k
    return None


def brute_window_truth(dfa: Dfa, n: int, stream: Sequence[str]) -> np.ndarray:
    return np.array([dfa.accepts(last_n(n, stream[:t], dfa.pad)) for t in range(len(stream) + 1)])
