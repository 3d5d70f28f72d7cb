"""Batch-native sliding-window algorithm instances.

Every instance simulates ``batch`` independent copies of one algorithm for a
fixed window size ``n``.  ``step`` feeds one symbol (by alphabet index) to all
copies, ``query`` returns one boolean per copy and ``space_bits`` the encoding
length of each copy's current state.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import Any, Callable, Iterable, Protocol, Sequence

import numpy as np

from ..automata import Dfa

INF = np.iinfo(np.int64).max // 4


class SwaError(ValueError):
    """Invalid algorithm parameters or violated preconditions."""


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def bits_for(states: int) -> int:
    """Bits needed to name one of ``states`` states."""
    return math.ceil(math.log2(states)) if states > 1 else 0


class SwaInstance(ABC):
    algorithm: str = "abstract"

    def __init__(self, n: int, batch: int, alphabet: Sequence[str], deterministic: bool,
                 params: dict[str, Any] | None = None):
        if n < 0:
            raise SwaError("window size must be non-negative")
        if batch < 1:
            raise SwaError("batch must be positive")
        self.n = n
        self.batch = batch
        self.alphabet = tuple(alphabet)
        self.deterministic = deterministic
        self.params = dict(params or {})
        self._index = {a: i for i, a in enumerate(self.alphabet)}

    @abstractmethod
    def step(self, symbol: int) -> None: ...

    @abstractmethod
    def query(self) -> np.ndarray: ...

    @abstractmethod
    def space_bits(self) -> np.ndarray: ...

    @abstractmethod
    def space_bound(self) -> int:
        """Declared worst-case encoding length of a single copy."""

    @property
    def metadata(self) -> dict[str, Any]:
        return {"algorithm": self.algorithm, "n": self.n, "params": self.params,
                "space_bits_max": self.space_bound()}

    def encode(self, word: Iterable[str]) -> list[int]:
        out = []
        for pos, a in enumerate(word):
            if a not in self._index:
                raise SwaError(f"symbol {a!r} at position {pos} is not in the alphabet")
            out.append(self._index[a])
        return out

    def feed(self, word: Iterable[str]) -> None:
        for a in self.encode(word):
            self.step(a)

    def run(self, symbols: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """Outputs at every instant 0..m, shape (m+1, batch), and max space per copy."""
        out = np.empty((len(symbols) + 1, self.batch), dtype=bool)
        out[0] = self.query()
        space = self.space_bits().copy()
        for t, a in enumerate(symbols, 1):
            self.step(a)
            out[t] = self.query()
            np.maximum(space, self.space_bits(), out=space)
        return out, space


class Factory(Protocol):
    def __call__(self, n: int, batch: int = 1, seed=None) -> SwaInstance: ...


def _full(batch: int, value) -> np.ndarray:
    return np.full(batch, value)


class ExactOracle(SwaInstance):
    """Ring buffer of the last n symbols; answers by running the DFA on it."""

    algorithm = "exact_oracle"

    def __init__(self, dfa: Dfa, n: int, batch: int = 1):
        super().__init__(n, batch, dfa.alphabet, True)
        self.dfa = dfa
        self._buf = np.full(n, dfa.pad_index, dtype=np.int64)
        self._head = 0  # index of the oldest symbol
        self._answer: bool | None = None
        self._bits = n * bits_for(len(dfa.alphabet))

    def step(self, symbol: int) -> None:
        if self.n:
            self._buf[self._head] = symbol
            self._head = (self._head + 1) % self.n
        self._answer = None

    def window(self) -> list[int]:
        return np.concatenate([self._buf[self._head:], self._buf[: self._head]]).tolist()

    def query(self) -> np.ndarray:
        if self._answer is None:
            delta, q = self.dfa.delta, self.dfa.initial
            for a in self.window():
                q = delta[q][a]
            self._answer = q in self.dfa.finals
        return _full(self.batch, self._answer)

    def space_bits(self) -> np.ndarray:
        return _full(self.batch, self._bits)

    def space_bound(self) -> int:
        return self._bits


class Constant(SwaInstance):
    """One-state algorithm with a fixed answer."""

    algorithm = "constant"

    def __init__(self, alphabet: Sequence[str], n: int, answer: bool, batch: int = 1, params=None):
        super().__init__(n, batch, alphabet, True, {"answer": bool(answer), **(params or {})})
        self.answer = bool(answer)

    def step(self, symbol: int) -> None:
        pass

    def query(self) -> np.ndarray:
        return _full(self.batch, self.answer)

    def space_bits(self) -> np.ndarray:
        return _full(self.batch, 0)

    def space_bound(self) -> int:
        return 0


class SuffixComparator(SwaInstance):
    """Decides Sigma* w with a shift register of the last |w| symbols."""

    algorithm = "suffix_comparator"

    def __init__(self, alphabet: Sequence[str], pad: str, word: Sequence[str], n: int, batch: int = 1):
        super().__init__(n, batch, alphabet, True, {"word": "".join(word)})
        self.word = self.encode(word)
        k = len(self.word)
        self._reg = [self._index[pad]] * k
        self._bits = k * bits_for(len(self.alphabet))

    def step(self, symbol: int) -> None:
        if self._reg:
            self._reg.pop(0)
            self._reg.append(symbol)

    def query(self) -> np.ndarray:
        return _full(self.batch, self.n >= len(self.word) and self._reg == self.word)

    def space_bits(self) -> np.ndarray:
        return _full(self.batch, self._bits)

    def space_bound(self) -> int:
        return self._bits


def pad_distance(dfa: Dfa, cap: int | None = None) -> np.ndarray:
    """l(q) = least k with delta(q, pad^k) final, INF if none.

    Values above ``cap`` are saturated to ``cap``.
    """
    table, finals = dfa.table, dfa.final_mask
    dist = np.full(dfa.state_count, INF, dtype=np.int64)
    cur = np.arange(dfa.state_count)
    for k in range(dfa.state_count):
        hit = finals[cur] & (dist == INF)
        dist[hit] = k
        cur = table[cur, dfa.pad_index]
    if cap is not None:
        dist[(dist > cap) & (dist < INF)] = cap
    return dist


def iterate_symbol(dfa: Dfa, q: int, symbol: int, times: int) -> int:
    """delta(q, symbol^times) by repeated squaring of the transition map."""
    f = dfa.table[:, symbol].copy()
    state = np.arange(dfa.state_count)
    while times:
        if times & 1:
            state = f[state]
        f = f[f]
        times >>= 1
    return int(state[q])


def window_truth(dfa: Dfa, n: int, symbols: Sequence[int]) -> np.ndarray:
    """Membership of last_n(x[:t]) for every t in [0, m] (vectorized over t)."""
    m = len(symbols)
    padded = np.concatenate([np.full(n, dfa.pad_index, dtype=np.int64), np.asarray(symbols, dtype=np.int64)])
    starts = np.arange(m + 1)
    states = np.full(m + 1, dfa.initial, dtype=np.int64)
    table = dfa.table
    for k in range(n):
        states = table[states, padded[starts + k]]
    return dfa.final_mask[states]


Truth = Callable[[Sequence[np.ndarray]], np.ndarray]
