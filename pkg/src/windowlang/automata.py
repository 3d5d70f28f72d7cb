"""Finite automata over small explicit alphabets.

All DFAs are complete (an explicit sink is added wherever a construction
needs one) and immutable.  States are dense integers; constructions that
produce new automata renumber states in breadth-first order from the
initial state, visiting symbols in alphabet order, so that results are
reproducible across runs.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class AutomatonError(ValueError):
    """Malformed automaton description or misuse of an automaton."""


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple[str, ...]
    initial: int
    finals: frozenset[int]
    delta: tuple[tuple[int, ...], ...]
    pad: str = None  # type: ignore[assignment]  # defaults to alphabet[0]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "finals", frozenset(int(f) for f in self.finals))
        object.__setattr__(self, "delta", tuple(tuple(int(t) for t in row) for row in self.delta))
        if not self.alphabet:
            raise AutomatonError("empty alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("duplicate alphabet symbols")
        if self.pad is None:
            object.__setattr__(self, "pad", self.alphabet[0])
        if self.pad not in self.alphabet:
            raise AutomatonError(f"pad symbol {self.pad!r} not in alphabet")
        n = len(self.delta)
        if n == 0:
            raise AutomatonError("a DFA needs at least one state")
        if not 0 <= self.initial < n:
            raise AutomatonError(f"initial state {self.initial} out of range")
        if any(not 0 <= f < n for f in self.finals):
            raise AutomatonError("final state out of range")
        k = len(self.alphabet)
        for q, row in enumerate(self.delta):
            if len(row) != k:
                raise AutomatonError(f"incomplete delta: state {q} has {len(row)} of {k} transitions")
            if any(not 0 <= t < n for t in row):
                raise AutomatonError(f"incomplete delta: state {q} has a target out of range")

    @property
    def state_count(self) -> int:
        return len(self.delta)

    @cached_property
    def table(self) -> np.ndarray:
        """Transition table as an int array indexed ``[state, symbol_index]``."""
        t = np.array(self.delta, dtype=np.int64).reshape(self.state_count, len(self.alphabet))
        t.setflags(write=False)
        return t

    @cached_property
    def final_mask(self) -> np.ndarray:
        m = np.zeros(self.state_count, dtype=bool)
        m[list(self.finals)] = True
        m.setflags(write=False)
        return m

    @cached_property
    def symbol_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    @property
    def pad_index(self) -> int:
        return self.symbol_index[self.pad]

    def encode(self, word: Iterable[str]) -> list[int]:
        idx = self.symbol_index
        out = []
        for pos, a in enumerate(word):
            try:
                out.append(idx[a])
            except KeyError:
                raise AutomatonError(f"foreign symbol {a!r} at position {pos}") from None
        return out

    def run(self, word: Iterable[str], start: int | None = None) -> int:
        q = self.initial if start is None else start
        for a in self.encode(word):
            q = self.delta[q][a]
        return q

    def run_indices(self, symbols: Iterable[int], start: int | None = None) -> int:
        q = self.initial if start is None else start
        for a in symbols:
            q = self.delta[q][a]
        return q

    def accepts(self, word: Iterable[str]) -> bool:
        return self.run(word) in self.finals

    def with_initial(self, q: int) -> "Dfa":
        return Dfa(self.alphabet, q, self.finals, self.delta, self.pad)

    def with_finals(self, finals: Iterable[int]) -> "Dfa":
        return Dfa(self.alphabet, self.initial, frozenset(finals), self.delta, self.pad)

    def reachable(self, start: int | None = None) -> list[int]:
        """States reachable from ``start`` in BFS order (symbols in alphabet order)."""
        s = self.initial if start is None else start
        seen = {s}
        order = [s]
        queue = deque([s])
        while queue:
            q = queue.popleft()
            for t in self.delta[q]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "initial": self.initial,
            "finals": sorted(self.finals),
            "delta": [list(row) for row in self.delta],
            "pad": self.pad,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Dfa":
        try:
            alphabet = obj["alphabet"]
            delta = obj["delta"]
        except KeyError as e:
            raise AutomatonError(f"DFA description lacks field {e.args[0]!r}") from None
        for q, row in enumerate(delta):
            if row is None or any(t is None for t in row) or len(row) != len(alphabet):
                raise AutomatonError(f"incomplete delta: state {q}")
        return cls(
            alphabet=tuple(alphabet),
            initial=int(obj.get("initial", 0)),
            finals=frozenset(obj.get("finals", ())),
            delta=tuple(tuple(row) for row in delta),
            pad=obj.get("pad"),
        )

    def __str__(self) -> str:
        lines = [f"Dfa over {{{','.join(self.alphabet)}}}, pad={self.pad!r}"]
        for q, row in enumerate(self.delta):
            mark = ("->" if q == self.initial else "  ") + ("*" if q in self.finals else " ")
            moves = " ".join(f"{a}:{t}" for a, t in zip(self.alphabet, row))
            lines.append(f"{mark}{q:3d}  {moves}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton without epsilon moves; transitions are
    ``(source, symbol_index, target)`` triples."""

    alphabet: tuple[str, ...]
    state_count: int
    initials: frozenset[int]
    finals: frozenset[int]
    transitions: frozenset[tuple[int, int, int]] = field(default_factory=frozenset)
    pad: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "initials", frozenset(self.initials))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        n, k = self.state_count, len(self.alphabet)
        for q in self.initials | self.finals:
            if not 0 <= q < n:
                raise AutomatonError(f"state {q} out of range")
        for p, a, q in self.transitions:
            if not (0 <= p < n and 0 <= q < n and 0 <= a < k):
                raise AutomatonError(f"transition {(p, a, q)} out of range")

    def successors(self) -> list[list[list[int]]]:
        succ = [[[] for _ in self.alphabet] for _ in range(self.state_count)]
        for p, a, q in sorted(self.transitions):
            succ[p][a].append(q)
        return succ


def determinize(nfa: Nfa) -> Dfa:
    """Subset construction; the empty subset plays the role of the sink."""
    succ = nfa.successors()
    k = len(nfa.alphabet)
    start = frozenset(nfa.initials)
    index = {start: 0}
    subsets = [start]
    rows: list[list[int]] = []
    i = 0
    while i < len(subsets):
        cur = subsets[i]
        row = []
        for a in range(k):
            nxt = frozenset(q for p in cur for q in succ[p][a])
            if nxt not in index:
                index[nxt] = len(subsets)
                subsets.append(nxt)
            row.append(index[nxt])
        rows.append(row)
        i += 1
    finals = {j for j, s in enumerate(subsets) if s & nfa.finals}
    pad = nfa.pad if nfa.pad is not None else nfa.alphabet[0]
    return Dfa(nfa.alphabet, 0, frozenset(finals), tuple(map(tuple, rows)), pad)


def to_nfa(dfa: Dfa) -> Nfa:
    trans = {(p, a, q) for p, row in enumerate(dfa.delta) for a, q in enumerate(row)}
    return Nfa(dfa.alphabet, dfa.state_count, frozenset([dfa.initial]), dfa.finals, frozenset(trans), dfa.pad)


def reverse(dfa: Dfa) -> Dfa:
    """DFA for the reversal of L(dfa): edge reversal, then subset construction."""
    trans = {(q, a, p) for p, row in enumerate(dfa.delta) for a, q in enumerate(row)}
    nfa = Nfa(dfa.alphabet, dfa.state_count, dfa.finals, frozenset([dfa.initial]), frozenset(trans), dfa.pad)
    return determinize(nfa)


def _canonical(dfa: Dfa) -> Dfa:
    order = dfa.reachable()
    ren = {q: i for i, q in enumerate(order)}
    delta = tuple(tuple(ren[t] for t in dfa.delta[q]) for q in order)
    finals = frozenset(ren[q] for q in order if q in dfa.finals)
    return Dfa(dfa.alphabet, 0, finals, delta, dfa.pad)


def minimize(dfa: Dfa) -> Dfa:
    """Minimal complete DFA, canonically numbered in BFS order.

    Unreachable states are dropped first; the equivalence is computed by
    Moore-style partition refinement, which is plenty for the automaton
    sizes this package deals with.
    """
    dfa = _canonical(dfa)
    n = dfa.state_count
    labels: dict[bool, int] = {}
    block = [labels.setdefault(q in dfa.finals, len(labels)) for q in range(n)]
    count = len(labels)
    while True:
        sigs: dict[tuple, int] = {}
        new = [sigs.setdefault((block[q],) + tuple(block[t] for t in dfa.delta[q]), len(sigs)) for q in range(n)]
        stable = len(sigs) == count
        block, count = new, len(sigs)
        if stable:
            break
    reps = {}
    for q in range(n):
        reps.setdefault(block[q], q)
    delta = tuple(tuple(block[t] for t in dfa.delta[reps[b]]) for b in range(count))
    finals = frozenset(block[q] for q in dfa.finals)
    return _canonical(Dfa(dfa.alphabet, block[dfa.initial], finals, delta, dfa.pad))


BOOLEAN_OPS = ("union", "intersection", "complement", "difference", "xor")


def combine(op: str, a: Dfa, b: Dfa | None = None) -> Dfa:
    """Boolean combination of one or two DFAs (product construction)."""
    if op not in BOOLEAN_OPS:
        raise AutomatonError(f"unknown boolean operation {op!r}")
    if op == "complement":
        if b is not None:
            raise AutomatonError("complement takes a single automaton")
        return Dfa(a.alphabet, a.initial, frozenset(range(a.state_count)) - a.finals, a.delta, a.pad)
    if b is None:
        raise AutomatonError(f"{op} needs two automata")
    if a.alphabet != b.alphabet:
        raise AutomatonError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
    keep = {
        "union": lambda x, y: x or y,
        "intersection": lambda x, y: x and y,
        "difference": lambda x, y: x and not y,
        "xor": lambda x, y: x != y,
    }[op]
    start = (a.initial, b.initial)
    index = {start: 0}
    pairs = [start]
    rows = []
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        row = []
        for s in range(len(a.alphabet)):
            nxt = (a.delta[p][s], b.delta[q][s])
            if nxt not in index:
                index[nxt] = len(pairs)
                pairs.append(nxt)
            row.append(index[nxt])
        rows.append(tuple(row))
        i += 1
    finals = frozenset(j for j, (p, q) in enumerate(pairs) if keep(p in a.finals, q in b.finals))
    return Dfa(a.alphabet, 0, finals, tuple(rows), a.pad)


def is_empty(dfa: Dfa) -> bool:
    return not any(q in dfa.finals for q in dfa.reachable())


def equivalent(a: Dfa, b: Dfa) -> bool:
    return is_empty(combine("xor", a, b))


def is_subset(a: Dfa, b: Dfa) -> bool:
    return is_empty(combine("difference", a, b))


def accepts(dfa: Dfa, word: Iterable[str]) -> bool:
    return dfa.accepts(word)


# ---------------------------------------------------------------------------
# graph structure


@dataclass(frozen=True)
class SccInfo:
    components: tuple[frozenset[int], ...]  # in reverse topological order (sinks first)
    component_of: tuple[int, ...]
    nontrivial: tuple[bool, ...]  # per state: lies on a cycle
    maximal: tuple[bool, ...]  # per component: no transition leaves it


def sccs(dfa: Dfa) -> SccInfo:
    """Strongly connected components via an iterative Tarjan traversal."""
    n = dfa.state_count
    succ = [sorted(set(row)) for row in dfa.delta]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[frozenset[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = set()
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.add(w)
                        if w == v:
                            break
                    comps.append(frozenset(comp))
    comp_of = [0] * n
    for c, comp in enumerate(comps):
        for q in comp:
            comp_of[q] = c
    nontrivial = tuple(len(comps[comp_of[q]]) > 1 or q in dfa.delta[q] for q in range(n))
    maximal = tuple(all(comp_of[t] == c for q in comp for t in dfa.delta[q]) for c, comp in enumerate(comps))
    return SccInfo(tuple(comps), tuple(comp_of), nontrivial, maximal)


# ---------------------------------------------------------------------------
# atom tags


@dataclass(frozen=True)
class SuffixPattern:
    """The language Sigma* w."""

    word: tuple[str, ...]


@dataclass(frozen=True)
class LengthMod:
    """Length language.  With ``modulus``/``residue`` set it denotes exactly
    Sigma^r (Sigma^q)^*; left unset, any length language qualifies."""

    modulus: int | None = None
    residue: int | None = None


@dataclass(frozen=True)
class LeftIdeal:
    pass


@dataclass(frozen=True)
class PrefixFree:
    pass


@dataclass(frozen=True)
class SuffixFree:
    pass


@dataclass(frozen=True)
class BifixFreeLeftIdeal:
    """Sigma* K with K prefix-free and suffix-free."""


AtomTag = SuffixPattern | LengthMod | LeftIdeal | PrefixFree | SuffixFree | BifixFreeLeftIdeal


def suffix_dfa(alphabet: Sequence[str], word: Sequence[str], pad: str | None = None) -> Dfa:
    """DFA for Sigma* w (KMP-style automaton)."""
    alphabet = tuple(alphabet)
    w = list(word)
    idx = {a: i for i, a in enumerate(alphabet)}
    for a in w:
        if a not in idx:
            raise AutomatonError(f"foreign symbol {a!r}")
    m = len(w)
    rows = []
    for j in range(m + 1):
        row = []
        for a in alphabet:
            s = w[:j] + [a]
            k = min(len(s), m)
            while k > 0 and s[len(s) - k:] != w[:k]:
                k -= 1
            row.append(k)
        rows.append(tuple(row))
    return Dfa(alphabet, 0, frozenset([m]), tuple(rows), pad)


def mod_dfa(alphabet: Sequence[str], modulus: int, residue: int, pad: str | None = None) -> Dfa:
    """DFA for Sigma^residue (Sigma^modulus)^*."""
    if modulus < 0 or residue < 0:
        raise AutomatonError("modulus and residue must be non-negative")
    k = len(alphabet)
    if modulus == 0:
        # states 0..residue count the prefix length, residue+1 is the sink
        rows = [tuple([q + 1] * k) for q in range(residue + 1)] + [tuple([residue + 1] * k)]
        return Dfa(tuple(alphabet), 0, frozenset([residue]), tuple(rows), pad)
    # lengths 0..residue-1 on a line, then a cycle of length modulus
    size = residue + modulus
    rows = [tuple([q + 1 if q + 1 < size else residue] * k) for q in range(size)]
    return Dfa(tuple(alphabet), 0, frozenset([residue]), tuple(rows), pad)


def sigma_dfa(alphabet: Sequence[str], pad: str | None = None, *, language: str = "all") -> Dfa:
    """One-state DFA for Sigma* (``language='all'``) or the empty language."""
    k = len(alphabet)
    finals = frozenset([0]) if language == "all" else frozenset()
    return Dfa(tuple(alphabet), 0, finals, (tuple([0] * k),), pad)


def _prefix_free(dfa: Dfa) -> bool:
    reach = set(dfa.reachable())
    for f in dfa.finals & reach:
        # a final state reaching a final state again by a nonempty path
        seen = set()
        queue = deque(dfa.delta[f])
        while queue:
            q = queue.popleft()
            if q in seen:
                continue
            seen.add(q)
            if q in dfa.finals:
                return False
            queue.extend(dfa.delta[q])
    return True


def _is_length_language(dfa: Dfa) -> bool:
    start = (dfa.initial, dfa.initial)
    seen = {start}
    queue = deque([start])
    succ = [sorted(set(row)) for row in dfa.delta]
    while queue:
        p, q = queue.popleft()
        if (p in dfa.finals) != (q in dfa.finals):
            return False
        for s in succ[p]:
            for t in succ[q]:
                if (s, t) not in seen:
                    seen.add((s, t))
                    queue.append((s, t))
    return True


def _is_left_ideal(dfa: Dfa) -> bool:
    return all(is_subset(dfa, dfa.with_initial(dfa.delta[dfa.initial][a])) for a in range(len(dfa.alphabet)))


def shift_dfa(dfa: Dfa) -> Dfa:
    """DFA for Sigma . L(dfa)."""
    n = dfa.state_count
    trans = {(p, a, q) for p, row in enumerate(dfa.delta) for a, q in enumerate(row)}
    trans |= {(n, a, dfa.initial) for a in range(len(dfa.alphabet))}
    nfa = Nfa(dfa.alphabet, n + 1, frozenset([n]), dfa.finals, frozenset(trans), dfa.pad)
    return determinize(nfa)


def suffix_minimal_generator(dfa: Dfa) -> Dfa:
    """min(L): members of L without a proper suffix in L.  For a left ideal
    this is the suffix-free K with L = Sigma* K."""
    # proper suffixes of w lie in L  <=>  w in Sigma+ L = Sigma (Sigma* L)
    closure = left_ideal_closure(dfa)
    return minimize(combine("difference", dfa, shift_dfa(closure)))


def left_ideal_closure(dfa: Dfa) -> Dfa:
    """DFA for Sigma* L(dfa)."""
    n = dfa.state_count
    trans = {(p, a, q) for p, row in enumerate(dfa.delta) for a, q in enumerate(row)}
    trans |= {(n, a, n) for a in range(len(dfa.alphabet))}
    trans |= {(n, a, dfa.delta[dfa.initial][a]) for a in range(len(dfa.alphabet))}
    finals = set(dfa.finals)
    if dfa.initial in dfa.finals:
        finals.add(n)
    nfa = Nfa(dfa.alphabet, n + 1, frozenset([n, dfa.initial]), frozenset(finals), frozenset(trans), dfa.pad)
    return determinize(nfa)


def check_atom_tag(dfa: Dfa, tag: AtomTag) -> bool:
    """Does L(dfa) belong to the language family named by ``tag``?"""
    if isinstance(tag, PrefixFree):
        return _prefix_free(dfa)
    if isinstance(tag, SuffixFree):
        return _prefix_free(reverse(dfa))
    if isinstance(tag, LeftIdeal):
        return _is_left_ideal(dfa)
    if isinstance(tag, LengthMod):
        if tag.modulus is None and tag.residue is None:
            return _is_length_language(dfa)
        return equivalent(dfa, mod_dfa(dfa.alphabet, tag.modulus or 0, tag.residue or 0))
    if isinstance(tag, SuffixPattern):
        return equivalent(dfa, suffix_dfa(dfa.alphabet, tag.word))
    if isinstance(tag, BifixFreeLeftIdeal):
        if not _is_left_ideal(dfa):
            return False
        k = suffix_minimal_generator(dfa)
        return _prefix_free(k) and _prefix_free(reverse(k))
    raise AutomatonError(f"unknown atom tag {tag!r}")


# ---------------------------------------------------------------------------
# windows


def last_n(n: int, stream: Sequence[str], pad: str) -> list[str]:
    """Suffix of length n of ``pad^n . stream``."""
    if n < 0:
        raise ValueError("window size must be non-negative")
    if n == 0:
        return []
    stream = list(stream)
    if len(stream) >= n:
        return stream[len(stream) - n:]
    return [pad] * (n - len(stream)) + stream


# ---------------------------------------------------------------------------
# construction entry points


def build_dfa(description, alphabet: Sequence[str] | None = None, pad: str | None = None) -> Dfa:
    """Build a DFA from a JSON-style table (dict), a path to one, or regex text.

    Regex text needs ``alphabet``.  A string that names an existing ``.json``
    file is loaded as a table.
    """
    from .regex import regex_to_dfa

    if isinstance(description, Dfa):
        return description
    if isinstance(description, dict):
        if "regex" in description:
            return regex_to_dfa(description["regex"], description["alphabet"], description.get("pad", pad))
        return Dfa.from_json(description)
    if isinstance(description, str):
        if description.endswith(".json"):
            with open(description, encoding="utf-8") as fh:
                return build_dfa(json.load(fh), alphabet, pad)
        if alphabet is None:
            raise AutomatonError("regex input needs an alphabet")
        return regex_to_dfa(description, alphabet, pad)
    raise AutomatonError(f"cannot build a DFA from {type(description).__name__}")


def random_dfa(rng: np.random.Generator, states: int, alphabet: Sequence[str], final_prob: float = 0.4) -> Dfa:
    """Uniformly random complete DFA with the given number of states."""
    k = len(alphabet)
    delta = rng.integers(0, states, size=(states, k))
    finals = np.flatnonzero(rng.random(states) < final_prob)
    return Dfa(tuple(alphabet), 0, frozenset(int(f) for f in finals), tuple(map(tuple, delta.tolist())))


def words(alphabet: Sequence[str], max_len: int, min_len: int = 0):
    """All words over ``alphabet`` with length in [min_len, max_len], shortest first."""
    from itertools import product

    for m in range(min_len, max_len + 1):
        for w in product(alphabet, repeat=m):
            yield w
