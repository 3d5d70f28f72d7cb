"""Space-complexity classification of regular languages in the sliding-window model.

Every check runs on ``A = minimize(reverse(dfa_for_L))``.  Flags are
computed by pattern searches in product graphs of ``A``:

* ``ST-Len``       -- no loop-plus-partner pattern (q1 loops on x, reaches
                      q2 on |y| = |x|, and q1, q2 disagree on finality)
* ``ST-SF-Len``    -- every synchronized pair reachable from q0 is F-consistent
* ``LI-Len``       -- A is well-behaved
* ``LI-PF-Len``    -- A is idempotently well-behaved
* ``LB-PF-SF-Len`` -- every synchronized pair reachable from a positively
                      idempotent state is F-consistent

When a flag is false, :func:`extract_witness` turns the offending pattern into
concrete words for the original language; :func:`check_witness` validates
such words by direct membership tests.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Hashable, Iterable, Iterator

import numpy as np

from .automata import Dfa, minimize, reverse, sccs

CLASSES = ("ST-Len", "ST-SF-Len", "LI-Len", "LB-PF-SF-Len", "LI-PF-Len")
SETTINGS = ("det-zero", "rand-zero", "det-failure", "rand-failure")
VARIANTS = {
    "ST-Len": "LogLogGap",
    "ST-SF-Len": "LogGap",
    "LI-Len": "LinearGap",
    "LB-PF-SF-Len": "FailureLogGap",
    "LI-PF-Len": "FailureLinearGap",
}
# (smaller, larger) pairs of the containment lattice
LATTICE = (
    ("ST-Len", "ST-SF-Len"),
    ("ST-SF-Len", "LI-Len"),
    ("LI-Len", "LI-PF-Len"),
    ("ST-SF-Len", "LB-PF-SF-Len"),
    ("LB-PF-SF-Len", "LI-PF-Len"),
)

Word = tuple[int, ...]


class NoWitness(ValueError):
    pass


# ---------------------------------------------------------------------------
# breadth-first search with word reconstruction


def _bfs(start: Hashable, expand: Callable[[Hashable], Iterable], accept: Callable[[Hashable], bool],
         min_steps: int = 0):
    """Shortest labelled path from ``start`` to a node satisfying ``accept``.

    Returns ``(node, labels)`` or ``None``.  With ``min_steps=1`` the start
    node itself only counts when it is re-entered.
    """
    if min_steps == 0 and accept(start):
        return start, []
    root = object()
    parent: dict = {}
    queue = deque([root])
    while queue:
        cur = queue.popleft()
        node = start if cur is root else cur
        for label, nxt in expand(node):
            if nxt in parent:
                continue
            parent[nxt] = (cur, label)
            if accept(nxt):
                labels = []
                back = nxt
                while back is not root:
                    back, label_ = parent[back]
                    labels.append(label_)
                return nxt, labels[::-1]
            queue.append(nxt)
    return None


def _unzip(labels: list[tuple[int, ...]], arity: int) -> tuple[Word, ...]:
    return tuple(tuple(lab[i] for lab in labels) for i in range(arity))


def _path(dfa: Dfa, src: int, dst: int) -> Word | None:
    """Shortest word leading from src to dst (ties by alphabet order)."""
    delta = dfa.delta
    found = _bfs(src, lambda q: ((a, delta[q][a]) for a in range(len(dfa.alphabet))), lambda q: q == dst)
    return None if found is None else tuple(found[1])


def _reachable_set(dfa: Dfa, roots: Iterable[int]) -> set[int]:
    seen = set()
    for r in roots:
        if r not in seen:
            seen.update(dfa.reachable(r))
    return seen


def _pair_expand(dfa: Dfa, allowed: frozenset[int] | None = None):
    delta, k = dfa.delta, len(dfa.alphabet)

    def expand(node):
        p, q = node
        for a in range(k):
            s = delta[p][a]
            if allowed is not None and s not in allowed:
                continue
            for b in range(k):
                t = delta[q][b]
                if allowed is not None and t not in allowed:
                    continue
                yield (a, b), (s, t)

    return expand


def _inconsistent(dfa: Dfa, p: int, q: int) -> bool:
    return (p in dfa.finals) != (q in dfa.finals)


# ---------------------------------------------------------------------------
# vectorized product-graph reachability
#
# A pair (s, t) is encoded as the node s * n + t.  Successor arrays have one
# row per letter choice: same letter on both components, or independent letters.


def _pair_successors(dfa: Dfa, independent: bool) -> np.ndarray:
    n, tab = dfa.state_count, dfa.table
    s, t = np.divmod(np.arange(n * n), n)
    if independent:
        rows = [tab[s, a] * n + tab[t, b] for a in range(tab.shape[1]) for b in range(tab.shape[1])]
    else:
        rows = [tab[s, a] * n + tab[t, a] for a in range(tab.shape[1])]
    return np.stack(rows)


def _reach(succ: np.ndarray, start: int, min_steps: int = 0, allowed: np.ndarray | None = None) -> np.ndarray:
    """Boolean mask of nodes reachable from ``start`` in at least ``min_steps`` (0 or 1) steps."""
    seen = np.zeros(succ.shape[1], dtype=bool)
    if min_steps == 0:
        seen[start] = True
    frontier = np.array([start])
    while frontier.size:
        nxt = succ[:, frontier].ravel()
        nxt = nxt[~seen[nxt]]
        if allowed is not None:
            nxt = nxt[allowed[nxt]]
        nxt = np.unique(nxt)
        seen[nxt] = True
        frontier = nxt
    return seen


def _inconsistency_mask(dfa: Dfa) -> np.ndarray:
    f = dfa.final_mask
    return (f[:, None] != f[None, :]).ravel()


# ---------------------------------------------------------------------------
# structural primitives


def equal_length_inconsistent_pair(dfa: Dfa, anchored_at: int, allowed: frozenset[int] | None = None,
                                   first: int | None = None):
    """Search the independent-letter pair graph from ``(anchored_at, anchored_at)``
    for an F-inconsistent pair.

    ``allowed`` restricts both components to a state set; ``first`` fixes the
    first component of the target pair.  Returns ``((p, q), (x, y))`` with
    ``|x| = |y|`` shortest, or ``None``.
    """
    n = dfa.state_count
    mask = None
    if allowed is not None:
        inside = np.zeros(n, dtype=bool)
        inside[list(allowed)] = True
        mask = (inside[:, None] & inside[None, :]).ravel()
    seen = _reach(_pair_successors(dfa, True), anchored_at * n + anchored_at, 0, mask)
    target = seen & _inconsistency_mask(dfa)
    if first is not None:
        target = target.reshape(n, n)
        target[np.arange(n) != first] = False
        target = target.ravel()
    if not target.any():
        return None
    found = _bfs(
        (anchored_at, anchored_at),
        _pair_expand(dfa, allowed),
        lambda pq: _inconsistent(dfa, *pq) and (first is None or pq[0] == first),
    )
    pair, labels = found
    return pair, _unzip(labels, 2)


def _idempotence_word(dfa: Dfa, q: int) -> Word | None:
    """Nonempty x with delta(q0, x) = delta(q, x) = q, or None."""
    delta, k = dfa.delta, len(dfa.alphabet)

    def expand(node):
        s, t = node
        for a in range(k):
            yield (a,), (delta[s][a], delta[t][a])

    found = _bfs((dfa.initial, q), expand, lambda st: st == (q, q), min_steps=1)
    return None if found is None else _unzip(found[1], 1)[0]


def positively_idempotent_states(dfa: Dfa) -> frozenset[int]:
    n = dfa.state_count
    succ = _pair_successors(dfa, False)
    return frozenset(q for q in range(n) if _reach(succ, dfa.initial * n + q, 1)[q * n + q])


def _adjacency(dfa: Dfa) -> np.ndarray:
    n = dfa.state_count
    m = np.zeros((n, n), dtype=bool)
    for p, row in enumerate(dfa.delta):
        m[p, list(row)] = True
    return m


def _equal_length_powers(dfa: Dfa) -> list[np.ndarray]:
    """``M^1, M^2, ...`` (boolean) up to the first repetition.

    Every power of the adjacency matrix equals one of the returned ones, so a
    property of "some length l >= 1" can be decided on this finite list.  The
    list is also cut at |Q|^3, the number of nodes of the triple graph, which
    bounds any shortest triple-walk.
    """
    n = dfa.state_count
    m = _adjacency(dfa).astype(np.int64)
    powers = []
    seen = set()
    cur = m.copy()
    while len(powers) < n ** 3:
        key = np.packbits(cur > 0).tobytes()
        if key in seen:
            break
        seen.add(key)
        powers.append(cur > 0)
        cur = ((cur @ m) > 0).astype(np.int64)
    return powers


def _sync_matrix(dfa: Dfa) -> np.ndarray:
    """``sync[p, q]``: is (p, q, q) reachable from (p, p, q) in the
    independent-letter triple graph?  Walks of the three components are
    independent apart from sharing their length l >= 1, so this holds iff some
    l has M^l[p, p], M^l[p, q] and M^l[q, q]."""
    n = dfa.state_count
    sync = np.zeros((n, n), dtype=bool)
    for pw in _equal_length_powers(dfa):
        d = np.diagonal(pw)
        sync |= d[:, None] & pw & d[None, :]
    return sync


def synchronized_pairs(dfa: Dfa) -> frozenset[tuple[int, int]]:
    sync = _sync_matrix(dfa)
    return frozenset((int(p), int(q)) for p, q in zip(*np.nonzero(sync)))


def _word_of_length(dfa: Dfa, src: int, dst: int, length: int) -> Word:
    """Alphabet-least word of exactly ``length`` symbols from src to dst."""
    m = _adjacency(dfa)
    back = [np.zeros(dfa.state_count, dtype=bool)]
    back[0][dst] = True
    for _ in range(length):
        back.append((m & back[-1][None, :]).any(axis=1))
    if not back[length][src]:
        raise NoWitness(f"no word of length {length} from {src} to {dst}")
    word, cur = [], src
    for i in range(length, 0, -1):
        for a, t in enumerate(dfa.delta[cur]):
            if back[i - 1][t]:
                word.append(a)
                cur = t
                break
    return tuple(word)


def _sync_words(dfa: Dfa, p: int, q: int) -> tuple[Word, Word, Word]:
    """Equal-length nonempty x, y, z with p -x-> p, p -y-> q, q -z-> q (shortest length)."""
    for length, pw in enumerate(_equal_length_powers(dfa), start=1):
        if pw[p, p] and pw[p, q] and pw[q, q]:
            return (_word_of_length(dfa, p, p, length), _word_of_length(dfa, p, q, length),
                    _word_of_length(dfa, q, q, length))
    raise NoWitness(f"({p}, {q}) is not synchronized")


@dataclass(frozen=True)
class Misbehaviour:
    """An SCC violating well-behavedness: from ``state``, equal-length words
    ``words[0]``/``words[1]`` stay in the SCC and reach ``pair`` whose first
    entry is non-final and second entry final."""

    component: frozenset[int]
    state: int
    pair: tuple[int, int]
    words: tuple[Word, Word]


def _scc_misbehaviour(dfa: Dfa, comp: frozenset[int]) -> Misbehaviour | None:
    for q in sorted(comp):
        hit = equal_length_inconsistent_pair(dfa, q, allowed=comp)
        if hit is not None:
            (s, t), (u, v) = hit
            if s in dfa.finals:
                s, t, u, v = t, s, v, u
            return Misbehaviour(comp, q, (s, t), (u, v))
    return None


def well_behaved(dfa: Dfa, roots: Iterable[int] | None = None) -> tuple[bool, Misbehaviour | None]:
    """Are all SCCs reachable from ``roots`` (default: the initial state) well-behaved?"""
    info = sccs(dfa)
    reach = _reachable_set(dfa, [dfa.initial] if roots is None else roots)
    for comp in sorted({info.components[info.component_of[q]] for q in reach}, key=min):
        bad = _scc_misbehaviour(dfa, comp)
        if bad is not None:
            return False, bad
    return True, None


# ---------------------------------------------------------------------------
# class flags


def _st_len_pattern(dfa: Dfa):
    """First reachable q1 with x, y (|x| = |y| >= 1) such that q1 -x-> q1,
    q1 -y-> q2 and (q1, q2) is F-inconsistent."""
    n = dfa.state_count
    succ = _pair_successors(dfa, True)
    bad = _inconsistency_mask(dfa).reshape(n, n)
    for q1 in dfa.reachable():
        seen = _reach(succ, q1 * n + q1).reshape(n, n)
        if (seen[q1] & bad[q1]).any():
            return q1, equal_length_inconsistent_pair(dfa, q1, first=q1)
    return None


def _sync_violation(dfa: Dfa, roots: Iterable[int], sync: np.ndarray | None = None):
    if sync is None:
        sync = _sync_matrix(dfa)
    reach = _reachable_set(dfa, roots)
    for p in sorted(reach):
        for q in range(dfa.state_count):
            if sync[p, q] and _inconsistent(dfa, p, q):
                return p, q
    return None


def class_flags(automaton: Dfa) -> dict[str, bool]:
    """Class flags for the language whose *reversal* ``automaton`` recognizes.

    The characterizations hold for any DFA, so ``automaton`` need not be minimal.
    """
    sync = _sync_matrix(automaton)
    idem = positively_idempotent_states(automaton)
    return {
        "ST-Len": _st_len_pattern(automaton) is None,
        "ST-SF-Len": _sync_violation(automaton, [automaton.initial], sync) is None,
        "LI-Len": well_behaved(automaton)[0],
        "LB-PF-SF-Len": _sync_violation(automaton, idem, sync) is None,
        "LI-PF-Len": well_behaved(automaton, idem)[0] if idem else True,
    }


def settings_for(flags: dict[str, bool]) -> dict[str, str]:
    def pick(*rules):
        for cls, verdict in rules:
            if flags[cls]:
                return verdict
        return "Linear"

    return {
        "det-zero": pick(("ST-Len", "Const"), ("LI-Len", "Log")),
        "rand-zero": pick(("ST-Len", "Const"), ("ST-SF-Len", "LogLog"), ("LI-Len", "Log")),
        "det-failure": pick(("LB-PF-SF-Len", "Const"), ("LI-PF-Len", "Log")),
        "rand-failure": pick(("LI-PF-Len", "Const")),
    }


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class WitnessPattern:
    variant: str
    failed_class: str
    case: int
    words: dict[str, tuple[str, ...]] = field(hash=False)

    def text(self, role: str) -> str:
        w = self.words[role]
        return "".join(w) if all(len(a) == 1 for a in w) else " ".join(w)

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "class": self.failed_class,
            "case": self.case,
            "words": {role: self.text(role) for role in self.words},
        }


def _rev(dfa: Dfa, w: Word) -> tuple[str, ...]:
    return tuple(dfa.alphabet[a] for a in reversed(w))


def _loglog_witness(a: Dfa) -> WitnessPattern:
    found = _st_len_pattern(a)
    if found is None:
        raise NoWitness("ST-Len holds")
    q1, ((_, q2), (x, y)) = found
    u = _path(a, a.initial, q1)
    # ultimately periodic run q2 -y-> p1 -y-> p2 ...
    seq = [q2]
    first_seen = {q2: 0}
    while True:
        nxt = a.run_indices(y, seq[-1])
        if nxt in first_seen:
            t, d = first_seen[nxt], len(seq) - first_seen[nxt]
            break
        first_seen[nxt] = len(seq)
        seq.append(nxt)
    k = (t + 1) * d
    q3 = a.run_indices(y * k, q2)
    xk, yk, zk = x * k, x * (k - 1) + y, y * k
    if q1 in a.finals:
        case = 1 if q3 not in a.finals else 3
    else:
        case = 2 if q3 in a.finals else 4
    return WitnessPattern("LogLogGap", "ST-Len", case,
                          {"u": _rev(a, u), "x": _rev(a, xk), "y": _rev(a, yk), "z": _rev(a, zk)})


def _log_witness(a: Dfa) -> WitnessPattern:
    bad = _sync_violation(a, [a.initial])
    if bad is None:
        raise NoWitness("ST-SF-Len holds")
    p, q = bad
    u = _path(a, a.initial, p)
    x, y, z = _sync_words(a, p, q)
    case = 1 if p in a.finals else 2
    return WitnessPattern("LogGap", "ST-SF-Len", case,
                          {"u": _rev(a, u), "x": _rev(a, x), "y": _rev(a, y), "z": _rev(a, z)})


def _return_word(a: Dfa, src: int, dst: int, fallback: Word) -> Word:
    z = _path(a, src, dst)
    assert z is not None  # same SCC
    return z if z else fallback


def _linear_witness(a: Dfa) -> WitnessPattern:
    ok, bad = well_behaved(a)
    if ok:
        raise NoWitness("LI-Len holds")
    q = bad.state
    s = _path(a, a.initial, q)
    y0, y1 = bad.words
    z0 = _path(a, bad.pair[0], q)
    z1 = _path(a, bad.pair[1], q)
    l0, l1 = len(y0) + len(z0), len(y1) + len(z1)
    z0n = z0 + (y0 + z0) * (l1 - 1)
    z1n = z1 + (y1 + z1) * (l0 - 1)
    return WitnessPattern("LinearGap", "LI-Len", 1, {
        "x0": _rev(a, z0n), "u0": _rev(a, y0),
        "x1": _rev(a, z1n), "u1": _rev(a, y1),
        "u": _rev(a, s),
    })


def _failure_linear_witness(a: Dfa) -> WitnessPattern:
    for p in sorted(positively_idempotent_states(a)):
        ok, bad = well_behaved(a, [p])
        if not ok:
            break
    else:
        raise NoWitness("LI-PF-Len holds")
    x = _idempotence_word(a, p)
    q = bad.state
    u = _path(a, p, q)
    y0, y1 = bad.words
    z0 = _return_word(a, bad.pair[0], q, y0)
    z1 = _return_word(a, bad.pair[1], q, y1)
    l0, l1 = len(y0) + len(z0), len(y1) + len(z1)
    k0, k1 = len(x) * l1, len(x) * l0
    z0n = (z0 + y0) * (k0 - 1) + z0
    z1n = (z1 + y1) * (k1 - 1) + z1
    xn = x * (l0 * l1)
    return WitnessPattern("FailureLinearGap", "LI-PF-Len", 1, {
        "x": _rev(a, xn), "y0": _rev(a, y0), "y1": _rev(a, y1),
        "z0": _rev(a, z0n), "z1": _rev(a, z1n), "u": _rev(a, u),
    })


def _failure_log_witness(a: Dfa) -> WitnessPattern:
    sync = _sync_matrix(a)
    for p in sorted(positively_idempotent_states(a)):
        bad = _sync_violation(a, [p], sync)
        if bad is not None:
            break
    else:
        raise NoWitness("LB-PF-SF-Len holds")
    q, r = bad
    x = _idempotence_word(a, p)
    y = _path(a, p, q)
    u, v, w = _sync_words(a, q, r)
    x = x * max(1, len(y))
    lx, lu = len(x), len(u)
    x, u, v, w = x * lu, u * lx, u * (lx - 1) + v, w * lx
    x1, x2 = x[: len(y)], x[len(y):]
    p1 = a.run_indices(x1, p)
    z1, z2, z3 = x2, x1 + x2 + x1, x2 + y
    if _inconsistent(a, p1, q):
        words = (z1, z2, z3 + u, u + u)
    else:
        words = (z1, z2, z3 + v, w + w)
    case = 1 if p1 in a.finals else 2
    return WitnessPattern("FailureLogGap", "LB-PF-SF-Len", case,
                          {role: _rev(a, wd) for role, wd in zip("uvwx", words)})


_EXTRACTORS = {
    "ST-Len": _loglog_witness,
    "ST-SF-Len": _log_witness,
    "LI-Len": _linear_witness,
    "LB-PF-SF-Len": _failure_log_witness,
    "LI-PF-Len": _failure_linear_witness,
}


def extract_witness(dfa_for_L: Dfa, failed_class: str) -> WitnessPattern:
    if failed_class not in _EXTRACTORS:
        raise ValueError(f"unknown class {failed_class!r}; expected one of {CLASSES}")
    return _EXTRACTORS[failed_class](minimize(reverse(dfa_for_L)))


# ---------------------------------------------------------------------------
# witness validation by direct membership


def witness_conditions(dfa: Dfa, wp: WitnessPattern, max_exp: int) -> Iterator[tuple[str, bool]]:
    """Yields (description, holds) for each checked instance."""
    w = {k: tuple(v) for k, v in wp.words.items()}
    acc = dfa.accepts
    rng = range(max_exp + 1)

    def member(word, expected, label):
        return label, acc(word) == expected

    if wp.variant in ("LogGap", "LogLogGap"):
        u, x, y, z = w["u"], w["x"], w["y"], w["z"]
        yield "|x|=|y|=|z|>=1", len(x) == len(y) == len(z) >= 1
        pos = wp.case in (1, 3)
        for i in rng:
            yield member(x * i + u, pos, f"x^{i}u")
            for j in rng:
                word = z * j + y + x * i + u
                if wp.case in (1, 2) or j == 0:
                    yield member(word, not pos, f"z^{j}yx^{i}u")
                else:
                    yield member(word, pos, f"z^{j}yx^{i}u")
    elif wp.variant == "LinearGap":
        x0, u0, x1, u1, u = (w[k] for k in ("x0", "u0", "x1", "u1", "u"))
        yield "|x0|=|x1|>=1", len(x0) == len(x1) >= 1
        yield "|u0|=|u1|>=1", len(u0) == len(u1) >= 1
        blocks = (x0 + u0, x1 + u1)
        for m in rng:
            for seq in product((0, 1), repeat=m):
                mid = tuple(s for b in seq for s in blocks[b])
                yield member(u1 + mid + u, True, f"u1{seq}u")
                yield member(u0 + mid + u, False, f"u0{seq}u")
    elif wp.variant == "FailureLinearGap":
        x, y0, y1, z0, z1, u = (w[k] for k in ("x", "y0", "y1", "z0", "z1", "u"))
        yield "nonempty x,y0,y1,z0,z1", all(len(t) >= 1 for t in (x, y0, y1, z0, z1))
        yield "|y0|=|y1|", len(y0) == len(y1)
        yield "|x|=|z0y0|=|z1y1|", len(x) == len(z0 + y0) == len(z1 + y1)
        for j in rng:
            for i in range(1, max_exp + 1):
                yield member(y0 + (z0 + y0) * j + u + x * i, False, f"y0(z0y0)^{j}ux^{i}")
                yield member(y1 + (z1 + y1) * j + u + x * i, True, f"y1(z1y1)^{j}ux^{i}")
    elif wp.variant == "FailureLogGap":
        u, v, ww, x = w["u"], w["v"], w["w"], w["x"]
        yield "|uv|=|w|=|x|>=1", len(u + v) == len(ww) == len(x) >= 1
        pos = wp.case == 1
        for j in rng:
            yield member((v + u) * j + v, pos, f"(vu)^{j}v")
            for i in rng:
                yield member(x * i + ww + (v + u) * j + v, not pos, f"x^{i}w(vu)^{j}v")
    else:
        raise ValueError(f"unknown witness variant {wp.variant!r}")


def check_witness(dfa_for_L: Dfa, wp: WitnessPattern, max_exp: int = 5) -> list[str]:
    """Violated conditions of the witness (empty list if it is sound)."""
    return [label for label, ok in witness_conditions(dfa_for_L, wp, max_exp) if not ok]


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class SpaceVerdict:
    classes: dict[str, bool]
    settings: dict[str, str]
    witnesses: dict[str, WitnessPattern] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "classes": {c: self.classes[c] for c in CLASSES},
            "settings": {s: self.settings[s] for s in SETTINGS},
            "witnesses": {c: self.witnesses[c].to_json() for c in CLASSES if c in self.witnesses},
        }

    def lattice_violations(self) -> list[tuple[str, str]]:
        return [(lo, hi) for lo, hi in LATTICE if self.classes[lo] and not self.classes[hi]]

    def table(self) -> str:
        lines = ["class           member"]
        lines += [f"{c:<15} {'yes' if self.classes[c] else 'no'}" for c in CLASSES]
        lines += ["", "setting         space"]
        lines += [f"{s:<15} {self.settings[s]}" for s in SETTINGS]
        return "\n".join(lines)


def classify(dfa_for_L: Dfa, witnesses: bool = True) -> SpaceVerdict:
    a = minimize(reverse(dfa_for_L))
    flags = class_flags(a)
    found = {}
    if witnesses:
        found = {c: _EXTRACTORS[c](a) for c in CLASSES if not flags[c]}
    return SpaceVerdict(flags, settings_for(flags), found)
