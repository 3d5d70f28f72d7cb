"""Regular expressions over single-character symbols.

Supported syntax: juxtaposition for concatenation, ``|``, postfix ``*`` and
``+``, parentheses, and the literals ``ε`` (empty word) and ``∅`` (empty
language).  Whitespace is ignored.  Blank input denotes the empty language.

Compilation goes through the Glushkov position automaton, which has no
epsilon moves, and then the subset construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .automata import AutomatonError, Dfa, Nfa, determinize, minimize

EPSILON = "ε"
EMPTY = "∅"
_SPECIAL = set("|*+()") | {EPSILON, EMPTY}


class RegexSyntaxError(AutomatonError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass
class _Node:
    nullable: bool
    first: frozenset[int]
    last: frozenset[int]


class _Parser:
    def __init__(self, text: str, alphabet: Sequence[str]):
        self.tokens = [(i, c) for i, c in enumerate(text) if not c.isspace()]
        self.pos = 0
        self.index = {a: k for k, a in enumerate(alphabet)}
        self.symbols: list[int] = []  # symbol index of each position (1-based ids)
        self.follow: dict[int, set[int]] = {}

    def peek(self):
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else None

    def where(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][0]
        return self.tokens[-1][0] + 1 if self.tokens else 0

    def parse(self) -> _Node:
        if not self.tokens:
            return _Node(False, frozenset(), frozenset())
        node = self.alternation()
        if self.pos != len(self.tokens):
            raise RegexSyntaxError(f"unexpected {self.peek()!r}", self.where())
        return node

    def alternation(self) -> _Node:
        node = self.concatenation()
        while self.peek() == "|":
            self.pos += 1
            rhs = self.concatenation()
            node = _Node(node.nullable or rhs.nullable, node.first | rhs.first, node.last | rhs.last)
        return node

    def concatenation(self) -> _Node:
        if self.peek() in (None, "|", ")"):
            raise RegexSyntaxError(f"empty operand (write {EPSILON} for the empty word)", self.where())
        node = self.postfix()
        while self.peek() not in (None, "|", ")"):
            rhs = self.postfix()
            for p in node.last:
                self.follow[p] |= rhs.first
            node = _Node(
                node.nullable and rhs.nullable,
                node.first | (rhs.first if node.nullable else frozenset()),
                rhs.last | (node.last if rhs.nullable else frozenset()),
            )
        return node

    def postfix(self) -> _Node:
        node = self.atom()
        while self.peek() in ("*", "+"):
            op = self.peek()
            self.pos += 1
            for p in node.last:
                self.follow[p] |= node.first
            node = _Node(node.nullable or op == "*", node.first, node.last)
        return node

    def atom(self) -> _Node:
        c = self.peek()
        at = self.where()
        if c == "(":
            self.pos += 1
            node = self.alternation()
            if self.peek() != ")":
                raise RegexSyntaxError("missing ')'", self.where())
            self.pos += 1
            return node
        if c == EPSILON:
            self.pos += 1
            return _Node(True, frozenset(), frozenset())
        if c == EMPTY:
            self.pos += 1
            return _Node(False, frozenset(), frozenset())
        if c in _SPECIAL:
            raise RegexSyntaxError(f"unexpected {c!r}", at)
        if c not in self.index:
            raise RegexSyntaxError(f"undeclared symbol {c!r}", at)
        self.pos += 1
        self.symbols.append(self.index[c])
        p = len(self.symbols)
        self.follow[p] = set()
        return _Node(False, frozenset([p]), frozenset([p]))


def regex_to_nfa(text: str, alphabet: Sequence[str], pad: str | None = None) -> Nfa:
    alphabet = tuple(alphabet)
    for a in alphabet:
        if len(a) != 1 or a in _SPECIAL or a.isspace():
            raise AutomatonError(f"symbol {a!r} cannot be used in regex input")
    parser = _Parser(text, alphabet)
    root = parser.parse()
    trans = {(0, parser.symbols[p - 1], p) for p in root.first}
    for p, targets in parser.follow.items():
        trans |= {(p, parser.symbols[t - 1], t) for t in targets}
    finals = set(root.last) | ({0} if root.nullable else set())
    return Nfa(alphabet, len(parser.symbols) + 1, frozenset([0]), frozenset(finals), frozenset(trans), pad)


def regex_to_dfa(text: str, alphabet: Sequence[str], pad: str | None = None) -> Dfa:
    """Minimal complete DFA for the regex."""
    return minimize(determinize(regex_to_nfa(text, alphabet, pad)))
