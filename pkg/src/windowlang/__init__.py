"""Sliding-window membership for regular languages: classification,
algorithms and an empirical test bench."""

from .automata import Dfa, Nfa, build_dfa, last_n, minimize, reverse
from .regex import regex_to_dfa

__all__ = ["Dfa", "Nfa", "build_dfa", "last_n", "minimize", "regex_to_dfa", "reverse"]
