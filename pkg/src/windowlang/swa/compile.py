"""Tagged language specifications and their compilation to algorithms."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

import numpy as np

from ..automata import (AtomTag, BifixFreeLeftIdeal, Dfa, LeftIdeal, LengthMod, PrefixFree, SuffixFree,
                        SuffixPattern, build_dfa, check_atom_tag, combine, minimize, reverse)
from ..classify import SETTINGS, classify
from .algorithms import (LOGLOG_MIN_N, QueryMode, const_left_ideal_swa, lb_direct_swa, loglog_suffix_free_swa,
                         path_summary_swa, solve_xi_epsilon, trivial_reject_swa)
from .base import Constant, ExactOracle, SuffixComparator, SwaError, SwaInstance, as_rng, iterate_symbol
from .combinators import BooleanCombine, amplification_copies, amplify

COMPLEXITY_ORDER = ("Const", "LogLog", "Log", "Linear")
LOGLOG_RAW_ERROR = 0.4

TAG_NAMES = {
    "suffix-pattern": SuffixPattern,
    "length-mod": LengthMod,
    "left-ideal": LeftIdeal,
    "prefix-free": PrefixFree,
    "suffix-free": SuffixFree,
    "bifix-free-left-ideal": BifixFreeLeftIdeal,
}


# ---------------------------------------------------------------------------
# specification trees


@dataclass(frozen=True)
class Leaf:
    dfa: Dfa
    tag: AtomTag


@dataclass(frozen=True)
class Not:
    child: "LanguageSpec"


@dataclass(frozen=True)
class And:
    children: tuple["LanguageSpec", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["LanguageSpec", ...]


LanguageSpec = Leaf | Not | And | Or


def leaves(spec: LanguageSpec) -> list[Leaf]:
    if isinstance(spec, Leaf):
        return [spec]
    if isinstance(spec, Not):
        return leaves(spec.child)
    return [leaf for c in spec.children for leaf in leaves(c)]


def evaluate(spec: LanguageSpec, values: Iterator):
    """Evaluate the formula, consuming leaf values in ``leaves`` order."""
    if isinstance(spec, Leaf):
        return next(values)
    if isinstance(spec, Not):
        return ~evaluate(spec.child, values)
    parts = [evaluate(c, values) for c in spec.children]
    out = parts[0]
    for p in parts[1:]:
        out = (out & p) if isinstance(spec, And) else (out | p)
    return out


def spec_dfa(spec: LanguageSpec) -> Dfa:
    """Minimal DFA for the language the formula denotes."""
    if isinstance(spec, Leaf):
        return minimize(spec.dfa)
    if isinstance(spec, Not):
        return minimize(combine("complement", spec_dfa(spec.child)))
    op = "intersection" if isinstance(spec, And) else "union"
    out = spec_dfa(spec.children[0])
    for c in spec.children[1:]:
        out = minimize(combine(op, out, spec_dfa(c)))
    return out


def validate(spec: LanguageSpec) -> None:
    alphabets = {leaf.dfa.alphabet for leaf in leaves(spec)}
    if len(alphabets) != 1:
        raise SwaError("all leaves must share one alphabet")
    for i, leaf in enumerate(leaves(spec)):
        if not check_atom_tag(leaf.dfa, leaf.tag):
            raise SwaError(f"leaf {i} does not satisfy its tag {tag_name(leaf.tag)!r}")


def tag_name(tag: AtomTag) -> str:
    return next(k for k, v in TAG_NAMES.items() if isinstance(tag, v))


def parse_tag(obj: dict) -> AtomTag:
    name = obj.get("tag")
    if name not in TAG_NAMES:
        raise SwaError(f"unknown tag {name!r}; expected one of {sorted(TAG_NAMES)}")
    if name == "suffix-pattern":
        if "word" not in obj:
            raise SwaError("suffix-pattern leaves need a 'word'")
        return SuffixPattern(tuple(obj["word"]))
    if name == "length-mod":
        return LengthMod(obj.get("modulus"), obj.get("residue"))
    return TAG_NAMES[name]()


def spec_from_json(obj: dict, alphabet: Sequence[str] | None = None, base_dir: str = ".") -> LanguageSpec:
    alphabet = obj.get("alphabet", alphabet)
    op = obj.get("op")
    if op == "leaf":
        desc = obj.get("dfa")
        if isinstance(desc, str) and desc.endswith(".json") and not os.path.isabs(desc):
            desc = os.path.join(base_dir, desc)
        return Leaf(build_dfa(desc, alphabet, obj.get("pad")), parse_tag(obj))
    children = [spec_from_json(c, alphabet, base_dir) for c in obj.get("children", [])]
    if op == "not":
        if len(children) != 1:
            raise SwaError("'not' takes exactly one child")
        return Not(children[0])
    if op in ("and", "or"):
        if not children:
            raise SwaError(f"'{op}' needs children")
        return (And if op == "and" else Or)(tuple(children))
    raise SwaError(f"unknown op {op!r}")


def load_spec(path: str) -> LanguageSpec:
    with open(path, encoding="utf-8") as fh:
        return spec_from_json(json.load(fh), base_dir=os.path.dirname(os.path.abspath(path)))


# ---------------------------------------------------------------------------
# settings


@dataclass(frozen=True)
class Setting:
    name: str
    phi: float | None = None

    def __post_init__(self):
        if self.name not in SETTINGS:
            raise SwaError(f"unknown setting {self.name!r}; expected one of {SETTINGS}")
        failure = self.name.endswith("failure")
        if failure and not (self.phi is not None and 0 < self.phi < 1):
            raise SwaError(f"{self.name} needs a failure ratio 0 < phi < 1")
        if not failure and self.phi is not None:
            raise SwaError(f"{self.name} takes no failure ratio")

    @property
    def randomized(self) -> bool:
        return self.name.startswith("rand")

    @property
    def failure(self) -> bool:
        return self.phi is not None

    def __str__(self) -> str:
        return self.name if self.phi is None else f"{self.name}={self.phi:g}"


def parse_setting(text: str) -> Setting:
    name, _, phi = text.partition("=")
    try:
        return Setting(name, float(phi) if phi else None)
    except ValueError as err:
        raise SwaError(str(err)) from None


# ---------------------------------------------------------------------------
# compilation


LeafBuilder = Callable[[int, int, np.random.Generator], SwaInstance]


@dataclass
class LeafPlan:
    tag: str
    algorithm: str
    achieved: str
    build: LeafBuilder = field(repr=False)
    params: dict[str, Any] = field(default_factory=dict)


def _plan_leaf(leaf: Leaf, setting: Setting, k: int, max_copies: int) -> LeafPlan:
    dfa = minimize(leaf.dfa)
    rev = minimize(reverse(dfa))
    tag, name = leaf.tag, tag_name(leaf.tag)
    phi = setting.phi / k if setting.failure else None

    if isinstance(tag, SuffixPattern):
        return LeafPlan(name, "suffix_comparator", "Const",
                        lambda n, b, r: SuffixComparator(dfa.alphabet, dfa.pad, tag.word, n, b))
    if isinstance(tag, LengthMod):
        def length_leaf(n, b, r):
            q = iterate_symbol(dfa, dfa.initial, dfa.pad_index, n)
            return Constant(dfa.alphabet, n, q in dfa.finals, b)
        return LeafPlan(name, "constant", "Const", length_leaf)
    if isinstance(tag, BifixFreeLeftIdeal) and setting.failure:
        return LeafPlan(name, "lb_direct", "Const", lambda n, b, r: lb_direct_swa(dfa, n, phi, b), {"phi": phi})
    if isinstance(tag, (LeftIdeal, BifixFreeLeftIdeal)):
        if setting.name == "rand-failure":
            _, eps, _ = solve_xi_epsilon(rev.state_count, phi)
            target = 1 / (3 * k)
            copies = amplification_copies(eps, target)
            params = {"phi": phi, "epsilon": eps, "copies_needed": copies}
            if copies <= max_copies:
                raw = lambda n, b, r: const_left_ideal_swa(rev, n, phi, r, b)  # noqa: E731
                amp = amplify(raw, eps, target)
                return LeafPlan(name, "const_left_ideal", "Const", amp, {**params, "amplified": True})
            return LeafPlan(name, "const_left_ideal", "Const",
                            lambda n, b, r: const_left_ideal_swa(rev, n, phi, r, b),
                            {**params, "amplified": False, "error_threshold": eps})
        return LeafPlan(name, "path_summary", "Log", lambda n, b, r: path_summary_swa(rev, n, QueryMode.AT_MOST_N, b))
    if isinstance(tag, PrefixFree):
        if setting.failure:
            return LeafPlan(name, "trivial_reject", "Const",
                            lambda n, b, r: trivial_reject_swa(dfa.state_count, n, phi, dfa, b), {"phi": phi})
        return LeafPlan(name, "exact_oracle", "Linear", lambda n, b, r: ExactOracle(dfa, n, b))
    if isinstance(tag, SuffixFree):
        if setting.failure:
            return LeafPlan(name, "trivial_reject", "Const",
                            lambda n, b, r: trivial_reject_swa(rev.state_count, n, phi, dfa, b), {"phi": phi})
        if setting.name == "rand-zero":
            target = 1 / (3 * k)
            amp = amplify(lambda n, b, r: loglog_suffix_free_swa(rev, n, r, b), LOGLOG_RAW_ERROR, target)

            def loglog(n, b, r):
                if n < LOGLOG_MIN_N:  # exact anyway, no need for copies
                    return loglog_suffix_free_swa(rev, n, r, b)
                return amp(n, b, r)
            return LeafPlan(name, "loglog_suffix_free", "LogLog", loglog, {"copies": amp.copies})
        return LeafPlan(name, "path_summary", "Log", lambda n, b, r: path_summary_swa(rev, n, QueryMode.EXACTLY_N, b))
    raise SwaError(f"unsupported tag {tag!r}")


class CompiledSpec:
    """Factory ``(n, batch, seed) -> SwaInstance`` for a tagged specification."""

    def __init__(self, spec: LanguageSpec, setting: Setting, max_copies: int = 10_001):
        validate(spec)
        self.spec = spec
        self.setting = setting
        self.dfa = spec_dfa(spec)
        parts = leaves(spec)
        self.plans = [_plan_leaf(leaf, setting, len(parts), max_copies) for leaf in parts]
        self.expected = classify(self.dfa, witnesses=False).settings[setting.name]
        self.achieved = max((p.achieved for p in self.plans), key=COMPLEXITY_ORDER.index)
        self.info: dict[str, Any] = {
            "setting": str(setting),
            "leaves": [{"tag": p.tag, "algorithm": p.algorithm, "class": p.achieved, **p.params} for p in self.plans],
            "expected_class": self.expected,
            "achieved_class": self.achieved,
        }
        if COMPLEXITY_ORDER.index(self.achieved) > COMPLEXITY_ORDER.index(self.expected):
            self.info["mismatch"] = True

    def __call__(self, n: int, batch: int = 1, seed=None) -> SwaInstance:
        rngs = as_rng(seed).spawn(len(self.plans))
        children = [p.build(n, batch, r) for p, r in zip(self.plans, rngs)]
        if isinstance(self.spec, Leaf):
            inst = children[0]
        else:
            inst = BooleanCombine(children, lambda vals: evaluate(self.spec, iter(vals)), len(children))
            inst.algorithm = "compiled"
        inst.params["compiled"] = self.info
        return inst


def compile_spec(spec: LanguageSpec, setting: Setting | str, max_copies: int = 10_001) -> CompiledSpec:
    if isinstance(setting, str):
        setting = parse_setting(setting)
    return CompiledSpec(spec, setting, max_copies)
