"""Boolean combination, majority amplification and space capping."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .base import Factory, SwaError, SwaInstance, Truth, as_rng


class BooleanCombine(SwaInstance):
    """Runs the children side by side and combines their answers.

    Space is twice the children's sum: a separator-friendly encoding of the
    tuple of child states.
    """

    algorithm = "boolean_combine"

    def __init__(self, instances: Sequence[SwaInstance], truth_fn: Truth, arity: int | None = None,
                 params=None):
        instances = list(instances)
        if not instances:
            raise SwaError("need at least one child")
        if arity is not None and arity != len(instances):
            raise SwaError(f"truth function takes {arity} arguments, got {len(instances)} children")
        first = instances[0]
        for c in instances[1:]:
            if (c.n, c.batch, c.alphabet) != (first.n, first.batch, first.alphabet):
                raise SwaError("children disagree on window size, batch or alphabet")
        super().__init__(first.n, first.batch, first.alphabet,
                         all(c.deterministic for c in instances), params)
        self.children = instances
        self.truth_fn = truth_fn
        self.params.setdefault("children", [c.metadata for c in instances])

    def step(self, symbol: int) -> None:
        for c in self.children:
            c.step(symbol)

    def query(self) -> np.ndarray:
        return np.asarray(self.truth_fn([c.query() for c in self.children]), dtype=bool)

    def space_bits(self) -> np.ndarray:
        return 2 * sum(c.space_bits() for c in self.children)

    def space_bound(self) -> int:
        return 2 * sum(c.space_bound() for c in self.children)


def boolean_combine(instances: Sequence[SwaInstance], truth_fn: Truth, arity: int | None = None) -> BooleanCombine:
    return BooleanCombine(instances, truth_fn, arity)


def amplification_copies(eps: float, eps_target: float) -> int:
    """Smallest odd k >= ln(1/eps') * 2(1-eps) / (1/2-eps)^2."""
    if not 0 <= eps < 0.5:
        raise SwaError(f"child error must be below 1/2, got {eps}")
    if not 0 < eps_target < 1:
        raise SwaError("target error must lie in (0, 1)")
    if eps_target >= eps:
        return 1
    k = math.ceil(math.log(1 / eps_target) * 2 * (1 - eps) / (0.5 - eps) ** 2)
    return k if k % 2 else k + 1


class Majority(SwaInstance):
    """Majority vote over k copies held in one child of batch * k."""

    algorithm = "amplify"

    def __init__(self, child: SwaInstance, batch: int, copies: int, params=None):
        if child.batch != batch * copies:
            raise SwaError("child batch must be batch * copies")
        super().__init__(child.n, batch, child.alphabet, child.deterministic,
                         {"copies": copies, "child": child.metadata, **(params or {})})
        self.child = child
        self.copies = copies

    def step(self, symbol: int) -> None:
        self.child.step(symbol)

    def query(self) -> np.ndarray:
        votes = self.child.query().reshape(self.batch, self.copies).sum(axis=1)
        return 2 * votes > self.copies

    def space_bits(self) -> np.ndarray:
        return self.child.space_bits().reshape(self.batch, self.copies).sum(axis=1)

    def space_bound(self) -> int:
        return self.copies * self.child.space_bound()


def amplify(factory: Factory, eps: float, eps_target: float) -> Factory:
    """Factory of majority votes over independent copies from ``factory``."""
    k = amplification_copies(eps, eps_target)

    def build(n: int, batch: int = 1, seed=None) -> SwaInstance:
        return Majority(factory(n, batch * k, as_rng(seed)), batch, k,
                        {"eps": eps, "eps_target": eps_target})

    build.copies = k  # type: ignore[attr-defined]
    return build


class SpaceCap(SwaInstance):
    """Copies whose state needs more than ``budget`` bits fall into an
    absorbing bottom state that rejects and is encoded in one bit."""

    algorithm = "space_cap"

    def __init__(self, child: SwaInstance, budget: int):
        if budget < 1:
            raise SwaError("budget must be at least one bit")
        super().__init__(child.n, child.batch, child.alphabet, child.deterministic,
                         {"budget": budget, "child": child.metadata})
        self.child = child
        self.budget = budget
        self.collapsed = child.space_bits() > budget

    def step(self, symbol: int) -> None:
        self.child.step(symbol)
        self.collapsed |= self.child.space_bits() > self.budget

    def query(self) -> np.ndarray:
        return self.child.query() & ~self.collapsed

    def space_bits(self) -> np.ndarray:
        return np.where(self.collapsed, 1, self.child.space_bits())

    def space_bound(self) -> int:
        return min(self.budget, max(1, self.child.space_bound()))


def space_cap(factory: Factory, budget_bits: int) -> Factory:
    def build(n: int, batch: int = 1, seed=None) -> SwaInstance:
        return SpaceCap(factory(n, batch, seed), budget_bits)

    return build
