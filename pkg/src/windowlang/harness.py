"""Streams, Monte Carlo error estimates, bound checks and space growth fits."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from scipy.optimize import linprog

from .automata import Dfa, last_n
from .classify import WitnessPattern, extract_witness
from .swa.base import Factory, SwaError, window_truth

SIGMAS = 3.0
DEFAULT_CHUNK = 2000


# ---------------------------------------------------------------------------
# streams


@dataclass(frozen=True)
class StreamSpec:
    kind: str  # uniform | literal | repeat | witness
    params: dict[str, Any] = field(default_factory=dict, hash=False)

    @classmethod
    def uniform(cls, length: int, seed: int = 0) -> "StreamSpec":
        return cls("uniform", {"length": length, "seed": seed})

    @classmethod
    def literal(cls, word: str | Sequence[str]) -> "StreamSpec":
        return cls("literal", {"word": list(word)})

    @classmethod
    def repeat(cls, block: str | Sequence[str], count: int) -> "StreamSpec":
        return cls("repeat", {"block": list(block), "count": count})

    @classmethod
    def witness(cls, pattern: WitnessPattern | str, **index) -> "StreamSpec":
        """``pattern`` may be a class name, resolved against the language later."""
        return cls("witness", {"pattern": pattern, **index})


def parse_stream(text: str) -> StreamSpec:
    """uniform:LEN[:SEED] | literal:WORD | repeat:BLOCK:COUNT | witness:CLASS[:key=val,...]"""
    kind, _, rest = text.partition(":")
    parts = rest.split(":") if rest else []
    try:
        if kind == "uniform" and len(parts) in (1, 2):
            return StreamSpec.uniform(int(parts[0]), int(parts[1]) if len(parts) == 2 else 0)
        if kind == "literal" and len(parts) <= 1:
            return StreamSpec.literal(parts[0] if parts else "")
        if kind == "repeat" and len(parts) == 2:
            return StreamSpec.repeat(parts[0], int(parts[1]))
        if kind == "witness" and len(parts) in (1, 2):
            index = {}
            if len(parts) == 2 and parts[1]:
                for item in parts[1].split(","):
                    key, _, val = item.partition("=")
                    index[key] = val if key == "alpha" else int(val)
            return StreamSpec.witness(parts[0], **index)
    except ValueError:
        pass
    raise SwaError(f"cannot parse stream spec {text!r}")


def witness_stream(wp: WitnessPattern, m: int = 4, i: int = 1, j: int = 1,
                   alpha: str | None = None) -> tuple[list[str], int]:
    """Adversarial stream of a lower-bound family and the window size it targets.

    LinearGap        w_alpha (x0u0)^i u,       n = |u0| + m|x0u0| + |u|
    LogGap/LogLogGap z^m y x^(m+i-j) u,        n = |x|(m+1) + |u|
    FailureLinearGap w_alpha u x^i,            n = m|x| + |u| + |y0|
    FailureLogGap    x^(m-1) w v (uv)^i,       n = m|x| + |v|
    with w_alpha the concatenation of the alpha-indexed blocks (x_b u_b, resp.
    z_b y_b); alpha defaults to alternating bits of length m.
    """
    w = {k: list(v) for k, v in wp.words.items()}
    if alpha is None:
        alpha = "".join("10"[t % 2] for t in range(m))
    if wp.variant in ("LinearGap", "FailureLinearGap"):
        m = len(alpha)
        if any(c not in "01" for c in alpha):
            raise SwaError("alpha must be a bit string")
    if wp.variant == "LinearGap":
        blocks = [w["x0"] + w["u0"], w["x1"] + w["u1"]]
        stream = [a for c in alpha for a in blocks[int(c)]] + blocks[0] * i + w["u"]
        return stream, len(w["u0"]) + m * len(blocks[0]) + len(w["u"])
    if wp.variant in ("LogGap", "LogLogGap"):
        if not (1 <= i <= m and 1 <= j <= m):
            raise SwaError("need 1 <= i, j <= m")
        stream = w["z"] * m + w["y"] + w["x"] * (m + i - j) + w["u"]
        return stream, len(w["x"]) * (m + 1) + len(w["u"])
    if wp.variant == "FailureLinearGap":
        blocks = [w["z0"] + w["y0"], w["z1"] + w["y1"]]
        stream = [a for c in alpha for a in blocks[int(c)]] + w["u"] + w["x"] * i
        return stream, m * len(w["x"]) + len(w["u"]) + len(w["y0"])
    if wp.variant == "FailureLogGap":
        stream = w["x"] * (m - 1) + w["w"] + w["v"] + (w["u"] + w["v"]) * i
        return stream, m * len(w["x"]) + len(w["v"])
    raise SwaError(f"unknown witness variant {wp.variant!r}")


def gen_stream(spec: StreamSpec, alphabet: Sequence[str], dfa_for_L: Dfa | None = None) -> list[str]:
    """Deterministic expansion of ``spec``; witness specs naming a class need ``dfa_for_L``."""
    p = spec.params
    if spec.kind == "uniform":
        rng = np.random.default_rng(p.get("seed", 0))
        out = [alphabet[k] for k in rng.integers(0, len(alphabet), size=p["length"])]
    elif spec.kind == "literal":
        out = list(p["word"])
    elif spec.kind == "repeat":
        out = list(p["block"]) * p["count"]
    elif spec.kind == "witness":
        out, _ = witness_stream(resolve_pattern(spec, dfa_for_L), **_index(p))
    else:
        raise SwaError(f"unknown stream kind {spec.kind!r}")
    bad = [(k, a) for k, a in enumerate(out) if a not in alphabet]
    if bad:
        raise SwaError(f"symbol {bad[0][1]!r} at position {bad[0][0]} is not in the alphabet")
    return out


def _index(params: dict) -> dict:
    return {k: v for k, v in params.items() if k in ("m", "i", "j", "alpha")}


def resolve_pattern(spec: StreamSpec, dfa_for_L: Dfa | None) -> WitnessPattern:
    pattern = spec.params["pattern"]
    if isinstance(pattern, WitnessPattern):
        return pattern
    if dfa_for_L is None:
        raise SwaError("a witness stream naming a class needs the language")
    return extract_witness(dfa_for_L, pattern)


def stream_window(spec: StreamSpec, dfa_for_L: Dfa | None = None) -> int | None:
    """Window size a witness stream is built for (None for other kinds)."""
    if spec.kind != "witness":
        return None
    return witness_stream(resolve_pattern(spec, dfa_for_L), **_index(spec.params))[1]


# ---------------------------------------------------------------------------
# Monte Carlo estimation


@dataclass
class TrialReport:
    n: int
    m: int
    trials: int
    eps: float
    seed: int
    errors: list[float]
    truth: list[bool]
    failure_ratio: float
    strict_error: float
    space_max: int
    space_mean: float
    metadata: dict[str, Any]

    def failure_ratio_at(self, threshold: float) -> float:
        return sum(e > threshold for e in self.errors) / (self.m + 1)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=_jsonable)

    @classmethod
    def from_json(cls, text: str) -> "TrialReport":
        return cls(**json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "error", "truth"])
        for t, (e, y) in enumerate(zip(self.errors, self.truth)):
            writer.writerow([t, repr(e), int(y)])
        return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


def _self_check(dfa: Dfa, n: int, stream: Sequence[str], truth: np.ndarray, every: int = 100) -> None:
    for t in range(0, len(stream) + 1, every):
        if dfa.accepts(last_n(n, stream[:t], dfa.pad)) != bool(truth[t]):
            raise AssertionError(f"window oracle disagrees with direct evaluation at t={t}")


def estimate_errors(factory: Factory, truth: Dfa, n: int, stream: Sequence[str], trials: int,
                    eps: float = 1 / 3, seed: int = 0, jobs: int = 1, chunk: int = DEFAULT_CHUNK) -> TrialReport:
    """Run ``trials`` independent copies over ``stream`` and compare with the exact answer.

    Trials are split into fixed-size chunks seeded from one SeedSequence, so the
    report does not depend on ``jobs``.
    """
    if trials < 1:
        raise SwaError("need at least one trial")
    stream = list(stream)
    symbols = truth.encode(stream)
    answer = window_truth(truth, n, symbols)
    _self_check(truth, n, stream, answer)
    sizes = [min(chunk, trials - s) for s in range(0, trials, chunk)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    meta: dict[str, Any] = {}

    def work(k: int):
        inst = factory(n, sizes[k], np.random.default_rng(seeds[k]))
        if inst.alphabet != truth.alphabet:
            raise SwaError("algorithm and truth DFA use different alphabets")
        if k == 0:
            meta.update(inst.metadata)
        out, space = inst.run(symbols)
        wrong = out != answer[:, None]
        return wrong.sum(axis=1), int(wrong.any(axis=0).sum()), int(space.max()), int(space.sum())

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        parts = list(pool.map(work, range(len(sizes))))
    wrong = sum(p[0] for p in parts)
    errors = (wrong / trials).tolist()
    return TrialReport(
        n=n, m=len(stream), trials=trials, eps=eps, seed=seed, errors=errors, truth=answer.tolist(),
        failure_ratio=sum(e > eps for e in errors) / (len(stream) + 1),
        strict_error=sum(p[1] for p in parts) / trials,
        space_max=max(p[2] for p in parts), space_mean=sum(p[3] for p in parts) / trials,
        metadata=json.loads(json.dumps(meta, default=_jsonable)),
    )


# ---------------------------------------------------------------------------
# bound checks


@dataclass
class BoundCheck:
    kind: str
    passed: bool
    observed: float
    bound: float
    margin: float

    @property
    def slack(self) -> float:
        return self.bound + self.margin - self.observed

    def to_json(self) -> dict:
        return {"kind": self.kind, "pass": self.passed, "observed": self.observed, "bound": self.bound,
                "margin": self.margin}


def binomial_margin(p: float, trials: int) -> float:
    return SIGMAS * math.sqrt(p * (1 - p) / trials)


def verify_bounds(report: TrialReport, error: float | None = None, failure: float | None = None,
                  space: float | None = None, deterministic: bool | None = None) -> list[BoundCheck]:
    """Checks of max_t e_t <= error, failure ratio <= failure, max space <= space.

    Probabilistic checks get a 3-sigma binomial margin.  The failure ratio is
    then counted at threshold eps + margin(eps) so that sampling noise around
    eps is not mistaken for failure.
    """
    if deterministic is None:
        deterministic = report.trials == 1
    checks = []
    if error is not None:
        margin = 0.0 if deterministic else binomial_margin(error, report.trials)
        observed = max(report.errors)
        checks.append(BoundCheck("error", observed <= error + margin, observed, error, margin))
    if failure is not None:
        shift = 0.0 if deterministic else binomial_margin(report.eps, report.trials)
        observed = report.failure_ratio_at(report.eps + shift)
        checks.append(BoundCheck("failure", observed <= failure, observed, failure, 0.0))
    if space is not None:
        checks.append(BoundCheck("space", report.space_max <= space, report.space_max, space, 0.0))
    return checks


# ---------------------------------------------------------------------------
# space growth

SHAPES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "1": lambda n: np.zeros_like(n, dtype=float),
    "log2 log2 n": lambda n: np.log2(np.log2(n)),
    "log2 n": lambda n: np.log2(n),
    "n": lambda n: n.astype(float),
}


@dataclass
class GrowthReport:
    ns: list[int]
    space: list[int]
    fits: dict[str, dict[str, Any]]
    best_fit: str

    def to_json(self) -> dict:
        return asdict(self)


def _explains(f: np.ndarray, y: np.ndarray, constant: bool) -> bool:
    """Is there a, c > 0 (c = 0 for the constant shape) with ceil(a + c f) == y?"""
    delta = 1e-9
    if constant:
        return bool(np.all(y == y[0]))
    # y - 1 + delta <= a + c f <= y, c >= delta
    a_ub = np.vstack([np.column_stack([np.ones_like(f), f]), -np.column_stack([np.ones_like(f), f])])
    b_ub = np.concatenate([y, -(y - 1 + delta)])
    res = linprog(np.zeros(2), A_ub=a_ub, b_ub=b_ub, bounds=[(None, None), (delta, None)], method="highs")
    return res.status == 0


def fit_shapes(ns: Sequence[int], space: Sequence[float]) -> tuple[str, dict[str, dict[str, float]]]:
    """Fits space ~ a + c f(n) for every shape in ``SHAPES``.

    Space is measured in whole bits, so a shape explains the data when some
    a, c > 0 give ceil(a + c f(n)) == space at every n; the slowest-growing
    such shape wins.  If none does, the least-squares fit with the smallest
    residual and a positive slope wins.  A short range of n lets a steep slow
    shape explain faster data, so use a dozen or more doublings.
    """
    x = np.asarray(ns)
    y = np.asarray(space, dtype=float)
    fits = {}
    for name, f in SHAPES.items():
        cols = [np.ones_like(y)] if name == "1" else [np.ones_like(y), f(x)]
        design = np.column_stack(cols)
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        fits[name] = {
            "a": float(coef[0]),
            "c": float(coef[1]) if len(coef) > 1 else 0.0,
            "rss": float(np.sum((design @ coef - y) ** 2)),
            "explains": _explains(f(x), y, name == "1"),
        }
    exact = [s for s in SHAPES if fits[s]["explains"]]
    if exact:
        return exact[0], fits
    candidates = [s for s in SHAPES if s == "1" or fits[s]["c"] > 0]
    return min(candidates, key=lambda s: fits[s]["rss"]), fits


def measure_space_growth(factory: Factory, ns: Sequence[int], alphabet: Sequence[str], probe_factor: int = 8,
                         seed: int = 0, batch: int = 8,
                         probes: Callable[[int], list[Sequence[str]]] | None = None,
                         measure: Callable[[Any], np.ndarray] | None = None) -> GrowthReport:
    """Observed max space per n over a uniform probe stream of length
    probe_factor * n plus any extra ``probes(n)`` streams.

    ``measure`` maps an instance to per-copy bits (default ``space_bits``);
    use it to track one component of the encoding.
    """
    ns = list(ns)
    if not ns or ns != sorted(set(ns)):
        raise SwaError("ns must be nonempty and increasing")
    measure = measure or (lambda inst: inst.space_bits())
    index = {a: k for k, a in enumerate(alphabet)}
    seeds = np.random.SeedSequence(seed).spawn(len(ns))
    observed = []
    for n, ss in zip(ns, seeds):
        rng = np.random.default_rng(ss)
        streams = [rng.integers(0, len(alphabet), size=probe_factor * n).tolist()]
        streams += [[index[a] for a in s] for s in (probes(n) if probes else [])]
        best = 0
        for s in streams:
            inst = factory(n, batch, rng)
            best = max(best, int(measure(inst).max()))
            for a in s:
                inst.step(a)
                best = max(best, int(measure(inst).max()))
        observed.append(best)
    shape, fits = fit_shapes(ns, observed)
    return GrowthReport(ns, observed, fits, shape)
