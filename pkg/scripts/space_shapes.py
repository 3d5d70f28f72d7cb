"""Observed maximum space of each algorithm over n = 2^lo..2^hi and the
best-fitting growth shape."""
import argparse
from dataclasses import dataclass

from windowlang import minimize, regex_to_dfa, reverse
from windowlang.harness import measure_space_growth
from windowlang.swa import (QueryMode, bernoulli_swa, exact_oracle, lb_direct_swa, mod_prime_swa, path_summary_swa,
                            trivial_reject_swa)

AB = ("a", "b")


@dataclass
class Config:
    lo: int = 4
    hi: int = 14
    probe_factor: int = 4
    batch: int = 32  # enough copies to draw the largest prime
    seed: int = 0


def families():
    ab_star = regex_to_dfa("ab*", AB, pad="b")
    rev = minimize(reverse(ab_star))
    a_star_b = regex_to_dfa("a*b", AB)
    sigma_ab = regex_to_dfa("(a|b)*ab", AB)
    return {
        "exact_oracle": (lambda n, b, r: exact_oracle(ab_star, n, b), None),
        "path_summary": (lambda n, b, r: path_summary_swa(rev, n, QueryMode.EXACTLY_N, b), None),
        "bernoulli": (lambda n, b, r: bernoulli_swa(rev, n, 1 / (2 * n), r, b), None),
        "mod_prime": (lambda n, b, r: mod_prime_swa(rev, n, r, b), None),
        "mod_prime index": (lambda n, b, r: mod_prime_swa(rev, n, r, b),
                            lambda inst: inst.space_breakdown()["prime_index"]),
        "trivial_reject": (lambda n, b, r: trivial_reject_swa(a_star_b.state_count, n, 0.5, a_star_b, b), None),
        "lb_direct": (lambda n, b, r: lb_direct_swa(sigma_ab, n, 0.5, b), None),
    }


def main(cfg: Config):
    ns = [2 ** k for k in range(cfg.lo, cfg.hi + 1)]
    for name, (factory, measure) in families().items():
        g = measure_space_growth(factory, ns, AB, cfg.probe_factor, cfg.seed, cfg.batch, measure=measure)
        print(f"{name:<16} best fit {g.best_fit:<12} space {g.space}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for field in ("lo", "hi", "probe_factor", "batch", "seed"):
        p.add_argument(f"--{field.replace('_', '-')}", type=int, default=getattr(Config, field))
    main(Config(**vars(p.parse_args())))
