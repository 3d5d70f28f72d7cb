"""Per-instant error of the O(log log n) suffix-free algorithm on ab*, raw and
after majority amplification, over adversarial and uniform streams."""
import argparse
from dataclasses import dataclass

from windowlang import minimize, regex_to_dfa, reverse
from windowlang.harness import StreamSpec, estimate_errors, gen_stream
from windowlang.swa import amplify, loglog_suffix_free_swa

AB = ("a", "b")


@dataclass
class Config:
    ns: tuple[int, ...] = (16, 64, 256)
    trials: int = 2000
    seed: int = 0
    amplified: bool = False


def streams(n):
    yield "l=n", list("a" + "b" * (n - 1))
    yield "l=2n", list("a" + "b" * (2 * n - 1))
    yield "l=n/2", list("a" + "b" * (n // 2 - 1))
    yield "uniform", gen_stream(StreamSpec.uniform(4 * n, n), AB)


def main(cfg: Config):
    truth = regex_to_dfa("ab*", AB, pad="b")
    rev = minimize(reverse(truth))
    raw = lambda n, batch=1, seed=None: loglog_suffix_free_swa(rev, n, seed, batch)  # noqa: E731
    factory = amplify(raw, 0.4, 1 / 3) if cfg.amplified else raw
    print(f"{'n':>6} {'stream':<8} {'max error':>9} {'final error':>11} {'space':>6}")
    for n in cfg.ns:
        for name, stream in streams(n):
            r = estimate_errors(factory, truth, n, stream, cfg.trials, seed=cfg.seed)
            print(f"{n:>6} {name:<8} {max(r.errors):>9.4f} {r.errors[-1]:>11.4f} {r.space_max:>6}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ns", type=int, nargs="+", default=list(Config.ns))
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--amplified", action="store_true")
    a = p.parse_args()
    main(Config(tuple(a.ns), a.trials, a.seed, a.amplified))
