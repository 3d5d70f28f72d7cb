"""Failure ratios of the failure-ratio algorithms against n: trivial_reject on
a*b over (a^(n-1) b)^m, lb_direct on Σ*ab and const_left_ideal on Σ*aΣ* over
uniform streams."""
import argparse
from dataclasses import dataclass

from windowlang import minimize, regex_to_dfa, reverse
from windowlang.harness import StreamSpec, estimate_errors, gen_stream
from windowlang.swa import const_left_ideal_swa, lb_direct_swa, trivial_reject_swa

AB = ("a", "b")


@dataclass
class Config:
    phi: float = 0.1
    ns: tuple[int, ...] = (64, 128, 256, 512)
    trials: int = 2000
    seed: int = 0


def main(cfg: Config):
    a_star_b = regex_to_dfa("a*b", AB)
    sigma_ab = regex_to_dfa("(a|b)*ab", AB)
    left = regex_to_dfa("(a|b)*a(a|b)*", AB, pad="b")
    left_rev = minimize(reverse(left))
    print(f"phi = {cfg.phi}")
    print(f"{'n':>6} {'trivial_reject':>15} {'bound 2|Q|/n':>13} {'lb_direct':>10} {'const_left_ideal':>17}")
    for n in cfg.ns:
        tr = estimate_errors(lambda n, b=1, s=None: trivial_reject_swa(3, n, cfg.phi, a_star_b, b), a_star_b, n,
                             list(("a" * (n - 1) + "b") * 8), trials=1)
        uniform = gen_stream(StreamSpec.uniform(8 * n, n), AB)
        lb = estimate_errors(lambda n, b=1, s=None: lb_direct_swa(sigma_ab, n, cfg.phi, b), sigma_ab, n, uniform,
                             trials=1)
        probe = const_left_ideal_swa(left_rev, n, cfg.phi)
        eps = probe.params["epsilon"]
        cl = estimate_errors(lambda n, b=1, s=None: const_left_ideal_swa(left_rev, n, cfg.phi, s, b), left, n,
                             uniform, cfg.trials, eps=eps, seed=cfg.seed)
        print(f"{n:>6} {tr.failure_ratio:>15.4f} {6 / n:>13.4f} {lb.failure_ratio:>10.4f} {cl.failure_ratio:>17.4f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--phi", type=float, default=Config.phi)
    p.add_argument("--ns", type=int, nargs="+", default=list(Config.ns))
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    main(Config(a.phi, tuple(a.ns), a.trials, a.seed))
