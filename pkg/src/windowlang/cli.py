"""Command-line entry point: ``windowlang <command> ...``.

Exit codes: 0 all requested checks pass, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

from .automata import AutomatonError, Dfa, build_dfa
from .classify import CLASSES, NoWitness, classify, extract_witness, witness_conditions
from .harness import estimate_errors, gen_stream, measure_space_growth, parse_stream, stream_window, verify_bounds
from .regex import EMPTY, EPSILON
from .swa import SwaError, compile_spec, load_spec

SETTINGS_HELP = """settings (one per column of the complexity table):
  det-zero           deterministic, exact at every instant
  rand-zero          randomized, error <= 1/3 at every instant
  det-failure=PHI    deterministic, wrong on at most a PHI fraction of instants
  rand-failure=PHI   randomized, error <= eps outside a PHI fraction of instants
"""


class UsageError(Exception):
    pass


def _alphabet_of(regex: str) -> tuple[str, ...]:
    return tuple(sorted(set(c for c in regex if not c.isspace() and c not in "|*+()" + EPSILON + EMPTY)))


def _language(args) -> Dfa:
    if bool(args.lang) == bool(args.regex):
        raise UsageError("give exactly one of --lang FILE or --regex R")
    if args.lang:
        return build_dfa(args.lang)
    alphabet = tuple(args.alphabet) if args.alphabet else _alphabet_of(args.regex)
    if not alphabet:
        raise UsageError("cannot infer an alphabet; pass --alphabet")
    return build_dfa(args.regex, alphabet, args.pad)


def _write(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_classify(args) -> int:
    verdict = classify(_language(args))
    print(verdict.table())
    for cls, wp in verdict.witnesses.items():
        words = ", ".join(f"{r}={wp.text(r) or 'ε'}" for r in wp.words)
        print(f"witness {cls}: {wp.variant} case {wp.case}: {words}")
    _write(args.out, json.dumps(verdict.to_json(), indent=2) + "\n")
    return 0 if not verdict.lattice_violations() else 1


def cmd_witness(args) -> int:
    dfa = _language(args)
    try:
        wp = extract_witness(dfa, args.cls)
    except NoWitness as err:
        print(f"no witness: {err}")
        return 1
    print(f"{wp.variant} (case {wp.case}) against {wp.failed_class}")
    for role in wp.words:
        print(f"  {role} = {wp.text(role) or 'ε'}")
    failed = 0
    total = 0
    for label, ok in witness_conditions(dfa, wp, args.max_exp):
        total += 1
        if not ok:
            failed += 1
            print(f"  FAIL {label}")
        elif args.verbose:
            print(f"  ok   {label}")
    print(f"validated {total - failed}/{total} conditions (exponents 0..{args.max_exp})")
    return 0 if failed == 0 else 1


def cmd_run(args) -> int:
    compiled = compile_spec(load_spec(args.spec), args.setting)
    dfa = compiled.dfa
    spec = parse_stream(args.stream)
    n = args.n if args.n is not None else stream_window(spec, dfa)
    if n is None:
        raise UsageError("--n is required unless the stream is a witness family")
    stream = gen_stream(spec, dfa.alphabet, dfa)
    report = estimate_errors(compiled, dfa, n, stream, args.trials, args.eps, args.seed, args.jobs)
    setting = compiled.setting
    deterministic = not setting.randomized
    if setting.failure:
        checks = verify_bounds(report, failure=setting.phi, deterministic=deterministic)
    else:
        checks = verify_bounds(report, error=0.0 if deterministic else 1 / 3, deterministic=deterministic)
    checks += verify_bounds(report, space=report.metadata["space_bits_max"])
    verdicts = [c.to_json() for c in checks]
    _write(args.out, report.to_json() + "\n")
    _write(args.csv, report.to_csv())
    summary = {
        "algorithm": report.metadata["algorithm"], "n": n, "m": report.m, "trials": report.trials,
        "max_error": max(report.errors), "failure_ratio": report.failure_ratio, "strict_error": report.strict_error,
        "space_max": report.space_max, "compiled": compiled.info, "checks": verdicts,
    }
    print(json.dumps(summary, indent=2))
    return 0 if all(c.passed for c in checks) else 1


_RANGE = re.compile(r"^2\^(\d+)\.\.2\^(\d+)$")


def _n_range(text: str) -> list[int]:
    m = _RANGE.match(text.replace(" ", ""))
    if not m or int(m.group(1)) > int(m.group(2)):
        raise UsageError(f"--n-range must look like 2^4..2^16, got {text!r}")
    return [2 ** k for k in range(int(m.group(1)), int(m.group(2)) + 1)]


def cmd_bench_space(args) -> int:
    compiled = compile_spec(load_spec(args.spec), args.setting)
    ns = _n_range(args.n_range)
    growth = measure_space_growth(compiled, ns, compiled.dfa.alphabet, args.probe_factor, args.seed, args.batch)
    out = {"setting": str(compiled.setting), "compiled": compiled.info, "observed_max_space": growth.to_json()}
    print(json.dumps(out, indent=2))
    _write(args.out, json.dumps(out, indent=2) + "\n")
    return 0


def cmd_verify(args) -> int:
    from .acceptance import run_all

    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(only, echo=lambda line: print(line, flush=True))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="windowlang", description="Sliding-window space classification and simulation.",
                                epilog=SETTINGS_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def language(sp):
        sp.add_argument("--lang", help="DFA table (.json)")
        sp.add_argument("--regex", help="regular expression")
        sp.add_argument("--alphabet", help="symbols, e.g. abc (default: symbols of the regex)")
        sp.add_argument("--pad", help="padding symbol (default: first alphabet symbol)")

    sp = sub.add_parser("classify", help="class memberships, space verdicts and witnesses")
    language(sp)
    sp.add_argument("--out", help="write the verdict as JSON")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("witness", help="print and validate a lower-bound witness")
    language(sp)
    sp.add_argument("--class", dest="cls", required=True, choices=CLASSES)
    sp.add_argument("--max-exp", type=int, default=5)
    sp.add_argument("--verbose", action="store_true", help="list every checked condition")
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("run", help="compile a spec, simulate it and check its bounds",
                        epilog=SETTINGS_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("--spec", required=True)
    sp.add_argument("--setting", required=True)
    sp.add_argument("--n", type=int, help="window size (default: the witness family's own)")
    sp.add_argument("--stream", required=True,
                    help="uniform:LEN[:SEED] | literal:WORD | repeat:BLOCK:COUNT | witness:CLASS[:m=..,i=..,j=..,alpha=..]")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--eps", type=float, default=1 / 3, help="error threshold of the failure ratio")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="write the TrialReport as JSON")
    sp.add_argument("--csv", help="write per-instant errors as CSV")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("bench-space", help="observed max space over window sizes and best-fit shape")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--setting", required=True)
    sp.add_argument("--n-range", default="2^4..2^16", help="powers of two; span ten or more doublings")
    sp.add_argument("--probe-factor", type=int, default=8)
    sp.add_argument("--batch", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bench_space)

    sp = sub.add_parser("verify", help="run the acceptance criteria")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SwaError, AutomatonError, OSError, json.JSONDecodeError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
