"""Run the acceptance criteria and print one PASS/FAIL line each.

    python scripts/run_acceptance.py            # all
    python scripts/run_acceptance.py 1 4 7      # a subset
"""
import sys

from windowlang.acceptance import run_all


def main(argv):
    numbers = [int(a) for a in argv] or None
    results = run_all(numbers, echo=lambda line: print(line, flush=True))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria pass")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
