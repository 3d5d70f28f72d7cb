"""Class memberships and setting verdicts for the golden languages, plus any
extra regexes given on the command line (over {a, b, c})."""
import sys

from windowlang.acceptance import ABC, GOLDENS
from windowlang.classify import CLASSES, SETTINGS, check_witness, classify
from windowlang.regex import regex_to_dfa


def row(name, rx):
    dfa = regex_to_dfa(rx, ABC)
    v = classify(dfa)
    flags = " ".join("Y" if v.classes[c] else "." for c in CLASSES)
    verdicts = " ".join(f"{v.settings[s]:<6}" for s in SETTINGS)
    bad = sum(len(check_witness(dfa, wp)) for wp in v.witnesses.values())
    return f"{name:<20} {flags}   {verdicts}  witnesses={len(v.witnesses)} violated={bad}"


def main(extra):
    print("classes:  " + "  ".join(f"{k + 1}={c}" for k, c in enumerate(CLASSES)))
    print("settings: " + ", ".join(SETTINGS))
    print(f"{'language':<20} {' '.join(str(k + 1) for k in range(len(CLASSES)))}")
    for name, (rx, _) in GOLDENS.items():
        print(row(name, rx))
    for rx in extra:
        print(row(rx, rx))


if __name__ == "__main__":
    main(sys.argv[1:])
