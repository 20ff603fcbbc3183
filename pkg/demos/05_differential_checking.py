"""Differentially test two systems for bounded-language equality.

``bounded_equiv`` enumerates both sides up to a length bound and reports the
symmetric difference, shortlex-sorted, together with completeness flags. An
inequality therefore always comes with a smallest counterexample word, and an
incomplete enumeration can never pass as equal.

The demo compares the rule-order system that doubles words of a's against a
deliberately wrong variant whose finishing component lost its blocking rule.
"""

import pathlib

from rrw import Mode, StepBounds, bounded_equiv, format_word, parse_system

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def main():
    good = parse_system((CORPUS / "ocdgs_example1.rrw").read_text())

    # drop the "B -> B above C -> a" guard from P3: the finishing component
    # may now fire while B's are still present
    broken_doc = (CORPUS / "ocdgs_example1.rrw").read_text().replace(
        "component P3 { r1: B -> B\n"
        "               r2: C -> a\n"
        "               order: r1 > r2 }",
        "component P3 { C -> a }",
    )
    broken = parse_system(broken_doc)

    t = Mode.parse("t")
    verdict = bounded_equiv(good, t, broken, t, 8, StepBounds(10))
    print(verdict.summary())
    if not verdict.equal:
        extra = verdict.only_in_b[0]
        print(f"smallest word gained by the broken system: "
              f"{format_word(extra)}")
        print("dropping the guard lets P3 terminate half-doubled forms.")


if __name__ == "__main__":
    main()
