"""Two ways to gate a component: priorities and entry conditions.

A priority system lets a component act only when no higher-priority component
could. An entry-condition system attaches a random-context test to each
component that is checked once, on activation. The ``cdfrc-to-pcd`` and
``pcd-to-cdfrc`` constructions translate between the two regimes, and the
bounded checker confirms each instance.
"""

import pathlib

from rrw import (
    Mode,
    StepBounds,
    apply_construction,
    bounded_equiv,
    enumerate_language,
    format_word,
    parse_system,
    system_successors,
)

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def main():
    pcd = parse_system((CORPUS / "pcd_chain.rrw").read_text())
    star = Mode.parse("*")
    print(f"priority system {pcd.name}: P2 > P3")

    form = ("A", "B")
    succ = system_successors(pcd, form, Mode.parse("=1"), StepBounds(8))
    print(f"from {format_word(form)} only the top component may act:")
    for name, result in sorted(succ):
        print(f"  {name}: {format_word(result)}")

    out, report = apply_construction("pcd-to-cdfrc", pcd, mode=star)
    print("\npcd-to-cdfrc replaces each priority edge by an entry test:")
    for comp in out.components:
        print(f"  {comp.name}: entry forbid {sorted(comp.entry.forbid)}")
    verdict = bounded_equiv(pcd, star, out, star, 6, StepBounds(14))
    print(f"bounded languages equal: {verdict.equal}")

    back, _ = apply_construction("cdfrc-to-pcd", out, mode=star)
    lang = enumerate_language(back, star, 6, StepBounds(14))
    words = ", ".join(format_word(w) for w in lang.sorted_words())
    print(f"\nround trip back to priorities generates {{{words}}}")


if __name__ == "__main__":
    main()
