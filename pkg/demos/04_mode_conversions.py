"""Trade cooperation modes for structure with the mode-changing constructions.

Counting protocols are interchangeable at the cost of extra components:

  * ``frccd-to-eq2``    compresses any =k or >=k protocol into =2 by counting
                        steps in fresh marker nonterminals,
  * ``frccd-eq2-to-k``  stretches =2 back out to a larger =k or >=k,
  * ``cdfrc-geqk-to-geq2`` does the same for entry-condition systems under >=k.

Each construction returns a report alongside the new system, and the bounded
differential checker verifies the instance.
"""

import pathlib

from rrw import Mode, StepBounds, apply_construction, bounded_equiv, parse_system

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"
BOUNDS = StepBounds(14)


def check(source, mode_in, target, mode_out):
    verdict = bounded_equiv(source, Mode.parse(mode_in),
                            target, Mode.parse(mode_out), 6, BOUNDS)
    return "equal" if verdict.equal else verdict.summary()


def main():
    frccd = parse_system((CORPUS / "frccd_pair.rrw").read_text())
    print(f"source: {frccd.name}, {len(frccd.components)} components, "
          "forbidding contexts, protocol =2")

    down, report = apply_construction("frccd-to-eq2", frccd,
                                      mode=Mode.parse(">=3"))
    print(f"\nfrccd-to-eq2 (>=3 to =2): {report.components} components")
    print("  bounded check:", check(frccd, ">=3", down, "=2"))

    up, report = apply_construction("frccd-eq2-to-k", frccd,
                                    mode=Mode.parse("=3"))
    print(f"\nfrccd-eq2-to-k (=2 to =3): {report.components} components")
    print("  bounded check:", check(frccd, "=2", up, "=3"))

    entry = parse_system((CORPUS / "entry_loops.rrw").read_text())
    geq2, report = apply_construction("cdfrc-geqk-to-geq2", entry,
                                      mode=Mode.parse(">=3"))
    print(f"\ncdfrc-geqk-to-geq2 (>=3 to >=2): {report.components} components")
    for note in report.notes:
        print(f"  note: {note}")
    print("  bounded check:", check(entry, ">=3", geq2, ">=2"))


if __name__ == "__main__":
    main()
