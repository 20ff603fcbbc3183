"""Enumerate the bounded language of a cooperating grammar system.

The corpus document ``ocdgs_example1.rrw`` describes three components that
cooperate on a shared sentential form:

    P1 renames every A into B (or into C),
    P2 doubles:  C -> C  ordered above  B -> A A,
    P3 finishes: B -> B  ordered above  C -> a.

Under the maximal-derivation protocol (mode ``t``, a component keeps rewriting
until none of its rules applies) the system generates exactly the powers of
two: a, aa, aaaa, ... The rule orders are what forces every A to take the same
branch; mixing B's and C's in one form traps the derivation in an unproductive
loop.
"""

import pathlib

from rrw import Mode, StepBounds, enumerate_language, format_word, parse_system

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def main():
    document = (CORPUS / "ocdgs_example1.rrw").read_text()
    system = parse_system(document)
    print(f"system {system.name}: {len(system.components)} components over "
          f"N={sorted(system.nonterminals)}, T={sorted(system.terminals)}")

    # mode t scales to long words; the laxer protocols generate much denser
    # languages, so show those at a smaller bound where the closure finishes
    for text, max_len in (("t", 16), ("*", 6), ("=2", 6), (">=1", 6)):
        bounds = StepBounds(workspace=max_len)
        lang = enumerate_language(system, Mode.parse(text), max_len, bounds)
        words = ", ".join(format_word(w) for w in lang.sorted_words())
        status = "complete" if lang.complete else "INCOMPLETE"
        print(f"mode {text:>3} up to {max_len:>2}: {{{words}}}  ({status})")

    print()
    print("Only mode t filters the language down to powers of two. Modes *")
    print("and >=1 let components stop early, so partial renamings escape;")
    print("=2 generates nothing here: from the one-symbol start form no")
    print("component can make exactly two rule applications.")


if __name__ == "__main__":
    main()
