"""Reference enumerator (oracle), bounded equivalence, nonemptiness analysis.

:func:`reference_enumerate` re-implements the bounded-language semantics from
scratch: memoized recursion over exact step counts and worklist closures,
with applicability re-derived directly from the regulation data instead of
the engine's normalized condition tables. It shares only the data model with
the engine, so disagreements between the two expose real bugs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Mode, System
from .engine import BoundedLanguage, StepBounds, enumerate_language


@dataclass(frozen=True)
class EquivVerdict:
    equal: bool
    only_in_a: tuple
    only_in_b: tuple
    complete_a: bool
    complete_b: bool
    mode_a: Mode
    mode_b: Mode
    max_len: int

    def summary(self) -> str:
        if self.equal:
            return "equal"
        bits = []
        if self.only_in_a:
            bits.append(f"{len(self.only_in_a)} word(s) only in A")
        if self.only_in_b:
            bits.append(f"{len(self.only_in_b)} word(s) only in B")
        if not self.complete_a or not self.complete_b:
            bits.append("incomplete enumeration")
        return "not equal: " + ", ".join(bits) if bits else "not equal"


class _Oracle:
    def __init__(self, system: System, bounds: StepBounds):
        self.system = system
        self.bounds = bounds
        self.steps = 0
        self.exhausted = False
        self.truncated = False
        self._exact = {}

    # -- independent applicability test ---------------------------------

    def _applicable(self, comp, idx, form):
        rule = comp.rules[idx]
        if rule.lhs not in form:
            return False
        if comp.order is not None:
            for (g, l) in comp.order.pairs:
                if l == idx and comp.rules[g].lhs in form:
                    return False
        if comp.contexts is not None:
            ctx = comp.contexts[idx]
            for s in ctx.permit:
                if s not in form:
                    return False
            for s in ctx.forbid:
                if s in form:
                    return False
        return True

    def _successors(self, comp, form):
        out = []
        for idx, rule in enumerate(comp.rules):
            if not self._applicable(comp, idx, form):
                continue
            if len(form) - 1 + len(rule.rhs) > self.bounds.workspace:
                self.truncated = True
                continue
            for pos in range(len(form)):
                if form[pos] == rule.lhs:
                    self.steps += 1
                    if self.steps > self.bounds.step_budget * 100:
                        self.exhausted = True
                        return out
                    out.append(form[:pos] + rule.rhs + form[pos + 1:])
        return out

    def _stuck(self, comp, form):
        return not any(
            self._applicable(comp, i, form) for i in range(len(comp.rules))
        )

    # -- mode relations ---------------------------------------------------

    def _exactly(self, ci, form, j):
        """Forms reachable from ``form`` in exactly j steps of component ci."""
        if j == 0:
            return frozenset({form})
        key = (ci, form, j)
        if key in self._exact:
            return self._exact[key]
        self._exact[key] = frozenset()  # cut re-entrancy; overwritten below
        comp = self.system.components[ci]
        out = set()
        for nxt in self._successors(comp, form):
            out |= self._exactly(ci, nxt, j - 1)
        res = frozenset(out)
        self._exact[key] = res
        return res

    def _star_from(self, ci, seeds):
        """Closure of a seed set under >=0 further steps of component ci."""
        comp = self.system.components[ci]
        seen = set(seeds)
        work = list(seeds)
        while work and not self.exhausted:
            form = work.pop()
            for nxt in self._successors(comp, form):
                if nxt not in seen:
                    seen.add(nxt)
                    work.append(nxt)
        return frozenset(seen)

    def mode_set(self, ci, form, mode):
        comp = self.system.components[ci]
        if mode.variant == "t":
            if self._stuck(comp, form):
                return frozenset()
            reach = self._star_from(ci, {form})
            return frozenset(f for f in reach if self._stuck(comp, f))
        if mode.variant == "*":
            return self._star_from(ci, self._exactly(ci, form, 1))
        if mode.variant == "=":
            return self._exactly(ci, form, mode.k)
        if mode.variant == "<=":
            out = set()
            for j in range(1, mode.k + 1):
                out |= self._exactly(ci, form, j)
            return frozenset(out)
        # ">="
        return self._star_from(ci, self._exactly(ci, form, mode.k))

    # -- system level ------------------------------------------------------

    def system_step(self, form, mode):
        system = self.system
        out = set()
        live = []
        for ci, comp in enumerate(system.components):
            if comp.entry is not None:
                ok = all(s in form for s in comp.entry.permit) and not any(
                    s in form for s in comp.entry.forbid
                )
                if not ok:
                    continue
            live.append(ci)
        results = {}

        def result_of(ci):
            if ci not in results:
                results[ci] = self.mode_set(ci, form, mode)
            return results[ci]

        def blocked(ci):
            if system.component_order is None:
                return False
            for (g, l) in system.component_order.pairs:
                if l == ci and g in live and not blocked(g) and result_of(g):
                    return True
            return False

        for ci in live:
            if not blocked(ci):
                out |= result_of(ci)
        return out


def _oracle_gc(system, max_len, bounds):
    words = set()
    truncated = False
    steps = 0
    exhausted = False
    by_label = {g.label: g for g in system.gc_rules}
    seen = set()
    work = [((system.start,), l) for l in system.init_labels]
    seen.update(work)
    while work:
        form, label = work.pop()
        g = by_label[label]
        nxts = []
        if g.rule.lhs in form:
            for pos in range(len(form)):
                if form[pos] == g.rule.lhs:
                    nf = form[:pos] + g.rule.rhs + form[pos + 1:]
                    if len(nf) > bounds.workspace:
                        truncated = True
                        continue
                    for l2 in g.success:
                        nxts.append((nf, l2))
        else:
            for l2 in g.failure:
                nxts.append((form, l2))
        for cfg in nxts:
            steps += 1
            if steps > bounds.step_budget * 100:
                exhausted = True
                break
            if cfg in seen:
                continue
            seen.add(cfg)
            work.append(cfg)
            nf, l2 = cfg
            if l2 in system.final_labels and len(nf) <= max_len and all(
                s in system.terminals for s in nf
            ):
                words.add(nf)
        if exhausted:
            break
    complete = not exhausted and (
        not truncated or (system.non_erasing and bounds.workspace >= max_len)
    )
    return BoundedLanguage(frozenset(words), max_len, complete)


def reference_enumerate(system, mode, max_len, bounds) -> BoundedLanguage:
    """Bounded language via the independent naive oracle."""
    if system.kind == "gc":
        return _oracle_gc(system, max_len, bounds)
    oracle = _Oracle(system, bounds)
    words = set()
    seen = {(system.start,)}
    work = [(system.start,)]
    while work and not oracle.exhausted:
        form = work.pop()
        if all(s in system.terminals for s in form):
            if len(form) <= max_len:
                words.add(form)
            continue
        for nxt in oracle.system_step(form, mode):
            if nxt not in seen:
                seen.add(nxt)
                work.append(nxt)
                if len(seen) > bounds.form_budget:
                    oracle.exhausted = True
                    break
    complete = not oracle.exhausted and (
        not oracle.truncated
        or (system.non_erasing and bounds.workspace >= max_len)
    )
    return BoundedLanguage(frozenset(words), max_len, complete)


def bounded_equiv(a, mode_a, b, mode_b, max_len, bounds) -> EquivVerdict:
    """Compare the bounded languages of two systems word-by-word.

    equal only when both enumerations are complete and the word sets match;
    differences are shortlex-sorted and truncated to 20 entries.
    """
    la = enumerate_language(a, mode_a, max_len, bounds)
    lb = enumerate_language(b, mode_b, max_len, bounds)
    key = lambda w: (len(w), w)
    only_a = tuple(sorted(la.words - lb.words, key=key)[:20])
    only_b = tuple(sorted(lb.words - la.words, key=key)[:20])
    equal = (
        la.complete and lb.complete and not only_a and not only_b
    )
    return EquivVerdict(
        equal=equal,
        only_in_a=only_a,
        only_in_b=only_b,
        complete_a=la.complete,
        complete_b=lb.complete,
        mode_a=mode_a,
        mode_b=mode_b,
        max_len=max_len,
    )


def useful_nonterminals(rules, terminal_set) -> set:
    """Least fixpoint: A is useful iff some rule A->w has every rhs symbol in
    ``terminal_set`` or already useful. Decides L(A) != empty for the plain
    context-free sub-grammar given by ``rules``."""
    terminal_set = set(terminal_set)
    useful = set()
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if rule.lhs in useful:
                continue
            if all(s in terminal_set or s in useful for s in rule.rhs):
                useful.add(rule.lhs)
                changed = True
    return useful
