"""Exact derivation semantics: per-component steps, the five cooperation
modes, entry conditions, priorities, graph control, and bounded language
enumeration.

Two evaluation paths coexist:

* a naive layered closure (``mode_apply``), the reference semantics for a
  single component activation;
* a positionwise product path used by :func:`enumerate_language` for
  components whose rule applicability reduces to symbol presence. For such
  components a derivation decomposes into independent per-position
  derivations whose step counts add up, which avoids materializing the
  exponentially many interleavings of independent rewrites.

Both paths are exact on complete runs and are differentially tested against
each other.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .core import Mode, System, format_word
from .errors import BudgetExceeded, UnknownLabel


@dataclass(frozen=True)
class StepBounds:
    """Resource bounds making closure computations finite.

    workspace: maximum sentential-form length explored;
    step_budget: maximum rule applications per mode_apply / activation;
    form_budget: maximum distinct forms per enumeration.
    """

    workspace: int
    step_budget: int = 1_000_000
    form_budget: int = 1_000_000

    def __post_init__(self):
        if self.workspace < 1 or self.step_budget < 1 or self.form_budget < 1:
            raise ValueError("bounds must be >= 1")


@dataclass(frozen=True)
class BoundedLanguage:
    """Terminal words of length <= max_len; complete means provably exact."""

    words: frozenset
    max_len: int
    complete: bool

    def sorted_words(self):
        return sorted(self.words, key=lambda w: (len(w), w))


@dataclass(frozen=True)
class GcConfig:
    form: tuple
    label: str


@dataclass(frozen=True)
class TraceStep:
    component: str
    mode: Mode
    applications: tuple  # of (rule_index, position)
    result: tuple


@dataclass(frozen=True)
class DerivationTrace:
    start: tuple
    steps: tuple

    def final_form(self):
        return self.steps[-1].result if self.steps else self.start


class _Budget:
    """Mutable step/form counters shared across one computation."""

    __slots__ = ("steps_left", "forms_left", "exhausted")

    def __init__(self, steps, forms):
        self.steps_left = steps
        self.forms_left = forms
        self.exhausted = False

    def spend_steps(self, n=1):
        self.steps_left -= n
        if self.steps_left < 0:
            self.exhausted = True
            return False
        return True

    def spend_form(self):
        self.forms_left -= 1
        if self.forms_left < 0:
            self.exhausted = True
            return False
        return True


# ---------------------------------------------------------------------------
# single-component semantics (naive, reference)
# ---------------------------------------------------------------------------

def rule_applicable(component, form, rule_idx) -> bool:
    """True iff the rule's lhs occurs and the component's regulation allows it."""
    conds = component.effective_conditions()
    if not (0 <= rule_idx < len(conds)):
        raise IndexError(f"rule index {rule_idx} out of range")
    lhs, permit, forbid = conds[rule_idx]
    support = set(form)
    return lhs in support and permit <= support and not (forbid & support)


def component_successors(component, form):
    """All (successor form, rule index, position) triples of one ⇒ step."""
    conds = component.effective_conditions()
    support = set(form)
    out = set()
    for i, (lhs, permit, forbid) in enumerate(conds):
        if lhs in support and permit <= support and not (forbid & support):
            rhs = component.rules[i].rhs
            for pos, s in enumerate(form):
                if s == lhs:
                    out.add((form[:pos] + rhs + form[pos + 1:], i, pos))
    return out


def _step_layer(component, conds, forms, workspace, budget):
    """One ⇒ layer over a set of forms. Returns (successors, truncated)."""
    out = set()
    truncated = False
    for form in forms:
        support = set(form)
        for i, (lhs, permit, forbid) in enumerate(conds):
            if lhs in support and permit <= support and not (forbid & support):
                rhs = component.rules[i].rhs
                if len(form) - 1 + len(rhs) > workspace:
                    truncated = True
                    continue
                for pos, s in enumerate(form):
                    if s == lhs:
                        if not budget.spend_steps():
                            return out, truncated
                        out.add(form[:pos] + rhs + form[pos + 1:])
    return out, truncated


def _closure(component, conds, seeds, workspace, budget):
    """⇒* closure of a set of forms. Returns (visited set, truncated)."""
    visited = set(seeds)
    frontier = set(seeds)
    truncated = False
    while frontier and not budget.exhausted:
        nxt, trunc = _step_layer(component, conds, frontier, workspace, budget)
        truncated = truncated or trunc
        frontier = nxt - visited
        visited |= frontier
    return visited, truncated


def _has_applicable(conds, form):
    support = set(form)
    return any(
        lhs in support and permit <= support and not (forbid & support)
        for (lhs, permit, forbid) in conds
    )


def _naive_mode(component, form, mode, workspace, budget):
    """Exact ⇒_i^m result set. Returns (frozenset, truncated)."""
    conds = component.effective_conditions()
    truncated = False
    if mode.variant == "t":
        if not _has_applicable(conds, form):
            return frozenset(), False
        visited, truncated = _closure(component, conds, {form}, workspace, budget)
        stuck = frozenset(f for f in visited if not _has_applicable(conds, f))
        return stuck, truncated
    if mode.variant == "*":
        layer, trunc = _step_layer(component, conds, {form}, workspace, budget)
        truncated = truncated or trunc
        visited, trunc = _closure(component, conds, layer, workspace, budget)
        return frozenset(visited), truncated or trunc
    k = mode.k
    layer = {form}
    layers = []
    for _ in range(k):
        layer, trunc = _step_layer(component, conds, layer, workspace, budget)
        truncated = truncated or trunc
        layers.append(layer)
        if not layer:
            break
    if mode.variant == "=":
        return frozenset(layers[-1] if len(layers) == k else ()), truncated
    if mode.variant == "<=":
        out = set()
        for l in layers:
            out |= l
        return frozenset(out), truncated
    # ">=": single-step closure of the =k set
    seeds = layers[-1] if len(layers) == k else set()
    visited, trunc = _closure(component, conds, seeds, workspace, budget)
    return frozenset(visited), truncated or trunc


def mode_apply(component, form, mode, bounds):
    """The exact relation ⇒_i^m from ``form``, restricted to the workspace.

    Raises :class:`BudgetExceeded` (with the partial result attached) when the
    step budget runs out before the closure is exhausted.
    """
    budget = _Budget(bounds.step_budget, bounds.form_budget)
    result, _ = _naive_mode(component, form, mode, bounds.workspace, budget)
    if budget.exhausted:
        raise BudgetExceeded(
            f"step budget exhausted in mode_apply({mode})", partial=result
        )
    return result


# ---------------------------------------------------------------------------
# positionwise product path (used by enumeration)
# ---------------------------------------------------------------------------

_LAYER_CAP = 200  # max layers computed per symbol before giving up on a cycle


class _SymbolLayers:
    """Per-symbol reachability layers under one unregulated component.

    layers[j] = forms reachable from the single symbol in exactly j steps.
    The deterministic layer sequence is computed until it revisits a value
    (cycle_start/cycle_end) so unions over unbounded step counts are finite.
    """

    __slots__ = ("layers", "cycle_start", "cycle_end", "truncated", "stuck")

    def __init__(self, component, conds, symbol, workspace, budget):
        lhs_set = {lhs for (lhs, _p, _f) in conds}
        seq = [frozenset({(symbol,)})]
        seen = {seq[0]: 0}
        self.truncated = False
        self.cycle_start = None
        self.cycle_end = None
        while True:
            nxt, trunc = _step_layer(component, conds, seq[-1], workspace, budget)
            self.truncated = self.truncated or trunc
            nxt = frozenset(nxt)
            if budget.exhausted:
                self.truncated = True
                break
            if nxt in seen:
                self.cycle_start = seen[nxt]
                self.cycle_end = len(seq)
                break
            seen[nxt] = len(seq)
            seq.append(nxt)
            if len(seq) > _LAYER_CAP:
                self.truncated = True
                break
        self.layers = seq
        all_forms = set()
        for l in seq:
            all_forms |= l
        self.stuck = frozenset(
            f for f in all_forms if not (set(f) & lhs_set)
        )

    def exact(self, j):
        """Forms reachable in exactly j steps (None if unknown past the cap)."""
        if j < len(self.layers):
            return self.layers[j]
        if self.cycle_start is None:
            return None
        period = self.cycle_end - self.cycle_start
        return self.layers[self.cycle_start + (j - self.cycle_start) % period]

    def union_from(self, j):
        """Union of layers j, j+1, ... (None if unknown past the cap)."""
        if self.cycle_start is None:
            return None
        out = set()
        for i in range(min(j, self.cycle_start), len(self.layers)):
            if i >= j or i >= self.cycle_start:
                out |= self.layers[i]
        return frozenset(out)


_GE = -1  # sentinel step value: "more than K steps achievable"


def _position_choices(info, mode, kcap, workspace):
    """Per-position (subform -> step-value set) table for the product path.

    Step values are exact counts 0..kcap, plus _GE meaning "> kcap achievable".
    Returns None if the layer data is too incomplete to be exact.
    """
    choices = {}
    for j in range(kcap + 1):
        layer = info.exact(j)
        if layer is None:
            return None
        for f in layer:
            if len(f) <= workspace:
                choices.setdefault(f, set()).add(j)
    if mode.variant in (">=", "*"):
        beyond = info.union_from(kcap + 1)
        if beyond is None:
            return None
        for f in beyond:
            if len(f) <= workspace:
                choices.setdefault(f, set()).add(_GE)
    return choices


def _product_results(enum, component, form, mode, budget):
    """Activation results via positionwise decomposition (unregulated only).

    Exact: without per-rule conditions, any interleaving of per-position
    derivations is valid and step counts add up across positions.
    """
    workspace = enum.bounds.workspace
    if mode.variant == "t":
        conds = enum.conds(component)
        if not _has_applicable(conds, form):
            return frozenset(), False
        tables = []
        truncated = False
        for s in form:
            info = enum.symbol_layers(component, s, budget)
            truncated = truncated or info.truncated
            if info.cycle_start is None:
                return None, truncated  # fall back to the naive path
            tables.append({f: {0} for f in info.stuck})
        results, trunc2 = _assemble(enum, tables, mode, 0, workspace, budget)
        return results, truncated or trunc2

    kcap = 1 if mode.variant == "*" else mode.k
    tables = []
    truncated = False
    for s in form:
        info = enum.symbol_layers(component, s, budget)
        truncated = truncated or info.truncated
        table = _position_choices(info, mode, kcap, workspace)
        if table is None:
            return None, truncated
        tables.append(table)
    results, trunc2 = _assemble(enum, tables, mode, kcap, workspace, budget)
    return results, truncated or trunc2


def _sum_feasible(sums, mode, kcap):
    if mode.variant == "=":
        return kcap in sums
    if mode.variant == "<=":
        return any(1 <= s <= kcap for s in sums)
    # ">=" and "*": need total >= kcap (kcap = 1 for "*")
    return any(s >= kcap for s in sums)


def _assemble(enum, tables, mode, kcap, workspace, budget):
    """DFS over per-position choices with support, length and step pruning."""
    n = len(tables)
    # minimal total length of positions i..n-1
    min_tail = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        min_tail[i] = min_tail[i + 1] + (
            min(len(f) for f in tables[i]) if tables[i] else 0
        )
        if not tables[i]:
            return frozenset(), False  # some position has no valid yield
    # achievable support unions of positions i..n-1 (None = too many to track)
    tail_sups = [None] * (n + 1)
    tail_sups[n] = {frozenset()}
    for i in range(n - 1, -1, -1):
        if tail_sups[i + 1] is None:
            continue
        sups = set()
        for f in tables[i]:
            fs = frozenset(f)
            for t in tail_sups[i + 1]:
                sups.add(fs | t)
                if len(sups) > 64:
                    sups = None
                    break
            if sups is None:
                break
        tail_sups[i] = sups

    saturate = kcap + 1
    results = set()
    truncated = False

    def rec(i, prefix, length, support, sums):
        nonlocal truncated
        if budget.exhausted:
            truncated = True
            return
        if i == n:
            if _sum_feasible(sums, mode, kcap) and enum.useful(support):
                if budget.spend_form():
                    results.add(prefix)
            return
        if tail_sups[i] is not None and not any(
            enum.useful(support | t) for t in tail_sups[i]
        ):
            return
        for f, values in tables[i].items():
            new_len = length + len(f)
            if new_len + min_tail[i + 1] > workspace:
                continue
            new_sums = set()
            for a in sums:
                for b in values:
                    if b == _GE or a == saturate:
                        new_sums.add(saturate)
                    else:
                        new_sums.add(min(a + b, saturate))
            if mode.variant in ("=", "<=") and min(new_sums) > kcap:
                continue
            if not budget.spend_steps():
                truncated = True
                return
            rec(i + 1, prefix + f, new_len, support | frozenset(f), new_sums)

    rec(0, (), 0, frozenset(), {0})
    return frozenset(results), truncated


# ---------------------------------------------------------------------------
# system-level semantics
# ---------------------------------------------------------------------------

def _entry_ok(component, support):
    return component.entry is None or component.entry.holds(support)


class _Enumeration:
    """Shared caches and counters for one bounded enumeration."""

    def __init__(self, system, bounds, prune=True):
        self.system = system
        self.bounds = bounds
        self.prune = prune
        self._conds = {}
        self._layers = {}
        self._useful = {}
        self.truncated = False
        self.exhausted = False
        self._eff = [
            (c, self.conds(c)) for c in system.components
        ]
        self._order_pairs = (
            system.component_order.pairs
            if system.component_order is not None
            else frozenset()
        )

    def conds(self, component):
        key = id(component)
        if key not in self._conds:
            self._conds[key] = component.effective_conditions()
        return self._conds[key]

    def symbol_layers(self, component, symbol, budget):
        key = (id(component), symbol)
        if key not in self._layers:
            self._layers[key] = _SymbolLayers(
                component, self.conds(component), symbol,
                self.bounds.workspace, budget,
            )
        return self._layers[key]

    def useful(self, support):
        """True if a form with this symbol support can still matter: it is a
        terminal word, or some component has an applicable rule on it."""
        if not self.prune:
            return True
        if support in self._useful:
            return self._useful[support]
        res = support <= self.system.terminals
        if not res:
            for comp, conds in self._eff:
                if not _entry_ok(comp, support):
                    continue
                for (lhs, permit, forbid) in conds:
                    if lhs in support and permit <= support \
                            and not (forbid & support):
                        res = True
                        break
                if res:
                    break
        self._useful[support] = res
        return res

    def activation(self, component, form, mode):
        """Exact ⇒_i^m results within bounds, fast path where possible."""
        budget = _Budget(self.bounds.step_budget, self.bounds.form_budget)
        if component.unregulated:
            results, trunc = _product_results(self, component, form, mode, budget)
            if results is not None:
                self.truncated = self.truncated or trunc
                if budget.exhausted:
                    self.exhausted = True
                return results
        results, trunc = _naive_mode(
            component, form, mode, self.bounds.workspace, budget
        )
        self.truncated = self.truncated or trunc
        if budget.exhausted:
            self.exhausted = True
        return results

    def allowed_components(self, form, mode, support):
        """Component indices permitted to act on ``form`` (entry + priority)."""
        system = self.system
        live = [
            i for i, comp in enumerate(system.components)
            if _entry_ok(comp, support)
        ]
        if not self._order_pairs:
            return live
        live_set = set(live)
        nonempty = {}

        def rel_nonempty(i):
            # nonemptiness of ⇒_i^{m,>} (priority-filtered relation)
            if i not in nonempty:
                if i not in live_set or blocked(i):
                    nonempty[i] = False
                else:
                    nonempty[i] = bool(
                        self.activation(system.components[i], form, mode)
                    )
            return nonempty[i]

        def blocked(i):
            return any(
                rel_nonempty(g)
                for (g, l) in self._order_pairs
                if l == i
            )

        return [i for i in live if not blocked(i)]


def system_successors(system, form, mode, bounds):
    """Union over components of mode_apply, filtered by entry conditions and
    priorities. Returns a set of (component name, form) pairs."""
    enum = _Enumeration(system, bounds, prune=False)
    support = frozenset(form)
    out = set()
    for i in enum.allowed_components(form, mode, support):
        comp = system.components[i]
        for res in enum.activation(comp, form, mode):
            out.add((comp.name, res))
    if enum.exhausted:
        raise BudgetExceeded("budget exhausted in system_successors", partial=out)
    return out


def gc_successors(system, config):
    """One graph-control step: apply at the label, or appearance-check."""
    by_label = {g.label: g for g in system.gc_rules}
    if config.label not in by_label:
        raise UnknownLabel(config.label)
    g = by_label[config.label]
    form = config.form
    out = set()
    if g.rule.lhs in form:
        rhs = g.rule.rhs
        for pos, s in enumerate(form):
            if s == g.rule.lhs:
                nf = form[:pos] + rhs + form[pos + 1:]
                for l in g.success:
                    out.add(GcConfig(nf, l))
    else:
        for l in g.failure:
            out.add(GcConfig(form, l))
    return out


def _enumerate_gc(system, mode, max_len, bounds):
    budget = _Budget(bounds.step_budget, bounds.form_budget)
    truncated = False
    start = (system.start,)
    initial = {GcConfig(start, l) for l in system.init_labels}
    visited = set(initial)
    queue = deque(initial)
    words = set()
    while queue:
        cfg = queue.popleft()
        for nxt in gc_successors(system, cfg):
            if len(nxt.form) > bounds.workspace:
                truncated = True
                continue
            if not budget.spend_steps():
                break
            if nxt in visited:
                continue
            if not budget.spend_form():
                break
            visited.add(nxt)
            queue.append(nxt)
            if nxt.label in system.final_labels and \
                    set(nxt.form) <= system.terminals and \
                    len(nxt.form) <= max_len:
                words.add(nxt.form)
        if budget.exhausted:
            break
    complete = not budget.exhausted and (
        not truncated
        or (system.non_erasing and bounds.workspace >= max_len)
    )
    return BoundedLanguage(frozenset(words), max_len, complete)


def enumerate_language(system, mode, max_len, bounds):
    """Breadth-first bounded language computation.

    complete=True iff the closure was exhausted within bounds, or every
    truncation is covered by the non-erasing workspace guarantee.
    """
    if max_len > bounds.workspace:
        raise ValueError("max_len exceeds workspace")
    if system.kind == "gc":
        return _enumerate_gc(system, mode, max_len, bounds)
    enum = _Enumeration(system, bounds)
    start = (system.start,)
    visited = {start}
    queue = deque([(start, -1)])
    words = set()
    forms_left = bounds.form_budget
    # Re-activating the producing component is redundant for transitively
    # closed modes: two consecutive >=k (or *, or t) activations of one
    # component compose into a single one, so the results were already
    # emitted when the parent form was expanded.
    closed_mode = mode.variant in ("*", ">=", "t")
    while queue and not enum.exhausted:
        form, producer = queue.popleft()
        support = frozenset(form)
        if support <= system.terminals:
            if len(form) <= max_len:
                words.add(form)
            continue
        for i in enum.allowed_components(form, mode, support):
            if i == producer:
                continue
            comp = system.components[i]
            for res in enum.activation(comp, form, mode):
                if res in visited:
                    continue
                if not enum.useful(frozenset(res)):
                    continue
                forms_left -= 1
                if forms_left < 0:
                    enum.exhausted = True
                    break
                visited.add(res)
                queue.append((res, i if closed_mode else -1))
            if enum.exhausted:
                break
    complete = not enum.exhausted and (
        not enum.truncated
        or (system.non_erasing and bounds.workspace >= max_len)
    )
    return BoundedLanguage(frozenset(words), max_len, complete)


# ---------------------------------------------------------------------------
# derivation search and trace replay
# ---------------------------------------------------------------------------

def _traced_step(component, conds, layer, workspace, budget):
    """One ⇒ layer over {form: path}; keeps the first path per form."""
    out = {}
    for form, path in layer.items():
        support = set(form)
        for i, (lhs, permit, forbid) in enumerate(conds):
            if lhs in support and permit <= support and not (forbid & support):
                rhs = component.rules[i].rhs
                if len(form) - 1 + len(rhs) > workspace:
                    continue
                for pos, s in enumerate(form):
                    if s == lhs:
                        if not budget.spend_steps():
                            return out
                        nf = form[:pos] + rhs + form[pos + 1:]
                        if nf not in out:
                            out[nf] = path + ((i, pos),)
    return out


def _traced_closure(component, conds, seeds, workspace, budget):
    visited = dict(seeds)
    frontier = dict(seeds)
    while frontier and not budget.exhausted:
        nxt = _traced_step(component, conds, frontier, workspace, budget)
        frontier = {f: p for f, p in nxt.items() if f not in visited}
        visited.update(frontier)
    return visited


def _traced_mode(component, form, mode, workspace, budget):
    """{result form: application path} witnesses for one activation."""
    conds = component.effective_conditions()
    if mode.variant == "t":
        if not _has_applicable(conds, form):
            return {}
        visited = _traced_closure(component, conds, {form: ()}, workspace, budget)
        return {
            f: p for f, p in visited.items() if not _has_applicable(conds, f)
        }
    if mode.variant == "*":
        layer = _traced_step(component, conds, {form: ()}, workspace, budget)
        return _traced_closure(component, conds, layer, workspace, budget)
    k = mode.k
    layer = {form: ()}
    collected = {}
    for j in range(k):
        layer = _traced_step(component, conds, layer, workspace, budget)
        if mode.variant == "<=":
            for f, p in layer.items():
                collected.setdefault(f, p)
        if not layer:
            break
    if mode.variant == "<=":
        return collected
    if mode.variant == "=":
        return layer  # empty when the k-th layer was unreachable
    # ">="
    return _traced_closure(component, conds, layer, workspace, budget)


def find_derivation(system, mode, target, bounds):
    """A replayable trace deriving ``target``, or None within the bounds."""
    target = tuple(target)
    if system.kind == "gc":
        return _find_derivation_gc(system, target, bounds)
    enum = _Enumeration(system, bounds)
    start = (system.start,)
    if start == target:
        return DerivationTrace(start, ())
    parents = {start: None}
    queue = deque([(start, -1)])
    budget = _Budget(bounds.step_budget, bounds.form_budget)
    # same redundancy skip as in enumerate_language: consecutive activations
    # of one component compose for transitively closed modes
    closed_mode = mode.variant in ("*", ">=", "t")
    while queue:
        form, producer = queue.popleft()
        support = frozenset(form)
        if support <= system.terminals:
            continue
        for i in enum.allowed_components(form, mode, support):
            if i == producer:
                continue
            comp = system.components[i]
            witnesses = _traced_mode(
                comp, form, mode, bounds.workspace, budget
            )
            for res, apps in witnesses.items():
                if res in parents or not enum.useful(frozenset(res)):
                    continue
                parents[res] = (form, comp.name, apps)
                if res == target:
                    return _build_trace(start, target, parents, mode)
                queue.append((res, i if closed_mode else -1))
            if budget.exhausted:
                return None
    return None


def _build_trace(start, target, parents, mode):
    steps = []
    cur = target
    while parents[cur] is not None:
        prev, comp_name, apps = parents[cur]
        steps.append(TraceStep(comp_name, mode, tuple(apps), cur))
        cur = prev
    steps.reverse()
    return DerivationTrace(start, tuple(steps))


def _find_derivation_gc(system, target, bounds):
    start = (system.start,)
    budget = _Budget(bounds.step_budget, bounds.form_budget)
    by_label = {g.label: i for i, g in enumerate(system.gc_rules)}
    initial = [GcConfig(start, l) for l in sorted(system.init_labels)]
    parents = {c: None for c in initial}
    queue = deque(initial)
    while queue:
        cfg = queue.popleft()
        for nxt in sorted(
            gc_successors(system, cfg), key=lambda c: (c.label, c.form)
        ):
            if len(nxt.form) > bounds.workspace or nxt in parents:
                continue
            if not budget.spend_steps():
                return None
            # record the applied position, if any, for replay
            idx = by_label[cfg.label]
            rule = system.gc_rules[idx].rule
            apps = ()
            if nxt.form != cfg.form or rule.lhs in cfg.form:
                # locate a position turning cfg.form into nxt.form
                for pos, s in enumerate(cfg.form):
                    if s == rule.lhs and \
                            cfg.form[:pos] + rule.rhs + cfg.form[pos + 1:] == nxt.form:
                        apps = ((idx, pos),)
                        break
            parents[nxt] = (cfg, nxt.label, apps)
            if nxt.form == target and nxt.label in system.final_labels:
                steps = []
                cur = nxt
                while parents[cur] is not None:
                    prev, label, apps = parents[cur]
                    steps.append(TraceStep(label, Mode("*"), apps, cur.form))
                    cur = prev
                steps.reverse()
                return DerivationTrace(start, tuple(steps))
            queue.append(nxt)
    return None


def replay_trace(system, trace):
    """Re-execute a trace, verifying every application. Returns the final form.

    Raises ValueError on any mismatch with the recorded intermediate forms.
    """
    form = trace.start
    for step in trace.steps:
        if system.kind == "gc":
            by_label = {g.label: g for g in system.gc_rules}
            g = by_label[step.component]
            if step.applications:
                (_idx, pos) = step.applications[0]
                if form[pos] != g.rule.lhs:
                    raise ValueError("replay mismatch: lhs not at position")
                form = form[:pos] + g.rule.rhs + form[pos + 1:]
            if form != step.result:
                raise ValueError("replay mismatch: form differs from record")
            continue
        comp = system.component_named(step.component)
        for (idx, pos) in step.applications:
            if not rule_applicable(comp, form, idx):
                raise ValueError(
                    f"replay mismatch: rule {idx} not applicable on "
                    f"{format_word(form)}"
                )
            rule = comp.rules[idx]
            if pos >= len(form) or form[pos] != rule.lhs:
                raise ValueError("replay mismatch: lhs not at position")
            form = form[:pos] + rule.rhs + form[pos + 1:]
        mode = step.mode
        n = len(step.applications)
        if mode.variant == "=" and n != mode.k:
            raise ValueError("replay mismatch: wrong step count for =k")
        if mode.variant == "<=" and not (1 <= n <= mode.k):
            raise ValueError("replay mismatch: wrong step count for <=k")
        if mode.variant == ">=" and n < mode.k:
            raise ValueError("replay mismatch: wrong step count for >=k")
        if mode.variant == "*" and n < 1:
            raise ValueError("replay mismatch: empty *-activation")
        if mode.variant == "t" and _has_applicable(
            comp.effective_conditions(), form
        ):
            raise ValueError("replay mismatch: t-activation left a live form")
        if form != step.result:
            raise ValueError("replay mismatch: form differs from record")
    return form
