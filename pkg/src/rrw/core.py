"""Immutable data model for all grammar formalisms.

Symbols are plain strings; a :class:`System` carries the nonterminal and
terminal alphabets as sets, which determine each symbol's kind. Sentential
forms are tuples of symbol strings. All values are frozen dataclasses and may
be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import CycleError, ValidationError

Form = tuple  # tuple of symbol strings

KINDS = (
    "cf",
    "ordered",
    "cdgs",
    "ocdgs",
    "rccdgs",
    "frccdgs",
    "gc",
    "entry-cdgs",
    "pcdgs",
)

# Kinds whose components carry per-rule random-context conditions.
_CONTEXT_KINDS = ("rccdgs", "frccdgs")
# Kinds whose components carry per-component rule orders.
_ORDER_KINDS = ("ordered", "ocdgs")


@dataclass(frozen=True)
class Rule:
    """A context-free production lhs -> rhs; empty rhs is the empty word."""

    lhs: str
    rhs: tuple
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))


@dataclass(frozen=True)
class RcCondition:
    """Random-context test: all of ``permit`` present, none of ``forbid``."""

    permit: frozenset = frozenset()
    forbid: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "permit", frozenset(self.permit))
        object.__setattr__(self, "forbid", frozenset(self.forbid))

    def holds(self, support) -> bool:
        return self.permit <= support and not (self.forbid & support)


@dataclass(frozen=True)
class StrictOrder:
    """A strict partial order as a transitively closed set of (greater, lesser)
    index pairs. Build through :func:`close_order`."""

    pairs: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))

    def greater_than(self, idx):
        """Indices strictly greater than ``idx``."""
        return {g for (g, l) in self.pairs if l == idx}

    def __bool__(self):
        return bool(self.pairs)


def close_order(pairs, size=None) -> StrictOrder:
    """Transitively close a set of (greater, lesser) index pairs.

    Raises :class:`CycleError` if the closure would contain (i, i) (which
    covers asymmetry: (i, j) and (j, i) close to (i, i)). With ``size`` given,
    raises :class:`IndexError` for indices outside ``range(size)``.
    """
    closed = set()
    for g, l in pairs:
        if size is not None and not (0 <= g < size and 0 <= l < size):
            raise IndexError(f"order pair ({g},{l}) references a missing rule")
        closed.add((g, l))
    changed = True
    while changed:
        changed = False
        for (a, b) in list(closed):
            for (c, d) in list(closed):
                if b == c and (a, d) not in closed:
                    closed.add((a, d))
                    changed = True
    for (a, b) in closed:
        if a == b:
            raise CycleError(f"order closure contains ({a},{a})")
    return StrictOrder(frozenset(closed))


@dataclass(frozen=True)
class Component:
    """One cooperating component: rules plus its regulation.

    ``order`` holds the rule order for ordered components, ``contexts`` the
    per-rule random-context conditions for (f)rc components, ``entry`` the
    activation condition for entry-condition systems. Unused fields are None.
    """

    name: str
    rules: tuple
    order: StrictOrder | None = None
    contexts: tuple | None = None
    entry: RcCondition | None = None

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.contexts is not None:
            object.__setattr__(self, "contexts", tuple(self.contexts))

    @property
    def lhs_set(self) -> frozenset:
        return frozenset(r.lhs for r in self.rules)

    def effective_conditions(self):
        """Per-rule (lhs, permit, forbid) triples folding the regulation in.

        For ordered components the forbid set is the set of left-hand sides of
        strictly greater rules, which is exactly the applicability condition.
        """
        out = []
        for i, rule in enumerate(self.rules):
            permit = frozenset()
            forbid = frozenset()
            if self.contexts is not None:
                permit = self.contexts[i].permit
                forbid = self.contexts[i].forbid
            if self.order is not None and self.order:
                forbid = forbid | frozenset(
                    self.rules[g].lhs for g in self.order.greater_than(i)
                )
            out.append((rule.lhs, permit, forbid))
        return tuple(out)

    @property
    def unregulated(self) -> bool:
        """True when applicability reduces to lhs presence for every rule."""
        if self.contexts is not None and any(
            c.permit or c.forbid for c in self.contexts
        ):
            return False
        if self.order is not None and self.order:
            return False
        return True


@dataclass(frozen=True)
class GcRule:
    """A labeled graph-control rule with success and failure fields."""

    label: str
    rule: Rule
    success: frozenset = frozenset()
    failure: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "success", frozenset(self.success))
        object.__setattr__(self, "failure", frozenset(self.failure))


@dataclass(frozen=True)
class Mode:
    """Cooperation protocol: t, *, =k, <=k or >=k with k >= 1."""

    variant: str  # "t", "*", "=", "<=", ">="
    k: int | None = None

    _VARIANTS = ("t", "*", "=", "<=", ">=")

    def __post_init__(self):
        if self.variant not in self._VARIANTS:
            raise ValueError(f"unknown mode variant {self.variant!r}")
        if self.variant in ("t", "*"):
            if self.k is not None:
                raise ValueError(f"mode {self.variant} takes no k")
        elif self.k is None or self.k < 1:
            raise ValueError(f"mode {self.variant} needs k >= 1")

    @classmethod
    def parse(cls, text: str) -> "Mode":
        text = text.strip()
        if text in ("t", "*"):
            return cls(text)
        for prefix in ("<=", ">=", "="):
            if text.startswith(prefix):
                rest = text[len(prefix):]
                if not rest.isdigit():
                    break
                return cls(prefix, int(rest))
        raise ValueError(f"cannot parse mode {text!r}")

    def __str__(self):
        if self.variant in ("t", "*"):
            return self.variant
        return f"{self.variant}{self.k}"


@dataclass(frozen=True)
class System:
    """A grammar system of one of the supported kinds."""

    kind: str
    name: str
    nonterminals: frozenset
    terminals: frozenset
    start: str
    components: tuple = ()
    gc_rules: tuple = ()
    init_labels: frozenset = frozenset()
    final_labels: frozenset = frozenset()
    component_order: StrictOrder | None = None
    default_mode: Mode | None = None

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "gc_rules", tuple(self.gc_rules))
        object.__setattr__(self, "init_labels", frozenset(self.init_labels))
        object.__setattr__(self, "final_labels", frozenset(self.final_labels))

    @property
    def alphabet(self) -> frozenset:
        return self.nonterminals | self.terminals

    @property
    def non_erasing(self) -> bool:
        """True iff no rule has an empty right-hand side (derived, not stored)."""
        return all(len(r.rhs) > 0 for r in self.all_rules())

    def all_rules(self):
        if self.kind == "gc":
            return [g.rule for g in self.gc_rules]
        return [r for c in self.components for r in c.rules]

    def component_named(self, name: str):
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)

    def kind_of(self, symbol: str) -> str:
        if symbol in self.nonterminals:
            return "nonterminal"
        if symbol in self.terminals:
            return "terminal"
        raise KeyError(symbol)

    def with_default_mode(self, mode: Mode | None) -> "System":
        return replace(self, default_mode=mode)


def _check_order_strict(order: StrictOrder, size: int, where: str, out: list):
    for (g, l) in order.pairs:
        if not (0 <= g < size and 0 <= l < size):
            out.append(f"{where}: order pair ({g},{l}) out of range")
        if g == l:
            out.append(f"{where}: order is not irreflexive at {g}")
        if (l, g) in order.pairs:
            out.append(f"{where}: order is not asymmetric on ({g},{l})")
    for (a, b) in order.pairs:
        for (c, d) in order.pairs:
            if b == c and (a, d) not in order.pairs:
                out.append(f"{where}: order is not transitively closed at ({a},{d})")


def validate(system: System) -> list:
    """Return the complete list of violated invariants (empty means valid)."""
    v = []
    if system.kind not in KINDS:
        v.append(f"unknown kind {system.kind!r}")
        return v
    overlap = system.nonterminals & system.terminals
    if overlap:
        v.append(f"alphabets overlap on {sorted(overlap)}")
    for s in system.alphabet:
        if not s:
            v.append("empty symbol name")
    if system.start not in system.nonterminals:
        v.append(f"start symbol {system.start!r} is not a nonterminal")

    def check_rule(rule: Rule, where: str):
        if rule.lhs not in system.nonterminals:
            v.append(f"{where}: lhs {rule.lhs!r} is not a nonterminal")
        for s in rule.rhs:
            if s not in system.alphabet:
                v.append(f"{where}: rhs symbol {s!r} undeclared")

    if system.kind == "gc":
        if system.components:
            v.append("gc systems carry gc rules, not components")
        if not system.gc_rules:
            v.append("gc system has no rules")
        labels = [g.label for g in system.gc_rules]
        if len(set(labels)) != len(labels):
            v.append("gc labels are not injective")
        label_set = set(labels)
        for g in system.gc_rules:
            check_rule(g.rule, f"rule {g.label}")
            for l in g.success | g.failure:
                if l not in label_set:
                    v.append(f"rule {g.label}: unknown target label {l!r}")
        for l in system.init_labels | system.final_labels:
            if l not in label_set:
                v.append(f"unknown init/final label {l!r}")
        if not system.init_labels:
            v.append("gc system has no initial labels")
        if not system.final_labels:
            v.append("gc system has no final labels")
        return v

    if system.gc_rules or system.init_labels or system.final_labels:
        v.append("labels/gc rules are only allowed in gc systems")
    if not system.components:
        v.append("system has no components")
    if system.kind in ("cf", "ordered") and len(system.components) > 1:
        v.append(f"kind {system.kind} must have exactly one component")
    names = [c.name for c in system.components]
    if len(set(names)) != len(names):
        v.append("component names are not unique")
    if system.component_order is not None and system.kind != "pcdgs":
        v.append("component order is only allowed in pcdgs systems")
    if system.component_order is not None:
        _check_order_strict(
            system.component_order, len(system.components), "component order", v
        )

    for comp in system.components:
        where = f"component {comp.name}"
        if not comp.rules:
            v.append(f"{where}: empty rule set")
        labels = [r.label for r in comp.rules if r.label is not None]
        if len(set(labels)) != len(labels):
            v.append(f"{where}: duplicate rule labels")
        for i, rule in enumerate(comp.rules):
            check_rule(rule, f"{where} rule {i}")
        if comp.order is not None and system.kind not in _ORDER_KINDS:
            v.append(f"{where}: rule order not allowed in kind {system.kind}")
        if comp.order is not None:
            _check_order_strict(comp.order, len(comp.rules), where, v)
        if comp.contexts is not None:
            if system.kind not in _CONTEXT_KINDS:
                v.append(f"{where}: rule contexts not allowed in kind {system.kind}")
            elif len(comp.contexts) != len(comp.rules):
                v.append(f"{where}: {len(comp.contexts)} contexts for "
                         f"{len(comp.rules)} rules")
            else:
                for i, ctx in enumerate(comp.contexts):
                    if ctx.permit & ctx.forbid:
                        v.append(f"{where} rule {i}: permit and forbid overlap")
                    if system.kind == "frccdgs" and ctx.permit:
                        v.append(f"{where} rule {i}: frc rules take no permit set")
                    for s in ctx.permit | ctx.forbid:
                        if s not in system.nonterminals:
                            v.append(f"{where} rule {i}: context symbol {s!r} "
                                     "is not a nonterminal")
        elif system.kind in _CONTEXT_KINDS:
            v.append(f"{where}: kind {system.kind} requires per-rule contexts")
        if comp.entry is not None:
            if system.kind != "entry-cdgs":
                v.append(f"{where}: entry condition not allowed in kind "
                         f"{system.kind}")
            else:
                if comp.entry.permit & comp.entry.forbid:
                    v.append(f"{where}: entry permit and forbid overlap")
                for s in comp.entry.permit | comp.entry.forbid:
                    if s not in system.nonterminals:
                        v.append(f"{where}: entry symbol {s!r} is not a nonterminal")
        elif system.kind == "entry-cdgs":
            v.append(f"{where}: kind entry-cdgs requires an entry condition")
    return v


def check(system: System) -> System:
    """Validate; raise :class:`ValidationError` on any violation."""
    violations = validate(system)
    if violations:
        raise ValidationError(violations)
    return system


def with_positional_labels(component: Component) -> Component:
    """Fill missing rule labels with positional names r1, r2, ..."""
    rules = tuple(
        r if r.label is not None else replace(r, label=f"r{i + 1}")
        for i, r in enumerate(component.rules)
    )
    return replace(component, rules=rules)


def format_word(form) -> str:
    """Render a form; symbols are concatenated when all are single characters."""
    if not form:
        return "eps"
    if all(len(s) == 1 for s in form):
        return "".join(form)
    return " ".join(form)


def shortlex_key(form):
    return (len(form), form)
