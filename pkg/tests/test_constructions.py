"""Tests for the grammar-to-grammar transformations."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rrw import (
    Component,
    KindError,
    Mode,
    ModeError,
    PermitPresent,
    RcCondition,
    Rule,
    StepBounds,
    System,
    apply_construction,
    bounded_equiv,
    cdfrc_eq2_to_eqk,
    cdfrc_geqk_to_geq2,
    cdfrc_to_frccd,
    cdfrc_to_pcd,
    close_order,
    frc_to_ordered_component,
    frccd_collapse_to_single,
    frccd_eq2_to_k,
    frccd_to_eq2,
    gc_to_ocdgs,
    ocdgs_t_to_ordered,
    ord_to_frc,
    ordered_to_frc_component,
    pcd_to_cdfrc,
    rule_applicable,
    validate,
)

from conftest import load_corpus

T = Mode.parse("t")


def frc_component(rules_with_forbids, name="P"):
    rules = tuple(Rule(lhs, rhs) for (lhs, rhs, _) in rules_with_forbids)
    contexts = tuple(
        RcCondition(forbid=f) for (_, _, f) in rules_with_forbids
    )
    return Component(name, rules, contexts=contexts)


# ---------------------------------------------------------------------------
# forbid sets <-> rule orders
# ---------------------------------------------------------------------------

def test_frc_to_ordered_single_rule():
    comp = frc_component([("B", ("A", "A"), {"C"})])
    out = frc_to_ordered_component(comp)
    assert [(r.lhs, r.rhs) for r in out.rules[:1]] == [("B", ("A", "A"))]
    guard = out.rules[1]
    assert guard.lhs == "C"
    assert out.order.pairs == frozenset({(1, 0)})


def test_frc_to_ordered_empty_forbid_is_orderless():
    comp = frc_component([("A", ("a",), set())])
    out = frc_to_ordered_component(comp)
    assert len(out.rules) == 1
    assert not out.order


def test_frc_to_ordered_shares_guard_rules():
    comp = frc_component([
        ("A", ("a",), {"C"}),
        ("B", ("b",), {"C"}),
    ])
    out = frc_to_ordered_component(comp)
    guards = [r for r in out.rules if r.lhs == "C"]
    assert len(guards) == 1
    guard_idx = out.rules.index(guards[0])
    assert out.order.pairs == frozenset({(guard_idx, 0), (guard_idx, 1)})


def test_ordered_to_frc_example_component():
    comp = Component(
        "P2",
        (Rule("C", ("C",)), Rule("B", ("A", "A"))),
        order=close_order({(0, 1)}),
    )
    out = ordered_to_frc_component(comp)
    assert out.contexts[0].forbid == frozenset()
    assert out.contexts[1].forbid == frozenset({"C"})


def test_ordered_to_frc_empty_order():
    comp = Component("P", (Rule("A", ("a",)), Rule("B", ("b",))))
    out = ordered_to_frc_component(comp)
    assert all(ctx.forbid == frozenset() for ctx in out.contexts)


def test_ordered_to_frc_chain_collects_all_greater_lhs():
    comp = Component(
        "P",
        (Rule("A", ("a",)), Rule("B", ("b",)), Rule("C", ("c",))),
        order=close_order({(0, 1), (1, 2)}),
    )
    out = ordered_to_frc_component(comp)
    assert out.contexts[2].forbid == frozenset({"A", "B"})


# symbols available to the hypothesis component generator
_NTS = ("A", "B", "C", "D")

_rule = st.tuples(
    st.sampled_from(_NTS),
    st.lists(st.sampled_from(_NTS), max_size=3).map(tuple),
    st.sets(st.sampled_from(_NTS), max_size=2).map(frozenset),
)


def _all_forms(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


@settings(max_examples=60, deadline=None)
@given(st.lists(_rule, min_size=1, max_size=4))
def test_frc_ordered_conversion_is_a_per_step_bisimulation(rule_specs):
    comp = frc_component(rule_specs)
    ordered = frc_to_ordered_component(comp, avoid=_NTS)
    n = len(comp.rules)
    for form in _all_forms(_NTS, 3):
        for i in range(n):
            assert rule_applicable(comp, form, i) == \
                rule_applicable(ordered, form, i)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(_rule, min_size=1, max_size=4),
    st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=4),
)
def test_ordered_frc_round_trip_preserves_applicability(rule_specs, pairs):
    rules = tuple(Rule(lhs, rhs) for (lhs, rhs, _) in rule_specs)
    pairs = {(g, l) for (g, l) in pairs if g < len(rules) and l < len(rules)}
    try:
        order = close_order(pairs, size=len(rules))
    except Exception:
        return
    comp = Component("P", rules, order=order)
    back = frc_to_ordered_component(ordered_to_frc_component(comp),
                                    avoid=_NTS)
    for form in _all_forms(_NTS, 3):
        for i in range(len(rules)):
            assert rule_applicable(comp, form, i) == \
                rule_applicable(back, form, i)


# ---------------------------------------------------------------------------
# structural counts pinned by each construction's recipe
# ---------------------------------------------------------------------------

def test_gc_to_ocdgs_component_count():
    gc = load_corpus("gc_fin.rrw")  # 3 labeled rules
    out, report = gc_to_ocdgs(gc, Mode.parse("=2"))
    assert len(out.components) == 3 * 3 + 2
    assert report.components == len(out.components)
    assert validate(out) == []


def test_gc_to_ocdgs_compact_component_count():
    # compact replacement: init + termination + 2 per rule, for a grammar
    # whose success fields never target the rule's own label
    gc = load_corpus("gc_fin.rrw")
    no_self = System(
        kind="gc",
        name="gcx",
        nonterminals=gc.nonterminals,
        terminals=gc.terminals,
        start=gc.start,
        gc_rules=tuple(
            type(g)(g.label, g.rule, g.success - {g.label}, g.failure)
            for g in gc.gc_rules
        ),
        init_labels=gc.init_labels,
        final_labels=gc.final_labels,
    )
    out, _ = gc_to_ocdgs(no_self, Mode.parse("=2"), compact_erasing=True)
    assert len(out.components) == 2 + 2 * 3
    assert validate(out) == []


def test_gc_to_ocdgs_orders_are_two_layered():
    gc = load_corpus("gc_choice.rrw")
    for compact in (False, True):
        out, _ = gc_to_ocdgs(gc, Mode.parse(">=2"), compact)
        for comp in out.components:
            if comp.order is None:
                continue
            # longest chain in a two-layer order has at most 3 rules
            for (a, b) in comp.order.pairs:
                for (c, d) in comp.order.pairs:
                    if b == c:
                        assert not any(
                            d == e for (e, _) in comp.order.pairs
                        ), "order chain longer than 3 rules"


def test_gc_to_ocdgs_rejects_weak_modes():
    gc = load_corpus("gc_fin.rrw")
    for text in ("t", "*", "=1", "<=2", ">=1"):
        with pytest.raises(ModeError):
            gc_to_ocdgs(gc, Mode.parse(text))


def test_ocdgs_t_to_ordered_nonterminal_count(example1):
    out, _ = ocdgs_t_to_ordered(example1)
    # {S} plus marked and transition copies of 3 nonterminals, 3 components
    assert len(out.nonterminals) == 1 + 3 * 3 + 3 * 9
    assert out.kind == "ordered"
    assert validate(out) == []


def test_ocdgs_t_to_ordered_single_component():
    single = load_corpus("ordered_chain.rrw")
    out, _ = ocdgs_t_to_ordered(single)
    assert validate(out) == []
    verdict = bounded_equiv(single, T, out, T, 4, StepBounds(10))
    assert verdict.equal, verdict.summary()


def test_frccd_merge_unions_rules():
    system = load_corpus("frccd_loops.rrw")  # 3 components
    out, _ = frccd_collapse_to_single(system, Mode.parse("*"))
    assert len(out.components) == 1
    assert len(out.components[0].rules) == sum(
        len(c.rules) for c in system.components
    )


def test_frccd_merge_rejects_strong_modes():
    system = load_corpus("frccd_loops.rrw")
    for text in (">=2", "=2", "t"):
        with pytest.raises(ModeError):
            frccd_collapse_to_single(system, Mode.parse(text))


def test_frccd_to_eq2_component_counts():
    system = load_corpus("frccd_pair.rrw")  # n = 2 components
    out_ge, _ = frccd_to_eq2(system, Mode.parse(">=3"))
    assert len(out_ge.components) == 1 + 2 * (3 + 2)
    out_eq, _ = frccd_to_eq2(system, Mode.parse("=3"))
    assert len(out_eq.components) == 1 + 2 * (3 + 1)


def test_frccd_to_eq2_output_is_erasing():
    system = load_corpus("frccd_small.rrw")
    out, report = frccd_to_eq2(system, Mode.parse("=2"))
    assert not out.non_erasing
    assert any("erasing" in note for note in report.notes)


def test_frccd_eq2_to_k_component_count():
    system = load_corpus("frccd_pair.rrw")  # n = 2
    out, _ = frccd_eq2_to_k(system, 3, Mode.parse("=3"))
    assert len(out.components) == 2 + 1
    assert validate(out) == []


def test_cdfrc_to_frccd_component_count():
    system = load_corpus("entry_witness.rrw")  # n = 3
    out, _ = cdfrc_to_frccd(system, Mode.parse(">=2"))
    assert len(out.components) == 2 * 3 + 2
    assert validate(out) == []


def test_cdfrc_to_frccd_t_mode_has_no_guard_loops():
    system = load_corpus("entry_witness.rrw")
    out, _ = cdfrc_to_frccd(system, T)
    fresh = out.nonterminals - system.nonterminals
    self_loops = [
        r for c in out.components for r in c.rules
        if r.lhs in fresh and r.rhs == (r.lhs,)
    ]
    assert self_loops == []
    # while the >=k variant does carry them
    out_ge, _ = cdfrc_to_frccd(system, Mode.parse(">=2"))
    fresh_ge = out_ge.nonterminals - system.nonterminals
    assert any(
        r.lhs in fresh_ge and r.rhs == (r.lhs,)
        for c in out_ge.components for r in c.rules
    )


def test_cdfrc_to_frccd_rejects_counted_modes():
    system = load_corpus("entry_witness.rrw")
    for text in ("=1", "=2", "<=2"):
        with pytest.raises(ModeError):
            cdfrc_to_frccd(system, Mode.parse(text))


def test_cdfrc_to_frccd_rejects_permit_entries():
    base = load_corpus("entry_pair.rrw")
    with_permit = System(
        kind="entry-cdgs",
        name=base.name,
        nonterminals=base.nonterminals,
        terminals=base.terminals,
        start=base.start,
        components=tuple(
            Component(
                c.name, c.rules,
                entry=RcCondition(permit={"S"}) if i == 0 else c.entry,
            )
            for i, c in enumerate(base.components)
        ),
    )
    with pytest.raises(PermitPresent):
        cdfrc_to_frccd(with_permit, Mode.parse(">=1"))


def test_cdfrc_eq2_to_eqk_adds_counter_chain():
    system = load_corpus("entry_pair.rrw")
    out, _ = cdfrc_eq2_to_eqk(system, 4)
    fresh = out.nonterminals - system.nonterminals
    assert fresh, "prolongation introduced no counters"
    assert validate(out) == []


def test_cdfrc_to_pcd_counts_and_priorities():
    system = load_corpus("entry_witness.rrw")  # n = 3, all F_i nonempty
    out, _ = cdfrc_to_pcd(system, Mode.parse(">=2"))
    assert len(out.components) == 6
    assert len(out.component_order.pairs) == 3


def test_cdfrc_to_pcd_omits_empty_fail_components():
    base = load_corpus("entry_pair.rrw")
    relaxed = System(
        kind="entry-cdgs",
        name=base.name,
        nonterminals=base.nonterminals,
        terminals=base.terminals,
        start=base.start,
        components=tuple(
            Component(c.name, c.rules, entry=RcCondition())
            for c in base.components
        ),
    )
    out, _ = cdfrc_to_pcd(relaxed, Mode.parse("*"))
    assert len(out.components) == len(base.components)
    assert not out.component_order or not out.component_order.pairs


def test_pcd_to_cdfrc_forbids_higher_lhs():
    system = load_corpus("pcd_chain.rrw")  # P2 {A -> a} > P3 {B -> ...}
    out, _ = pcd_to_cdfrc(system, Mode.parse("<=3"))
    p3 = out.component_named("P3")
    assert p3.entry.forbid == frozenset({"A"})
    p2 = out.component_named("P2")
    assert p2.entry.forbid == frozenset()


def test_pcd_to_cdfrc_t_mode_drops_dead_lhs():
    # under t the forbid sets keep only lhs symbols with nonempty languages
    dead_rule = Rule("A", ("A",))
    system = System(
        kind="pcdgs",
        name="p",
        nonterminals=frozenset({"S", "A", "B"}),
        terminals=frozenset({"a", "b"}),
        start="S",
        components=(
            Component("P1", (Rule("S", ("A", "B")),)),
            Component("P2", (dead_rule,)),
            Component("P3", (Rule("B", ("b",)),)),
        ),
        component_order=close_order({(1, 2)}),
    )
    out, _ = pcd_to_cdfrc(system, T)
    assert out.component_named("P3").entry.forbid == frozenset()


def test_pcd_to_cdfrc_rejects_counted_modes():
    system = load_corpus("pcd_chain.rrw")
    for text in ("=2", ">=2"):
        with pytest.raises(ModeError):
            pcd_to_cdfrc(system, Mode.parse(text))


def test_cdfrc_geqk_to_geq2_component_count():
    system = load_corpus("entry_loops.rrw")  # n = 3
    out, _ = cdfrc_geqk_to_geq2(system, 3)
    assert len(out.components) == 2 + 3 * (3 + 3)
    assert validate(out) == []


# ---------------------------------------------------------------------------
# shared guarantees
# ---------------------------------------------------------------------------

def test_outputs_validate_and_fresh_names_are_disjoint():
    cases = [
        ("frc-to-ord", "frccd_small.rrw", None),
        ("ord-to-frc", "ocdgs_example1.rrw", None),
        ("gc-to-ocdgs", "gc_fin.rrw", "=2"),
        ("ocdgs-t-to-ord", "ocdgs_example1.rrw", None),
        ("frccd-merge", "frccd_small.rrw", "*"),
        ("frccd-to-eq2", "frccd_pair.rrw", "=2"),
        ("frccd-eq2-to-k", "frccd_pair.rrw", "=3"),
        ("cdfrc-to-frccd", "entry_witness.rrw", ">=2"),
        ("frccd-eq2-to-cdfrc", "frccd_pair.rrw", "=2"),
        ("cdfrc-eq2-to-eqk", "entry_pair.rrw", "=3"),
        ("cdfrc-to-pcd", "entry_witness.rrw", ">=1"),
        ("pcd-to-cdfrc", "pcd_chain.rrw", "*"),
        ("cdfrc-geqk-to-geq2", "entry_loops.rrw", ">=3"),
    ]
    for name, path, mode_text in cases:
        system = load_corpus(path)
        mode = None if mode_text is None else Mode.parse(mode_text)
        out, report = apply_construction(name, system, mode=mode)
        assert validate(out) == [], f"{name} output fails validation"
        fresh = out.nonterminals - system.nonterminals
        assert not (fresh & system.terminals), name
        assert report.fresh_nonterminals == len(fresh), name


def test_apply_construction_rejects_unknown_name():
    with pytest.raises((KeyError, ValueError)):
        apply_construction("no-such-thing", load_corpus("cf_anbn.rrw"))


def test_apply_construction_rejects_wrong_kind():
    with pytest.raises(KindError):
        apply_construction("gc-to-ocdgs", load_corpus("cf_anbn.rrw"),
                           mode=Mode.parse("=2"))
