from __future__ import annotations

import pytest

from filled_groups import build_group, classify_filled, known_filled_members, quotient
from filled_groups.classifier import KNOWN_FILLED_TABLE, MEMO, ClassifierFlags, _Memo, table_match
from filled_groups.elemset import ElemSet
from filled_groups.errors import OrderOutOfRange
from filled_groups.groups import FiniteGroup, fingerprint
from filled_groups.search import SearchConfig, Verdict, verify_witness

from acceptance_set import up_to

PURE = ClassifierFlags(pure_search=True, use_2kp_shortcut=False)


def _check_evidence(v: Verdict, group):
    if v.witness is not None:
        assert verify_witness(group, v.witness).is_nonfilling_lmpfs
    if v.filled is True and "exhaustive-filled" in v.rule_chain:
        assert v.stats["exhaustive_orbits_examined"] == v.stats["exhaustive_orbits"]


def test_known_members():
    assert known_filled_members(16) == ["EA(16)", "D(8)xC(2)"]
    assert known_filled_members(32) == ["EA(32)", "ESM(32)"]
    assert known_filled_members(7) == []
    with pytest.raises(OrderOutOfRange):
        known_filled_members(33)
    with pytest.raises(OrderOutOfRange):
        known_filled_members(0)


def test_table_is_structural():
    assert table_match(build_group("D(8)*Q(8)")) == "ESM(32)"
    assert table_match(build_group("C(2)xC(2)xC(2)")) == "EA(8)"
    assert table_match(build_group("C(6)")) is None
    assert table_match(build_group("ESP(32)")) is None
    assert table_match(build_group("C(2)xD(8)")) == "D(8)xC(2)"


def test_c3_uses_table():
    v = classify_filled(build_group("C(3)"), memo=None)
    assert v.filled is True and v.rule_chain == ["table"]


@pytest.mark.parametrize("spec", ["Q(8)", "Q(16)", "Q(32)"])
def test_quaternion_not_filled(spec):
    assert classify_filled(build_group(spec), memo=None).filled is False


def test_order_24():
    g = build_group("D(24)")
    on = classify_filled(g, ClassifierFlags(table_bypass=True), memo=None)
    assert on.filled is False
    g48 = build_group("D(24)xC(2)")
    assert classify_filled(g48, memo=None).rule_chain == ["2^k*p"]
    off = classify_filled(g48, ClassifierFlags(use_2kp_shortcut=False), memo=None)
    assert off.filled is False and "2^k*p" not in off.rule_chain


@pytest.mark.parametrize("spec, tag", [("C(9)xC(5)", "odd-order"), ("EA(64)", "elementary-abelian"), ("C(2)xC(128)", "2^k,k>7"),
                                       ("C(8)xC(8)", "abelian"), ("D(64)", "dihedral"), ("Q(64)", "generalized-quaternion")])
def test_shortcut_rules(spec, tag):
    v = classify_filled(build_group(spec), memo=None)
    assert v.rule_chain[-1] == tag


def test_normal_index_3_rule():
    v = classify_filled(build_group("D(6)xC(6)"), ClassifierFlags(use_2kp_shortcut=False), memo=None)
    assert v.filled is False
    assert v.rule_chain[0] == "normal-subgroups"


@pytest.mark.parametrize("spec", up_to(32))
def test_pure_search_agrees_with_table(spec):
    g = build_group(spec)
    v = classify_filled(g, PURE)
    _check_evidence(v, g)
    assert v.filled is (table_match(g) is not None)
    assert v.filled is (spec in KNOWN_FILLED_TABLE or spec == "D(8)*Q(8)")


@pytest.mark.parametrize("spec", up_to(64))
def test_2kp_shortcut_is_sound(spec):
    g = build_group(spec)
    opt = SearchConfig(exhaustive_opt_in=True)
    on = classify_filled(g, ClassifierFlags(budgets=opt))
    off = classify_filled(g, ClassifierFlags(use_2kp_shortcut=False, budgets=opt))
    assert on.filled == off.filled is not None


@pytest.mark.parametrize("spec", ["D(8)xC(6)", "Q(8)xC(6)", "D(16)xC(3)", "C(3)xEA(16)", "D(40)", "ESC4(64)", "D(8)xD(8)"])
def test_quotient_rule_reproduces(spec):
    g = build_group(spec)
    v = classify_filled(g, ClassifierFlags(use_2kp_shortcut=False), memo=None)
    assert v.filled is False
    _check_evidence(v, g)
    if any(tag.startswith("quotient-not-filled") for tag in v.rule_chain):
        n = ElemSet.from_indices(g, v.details["normal_subgroup"])
        again = classify_filled(quotient(g, n), ClassifierFlags(use_2kp_shortcut=False), memo=None)
        assert again.filled is False


def test_attach_witness():
    for spec in ("Q(16)", "D(64)", "C(9)"):
        g = build_group(spec)
        v = classify_filled(g, ClassifierFlags(attach_witness=True), memo=None)
        assert v.filled is False and v.witness is not None
        assert v.rule_chain[-1] in ("witness:nfs", "witness:exhaustive")
        _check_evidence(v, g)


def test_undecided_at_budget():
    g = build_group("(D(8)*Q(8))xC(2)")
    flags = ClassifierFlags(pure_search=True, budgets=SearchConfig(max_restarts=5))
    v = classify_filled(g, flags, memo=None)
    assert v.filled is None and v.status == "undecided"
    assert v.rule_chain[-1] == "undecided-at-budget"


def test_memo_hits_and_rebinds():
    memo = _Memo()
    g = build_group("D(26)")
    flags = ClassifierFlags(pure_search=True)
    first = classify_filled(g, flags, memo)
    twin = FiniteGroup(g.table.copy(), g.labels, "D(26) copy")
    second = classify_filled(twin, flags, memo)
    assert memo.hits == 1
    assert second.witness.group is twin and second.witness.bits == first.witness.bits
    assert verify_witness(twin, second.witness).is_nonfilling_lmpfs
    second.rule_chain.append("mutated")
    assert "mutated" not in classify_filled(g, flags, memo).rule_chain


def test_memo_collision_falls_back_to_recomputation():
    memo = _Memo()
    flags = ClassifierFlags(pure_search=True)
    a, b = build_group("ESC4(16)"), build_group("C(4)*D(8)")
    # isomorphic, so the fingerprints agree, but the tables are indexed differently
    assert fingerprint(a) == fingerprint(b) and _Memo.digest(a) != _Memo.digest(b)
    va = classify_filled(a, flags, memo)
    vb = classify_filled(b, flags, memo)
    assert memo.collisions == 1 and memo.hits == 0
    assert va.filled is False and vb.filled is False
    assert vb.witness.group is b
    assert verify_witness(b, vb.witness).is_nonfilling_lmpfs


def test_global_memo_is_used():
    MEMO.clear()
    g = build_group("D(30)")
    classify_filled(g)
    classify_filled(g)
    assert MEMO.hits == 1
