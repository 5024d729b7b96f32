from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filled_groups import build_group, dihedral_witness
from filled_groups.elemset import ElemSet
from filled_groups.errors import GroupMismatch, NotDihedral, PreconditionViolated
from filled_groups.pfs import (
    addable_set,
    dihedral_split,
    fills,
    inverse_condition_holds,
    inverse_set,
    is_locally_maximal,
    is_product_free,
    product_set,
    sqrt_set,
    t_closure,
    verify_set,
)

import oracles


def S(spec, *items):
    g = build_group(spec)
    return ElemSet.from_items(g, items)


def reflections(spec):
    g = build_group(spec)
    return ElemSet.from_items(g, [lab for lab in g.labels if lab.endswith("y")])


# --- examples -------------------------------------------------------------------


def test_product_set_examples():
    g = build_group("D(6)")
    assert product_set(ElemSet.empty(g), ElemSet.full(g)) == ElemSet.empty(g)
    r = reflections("D(6)")
    assert product_set(r, r).labels() == ["1", "x", "x^2"]
    a = S("C(5)", "x", "x^4")
    assert product_set(a, a) == S("C(5)", "1", "x^2", "x^3")


def test_t_closure_examples():
    assert t_closure(S("C(5)", "x")) == S("C(5)", "1", "x", "x^2")
    assert t_closure(reflections("D(6)")) == ElemSet.full(build_group("D(6)"))
    g = build_group("D(8)")
    z = ElemSet.from_items(g, ["x^2"])
    assert t_closure(z).labels() == ["1", "x^2"]


def test_product_free_examples():
    assert is_product_free(reflections("D(6)"))
    assert not is_product_free(S("C(5)", "x", "x^2"))
    assert is_product_free(S("C(5)", "x", "x^4"))


def test_locally_maximal_examples():
    assert is_locally_maximal(S("C(4)", "x^2"))
    assert not is_locally_maximal(S("C(5)", "x"))
    assert is_locally_maximal(S("C(5)", "x", "x^4"))
    # the only product-free supersets of {x, x^4} in C5 are itself
    g = build_group("C(5)")
    supersets = [s for s in oracles.all_product_free_sets(g.table) if {1, 4} < set(s)]
    assert supersets == []


def test_locally_maximal_needs_product_free():
    with pytest.raises(PreconditionViolated):
        is_locally_maximal(S("C(5)", "x", "x^2"))
    with pytest.raises(PreconditionViolated):
        addable_set(S("C(5)", "x", "x^2"))


def test_fills_examples():
    assert fills(reflections("D(6)"))
    assert not fills(S("C(4)", "x^2"))
    assert not fills(dihedral_witness(13))


def test_addable_examples():
    assert addable_set(S("C(4)", "x^2")) == ElemSet.empty(build_group("C(4)"))
    assert addable_set(S("C(5)", "x")).labels() == ["x^4"]
    g = build_group("Q(8)")
    assert addable_set(ElemSet.empty(g)) == ElemSet.full(g) - ElemSet.from_indices(g, [0])


def test_dihedral_split_examples():
    r = reflections("D(6)")
    a, b = dihedral_split(r)
    assert not a and b == r
    a, b = dihedral_split(dihedral_witness(13))
    assert (len(a), len(b)) == (3, 3)
    a, b = dihedral_split(S("D(8)", "x"))
    assert a.labels() == ["x"] and not b
    with pytest.raises(NotDihedral):
        dihedral_split(S("Q(8)", "x"))


def test_verify_set_examples():
    assert verify_set(dihedral_witness(13)).as_dict() == {"product_free": True, "locally_maximal": True, "fills": False}
    assert verify_set(reflections("D(6)")).as_dict() == {"product_free": True, "locally_maximal": True, "fills": True}
    assert verify_set(S("C(5)", "x", "x^2")).as_dict() == {"product_free": False, "locally_maximal": None, "fills": None}


def test_mixing_groups_is_an_error():
    with pytest.raises(GroupMismatch):
        S("C(5)", "x") | S("C(7)", "x")


def test_sqrt():
    assert sqrt_set(S("C(4)", "x^2")).labels() == ["x", "x^3"]
    assert sqrt_set(S("C(5)", "x")).labels() == ["x^3"]


# --- observation on dihedral groups: T(S) = S u SS u A A^-1 ------------------------


@pytest.mark.parametrize("spec", ["D(6)", "D(10)", "D(16)", "D(22)", "D(26)"])
def test_dihedral_t_closure_shortcut(spec):
    g = build_group(spec)
    for members in oracles.random_product_free_sets(g.table, 200, seed=7):
        s = ElemSet.from_indices(g, members)
        a, _ = dihedral_split(s)
        assert t_closure(s) == s | product_set(s, s) | product_set(a, inverse_set(a))


# --- oracle agreement -------------------------------------------------------------

GROUPS = ["C(4)", "C(5)", "C(7)", "D(6)", "D(8)", "Q(8)", "EA(8)", "C(3)xC(3)", "D(12)", "Q(16)", "ESC4(16)", "D(20)", "Q(8)xC(3)"]


@pytest.mark.parametrize("spec", GROUPS)
def test_oracle_agreement(spec):
    g = build_group(spec)
    for members in oracles.random_product_free_sets(g.table, 150, seed=11):
        s = ElemSet.from_indices(g, members)
        assert is_product_free(s)
        lm = is_locally_maximal(s)
        assert lm == oracles.is_locally_maximal(g.table, members)
        assert set(addable_set(s)) == oracles.addable(g.table, members)
        assert fills(s) == oracles.fills(g.table, members)
        if fills(s):
            assert lm  # complete product-free sets are locally maximal
        if lm:
            assert inverse_condition_holds(s)


# --- algebraic properties ---------------------------------------------------------


def _sets(spec):
    g = build_group(spec)
    return st.sets(st.integers(0, g.order - 1)).map(lambda ix: ElemSet.from_indices(g, ix))


@settings(max_examples=150, deadline=None)
@given(_sets("D(12)"))
def test_double_inverse(s):
    assert inverse_set(inverse_set(s)) == s


@settings(max_examples=100, deadline=None)
@given(_sets("Q(16)"), _sets("Q(16)"), _sets("Q(16)"))
def test_product_set_is_associative(a, b, c):
    assert product_set(product_set(a, b), c) == product_set(a, product_set(b, c))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 23), st.integers(0, 23))
def test_singletons_reproduce_table(i, j):
    g = build_group("D(8)xC(3)")
    p = product_set(ElemSet.from_indices(g, [i]), ElemSet.from_indices(g, [j]))
    assert p.indices() == [int(g.table[i, j])]


@settings(max_examples=150, deadline=None)
@given(_sets("ESC4(16)"))
def test_product_free_matches_definition(s):
    assert is_product_free(s) == oracles.is_product_free(s.group.table, s.indices())
