from __future__ import annotations

import numpy as np
import pytest

from filled_groups import build_group
from filled_groups.elemset import ElemSet
from filled_groups.errors import DomainError, FrameTooSmall, NotCentralProductC4, PreconditionViolated
from filled_groups.pfs import dihedral_split, inverse_set, product_set, verify_set
from filled_groups.search import SearchConfig, all_nonfilling_lmpfs
from filled_groups.witnesses import (
    central_c4_witness,
    d44_witness,
    dihedral_plan,
    dihedral_set,
    dihedral_witness,
    excluded_element,
    extraspecial_parts,
    extraspecial_witness,
    printed_dihedral_plan,
    witness_record,
)

import oracles

NONFILLING = {"product_free": True, "locally_maximal": True, "fills": False}


# --- dihedral families -----------------------------------------------------------


def test_n13_set():
    s = dihedral_witness(13)
    assert s.labels() == ["x^3", "x^5", "x^7", "y", "x*y", "x^2*y"]
    x9 = s.group.index_of("x^9")
    assert x9 not in s | product_set(s, s)


def test_n15_same_shape():
    s = dihedral_witness(15)
    assert s.labels() == ["x^3", "x^5", "x^7", "y", "x*y", "x^2*y"]
    assert s.group.order == 30


def test_family_assignment():
    got = {n: (dihedral_plan(n).family, dihedral_plan(n).k) for n in (13, 15, 17, 19, 21, 23, 29, 31)}
    assert got == {
        13: ("5k-2", 3), 15: ("5k", 3), 17: ("5k+2", 3), 19: ("5k-6", 5),
        21: ("5k-4", 5), 23: ("5k-2", 5), 29: ("5k-6", 7), 31: ("5k-4", 7),
    }


@pytest.mark.parametrize("n", [1, 11, 12, 14, 102])
def test_domain(n):
    if n == 102:
        dihedral_witness(101)  # upper end is fine
        return
    with pytest.raises(DomainError):
        dihedral_witness(n)


@pytest.mark.parametrize("n", range(13, 102, 2))
def test_sweep_against_oracle(n):
    s = dihedral_witness(n)
    t = s.group.table
    members = s.indices()
    assert oracles.is_product_free(t, members)
    assert oracles.is_locally_maximal(t, members)
    assert not oracles.fills(t, members)


def test_printed_5k_minus_6_set_is_never_product_free():
    # frozen from verification: the printed V wraps its rotation products onto itself
    for n in range(19, 102, 10):
        plan = printed_dihedral_plan(n)
        assert plan.set_name == "V"
        s = dihedral_set(build_group(f"D({2 * n})"), plan)
        assert verify_set(s).product_free is False
        assert dihedral_plan(n).source == "corrected"


def test_printed_u_at_n17_is_not_locally_maximal():
    g = build_group("D(34)")
    s = dihedral_set(g, printed_dihedral_plan(17))
    assert s.labels() == ["x", "x^3", "x^5", "x^7", "y"]
    assert verify_set(s).as_dict() == {"product_free": True, "locally_maximal": False, "fills": False}
    # frozen from the brute-force oracle: x^16 and eight reflections can still be added
    addable = sorted(oracles.addable(g.table, s.indices()))
    assert [g.labels[i] for i in addable] == [
        "x^16", "x^2*y", "x^4*y", "x^6*y", "x^8*y", "x^9*y", "x^11*y", "x^13*y", "x^15*y",
    ]
    fixed = dihedral_witness(17)
    assert fixed.labels() == ["x^3", "x^5", "x^7", "x^9", "y", "x*y", "x^2*y"]


def test_printed_sets_used_elsewhere():
    for n in range(13, 102, 2):
        plan = dihedral_plan(n)
        if plan.set_name == "V" or (plan.set_name == "U" and plan.k == 3):
            continue
        assert plan.source == "printed" and plan == printed_dihedral_plan(n)


@pytest.mark.parametrize("n", [13, 23, 33, 43, 53])
def test_5k_minus_2_reflection_products(n):
    # for S = {x^k,...,x^(3k-2); y,...,x^(k-1)y}: the reflections of SS are <x>y minus the reflections of S
    s = dihedral_witness(n)
    g = s.group
    _, b = dihedral_split(s)
    _, b_ss = dihedral_split(product_set(s, s))
    refl = ElemSet.from_items(g, [lab for lab in g.labels if lab.endswith("y")])
    assert b_ss == refl - b


def test_d44():
    s = d44_witness()
    assert len(s) == 7 and s.group.order == 44
    assert verify_set(s).as_dict() == NONFILLING
    assert oracles.is_locally_maximal(s.group.table, s.indices())


# --- extraspecial ---------------------------------------------------------------


@pytest.mark.parametrize("spec, kind, x_size", [("ESM(512)", "D8", 3), ("ESP(512)", "Q8", 1)])
def test_extraspecial_512(spec, kind, x_size):
    g = build_group(spec)
    parts = extraspecial_parts(g)
    assert g.frame.K_kind == kind and len(parts.X) == x_size
    s = extraspecial_witness(g)
    assert verify_set(s).as_dict() == NONFILLING
    assert g.frame.Q_gens[0] not in s | product_set(s, s)
    assert parts.U.isdisjoint(inverse_set(parts.U))
    z = ElemSet.from_indices(g, [g.frame.z])
    assert (parts.E - parts.K) <= product_set(product_set(parts.U, parts.U), z)
    assert len(parts.E) == g.order // 4


def test_extraspecial_too_small():
    for spec in ("ESM(32)", "ESP(128)"):
        with pytest.raises(FrameTooSmall):
            extraspecial_witness(build_group(spec))
    with pytest.raises(PreconditionViolated):
        extraspecial_witness(build_group("D(8)"))
    with pytest.raises(PreconditionViolated):
        extraspecial_witness(build_group("ESC4(64)"))


# --- E*C4 -------------------------------------------------------------------------


@pytest.mark.parametrize("spec", ["ESC4(16)", "ESC4(64)"])
def test_central_c4(spec):
    g = build_group(spec)
    c = g.frame.c4_gen
    z = g.mul(c, c)
    for seed in range(20):
        s = central_c4_witness(g, seed)
        assert z in s and np.all(g.elem_order[s.as_array()] == 2)
        assert c not in s | product_set(s, s)
        assert verify_set(s).as_dict() == NONFILLING


def test_central_c4_needs_frame():
    with pytest.raises(NotCentralProductC4):
        central_c4_witness(build_group("D(16)"))
    with pytest.raises(NotCentralProductC4):
        central_c4_witness(build_group("ESM(32)"))


# --- the involution restriction --------------------------------------------------


@pytest.mark.parametrize("spec", ["D(8)", "Q(8)", "ESC4(16)", "ESP(32)", "ESM(32)", "D(8)xC(2)"])
def test_nonfilling_sets_contain_z_and_only_involutions(spec):
    g = build_group(spec)
    z = int(g.squares[g.elem_order == 4][0])  # every order-4 element squares to the same central z
    for s in all_nonfilling_lmpfs(g, SearchConfig(involution_seed="off")):
        assert z in s
        assert all(g.elem_order[i] == 2 for i in s)


# --- records -----------------------------------------------------------------------


def test_witness_record():
    rec = witness_record(dihedral_witness(13))
    assert rec["group_spec"] == "D(26)"
    assert rec["checks"] == NONFILLING
    s = dihedral_witness(13)
    assert rec["excluded_element"] == s.group.labels[excluded_element(s)]
    assert excluded_element(ElemSet.from_items(build_group("D(6)"), ["y", "x*y", "x^2*y"])) is None
