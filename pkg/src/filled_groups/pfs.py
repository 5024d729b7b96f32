"""Product-free set algebra: products, inverses, square roots, T-closure, local maximality, filling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elemset import ElemSet
from .errors import NotDihedral, PreconditionViolated
from .groups import FiniteGroup, rotation_subgroup


def product_set(a: ElemSet, b: ElemSet) -> ElemSet:
    """{xy : x in a, y in b}, built by OR-ing the left translates x*b."""
    a._check(b)
    group = a.group
    if not a or not b:
        return ElemSet.empty(group)
    b_idx = b.as_array()
    mask = np.zeros(group.order, dtype=bool)
    mask[group.table[np.ix_(a.as_array(), b_idx)].ravel()] = True
    return ElemSet.from_mask(group, mask)


def inverse_set(s: ElemSet) -> ElemSet:
    group = s.group
    return ElemSet.from_indices(group, group.inv[s.as_array()].tolist())


def sqrt_set(s: ElemSet) -> ElemSet:
    """{x : x^2 in s}."""
    group = s.group
    return ElemSet.from_mask(group, s.mask()[group.squares])


def t_closure(s: ElemSet) -> ElemSet:
    """S u SS u SS^-1 u S^-1 S."""
    s_inv = inverse_set(s)
    return s | product_set(s, s) | product_set(s, s_inv) | product_set(s_inv, s)


def is_product_free(s: ElemSet) -> bool:
    return product_set(s, s).isdisjoint(s)


def _identity(group: FiniteGroup) -> ElemSet:
    return ElemSet(group, 1)


def _require_product_free(s: ElemSet) -> None:
    if not is_product_free(s):
        raise PreconditionViolated("set is not product-free")


def is_locally_maximal(s: ElemSet) -> bool:
    """Product-free s is locally maximal iff T(s) u sqrt(s) is the whole group."""
    _require_product_free(s)
    return (t_closure(s) | sqrt_set(s) | _identity(s.group)) == ElemSet.full(s.group)


def fills(s: ElemSet) -> bool:
    """Every non-identity element lies in s u ss."""
    return (s | product_set(s, s) | _identity(s.group)) == ElemSet.full(s.group)


def addable_set(s: ElemSet) -> ElemSet:
    """Elements x not in s for which s u {x} is still product-free."""
    _require_product_free(s)
    return (t_closure(s) | sqrt_set(s) | _identity(s.group)).complement()


def dihedral_split(s: ElemSet) -> tuple[ElemSet, ElemSet]:
    """(rotations in s, reflections in s) for a dihedral group."""
    rot = rotation_subgroup(s.group)
    if rot is None:
        raise NotDihedral(f"{s.group.spec_string} is not dihedral")
    return s & rot, s - rot


@dataclass(frozen=True)
class WitnessReport:
    """Checks on a claimed set; ``locally_maximal`` and ``fills`` are None when not product-free."""

    product_free: bool
    locally_maximal: bool | None
    fills: bool | None

    @property
    def is_nonfilling_lmpfs(self) -> bool:
        return self.product_free and bool(self.locally_maximal) and self.fills is False

    def as_dict(self) -> dict:
        return {"product_free": self.product_free, "locally_maximal": self.locally_maximal, "fills": self.fills}


def verify_set(s: ElemSet) -> WitnessReport:
    if not is_product_free(s):
        return WitnessReport(False, None, None)
    return WitnessReport(True, is_locally_maximal(s), fills(s))


def inverse_condition_holds(s: ElemSet) -> bool:
    """For locally maximal product-free s: each a in s with a^-1 not in s has a^-1 in ss u sqrt(s)."""
    group = s.group
    cover = product_set(s, s) | sqrt_set(s)
    for a in s:
        ai = int(group.inv[a])
        if ai not in s and ai not in cover:
            return False
    return True


__all__ = [
    "WitnessReport",
    "addable_set",
    "dihedral_split",
    "fills",
    "inverse_condition_holds",
    "inverse_set",
    "is_locally_maximal",
    "is_product_free",
    "product_set",
    "sqrt_set",
    "t_closure",
    "verify_set",
]
