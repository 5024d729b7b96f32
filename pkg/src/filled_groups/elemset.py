"""Subsets of a finite group stored as Python-int bit vectors."""

from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Iterator

import numpy as np

from .errors import GroupMismatch

if TYPE_CHECKING:
    from .groups import FiniteGroup


def mask_to_bits(mask: np.ndarray) -> int:
    """Convert a boolean array into an int with bit i set iff mask[i]."""
    packed = np.packbits(np.asarray(mask, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def bits_to_indices(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def indices_to_bits(indices: Iterable[int]) -> int:
    bits = 0
    for i in indices:
        bits |= 1 << int(i)
    return bits


class ElemSet:
    """An immutable set of element indices bound to one group.

    Binary operations between sets of different groups raise GroupMismatch.
    Groups are compared by identity: two separately built copies of the same
    recipe are different groups as far as sets are concerned.
    """

    __slots__ = ("group", "bits")

    def __init__(self, group: FiniteGroup, bits: int = 0):
        if bits < 0 or bits >> group.order:
            raise ValueError("bit vector has bits outside the group")
        self.group = group
        self.bits = bits

    @classmethod
    def from_indices(cls, group: FiniteGroup, indices: Iterable[int]) -> ElemSet:
        idx = [int(i) for i in indices]
        for i in idx:
            if not 0 <= i < group.order:
                raise ValueError(f"index {i} outside group of order {group.order}")
        return cls(group, indices_to_bits(idx))

    @classmethod
    def from_mask(cls, group: FiniteGroup, mask: np.ndarray) -> ElemSet:
        return cls(group, mask_to_bits(mask))

    @classmethod
    def from_items(cls, group: FiniteGroup, items: Iterable[int | str]) -> ElemSet:
        """Build from a mix of indices and element labels, e.g. ``["x^3", "y", 5]``."""
        return cls.from_indices(group, (group.index_of(item) for item in items))

    @classmethod
    def full(cls, group: FiniteGroup) -> ElemSet:
        return cls(group, (1 << group.order) - 1)

    @classmethod
    def empty(cls, group: FiniteGroup) -> ElemSet:
        return cls(group, 0)

    def _check(self, other: ElemSet) -> None:
        if not isinstance(other, ElemSet):
            raise TypeError(f"expected ElemSet, got {type(other).__name__}")
        if other.group is not self.group:
            raise GroupMismatch("element sets belong to different groups")

    def indices(self) -> list[int]:
        return bits_to_indices(self.bits)

    def as_array(self) -> np.ndarray:
        return np.array(self.indices(), dtype=np.intp)

    def mask(self) -> np.ndarray:
        raw = np.frombuffer(self.bits.to_bytes((self.group.order + 7) // 8, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.group.order].astype(bool)

    def labels(self) -> list[str]:
        return [self.group.labels[i] for i in self.indices()]

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, index: object) -> bool:
        return isinstance(index, (int, np.integer)) and 0 <= index < self.group.order and bool(self.bits >> int(index) & 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ElemSet):
            return NotImplemented
        return self.group is other.group and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((id(self.group), self.bits))

    def __or__(self, other: ElemSet) -> ElemSet:
        self._check(other)
        return ElemSet(self.group, self.bits | other.bits)

    def __and__(self, other: ElemSet) -> ElemSet:
        self._check(other)
        return ElemSet(self.group, self.bits & other.bits)

    def __sub__(self, other: ElemSet) -> ElemSet:
        self._check(other)
        return ElemSet(self.group, self.bits & ~other.bits)

    def __le__(self, other: ElemSet) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __ge__(self, other: ElemSet) -> bool:
        self._check(other)
        return other.bits & ~self.bits == 0

    def complement(self) -> ElemSet:
        return ElemSet(self.group, ((1 << self.group.order) - 1) & ~self.bits)

    def isdisjoint(self, other: ElemSet) -> bool:
        self._check(other)
        return self.bits & other.bits == 0

    def sort_key(self) -> tuple[int, ...]:
        """Lexicographic order on the ascending index tuple."""
        return tuple(self.indices())

    def __repr__(self) -> str:
        return f"ElemSet({self.group.spec_string}, {{{', '.join(self.labels())}}})"
