"""Automorphism groups of table groups.

An automorphism is determined by the images of a generating set. We pick a
generating set greedily, then build a stabilizer chain: level j holds the
automorphisms fixing g_1..g_{j-1}, and its orbit on g_j is found by asking,
for each plausible image c, whether some automorphism fixes the earlier
generators and sends g_j to c. Candidates are filtered by element order and
conjugacy-class size, and partial maps are checked for consistency on the
subgroup generated so far. The group order is the product of the orbit sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup, generated_subgroup_mask

DEFAULT_AUT_CAP = 10**6


@dataclass(frozen=True)
class Automorphisms:
    """Automorphisms of ``group``.

    ``perms`` holds every automorphism as an index permutation when
    ``complete`` is true; when the group is larger than the cap it holds the
    identity only. ``generators`` always generate the full automorphism
    group, so orbit computations stay exact above the cap.
    """

    group: FiniteGroup = field(repr=False)
    perms: list[np.ndarray] = field(repr=False)
    complete: bool
    generators: list[np.ndarray] = field(repr=False)
    size: int


def generating_set(group: FiniteGroup) -> list[int]:
    """Greedy generating set: repeatedly take the highest-order element not yet generated."""
    order_rank = sorted(range(1, group.order), key=lambda g: (-int(group.elem_order[g]), g))
    gens: list[int] = []
    mask = np.zeros(group.order, dtype=bool)
    mask[0] = True
    for g in order_rank:
        if mask.all():
            break
        if not mask[g]:
            gens.append(g)
            mask = generated_subgroup_mask(group, gens)
    return gens


class _Backtracker:
    def __init__(self, group: FiniteGroup, gens: list[int]):
        self.group = group
        self.gens = gens
        self.table = group.table
        sizes = group.class_sizes[group.class_of]
        self.candidates = [
            np.flatnonzero((group.elem_order == group.elem_order[g]) & (sizes == sizes[g])).tolist() for g in gens
        ]

    def _extend(self, img: np.ndarray, used: np.ndarray, j: int, c: int) -> tuple[np.ndarray, np.ndarray] | None:
        """Add g_j -> c to a map consistent on <g_1..g_{j-1}>; None if inconsistent."""
        t, gens = self.table, self.gens
        g = gens[j]
        if img[g] >= 0:
            return (img, used) if img[g] == c else None
        if used[c]:
            return None
        img, used = img.copy(), used.copy()
        known = np.flatnonzero(img >= 0).tolist()
        queue: list[tuple[int, int]] = [(h, j) for h in known]  # (element, only this generator)
        imgs_of_gens = {i: int(img[gens[i]]) for i in range(j)}
        imgs_of_gens[j] = c
        pos = 0
        while pos < len(queue):
            h, only = queue[pos]
            pos += 1
            for i in ([only] if only >= 0 else range(j + 1)):
                p = int(t[h, gens[i]])
                q = int(t[img[h], imgs_of_gens[i]])
                if img[p] >= 0:
                    if img[p] != q:
                        return None
                    continue
                if used[q]:
                    return None
                img[p] = q
                used[q] = True
                queue.append((p, -1))
        return img, used

    def start(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.group.order
        img = np.full(n, -1, dtype=np.int64)
        used = np.zeros(n, dtype=bool)
        img[0] = 0
        used[0] = True
        return img, used

    def complete(self, img: np.ndarray, used: np.ndarray, j: int) -> np.ndarray | None:
        """Any full automorphism extending the map defined on g_1..g_j (j generators fixed)."""
        if j == len(self.gens):
            return img if bool(np.all(img >= 0)) else None
        for c in self.candidates[j]:
            nxt = self._extend(img, used, j, c)
            if nxt is not None:
                found = self.complete(nxt[0], nxt[1], j + 1)
                if found is not None:
                    return found
        return None


def _orbit(point: int, perms: list[np.ndarray]) -> dict[int, int]:
    """Orbit of ``point`` as {image: index of the generator that first reached it, or -1}."""
    seen = {point: -1}
    frontier = [point]
    while frontier:
        nxt = []
        for p in frontier:
            for gi, perm in enumerate(perms):
                q = int(perm[p])
                if q not in seen:
                    seen[q] = gi
                    nxt.append(q)
        frontier = nxt
    return seen


def _transversal(point: int, perms: list[np.ndarray], n: int) -> list[np.ndarray]:
    """One permutation per orbit point, mapping ``point`` to it (BFS words in ``perms``)."""
    reps = {point: np.arange(n)}
    frontier = [point]
    while frontier:
        nxt = []
        for p in frontier:
            for perm in perms:
                q = int(perm[p])
                if q not in reps:
                    reps[q] = perm[reps[p]]
                    nxt.append(q)
        frontier = nxt
    return [reps[q] for q in sorted(reps)]


def automorphism_group(group: FiniteGroup, cap: int = DEFAULT_AUT_CAP) -> Automorphisms:
    """Automorphisms of ``group``; all of them are listed if there are at most ``cap``."""
    n = group.order
    identity = np.arange(n)
    if n == 1:
        return Automorphisms(group, [identity], True, [], 1)
    gens = generating_set(group)
    bt = _Backtracker(group, gens)
    k = len(gens)
    strong: list[list[np.ndarray]] = [[] for _ in range(k)]
    for j in range(k - 1, -1, -1):
        level_gens = [p for lvl in strong[j:] for p in lvl]
        base_img, base_used = bt.start()
        for i in range(j):
            base_img, base_used = bt._extend(base_img, base_used, i, gens[i])
        orbit = set(_orbit(gens[j], level_gens))
        for c in bt.candidates[j]:
            if c in orbit:
                continue
            nxt = bt._extend(base_img, base_used, j, c)
            if nxt is None:
                continue
            found = bt.complete(nxt[0], nxt[1], j + 1)
            if found is None:
                continue
            perm = found.astype(np.intp)
            strong[j].append(perm)
            level_gens.append(perm)
            orbit = set(_orbit(gens[j], level_gens))
    generators = [p for lvl in strong for p in lvl]
    transversals = []
    size = 1
    for j in range(k):
        level_gens = [p for lvl in strong[j:] for p in lvl]
        reps = _transversal(gens[j], level_gens, n)
        transversals.append(reps)
        size *= len(reps)
    if size > cap:
        return Automorphisms(group, [identity], False, generators, size)
    perms = identity[None, :]
    for reps in reversed(transversals):
        perms = np.concatenate([t[perms] for t in reps], axis=0)
    return Automorphisms(group, list(perms), True, generators, size)


def is_automorphism(group: FiniteGroup, perm: np.ndarray) -> bool:
    perm = np.asarray(perm)
    t = group.table
    return bool(np.array_equal(perm[t], t[np.ix_(perm, perm)]))
