"""Brute-force reference implementations used to check the library.

Everything here works from the multiplication table by definition only
(no T-closure, square roots, bitsets or automorphism machinery), so that
agreement with the library is evidence rather than tautology.
"""

from __future__ import annotations

import itertools
from math import gcd

import numpy as np


def products(table, s):
    return {int(table[a, b]) for a in s for b in s}


def is_product_free(table, s) -> bool:
    s = set(s)
    return not (products(table, s) & s)


def is_locally_maximal(table, s) -> bool:
    """No element can be added without destroying product-freeness."""
    s = set(s)
    if not is_product_free(table, s):
        return False
    return all(not is_product_free(table, s | {g}) for g in range(1, len(table)) if g not in s)


def fills(table, s) -> bool:
    cover = set(s) | products(table, s)
    return all(g in cover for g in range(1, len(table)))


def addable(table, s) -> set[int]:
    s = set(s)
    return {g for g in range(len(table)) if g not in s and is_product_free(table, s | {g})}


def inverse_table(table) -> list[int]:
    n = len(table)
    return [next(h for h in range(n) if table[g, h] == 0) for g in range(n)]


def involution_count(table) -> int:
    return sum(1 for g in range(1, len(table)) if table[g, g] == 0)


def class_count(table) -> int:
    n = len(table)
    inv = inverse_table(table)
    seen, count = set(), 0
    for g in range(n):
        if g in seen:
            continue
        count += 1
        seen |= {int(table[table[h, g], inv[h]]) for h in range(n)}
    return count


def normal_subgroups_by_subsets(table) -> list[frozenset[int]]:
    """All normal subgroups, by testing every subset containing the identity."""
    n = len(table)
    inv = inverse_table(table)
    out = []
    for r in range(n):
        for rest in itertools.combinations(range(1, n), r):
            h = frozenset((0, *rest))
            if any(int(table[a, b]) not in h for a in h for b in h):
                continue
            if all(int(table[table[g, a], inv[g]]) in h for g in range(n) for a in h):
                out.append(h)
    return out


def automorphisms_by_permutations(table) -> list[tuple[int, ...]]:
    """Every bijection fixing the identity that preserves the table (orders up to about 8)."""
    n = len(table)
    t = np.asarray(table)
    out = []
    for perm in itertools.permutations(range(1, n)):
        p = np.array((0, *perm))
        if np.array_equal(p[t], t[np.ix_(p, p)]):
            out.append(tuple(int(v) for v in p))
    return out


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def all_product_free_sets(table):
    """Every non-empty product-free subset of G*, by include/exclude recursion.

    Product-freeness is inherited by subsets, so pruning a branch as soon as
    the partial set stops being product-free visits exactly the product-free
    members of the full power set.
    """
    n = len(table)

    def rec(i, chosen):
        if i == n:
            if chosen:
                yield tuple(chosen)
            return
        yield from rec(i + 1, chosen)
        cand = chosen + [i]
        if is_product_free(table, cand):
            yield from rec(i + 1, cand)

    yield from rec(1, [])


def all_nonfilling_lmpfs(table) -> set[tuple[int, ...]]:
    return {s for s in all_product_free_sets(table) if is_locally_maximal(table, s) and not fills(table, s)}


def is_filled(table) -> bool:
    return not any(is_locally_maximal(table, s) and not fills(table, s) for s in all_product_free_sets(table))


def random_product_free_sets(table, count: int, seed: int):
    """``count`` seeded product-free sets: shuffle G*, keep elements that preserve
    product-freeness, stop at a random target size (so both partial and
    maximal sets occur)."""
    rng = np.random.default_rng(seed)
    n = len(table)
    for _ in range(count):
        target = int(rng.integers(0, n))
        s: list[int] = []
        for g in rng.permutation(np.arange(1, n)).tolist():
            if len(s) >= target:
                break
            if is_product_free(table, s + [g]):
                s.append(g)
        yield s
