"""Search kernels on Python-int bitsets.

This is the reference implementation; ``_native.pyx`` mirrors it on packed
64-bit words. Both must produce identical results for identical inputs,
including the random stream consumed by ``greedy``.

State for a product-free set S is kept as two bitsets:

* ``cover`` = {1} u S u SS (S fills G iff cover is everything);
* ``block`` = {1} u T(S) u sqrt(S), which contains cover (S is locally
  maximal iff block is everything, and the addable elements are exactly the
  complement of block).
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

MODE_FIRST = 0
MODE_NONFILLING = 1
MODE_ALL = 2

BACKEND = "python"


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class Kernel:
    def __init__(self, table, inv, squares):
        n = len(table)
        self.n = n
        self.table = [list(map(int, row)) for row in table]
        self.inv = [int(v) for v in inv]
        roots = [0] * n
        for x in range(n):
            roots[int(squares[x])] |= 1 << x
        self.roots = roots
        self.full = (1 << n) - 1
        self.nodes = self.leaves = self.lm_count = 0

    def _add(self, members, cover, block, x):
        t, inv = self.table, self.inv
        row_x = t[x]
        row_xi = t[inv[x]]
        xi = inv[x]
        new = (1 << x) | (1 << row_x[x])
        extra = 1 | self.roots[x]
        for s in members:
            row_s = t[s]
            new |= (1 << row_x[s]) | (1 << row_s[x])
            extra |= (1 << row_x[inv[s]]) | (1 << row_s[xi]) | (1 << row_xi[s]) | (1 << t[inv[s]][x])
        cover |= new
        return cover, block | cover | extra

    def _load(self, start):
        members: list[int] = []
        cover = block = 1
        for x in start:
            cover, block = self._add(members, cover, block, int(x))
            members.append(int(x))
        return members, cover, block

    def analyze(self, members):
        """(cover, block) bitsets for an arbitrary member list."""
        _, cover, block = self._load(members)
        return cover, block

    def greedy(self, start, state):
        """Grow ``start`` by random addable elements until locally maximal.

        Returns the members in insertion order and whether the result fills.
        """
        members, cover, block = self._load(start)
        full = self.full
        while True:
            cand = full & ~block
            if not cand:
                break
            count = cand.bit_count()
            state = (state + GOLDEN) & MASK64
            k = mix64(state) % count
            for _ in range(k):
                cand &= cand - 1
            x = (cand & -cand).bit_length() - 1
            cover, block = self._add(members, cover, block, x)
            members.append(x)
        return members, cover == full

    def extend(self, start, mode, allowed=None):
        """Enumerate locally maximal extensions of ``start``.

        The first added element may be any addable element; later ones must
        exceed the previously added element. Only elements in the bitset
        ``allowed`` (default: all) are ever added, but local maximality is
        still judged against the whole group. Returns
        ``(stopped, records, nodes, leaves, lm_count)`` where records are
        ``(sorted members, fills)`` pairs selected by ``mode``.
        """
        members, cover, block = self._load(start)
        self.nodes = self.leaves = self.lm_count = 0
        records: list[tuple[tuple[int, ...], bool]] = []
        cand = self.full & ~block
        if allowed is not None:
            cand &= allowed
        stopped = self._rec(members, cover, block, cand, mode, records)
        return stopped, records, self.nodes, self.leaves, self.lm_count

    def _rec(self, members, cover, block, cand, mode, records):
        full = self.full
        if not cand:
            self.leaves += 1
            if block == full:
                self.lm_count += 1
                fills = cover == full
                if mode == MODE_ALL or not fills:
                    records.append((tuple(sorted(members)), fills))
                    if not fills and mode == MODE_FIRST:
                        return True
            return False
        rest = cand
        while rest:
            low = rest & -rest
            rest ^= low
            x = low.bit_length() - 1
            cover2, block2 = self._add(members, cover, block, x)
            members.append(x)
            self.nodes += 1
            if self._rec(members, cover2, block2, rest & ~block2, mode, records):
                members.pop()
                return True
            members.pop()
        return False
