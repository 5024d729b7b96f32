# cython: language_level=3
"""Compiled search kernels on packed 64-bit words.

Line-for-line counterpart of ``_purepy``; see that module for the meaning
of the cover/block bitsets and of the three record modes.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint64_t

cnp.import_array()

cdef extern from *:
    """
    static inline int fg_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int fg_ctz(unsigned long long x) { return __builtin_ctzll(x); }
    """
    int fg_popcount(unsigned long long x) noexcept nogil
    int fg_ctz(unsigned long long x) noexcept nogil

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9
cdef uint64_t MIX2 = 0x94D049BB133111EB

cdef enum:
    C_FIRST = 0
    C_NONFILLING = 1
    C_ALL = 2

MODE_FIRST = C_FIRST
MODE_NONFILLING = C_NONFILLING
MODE_ALL = C_ALL

BACKEND = "compiled"


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline void _setbit(uint64_t* a, int p) noexcept nogil:
    a[p >> 6] |= (<uint64_t>1) << (p & 63)


def _pack_rows(mask):
    """Boolean (rows, n) array -> uint64 (rows, words) array, bit i of row r = mask[r, i]."""
    rows, n = mask.shape
    words = (n + 63) // 64
    padded = np.zeros((rows, words * 64), dtype=bool)
    padded[:, :n] = mask
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


cdef class Kernel:
    cdef readonly int n
    cdef readonly int words
    cdef const int32_t[:, ::1] table
    cdef const int32_t[::1] inv
    cdef uint64_t[:, ::1] roots
    cdef uint64_t[::1] full
    cdef uint64_t[:, ::1] cover
    cdef uint64_t[:, ::1] block
    cdef uint64_t[:, ::1] cand
    cdef int32_t[::1] members
    cdef int mode
    cdef list records
    cdef public int64_t nodes
    cdef public int64_t leaves
    cdef public int64_t lm_count

    def __init__(self, table, inv, squares):
        n = table.shape[0]
        self.n = n
        self.words = (n + 63) // 64
        self.table = np.ascontiguousarray(table, dtype=np.int32)
        self.inv = np.ascontiguousarray(inv, dtype=np.int32)
        roots = np.zeros((n, n), dtype=bool)
        roots[np.asarray(squares, dtype=np.intp), np.arange(n)] = True
        self.roots = _pack_rows(roots)
        self.full = _pack_rows(np.ones((1, n), dtype=bool))[0]
        self.cover = np.zeros((n + 2, self.words), dtype=np.uint64)
        self.block = np.zeros((n + 2, self.words), dtype=np.uint64)
        self.cand = np.zeros((n + 2, self.words), dtype=np.uint64)
        self.members = np.zeros(n + 2, dtype=np.int32)
        self.nodes = self.leaves = self.lm_count = 0

    cdef void _add(self, int d, int x) noexcept:
        cdef int W = self.words
        cdef int i, s, si, w
        cdef int xi = self.inv[x]
        cdef uint64_t* cv = &self.cover[d + 1, 0]
        cdef uint64_t* bl = &self.block[d + 1, 0]
        cdef uint64_t* cv0 = &self.cover[d, 0]
        cdef uint64_t* bl0 = &self.block[d, 0]
        cdef uint64_t* rt = &self.roots[x, 0]
        cdef const int32_t* tx = &self.table[x, 0]
        cdef const int32_t* txi = &self.table[xi, 0]
        for w in range(W):
            cv[w] = cv0[w]
            bl[w] = bl0[w] | rt[w]
        bl[0] |= 1
        _setbit(cv, x)
        _setbit(cv, tx[x])
        for i in range(d):
            s = self.members[i]
            si = self.inv[s]
            _setbit(cv, tx[s])
            _setbit(cv, self.table[s, x])
            _setbit(bl, tx[si])
            _setbit(bl, self.table[s, xi])
            _setbit(bl, txi[s])
            _setbit(bl, self.table[si, x])
        for w in range(W):
            bl[w] |= cv[w]
        self.members[d] = x

    cdef int _load(self, start) except -1:
        cdef int w, d = 0
        for w in range(self.words):
            self.cover[0, w] = 0
            self.block[0, w] = 0
        self.cover[0, 0] = 1
        self.block[0, 0] = 1
        for x in start:
            self._add(d, <int>x)
            d += 1
        return d

    cdef bint _is_full(self, uint64_t* a) noexcept:
        cdef int w
        for w in range(self.words):
            if a[w] != self.full[w]:
                return False
        return True

    cdef object _to_int(self, uint64_t[:, ::1] rows, int d):
        return int.from_bytes(np.asarray(rows[d]).astype("<u8").tobytes(), "little")

    def analyze(self, members):
        """(cover, block) bitsets for an arbitrary member list."""
        cdef int d = self._load(members)
        return self._to_int(self.cover, d), self._to_int(self.block, d)

    def greedy(self, start, uint64_t state):
        """Grow ``start`` by random addable elements until locally maximal."""
        cdef int d = self._load(start)
        cdef int W = self.words
        cdef int w, x, c
        cdef uint64_t f, word, k, count
        cdef uint64_t* cd
        while True:
            cd = &self.cand[d, 0]
            count = 0
            for w in range(W):
                f = self.full[w] & ~self.block[d, w]
                cd[w] = f
                count += fg_popcount(f)
            if count == 0:
                break
            state += GOLDEN
            k = _mix(state) % count
            x = -1
            for w in range(W):
                c = fg_popcount(cd[w])
                if k < <uint64_t>c:
                    word = cd[w]
                    while k:
                        word &= word - 1
                        k -= 1
                    x = (w << 6) | fg_ctz(word)
                    break
                k -= c
            self._add(d, x)
            d += 1
        return [self.members[i] for i in range(d)], self._is_full(&self.cover[d, 0])

    def extend(self, start, int mode, allowed=None):
        """Enumerate locally maximal extensions of ``start`` (see ``_purepy.Kernel.extend``)."""
        cdef int d = self._load(start)
        cdef int w
        cdef uint64_t[::1] allow = self.full
        if allowed is not None:
            bits = np.zeros(self.n, dtype=bool)
            for w in range(self.n):
                bits[w] = (allowed >> w) & 1
            allow = _pack_rows(bits[None, :])[0]
        self.mode = mode
        self.records = []
        self.nodes = self.leaves = self.lm_count = 0
        for w in range(self.words):
            self.cand[d, w] = self.full[w] & ~self.block[d, w] & allow[w]
        stopped = self._rec(d)
        return bool(stopped), self.records, self.nodes, self.leaves, self.lm_count

    cdef int _rec(self, int d) except -1:
        cdef int W = self.words
        cdef int w, j, x
        cdef uint64_t word
        cdef uint64_t* cd = &self.cand[d, 0]
        cdef uint64_t* cn
        cdef uint64_t* bl
        cdef bint empty = True
        cdef bint fills
        for w in range(W):
            if cd[w]:
                empty = False
                break
        if empty:
            self.leaves += 1
            if self._is_full(&self.block[d, 0]):
                self.lm_count += 1
                fills = self._is_full(&self.cover[d, 0])
                if self.mode == C_ALL or not fills:
                    self.records.append((tuple(sorted([self.members[j] for j in range(d)])), bool(fills)))
                    if not fills and self.mode == C_FIRST:
                        return 1
            return 0
        for w in range(W):
            word = cd[w]
            while word:
                x = (w << 6) | fg_ctz(word)
                word &= word - 1
                self._add(d, x)
                self.nodes += 1
                cn = &self.cand[d + 1, 0]
                bl = &self.block[d + 1, 0]
                for j in range(w):
                    cn[j] = 0
                cn[w] = word & ~bl[w]
                for j in range(w + 1, W):
                    cn[j] = cd[j] & ~bl[j]
                if self._rec(d + 1):
                    return 1
        return 0
