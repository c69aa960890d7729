"""Choice dictionaries layered over a plain bit vector.

``SystematicChoiceDict`` stores a subset of {1..n} so that the leading
words of its memory are exactly the client's bit vector, with a short
tower of summaries above it.  Leaves are grouped into runs of k = 64*t
bits.  One summary bit per group says "group nonempty"; blocks of k
groups carry a counter of full groups plus paired nonempty/full bits,
and anything higher lives in small two-color segment dictionaries, so
both the set and its complement support membership, choice, and robust
iteration.

Memory above the raw vector is never initialized eagerly.  A summary
region becomes trustworthy the first time an insert passes through it;
until then the zero in its parent proves the whole subtree empty, and
complement queries answer arithmetically without reading it.
"""

from array import array

from .dense import DenseChoiceDict
from .atomic import AtomicColorDict
from .wordops import M64, PackedVector


def _ceil_root(n, t):
    # smallest s with s**t >= n
    if t == 1 or n <= 1:
        return n
    s = max(2, int(round(n ** (1.0 / t))))
    while s > 1 and (s - 1) ** t >= n:
        s -= 1
    while s ** t < n:
        s += 1
    return s


class SystematicChoiceDict:
    """Set over {1..n} whose first ceil(n/64) words are the bit vector.

    ``t`` trades redundancy for time: groups span 64*t bits and the
    core operations touch O(t) words at the two bottom levels plus
    O(1) bookkeeping per level above.  ``backing`` may be an existing
    ``array('Q')`` (or memoryview of one) with arbitrary contents; only
    the root's own summary words are written during construction.
    """

    __slots__ = ("n", "t", "k", "h", "p3", "q", "P", "words",
                 "words_touched", "_counts", "_s2_off", "_f2_off",
                 "_cnt_off", "_s3_off", "_f3_off", "_cntpv",
                 "_total_words", "_pairs", "_iter")

    def __init__(self, n, t=1, backing=None):
        if n < 1:
            raise ValueError("universe must be nonempty")
        if t < 1:
            raise ValueError("t must be positive")
        self.n = n
        self.t = t
        self.k = k = 64 * t
        self.p3 = 0
        self.q = 0

        counts = [n, -(-n // k)]
        if counts[1] > 1:
            counts.append(-(-counts[1] // k))
            if counts[2] > 1:
                self.p3 = 2 * max(1, (n - 1).bit_length())
                counts.append(-(-counts[2] // self.p3))
                self.q = max(2, _ceil_root(n, t))
                while counts[-1] > 1:
                    counts.append(-(-counts[-1] // self.q))
        self._counts = counts
        self.h = h = len(counts) - 1
        self.P = [1] * (h + 1)
        for j in range(1, h + 1):
            self.P[j] = self.P[j - 1] * self._pj(j)

        off = t * counts[1]
        self._s2_off = self._f2_off = self._cnt_off = 0
        self._s3_off = self._f3_off = 0
        self._cntpv = None
        if h >= 2:
            n2 = counts[2]
            self._s2_off = off
            off += t * n2
            if h == 2:
                self._f2_off = off
                off += t * n2
            else:
                cw = k.bit_length()
                self._cnt_off = off
                off += (n2 * cw + 63) >> 6
                s3w = (n2 + 63) >> 6
                self._s3_off = off
                off += s3w
                self._f3_off = off
                off += s3w
        self._total_words = off

        if backing is None:
            self.words = array("Q", bytes(8 * off))
        else:
            if len(backing) < off:
                raise ValueError("backing too small: need %d words" % off)
            self.words = backing
        self.words_touched = 0

        if h >= 2 and self._cnt_off:
            n2 = counts[2]
            cw = k.bit_length()
            view = memoryview(self.words)[self._cnt_off:self._s3_off]
            self._cntpv = PackedVector(n2, cw, backing=view, clear=False)

        self._pairs = {}
        self._iter = {0: None, 1: None}
        if h == 1:
            self._init_group(1)
        elif h == 2:
            for i in range(2 * t):
                self.words[self._s2_off + i] = 0
        else:
            if h >= 4:
                for j in range(4, h + 1):
                    self._pairs[j] = [None] * counts[j]
                self._make_pair(h, 1)
            else:
                self._init_sector(1)

    # ------------------------------------------------------------------
    # geometry

    def _pj(self, j):
        if j <= 2:
            return self.k
        if j == 3:
            return self.p3
        return self.q

    def _node_of(self, j, ell):
        return 1 + (ell - 1) // self.P[j]

    def _node_span(self, j, idx):
        lo = (idx - 1) * self.P[j] + 1
        return lo, min(idx * self.P[j], self.n)

    def _child_count(self, j, idx):
        pj = self._pj(j)
        return min(pj, self._counts[j - 1] - (idx - 1) * pj)

    def _group_of(self, ell):
        return 1 + (ell - 1) // self.k

    # ------------------------------------------------------------------
    # raw bit ranges (bit indices are 0-based within a region)

    def _bit(self, off, b):
        self.words_touched += 1
        return (self.words[off + (b >> 6)] >> (b & 63)) & 1

    def _setb(self, off, b):
        self.words_touched += 1
        self.words[off + (b >> 6)] |= 1 << (b & 63)

    def _clrb(self, off, b):
        self.words_touched += 1
        self.words[off + (b >> 6)] &= M64 ^ (1 << (b & 63))

    def _scan_set(self, off, lo, hi):
        # index of the first 1-bit in lo..hi inclusive, else -1
        if lo > hi:
            return -1
        words = self.words
        w, wend = lo >> 6, hi >> 6
        mask = (M64 << (lo & 63)) & M64
        while w <= wend:
            x = words[off + w] & mask
            self.words_touched += 1
            if w == wend:
                x &= M64 >> (63 - (hi & 63))
            if x:
                return (w << 6) + ((x & -x).bit_length() - 1)
            mask = M64
            w += 1
        return -1

    def _scan_clear(self, off, lo, hi):
        if lo > hi:
            return -1
        words = self.words
        w, wend = lo >> 6, hi >> 6
        mask = (M64 << (lo & 63)) & M64
        while w <= wend:
            x = ~words[off + w] & mask
            self.words_touched += 1
            if w == wend:
                x &= M64 >> (63 - (hi & 63))
            if x:
                return (w << 6) + ((x & -x).bit_length() - 1)
            mask = M64
            w += 1
        return -1

    def _zero_range(self, off, lo, hi):
        if lo > hi:
            return
        words = self.words
        w, wend = lo >> 6, hi >> 6
        mask = (M64 << (lo & 63)) & M64
        while w <= wend:
            m = mask
            if w == wend:
                m &= M64 >> (63 - (hi & 63))
            words[off + w] &= M64 ^ m
            self.words_touched += 1
            mask = M64
            w += 1

    # ------------------------------------------------------------------
    # lazy per-node initialization

    def _init_group(self, g):
        w0 = (g - 1) * self.t
        for i in range(self.t):
            self.words[w0 + i] = 0
        self.words_touched += self.t

    def _init_block(self, v):
        w0 = self._s2_off + (v - 1) * self.t
        for i in range(self.t):
            self.words[w0 + i] = 0
        self.words_touched += self.t
        if self._cntpv is not None:
            self._cntpv.set(v - 1, 0)
            self.words_touched += 2

    def _init_sector(self, m):
        lo = (m - 1) * self.p3
        hi = min(m * self.p3, self._counts[2]) - 1
        self._zero_range(self._s3_off, lo, hi)
        self._zero_range(self._f3_off, lo, hi)

    def _make_pair(self, j, idx):
        deg = self._child_count(j, idx)
        pair = (DenseChoiceDict(deg, 2), DenseChoiceDict(deg, 2))
        self._pairs[j][idx - 1] = pair
        return pair

    # ------------------------------------------------------------------
    # membership

    def _check(self, ell):
        if not 1 <= ell <= self.n:
            raise ValueError("position out of range: %r" % (ell,))

    def contains(self, ell):
        self._check(ell)
        h = self.h
        if h >= 4:
            for j in range(h, 3, -1):
                u = self._node_of(j, ell)
                pair = self._pairs[j][u - 1]
                if pair is None:
                    return 0
                rel = self._node_of(j - 1, ell) - (u - 1) * self._pj(j)
                self.words_touched += 4
                if pair[0].color(rel) == 0:
                    return 0
        if h >= 3 and self._bit(self._s3_off, self._node_of(2, ell) - 1) == 0:
            return 0
        if h >= 2 and self._bit(self._s2_off, self._group_of(ell) - 1) == 0:
            return 0
        return self._bit(0, ell - 1)

    def insert(self, ell):
        self._check(ell)
        h = self.h
        g = self._group_of(ell)
        if h >= 4:
            for j in range(h, 3, -1):
                u = self._node_of(j, ell)
                child = self._node_of(j - 1, ell)
                rel = child - (u - 1) * self._pj(j)
                pair = self._pairs[j][u - 1]
                self.words_touched += 8
                if pair[0].color(rel) == 0:
                    if j - 1 >= 4:
                        self._make_pair(j - 1, child)
                    else:
                        self._init_sector(child)
                    pair[0].setcolor(1, rel)
        if h >= 3:
            v = self._node_of(2, ell)
            if self._bit(self._s3_off, v - 1) == 0:
                self._init_block(v)
                self._setb(self._s3_off, v - 1)
        if h >= 2 and self._bit(self._s2_off, g - 1) == 0:
            self._init_group(g)
            self._setb(self._s2_off, g - 1)
        if self._bit(0, ell - 1):
            return
        self._setb(0, ell - 1)
        if h == 1:
            return
        lo = (g - 1) * self.k
        hi = min(g * self.k, self.n) - 1
        if self._scan_clear(0, lo, hi) >= 0:
            return
        if h == 2:
            self._setb(self._f2_off, g - 1)
            return
        v = self._node_of(2, ell)
        cnt = self._cntpv.get(v - 1) + 1
        self._cntpv.set(v - 1, cnt)
        self.words_touched += 3
        if cnt != self._child_count(2, v):
            return
        self._setb(self._f3_off, v - 1)
        if h == 3:
            return
        m = self._node_of(3, ell)
        mlo = (m - 1) * self.p3
        mhi = min(m * self.p3, self._counts[2]) - 1
        if self._scan_clear(self._f3_off, mlo, mhi) >= 0:
            return
        child = m
        for j in range(4, h + 1):
            u = self._node_of(j, ell)
            rel = child - (u - 1) * self._pj(j)
            pair = self._pairs[j][u - 1]
            pair[1].setcolor(1, rel)
            self.words_touched += 8
            if pair[1].size(1) != self._child_count(j, u):
                return
            child = u

    def delete(self, ell):
        self._check(ell)
        if not self.contains(ell):
            return
        h = self.h
        g = self._group_of(ell)
        lo = (g - 1) * self.k
        hi = min(g * self.k, self.n) - 1
        was_full = self._scan_clear(0, lo, hi) < 0
        self._clrb(0, ell - 1)
        if h == 1:
            return
        v = self._node_of(2, ell)
        if self._scan_set(0, lo, hi) < 0:
            self._clrb(self._s2_off, g - 1)
            if h >= 3:
                blo = (v - 1) * self.k
                bhi = min(v * self.k, self._counts[1]) - 1
                if self._scan_set(self._s2_off, blo, bhi) < 0:
                    self._clrb(self._s3_off, v - 1)
                    if h >= 4:
                        m = self._node_of(3, ell)
                        mlo = (m - 1) * self.p3
                        mhi = min(m * self.p3, self._counts[2]) - 1
                        if self._scan_set(self._s3_off, mlo, mhi) < 0:
                            child = m
                            for j in range(4, h + 1):
                                u = self._node_of(j, ell)
                                rel = child - (u - 1) * self._pj(j)
                                pair = self._pairs[j][u - 1]
                                pair[0].setcolor(0, rel)
                                self.words_touched += 8
                                if pair[0].size(1) != 0:
                                    break
                                child = u
        if not was_full:
            return
        if h == 2:
            self._clrb(self._f2_off, g - 1)
            return
        was_block_full = self._cntpv.get(v - 1) == self._child_count(2, v)
        self._cntpv.set(v - 1, self._cntpv.get(v - 1) - 1)
        self.words_touched += 4
        if not was_block_full:
            return
        if h == 3:
            self._clrb(self._f3_off, v - 1)
            return
        m = self._node_of(3, ell)
        mlo = (m - 1) * self.p3
        mhi = min(m * self.p3, self._counts[2]) - 1
        was_sector_full = self._scan_clear(self._f3_off, mlo, mhi) < 0
        self._clrb(self._f3_off, v - 1)
        if not was_sector_full:
            return
        child = m
        for j in range(4, h + 1):
            u = self._node_of(j, ell)
            rel = child - (u - 1) * self._pj(j)
            pair = self._pairs[j][u - 1]
            u_was_full = pair[1].size(1) == self._child_count(j, u)
            pair[1].setcolor(0, rel)
            self.words_touched += 8
            if not u_was_full:
                break
            child = u

    # ------------------------------------------------------------------
    # choice

    def cd_choice(self, side):
        if side in (1, "set"):
            return self._choice_set()
        return self._choice_comp()

    def _choice_set(self):
        h = self.h
        m = 1
        if h >= 4:
            u = 1
            for j in range(h, 3, -1):
                pair = self._pairs[j][u - 1]
                i = pair[0].choice(1)
                self.words_touched += 8
                if i == 0:
                    return 0
                u = (u - 1) * self._pj(j) + i
            m = u
        v = 1
        if h >= 3:
            mlo = (m - 1) * self.p3
            mhi = min(m * self.p3, self._counts[2]) - 1
            b = self._scan_set(self._s3_off, mlo, mhi)
            if b < 0:
                return 0
            v = b + 1
        g = 1
        if h >= 2:
            blo = (v - 1) * self.k
            bhi = min(v * self.k, self._counts[1]) - 1
            b = self._scan_set(self._s2_off, blo, bhi)
            if b < 0:
                return 0
            g = b + 1
        lo = (g - 1) * self.k
        hi = min(g * self.k, self.n) - 1
        b = self._scan_set(0, lo, hi)
        return b + 1 if b >= 0 else 0

    def _choice_comp(self):
        h = self.h
        if h == 1:
            b = self._scan_clear(0, 0, self.n - 1)
            return b + 1 if b >= 0 else 0
        if h == 2:
            b = self._scan_clear(self._f2_off, 0, self._counts[1] - 1)
            if b < 0:
                return 0
            g = b + 1
            if self._bit(self._s2_off, g - 1) == 0:
                return (g - 1) * self.k + 1
            lo = (g - 1) * self.k
            hi = min(g * self.k, self.n) - 1
            return self._scan_clear(0, lo, hi) + 1
        m = 1
        if h >= 4:
            u = 1
            for j in range(h, 3, -1):
                pair = self._pairs[j][u - 1]
                i = pair[1].choice(0)
                self.words_touched += 8
                if i == 0:
                    return 0
                child = (u - 1) * self._pj(j) + i
                self.words_touched += 4
                if pair[0].color(i) == 0:
                    return self._node_span(j - 1, child)[0]
                u = child
            m = u
        mlo = (m - 1) * self.p3
        mhi = min(m * self.p3, self._counts[2]) - 1
        b = self._scan_clear(self._f3_off, mlo, mhi)
        if b < 0:
            return 0
        v = b + 1
        if self._bit(self._s3_off, v - 1) == 0:
            return (v - 1) * self.P[2] + 1
        blo = (v - 1) * self.k
        bhi = min(v * self.k, self._counts[1]) - 1
        for gb in range(blo, bhi + 1):
            if self._bit(self._s2_off, gb) == 0:
                return gb * self.k + 1
            lo = gb * self.k
            hi = min(lo + self.k, self.n) - 1
            b = self._scan_clear(0, lo, hi)
            if b >= 0:
                return b + 1
        return 0

    # ------------------------------------------------------------------
    # iteration; one cursor per side, robust against interleaved updates

    def cd_iter_init(self, side):
        s = 1 if side in (1, "set") else 0
        self._iter[s] = {"active": True, "ell": 0}
        if self.h >= 4:
            root = self._pairs[self.h][0]
            if s:
                root[0].iter_init(1)
            else:
                root[1].iter_init(0)

    def cd_iter_more(self, side):
        s = 1 if side in (1, "set") else 0
        st = self._iter[s]
        if st is None or not st["active"]:
            return False
        if s:
            return self._set_more(st["ell"])
        return self._comp_more(st["ell"])

    def cd_iter_next(self, side):
        s = 1 if side in (1, "set") else 0
        st = self._iter[s]
        if st is None or not st["active"]:
            return 0
        ell = st["ell"]
        if s:
            if ell == 0:
                e = (self._set_enter(self.h, 1) if self.h >= 4
                     else self._set_next_in_zone(1, 1))
            else:
                e = self._set_step(ell)
        else:
            if ell == 0:
                e = (self._comp_enter(self.h, 1) if self.h >= 4
                     else self._comp_next_in_zone(1, 1))
            else:
                e = self._comp_step(ell)
        if e == 0:
            st["active"] = False
            st["ell"] = 0
            return 0
        st["ell"] = e
        return e

    # -- set side

    def _set_next_in_zone(self, m, p):
        # next member >= p inside sector m (whole universe when h <= 3)
        h = self.h
        if h == 1:
            if p > self.n:
                return 0
            b = self._scan_set(0, p - 1, self.n - 1)
            return b + 1 if b >= 0 else 0
        zone_hi = min(m * self.P[3], self.n) if h >= 3 else self.n
        while p <= zone_hi:
            v = self._node_of(2, p)
            if h >= 3 and self._bit(self._s3_off, v - 1) == 0:
                mhi_blk = min(m * self.p3, self._counts[2])
                b = self._scan_set(self._s3_off, v, mhi_blk - 1)
                if b < 0:
                    return 0
                p = b * self.P[2] + 1
                continue
            g = self._group_of(p)
            if self._bit(self._s2_off, g - 1):
                lo = max(p - 1, (g - 1) * self.k)
                hi = min(g * self.k, self.n) - 1
                b = self._scan_set(0, lo, hi)
                if b >= 0:
                    return b + 1
            bhi = min(v * self.k, self._counts[1]) - 1
            b = self._scan_set(self._s2_off, g, bhi)
            if b >= 0:
                g2 = b + 1
                lo = (g2 - 1) * self.k
                hi = min(g2 * self.k, self.n) - 1
                b2 = self._scan_set(0, lo, hi)
                if b2 >= 0:
                    return b2 + 1
                p = hi + 2
                continue
            if h == 2:
                return 0
            p = (bhi + 1) * self.k + 1
        return 0

    def _set_enter(self, level, node):
        # start enumerating members below `node`; returns first hit or 0
        while level >= 4:
            pair = self._pairs[level][node - 1]
            pair[0].iter_init(1)
            i = pair[0].iter_next(1)
            self.words_touched += 8
            if i == 0:
                return 0
            node = (node - 1) * self._pj(level) + i
            level -= 1
        m = node if self.h >= 4 else 1
        lo = self._node_span(level, node)[0] if self.h >= 4 else 1
        return self._set_next_in_zone(m, lo)

    def _set_step(self, ell):
        h = self.h
        m = self._node_of(3, ell) if h >= 4 else 1
        e = self._set_next_in_zone(m, ell + 1)
        if e or h < 4:
            return e
        j = 4
        while j <= h:
            u = self._node_of(j, ell)
            pair = self._pairs[j][u - 1]
            i = pair[0].iter_next(1)
            self.words_touched += 8
            if i == 0:
                j += 1
                continue
            child = (u - 1) * self._pj(j) + i
            e = self._set_enter(j - 1, child)
            if e:
                return e
        return 0

    def _set_more(self, ell):
        h = self.h
        if ell == 0:
            if h >= 4:
                return self._pairs[h][0][0].iter_more(1)
            return self._set_next_in_zone(1, 1) != 0
        m = self._node_of(3, ell) if h >= 4 else 1
        if self._set_next_in_zone(m, ell + 1):
            return True
        if h >= 4:
            for j in range(4, h + 1):
                u = self._node_of(j, ell)
                if self._pairs[j][u - 1][0].iter_more(1):
                    return True
        return False

    # -- complement side

    def _comp_next_in_zone(self, m, p):
        h = self.h
        if h == 1:
            if p > self.n:
                return 0
            b = self._scan_clear(0, p - 1, self.n - 1)
            return b + 1 if b >= 0 else 0
        zone_hi = min(m * self.P[3], self.n) if h >= 3 else self.n
        while p <= zone_hi:
            if h >= 3:
                v = self._node_of(2, p)
                if self._bit(self._s3_off, v - 1) == 0:
                    return p
                if self._bit(self._f3_off, v - 1):
                    p = v * self.P[2] + 1
                    continue
            g = self._group_of(p)
            if self._bit(self._s2_off, g - 1) == 0:
                return p
            if h == 2 and self._bit(self._f2_off, g - 1):
                p = g * self.k + 1
                continue
            lo = max(p - 1, (g - 1) * self.k)
            hi = min(g * self.k, self.n) - 1
            b = self._scan_clear(0, lo, hi)
            if b >= 0:
                return b + 1
            p = g * self.k + 1
        return 0

    def _comp_enter(self, level, node):
        # start enumerating absences below `node` (known not full)
        while level >= 4:
            pair = self._pairs[level][node - 1]
            if pair is None:
                return self._node_span(level, node)[0]
            pair[1].iter_init(0)
            i = pair[1].iter_next(0)
            self.words_touched += 8
            if i == 0:
                return 0
            child = (node - 1) * self._pj(level) + i
            self.words_touched += 4
            if pair[0].color(i) == 0:
                return self._node_span(level - 1, child)[0]
            node = child
            level -= 1
        m = node if self.h >= 4 else 1
        lo = self._node_span(level, node)[0] if self.h >= 4 else 1
        return self._comp_next_in_zone(m, lo)

    def _comp_step(self, ell):
        h = self.h
        if h < 4:
            return self._comp_next_in_zone(1, ell + 1)
        # revalidate the path: the cursor may sit inside an untouched or
        # emptied subtree whose positions are enumerated arithmetically
        node = 1
        level = h
        ascend_from = 4
        while level >= 4:
            pair = self._pairs[level][node - 1]
            if pair is None:
                hi = self._node_span(level, node)[1]
                if ell + 1 <= hi:
                    return ell + 1
                ascend_from = level + 1
                break
            child = self._node_of(level - 1, ell)
            i = child - (node - 1) * self._pj(level)
            self.words_touched += 4
            if pair[0].color(i) == 0:
                hi = self._node_span(level - 1, child)[1]
                if ell + 1 <= hi:
                    return ell + 1
                ascend_from = level
                break
            node = child
            level -= 1
        else:
            e = self._comp_next_in_zone(node, ell + 1)
            if e:
                return e
        j = ascend_from
        while j <= h:
            u = self._node_of(j, ell)
            pair = self._pairs[j][u - 1]
            i = pair[1].iter_next(0)
            self.words_touched += 8
            if i == 0:
                j += 1
                continue
            child = (u - 1) * self._pj(j) + i
            self.words_touched += 4
            if pair[0].color(i) == 0:
                return self._node_span(j - 1, child)[0]
            e = self._comp_enter(j - 1, child)
            if e:
                return e
        return 0

    def _comp_more(self, ell):
        h = self.h
        if ell == 0:
            if h >= 4:
                return self._pairs[h][0][1].iter_more(0)
            return self._comp_next_in_zone(1, 1) != 0
        if h < 4:
            return self._comp_next_in_zone(1, ell + 1) != 0
        node = 1
        level = h
        ascend_from = 4
        while level >= 4:
            pair = self._pairs[level][node - 1]
            if pair is None:
                if ell + 1 <= self._node_span(level, node)[1]:
                    return True
                ascend_from = level + 1
                break
            child = self._node_of(level - 1, ell)
            i = child - (node - 1) * self._pj(level)
            if pair[0].color(i) == 0:
                if ell + 1 <= self._node_span(level - 1, child)[1]:
                    return True
                ascend_from = level
                break
            node = child
            level -= 1
        else:
            if self._comp_next_in_zone(node, ell + 1):
                return True
        for j in range(ascend_from, h + 1):
            u = self._node_of(j, ell)
            if self._pairs[j][u - 1][1].iter_more(0):
                return True
        return False

    # ------------------------------------------------------------------
    # accounting

    @property
    def bits_used(self):
        bits = 64 * self._total_words + 64
        for lst in self._pairs.values():
            for pair in lst:
                if pair is not None:
                    bits += pair[0].bits_used + pair[1].bits_used
        return bits

    @property
    def redundancy_bits(self):
        return self.bits_used - self.n

    # ------------------------------------------------------------------
    # two-class adapter: class 1 is the set, class 0 its complement

    def color(self, ell):
        return self.contains(ell)

    def setcolor(self, j, ell):
        if j == 1:
            self.insert(ell)
        elif j == 0:
            self.delete(ell)

    def choice(self, j):
        return self.cd_choice(j)

    def iter_init(self, j):
        self.cd_iter_init(j)

    def iter_more(self, j):
        return self.cd_iter_more(j)

    def iter_next(self, j):
        return self.cd_iter_next(j)


class MulticolorChoiceDict:
    """Colors {0..c-1} over {1..n}; everything starts color 0.

    Positions are partitioned into groups of 64*t; each touched group
    holds a small flat color dictionary, created on first write.  One
    systematic dictionary per color indexes the groups: for j >= 1 it
    stores "group contains color j", while for color 0 it stores the
    complement "group has no color 0", so untouched groups cost nothing.
    """

    __slots__ = ("n", "c", "k", "t", "n1", "leaf",
                 "_lower", "_upper", "_it")

    def __init__(self, n, c, t=1, leaf="atomic"):
        if n < 1:
            raise ValueError("universe must be nonempty")
        if c < 2:
            raise ValueError("need at least two colors")
        if leaf not in ("atomic", "dense"):
            raise ValueError("leaf must be 'atomic' or 'dense'")
        self.n = n
        self.c = c
        self.t = t
        self.k = 64 * t
        self.n1 = -(-n // self.k)
        self.leaf = leaf
        self._lower = [None] * self.n1
        self._upper = [SystematicChoiceDict(self.n1, t) for _ in range(c)]
        self._it = {}

    def _group_deg(self, g):
        return min(self.k, self.n - (g - 1) * self.k)

    def _ensure(self, g):
        d = self._lower[g - 1]
        if d is None:
            deg = self._group_deg(g)
            if self.leaf == "dense":
                d = DenseChoiceDict(deg, self.c)
            else:
                d = AtomicColorDict(deg, self.c)
            self._lower[g - 1] = d
        return d

    def _check(self, ell):
        if not 1 <= ell <= self.n:
            raise ValueError("position out of range: %r" % (ell,))

    def color(self, ell):
        self._check(ell)
        g = 1 + (ell - 1) // self.k
        d = self._lower[g - 1]
        if d is None:
            return 0
        return d.color(ell - (g - 1) * self.k)

    def setcolor(self, j, ell):
        self._check(ell)
        if not 0 <= j < self.c:
            return
        g = 1 + (ell - 1) // self.k
        off = ell - (g - 1) * self.k
        d = self._ensure(g)
        j0 = d.color(off)
        if j0 == j:
            return
        d.setcolor(j, off)
        if j0 == 0:
            if d.size(0) == 0:
                self._upper[0].insert(g)
        elif d.size(j0) == 0:
            self._upper[j0].delete(g)
        if j == 0:
            self._upper[0].delete(g)
        else:
            self._upper[j].insert(g)

    def choice(self, j):
        if not 0 <= j < self.c:
            return 0
        if j == 0:
            g = self._upper[0].cd_choice(0)
            if g == 0:
                return 0
            d = self._lower[g - 1]
            if d is None:
                return (g - 1) * self.k + 1
            e = d.choice(0)
        else:
            g = self._upper[j].cd_choice(1)
            if g == 0:
                return 0
            e = self._lower[g - 1].choice(j)
        return (g - 1) * self.k + e if e else 0

    def size(self, j):
        if not 0 <= j < self.c:
            return 0
        total = 0
        untouched = self.n
        for g in range(1, self.n1 + 1):
            d = self._lower[g - 1]
            if d is not None:
                untouched -= d.universe_size
                total += d.size(j)
        return total + untouched if j == 0 else total

    # -- iteration: outer walk over groups, inner walk within one

    def iter_init(self, j):
        if not 0 <= j < self.c:
            return
        self._upper[j].cd_iter_init(0 if j == 0 else 1)
        self._it[j] = {"g": 0, "pos": 0, "active": True}

    def _inner_start(self, j, st):
        st["pos"] = 0
        d = self._lower[st["g"] - 1]
        if d is not None and self.leaf == "dense":
            d.iter_init(j)

    def _inner_next(self, j, st):
        g = st["g"]
        d = self._lower[g - 1]
        if d is None:
            if j != 0:
                return 0
            nxt = st["pos"] + 1
            if nxt > self._group_deg(g):
                return 0
            st["pos"] = nxt
            return nxt
        if self.leaf == "dense":
            return d.iter_next(j)
        e = d.successor(j, st["pos"])
        if e:
            st["pos"] = e
        return e

    def _inner_peek(self, j, st):
        g = st["g"]
        d = self._lower[g - 1]
        if d is None:
            return j == 0 and st["pos"] + 1 <= self._group_deg(g)
        if self.leaf == "dense":
            return d.iter_more(j)
        return d.successor(j, st["pos"]) != 0

    def iter_next(self, j):
        st = self._it.get(j)
        if not st or not st["active"]:
            return 0
        side = 0 if j == 0 else 1
        while True:
            g = st["g"]
            if g:
                e = self._inner_next(j, st)
                if e:
                    return (g - 1) * self.k + e
            g = self._upper[j].cd_iter_next(side)
            if g == 0:
                st["active"] = False
                return 0
            st["g"] = g
            self._inner_start(j, st)

    def iter_more(self, j):
        st = self._it.get(j)
        if not st or not st["active"]:
            return False
        if st["g"] and self._inner_peek(j, st):
            return True
        return self._upper[j].cd_iter_more(0 if j == 0 else 1)

    @property
    def bits_used(self):
        bits = 64
        for up in self._upper:
            bits += up.bits_used
        for d in self._lower:
            if d is not None:
                bits += d.bits_used
        return bits
