"""Searchable prefix sums with constant-time word-local blocks.

Maintains an array A[1..n] of nonnegative integers under point updates
of absolute value below 2**delta, prefix-sum queries, and rank searches
over the monotone prefix-sum sequence.  A shallow tree with branching
m = Theta(min(sqrt(w/delta), n)) stores at every node the subtree
totals of its children in a block answering all three operations in
constant time, for O(1 + log n / log m) per operation overall.

A block cannot afford to recompute its m prefix sums on every update,
so it works in phases of m updates.  Besides the current entries it
keeps the prefix sums as of the last phase boundary, the per-entry
deltas of the completed and of the running phase as packed small
vectors, and a clamped copy of the entries.  sum combines the stale
prefix sums with the packed deltas.  Rank searches first locate the
nearest stale prefix sum, then rank a clamped query against a clamped,
renormalized copy of the prefix sums held in a single integer; entries
the clamping distorts are provably too far from the query to change
the answer.  A fresh snapshot and its ranking index are rebuilt in the
background, a few entries per update, and stand ready when the next
phase begins.

Nodes spring into existence the first time an update reaches them, so
construction is constant time and untouched subtrees cost nothing.
"""

import bisect
from math import isqrt

from .wordops import PackedVector, field_rank, ones_pattern

WORD = 64


class _Block:
    """Prefix sums over m entries with O(1) sum, rank and update.

    Entry values and prefix sums use b bits; updates stay below 2**delta
    in absolute value.  t counts updates mod 2m; the phase boundary s is
    implicit in which buffers hold what.
    """

    __slots__ = (
        "m", "b", "delta", "h", "a", "f", "fmask", "ones", "ramp", "aoff",
        "t", "entries", "sig", "spare", "done", "acc", "rvec",
        "d_vals", "d_idx", "_pend_vals", "_pend_idx", "_done_prod",
        "cursor", "debug",
    )

    def __init__(self, m, b, delta, debug=False):
        self.m = m
        self.b = b
        self.delta = delta
        h = (1 << (delta + 1)) * m
        self.h = h
        self.a = 2 * h
        # fields hold value + offset for offsets up to 6mh, and survive
        # the prefix-summing multiply, which scales by another factor m
        f = delta + 2 * (m - 1).bit_length() + 6
        self.f = f
        self.fmask = (1 << f) - 1
        self.ones = ones_pattern(m, f)
        self.ramp = (self.ones * self.ones) & ((1 << (m * f)) - 1)
        self.aoff = 6 * m * h
        self.t = 0
        self.entries = PackedVector(m, b)
        self.sig = PackedVector(m, b)
        self.spare = PackedVector(m, b)
        zero = self.a * self.ones
        self.done = zero
        self.acc = zero
        self.rvec = zero
        self.d_vals = [0] * m
        self.d_idx = list(range(1, m + 1))
        self._pend_vals = self.d_vals
        self._pend_idx = self.d_idx
        self._done_prod = 0
        self.cursor = 0
        self.debug = debug

    def _sig_small(self, prod, j):
        """Prefix sum of a packed delta vector at j, given vec * ones."""
        return ((prod >> ((j - 1) * self.f)) & self.fmask) - j * self.a

    def sum(self, j):
        if j == 0:
            return 0
        return (
            self.sig.get(j - 1)
            + self._sig_small(self.done * self.ones, j)
            + self._sig_small(self.acc * self.ones, j)
        )

    def update(self, j, delta):
        self.entries.add(j - 1, delta)
        sh = (j - 1) * self.f
        self.acc += delta << sh
        v = self.entries.get(j - 1)
        clamped = v if v < self.a else self.a
        self.rvec = (self.rvec & ~(self.fmask << sh)) | ((clamped + self.a) << sh)
        self._background(4)
        self.t += 1
        if self.t % self.m == 0:
            assert self.cursor > self.m, "phase snapshot fell behind"
            self.sig, self.spare = self.spare, self.sig
            self.d_vals = self._pend_vals
            self.d_idx = self._pend_idx
            self.done = self.acc
            self.acc = self.a * self.ones
            self.cursor = 0
            if self.t == 2 * self.m:
                self.t = 0

    def _background(self, parcels):
        # rebuilds the boundary snapshot: one prefix sum per parcel,
        # then the ranking index in one final parcel
        cur = self.cursor
        if cur > self.m:
            return
        m = self.m
        stop = min(cur + parcels, m + 1)
        while cur < stop:
            if cur == 0:
                self._done_prod = self.done * self.ones
            if cur < m:
                self.spare.set(
                    cur, self.sig.get(cur) + self._sig_small(self._done_prod, cur + 1)
                )
            else:
                pairs = sorted((self.spare.get(i), i + 1) for i in range(m))
                self._pend_vals = [p[0] for p in pairs]
                self._pend_idx = [p[1] for p in pairs]
            cur += 1
        self.cursor = cur

    def rank(self, x):
        """The number of prefix sums that are at most x, for x >= 0."""
        vals = self.d_vals
        p = bisect.bisect_left(vals, x)
        if p == self.m or (p and x - vals[p - 1] <= vals[p] - x):
            p -= 1
        j_star = self.d_idx[p]
        x0 = vals[p]
        f = self.f
        a = self.a
        prod_r = self.rvec * self.ones
        sig_r = self._sig_small(prod_r, j_star)
        sig_d = self._sig_small(self.done * self.ones, j_star) + self._sig_small(
            self.acc * self.ones, j_star
        )
        drift = sig_r - sig_d
        packed = prod_r - a * self.ramp + (self.aoff - drift) * self.ones
        y = x - x0
        h = self.h
        if y > h:
            y = h
        elif y < -h:
            y = -h
        r = field_rank(packed, y + self.aoff, self.m, f)
        if self.debug:
            self._check_approximation(packed, j_star, x0)
        return r

    def _check_approximation(self, packed, j_star, x0):
        # the clamped copy may only differ from the truth where it is
        # already far outside the band the query was clamped into
        h = self.h
        run = 0
        for j in range(1, self.m + 1):
            run += self.entries.get(j - 1)
            exact = run - x0
            approx = ((packed >> ((j - 1) * self.f)) & self.fmask) - self.aoff
            assert approx == exact or abs(approx) > h
            if j == j_star:
                assert abs(exact) < h

    @property
    def bits_used(self):
        bits = self.entries.bits_used + self.sig.bits_used + self.spare.bits_used
        bits += 3 * 64 * ((self.m * self.f + 63) >> 6)
        bits += 2 * self.m * (self.b + self.m.bit_length())
        return bits + 6 * 64


class _Node:
    __slots__ = ("length", "width", "block", "kids")

    def __init__(self, length, owner):
        self.length = length
        self.block = _Block(owner.m, owner.b, owner.delta, owner.debug)
        if length <= owner.m:
            self.width = 0
            self.kids = None
        else:
            self.width = -(-length // owner.m)
            self.kids = [None] * (-(-length // self.width))


class SearchablePrefixSums:
    """Prefix sums over A[1..n] with search, in O(1+log n/log(1+w/δ)).

    sum(j) returns A[1]+...+A[j]; search(x) the first j with sum(j) >= x,
    or n+1 when the total falls short; update(j, d) adds d to A[j].
    Entries stay nonnegative, totals stay below 2**b, update magnitudes
    below 2**delta; violations raise.

    >>> s = SearchablePrefixSums(3, 20, 4)
    >>> s.update(2, 5)
    >>> s.sum(1), s.sum(2), s.search(3), s.search(6)
    (0, 5, 2, 4)
    """

    __slots__ = ("n", "b", "delta", "m", "debug", "_root")

    def __init__(self, n, b, delta, debug=False):
        if not (isinstance(n, int) and n >= 1):
            raise ValueError("universe size must be a positive integer")
        if not (isinstance(delta, int) and isinstance(b, int)):
            raise TypeError("bit lengths must be integers")
        if not 1 <= delta <= b <= WORD:
            raise ValueError("need 1 <= delta <= b <= word size")
        self.n = n
        self.b = b
        self.delta = delta
        self.m = max(2, min(n, isqrt(WORD // delta)))
        self.debug = debug
        self._root = _Node(n, self)

    def total(self):
        blk = self._root.block
        return blk.sum(blk.m)

    def value(self, j):
        """A[j], derived as sum(j) - sum(j-1)."""
        return self.sum(j) - self.sum(j - 1)

    def sum(self, j):
        if not 0 <= j <= self.n:
            raise IndexError("prefix index out of range")
        acc = 0
        node = self._root
        while j:
            blk = node.block
            if node.width == 0:
                return acc + blk.sum(j)
            q = (j - 1) // node.width
            rem = j - q * node.width
            if rem == min(node.width, node.length - q * node.width):
                return acc + blk.sum(q + 1)
            acc += blk.sum(q)
            node = node.kids[q]
            if node is None:
                return acc
            j = rem
        return acc

    def search(self, x):
        if not 1 <= x < 1 << self.b:
            raise ValueError("search argument out of range")
        if x > self.total():
            return self.n + 1
        node = self._root
        pos = 0
        while True:
            r = node.block.rank(x - 1)
            if node.width == 0:
                return pos + r + 1
            x -= node.block.sum(r)
            pos += r * node.width
            node = node.kids[r]
            assert node is not None

    def search_complement(self, x, cap):
        """First j with cap*j - sum(j) >= x, or n+1 when the whole
        complement total cap*n - total() falls short.

        Views the array through the lens of a fixed per-entry capacity:
        entry j contributes cap - A[j] to a virtual prefix sequence.
        Every entry must stay at most cap, otherwise the virtual
        sequence is not monotone and the result is unspecified.  Costs
        one short scan per tree level rather than the O(1) rank a
        stored sequence gets.
        """
        if not (isinstance(cap, int) and cap >= 1):
            raise ValueError("capacity must be a positive integer")
        if not (isinstance(x, int) and x >= 1):
            raise ValueError("search argument must be a positive integer")
        if x > cap * self.n - self.total():
            return self.n + 1
        node = self._root
        pos = 0
        acc = 0
        while node.width:
            blk = node.block
            q = 1
            last = len(node.kids)
            while q < last:
                b = q * node.width
                if cap * (pos + b) - (acc + blk.sum(q)) >= x:
                    break
                q += 1
            acc += blk.sum(q - 1)
            pos += (q - 1) * node.width
            kid = node.kids[q - 1]
            if kid is None:
                # untouched subtree, all entries zero: solve directly
                return -(-(x + acc) // cap)
            node = kid
        blk = node.block
        for j in range(1, node.length + 1):
            if cap * (pos + j) - (acc + blk.sum(j)) >= x:
                return pos + j
        raise AssertionError("complement search lost its target")

    def update(self, j, delta):
        if not 1 <= j <= self.n:
            raise IndexError("index out of range")
        if not isinstance(delta, int) or abs(delta) >= 1 << self.delta:
            raise ValueError("update magnitude too large")
        if delta == 0:
            return
        if delta < 0 and self.value(j) + delta < 0:
            raise ValueError("entry would become negative")
        if delta > 0 and self.total() + delta >= 1 << self.b:
            raise ValueError("total would overflow the sum width")
        node = self._root
        while True:
            if node.width == 0:
                node.block.update(j, delta)
                return
            q = (j - 1) // node.width
            node.block.update(q + 1, delta)
            j -= q * node.width
            kid = node.kids[q]
            if kid is None:
                span = min(node.width, node.length - q * node.width)
                kid = node.kids[q] = _Node(span, self)
            node = kid

    @property
    def bits_used(self):
        bits = 64
        stack = [self._root]
        while stack:
            node = stack.pop()
            bits += node.block.bits_used + 64
            if node.kids is not None:
                bits += 64 * len(node.kids)
                stack.extend(k for k in node.kids if k is not None)
        return bits
