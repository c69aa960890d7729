"""Flat-array c-color dictionary: one ceil(log2 c)-bit field per element.

Color reads and writes are single field accesses.  Neighbor queries
(successor/predecessor within a color class) run over whole words at a
time: a block of fields is XORed with the target color and the
zero-field transform pinpoints the nearest match, so the scan advances
word-parallel rather than element by element.

With one color there is nothing to store; every element permanently has
color 0 and neighbor queries reduce to arithmetic.
"""

from .wordops import PackedVector, field_extrema, ones_pattern, zero_fields

_BLOCK_BITS = 4096


class AtomicColorDict:
    """c-color dictionary over {1..n} backed by a packed field array."""

    __slots__ = ("n", "c", "f", "_fields", "_iters", "_block")

    def __init__(self, n, c, backing=None, clear=True):
        if n < 1 or c < 1:
            raise ValueError("need n >= 1 and c >= 1")
        self.n = n
        self.c = c
        self.f = max(c - 1, 0).bit_length()
        if self.f:
            self._fields = PackedVector(n, self.f, backing=backing, clear=clear)
            self._block = max(1, _BLOCK_BITS // self.f)
        else:
            self._fields = None
            self._block = n
        self._iters = {}

    @property
    def universe_size(self):
        return self.n

    @property
    def bits_used(self):
        base = self._fields.bits_used if self._fields is not None else 0
        return base + 64

    def color(self, ell):
        if self.f == 0:
            return 0
        return self._fields.get(ell - 1)

    def setcolor(self, j, ell):
        if not 0 <= j < self.c:
            return
        if self.f:
            self._fields.set(ell - 1, j)

    def choice(self, j):
        return self.successor(j, 0)

    def size(self, j):
        if not 0 <= j < self.c:
            return 0
        if self.f == 0:
            return self.n
        total = 0
        f = self.f
        i = 0
        while i < self.n:
            hi = min(i + self._block, self.n)
            m = hi - i
            x = self._fields.window(i, hi) ^ (j * ones_pattern(m, f))
            marks = zero_fields(x, m, f)
            total += bin(marks).count("1")
            i = hi
        return total

    def successor(self, j, ell):
        """Least element of S_j greater than ell, or 0."""
        if not 0 <= j < self.c:
            return 0
        start = max(ell, 0)
        if start >= self.n:
            return 0
        if self.f == 0:
            return start + 1
        f = self.f
        i = start
        while i < self.n:
            hi = min(i + self._block, self.n)
            m = hi - i
            x = self._fields.window(i, hi) ^ (j * ones_pattern(m, f))
            lo, _ = field_extrema(x, m, f, zero=True)
            if lo:
                return i + lo
            i = hi
        return 0

    def predecessor(self, j, ell):
        """Greatest element of S_j less than ell, or 0."""
        if not 0 <= j < self.c:
            return 0
        end = min(ell, self.n + 1) - 1
        if end < 1:
            return 0
        if self.f == 0:
            return end
        f = self.f
        hi = end
        while hi > 0:
            i = max(0, hi - self._block)
            m = hi - i
            x = self._fields.window(i, hi) ^ (j * ones_pattern(m, f))
            _, top = field_extrema(x, m, f, zero=True)
            if top:
                return i + top
            hi = i
        return 0

    # Iteration is a successor walk; positions only increase, so nothing
    # is reported twice, and every element recolored into the class ahead
    # of the cursor (or kept in it throughout) is reported exactly once.

    def iter_init(self, j):
        self._iters[j] = 0

    def iter_more(self, j):
        last = self._iters.get(j)
        if last is None:
            return False
        return self.successor(j, last) != 0

    def iter_next(self, j):
        last = self._iters.get(j)
        if last is None:
            return 0
        nxt = self.successor(j, last)
        if nxt == 0:
            del self._iters[j]
            return 0
        self._iters[j] = nxt
        return nxt
