"""c-color dictionary with stable ranking in O((n+c) log(n+c)) bits.

Elements are kept sorted by "hue": each color class S_j is split into a
to-enumerate segment R_2j and a not-to-enumerate segment R_2j+1, and a
rotatable permutation holds the elements of R_0, R_1, ... R_2c-1 in
consecutive position ranges.  Segment sizes and their prefix sums pin
the range boundaries, so rank and select within a class are single
permutation evaluations, and recoloring is a rotation across the
intervening boundaries (O(1) positions touched per segment crossed).

Iteration over S_j first merges R_2j+1 into R_2j, then repeatedly moves
the boundary back by one, emitting the crossing element.  A recolored
element always lands in a not-to-enumerate segment, which is what makes
interleaved updates safe.

Hues live in a lazily initialized array (default hue 0), so
construction writes O(1) words even over garbage memory.  The stored
hue's low bit can go stale (boundary moves do not rewrite it); the
color ⌊hue/2⌋ is always current, and the true segment parity is
recomputed from the element's position when needed.
"""

from .lazyinit import InitFreeArray
from .rotperm import RotatablePermutation
from .wordops import PackedVector


class _OneWordHues:
    """Hue store for universes whose hues fit in a single word.

    Zeroing one word is itself a constant-time initialization, so the
    lazy tracking machinery would cost more than it saves here.
    """

    __slots__ = ("_pv",)

    def __init__(self, n, cell_bits, backing=None):
        self._pv = PackedVector(n, cell_bits, backing=backing)
        self._pv.limbs[0] = 0

    @property
    def bits_used(self):
        return 64

    @property
    def tracking_bits(self):
        return 0

    def arr_read(self, i):
        return self._pv.get(i)

    def arr_write(self, i, value):
        self._pv.set(i, value)


class DenseChoiceDict:
    """Choice dictionary over {1..n} with c colors and stable p_rank."""

    __slots__ = ("n", "c", "_perm", "_m", "_s", "_hues")

    def __init__(self, n, c, backing_p=None, backing_q=None,
                 backing_hues=None, backing_track=(None, None)):
        if n < 1 or c < 1:
            raise ValueError("need n >= 1 and c >= 1")
        self.n = n
        self.c = c
        self._perm = RotatablePermutation(n, backing_p=backing_p,
                                          backing_q=backing_q)
        width = max(1, n.bit_length())
        self._m = PackedVector(2 * c, width)
        self._s = PackedVector(2 * c, width)
        self._m.set(0, n)
        self._s.fill(n)
        hue_bits = max(1, (2 * c - 1).bit_length())
        if n * hue_bits <= 64:
            self._hues = _OneWordHues(n, hue_bits, backing=backing_hues)
        else:
            self._hues = InitFreeArray(
                n, hue_bits, backing=backing_hues,
                track_backing=backing_track)

    @property
    def universe_size(self):
        return self.n

    @property
    def bits_used(self):
        return (self._perm.bits_used + self._m.bits_used + self._s.bits_used
                + self._hues.bits_used + 64)

    @property
    def tracking_bits(self):
        return self._hues.tracking_bits

    def _sk(self, k):
        # prefix sum s_k with the constant s_{-1} = 0
        return self._s.get(k) if k >= 0 else 0

    def _hue(self, ell):
        """Current hue; the stored low bit is ignored in favor of the
        element's position relative to the segment boundary."""
        j = self._hues.arr_read(ell - 1) >> 1
        if self._perm.evaluate_inv(ell) <= self._sk(2 * j):
            return 2 * j
        return 2 * j + 1

    def color(self, ell):
        return self._hues.arr_read(ell - 1) >> 1

    def size(self, j):
        if not 0 <= j < self.c:
            return 0
        return self._m.get(2 * j) + self._m.get(2 * j + 1)

    def _move(self, p, a, b):
        """Rotate the element at position p from segment a to segment b
        and update the counters."""
        if a < b:
            args = [p] + [self._sk(k) for k in range(a, b)]
        else:
            args = [p] + [self._sk(k) + 1 for k in range(a - 1, b - 1, -1)]
        seen = set()
        distinct = []
        for x in args:
            if x not in seen:
                seen.add(x)
                distinct.append(x)
        if len(distinct) > 1:
            self._perm.rotate(distinct)
        self._m.add(a, -1)
        self._m.add(b, 1)
        if a < b:
            for k in range(a, b):
                self._s.add(k, -1)
        else:
            for k in range(b, a):
                self._s.add(k, 1)

    def setcolor(self, j, ell):
        if not 0 <= j < self.c:
            return
        if self.color(ell) == j:
            return
        self._perm.consolidate()
        a = self._hue(ell)
        p = self._perm.evaluate_inv(ell)
        self._move(p, a, 2 * j + 1)
        self._hues.arr_write(ell - 1, 2 * j + 1)
        assert self._perm.mu <= self._m.get(0)

    def choice(self, j):
        return self.p_select(j, 1)

    def p_rank(self, ell):
        """Position of ell within its class under the current bijection;
        stable between setcolor calls."""
        j = self.color(ell)
        return self._perm.evaluate_inv(ell) - self._sk(2 * j - 1)

    def p_select(self, j, k):
        """k-th element of S_j under the current bijection, or 0."""
        if not 0 <= j < self.c:
            return 0
        if k < 1 or k > self._m.get(2 * j) + self._m.get(2 * j + 1):
            return 0
        return self._perm.evaluate(self._sk(2 * j - 1) + k)

    def uniform_choice(self, j, rng):
        sz = self.size(j)
        if sz == 0:
            return 0
        return self.p_select(j, 1 + rng.randrange(sz))

    def iter_init(self, j):
        if not 0 <= j < self.c:
            return
        self._m.add(2 * j, self._m.get(2 * j + 1))
        self._s.set(2 * j, self._sk(2 * j + 1))
        self._m.set(2 * j + 1, 0)

    def iter_more(self, j):
        return 0 <= j < self.c and self._m.get(2 * j) > 0

    def iter_next(self, j):
        if not self.iter_more(j):
            return 0
        self._perm.consolidate()
        self._m.add(2 * j, -1)
        self._s.add(2 * j, -1)
        self._m.add(2 * j + 1, 1)
        assert self._perm.mu <= self._m.get(0)
        return self._perm.evaluate(self._sk(2 * j) + 1)
