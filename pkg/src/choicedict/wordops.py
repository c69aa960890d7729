"""Broadword operations on packed sequences of equal-width bit fields.

A value x encodes the sequence (a_1, ..., a_m) of f-bit fields as
x = sum(2**(i*f) * a[i+1] for i in 0..m-1), i.e. field 1 occupies the
least significant f bits.  All routines treat x as plain Python integers;
`PackedVector` provides the word-array storage used by the data structures,
with conversion helpers at the boundaries.
"""

import sys
from array import array

M64 = (1 << 64) - 1

_BYTEORDER = sys.byteorder


def limbs_to_int(limbs):
    return int.from_bytes(limbs.tobytes(), _BYTEORDER)


def int_to_limbs(value, nlimbs):
    return array("Q", value.to_bytes(nlimbs * 8, _BYTEORDER))


def ones_pattern(m, f):
    """The integer with a 1 in the lowest bit of each of m f-bit fields.

    >>> bin(ones_pattern(4, 3))
    '0b1001001001'
    >>> ones_pattern(5, 1)
    31
    """
    return ((1 << (m * f)) - 1) // ((1 << f) - 1)


def floor_log(x, method="native"):
    """floor(log2(x)) for x >= 1.

    method "native" uses int.bit_length; "broadword" finds the highest
    nonzero 64-bit word and resolves within it branch-free (smear to a
    right-propagated mask, isolate the top bit, de Bruijn multiply).
    """
    if x < 1:
        raise ValueError("floor_log needs x >= 1")
    if method == "native":
        return x.bit_length() - 1
    if method != "broadword":
        raise ValueError("unknown method %r" % (method,))
    base = 0
    while x >> 64:
        x >>= 64
        base += 64
    return base + _floor_log64(x)


_DEBRUIJN = 0x03F79D71B4CB0A89
_DEBRUIJN_TAB = [0] * 64
for _i in range(64):
    _DEBRUIJN_TAB[((1 << _i) * _DEBRUIJN & M64) >> 58] = _i
del _i


def _floor_log64(v):
    v |= v >> 1
    v |= v >> 2
    v |= v >> 4
    v |= v >> 8
    v |= v >> 16
    v |= v >> 32
    v -= v >> 1
    return _DEBRUIJN_TAB[(v * _DEBRUIJN & M64) >> 58]


def zero_fields(x, m, f):
    """Map x to xbar whose field i is nonzero iff field i of x is zero.

    The resulting nonzero fields hold exactly the field's test bit (the
    most significant bit position of the field), so min/max searches on
    the output locate zero fields of the input.
    """
    t = ones_pattern(m, f) << (f - 1)
    y = x & t
    z = (x - y) | (y >> (f - 1))
    return (t - z) & t


def parallel_leq(x, k, m, f):
    """All-fields comparison against a threshold.

    Returns z whose field i is 1 if k >= a_i and 0 otherwise.

    >>> x = 5 | (2 << 3) | (7 << 6) | (0 << 9)   # fields (5, 2, 7, 0)
    >>> [parallel_leq(x, k, 4, 3) >> (3 * i) & 1 for k in (4,) for i in range(4)]
    [0, 1, 0, 1]
    """
    ones = ones_pattern(m, f)
    t = ones << (f - 1)
    kk = k * ones
    y = (kk | t) - (x - (x & t))
    zp = (kk | y) & ((kk & y) | (x ^ t))
    return (zp & t) >> (f - 1)


def field_rank(x, k, m, f):
    """Number of fields a_i with a_i <= k.  Requires m < 2**f."""
    if m >= 1 << f:
        raise ValueError("field_rank needs m < 2**f")
    z = parallel_leq(x, k, m, f)
    return ((z * ones_pattern(m, f)) >> ((m - 1) * f)) & ((1 << f) - 1)


def field_extrema(x, m, f, zero=False):
    """1-based indices (lo, hi) of the extreme nonzero fields of x.

    With zero=True, of the zero fields instead.  Returns (0, 0) when no
    field qualifies.
    """
    if zero:
        x = zero_fields(x & ((1 << (m * f)) - 1), m, f)
    else:
        x &= (1 << (m * f)) - 1
    if x == 0:
        return (0, 0)
    lo = ((x & -x).bit_length() - 1) // f + 1
    hi = (x.bit_length() - 1) // f + 1
    return (lo, hi)


def get_bits(limbs, off, width):
    """The width-bit slice starting at bit offset off of a 64-bit limb array.

    Width may exceed 64; the slice must lie inside the array.
    """
    if width == 0:
        return 0
    w0 = off >> 6
    w1 = (off + width - 1) >> 6
    x = 0
    for i in range(w1, w0 - 1, -1):
        x = (x << 64) | limbs[i]
    return (x >> (off & 63)) & ((1 << width) - 1)


def set_bits(limbs, off, width, value):
    """Overwrite the width-bit slice at bit offset off with value."""
    if width == 0:
        return
    w0 = off >> 6
    w1 = (off + width - 1) >> 6
    x = 0
    for i in range(w1, w0 - 1, -1):
        x = (x << 64) | limbs[i]
    sh = off & 63
    mask = ((1 << width) - 1) << sh
    x = (x & ~mask) | ((value << sh) & mask)
    for i in range(w0, w1 + 1):
        limbs[i] = x & M64
        x >>= 64


class PackedVector:
    """m fields of f bits each, packed little-endian into 64-bit limbs.

    The limb array is the structure's only storage; `bits_used` reports
    its capacity rounded to whole words.  A pre-existing limb array with
    arbitrary contents may be supplied as `backing`; nothing here relies
    on fresh storage being zeroed.
    """

    __slots__ = ("limbs", "m", "f")

    def __init__(self, m, f, backing=None, clear=True):
        self.m = m
        self.f = f
        nlimbs = (m * f + 63) >> 6
        if backing is not None:
            if len(backing) < nlimbs:
                raise ValueError("backing too small")
            self.limbs = backing
        elif clear:
            self.limbs = array("Q", bytes(nlimbs * 8))
        else:
            self.limbs = array("Q", [0]) * nlimbs

    @property
    def bits_used(self):
        return 64 * ((self.m * self.f + 63) >> 6)

    def get(self, i):
        f = self.f
        lo = i * f
        w = lo >> 6
        off = lo & 63
        limbs = self.limbs
        v = limbs[w] >> off
        got = 64 - off
        if got < f:
            v |= limbs[w + 1] << got
        return v & ((1 << f) - 1)

    def set(self, i, value):
        f = self.f
        lo = i * f
        w = lo >> 6
        off = lo & 63
        limbs = self.limbs
        mask = (1 << f) - 1
        limbs[w] = (limbs[w] & ~((mask << off) & M64) | ((value << off) & M64)) & M64
        got = 64 - off
        if got < f:
            rest = f - got
            limbs[w + 1] = (limbs[w + 1] & ~((1 << rest) - 1)) | (value >> got)

    def add(self, i, delta):
        self.set(i, self.get(i) + delta)

    def window(self, i0, i1):
        """Fields i0..i1-1 as one integer (field i0 least significant)."""
        f = self.f
        a = i0 * f
        b = i1 * f
        w0 = a >> 6
        w1 = (b + 63) >> 6
        chunk = int.from_bytes(self.limbs[w0:w1].tobytes(), _BYTEORDER)
        return (chunk >> (a - (w0 << 6))) & ((1 << (b - a)) - 1)

    def set_window(self, i0, i1, value):
        f = self.f
        a = i0 * f
        b = i1 * f
        w0 = a >> 6
        w1 = (b + 63) >> 6
        shift = a - (w0 << 6)
        chunk = int.from_bytes(self.limbs[w0:w1].tobytes(), _BYTEORDER)
        mask = ((1 << (b - a)) - 1) << shift
        chunk = (chunk & ~mask) | ((value << shift) & mask)
        self.limbs[w0:w1] = array(
            "Q", chunk.to_bytes((w1 - w0) * 8, _BYTEORDER)
        )

    def as_int(self):
        return limbs_to_int(self.limbs) & ((1 << (self.m * self.f)) - 1)

    def load_int(self, value):
        self.limbs[:] = int_to_limbs(
            value & ((1 << (self.m * self.f)) - 1), len(self.limbs)
        )

    def fill(self, value):
        for i in range(self.m):
            self.set(i, value)
