"""A permutation of {1..n} under cyclic value rotation, O(1) startup.

Two arrays P and P_inv represent the permutation, but an entry is
trusted only if the other array confirms it and at least one side of
the pair exceeds a threshold mu; untrusted entries evaluate as the
identity.  mu starts near n (everything reads as the identity over
garbage storage) and is lowered one slot per `consolidate` call,
installing explicit identity entries as it goes.  `rotate` cycles the
values at k given arguments in O(k) time; the result is guaranteed to
agree with the requested rotation on arguments above mu and is always
some permutation of the universe.
"""

from .wordops import PackedVector


class RotatablePermutation:

    __slots__ = ("n", "mu", "_p", "_q", "_f")

    def __init__(self, n, backing_p=None, backing_q=None):
        if n < 1:
            raise ValueError("universe must be nonempty")
        self.n = n
        self._f = max(1, (n - 1).bit_length())
        self._p = PackedVector(n, self._f, backing=backing_p, clear=False)
        self._q = PackedVector(n, self._f, backing=backing_q, clear=False)
        self.mu = n
        self.consolidate()

    @property
    def bits_used(self):
        return self._p.bits_used + self._q.bits_used + 64

    def _proper_p(self, ell):
        v = self._p.get(ell - 1) + 1
        return v if v <= self.n and self._q.get(v - 1) + 1 == ell and max(ell, v) > self.mu else 0

    def _proper_q(self, ell):
        v = self._q.get(ell - 1) + 1
        return v if v <= self.n and self._p.get(v - 1) + 1 == ell and max(ell, v) > self.mu else 0

    def evaluate(self, ell):
        v = self._proper_p(ell)
        return v if v else ell

    def evaluate_inv(self, ell):
        v = self._proper_q(ell)
        return v if v else ell

    def consolidate(self):
        mu = self.mu
        if mu == 0:
            return
        if not self._proper_p(mu):
            self._p.set(mu - 1, mu - 1)
            self._q.set(mu - 1, mu - 1)
        self.mu = mu - 1

    def rotate(self, args):
        """Cycle values: new pi(args[i]) = old pi(args[i+1]), wrapping."""
        k = len(args)
        if k == 0:
            return
        p = self._p
        q = self._q
        mu = self.mu
        for j in args:
            if not self._proper_p(j):
                p.set(j - 1, j - 1)
        first = p.get(args[0] - 1)
        for i in range(k - 1):
            p.set(args[i] - 1, p.get(args[i + 1] - 1))
        p.set(args[k - 1] - 1, first)
        for j in args:
            q.set(p.get(j - 1), j - 1)
        aset = set()
        bset = set()
        for j in args:
            if j <= mu:
                v = p.get(j - 1) + 1
                if v <= mu:
                    aset.add(j)
                    bset.add(v)
        holes = sorted(aset - bset)
        if holes:
            vals = sorted(p.get(b - 1) for b in bset - aset)
            for j, v in zip(holes, vals):
                p.set(j - 1, v)
                q.set(v, j - 1)
