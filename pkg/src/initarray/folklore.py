"""Initializable array via the classic three-array chaining trick.

Three packed arrays of N elements each (values, forward stamps, back stamps)
plus two scalar registers. An index i holds a live value exactly when its
stamp points below the fill counter b and the counter's slot points back:
F[i] < b and T[F[i]] == i. Everything else reads as the pending initial
value. All three operations are constant time; the price is 2*l*(N+1) bits
of extra state on top of the N*l data bits.

The element width must cover an index (l >= ceil(log2 N)), otherwise the
stamps cannot name every slot.
"""

from __future__ import annotations

import random

from .words import WORD_BITS, PackedArray


class FolkloreArray:
    """iinit / iread / iwrite in O(1) with 2*l*(N+1) extra bits."""

    __slots__ = ("n", "elem_bits", "ledger", "_values", "_forward", "_back", "_b", "_initv")

    def __init__(self, n, elem_bits, word_bits=WORD_BITS, ledger=None, garbage=None):
        if n < 0:
            raise ValueError("n must be nonnegative")
        need = max(1, (n - 1).bit_length()) if n > 1 else 1
        if elem_bits < need:
            raise ValueError(f"elem_bits {elem_bits} cannot index {n} slots, need >= {need}")
        if elem_bits > 4 * word_bits:
            raise ValueError(f"elem_bits {elem_bits} exceeds the 4w cap ({4 * word_bits})")
        self.n = n
        self.elem_bits = elem_bits
        self.ledger = ledger
        self._values = PackedArray(n, elem_bits, word_bits, ledger)
        self._forward = PackedArray(n, elem_bits, word_bits, ledger)
        self._back = PackedArray(n, elem_bits, word_bits, ledger)
        self._b = 0
        self._initv = 0
        if garbage is not None:
            self.fill_garbage(garbage)

    def __len__(self):
        return self.n

    def fill_garbage(self, rng: random.Random):
        """Scribble over all storage, simulating uninitialized memory."""
        for pa in (self._values, self._forward, self._back):
            buf = pa.buf
            for k in range(len(buf.words)):
                buf.poke_word(k, rng.getrandbits(64))
        # any counter below n is as garbage as any other, and it keeps a
        # pre-iinit write from stamping past the end of the arrays
        self._b = rng.randrange(self.n) if self.n else 0
        self._initv = rng.getrandbits(self.elem_bits)

    def iinit(self, v):
        """Reset every slot to v. Two scalar writes, no array traffic."""
        if v < 0 or v > self._values.mask:
            raise ValueError(f"value {v} wider than {self.elem_bits} bits")
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        self._b = 0
        self._initv = v
        if lg is not None:
            lg.settle(base)

    def _chained(self, i):
        j = self._forward.read(i)
        return j < self._b and self._back.read(j) == i

    def iread(self, i):
        if i < 0 or i >= self.n:
            raise IndexError(f"index {i} outside [0, {self.n})")
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        out = self._values.read(i) if self._chained(i) else self._initv
        if lg is not None:
            lg.settle(base)
        return out

    def iwrite(self, i, v):
        if i < 0 or i >= self.n:
            raise IndexError(f"index {i} outside [0, {self.n})")
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        self._values.write(i, v)
        if not self._chained(i):
            b = self._b
            self._back.write(b, i)
            self._forward.write(i, b)
            self._b = b + 1
        if lg is not None:
            lg.settle(base)

    def extra_bits(self):
        """Mutable bits beyond the N*l data bits."""
        return self._forward.bits + self._back.bits + 2 * self.elem_bits

    def storage_words(self):
        return len(self._values.buf.words) + len(self._forward.buf.words) + len(self._back.buf.words)

    def data_words(self):
        return list(self._values.buf.words)
