"""In-place initializable array for even N and l >= ceil(log2 N).

The N elements are the only array storage; the extra state is two scalar
registers (the block counter b and the pending initial value initv), 2*l bits
in total. Elements are paired into N/2 blocks, block i covering slots 2i and
2i+1. Blocks below b form the written area, blocks at or above b the
unwritten area.

Two blocks i and j are chained when their first elements point at each other
(A[2i] == 2j and A[2j] == 2i) and exactly one of them is written. Chains are
the bookkeeping device: a written block that is chained actually still holds
initial values, and its chain partner in the unwritten area holds real data
for it. Concretely, with B_k the partner of B_i:

  written,   unchained: slots hold their own values
  written,   chained:   both slots read as initv; A[2i+1] carries B_k's
                        first value for it
  unwritten, chained:   slot 2k reads as A[A[2k] + 1] (stored at the partner),
                        slot 2k+1 reads as A[2k+1]
  unwritten, unchained: both slots read as initv, contents are arbitrary

iinit only resets b and initv; every stale chain then fails the area test,
so the whole array reads as initv without touching a word. Writes grow the
written area one block at a time through extend(), recycling chain partners
so no block is ever initialized more than once per epoch.

Mutating the pointer slot of an unrelated block is harmless by construction:
breakChain only ever writes a self-pointer, and a self-pointer never passes
the two-area test. The pointer reads are bounds-guarded because an arbitrary
stored value can look like a pointer; anything odd or out of range simply
fails the chain test.
"""

from __future__ import annotations

import random

from .words import WORD_BITS, PackedArray, dump_bytes


class ChainedBlockCore:
    """Block-chaining engine shared by the in-place variants.

    Subclasses provide element access (_val_get/_val_set), pointer-slot
    access (_ptr_get/_ptr_set, distinct only where metadata is embedded),
    the counter hook _set_b, and the attributes _b, _initv, _core_blocks.
    All indices here are core element indices; callers map their own index
    space onto the core first.
    """

    __slots__ = ()

    def _chain_with(self, i):
        """Partner block of B_i, or -1 when B_i is not chained."""
        k2 = self._ptr_get(2 * i)
        if k2 & 1:
            return -1
        k = k2 >> 1
        if k == i or k >= self._core_blocks:
            return -1
        if self._ptr_get(k2) != 2 * i:
            return -1
        if i < self._b:
            return k if k >= self._b else -1
        return k if k < self._b else -1

    def _make_chain(self, i, j):
        self._ptr_set(2 * i, 2 * j)
        self._ptr_set(2 * j, 2 * i)

    def _break_chain(self, i):
        """Detach B_i's partner, if any, by pointing it at itself."""
        k = self._chain_with(i)
        if k >= 0:
            self._ptr_set(2 * k, 2 * k)

    def _init_block(self, i):
        v = self._initv
        self._val_set(2 * i, v)
        self._val_set(2 * i + 1, v)

    def _extend(self):
        """Grow the written area by one block; return a block that is all initv.

        The outgoing boundary block materializes its logical values first: its
        second slot already holds one, the other lives at the chain partner.
        The partner (or the boundary itself when unchained) is handed back to
        the caller freshly initialized and unchained.
        """
        b = self._b
        k = self._chain_with(b)
        self._set_b(b + 1)
        if k < 0:
            k = b
        else:
            self._val_set(2 * b, self._val_get(2 * k + 1))
            self._break_chain(b)
        self._init_block(k)
        self._break_chain(k)
        return k

    def _core_read(self, i):
        ip = i >> 1
        k = self._chain_with(ip)
        if ip < self._b:
            return self._initv if k >= 0 else self._val_get(i)
        if k < 0:
            return self._initv
        if i & 1:
            return self._val_get(i)
        return self._val_get(2 * k + 1)

    def _core_write(self, i, v):
        ip = i >> 1
        k = self._chain_with(ip)
        if ip < self._b:
            if k < 0:
                self._val_set(i, v)
                self._break_chain(ip)
                return
            j = self._extend()
            if j == ip:
                self._val_set(i, v)
                self._break_chain(ip)
                return
            # move this block's stored value onto the fresh block, hand the
            # fresh block over as the partner's new mate, then reclaim B_ip
            self._val_set(2 * j + 1, self._val_get(2 * ip + 1))
            self._make_chain(j, k)
            self._init_block(ip)
            self._val_set(i, v)
            self._break_chain(ip)
            return
        if k >= 0:
            if i & 1:
                self._val_set(i, v)
            else:
                self._val_set(2 * k + 1, v)
            return
        j = self._extend()
        if j == ip:
            self._val_set(i, v)
            self._break_chain(ip)
            return
        # B_ip becomes a chained unwritten block: second slot keeps data,
        # first turns into the pointer via the chain below. Writing initv
        # first matches the state an unwritten chained block must present.
        self._val_set(2 * ip + 1, self._initv)
        self._make_chain(j, ip)
        if i & 1:
            self._val_set(i, v)
        else:
            self._val_set(2 * j + 1, v)


class SpecialArray(ChainedBlockCore):
    """In-place initializable array using 2*l extra bits.

    Requires an even element count and an element width that can hold an
    index (l >= ceil(log2 N)). With checked=True every mutation is followed
    by a full invariant scan, which turns the structure into its own fuzzing
    harness at a hefty constant cost.
    """

    __slots__ = ("n", "elem_bits", "ledger", "checked", "_A", "_b", "_initv", "_core_blocks")

    def __init__(self, n, elem_bits, word_bits=WORD_BITS, ledger=None, garbage=None, checked=False):
        if n < 0 or n % 2:
            raise ValueError(f"n must be even, got {n}")
        need = max(1, (n - 1).bit_length()) if n > 1 else 1
        if elem_bits < need:
            raise ValueError(f"elem_bits {elem_bits} cannot hold a pointer over {n} slots")
        if elem_bits > 4 * word_bits:
            raise ValueError(f"elem_bits {elem_bits} exceeds the 4w cap ({4 * word_bits})")
        self.n = n
        self.elem_bits = elem_bits
        self.ledger = ledger
        self.checked = checked
        self._A = PackedArray(n, elem_bits, word_bits, ledger)
        self._b = 0
        self._initv = 0
        self._core_blocks = n // 2
        if garbage is not None:
            self.fill_garbage(garbage)

    def __len__(self):
        return self.n

    # element and pointer slots coincide here; chains live in the data array

    def _val_get(self, j):
        return self._A.read(j)

    def _val_set(self, j, x):
        self._A.write(j, x)

    _ptr_get = _val_get
    _ptr_set = _val_set

    def _set_b(self, x):
        self._b = x

    def fill_garbage(self, rng: random.Random):
        """Scribble over the array and both registers."""
        buf = self._A.buf
        for k in range(len(buf.words)):
            buf.poke_word(k, rng.getrandbits(64))
        self._b = rng.randrange(self._core_blocks + 1) if self.n else 0
        self._initv = rng.getrandbits(self.elem_bits)

    def iinit(self, v):
        """Reset every slot to v: two scalar writes, zero word traffic."""
        if v < 0 or v > self._A.mask:
            raise ValueError(f"value {v} wider than {self.elem_bits} bits")
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        self._b = 0
        self._initv = v
        if lg is not None:
            lg.settle(base)
        if self.checked:
            self._check()

    def iread(self, i):
        if i < 0 or i >= self.n:
            raise IndexError(f"index {i} outside [0, {self.n})")
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        out = self._core_read(i)
        if lg is not None:
            lg.settle(base)
        return out

    def iwrite(self, i, v):
        if i < 0 or i >= self.n:
            raise IndexError(f"index {i} outside [0, {self.n})")
        if v < 0 or v > self._A.mask:
            raise ValueError(f"value {v} wider than {self.elem_bits} bits")
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        self._core_write(i, v)
        if lg is not None:
            lg.settle(base)
        if self.checked:
            self._check()

    def _check(self):
        from .verify import scan_invariants

        problems = scan_invariants(self)
        if problems:
            raise AssertionError("; ".join(problems))

    def chain_with(self, i):
        """Public probe: partner block index of B_i, or None."""
        if i < 0 or i >= self._core_blocks:
            raise IndexError(f"block {i} outside [0, {self._core_blocks})")
        k = self._chain_with(i)
        return None if k < 0 else k

    def extra_bits(self):
        """The two registers are the only mutable state beyond the data."""
        return 2 * self.elem_bits

    def storage_words(self):
        return len(self._A.buf.words)

    def data_words(self):
        return list(self._A.buf.words)

    def dump(self):
        return dump_bytes(self._A.buf, self.n, self.elem_bits, flag=0)
