"""In-place initializable array for any length and width, one extra mutable bit.

The trick is to re-run the even-length construction at a coarser granularity.
Logical elements are grouped p per pack, p odd, sized so that a pack's width
l' = p*l can hold two block pointers plus a counter plus one logical value.
The packs form the core; whatever does not fill a whole pack (plus one spare
pack when the pack count comes out odd) is a constant-size tail that is
simply filled on init and accessed directly.

The core runs the paired-block scheme of SpecialArray, but its two scalar
registers must live somewhere: they are embedded in the first element of the
last core block, which serves as [pointer | counter | initial value] bit
fields as long as the structure is unsaturated. The last block is always the
far end of the unwritten area, and unwritten first slots are never read as
data, so the fields shadow nothing. Once every block is written the fields
die and the element reverts to plain data; the single persistent extra bit
(the flag) records which regime is active.

A fresh instance comes up with the flag set, i.e. as a plain array over
whatever the buffer holds: that keeps read-after-write meaningful before the
first iinit even on garbage storage. iinit clears the flag, seeds the fields
and refills the tail, all constant time.

Arrays whose whole payload is a bounded number of words (n*l <= 8w), or whose
core would not have even two packs, skip the machinery entirely and stay in
the flag-set regime forever; initializing them is a constant-size fill.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .words import WORD_BITS, WordBuffer, dump_bytes, parse_dump
from .inplace_special import ChainedBlockCore

DIRECT_WORDS = 8


@dataclass(frozen=True)
class MetaLayout:
    """Bit fields packed into the last core block's first element, LSB first."""

    elem: int        # core element index carrying the fields
    base_bit: int    # global bit offset of that element
    ptr_bits: int
    b_off: int
    b_bits: int
    iv_off: int
    iv_bits: int


@dataclass(frozen=True)
class GeneralParams:
    n: int
    elem_bits: int
    word_bits: int
    p: int           # logical elements per pack, odd
    pack_bits: int   # p * elem_bits
    n_prime: int     # whole packs
    c: int           # logical elements left over after whole packs
    core_elems: int  # packs in the core (n_prime rounded down to even)
    core_blocks: int
    core_slots: int  # logical elements covered by the core
    tail_elems: int  # logical elements handled directly
    direct: bool     # no core at all; the array is one bounded fill


def derive_params(n, elem_bits, word_bits=WORD_BITS):
    if n < 0:
        raise ValueError("n must be nonnegative")
    if elem_bits < 1:
        raise ValueError("elem_bits must be positive")
    if elem_bits > 4 * word_bits:
        raise ValueError(f"elem_bits {elem_bits} exceeds the 4w cap ({4 * word_bits})")
    index_bits = (n - 1).bit_length() if n > 1 else 0
    p = 2 * ((index_bits + elem_bits - 1) // elem_bits) + 1
    n_prime = n // p
    core_elems = n_prime - (n_prime % 2)
    direct = n * elem_bits <= DIRECT_WORDS * word_bits or core_elems < 2
    core_blocks = core_elems // 2
    core_slots = p * core_elems
    return GeneralParams(
        n=n,
        elem_bits=elem_bits,
        word_bits=word_bits,
        p=p,
        pack_bits=p * elem_bits,
        n_prime=n_prime,
        c=n - p * n_prime,
        core_elems=core_elems,
        core_blocks=core_blocks,
        core_slots=core_slots,
        tail_elems=n - core_slots,
        direct=direct,
    )


def meta_layout(params):
    """Field layout inside the last core block. Requires a non-direct core.

    The pointer and counter sit at the bottom of the pack, the initial value
    at the top. Anchoring the value field to the pack's end keeps it clear of
    the growing index fields, so its word footprint does not depend on n.
    """
    if params.direct:
        raise ValueError("direct arrays embed no metadata")
    elem = params.core_elems - 2
    ptr_bits = (params.core_elems - 1).bit_length() + 1
    b_bits = max(1, params.core_blocks.bit_length())
    iv_off = params.pack_bits - params.elem_bits
    layout = MetaLayout(
        elem=elem,
        base_bit=elem * params.pack_bits,
        ptr_bits=ptr_bits,
        b_off=ptr_bits,
        b_bits=b_bits,
        iv_off=iv_off,
        iv_bits=params.elem_bits,
    )
    if ptr_bits + b_bits > iv_off:
        raise AssertionError(
            f"metadata ({ptr_bits + b_bits + params.elem_bits} bits) spills out "
            f"of a {params.pack_bits}-bit pack; parameter derivation is broken"
        )
    return layout


class GeneralArray(ChainedBlockCore):
    """Initializable array of any shape using exactly one extra mutable bit."""

    __slots__ = (
        "n", "elem_bits", "word_bits", "ledger", "checked", "params", "meta",
        "_buf", "_flag", "_b", "_initv", "_p", "_lp", "_core_blocks",
        "_core_slots", "_meta_elem", "_mask", "_lpmask", "_iv_comb",
        "_shift", "_bmask", "_wbits",
    )

    def __init__(self, n, elem_bits, word_bits=WORD_BITS, ledger=None, garbage=None, checked=False):
        params = derive_params(n, elem_bits, word_bits)
        self.n = n
        self.elem_bits = elem_bits
        self.word_bits = word_bits
        self.ledger = ledger
        self.checked = checked
        self.params = params
        self.meta = None if params.direct else meta_layout(params)
        self._buf = WordBuffer(n * elem_bits, word_bits, ledger)
        self._flag = True
        self._b = None
        self._initv = None
        self._p = params.p
        self._lp = params.pack_bits
        self._core_blocks = params.core_blocks
        self._core_slots = 0 if params.direct else params.core_slots
        self._meta_elem = -1 if params.direct else self.meta.elem
        self._mask = (1 << elem_bits) - 1
        self._lpmask = (1 << params.pack_bits) - 1
        self._iv_comb = self._lpmask // self._mask
        self._shift = self._buf._shift
        self._bmask = self._buf._bmask
        self._wbits = word_bits
        if garbage is not None:
            self.fill_garbage(garbage)

    def __len__(self):
        return self.n

    # core accessors: elements are packs, the last block's first pack is special

    def _val_get(self, j):
        return self._buf.read_bits(j * self._lp, self._lp)

    def _val_set(self, j, x):
        self._buf.write_bits(j * self._lp, self._lp, x)

    def _ptr_get(self, j):
        if j == self._meta_elem:
            if self._flag:
                # saturated: chains cannot exist, fail the test without traffic
                return 1
            m = self.meta
            return self._buf.read_bits(m.base_bit, m.ptr_bits)
        return self._buf.read_bits(j * self._lp, self._lp)

    def _ptr_set(self, j, x):
        if j == self._meta_elem:
            m = self.meta
            self._buf.write_bits(m.base_bit, m.ptr_bits, x)
        else:
            self._buf.write_bits(j * self._lp, self._lp, x)

    def _set_b(self, x):
        self._b = x
        if x == self._core_blocks:
            # written area now covers the core: the fields die, the flag is
            # the only survivor and the stale counter is left unwritten
            self._flag = True
        else:
            m = self.meta
            self._buf.write_bits(m.base_bit + m.b_off, m.b_bits, x)

    def _load_meta(self):
        m = self.meta
        self._b = self._buf.read_bits(m.base_bit + m.b_off, m.b_bits)
        iv = self._buf.read_bits(m.base_bit + m.iv_off, self.elem_bits)
        self._initv = iv * self._iv_comb

    def fill_garbage(self, rng: random.Random):
        """Scribble over storage. The instance keeps acting as a plain array
        (flag set) until the next iinit."""
        buf = self._buf
        for k in range(len(buf.words)):
            buf.poke_word(k, rng.getrandbits(64))

    def iinit(self, v):
        if v < 0 or v > self._mask:
            raise ValueError(f"value {v} wider than {self.elem_bits} bits")
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        eb = self.elem_bits
        if self.params.direct:
            self._buf.fill_range(0, self.n * eb, v, eb)
        else:
            m = self.meta
            self._flag = False
            self._buf.write_bits(m.base_bit, m.ptr_bits, self._meta_elem)
            self._buf.write_bits(m.base_bit + m.b_off, m.b_bits, 0)
            self._buf.write_bits(m.base_bit + m.iv_off, eb, v)
            tail_bits = self.params.tail_elems * eb
            if tail_bits:
                self._buf.fill_range(self._core_slots * eb, tail_bits, v, eb)
        self._b = self._initv = None
        if lg is not None:
            lg.settle(base)
        if self.checked:
            self._check()

    def iread(self, i):
        if i < 0 or i >= self.n:
            raise IndexError(f"index {i} outside [0, {self.n})")
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        if self._flag or i >= self._core_slots:
            eb = self.elem_bits
            off = i * eb
            sh = off & self._bmask
            if sh + eb <= self._wbits:
                if lg is not None:
                    lg.reads += 1
                out = (self._buf.words[off >> self._shift] >> sh) & self._mask
            else:
                out = self._buf.read_bits(off, eb)
        else:
            self._load_meta()
            j, sub = divmod(i, self._p)
            z = self._core_read(j)
            out = (z >> (sub * self.elem_bits)) & self._mask
            self._b = self._initv = None
        if lg is not None:
            lg.settle(base)
        return out

    def iwrite(self, i, v):
        if i < 0 or i >= self.n:
            raise IndexError(f"index {i} outside [0, {self.n})")
        if v < 0 or v > self._mask:
            raise ValueError(f"value {v} wider than {self.elem_bits} bits")
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        if self._flag or i >= self._core_slots:
            eb = self.elem_bits
            off = i * eb
            sh = off & self._bmask
            if sh == 0 and eb == self._wbits:
                self._buf.words[off >> self._shift] = v
                if lg is not None:
                    lg.writes += 1
            elif sh + eb <= self._wbits:
                w = off >> self._shift
                words = self._buf.words
                words[w] = (words[w] & ~(self._mask << sh) & 0xFFFFFFFFFFFFFFFF) | (v << sh)
                if lg is not None:
                    lg.reads += 1
                    lg.writes += 1
            else:
                self._buf.write_bits(off, eb, v)
        else:
            self._load_meta()
            j, sub = divmod(i, self._p)
            z = self._core_read(j)
            sh = sub * self.elem_bits
            z = (z & ~(self._mask << sh) & self._lpmask) | (v << sh)
            self._core_write(j, z)
            self._b = self._initv = None
        if lg is not None:
            lg.settle(base)
        if self.checked:
            self._check()

    def _check(self):
        from .verify import scan_invariants

        problems = scan_invariants(self)
        if problems:
            raise AssertionError("; ".join(problems))

    @property
    def flag(self):
        return self._flag

    def extra_bits(self):
        """One bit: the saturation flag. Everything else lives in the data
        words or is a per-operation register reloaded from them."""
        return 1

    def storage_words(self):
        return len(self._buf.words)

    def data_words(self):
        return list(self._buf.words)

    def dump(self):
        return dump_bytes(self._buf, self.n, self.elem_bits, flag=int(self._flag))

    @classmethod
    def from_dump(cls, data, ledger=None):
        word_bits, elem_bits, n, flag, words = parse_dump(data)
        arr = cls(n, elem_bits, word_bits, ledger)
        for k, w in enumerate(words):
            arr._buf.poke_word(k, w)
        arr._flag = bool(flag & 1)
        return arr
