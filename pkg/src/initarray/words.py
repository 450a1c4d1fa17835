"""Word-granular storage for the array variants.

Model: memory is a sequence of w-bit words (w defaults to 64, smaller widths
can be simulated). A packed element i of width l occupies bits
[i*l, (i+1)*l), least significant bit first, element 0 in the low bits of
word 0. Words are little-endian with respect to global bit positions.

Every read or write of a word can be charged to a CostLedger. A store that
covers a whole word is one write; a sub-word store is a read-modify-write and
is charged one read plus one write. The peek/poke variants bypass the ledger
and exist for checkers and serialization, never for the structures' own
operation paths.
"""

from __future__ import annotations

import struct
import sys
from array import array

WORD_BITS = 64
SMALL_FILL_WORDS = 8

_ALLOWED_WORD_BITS = (8, 16, 32, 64)


class CostLedger:
    """Tally of word traffic, plus the worst single-operation cost seen."""

    __slots__ = ("reads", "writes", "op_max")

    def __init__(self):
        self.reads = 0
        self.writes = 0
        self.op_max = 0

    def begin(self):
        """Mark the start of one operation; pass the result to settle()."""
        return self.reads + self.writes

    def settle(self, base):
        cost = self.reads + self.writes - base
        if cost > self.op_max:
            self.op_max = cost
        return cost

    def reset(self):
        self.reads = 0
        self.writes = 0
        self.op_max = 0

    @property
    def touches(self):
        return self.reads + self.writes

    def __repr__(self):
        return f"CostLedger(reads={self.reads}, writes={self.writes}, op_max={self.op_max})"


def comb_constant(elem_bits, word_bits=WORD_BITS):
    """The multiplier with a 1 in the lowest bit of each elem_bits slot.

    For word_bits 16 and elem_bits 4 this is 0b0001000100010001.
    """
    if not 1 <= elem_bits <= word_bits:
        raise ValueError(f"elem_bits {elem_bits} outside [1, {word_bits}]")
    slots = word_bits // elem_bits
    return ((1 << (slots * elem_bits)) - 1) // ((1 << elem_bits) - 1)


def bit_repeat(value, elem_bits, word_bits=WORD_BITS):
    """Tile an elem_bits value across a word with one multiplication.

    The comb constant depends only on the static parameters, so at run time
    this is a single multiply. Slots that do not fit completely are left zero.
    """
    if value >> elem_bits:
        raise ValueError(f"value {value:#x} wider than {elem_bits} bits")
    return (value * comb_constant(elem_bits, word_bits)) & ((1 << word_bits) - 1)


def bit_repeat_shift(value, elem_bits, word_bits=WORD_BITS):
    """Same result as bit_repeat, built by shift doubling (no multiplier)."""
    if value >> elem_bits:
        raise ValueError(f"value {value:#x} wider than {elem_bits} bits")
    slots = word_bits // elem_bits
    target = slots * elem_bits
    out = value
    filled = elem_bits
    while filled < target:
        out |= out << filled
        filled *= 2
    return out & ((1 << target) - 1)


def repeat_value(value, elem_bits, count):
    """value tiled count times into one (count*elem_bits)-bit integer."""
    if count <= 0:
        return 0
    if value >> elem_bits:
        raise ValueError(f"value {value:#x} wider than {elem_bits} bits")
    comb = ((1 << (count * elem_bits)) - 1) // ((1 << elem_bits) - 1)
    return comb * value


class WordBuffer:
    """A flat buffer of w-bit words holding bit_len addressable bits.

    Bits at positions >= bit_len are kept zero. Words are held in a 64-bit
    backing array regardless of the simulated word width; only the cost
    accounting and the splitting of accesses depend on word_bits.
    """

    __slots__ = ("words", "bit_len", "word_bits", "ledger", "_shift", "_bmask")

    def __init__(self, bit_len, word_bits=WORD_BITS, ledger=None):
        if word_bits not in _ALLOWED_WORD_BITS:
            raise ValueError(f"word_bits must be one of {_ALLOWED_WORD_BITS}")
        if bit_len < 0:
            raise ValueError("bit_len must be nonnegative")
        self.bit_len = bit_len
        self.word_bits = word_bits
        self.ledger = ledger
        self._shift = word_bits.bit_length() - 1
        self._bmask = word_bits - 1
        nwords = (bit_len + word_bits - 1) >> self._shift
        self.words = array("Q", bytes(8 * nwords))

    def __len__(self):
        return len(self.words)

    def read_bits(self, off, nbits):
        """Read nbits starting at global bit off. Charged per word touched."""
        if off < 0 or nbits < 0 or off + nbits > self.bit_len:
            raise IndexError(f"bit range [{off}, {off + nbits}) outside [0, {self.bit_len})")
        wb = self.word_bits
        words = self.words
        w = off >> self._shift
        sh = off & self._bmask
        lg = self.ledger
        if sh + nbits <= wb:
            if lg is not None:
                lg.reads += 1
            return (words[w] >> sh) & ((1 << nbits) - 1)
        out = words[w] >> sh
        got = wb - sh
        reads = 1
        while got < nbits:
            w += 1
            take = nbits - got
            if take >= wb:
                out |= words[w] << got
                got += wb
            else:
                out |= (words[w] & ((1 << take) - 1)) << got
                got = nbits
            reads += 1
        if lg is not None:
            lg.reads += reads
        return out & ((1 << nbits) - 1)

    def write_bits(self, off, nbits, value):
        """Write nbits of value at global bit off. Whole-word stores skip the read."""
        if off < 0 or nbits < 0 or off + nbits > self.bit_len:
            raise IndexError(f"bit range [{off}, {off + nbits}) outside [0, {self.bit_len})")
        if value >> nbits:
            raise ValueError(f"value {value:#x} wider than {nbits} bits")
        wb = self.word_bits
        words = self.words
        w = off >> self._shift
        sh = off & self._bmask
        lg = self.ledger
        if sh == 0 and nbits == wb:
            words[w] = value
            if lg is not None:
                lg.writes += 1
            return
        if sh + nbits <= wb:
            mask = ((1 << nbits) - 1) << sh
            words[w] = (words[w] & ~mask & 0xFFFFFFFFFFFFFFFF) | ((value << sh) & mask)
            if lg is not None:
                lg.reads += 1
                lg.writes += 1
            return
        reads = 0
        writes = 0
        done = 0
        # leading partial word
        if sh:
            take = wb - sh
            mask = ((1 << take) - 1) << sh
            words[w] = (words[w] & ~mask & 0xFFFFFFFFFFFFFFFF) | ((value & ((1 << take) - 1)) << sh)
            reads += 1
            writes += 1
            done = take
            w += 1
        while nbits - done >= wb:
            words[w] = (value >> done) & ((1 << wb) - 1)
            writes += 1
            done += wb
            w += 1
        if done < nbits:
            take = nbits - done
            mask = (1 << take) - 1
            words[w] = (words[w] & ~mask & 0xFFFFFFFFFFFFFFFF) | ((value >> done) & mask)
            reads += 1
            writes += 1
        if lg is not None:
            lg.reads += reads
            lg.writes += writes

    def fill_range(self, off, nbits, value, elem_bits):
        """Tile value (elem_bits wide) over bits [off, off+nbits), phase 0 at off.

        One store per covered word plus a read-modify-write at ragged edges,
        so the cost is proportional to the word count, not the element count.
        """
        if nbits <= 0:
            return
        if off < 0 or off + nbits > self.bit_len:
            raise IndexError(f"bit range [{off}, {off + nbits}) outside [0, {self.bit_len})")
        if value >> elem_bits:
            raise ValueError(f"value {value:#x} wider than {elem_bits} bits")
        wb = self.word_bits
        words = self.words
        lg = self.ledger
        # a tile long enough that any phase shift still leaves a full word
        reps = (wb + 2 * elem_bits) // elem_bits + 1
        tile = repeat_value(value, elem_bits, reps)
        wmask = (1 << wb) - 1
        reads = 0
        writes = 0
        w = off >> self._shift
        sh = off & self._bmask
        last = off + nbits - 1
        wlast = last >> self._shift
        if w == wlast and (sh != 0 or nbits != wb):
            chunk = tile & ((1 << nbits) - 1)
            mask = ((1 << nbits) - 1) << sh
            words[w] = (words[w] & ~mask & 0xFFFFFFFFFFFFFFFF) | (chunk << sh)
            if lg is not None:
                lg.reads += 1
                lg.writes += 1
            return
        if sh:
            take = wb - sh
            chunk = tile & ((1 << take) - 1)
            mask = ((1 << take) - 1) << sh
            words[w] = (words[w] & ~mask & 0xFFFFFFFFFFFFFFFF) | (chunk << sh)
            reads += 1
            writes += 1
            w += 1
        covered = (w << self._shift) - off
        while nbits - covered >= wb:
            ph = covered % elem_bits
            words[w] = (tile >> ph) & wmask
            writes += 1
            covered += wb
            w += 1
        if covered < nbits:
            take = nbits - covered
            ph = covered % elem_bits
            chunk = (tile >> ph) & ((1 << take) - 1)
            mask = (1 << take) - 1
            words[w] = (words[w] & ~mask & 0xFFFFFFFFFFFFFFFF) | chunk
            reads += 1
            writes += 1
        if lg is not None:
            lg.reads += reads
            lg.writes += writes

    # Unledgered access, for checkers, tests and serialization only.

    def peek_bits(self, off, nbits):
        lg = self.ledger
        self.ledger = None
        try:
            return self.read_bits(off, nbits)
        finally:
            self.ledger = lg

    def poke_bits(self, off, nbits, value):
        lg = self.ledger
        self.ledger = None
        try:
            self.write_bits(off, nbits, value)
        finally:
            self.ledger = lg

    def poke_word(self, k, value):
        """Overwrite word k wholesale, preserving the zero slack past bit_len."""
        wb = self.word_bits
        value &= (1 << wb) - 1
        top = self.bit_len - (k << self._shift)
        if top < wb:
            if top <= 0:
                raise IndexError(f"word {k} beyond bit_len {self.bit_len}")
            value &= (1 << top) - 1
        self.words[k] = value

    def clone(self):
        dup = WordBuffer.__new__(WordBuffer)
        dup.bit_len = self.bit_len
        dup.word_bits = self.word_bits
        dup.ledger = None
        dup._shift = self._shift
        dup._bmask = self._bmask
        dup.words = array("Q", self.words)
        return dup


class PackedArray:
    """length fixed-width elements packed into a WordBuffer.

    Can either own its buffer or sit at a bit offset inside a shared one.
    read() and write() inline the common one-word case; multi-word elements
    fall through to the buffer methods. Cost accounting is identical on both
    paths.
    """

    __slots__ = ("buf", "elem_bits", "length", "bit_off", "mask", "_shift", "_bmask", "_wbits")

    def __init__(self, length, elem_bits, word_bits=WORD_BITS, ledger=None, buf=None, bit_off=0):
        if length < 0:
            raise ValueError("length must be nonnegative")
        if elem_bits < 1:
            raise ValueError("elem_bits must be positive")
        if buf is None:
            buf = WordBuffer(length * elem_bits, word_bits, ledger)
            bit_off = 0
        elif bit_off < 0 or bit_off + length * elem_bits > buf.bit_len:
            raise ValueError("view does not fit inside the buffer")
        self.buf = buf
        self.elem_bits = elem_bits
        self.length = length
        self.bit_off = bit_off
        self.mask = (1 << elem_bits) - 1
        self._shift = buf._shift
        self._bmask = buf._bmask
        self._wbits = buf.word_bits

    def __len__(self):
        return self.length

    def read(self, i):
        if i < 0 or i >= self.length:
            raise IndexError(f"index {i} outside [0, {self.length})")
        off = self.bit_off + i * self.elem_bits
        sh = off & self._bmask
        if sh + self.elem_bits <= self._wbits:
            buf = self.buf
            lg = buf.ledger
            if lg is not None:
                lg.reads += 1
            return (buf.words[off >> self._shift] >> sh) & self.mask
        return self.buf.read_bits(off, self.elem_bits)

    def write(self, i, v):
        if i < 0 or i >= self.length:
            raise IndexError(f"index {i} outside [0, {self.length})")
        if v < 0 or v > self.mask:
            raise ValueError(f"value {v} wider than {self.elem_bits} bits")
        eb = self.elem_bits
        off = self.bit_off + i * eb
        sh = off & self._bmask
        buf = self.buf
        if sh == 0 and eb == self._wbits:
            buf.words[off >> self._shift] = v
            lg = buf.ledger
            if lg is not None:
                lg.writes += 1
            return
        if sh + eb <= self._wbits:
            w = off >> self._shift
            words = buf.words
            words[w] = (words[w] & ~(self.mask << sh) & 0xFFFFFFFFFFFFFFFF) | (v << sh)
            lg = buf.ledger
            if lg is not None:
                lg.reads += 1
                lg.writes += 1
            return
        buf.write_bits(off, eb, v)

    def peek(self, i):
        if i < 0 or i >= self.length:
            raise IndexError(f"index {i} outside [0, {self.length})")
        return self.buf.peek_bits(self.bit_off + i * self.elem_bits, self.elem_bits)

    def fill(self, v):
        self.buf.fill_range(self.bit_off, self.length * self.elem_bits, v, self.elem_bits)

    @property
    def bits(self):
        return self.length * self.elem_bits


def small_fill(packed, v):
    """Fill a packed array whose storage spans at most SMALL_FILL_WORDS words.

    The point of the bound: the fill is a constant number of word stores
    (at most SMALL_FILL_WORDS + 1), so callers may treat it as O(1).
    """
    limit = SMALL_FILL_WORDS * packed.buf.word_bits
    if packed.bits > limit:
        raise ValueError(f"{packed.bits} bits exceed the {limit}-bit small fill bound")
    packed.fill(v)


DUMP_MAGIC = b"LZAR"
DUMP_VERSION = 1
_HEADER = struct.Struct("<4sBBHQB")


def dump_bytes(buf, n, elem_bits, flag=0):
    """Serialize a WordBuffer: 17-byte header then the raw little-endian words.

    Header fields: magic, version, word width, element width, element count,
    flag byte (bit 0 carries the general structure's saturation flag, other
    variants write 0).
    """
    head = _HEADER.pack(DUMP_MAGIC, DUMP_VERSION, buf.word_bits, elem_bits, n, flag & 1)
    nbytes = buf.word_bits // 8
    if buf.word_bits == 64 and sys.byteorder == "little":
        return head + buf.words.tobytes()
    return head + b"".join(w.to_bytes(nbytes, "little") for w in buf.words)


def parse_dump(data):
    """Inverse of dump_bytes. Returns (word_bits, elem_bits, n, flag, words)."""
    if len(data) < _HEADER.size:
        raise ValueError("dump shorter than its header")
    magic, version, word_bits, elem_bits, n, flag = _HEADER.unpack_from(data)
    if magic != DUMP_MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != DUMP_VERSION:
        raise ValueError(f"unsupported dump version {version}")
    if word_bits not in _ALLOWED_WORD_BITS:
        raise ValueError(f"bad word width {word_bits}")
    nbytes = word_bits // 8
    body = data[_HEADER.size:]
    expect = ((n * elem_bits + word_bits - 1) // word_bits) * nbytes
    if len(body) != expect:
        raise ValueError(f"dump body is {len(body)} bytes, expected {expect}")
    words = [int.from_bytes(body[k:k + nbytes], "little") for k in range(0, len(body), nbytes)]
    return word_bits, elem_bits, n, flag, words
