"""Oracles, differential execution and invariant scanning.

NaiveArray is the ground truth the clever variants are compared against: an
ordinary packed array whose iinit walks all of storage. BitmapArray is the
halfway point (per-slot written bits, linear clear). differential_run drives
the same operation script through the reference and any set of variants and
reports the first disagreement.

scan_invariants re-derives the chained-block state of the in-place variants
from raw storage peeks. It deliberately shares no code with the operation
machinery in inplace_special / inplace_general, so a bug has to appear in two
independent implementations to slip through.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .words import WORD_BITS, CostLedger, PackedArray  # noqa: F401  (re-export)
from .folklore import FolkloreArray
from .inplace_special import SpecialArray
from .inplace_general import GeneralArray


class NaiveArray:
    """Plain packed array; iinit rewrites every word. Zero extra bits."""

    __slots__ = ("n", "elem_bits", "ledger", "_data")

    def __init__(self, n, elem_bits, word_bits=WORD_BITS, ledger=None, garbage=None):
        self.n = n
        self.elem_bits = elem_bits
        self.ledger = ledger
        self._data = PackedArray(n, elem_bits, word_bits, ledger)
        if garbage is not None:
            self.fill_garbage(garbage)

    def __len__(self):
        return self.n

    def fill_garbage(self, rng: random.Random):
        buf = self._data.buf
        for k in range(len(buf.words)):
            buf.poke_word(k, rng.getrandbits(64))

    def iinit(self, v):
        """Deliberately linear: one store per storage word."""
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        self._data.fill(v)
        if lg is not None:
            lg.settle(base)

    def iread(self, i):
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        out = self._data.read(i)
        if lg is not None:
            lg.settle(base)
        return out

    def iwrite(self, i, v):
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        self._data.write(i, v)
        if lg is not None:
            lg.settle(base)

    def extra_bits(self):
        return 0

    def storage_words(self):
        return len(self._data.buf.words)

    def data_words(self):
        return list(self._data.buf.words)

    def dump(self):
        from .words import dump_bytes

        return dump_bytes(self._data.buf, self.n, self.elem_bits, flag=0)


class BitmapArray:
    """Packed data plus one written bit per slot. iinit clears the bitmap,
    which is linear but word-granular: N + l extra bits, O(N/w) init."""

    __slots__ = ("n", "elem_bits", "ledger", "_data", "_written", "_initv")

    def __init__(self, n, elem_bits, word_bits=WORD_BITS, ledger=None, garbage=None):
        self.n = n
        self.elem_bits = elem_bits
        self.ledger = ledger
        self._data = PackedArray(n, elem_bits, word_bits, ledger)
        self._written = PackedArray(n, 1, word_bits, ledger)
        self._initv = 0
        if garbage is not None:
            self.fill_garbage(garbage)

    def __len__(self):
        return self.n

    def fill_garbage(self, rng: random.Random):
        for pa in (self._data, self._written):
            buf = pa.buf
            for k in range(len(buf.words)):
                buf.poke_word(k, rng.getrandbits(64))
        self._initv = rng.getrandbits(self.elem_bits)

    def iinit(self, v):
        if v < 0 or v > self._data.mask:
            raise ValueError(f"value {v} wider than {self.elem_bits} bits")
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        self._written.fill(0)
        self._initv = v
        if lg is not None:
            lg.settle(base)

    def iread(self, i):
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        out = self._data.read(i) if self._written.read(i) else self._initv
        if lg is not None:
            lg.settle(base)
        return out

    def iwrite(self, i, v):
        lg = self.ledger
        base = lg.begin() if lg is not None else 0
        self._data.write(i, v)
        self._written.write(i, 1)
        if lg is not None:
            lg.settle(base)

    def extra_bits(self):
        return self.n + self.elem_bits

    def storage_words(self):
        return len(self._data.buf.words) + len(self._written.buf.words)

    def data_words(self):
        return list(self._data.buf.words)


VARIANTS = {
    "naive": NaiveArray,
    "bitmap": BitmapArray,
    "folklore": FolkloreArray,
    "special": SpecialArray,
    "general": GeneralArray,
}


def variant_supported(name, n, elem_bits):
    """Whether a variant's structural preconditions admit this shape."""
    need = max(1, (n - 1).bit_length()) if n > 1 else 1
    if name == "folklore":
        return elem_bits >= need
    if name == "special":
        return n % 2 == 0 and elem_bits >= need
    return True


def make_variant(name, n, elem_bits, word_bits=WORD_BITS, **kw):
    try:
        cls = VARIANTS[name]
    except KeyError:
        raise ValueError(f"unknown variant {name!r}, have {sorted(VARIANTS)}") from None
    return cls(n, elem_bits, word_bits, **kw)


@dataclass
class OpScript:
    """A replayable operation sequence: ('init', v) / ('read', i) / ('write', i, v)."""

    n: int
    elem_bits: int
    seed: int
    ops: list = field(default_factory=list)

    @staticmethod
    def stream(n, elem_bits, count, seed, p_init=0.02, p_read=0.49):
        """Deterministic op generator; the same seed always yields the same ops."""
        rng = random.Random(seed)
        mask = (1 << elem_bits) - 1
        for _ in range(count):
            r = rng.random()
            if r < p_init:
                yield ("init", rng.getrandbits(elem_bits) & mask)
            elif r < p_init + p_read:
                yield ("read", rng.randrange(n))
            else:
                yield ("write", rng.randrange(n), rng.getrandbits(elem_bits) & mask)

    @classmethod
    def random(cls, n, elem_bits, count, seed, p_init=0.02, p_read=0.49):
        if n <= 0:
            raise ValueError("scripts need at least one slot to address")
        ops = list(cls.stream(n, elem_bits, count, seed, p_init, p_read))
        return cls(n=n, elem_bits=elem_bits, seed=seed, ops=ops)

    def run(self, arr):
        """Apply to one structure, returning the list of read results."""
        out = []
        for op in self.ops:
            if op[0] == "read":
                out.append(arr.iread(op[1]))
            elif op[0] == "write":
                arr.iwrite(op[1], op[2])
            else:
                arr.iinit(op[1])
        return out


@dataclass
class DiffResult:
    ok: bool
    message: str = ""
    op_index: int = -1
    variant: str = ""


def differential_run(script, variants, reference=None, scan=(), stop_on_violation=True):
    """Replay script on a reference and on each (name, instance) variant.

    Read results are compared op by op, and a final sweep compares every index.
    Variants named in scan get scan_invariants run against a shadow model after
    every operation. Returns a DiffResult; message carries the standard
    DIVERGE line on failure.
    """
    if reference is None:
        reference = NaiveArray(script.n, script.elem_bits)
    pairs = list(variants)
    shadow = [reference.iread(i) for i in range(script.n)] if scan else None
    for t, op in enumerate(script.ops):
        kind = op[0]
        if kind == "read":
            expect = reference.iread(op[1])
            for name, arr in pairs:
                got = arr.iread(op[1])
                if got != expect:
                    return DiffResult(
                        False,
                        f"DIVERGE op={t} variant={name} expect={expect} got={got} seed={script.seed}",
                        t,
                        name,
                    )
        elif kind == "write":
            reference.iwrite(op[1], op[2])
            for _, arr in pairs:
                arr.iwrite(op[1], op[2])
            if shadow is not None:
                shadow[op[1]] = op[2]
        else:
            reference.iinit(op[1])
            for _, arr in pairs:
                arr.iinit(op[1])
            if shadow is not None:
                shadow = [op[1]] * script.n
        if scan:
            for name, arr in pairs:
                if name in scan:
                    problems = scan_invariants(arr, shadow)
                    if problems and stop_on_violation:
                        return DiffResult(
                            False,
                            f"VIOLATION op={t} variant={name} seed={script.seed}: {problems[0]}",
                            t,
                            name,
                        )
    for i in range(script.n):
        expect = reference.iread(i)
        for name, arr in pairs:
            got = arr.iread(i)
            if got != expect:
                return DiffResult(
                    False,
                    f"DIVERGE op={len(script.ops)} variant={name} expect={expect} got={got} seed={script.seed}",
                    len(script.ops),
                    name,
                )
    return DiffResult(True)


def _scan_special(arr, shadow):
    problems = []
    peek = arr._A.peek
    b = arr._b
    initv = arr._initv
    nb = arr._core_blocks

    if not 0 <= b <= nb:
        return [f"counter b={b} outside [0, {nb}]"]

    def partner(i):
        k2 = peek(2 * i)
        if k2 % 2 or k2 // 2 == i or k2 // 2 >= nb:
            return None
        if peek(k2) != 2 * i:
            return None
        k = k2 // 2
        if (i < b <= k) or (k < b <= i):
            return k
        return None

    for i in range(nb):
        k = partner(i)
        if k is None:
            continue
        if partner(k) != i:
            problems.append(f"block {i} claims partner {k} but the relation is one-sided")
        if (i < b) == (k < b):
            problems.append(f"blocks {i} and {k} chained on the same side of b={b}")

    if shadow is not None:
        for i in range(nb):
            k = partner(i)
            if i < b:
                z = (initv, initv) if k is not None else (peek(2 * i), peek(2 * i + 1))
            else:
                z = (peek(2 * k + 1), peek(2 * i + 1)) if k is not None else (initv, initv)
            for s in (0, 1):
                if z[s] != shadow[2 * i + s]:
                    problems.append(
                        f"slot {2 * i + s}: structure implies {z[s]}, shadow has {shadow[2 * i + s]}"
                    )
    return problems


def _scan_general(arr, shadow):
    p = arr.params
    eb = arr.elem_bits
    mask = (1 << eb) - 1
    buf = arr._buf

    def slot_peek(i):
        return buf.peek_bits(i * eb, eb)

    if p.direct and not arr._flag:
        return ["direct arrays must keep the flag set"]
    if arr._flag:
        if shadow is None:
            return []
        return [
            f"slot {i}: storage has {slot_peek(i)}, shadow has {shadow[i]}"
            for i in range(arr.n)
            if slot_peek(i) != shadow[i]
        ]

    problems = []
    m = arr.meta
    lp = p.pack_bits

    def pack_peek(j):
        return buf.peek_bits(j * lp, lp)

    b = buf.peek_bits(m.base_bit + m.b_off, m.b_bits)
    iv = buf.peek_bits(m.base_bit + m.iv_off, eb)
    nb = p.core_blocks
    if b >= nb:
        return [f"counter field b={b} should have saturated into the flag at {nb}"]

    ptr = buf.peek_bits(m.base_bit, m.ptr_bits)
    last = nb - 1
    # the field is only ever written as a self-pointer or as half of a
    # mutual chain with a written block, so anything else is corruption
    if ptr % 2 or ptr >= p.core_elems:
        problems.append(f"pointer field {ptr} is not a valid element index")
    elif ptr != 2 * last and not (pack_peek(ptr) == 2 * last and ptr // 2 < b):
        problems.append(f"pointer field {ptr} is neither a self-pointer nor a live chain")

    def ptr_peek(j):
        if j == m.elem:
            return ptr
        return pack_peek(j)

    def partner(i):
        k2 = ptr_peek(2 * i)
        if k2 % 2 or k2 // 2 == i or k2 // 2 >= nb:
            return None
        if ptr_peek(k2) != 2 * i:
            return None
        k = k2 // 2
        if (i < b <= k) or (k < b <= i):
            return k
        return None

    for i in range(nb):
        k = partner(i)
        if k is None:
            continue
        if partner(k) != i:
            problems.append(f"block {i} claims partner {k} but the relation is one-sided")
        if (i < b) == (k < b):
            problems.append(f"blocks {i} and {k} chained on the same side of b={b}")

    if shadow is not None:
        ivpack = 0
        for s in range(p.p):
            ivpack |= iv << (s * eb)
        for i in range(nb):
            k = partner(i)
            if i < b:
                z = (ivpack, ivpack) if k is not None else (pack_peek(2 * i), pack_peek(2 * i + 1))
            else:
                z = (pack_peek(2 * k + 1), pack_peek(2 * i + 1)) if k is not None else (ivpack, ivpack)
            for s in (0, 1):
                elem = 2 * i + s
                for sub in range(p.p):
                    logical = elem * p.p + sub
                    want = shadow[logical]
                    got = (z[s] >> (sub * eb)) & mask
                    if got != want:
                        problems.append(
                            f"slot {logical} (pack {elem}): structure implies {got}, shadow has {want}"
                        )
        for logical in range(p.core_slots, arr.n):
            got = slot_peek(logical)
            if got != shadow[logical]:
                problems.append(f"tail slot {logical}: storage has {got}, shadow has {shadow[logical]}")
    return problems


def scan_invariants(arr, shadow=None):
    """Check a SpecialArray or GeneralArray against its structural invariants.

    With a shadow (the expected logical contents, one value per slot) the scan
    also verifies that the representation implies exactly those values.
    Returns a list of violation descriptions, empty when clean.
    """
    if isinstance(arr, SpecialArray):
        return _scan_special(arr, shadow)
    if isinstance(arr, GeneralArray):
        return _scan_general(arr, shadow)
    raise TypeError(f"no invariant scanner for {type(arr).__name__}")


def assert_constant_cost(name, sizes, elem_bits, script_fn, bound, word_bits=WORD_BITS):
    """Replay a deterministic script at several sizes; the worst per-op word
    count must be identical across sizes and within bound. Returns {n: max}."""
    maxima = {}
    for n in sizes:
        lg = CostLedger()
        arr = make_variant(name, n, elem_bits, word_bits, ledger=lg)
        for op in script_fn(n):
            if op[0] == "read":
                arr.iread(op[1])
            elif op[0] == "write":
                arr.iwrite(op[1], op[2])
            else:
                arr.iinit(op[1])
        maxima[n] = lg.op_max
    values = set(maxima.values())
    if len(values) != 1:
        raise AssertionError(f"{name}: per-op maxima differ across sizes: {maxima}")
    worst = values.pop()
    if worst > bound:
        raise AssertionError(f"{name}: worst op cost {worst} exceeds bound {bound}")
    return maxima
