"""Shared scaffolding for the test suite."""

import random

from initarray import (
    BitmapArray,
    FolkloreArray,
    GeneralArray,
    NaiveArray,
    SpecialArray,
    variant_supported,
)

GRID_N = (1, 2, 3, 5, 16, 17, 100, 1000, 65536)
GRID_ELEM_BITS = (1, 2, 3, 7, 8, 16, 64)

CHECKED_VARIANTS = ("bitmap", "folklore", "special", "general")


def grid_cells():
    for n in GRID_N:
        for eb in GRID_ELEM_BITS:
            yield n, eb


def supported_variants(n, elem_bits, names=CHECKED_VARIANTS):
    return [v for v in names if variant_supported(v, n, elem_bits)]


def build(name, n, elem_bits, **kw):
    cls = {
        "naive": NaiveArray,
        "bitmap": BitmapArray,
        "folklore": FolkloreArray,
        "special": SpecialArray,
        "general": GeneralArray,
    }[name]
    return cls(n, elem_bits, **kw)


def clone_variant(name, src):
    """Fresh instance with storage and registers copied from src."""
    dup = build(name, src.n, src.elem_bits)
    if name == "naive":
        dup._data.buf.words[:] = src._data.buf.words
    elif name == "bitmap":
        dup._data.buf.words[:] = src._data.buf.words
        dup._written.buf.words[:] = src._written.buf.words
        dup._initv = src._initv
    elif name == "folklore":
        dup._values.buf.words[:] = src._values.buf.words
        dup._forward.buf.words[:] = src._forward.buf.words
        dup._back.buf.words[:] = src._back.buf.words
        dup._b = src._b
        dup._initv = src._initv
    elif name == "special":
        dup._A.buf.words[:] = src._A.buf.words
        dup._b = src._b
        dup._initv = src._initv
    elif name == "general":
        dup._buf.words[:] = src._buf.words
        dup._flag = src._flag
    else:
        raise ValueError(name)
    return dup


def state_key(name, arr):
    """Hashable snapshot of everything that can influence future behavior."""
    if name == "naive":
        return arr._data.buf.words.tobytes()
    if name == "bitmap":
        return (arr._data.buf.words.tobytes(), arr._written.buf.words.tobytes(), arr._initv)
    if name == "folklore":
        return (
            arr._values.buf.words.tobytes(),
            arr._forward.buf.words.tobytes(),
            arr._back.buf.words.tobytes(),
            arr._b,
            arr._initv,
        )
    if name == "special":
        return (arr._A.buf.words.tobytes(), arr._b, arr._initv)
    if name == "general":
        return (arr._buf.words.tobytes(), arr._flag)
    raise ValueError(name)


def random_soup(arrs, n, elem_bits, ops, seed, p_init=0.02):
    """Drive identical random ops through several structures, comparing reads.

    arrs: list of (name, instance); the first entry is the reference.
    Returns None when everything agrees, else a description string.
    """
    rng = random.Random(seed)
    (ref_name, ref), rest = arrs[0], arrs[1:]
    for t in range(ops):
        r = rng.random()
        if r < p_init:
            v = rng.getrandbits(elem_bits)
            for _, a in arrs:
                a.iinit(v)
        elif r < 0.5:
            i = rng.randrange(n)
            want = ref.iread(i)
            for name, a in rest:
                got = a.iread(i)
                if got != want:
                    return f"DIVERGE op={t} variant={name} expect={want} got={got} seed={seed}"
        else:
            i = rng.randrange(n)
            v = rng.getrandbits(elem_bits)
            for _, a in arrs:
                a.iwrite(i, v)
    for i in range(n):
        want = ref.iread(i)
        for name, a in rest:
            got = a.iread(i)
            if got != want:
                return f"DIVERGE op={ops} variant={name} expect={want} got={got} seed={seed}"
    return None


def cost_probe_script(n):
    """Deterministic op sequence for per-op cost measurement.

    Only the four n-relative indices depend on n, and those stay at fixed
    word offsets relative to the storage end, so an O(1)-cost structure
    must produce identical per-op word-touch maxima at every size. The ops
    walk each structure through all of its read and write states: fresh
    writes near and far from the boundary, rewrites of relocated and
    in-place slots, reads of every slot kind, stale state after re-init,
    and one epoch engineered so a rewrite of a chained written block finds
    the boundary block itself chained (the most expensive combination).
    """
    ops = [("init", 3)]
    ops += [("write", i, i) for i in (10, 12, 14, 16, 18)]
    ops += [("read", i) for i in (0, 1, 2, 3, 10, 11, 19)]
    ops += [("write", i, 7 + i) for i in (0, 1, 2)]
    half = n // 2
    ops += [("write", half, 9), ("read", half), ("read", half + 1),
            ("write", half + 1, 11), ("write", half, 21)]
    ops += [("write", i, i) for i in (20, 22, 24, 26)]
    ops += [("write", i, 1) for i in (4, 5, 6, 7, 8, 9)]
    ops += [("write", i, 2) for i in (4, 5, 6)]
    ops += [("read", 0), ("read", 30)]
    ops += [("write", n - 1, 13), ("read", n - 1), ("write", n - 2, 12),
            ("read", n - 2), ("write", n - 4, 10), ("read", n - 3)]
    ops += [("init", 1)]
    ops += [("read", 0), ("read", half), ("read", n - 1), ("read", 25)]
    ops += [("write", 0, 2), ("write", 11, 4), ("read", 10), ("read", 11),
            ("write", half, 6), ("read", half)]
    ops += [("init", 2), ("write", 19, 5), ("write", 7, 6), ("write", 25, 8),
            ("write", 13, 9)]
    ops += [("read", i) for i in (13, 12, 19, 7, 25, 1)]
    ops += [("init", 0), ("read", 7), ("write", 0, 1), ("read", 0)]
    return ops
