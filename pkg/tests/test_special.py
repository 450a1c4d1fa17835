import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from initarray import CostLedger, NaiveArray, SpecialArray, scan_invariants

from helpers import clone_variant, random_soup, state_key
from oracle import WriteMapModel


def test_shape_preconditions():
    with pytest.raises(ValueError):
        SpecialArray(7, 8)  # odd
    with pytest.raises(ValueError):
        SpecialArray(100, 6)  # cannot hold a pointer
    SpecialArray(100, 7)
    SpecialArray(0, 1)
    SpecialArray(2, 1)


def test_iinit_is_two_register_writes():
    lg = CostLedger()
    arr = SpecialArray(256, 8, ledger=lg)
    arr.iwrite(3, 200)
    before = lg.touches
    arr.iinit(9)
    assert lg.touches == before
    assert arr._b == 0 and arr._initv == 9


def test_first_write_chains_the_boundary_away():
    arr = SpecialArray(16, 8)
    arr.iinit(0)
    arr.iwrite(10, 9)  # block 5, unwritten and unchained
    # the old boundary block 0 is recycled and chained with block 5
    assert arr._b == 1
    assert arr.chain_with(0) == 5
    assert arr.chain_with(5) == 0
    assert arr.chain_with(1) is None
    assert arr._A.peek(0) == 10 and arr._A.peek(10) == 0
    assert arr.iread(10) == 9
    assert arr.iread(11) == 0
    assert arr.iread(0) == 0 and arr.iread(1) == 0  # chained written block reads initv


def test_write_into_the_boundary_block_is_direct():
    arr = SpecialArray(16, 8)
    arr.iinit(4)
    arr.iwrite(0, 7)  # block 0 is the boundary, extend hands it straight back
    assert arr._b == 1
    assert arr.chain_with(0) is None
    assert arr.iread(0) == 7
    assert arr.iread(1) == 4


def test_partner_second_slot_carries_values():
    arr = SpecialArray(16, 8)
    arr.iinit(0)
    arr.iwrite(10, 9)
    arr.iwrite(11, 6)  # odd slot of a chained unwritten block stays in place
    assert arr._A.peek(11) == 6
    arr.iwrite(10, 8)  # even slot lives at the partner's second slot
    assert arr._A.peek(1) == 8
    assert arr.iread(10) == 8 and arr.iread(11) == 6


def test_saturation_matches_naive_storage():
    rng = random.Random(5)
    for n, eb in [(4, 2), (16, 4), (64, 8), (254, 8), (1000, 10)]:
        arr = SpecialArray(n, eb)
        ref = NaiveArray(n, eb)
        arr.iinit(0)
        ref.iinit(0)
        order = list(range(n))
        rng.shuffle(order)
        vals = {i: 1 + rng.randrange((1 << eb) - 1) for i in order}
        for i in order:
            arr.iwrite(i, vals[i])
            ref.iwrite(i, vals[i])
        assert arr._b == n // 2, (n, eb)
        assert arr.data_words() == ref.data_words(), (n, eb)


def test_counter_is_monotone_between_inits():
    arr = SpecialArray(128, 8)
    arr.iinit(1)
    rng = random.Random(8)
    prev = 0
    for _ in range(2000):
        if rng.random() < 0.01:
            arr.iinit(rng.getrandbits(8))
            prev = 0
            continue
        if rng.random() < 0.5:
            arr.iread(rng.randrange(128))
        else:
            arr.iwrite(rng.randrange(128), rng.getrandbits(8))
        assert arr._b >= prev
        prev = arr._b


def test_checked_mode_scans_after_every_op():
    arr = SpecialArray(64, 8, checked=True)
    arr.iinit(3)
    rng = random.Random(21)
    for _ in range(1500):
        if rng.random() < 0.5:
            arr.iread(rng.randrange(64))
        else:
            arr.iwrite(rng.randrange(64), rng.getrandbits(8))
    assert scan_invariants(arr) == []


def test_garbage_then_init():
    rng = random.Random(6)
    arr = SpecialArray(512, 10, garbage=rng)
    arr.iinit(1000)
    assert all(arr.iread(i) == 1000 for i in range(512))


def test_matches_naive_under_random_ops():
    n, eb = 256, 8
    msg = random_soup(
        [("naive", NaiveArray(n, eb)), ("special", SpecialArray(n, eb))],
        n, eb, ops=20000, seed=717,
    )
    assert msg is None, msg


def test_exhaustive_small_scripts():
    # every init/write script up to length 4 on a tiny array, with a full
    # read-back probe after each op; memoized on combined state
    n, eb = 4, 2
    alphabet = [("init", v) for v in range(4)]
    alphabet += [("write", i, v) for i in range(n) for v in range(4)]
    seen = set()

    def probe(arr, model):
        for i in range(n):
            got = arr.iread(i)
            want = model.iread(i)
            assert got == want, (arr._A.buf.words, arr._b, arr._initv, i, got, want)

    def walk(arr, model, depth):
        if depth == 0:
            return
        for op in alphabet:
            a2 = clone_variant("special", arr)
            m2 = WriteMapModel(n, eb)
            m2.initv = model.initv
            m2.written = dict(model.written)
            if op[0] == "init":
                a2.iinit(op[1])
                m2.iinit(op[1])
            else:
                a2.iwrite(op[1], op[2])
                m2.iwrite(op[1], op[2])
            probe(a2, m2)
            key = (state_key("special", a2), depth - 1)
            if key not in seen:
                seen.add(key)
                walk(a2, m2, depth - 1)

    walk(SpecialArray(n, eb), WriteMapModel(n, eb), 4)
    assert len(seen) > 1000  # the walk actually went somewhere


def test_per_op_cost_bound():
    lg = CostLedger()
    arr = SpecialArray(4096, 64, ledger=lg)
    arr.iinit(0)
    rng = random.Random(13)
    for _ in range(30000):
        r = rng.random()
        if r < 0.01:
            arr.iinit(rng.getrandbits(64))
        elif r < 0.5:
            arr.iread(rng.randrange(4096))
        else:
            arr.iwrite(rng.randrange(4096), rng.getrandbits(64))
    assert lg.op_max <= 24


def test_reads_never_mutate():
    arr = SpecialArray(32, 8)
    arr.iinit(2)
    rng = random.Random(55)
    for _ in range(200):
        arr.iwrite(rng.randrange(32), rng.getrandbits(8))
    before = state_key("special", arr)
    for i in range(32):
        arr.iread(i)
    assert state_key("special", arr) == before


@settings(max_examples=120)
@given(
    st.sampled_from([2, 4, 6, 8, 10]),
    st.lists(
        st.one_of(
            st.tuples(st.just("init"), st.integers(0, 15)),
            st.tuples(st.just("write"), st.integers(0, 9), st.integers(0, 15)),
            st.tuples(st.just("read"), st.integers(0, 9)),
        ),
        max_size=50,
    ),
)
def test_agrees_with_write_map_model(n, ops):
    arr = SpecialArray(n, 4)
    model = WriteMapModel(n, 4)
    for op in ops:
        if op[0] == "init":
            arr.iinit(op[1])
            model.iinit(op[1])
        elif op[0] == "write":
            i = op[1] % n
            arr.iwrite(i, op[2])
            model.iwrite(i, op[2])
        else:
            i = op[1] % n
            assert arr.iread(i) == model.iread(i)
    assert not scan_invariants(arr, [model.iread(i) for i in range(n)])
