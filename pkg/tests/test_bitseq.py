import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from k2triples.bitseq import BitSequence
from k2triples.errors import FormatError, NotFoundError, RangeError


def naive_rank1(bits, i):
    return sum(bits[:i + 1])


def naive_select(bits, bit, j):
    seen = 0
    for pos, b in enumerate(bits):
        if b == bit:
            seen += 1
            if seen == j:
                return pos
    raise AssertionError("not enough occurrences")


def test_small_example():
    b = BitSequence("1011010")
    assert len(b) == 7
    assert b.ones == 4
    assert [b[i] for i in range(7)] == [1, 0, 1, 1, 0, 1, 0]
    assert b.rank1(0) == 1
    assert b.rank1(3) == 3
    assert b.rank0(6) == 3
    assert b.select1(1) == 0
    assert b.select1(4) == 5
    assert b.select0(3) == 6
    assert b.select1(0) == -1


def test_errors():
    b = BitSequence("0110")
    with pytest.raises(RangeError):
        b.access(4)
    with pytest.raises(RangeError):
        b.rank1(-1)
    with pytest.raises(NotFoundError):
        b.select1(3)
    with pytest.raises(NotFoundError):
        b.select0(3)
    with pytest.raises(RangeError):
        b.select1(-1)


def test_empty():
    b = BitSequence([])
    assert len(b) == 0
    assert b.ones == 0
    assert b.select1(0) == -1
    with pytest.raises(NotFoundError):
        b.select1(1)
    assert BitSequence.from_bytes(b.to_bytes()) == b


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=3000))
def test_against_naive(bits):
    b = BitSequence(bits)
    assert b.to_string() == "".join(map(str, bits))
    positions = sorted({0, len(bits) - 1, len(bits) // 2, len(bits) // 3})
    for i in positions:
        assert b.access(i) == bits[i]
        assert b.rank1(i) == naive_rank1(bits, i)
        assert b.rank0(i) == i + 1 - naive_rank1(bits, i)
    ones = sum(bits)
    for j in sorted({1, ones, (ones + 1) // 2}):
        if 1 <= j <= ones:
            assert b.select1(j) == naive_select(bits, 1, j)
    zeros = len(bits) - ones
    for j in sorted({1, zeros, (zeros + 1) // 2}):
        if 1 <= j <= zeros:
            assert b.select0(j) == naive_select(bits, 0, j)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.booleans(), min_size=1, max_size=2000), st.data())
def test_rank_select_inverse(bits, data):
    b = BitSequence(bits)
    if b.ones:
        j = data.draw(st.integers(1, b.ones))
        p = b.select1(j)
        assert b.rank1(p) == j and b.access(p) == 1
    i = data.draw(st.integers(0, len(bits) - 1))
    assert b.rank1(i) + b.rank0(i) == i + 1


def test_rank1_many_matches_scalar():
    rng = np.random.default_rng(4)
    bits = rng.random(5000) < 0.3
    b = BitSequence(bits)
    pos = rng.integers(0, 5000, size=500)
    expect = np.cumsum(bits)[pos]
    assert np.array_equal(b.rank1_many(pos), expect)
    assert [b.rank1(int(p)) for p in pos[:50]] == expect[:50].tolist()


def test_serialization_round_trip():
    rng = np.random.default_rng(1)
    b = BitSequence(rng.random(1234) < 0.5)
    data = b.to_bytes()
    b2 = BitSequence.from_bytes(data)
    assert b2 == b
    assert b2.to_bytes() == data
    assert b2.rank1(1000) == b.rank1(1000)
    with pytest.raises(FormatError):
        BitSequence.from_bytes(data[:-3])


def test_directory_overhead_is_small():
    b = BitSequence(np.ones(1 << 16, dtype=bool))
    assert b.aux_bits() <= 0.07 * len(b)
