import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from k2triples.dac import DacSequence, pack_ints, unpack_ints
from k2triples.errors import FormatError, InputError, RangeError


def test_worked_example_levels():
    # 5=01|01, 1=01, 9=10|01, 12=11|00, 0=00 with 2-bit chunks
    d = DacSequence([5, 1, 9, 12, 0], chunk_width=2)
    (a1, b1), (a2, b2) = d.levels
    assert a1.tolist() == [1, 1, 1, 0, 0]
    assert b1.to_string() == "10110"
    assert a2.tolist() == [1, 2, 3]
    assert b2.to_string() == "000"
    assert d.tolist() == [5, 1, 9, 12, 0]
    assert d[3] == 12


def test_errors():
    with pytest.raises(InputError):
        DacSequence([1, -2])
    with pytest.raises(InputError):
        DacSequence([1], chunk_width=0)
    d = DacSequence([3, 4])
    with pytest.raises(RangeError):
        d.access(2)


def test_empty_and_zeros():
    assert len(DacSequence([])) == 0
    d = DacSequence([0, 0, 0])
    assert d.tolist() == [0, 0, 0]
    assert len(d.levels) == 1


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 2**64 - 1), max_size=300), st.integers(1, 16))
def test_round_trip(values, width):
    d = DacSequence(np.array(values, dtype=np.uint64), width)
    assert d.tolist() == values
    assert [d.access(i) for i in range(len(values))] == values
    d2 = DacSequence.from_bytes(d.to_bytes())
    assert d2.tolist() == values
    assert d2.to_bytes() == d.to_bytes()


def test_skewed_values_compress():
    rng = np.random.default_rng(0)
    v = rng.geometric(0.5, size=10000) - 1
    d = DacSequence(v, 2)
    assert d.encoded_bits() < v.size * 8
    assert d.tolist() == v.tolist()


def test_pack_ints():
    v = [0, 5, 7, 3, 1]
    data = pack_ints(v, 3)
    assert len(data) == 2
    assert unpack_ints(data, 5, 3).tolist() == v
    with pytest.raises(FormatError):
        unpack_ints(data[:1], 5, 3)


def test_truncated_blob():
    data = DacSequence([1, 300, 70000]).to_bytes()
    with pytest.raises(FormatError):
        DacSequence.from_bytes(data[:-1])
