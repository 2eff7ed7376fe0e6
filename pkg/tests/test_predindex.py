import numpy as np
import pytest

from k2triples._binio import Reader, Writer
from k2triples.errors import InputError, RangeError
from k2triples.predindex import PredicateIndex, PredicateListVocabulary


def test_vocabulary_access():
    v = PredicateListVocabulary([(3, 4), (1,), (5,), (0, 2, 3, 4)])
    assert len(v) == 4
    assert v.get(1) == [3, 4]
    assert v.get(4) == [0, 2, 3, 4]
    assert v.ends.to_string() == "01110001"
    with pytest.raises(RangeError):
        v.get(0)
    with pytest.raises(InputError):
        PredicateListVocabulary([(2, 1)])


def test_frequency_order():
    # entity -> predicates: 0:{1}, 1:{0,2}, 2:{0,2}, 3:{1}, 4:{0,2}
    ent = [0, 1, 1, 2, 2, 3, 4, 4]
    pred = [1, 0, 2, 0, 2, 1, 0, 2]
    idx = PredicateIndex.build(ent, pred, 6, 3)
    assert idx.vocab.get(1) == [0, 2]
    assert idx.vocab.get(2) == [1]
    assert idx.ids.tolist() == [2, 1, 1, 2, 1, 0]
    assert idx.predicates_of(5) == []
    with pytest.raises(RangeError):
        idx.list_id(6)


def test_ties_keep_first_use():
    idx = PredicateIndex.build([0, 1], [1, 0], 2, 2)
    assert idx.predicates_of(0) == [1]
    assert idx.list_id(0) == 1 and idx.list_id(1) == 2


def test_random_against_sets():
    rng = np.random.default_rng(2)
    ent = rng.integers(0, 200, 3000)
    pred = rng.integers(0, 40, 3000)
    idx = PredicateIndex.build(ent, pred, 210, 40)
    expect = {}
    for e, p in zip(ent.tolist(), pred.tolist()):
        expect.setdefault(e, set()).add(p)
    for e in range(210):
        assert idx.predicates_of(e) == sorted(expect.get(e, ()))
    w = Writer()
    idx.write(w)
    back = PredicateIndex.read(Reader(w.getvalue()))
    assert all(back.predicates_of(e) == idx.predicates_of(e) for e in range(210))


def test_bad_input():
    with pytest.raises(InputError):
        PredicateIndex.build([5], [0], 3, 1)
    with pytest.raises(InputError):
        PredicateIndex.build([0], [4], 3, 2)
