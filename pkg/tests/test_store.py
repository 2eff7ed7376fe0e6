import io
import itertools

import numpy as np
import pytest

from k2triples.dictionary import OBJECT, PREDICATE, SUBJECT
from k2triples.errors import FormatError, InputError, NotFoundError, RangeError
from k2triples.k2tree import K2Config
from k2triples.samples import SPANISH_TEAM, random_triples
from k2triples.store import TriplePattern, TripleStore, Var, load_store, save_store


@pytest.fixture(scope="module")
def football():
    return TripleStore.from_terms(SPANISH_TEAM)


def test_football_layout(football):
    st = football
    d = st.dictionary
    assert len(st) == 10
    pos = d.encode("position", PREDICATE)
    rows, cols = st.trees[pos].cells()
    assert [(d.decode(r, SUBJECT), d.decode(c, OBJECT)) for r, c in zip(rows, cols)] == [
        ("Iker_Casillas", "goalkeeper"), ("Iniesta", "midfielder"), ("Xavi", "midfielder")]
    assert [st.sp.list_id(s) for s in range(st.n_subjects)] == [2, 3, 4, 1, 1]
    assert st.sp.predicates_of(2) == [0, 2, 3, 4]


def test_pattern_by_terms(football):
    st = football
    pat = st.encode_pattern(Var("x"), "playFor", "Spanish_Team")
    got = [st.dictionary.decode(s, SUBJECT) for s, _, _ in st.resolve(pat)]
    assert got == ["Iker_Casillas", "Iniesta", "Xavi"]
    with pytest.raises(NotFoundError):
        st.encode_pattern(None, "playsFor", None)


def test_pattern_validation(football):
    with pytest.raises(InputError):
        TriplePattern("a", 1, 2)
    with pytest.raises(RangeError):
        football.resolve((0, 99, None))
    assert TriplePattern(1, None, 2).shape == "(S,?P,O)"


def scan(triples, pat):
    out = [t for t in triples
           if all(isinstance(v, Var) or v == x for v, x in zip(pat, t))]
    return out


@pytest.mark.parametrize("cfg", [K2Config(), K2Config(2, 0, 2, 2)])
def test_all_shapes_against_scan(cfg):
    rng = np.random.default_rng(11)
    st = TripleStore.from_terms(random_triples(rng, 1500, 120, 9), cfg)
    triples = sorted(st.triples())
    assert len(triples) == len(set(triples)) == len(st)
    sample = [triples[i] for i in rng.integers(0, len(triples), 15)]
    for t in sample:
        for mask in itertools.product((0, 1), repeat=3):
            pat = TriplePattern(*(v if m else None for v, m in zip(t, mask)))
            got = st.resolve(pat)
            exp = scan(triples, pat)
            if mask[1]:
                exp.sort(key=lambda x: (x[0], x[2]))
            else:
                exp.sort(key=lambda x: (x[1], x[0], x[2]))
            assert got == exp, pat
            assert st.resolve(pat, use_index=False) == got


def test_index_prunes_trees():
    rng = np.random.default_rng(1)
    st = TripleStore.from_terms(random_triples(rng, 400, 60, 30))
    s = st.triples()[0][0]
    with_idx, without = {}, {}
    a = st.resolve((s, None, None), stats=with_idx)
    b = st.resolve((s, None, None), use_index=False, stats=without)
    assert a == b
    assert with_idx["trees_visited"] < without["trees_visited"] == 30


def test_save_load(tmp_path, football):
    path = tmp_path / "fb.k2t"
    n = save_store(football, path)
    assert path.stat().st_size == n
    st = load_store(path)
    assert st.to_bytes() == football.to_bytes()
    buf = io.BytesIO()
    football.save(buf)
    assert TripleStore.load(io.BytesIO(buf.getvalue())).triples() == football.triples()


def test_corrupt_files(football):
    data = football.to_bytes()
    with pytest.raises(FormatError):
        TripleStore.from_bytes(b"XXXX" + data[4:])
    with pytest.raises(FormatError):
        TripleStore.from_bytes(data[:4] + b"\x09\0\0\0" + data[8:])
    with pytest.raises(FormatError):
        TripleStore.from_bytes(data[:-1])
    with pytest.raises(FormatError):
        TripleStore.from_bytes(data + b"\0")


def test_empty_store():
    st = TripleStore.from_terms([])
    assert len(st) == 0
    assert st.triples() == []
    assert TripleStore.from_bytes(st.to_bytes()).to_bytes() == st.to_bytes()


def test_duplicates_removed():
    st = TripleStore.from_terms(SPANISH_TEAM * 3)
    assert len(st) == 10


def test_component_sizes(football):
    sizes = football.component_sizes()
    assert set(sizes) == {"trees", "sp", "op", "dictionary"}
    assert sum(sizes.values()) < len(football.to_bytes())
