import numpy as np
import pytest

from k2triples.bench import CLASS_MASKS, JoinSampler
from k2triples.dictionary import SUBJECT
from k2triples.errors import InputError, StrategyError, UnsupportedJoinError
from k2triples.joins import (DescentSide, JoinQuery, chain_starts, choose_strategy,
                             classify_join, coordinated_descent, distinct_sorted, join,
                             join_chain, join_independent, join_interactive,
                             legal_strategies)
from k2triples.k2tree import K2Config, K2Tree
from k2triples.samples import SPANISH_TEAM, random_triples
from k2triples.store import TriplePattern, TripleStore, Var

X, Y, Z = Var("x"), Var("y"), Var("z")


@pytest.fixture(scope="module")
def football():
    return TripleStore.from_terms(SPANISH_TEAM)


def test_query_validation():
    with pytest.raises(InputError):
        JoinQuery(TriplePattern(X, 0, Y), TriplePattern(X, 1, Y))
    with pytest.raises(InputError):
        JoinQuery(TriplePattern(X, 0, 1), TriplePattern(Y, 1, 2))
    with pytest.raises(InputError):
        JoinQuery(TriplePattern(X, 0, X), TriplePattern(X, 1, 2))
    with pytest.raises(UnsupportedJoinError):
        JoinQuery(TriplePattern(1, X, 2), TriplePattern(3, X, 4))
    q = JoinQuery(TriplePattern(X, 0, None), TriplePattern(None, 1, X))
    assert q.variant == "SO"
    assert q.variables == ("x", "_lo", "_rs")


@pytest.mark.parametrize("left,right,cls", [
    ((X, 0, 1), (X, 2, 3), "A"),
    ((X, 0, Y), (X, 2, 3), "B"),
    ((X, 0, Y), (Z, 2, X), "C"),
    ((X, Y, 1), (X, 2, 3), "D"),
    ((X, Y, 1), (X, 2, Z), "E1"),
    ((X, Y, Z), (X, 2, 3), "E2"),
    ((X, Y, Z), (X, 2, Var("w")), "F"),
    ((X, Y, 1), (X, Z, 3), "G"),
    ((X, Y, Var("w")), (X, Z, 3), "H"),
])
def test_classification(left, right, cls):
    q = JoinQuery(TriplePattern(*left), TriplePattern(*right))
    assert classify_join(q) == cls
    assert classify_join(JoinQuery(q.right, q.left)) == cls
    assert ("independent" in legal_strategies(q)) == (cls in "A B C D E1 G".split())


def test_class_i_rejected():
    with pytest.raises(UnsupportedJoinError):
        classify_join(JoinQuery(TriplePattern(X, Y, Var("a")), TriplePattern(X, Z, Var("b"))))


def test_chain_starts():
    q = JoinQuery(TriplePattern(X, Y, Z), TriplePattern(X, 2, 3))
    assert chain_starts(q) == ("right",)
    q = JoinQuery(TriplePattern(X, 0, Y), TriplePattern(X, 2, Z))
    assert chain_starts(q) == ("left", "right")


def test_golden_join(football):
    q = JoinQuery(football.encode_pattern(X, "playFor", "Spanish_Team"),
                  football.encode_pattern(X, "position", "midfielder"))
    for strategy in ("chain", "independent", "interactive", "auto"):
        res = join(football, q, strategy)
        assert [football.dictionary.decode(x, SUBJECT) for x in res.x_values] == \
            ["Iniesta", "Xavi"]


def test_illegal_strategy(football):
    q = JoinQuery(TriplePattern(X, Y, Z), TriplePattern(X, 3, 1))
    assert classify_join(q) == "E2"
    with pytest.raises(StrategyError):
        join(football, q, "independent")
    with pytest.raises(StrategyError):
        join_independent(football, q)
    with pytest.raises(StrategyError):
        join_chain(football, q, start="left")
    with pytest.raises(StrategyError):
        join(football, q, "magic")


def test_descent_trace():
    # P4: rows 2,3,4,7 in column 1; P5: (2,2),(3,3),(4,3); join on rows
    # with columns fixed at 1 and 3
    cfg = K2Config(2, 0, 2, 2)
    m4 = K2Tree([(2, 1), (3, 1), (4, 1), (7, 1)], 8, 8, cfg)
    m5 = K2Tree([(2, 2), (3, 3), (4, 3)], 8, 8, cfg)
    trace = []
    res = list(coordinated_descent(DescentSide([m4], "row", 1), DescentSide([m5], "row", 3),
                                   trace=lambda *a: trace.append(a)))
    assert trace == [("pair", 0, 0, 4), ("pair", 0, 4, 8), ("pair", 1, 2, 4),
                     ("pruned", 1, 6, 8), ("pair", 1, 4, 6)]
    assert [x for x, _, _ in res] == [3, 4]


def test_so_join_respects_shared_range(football):
    # ?x born <Madrid> . ?y ?p ?x ... only SO IDs can be both roles
    d = football.dictionary
    q = JoinQuery(TriplePattern(X, None, None), TriplePattern(None, None, X))
    with pytest.raises(UnsupportedJoinError):
        classify_join(q)
    q = JoinQuery(TriplePattern(X, d.encode("capital", "predicate"), None),
                  TriplePattern(None, d.encode("born", "predicate"), X))
    for s in legal_strategies(q):
        res = join(football, q, s)
        assert [d.decode(x, SUBJECT) for x in res.x_values] == ["Madrid"]


def test_distinct_sorted():
    assert distinct_sorted([3, 5, 5, 1, 2, 9, 0, 5]) == [0, 1, 2, 3, 5, 9]
    assert distinct_sorted([]) == []


def test_chain_probes_once_per_value(football):
    d = football.dictionary
    q = JoinQuery(TriplePattern(X, None, d.encode("Spanish_Team", "object")),
                  TriplePattern(X, d.encode("position", "predicate"), None))
    stats = {}
    res = join_chain(football, q, "left", stats)
    # Casillas matches two predicates but is probed once
    assert stats["probes"] == 3
    assert len(res) == 4


def test_auto_prefers_chain_for_selective_side():
    rng = np.random.default_rng(0)
    st = TripleStore.from_terms(random_triples(rng, 3000, 200, 4))
    q = JoinQuery(TriplePattern(X, 1, 5), TriplePattern(X, 2, Y))
    assert choose_strategy(st, q)[0] in ("chain", "independent")
    q = JoinQuery(TriplePattern(X, 1, 5), TriplePattern(X, 2, 7))
    assert choose_strategy(st, q) == ("interactive", None)


def brute(st, q):
    d = st.dictionary
    l, r = q.sides
    triples = st.triples()
    def match(pat, t):
        return all(isinstance(v, Var) or v == x for v, x in zip(pat, t))
    out = set()
    for a in triples:
        if not match(q.left, a):
            continue
        xa, ra = l.project(a)
        for b in triples:
            if match(q.right, b):
                xb, rb = r.project(b)
                if d.decode(xa, l.x_role) == d.decode(xb, r.x_role):
                    out.add((xa,) + ra + rb)
    return sorted(out)


@pytest.mark.parametrize("cfg", [K2Config(), K2Config(2, 0, 2, 2), K2Config(4, 1, 2, 4)])
def test_random_joins_against_brute_force(cfg):
    rng = np.random.default_rng(42)
    st = TripleStore.from_terms(random_triples(rng, 300, 40, 5, 0.4), cfg)
    sampler = JoinSampler(st)
    for cls in CLASS_MASKS:
        for variant in ("SS", "SO", "OO"):
            for _ in range(4):
                q = sampler.sample(rng, cls, variant)
                exp = brute(st, q)
                for s in legal_strategies(q):
                    assert join(st, q, s).rows == exp, (cls, variant, s)
                for start in chain_starts(q):
                    assert join_chain(st, q, start).rows == exp
                assert join(st, q).rows == exp


def test_unknown_id_raises(football):
    q = JoinQuery(TriplePattern(X, 99, None), TriplePattern(X, 1, None))
    with pytest.raises(IndexError):
        join_interactive(football, q)
