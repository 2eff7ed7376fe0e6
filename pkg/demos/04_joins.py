# Pairwise joins: classes, strategies and the coordinated descent.
# Run: python3 demos/04_joins.py

import numpy as np

from k2triples import JoinQuery, K2Config, K2Tree, TripleStore, Var, classify_join, join
from k2triples.joins import DescentSide, coordinated_descent, legal_strategies
from k2triples.samples import SPANISH_TEAM, synthetic_rdf

# %% which players of the team are midfielders?
store = TripleStore.from_terms(SPANISH_TEAM)
d = store.dictionary
x = Var("x")
q = JoinQuery(store.encode_pattern(x, "playFor", "Spanish_Team"),
              store.encode_pattern(x, "position", "midfielder"))
print("class", classify_join(q), "strategies", legal_strategies(q))
for strategy in ("chain", "independent", "interactive"):
    res = join(store, q, strategy)
    print(f"{strategy:>12}:", [d.decode(v, "subject") for v in res.x_values], res.stats)

# %% the lock-step descent, traced on two 8x8 matrices
cfg = K2Config(2, 0, 2, 2)
plays = K2Tree([(2, 1), (3, 1), (4, 1), (7, 1)], 8, 8, cfg)
position = K2Tree([(2, 2), (3, 3), (4, 3)], 8, 8, cfg)
trace = []
hits = coordinated_descent(DescentSide([plays], "row", 1), DescentSide([position], "row", 3),
                           trace=lambda *e: trace.append(e))
print("joined rows:", [row for row, _, _ in hits])
for event, level, lo, hi in trace:
    print(f"  level {level} rows [{lo},{hi}): {event}")

# %% strategies on a larger synthetic store
rng = np.random.default_rng(3)
big = TripleStore.from_terms(synthetic_rdf(rng, 20_000, 16))
bd = big.dictionary
y, z = Var("y"), Var("z")
t = big.triples()[1234]
queries = {
    "B": JoinQuery((x, t[1], t[2]), (x, 0, y)),
    "E1": JoinQuery((x, y, t[2]), (x, 0, z)),
    "G": JoinQuery((x, y, t[2]), (x, z, big.triples()[0][2])),
}
for name, q in queries.items():
    for strategy in legal_strategies(q) + ["auto"]:
        res = join(big, q, strategy)
        print(f"{name:>2} {strategy:>12}: {len(res)} rows via {res.strategy}")
