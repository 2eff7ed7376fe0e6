# A small RDF store: dictionary, per-predicate trees, SP/OP indexes,
# and the eight triple-pattern shapes.
# Run: python3 demos/03_store_patterns.py

import io

from k2triples import TripleStore, Var, build_pipeline
from k2triples.samples import spanish_team_ntriples

# %% build from N-Triples text
text = spanish_team_ntriples()
print(text)
store = build_pipeline(text.encode())
d = store.dictionary
print(store)
print("SO:", d.so_terms)
print("S: ", d.s_terms)
print("O: ", d.o_terms)
print("P: ", d.p_terms)

# %% one k2-tree per predicate
for p, tree in enumerate(store.trees):
    rows, cols = tree.cells()
    pairs = [(d.decode(r, "subject"), d.decode(c, "object")) for r, c in zip(rows, cols)]
    print(f"{d.decode(p, 'predicate'):>10}: {pairs}")

# %% the SP index stores each distinct predicate list once
print("SP list ids:", [store.sp.list_id(s) for s in range(store.n_subjects)])
print("SP vocabulary:", store.sp.vocab.seq.tolist(), store.sp.vocab.ends.to_string())
for s in range(store.n_subjects):
    preds = [d.decode(p, "predicate") for p in store.sp.predicates_of(s)]
    print(f"  {d.decode(s, 'subject')}: {preds}")

# %% patterns, written with terms and resolved on IDs
x, y = Var("x"), Var("y")
for terms in [
    (x, "playFor", "Spanish_Team"),
    ("Iker_Casillas", y, x),
    (x, y, "midfielder"),
    ("Xavi", "position", "midfielder"),
]:
    pat = store.encode_pattern(*terms)
    stats = {}
    rows = store.resolve(pat, stats=stats)
    print(pat.shape, [d.decode_triple(t) for t in rows], stats)

# %% save and reload
buf = io.BytesIO()
store.save(buf)
again = TripleStore.load(buf.getvalue())
print(len(buf.getvalue()), "bytes; reload identical:", again.to_bytes() == buf.getvalue())
