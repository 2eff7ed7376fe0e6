"""Small built-in datasets for tests, demos and benchmarks."""

import numpy as np

# Football excerpt: the national team, its country, its capital and three
# players. Terms are chosen so that bytewise order gives the conventional
# numbering (SO: Madrid, Spanish_Team; subjects Iker_Casillas, Iniesta,
# Xavi; objects goalkeeper, midfielder, spain; predicates born, capital,
# captain, playFor, position, represent).
SPANISH_TEAM = [
    ("Spanish_Team", "represent", "spain"),
    ("Madrid", "capital", "spain"),
    ("Iker_Casillas", "born", "Madrid"),
    ("Iker_Casillas", "playFor", "Spanish_Team"),
    ("Iker_Casillas", "position", "goalkeeper"),
    ("Iker_Casillas", "captain", "Spanish_Team"),
    ("Iniesta", "playFor", "Spanish_Team"),
    ("Iniesta", "position", "midfielder"),
    ("Xavi", "playFor", "Spanish_Team"),
    ("Xavi", "position", "midfielder"),
]


def spanish_team_ntriples():
    return "".join(f"<{s}> <{p}> <{o}> .\n" for s, p, o in SPANISH_TEAM)


def random_triples(rng, n_triples, n_entities, n_predicates, so_fraction=0.3):
    """Random term triples over a shared entity pool.

    Roughly ``so_fraction`` of the entities may appear in both roles; the
    rest are split between subject-only and object-only names.
    """
    n_so = max(1, int(n_entities * so_fraction))
    n_rest = max(1, n_entities - n_so)
    subj = rng.integers(0, n_so + n_rest, size=n_triples)
    obj = rng.integers(0, n_so + n_rest, size=n_triples)
    pred = rng.integers(0, n_predicates, size=n_triples)
    out = []
    for s, p, o in zip(subj.tolist(), pred.tolist(), obj.tolist()):
        st = f"e{s}" if s < n_so else f"s{s}"
        ot = f"e{o}" if o < n_so else f"o{o}"
        out.append((st, f"p{p}", ot))
    return out


def synthetic_rdf(rng, n_triples, n_predicates=32, n_subjects=None):
    """RDF-like synthetic data: skewed predicates and clustered objects.

    Each subject uses a few predicates (Zipf-distributed); per predicate,
    objects come either from a small shared pool (types, categories) or
    from entities numbered close to the subject, mimicking the locality of
    real datasets after lexicographic ID assignment.
    """
    if n_subjects is None:
        n_subjects = max(1, n_triples // 6)
    weights = 1.0 / np.arange(1, n_predicates + 1)
    weights /= weights.sum()
    subj = np.sort(rng.integers(0, n_subjects, size=n_triples))
    pred = rng.choice(n_predicates, size=n_triples, p=weights)
    pooled = pred % 3 == 0
    pool = rng.integers(0, 64, size=n_triples)
    near = np.clip(subj + rng.integers(-32, 33, size=n_triples), 0, n_subjects - 1)
    out = []
    for s, p, o, is_pool, q in zip(subj.tolist(), pred.tolist(), near.tolist(),
                                   pooled.tolist(), pool.tolist()):
        obj = f"class{q:03d}" if is_pool else f"ent{o:07d}"
        out.append((f"ent{s:07d}", f"pred{p:03d}", obj))
    return out
