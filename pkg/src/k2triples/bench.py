"""Random workloads drawn from a store's own content, and their timing.

Pattern instantiations pick a stored triple and turn some components into
variables, so every bound component occurs in the data. Join instances
pick two triples sharing a join value and mask them to the requested
class.
"""

import csv
import logging
import statistics
import time

import numpy as np

from .joins import JoinQuery, classify_join, join, legal_strategies
from .store import TriplePattern, Var

log = logging.getLogger(__name__)

# (s bound, p bound, o bound)
PATTERN_SHAPES = {
    "(S,P,O)": (1, 1, 1),
    "(S,P,?O)": (1, 1, 0),
    "(?S,P,O)": (0, 1, 1),
    "(?S,P,?O)": (0, 1, 0),
    "(S,?P,O)": (1, 0, 1),
    "(S,?P,?O)": (1, 0, 0),
    "(?S,?P,O)": (0, 0, 1),
    "(?S,?P,?O)": (0, 0, 0),
}
DEFAULT_SHAPES = [s for s in PATTERN_SHAPES if s != "(?S,?P,?O)"]

# (left pred var, left node var, right pred var, right node var); the
# mirrored assignment describes the same class.
CLASS_MASKS = {
    "A": (0, 0, 0, 0),
    "B": (0, 1, 0, 0),
    "C": (0, 1, 0, 1),
    "D": (1, 0, 0, 0),
    "E1": (1, 0, 0, 1),
    "E2": (1, 1, 0, 0),
    "F": (1, 1, 0, 1),
    "G": (1, 0, 1, 0),
    "H": (1, 1, 1, 0),
}
VARIANTS = ("SS", "SO", "OO")

CSV_FIELDS = ["kind", "name", "variant", "strategy", "split", "n",
              "min_us", "mean_us", "median_us", "max_us"]


def instantiate(triple, shape):
    """Pattern from a stored triple keeping the components ``shape`` binds."""
    mask = PATTERN_SHAPES[shape]
    return TriplePattern(*(v if keep else Var() for v, keep in zip(triple, mask)))


def random_patterns(triples, rng, shape, n):
    if not triples or n <= 0:
        return []
    idx = rng.integers(0, len(triples), size=n)
    return [instantiate(triples[i], shape) for i in idx.tolist()]


class JoinSampler:
    """Draws join instances of a given class and variant from stored triples."""

    def __init__(self, store, triples=None):
        triples = store.triples() if triples is None else triples
        self.n_so = store.n_so
        self.by_s = {}
        self.by_o = {}
        for t in triples:
            self.by_s.setdefault(t[0], []).append(t)
            self.by_o.setdefault(t[2], []).append(t)
        self.keys = {
            "SS": sorted(self.by_s),
            "OO": sorted(self.by_o),
            "SO": sorted(x for x in self.by_s if x < self.n_so and x in self.by_o),
        }

    def available(self, variant):
        return bool(self.keys[variant])

    def sample(self, rng, cls, variant):
        """A JoinQuery of class ``cls``; None if the variant has no support."""
        keys = self.keys[variant]
        if not keys:
            return None
        x = keys[int(rng.integers(len(keys)))]
        first, second = {"SS": (self.by_s, self.by_s), "OO": (self.by_o, self.by_o),
                          "SO": (self.by_s, self.by_o)}[variant]
        t1 = first[x][int(rng.integers(len(first[x])))]
        t2 = second[x][int(rng.integers(len(second[x])))]
        roles = ("s", "o") if variant == "SO" else (variant[0].lower(),) * 2
        lp, ln, rp, rn = CLASS_MASKS[cls]
        left = _masked(t1, roles[0], lp, ln, "1")
        right = _masked(t2, roles[1], rp, rn, "2")
        if rng.integers(2):
            left, right = _retag(right, "1"), _retag(left, "2")
        q = JoinQuery(left, right)
        assert classify_join(q) == cls
        return q


def _masked(t, x_role, pred_var, node_var, tag):
    x = Var("x")
    s, p, o = t
    p = Var("p" + tag) if pred_var else p
    if x_role == "s":
        return TriplePattern(x, p, Var("o" + tag) if node_var else o)
    return TriplePattern(Var("s" + tag) if node_var else s, p, x)


def _retag(pat, tag):
    return TriplePattern(*(Var(v.name[:-1] + tag) if isinstance(v, Var) and v.name != "x"
                           else v for v in pat))


def _summary(kind, name, variant, strategy, split, times_ns):
    us = [t / 1000 for t in times_ns]
    return {
        "kind": kind, "name": name, "variant": variant, "strategy": strategy,
        "split": split, "n": len(us),
        "min_us": f"{min(us):.1f}", "mean_us": f"{statistics.fmean(us):.1f}",
        "median_us": f"{statistics.median(us):.1f}", "max_us": f"{max(us):.1f}",
    }


def bench_patterns(store, n, rng, shapes=None, triples=None):
    triples = store.triples() if triples is None else triples
    rows = []
    for shape in shapes or DEFAULT_SHAPES:
        pats = random_patterns(triples, rng, shape, n)
        if not pats:
            continue
        times = []
        for pat in pats:
            t0 = time.perf_counter_ns()
            store.resolve(pat)
            times.append(time.perf_counter_ns() - t0)
        rows.append(_summary("pattern", shape, "", "", "all", times))
    return rows


def bench_joins(store, n, rng, classes=None, triples=None, notes=None):
    sampler = JoinSampler(store, triples)
    rows = []
    for cls in classes or list(CLASS_MASKS):
        for variant in VARIANTS:
            if n <= 0:
                continue
            if not sampler.available(variant):
                msg = f"skipping {cls}/{variant}: no join values for this variant"
                log.info(msg)
                if notes is not None:
                    notes.append(msg)
                continue
            queries = [sampler.sample(rng, cls, variant) for _ in range(n)]
            # split by the product of the two sides' result sizes
            products = [len(store.resolve(q.left)) * len(store.resolve(q.right))
                        for q in queries]
            mean = statistics.fmean(products)
            for strategy in legal_strategies(queries[0]):
                timed = {"big": [], "small": []}
                for q, prod in zip(queries, products):
                    t0 = time.perf_counter_ns()
                    join(store, q, strategy)
                    timed["big" if prod > mean else "small"].append(
                        time.perf_counter_ns() - t0)
                for split in ("big", "small"):
                    if timed[split]:
                        rows.append(_summary("join", cls, variant, strategy, split,
                                             timed[split]))
    return rows


def parse_workload(text):
    """``"patterns n=50"`` -> ("patterns", {"n": 50, ...})."""
    parts = text.split()
    if not parts or parts[0] not in ("patterns", "joins"):
        raise ValueError(f"workload must start with 'patterns' or 'joins': {text!r}")
    opts = {"n": 100, "all": 0}
    for item in parts[1:]:
        key, sep, val = item.partition("=")
        if not sep or key not in ("n", "all", "classes"):
            raise ValueError(f"bad workload option {item!r}")
        if key == "classes":
            opts[key] = val.split(",")
            unknown = set(opts[key]) - set(CLASS_MASKS)
            if unknown:
                raise ValueError(f"unknown join classes {sorted(unknown)}")
        else:
            if not val.isdigit():
                raise ValueError(f"bad value for {key}: {val!r}")
            opts[key] = int(val)
    return parts[0], opts


def run_bench(store, workloads, seed=0, sink=None, notes=None):
    """Run workloads and return CSV rows; writes CSV to ``sink`` if given."""
    rng = np.random.default_rng(seed)
    triples = store.triples()
    rows = []
    for text in workloads:
        kind, opts = parse_workload(text)
        if kind == "patterns":
            shapes = list(PATTERN_SHAPES) if opts["all"] else DEFAULT_SHAPES
            rows += bench_patterns(store, opts["n"], rng, shapes, triples)
        else:
            rows += bench_joins(store, opts["n"], rng, opts.get("classes"), triples, notes)
    if sink is not None:
        w = csv.DictWriter(sink, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return rows
