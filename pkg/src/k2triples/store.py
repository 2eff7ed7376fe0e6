"""The queryable triple store: one k2-tree per predicate plus SP/OP.

Rows of every tree are subject IDs (|SO| + |S| of them) and columns are
object IDs (|SO| + |O|); all trees share one padded side and one level
schedule, which the interactive join relies on.

Result ordering: patterns with a bound predicate come back sorted by
(S, O); patterns with an unbound predicate by (P, S, O).
"""

import os
from dataclasses import dataclass
from itertools import repeat

import numpy as np

from ._binio import Reader, Writer
from .dictionary import OBJECT, PREDICATE, SUBJECT, Dictionary
from .errors import FormatError, InputError, RangeError
from .k2tree import K2Config, K2Tree
from .predindex import PredicateIndex

MAGIC = b"K2TR"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class Var:
    """A query variable. The empty name marks an anonymous variable."""

    name: str = ""

    def __repr__(self):
        return f"?{self.name}" if self.name else "?"


def is_var(x):
    return isinstance(x, Var)


@dataclass(frozen=True)
class TriplePattern:
    """(s, p, o) where each component is an int ID or a ``Var``.

    ``None`` is accepted as shorthand for an anonymous variable.
    """

    s: object
    p: object
    o: object

    def __post_init__(self):
        for f in ("s", "p", "o"):
            v = getattr(self, f)
            if v is None:
                object.__setattr__(self, f, Var())
            elif not is_var(v):
                if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                    raise InputError(f"pattern component {f} must be an int ID or Var")
                object.__setattr__(self, f, int(v))

    @property
    def shape(self):
        """E.g. ``"(S,?P,O)"``."""
        return "({},{},{})".format(*(
            ("?" if is_var(v) else "") + name
            for v, name in zip((self.s, self.p, self.o), "SPO")
        ))

    def __iter__(self):
        return iter((self.s, self.p, self.o))


def merge_intersect(a, b):
    """Intersection of two ascending lists by linear merge."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            i += 1
        elif a[i] > b[j]:
            j += 1
        else:
            out.append(a[i])
            i += 1
            j += 1
    return out


class TripleStore:
    """Dictionary, per-predicate k2-trees and SP/OP indexes."""

    def __init__(self, dictionary, trees, sp, op, config):
        self.dictionary = dictionary
        self.trees = list(trees)
        self.sp = sp
        self.op = op
        self.config = config
        self.counts = [t.n_cells for t in self.trees]

    # --- construction -------------------------------------------------------

    @classmethod
    def build(cls, id_triples, dictionary, config=None):
        """Build from 0-based (s, p, o) ID triples consistent with ``dictionary``."""
        config = config or K2Config()
        arr = np.asarray(id_triples if isinstance(id_triples, np.ndarray) else list(id_triples),
                         dtype=np.int64).reshape(-1, 3)
        d = dictionary
        if arr.size:
            lo = arr.min(axis=0)
            hi = arr.max(axis=0)
            if (lo < 0).any() or hi[0] >= d.n_subjects or hi[1] >= d.n_predicates \
                    or hi[2] >= d.n_objects:
                raise InputError("triple ID outside the dictionary ranges")
            arr = np.unique(arr, axis=0)
        rows, cols = d.n_subjects, d.n_objects
        order = np.lexsort((arr[:, 2], arr[:, 0], arr[:, 1]))
        arr = arr[order]
        bounds = np.searchsorted(arr[:, 1], np.arange(d.n_predicates + 1))
        trees = []
        for p in range(d.n_predicates):
            part = arr[bounds[p]:bounds[p + 1]]
            trees.append(K2Tree.from_arrays(part[:, 0], part[:, 2], rows, cols, config))
        sp = PredicateIndex.build(arr[:, 0], arr[:, 1], rows, d.n_predicates)
        op = PredicateIndex.build(arr[:, 2], arr[:, 1], cols, d.n_predicates)
        return cls(d, trees, sp, op, config)

    @classmethod
    def from_terms(cls, triples, config=None):
        """Dictionary-encode term triples and build."""
        triples = list(triples)
        d = Dictionary.build(triples)
        return cls.build(d.encode_triples(triples), d, config)

    # --- geometry -----------------------------------------------------------

    @property
    def n_subjects(self):
        return self.dictionary.n_subjects

    @property
    def n_objects(self):
        return self.dictionary.n_objects

    @property
    def n_predicates(self):
        return self.dictionary.n_predicates

    @property
    def n_so(self):
        return self.dictionary.n_so

    @property
    def n_prime(self):
        return self.config.schedule(max(self.n_subjects, self.n_objects))[1]

    def __len__(self):
        return sum(self.counts)

    def __repr__(self):
        return (f"TripleStore(triples={len(self)}, {self.dictionary!r}, "
                f"n_prime={self.n_prime})")

    # --- pattern resolution -------------------------------------------------

    def _check(self, pat):
        s, p, o = pat
        if not is_var(s) and not 0 <= s < self.n_subjects:
            raise RangeError(f"subject ID {s} out of range")
        if not is_var(p) and not 0 <= p < self.n_predicates:
            raise RangeError(f"predicate ID {p} out of range")
        if not is_var(o) and not 0 <= o < self.n_objects:
            raise RangeError(f"object ID {o} out of range")

    def candidate_predicates(self, s=None, o=None, use_index=True):
        """Predicates that can match given optional bound subject/object."""
        if not use_index or (s is None and o is None):
            return list(range(self.n_predicates))
        if s is not None and o is not None:
            return merge_intersect(self.sp.predicates_of(s), self.op.predicates_of(o))
        if s is not None:
            return self.sp.predicates_of(s)
        return self.op.predicates_of(o)

    def resolve(self, pattern, use_index=True, stats=None):
        """All (s, p, o) ID triples matching ``pattern``."""
        if not isinstance(pattern, TriplePattern):
            pattern = TriplePattern(*pattern)
        self._check(pattern)
        s, p, o = pattern
        sv, pv, ov = is_var(s), is_var(p), is_var(o)
        if pv:
            preds = self.candidate_predicates(None if sv else s, None if ov else o, use_index)
        else:
            preds = [p]
        if stats is not None:
            stats["trees_visited"] = stats.get("trees_visited", 0) + len(preds)
        out = []
        for q in preds:
            t = self.trees[q]
            if not sv and not ov:
                if t.cell_check(s, o):
                    out.append((s, q, o))
            elif not sv:
                out.extend(zip(repeat(s), repeat(q), t.direct_neighbors(s, stats)))
            elif not ov:
                out.extend(zip(t.reverse_neighbors(o, stats), repeat(q), repeat(o)))
            else:
                rows, cols = t.cells()
                out.extend(zip(rows.tolist(), repeat(q), cols.tolist()))
        return out

    def triples(self):
        """Every stored triple, sorted by (P, S, O)."""
        return self.resolve(TriplePattern(None, None, None))

    # --- term-level helpers ---------------------------------------------------

    def encode_pattern(self, s, p, o):
        """Term pattern (None/Var for variables) to an ID pattern.

        Raises NotFoundError if a bound term does not occur in its role.
        """
        d = self.dictionary

        def enc(v, role):
            if v is None or is_var(v):
                return v
            return d.encode(v, role)

        return TriplePattern(enc(s, SUBJECT), enc(p, PREDICATE), enc(o, OBJECT))

    def decode(self, triples):
        return [self.dictionary.decode_triple(t) for t in triples]

    # --- serialization ------------------------------------------------------

    def to_bytes(self):
        w = Writer()
        w.raw(MAGIC)
        w.u32(FORMAT_VERSION)
        block = Writer()
        self.dictionary.write(block)
        w.blob(block.getvalue())
        w.u64(self.n_subjects)
        w.u64(self.n_objects)
        w.u64(self.n_prime)
        cfg = self.config
        for v in (cfg.k_upper, cfg.upper_levels, cfg.k_lower, cfg.leaf_size):
            w.u32(v)
        w.u64(len(self.trees))
        for t in self.trees:
            w.blob(t.to_bytes())
        for idx in (self.sp, self.op):
            block = Writer()
            idx.write(block)
            w.blob(block.getvalue())
        return w.getvalue()

    @classmethod
    def from_bytes(cls, data):
        r = Reader(data)
        if r.raw(4) != MAGIC:
            raise FormatError("not a k2triples store (bad magic)")
        version = r.u32()
        if version != FORMAT_VERSION:
            raise FormatError(f"unsupported format version {version}")
        block = Reader(r.blob())
        d = Dictionary.read(block)
        block.expect_end()
        rows, cols, n_prime = r.u64(), r.u64(), r.u64()
        if (rows, cols) != (d.n_subjects, d.n_objects):
            raise FormatError("geometry disagrees with the dictionary")
        try:
            config = K2Config(r.u32(), r.u32(), r.u32(), r.u32())
        except InputError as exc:
            raise FormatError(str(exc)) from None
        if config.schedule(max(rows, cols))[1] != n_prime:
            raise FormatError("n_prime disagrees with the level schedule")
        n_trees = r.u64()
        if n_trees != d.n_predicates:
            raise FormatError("tree count differs from predicate count")
        trees = []
        for _ in range(n_trees):
            t = K2Tree.from_bytes(r.blob())
            if (t.rows, t.cols, t.config) != (rows, cols, config):
                raise FormatError("tree geometry differs from the store")
            trees.append(t)
        indexes = []
        for expect in (rows, cols):
            block = Reader(r.blob())
            idx = PredicateIndex.read(block)
            block.expect_end()
            if len(idx) != expect:
                raise FormatError("predicate index length mismatch")
            indexes.append(idx)
        r.expect_end()
        return cls(d, trees, indexes[0], indexes[1], config)

    def save(self, sink):
        """Write to a path or a binary file object."""
        data = self.to_bytes()
        if isinstance(sink, (str, os.PathLike)):
            with open(sink, "wb") as f:
                f.write(data)
        else:
            sink.write(data)
        return len(data)

    @classmethod
    def load(cls, source):
        """Read from a path, a binary file object or a bytes buffer."""
        if isinstance(source, (bytes, bytearray, memoryview)):
            return cls.from_bytes(source)
        if isinstance(source, (str, os.PathLike)):
            with open(source, "rb") as f:
                return cls.from_bytes(f.read())
        return cls.from_bytes(source.read())

    def component_sizes(self):
        """Serialized bytes per component."""
        trees = sum(len(t.to_bytes()) + 8 for t in self.trees)
        return {
            "trees": trees,
            "sp": self.sp.size_bytes() + 8,
            "op": self.op.size_bytes() + 8,
            "dictionary": self.dictionary.size_bytes() + 8,
        }


def build_store(id_triples, dictionary, config=None):
    return TripleStore.build(id_triples, dictionary, config)


def resolve_pattern(store, pattern, use_index=True, stats=None):
    return store.resolve(pattern, use_index, stats)


def save_store(store, sink):
    return store.save(sink)


def load_store(source):
    return TripleStore.load(source)
