"""SP and OP indexes: distinct predicate lists per subject / object.

Every distinct predicate list is stored once in a vocabulary, most
frequent first, so that the per-entity list IDs are small and DAC-code
compactly. Within the vocabulary, ``seq`` concatenates the lists and
``ends`` has a 1 at the last element of each list; list ``p`` (1-based)
spans ``seq[select1(ends, p - 1) + 1 .. select1(ends, p)]``.

Equal-frequency lists keep the order in which they are first used by the
lowest entity ID.
"""

import math

import numpy as np

from ._binio import Writer
from .bitseq import BitSequence
from .dac import DacSequence, pack_ints, unpack_ints
from .errors import FormatError, InputError, RangeError

IDS_CHUNK_WIDTH = 4


class PredicateListVocabulary:
    def __init__(self, lists=()):
        lists = [tuple(int(p) for p in l) for l in lists]
        for l in lists:
            if not l or any(a >= b for a, b in zip(l, l[1:])):
                raise InputError("predicate lists must be non-empty and strictly ascending")
        self.seq = np.array([p for l in lists for p in l], dtype=np.uint32)
        ends = np.zeros(self.seq.size, dtype=bool)
        ends[np.cumsum([len(l) for l in lists], dtype=np.int64) - 1] = True
        self.ends = BitSequence(ends)

    def __len__(self):
        """Number of distinct lists."""
        return self.ends.ones

    def get(self, list_id):
        """Predicate list with 1-based ``list_id``."""
        if not 1 <= list_id <= len(self):
            raise RangeError(f"list ID {list_id} out of range")
        i = self.ends.select1(list_id - 1) + 1
        j = self.ends.select1(list_id)
        return self.seq[i:j + 1].tolist()

    def write(self, w, n_predicates):
        width = max(1, math.ceil(math.log2(max(n_predicates, 1))))
        w.u8(width)
        w.u64(self.seq.size)
        w.blob(pack_ints(self.seq, width))
        self.ends.write(w)

    @classmethod
    def read(cls, r):
        self = cls.__new__(cls)
        width = r.u8()
        n = r.u64()
        if width < 1 or width > 32:
            raise FormatError(f"bad predicate width {width}")
        self.seq = unpack_ints(r.blob(), n, width).astype(np.uint32)
        self.ends = BitSequence.read(r)
        if len(self.ends) != n:
            raise FormatError("vocabulary delimiter length mismatch")
        return self


class PredicateIndex:
    """Per-entity predicate-list IDs over a frequency-sorted vocabulary.

    ``ids`` stores the 1-based list ID of each entity; 0 marks an entity
    with no triples on this axis.
    """

    def __init__(self, ids, vocab, n_predicates):
        self.ids = ids
        self.vocab = vocab
        self.n_predicates = n_predicates

    @classmethod
    def build(cls, entities, predicates, entity_count, n_predicates):
        """Build from parallel arrays of (entity, predicate) pairs."""
        ent = np.asarray(entities, dtype=np.int64)
        pred = np.asarray(predicates, dtype=np.int64)
        if ent.size and (ent.min() < 0 or ent.max() >= entity_count):
            raise InputError("entity ID outside entity_count")
        if pred.size and (pred.min() < 0 or pred.max() >= n_predicates):
            raise InputError("predicate ID outside the predicate range")
        pairs = np.unique(ent * max(n_predicates, 1) + pred)
        ent = pairs // max(n_predicates, 1)
        pred = pairs % max(n_predicates, 1)
        bounds = np.flatnonzero(np.r_[True, ent[1:] != ent[:-1], True]) if ent.size \
            else np.zeros(1, dtype=np.int64)
        per_entity = {}
        pl = pred.tolist()
        el = ent.tolist()
        for a, b in zip(bounds[:-1].tolist(), bounds[1:].tolist()):
            per_entity[el[a]] = tuple(pl[a:b])

        freq = {}
        first = {}
        for e in sorted(per_entity):
            l = per_entity[e]
            freq[l] = freq.get(l, 0) + 1
            first.setdefault(l, e)
        ordered = sorted(freq, key=lambda l: (-freq[l], first[l]))
        list_id = {l: i + 1 for i, l in enumerate(ordered)}
        ids = np.zeros(entity_count, dtype=np.int64)
        for e, l in per_entity.items():
            ids[e] = list_id[l]
        return cls(DacSequence(ids, IDS_CHUNK_WIDTH), PredicateListVocabulary(ordered),
                   n_predicates)

    def __len__(self):
        return len(self.ids)

    def list_id(self, entity):
        """1-based vocabulary list ID of ``entity`` (0 = no predicates)."""
        if not 0 <= entity < len(self.ids):
            raise RangeError(f"entity {entity} out of range")
        return self.ids.access(entity)

    def predicates_of(self, entity):
        """Ascending distinct predicate IDs used with ``entity``."""
        lid = self.list_id(entity)
        return self.vocab.get(lid) if lid else []

    def write(self, w):
        w.u64(self.n_predicates)
        self.vocab.write(w, self.n_predicates)
        self.ids.write(w)

    @classmethod
    def read(cls, r):
        n_predicates = r.u64()
        vocab = PredicateListVocabulary.read(r)
        ids = DacSequence.read(r)
        if len(ids) and int(ids.to_numpy().max()) > len(vocab):
            raise FormatError("list ID beyond the vocabulary")
        return cls(ids, vocab, n_predicates)

    def size_bytes(self):
        w = Writer()
        self.write(w)
        return len(w.getvalue())
