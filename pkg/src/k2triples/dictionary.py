"""Four-category term dictionary (SO, S, O, P).

Terms used both as subject and object go to SO and get the lowest IDs, so
they share one ID in both roles. Subject-only and object-only terms follow
SO in their own ranges, which overlap numerically. Predicates have their
own range. Each category is sorted lexicographically; Python string order
is code-point order, i.e. the UTF-8 byte order.

IDs handed to the rest of the package are 0-based. ``external_id`` gives
the 1-based form used in printed output.
"""

from bisect import bisect_left

from ._binio import Reader, Writer
from .errors import FormatError, InputError, NotFoundError, RangeError

SUBJECT, PREDICATE, OBJECT = "subject", "predicate", "object"
ROLES = (SUBJECT, PREDICATE, OBJECT)

SO, S, O, P = "SO", "S", "O", "P"


class Dictionary:
    """Immutable term <-> ID mapping."""

    def __init__(self, so_terms=(), s_terms=(), o_terms=(), p_terms=()):
        self.so_terms = list(so_terms)
        self.s_terms = list(s_terms)
        self.o_terms = list(o_terms)
        self.p_terms = list(p_terms)
        for name, terms in (("SO", self.so_terms), ("S", self.s_terms),
                            ("O", self.o_terms), ("P", self.p_terms)):
            if any(a >= b for a, b in zip(terms, terms[1:])):
                raise InputError(f"category {name} is not strictly sorted")
        if set(self.so_terms) & (set(self.s_terms) | set(self.o_terms)):
            raise InputError("SO overlaps S or O")
        if set(self.s_terms) & set(self.o_terms):
            raise InputError("a term in both S and O belongs in SO")
        self._node_index = {}
        for cat, terms in ((SO, self.so_terms), (S, self.s_terms), (O, self.o_terms)):
            for i, t in enumerate(terms):
                self._node_index[t] = (cat, i)
        self._pred_index = {t: i for i, t in enumerate(self.p_terms)}

    @classmethod
    def build(cls, triples):
        """Build from an iterable of (subject, predicate, object) terms."""
        subjects, objects, preds = set(), set(), set()
        for s, p, o in triples:
            subjects.add(s)
            preds.add(p)
            objects.add(o)
        so = subjects & objects
        return cls(sorted(so), sorted(subjects - so), sorted(objects - so), sorted(preds))

    # --- sizes --------------------------------------------------------------

    @property
    def n_so(self):
        return len(self.so_terms)

    @property
    def n_subjects(self):
        """Size of the subject ID range, |SO| + |S|."""
        return len(self.so_terms) + len(self.s_terms)

    @property
    def n_objects(self):
        """Size of the object ID range, |SO| + |O|."""
        return len(self.so_terms) + len(self.o_terms)

    @property
    def n_predicates(self):
        return len(self.p_terms)

    def counts(self):
        return {"SO": self.n_so, "S": len(self.s_terms), "O": len(self.o_terms),
                "P": self.n_predicates}

    def __repr__(self):
        c = self.counts()
        return f"Dictionary(SO={c['SO']}, S={c['S']}, O={c['O']}, P={c['P']})"

    def __eq__(self, other):
        return isinstance(other, Dictionary) and (
            self.so_terms, self.s_terms, self.o_terms, self.p_terms
        ) == (other.so_terms, other.s_terms, other.o_terms, other.p_terms)

    # --- mapping ------------------------------------------------------------

    def encode(self, term, role):
        """0-based ID of ``term`` in ``role``; NotFoundError if absent."""
        if role == PREDICATE:
            try:
                return self._pred_index[term]
            except KeyError:
                raise NotFoundError(f"unknown predicate {term!r}") from None
        if role not in (SUBJECT, OBJECT):
            raise InputError(f"unknown role {role!r}")
        hit = self._node_index.get(term)
        if hit is not None:
            cat, i = hit
            if cat == SO:
                return i
            if (cat == S) == (role == SUBJECT):
                return self.n_so + i
        raise NotFoundError(f"{term!r} does not occur as {role}")

    def decode(self, id_, role):
        """Term for a 0-based ID in ``role``."""
        if role == PREDICATE:
            if 0 <= id_ < len(self.p_terms):
                return self.p_terms[id_]
            raise RangeError(f"predicate ID {id_} out of range")
        if role not in (SUBJECT, OBJECT):
            raise InputError(f"unknown role {role!r}")
        if 0 <= id_ < self.n_so:
            return self.so_terms[id_]
        rest = self.s_terms if role == SUBJECT else self.o_terms
        j = id_ - self.n_so
        if 0 <= j < len(rest):
            return rest[j]
        raise RangeError(f"{role} ID {id_} out of range")

    def locate(self, term):
        """(category, ordinal) of a node term via binary search, or None."""
        for cat, terms in ((SO, self.so_terms), (S, self.s_terms), (O, self.o_terms)):
            i = bisect_left(terms, term)
            if i < len(terms) and terms[i] == term:
                return cat, i
        return None

    @staticmethod
    def external_id(id_):
        return id_ + 1

    def encode_triples(self, triples):
        return [(self.encode(s, SUBJECT), self.encode(p, PREDICATE), self.encode(o, OBJECT))
                for s, p, o in triples]

    def decode_triple(self, triple):
        s, p, o = triple
        return (self.decode(s, SUBJECT), self.decode(p, PREDICATE), self.decode(o, OBJECT))

    # --- serialization ------------------------------------------------------

    def write(self, w):
        for terms in (self.so_terms, self.s_terms, self.o_terms, self.p_terms):
            block = Writer()
            block.u64(len(terms))
            for t in terms:
                b = t.encode("utf-8")
                block.u32(len(b))
                block.raw(b)
            w.blob(block.getvalue())

    @classmethod
    def read(cls, r):
        cats = []
        for _ in range(4):
            block = Reader(r.blob())
            n = block.u64()
            terms = []
            for _ in range(n):
                try:
                    terms.append(block.raw(block.u32()).decode("utf-8"))
                except UnicodeDecodeError as exc:
                    raise FormatError(f"bad term encoding: {exc}") from None
            block.expect_end()
            cats.append(terms)
        try:
            return cls(*cats)
        except InputError as exc:
            raise FormatError(str(exc)) from None

    def size_bytes(self):
        w = Writer()
        self.write(w)
        return len(w.getvalue())
