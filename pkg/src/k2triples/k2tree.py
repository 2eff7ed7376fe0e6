"""k2-trees: compressed square binary matrices.

The matrix (padded with zeros to ``n_prime x n_prime``) is split into
``k x k`` submatrices; each gets one bit, 1 iff it holds at least one 1, and
the 1-submatrices are split again. Internal levels are stored levelwise in
the bitstring ``T``. Decomposition stops at ``leaf_size x leaf_size``
submatrices whose cells are packed row-major into integer "leaf words";
the words are ranked by frequency and the ranks are DAC-coded into ``L``.

The branching factor may change with depth (``K2Config``): the top
``upper_levels`` levels use ``k_upper`` and the rest ``k_lower``. If the
node at ``T`` position ``p`` on level ``l`` is a 1, its children start at::

    level_start[l + 1] + (rank1(T, p) - ones_before[l] - 1) * k[l + 1]**2

which for a uniform ``k`` reduces to ``rank1(T, p) * k**2``. On the last
internal level the same offset (without ``level_start``) indexes a leaf.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._binio import Reader, Writer
from .bitseq import BitSequence
from .dac import DacSequence
from .errors import FormatError, InputError, RangeError, StateError

LEAF_DAC_WIDTH = 8


@dataclass(frozen=True)
class K2Config:
    """Hybrid branching policy and leaf size."""

    k_upper: int = 4
    upper_levels: int = 5
    k_lower: int = 2
    leaf_size: int = 8

    def __post_init__(self):
        if self.k_upper < 2 or self.k_lower < 2:
            raise InputError("branching factors must be >= 2")
        if self.upper_levels < 0:
            raise InputError("upper_levels must be >= 0")
        s = self.leaf_size
        while s > 1 and s % self.k_lower == 0:
            s //= self.k_lower
        if s != 1 or self.leaf_size < self.k_lower:
            raise InputError("leaf_size must be a positive power of k_lower")
        if self.leaf_size * self.leaf_size > 64:
            raise InputError("leaf_size**2 must fit in a 64-bit word")

    def schedule(self, side):
        """Branching factors top-down and the padded side covering ``side``.

        Upper levels are added first; fewer than ``upper_levels`` are used
        when the matrix is small. At least one internal level always exists.
        """
        ks = []
        n = self.leaf_size
        while n < side or not ks:
            k = self.k_upper if len(ks) < self.upper_levels else self.k_lower
            ks.append(k)
            n *= k
        return ks, n


class Cursor(NamedTuple):
    """One node of the conceptual tree.

    ``pos`` indexes the concatenation T:L (-1 for the root); ``level`` is -1
    for the root, 0..h-1 for nodes stored in T and h for single leaf cells.
    """

    pos: int
    row: int
    col: int
    side: int
    level: int
    bit: int


class K2Tree:
    """Static k2-tree over a set of (row, col) cells."""

    def __init__(self, cells=(), rows=None, cols=None, config=None):
        if not isinstance(cells, np.ndarray):
            cells = list(cells)
        cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
        r, c = cells[:, 0], cells[:, 1]
        if rows is None:
            rows = int(r.max()) + 1 if r.size else 0
        if cols is None:
            cols = int(c.max()) + 1 if c.size else 0
        self._build(r, c, rows, cols, config or K2Config())

    @classmethod
    def from_arrays(cls, rows_arr, cols_arr, rows, cols, config=None):
        self = cls.__new__(cls)
        self._build(np.asarray(rows_arr, dtype=np.int64),
                    np.asarray(cols_arr, dtype=np.int64), rows, cols,
                    config or K2Config())
        return self

    # --- construction -------------------------------------------------------

    def _build(self, r, c, rows, cols, config):
        if r.shape != c.shape:
            raise InputError("row and column arrays differ in length")
        if r.size and (r.min() < 0 or c.min() < 0 or r.max() >= rows or c.max() >= cols):
            raise InputError(f"cell outside the {rows}x{cols} matrix")
        self.config = config
        self.rows, self.cols = int(rows), int(cols)
        self._set_geometry()
        ks, sides, n = self._ks, self._sides, self.n_prime
        kl = config.leaf_size

        if r.size:
            lin = np.unique(r.astype(np.uint64) * np.uint64(n) + c.astype(np.uint64))
            r, c = lin // np.uint64(n), lin % np.uint64(n)
        else:
            r = c = np.zeros(0, dtype=np.uint64)
        self.n_cells = int(r.size)

        prefixes = []
        prefix = np.zeros(r.size, dtype=np.uint64)
        for k, s in zip(ks, sides):
            k64, s64 = np.uint64(k), np.uint64(s)
            digit = ((r // s64) % k64) * k64 + (c // s64) % k64
            prefix = prefix * (k64 * k64) + digit
            prefixes.append(prefix)
        offset = (r % np.uint64(kl)) * np.uint64(kl) + c % np.uint64(kl)
        order = np.argsort(prefix * np.uint64(kl * kl) + offset, kind="stable")
        prefixes = [p[order] for p in prefixes]
        offset = offset[order]

        parts = []
        prev = None
        for l, k in enumerate(ks):
            kk = k * k
            u = np.unique(prefixes[l])
            if l == 0:
                bits = np.zeros(kk, dtype=bool)
                bits[u.astype(np.int64)] = True
            else:
                parent = np.searchsorted(prev, u // np.uint64(kk))
                bits = np.zeros(prev.size * kk, dtype=bool)
                bits[parent * kk + (u % np.uint64(kk)).astype(np.int64)] = True
            parts.append(bits)
            prev = u
        self._T = BitSequence(np.concatenate(parts) if parts else np.zeros(0, bool))

        if r.size:
            last = prefixes[-1]
            starts = np.flatnonzero(np.r_[True, last[1:] != last[:-1]])
            words = np.bitwise_or.reduceat(np.uint64(1) << offset, starts)
            uniq, inverse, counts = np.unique(words, return_inverse=True, return_counts=True)
            by_freq = np.lexsort((uniq, -counts))
            code_of = np.empty(uniq.size, dtype=np.int64)
            code_of[by_freq] = np.arange(uniq.size)
            self._words = uniq[by_freq]
            codes = code_of[inverse]
        else:
            self._words = np.zeros(0, dtype=np.uint64)
            codes = np.zeros(0, dtype=np.int64)
        self._L = DacSequence(codes, LEAF_DAC_WIDTH)
        self._index_levels()

    def _set_geometry(self):
        self._ks, self.n_prime = self.config.schedule(max(self.rows, self.cols))
        sides = []
        s = self.n_prime
        for k in self._ks:
            s //= k
            sides.append(s)
        self._sides = sides

    def _index_levels(self):
        ks = self._ks
        starts = [0]
        ones_before = []
        size = ks[0] * ks[0]
        total = len(self._T)
        ones_total = 0
        for l in range(len(ks)):
            end = starts[-1] + size
            if end > total:
                raise FormatError("T shorter than its level structure")
            ones_before.append(ones_total)
            ones_here = self._T.rank1(end - 1) - ones_total if end else 0
            ones_total += ones_here
            starts.append(end)
            if l + 1 < len(ks):
                size = ones_here * ks[l + 1] * ks[l + 1]
            else:
                n_leaves = ones_here
        if starts[-1] != total:
            raise FormatError("T longer than its level structure")
        if n_leaves != len(self._L):
            raise FormatError("leaf count does not match T")
        self._level_start = starts
        self._ones_before = ones_before
        self._word_list = [int(w) for w in self._words]

    # --- structural accessors -------------------------------------------------

    @property
    def T(self):
        return self._T

    @property
    def L(self):
        return self._L

    @property
    def leaf_words(self):
        """Distinct leaf words, most frequent first (index = DAC code)."""
        return self._words

    @property
    def level_k(self):
        return list(self._ks)

    @property
    def level_sides(self):
        return list(self._sides)

    @property
    def height(self):
        """Number of internal levels stored in T."""
        return len(self._ks)

    @property
    def level_start(self):
        return list(self._level_start)

    def __len__(self):
        return self.n_cells

    def __repr__(self):
        return (f"K2Tree({self.rows}x{self.cols}, n_prime={self.n_prime}, "
                f"cells={self.n_cells}, |T|={len(self._T)}, leaves={len(self._L)})")

    def leaf_count(self):
        return len(self._L)

    def leaf_word(self, leaf):
        return self._word_list[self._L.access(leaf)]

    def leaf_bits(self, leaf):
        """Cells of leaf ``leaf`` as a row-major list of 0/1."""
        w = self.leaf_word(leaf)
        return [(w >> b) & 1 for b in range(self.config.leaf_size ** 2)]

    def child_base(self, pos, level):
        """Start of the children of the 1-bit at ``pos`` (on ``level``).

        For the last internal level this is the leaf index. ``pos == -1``
        denotes the root, whose children start at 0.
        """
        if pos < 0:
            return 0
        g = self._T.rank1(pos) - self._ones_before[level] - 1
        if level + 1 < len(self._ks):
            k = self._ks[level + 1]
            return self._level_start[level + 1] + g * k * k
        return g

    # --- navigation -------------------------------------------------------

    def root(self):
        return Cursor(-1, 0, 0, self.n_prime, -1, 1)

    def descend(self, cursor):
        """Children cursors (row-major) of a 1-node."""
        h = len(self._ks)
        if cursor.level >= h:
            raise StateError("leaf cells have no children")
        if not cursor.bit:
            raise StateError("cannot descend into a 0 node")
        lvl = cursor.level + 1
        if lvl < h:
            k, s = self._ks[lvl], self._sides[lvl]
            base = self.child_base(cursor.pos, cursor.level)
            T = self._T
            return [Cursor(base + i * k + j, cursor.row + i * s, cursor.col + j * s,
                           s, lvl, T.access(base + i * k + j))
                    for i in range(k) for j in range(k)]
        kl = self.config.leaf_size
        leaf = self.child_base(cursor.pos, cursor.level)
        w = self.leaf_word(leaf)
        base = len(self._T) + leaf * kl * kl
        return [Cursor(base + b, cursor.row + b // kl, cursor.col + b % kl, 1, lvl,
                       (w >> b) & 1)
                for b in range(kl * kl)]

    # --- queries ----------------------------------------------------------

    def _check_cell(self, row, col):
        if not (0 <= row < self.n_prime and 0 <= col < self.n_prime):
            raise RangeError(f"cell ({row}, {col}) outside {self.n_prime}x{self.n_prime}")

    def cell_check(self, row, col):
        self._check_cell(row, col)
        if not self.n_cells:
            return False
        data = self._T.packed
        base = 0
        for l, (k, s) in enumerate(zip(self._ks, self._sides)):
            p = base + (row // s) * k + col // s
            if not (data[p >> 3] >> (p & 7)) & 1:
                return False
            row %= s
            col %= s
            base = self.child_base(p, l)
        kl = self.config.leaf_size
        return bool((self._word_list[self._L.access(base)] >> (row * kl + col)) & 1)

    def _range(self, r1, r2, c1, c2, stats=None):
        """Cells inside the rectangle, in traversal order."""
        out = []
        if not self.n_cells:
            return out
        T = self._T
        data = T.packed
        ks, sides = self._ks, self._sides
        h = len(ks)
        frontier = [(0, 0, 0)]
        visited = 0
        for l in range(h):
            k, s = ks[l], sides[l]
            nxt = []
            for base, r0, c0 in frontier:
                ilo = max(0, (r1 - r0) // s)
                ihi = min(k - 1, (r2 - r0) // s)
                jlo = max(0, (c1 - c0) // s)
                jhi = min(k - 1, (c2 - c0) // s)
                for i in range(ilo, ihi + 1):
                    rb = base + i * k
                    ri = r0 + i * s
                    for j in range(jlo, jhi + 1):
                        p = rb + j
                        visited += 1
                        if (data[p >> 3] >> (p & 7)) & 1:
                            nxt.append((p, ri, c0 + j * s))
            ob = self._ones_before[l]
            if l + 1 < h:
                kk = ks[l + 1] * ks[l + 1]
                ls = self._level_start[l + 1]
                frontier = [(ls + (T.rank1(p) - ob - 1) * kk, ri, ci) for p, ri, ci in nxt]
            else:
                frontier = [(T.rank1(p) - ob - 1, ri, ci) for p, ri, ci in nxt]
        kl = self.config.leaf_size
        words, L = self._word_list, self._L
        for leaf, r0, c0 in frontier:
            w = words[L.access(leaf)]
            while w:
                low = w & -w
                b = low.bit_length() - 1
                w ^= low
                rr = r0 + b // kl
                cc = c0 + b % kl
                if r1 <= rr <= r2 and c1 <= cc <= c2:
                    out.append((rr, cc))
        if stats is not None:
            stats["nodes_visited"] = stats.get("nodes_visited", 0) + visited
        return out

    def direct_neighbors(self, row, stats=None):
        """Sorted columns holding a 1 in ``row``."""
        self._check_cell(row, 0)
        return sorted(c for _, c in self._range(row, row, 0, self.n_prime - 1, stats))

    def reverse_neighbors(self, col, stats=None):
        """Sorted rows holding a 1 in ``col``."""
        self._check_cell(0, col)
        return sorted(r for r, _ in self._range(0, self.n_prime - 1, col, col, stats))

    def range_query(self, row_lo, row_hi, col_lo, col_hi, stats=None):
        """All 1-cells in the closed rectangle, sorted by (row, col)."""
        if row_lo > row_hi or col_lo > col_hi:
            raise InputError("empty or inverted rectangle")
        self._check_cell(row_lo, col_lo)
        self._check_cell(row_hi, col_hi)
        full = self.n_prime - 1
        if row_lo == 0 and col_lo == 0 and row_hi == full and col_hi == full:
            rows, cols = self.cells()
            return list(zip(rows.tolist(), cols.tolist()))
        return sorted(self._range(row_lo, row_hi, col_lo, col_hi, stats))

    def cells(self):
        """Every 1-cell as (rows, cols) arrays sorted row-major.

        Decodes whole levels at once; no rank is needed because the 1s of a
        level map in order onto the child groups of the next one.
        """
        if not self.n_cells:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        bits = self._T.to_numpy()
        r0 = np.zeros(1, dtype=np.int64)
        c0 = np.zeros(1, dtype=np.int64)
        for l, (k, s) in enumerate(zip(self._ks, self._sides)):
            kk = k * k
            idx = np.flatnonzero(bits[self._level_start[l]:self._level_start[l + 1]])
            parent, d = idx // kk, idx % kk
            r0 = r0[parent] + (d // k) * s
            c0 = c0[parent] + (d % k) * s
        kl = self.config.leaf_size
        words = self._words[self._L.to_numpy().astype(np.int64)]
        wbits = np.unpackbits(words.astype("<u8").view(np.uint8).reshape(-1, 8),
                              axis=1, bitorder="little")[:, :kl * kl]
        leaf, b = np.nonzero(wbits)
        rows = r0[leaf] + b // kl
        cols = c0[leaf] + b % kl
        order = np.lexsort((cols, rows))
        return rows[order], cols[order]

    # --- verification -------------------------------------------------------

    def audit(self):
        """Check internal consistency; returns a list of problems (empty = ok)."""
        problems = []
        bits = self._T.to_numpy()
        h = len(self._ks)
        for l in range(h):
            lvl = bits[self._level_start[l]:self._level_start[l + 1]]
            if l + 1 < h:
                kk = self._ks[l + 1] ** 2
                child = bits[self._level_start[l + 1]:self._level_start[l + 2]]
                groups = child.reshape(-1, kk) if child.size else np.zeros((0, kk), bool)
                if groups.shape[0] != lvl.sum():
                    problems.append(f"level {l}: child group count mismatch")
                elif not groups.any(axis=1).all():
                    problems.append(f"level {l + 1}: all-zero group under a 1 bit")
            elif len(self._L) != lvl.sum():
                problems.append("leaf count mismatch")
        if len(self._L):
            words = self._words[self._L.to_numpy().astype(np.int64)]
            if (words == 0).any():
                problems.append("empty leaf word under a 1 bit")
            total = int(np.bitwise_count(words).sum())
            if total != self.n_cells:
                problems.append("leaf popcount differs from cell count")
        return problems

    # --- serialization ------------------------------------------------------

    def write(self, w):
        cfg = self.config
        for v in (cfg.k_upper, cfg.upper_levels, cfg.k_lower, cfg.leaf_size):
            w.u32(v)
        w.u64(self.rows)
        w.u64(self.cols)
        w.u64(self.n_prime)
        w.u64(self.n_cells)
        self._T.write(w)
        w.u64(self._words.size)
        w.raw(self._words.astype("<u8").tobytes())
        self._L.write(w)

    @classmethod
    def read(cls, r):
        self = cls.__new__(cls)
        try:
            self.config = K2Config(r.u32(), r.u32(), r.u32(), r.u32())
        except InputError as exc:
            raise FormatError(f"bad k2-tree config: {exc}") from None
        self.rows, self.cols = r.u64(), r.u64()
        n_prime = r.u64()
        self.n_cells = r.u64()
        self._set_geometry()
        if n_prime != self.n_prime:
            raise FormatError("stored n_prime disagrees with the level schedule")
        self._T = BitSequence.read(r)
        nwords = r.u64()
        self._words = np.frombuffer(r.raw(8 * nwords), dtype="<u8").astype(np.uint64)
        self._L = DacSequence.read(r)
        self._index_levels()
        return self

    def to_bytes(self):
        w = Writer()
        self.write(w)
        return w.getvalue()

    @classmethod
    def from_bytes(cls, data):
        r = Reader(data)
        out = cls.read(r)
        r.expect_end()
        return out

    def component_sizes(self):
        """Serialized bytes of T and of L (word table + DAC codes)."""
        t = len(self._T.to_bytes())
        l_bytes = 8 + 8 * self._words.size + len(self._L.to_bytes())
        return {"T": t, "L": l_bytes}
