"""Plain bitstrings with rank, select and access.

Bits are packed little-endian (bit ``i`` lives in byte ``i >> 3`` at bit
``i & 7``), which is the same layout as a little-endian array of 64-bit
words. The rank directory keeps one absolute 32-bit counter per 512-bit
superblock (6.25% overhead); the remainder of a rank is a popcount over at
most 64 bytes. Select binary-searches the directory and then scans one
superblock.

All positions are 0-based. ``rank1(i)`` counts ones in ``bits[0..i]``
inclusive, and ``select1(j)`` returns the position of the ``j``-th one
(1-based ``j``), with ``select1(0) == -1`` so that "select + 1" yields the
start of the first run.
"""

from array import array
from bisect import bisect_left

import numpy as np

from ._binio import Reader, Writer
from .errors import FormatError, NotFoundError, RangeError

SUPERBLOCK_BITS = 512
_SB_BYTES = SUPERBLOCK_BITS // 8
_SB_SHIFT = 9


class BitSequence:
    """Immutable bitstring supporting rank/select/access."""

    __slots__ = ("_n", "_data", "_dir", "_ones")

    def __init__(self, bits=()):
        if isinstance(bits, str):
            bits = [c == "1" for c in bits if c in "01"]
        elif _is_lazy(bits):
            bits = list(bits)
        arr = np.asarray(bits, dtype=bool).ravel()
        self._init_packed(np.packbits(arr, bitorder="little").tobytes(), arr.size)

    @classmethod
    def from_packed(cls, data, n):
        """Wrap already-packed little-endian bytes holding ``n`` bits."""
        if len(data) < (n + 7) // 8:
            raise FormatError("packed buffer shorter than bit length")
        self = cls.__new__(cls)
        buf = np.frombuffer(bytes(data[: (n + 7) // 8]), dtype=np.uint8).copy()
        if n % 8:
            buf[-1] &= (1 << (n % 8)) - 1
        self._init_packed(buf.tobytes(), n)
        return self

    def _init_packed(self, data, n):
        nwords = (n + 63) // 64
        data = data.ljust(nwords * 8, b"\0")
        self._n = n
        self._data = data
        words = np.frombuffer(data, dtype="<u8")
        nsb = (n + SUPERBLOCK_BITS - 1) // SUPERBLOCK_BITS
        per_sb = np.zeros(nsb * 8, dtype=np.uint64)
        per_sb[: words.size] = np.bitwise_count(words)
        per_sb = per_sb.reshape(nsb, 8).sum(axis=1)
        prefix = np.zeros(nsb, dtype=np.uint32)
        if nsb:
            np.cumsum(per_sb[:-1], out=prefix[1:])
        self._dir = array("I", prefix.tobytes())
        self._ones = int(per_sb.sum()) if nsb else 0

    # --- basic properties -------------------------------------------------

    def __len__(self):
        return self._n

    def __eq__(self, other):
        return (
            isinstance(other, BitSequence)
            and self._n == other._n
            and self._data == other._data
        )

    def __hash__(self):
        return hash((self._n, self._data))

    def __repr__(self):
        if self._n <= 64:
            return f"BitSequence('{self.to_string()}')"
        return f"BitSequence(n={self._n}, ones={self._ones})"

    @property
    def ones(self):
        """Total number of 1 bits."""
        return self._ones

    @property
    def packed(self):
        """Packed bytes, padded to a whole number of 64-bit words."""
        return self._data

    def aux_bits(self):
        """Size of the rank/select directory in bits."""
        return 32 * len(self._dir)

    def payload_bits(self):
        return 8 * len(self._data)

    def to_numpy(self):
        """Bits as a boolean numpy array."""
        raw = np.frombuffer(self._data, dtype=np.uint8)
        return np.unpackbits(raw, count=self._n, bitorder="little").astype(bool)

    def to_string(self):
        return "".join("1" if b else "0" for b in self.to_numpy())

    def __iter__(self):
        return iter(self.to_numpy().tolist())

    # --- queries ------------------------------------------------------------

    def _check(self, i):
        if not 0 <= i < self._n:
            raise RangeError(f"position {i} out of range for length {self._n}")

    def access(self, i):
        self._check(i)
        return (self._data[i >> 3] >> (i & 7)) & 1

    __getitem__ = access

    def rank1(self, i):
        """Number of 1s in positions ``0..i`` inclusive."""
        self._check(i)
        sb = i >> _SB_SHIFT
        r = self._dir[sb]
        start = sb * _SB_BYTES
        end = i >> 3
        if end > start:
            r += int.from_bytes(self._data[start:end], "little").bit_count()
        return r + (self._data[end] & ((2 << (i & 7)) - 1)).bit_count()

    def rank0(self, i):
        return i + 1 - self.rank1(i)

    def rank(self, bit, i):
        return self.rank1(i) if bit else self.rank0(i)

    def select1(self, j):
        """Position of the ``j``-th 1 (1-based); ``select1(0) == -1``."""
        if j == 0:
            return -1
        if j < 0:
            raise RangeError(f"occurrence index must be >= 0, got {j}")
        if j > self._ones:
            raise NotFoundError(f"only {self._ones} ones, asked for #{j}")
        sb = bisect_left(self._dir, j) - 1
        need = j - self._dir[sb]
        pos = sb * _SB_BYTES
        data = self._data
        while True:
            word = int.from_bytes(data[pos:pos + 8], "little")
            c = word.bit_count()
            if c >= need:
                break
            need -= c
            pos += 8
        for _ in range(need - 1):
            word &= word - 1
        return pos * 8 + (word & -word).bit_length() - 1

    def select0(self, j):
        """Position of the ``j``-th 0 (1-based); ``select0(0) == -1``."""
        if j == 0:
            return -1
        if j < 0:
            raise RangeError(f"occurrence index must be >= 0, got {j}")
        zeros = self._n - self._ones
        if j > zeros:
            raise NotFoundError(f"only {zeros} zeros, asked for #{j}")
        lo, hi = 0, len(self._dir) - 1
        # last superblock whose preceding zero count is < j
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid * SUPERBLOCK_BITS - self._dir[mid] < j:
                lo = mid
            else:
                hi = mid - 1
        need = j - (lo * SUPERBLOCK_BITS - self._dir[lo])
        pos = lo * _SB_BYTES
        data = self._data
        while True:
            word = ~int.from_bytes(data[pos:pos + 8], "little") & 0xFFFFFFFFFFFFFFFF
            c = word.bit_count()
            if c >= need:
                break
            need -= c
            pos += 8
        for _ in range(need - 1):
            word &= word - 1
        return pos * 8 + (word & -word).bit_length() - 1

    def select(self, bit, j):
        return self.select1(j) if bit else self.select0(j)

    def rank1_many(self, positions):
        """Vectorized inclusive rank1 over an integer array of positions."""
        pos = np.asarray(positions, dtype=np.int64)
        if pos.size and (pos.min() < 0 or pos.max() >= self._n):
            raise RangeError("position out of range")
        words = np.frombuffer(self._data, dtype="<u8")
        dirv = np.frombuffer(self._dir, dtype=np.uint32).astype(np.int64)
        w = pos >> 6
        out = dirv[pos >> _SB_SHIFT]
        first = (pos >> _SB_SHIFT) << 3
        for off in range(8):
            idx = first + off
            m = idx < w
            if not m.any():
                break
            out[m] += np.bitwise_count(words[idx[m]]).astype(np.int64)
        shift = (pos & 63).astype(np.uint64)
        mask = (np.uint64(2) << shift) - np.uint64(1)
        mask[shift == 63] = np.uint64(0xFFFFFFFFFFFFFFFF)
        out += np.bitwise_count(words[w] & mask).astype(np.int64)
        return out

    # --- serialization ------------------------------------------------------

    def write(self, w):
        w.u64(self._n)
        w.raw(self._data)

    @classmethod
    def read(cls, r):
        n = r.u64()
        nbytes = (n + 63) // 64 * 8
        return cls.from_packed(r.raw(nbytes), n)

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


def _is_lazy(obj):
    return not hasattr(obj, "__len__") and not isinstance(obj, np.ndarray)
