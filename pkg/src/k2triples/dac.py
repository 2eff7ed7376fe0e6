"""Directly Addressable Codes.

A value is cut into ``b``-bit chunks, least significant chunk first.
Level ``l`` stores the ``l``-th chunk of every value that still has one,
plus a continuation bitmap ``B_l`` where a 1 means "more chunks follow".
The chunk of value ``i`` at level ``l+1`` sits at ``rank1(B_l, i) - 1``.
"""

import numpy as np

from ._binio import Reader, Writer
from .bitseq import BitSequence
from .errors import FormatError, InputError, RangeError

MAX_VALUE_BITS = 64


def _chunk_dtype(width):
    for dt in (np.uint8, np.uint16, np.uint32):
        if width <= np.iinfo(dt).bits:
            return dt
    return np.uint64


def pack_ints(values, width):
    """Pack non-negative ints into ``width``-bit little-endian fields."""
    v = np.asarray(values, dtype=np.uint64)
    if v.size == 0:
        return b""
    shifts = np.arange(width, dtype=np.uint64)
    bits = ((v[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return np.packbits(bits.ravel(), bitorder="little").tobytes()


def unpack_ints(data, count, width):
    if count == 0:
        return np.zeros(0, dtype=np.uint64)
    need = (count * width + 7) // 8
    if len(data) < need:
        raise FormatError("packed integer block truncated")
    bits = np.unpackbits(
        np.frombuffer(data, dtype=np.uint8, count=need),
        count=count * width, bitorder="little",
    ).reshape(count, width).astype(np.uint64)
    return (bits << np.arange(width, dtype=np.uint64)).sum(axis=1, dtype=np.uint64)


class DacSequence:
    """Immutable DAC-encoded sequence of non-negative integers."""

    def __init__(self, values=(), chunk_width=4):
        if not 1 <= chunk_width <= MAX_VALUE_BITS:
            raise InputError(f"chunk width must be in [1, 64], got {chunk_width}")
        raw = np.asarray(values)
        if raw.size and raw.dtype.kind in "if" and raw.min() < 0:
            raise InputError("DAC values must be non-negative")
        v = raw.astype(np.uint64).ravel()
        self.chunk_width = chunk_width
        self._length = int(v.size)
        mask = np.uint64((1 << chunk_width) - 1) if chunk_width < 64 else np.uint64(0xFFFFFFFFFFFFFFFF)
        dt = _chunk_dtype(chunk_width)
        self.levels = []
        rest = v
        while True:
            chunks = (rest & mask).astype(dt)
            rest = rest >> np.uint64(chunk_width) if chunk_width < 64 else np.zeros_like(rest)
            more = rest != 0
            self.levels.append((chunks, BitSequence(more)))
            if not more.any():
                break
            rest = rest[more]
        if self._length == 0:
            self.levels = []
        self._lists = [(a.tolist(), b) for a, b in self.levels]

    def __len__(self):
        return self._length

    def __repr__(self):
        return (f"DacSequence(length={self._length}, chunk_width={self.chunk_width}, "
                f"levels={len(self.levels)})")

    def __getitem__(self, i):
        return self.access(i)

    def access(self, i):
        if not 0 <= i < self._length:
            raise RangeError(f"index {i} out of range for length {self._length}")
        b = self.chunk_width
        value = 0
        shift = 0
        for chunks, cont in self._lists:
            value |= chunks[i] << shift
            if not cont.access(i):
                return value
            i = cont.rank1(i) - 1
            shift += b
        raise FormatError("DAC codeword runs past the last level")

    def to_numpy(self):
        """Decode every value (vectorized)."""
        out = np.zeros(self._length, dtype=np.uint64)
        idx = np.arange(self._length)
        shift = 0
        for chunks, cont in self.levels:
            out[idx] |= chunks.astype(np.uint64) << np.uint64(shift)
            more = cont.to_numpy()
            idx = idx[more]
            shift += self.chunk_width
        return out

    def tolist(self):
        return [int(x) for x in self.to_numpy()]

    def encoded_bits(self):
        """Payload size: chunk arrays plus continuation bitmaps."""
        return sum(len(a) * self.chunk_width + len(b) for a, b in self.levels)

    def write(self, w):
        w.u8(self.chunk_width)
        w.u64(self._length)
        w.u32(len(self.levels))
        for chunks, cont in self.levels:
            w.blob(pack_ints(chunks, self.chunk_width))
            cont.write(w)

    @classmethod
    def read(cls, r):
        width = r.u8()
        length = r.u64()
        nlevels = r.u32()
        if not 1 <= width <= MAX_VALUE_BITS:
            raise FormatError(f"bad DAC chunk width {width}")
        self = cls.__new__(cls)
        self.chunk_width = width
        self._length = length
        self.levels = []
        expect = length
        dt = _chunk_dtype(width)
        for _ in range(nlevels):
            chunks = unpack_ints(r.blob(), expect, width).astype(dt)
            cont = BitSequence.read(r)
            if len(cont) != expect:
                raise FormatError("DAC level size mismatch")
            self.levels.append((chunks, cont))
            expect = cont.ones
        if expect != 0 and length:
            raise FormatError("DAC levels end with pending continuations")
        self._lists = [(a.tolist(), b) for a, b in self.levels]
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
