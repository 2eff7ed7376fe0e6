"""Little-endian binary reader/writer shared by all serializers."""

import struct

from .errors import FormatError

_U8 = struct.Struct("<B")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


class Writer:
    def __init__(self):
        self._parts = []

    def u8(self, v):
        self._parts.append(_U8.pack(v))

    def u32(self, v):
        self._parts.append(_U32.pack(v))

    def u64(self, v):
        self._parts.append(_U64.pack(v))

    def raw(self, b):
        self._parts.append(bytes(b))

    def blob(self, b):
        """Length-prefixed (u64) byte string."""
        self.u64(len(b))
        self.raw(b)

    def getvalue(self):
        return b"".join(self._parts)


class Reader:
    def __init__(self, data):
        self._buf = memoryview(data)
        self._pos = 0

    def _take(self, n):
        end = self._pos + n
        if n < 0 or end > len(self._buf):
            raise FormatError(
                f"truncated input: need {n} bytes at offset {self._pos}, "
                f"have {len(self._buf) - self._pos}"
            )
        out = self._buf[self._pos:end]
        self._pos = end
        return out

    def u8(self):
        return _U8.unpack(self._take(1))[0]

    def u32(self):
        return _U32.unpack(self._take(4))[0]

    def u64(self):
        return _U64.unpack(self._take(8))[0]

    def raw(self, n):
        return bytes(self._take(n))

    def blob(self):
        return self.raw(self.u64())

    @property
    def remaining(self):
        return len(self._buf) - self._pos

    def expect_end(self):
        if self.remaining:
            raise FormatError(f"{self.remaining} trailing bytes after payload")
