"""N-Triples reading and writing, and the text-to-store build pipeline.

Terms are kept as plain strings:

* IRIs without their angle brackets: ``<http://x/a>`` -> ``http://x/a``;
* blank nodes with their prefix: ``_:b0``;
* literals in a canonical quoted form: ``"text"``, ``"text"@en`` or
  ``"42"^^<http://www.w3.org/2001/XMLSchema#integer>``. ``\\u``/``\\U``
  escapes are decoded; backslash, quote, newline, carriage return and tab
  are re-escaped.

Only the line-based N-Triples subset is understood (no prefixes).
"""

import gzip
import io
import logging
import os
import re
from dataclasses import dataclass

import numpy as np

from .dictionary import Dictionary
from .errors import ParseError
from .store import TripleStore

log = logging.getLogger(__name__)

GZIP_MAGIC = b"\x1f\x8b"

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
            '"': '"', "'": "'", "\\": "\\"}
_LITERAL_OUT = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_LANG = re.compile(r"[A-Za-z]+(-[A-Za-z0-9]+)*")
_BLANK = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.\-]*")
_IRI_FORBIDDEN = set('<>"{}|^`\\ ') | {chr(c) for c in range(0x21)}


@dataclass(frozen=True)
class RawTriple:
    subject: str
    predicate: str
    object: str
    line: int = 0

    @property
    def terms(self):
        return (self.subject, self.predicate, self.object)


def is_literal(term):
    return term.startswith('"')


def is_blank(term):
    return term.startswith("_:")


class _Line:
    """Cursor over one line of text."""

    def __init__(self, text, lineno):
        self.text = text
        self.i = 0
        self.lineno = lineno

    def error(self, msg):
        raise ParseError(f"{msg} (column {self.i + 1})", self.lineno)

    def skip_ws(self):
        t = self.text
        while self.i < len(t) and t[self.i] in " \t":
            self.i += 1

    def at_end(self):
        return self.i >= len(self.text)

    def peek(self):
        return self.text[self.i] if self.i < len(self.text) else ""

    def unicode_escape(self):
        # self.i is at the 'u' or 'U'
        t = self.text
        n = 4 if t[self.i] == "u" else 8
        digits = t[self.i + 1:self.i + 1 + n]
        if len(digits) != n or not all(c in "0123456789abcdefABCDEF" for c in digits):
            self.error("bad unicode escape")
        cp = int(digits, 16)
        if cp > 0x10FFFF:
            self.error("code point out of range")
        self.i += 1 + n
        return chr(cp)

    def iri(self):
        t = self.text
        self.i += 1
        out = []
        while True:
            if self.i >= len(t):
                self.error("unterminated IRI")
            c = t[self.i]
            if c == ">":
                self.i += 1
                break
            if c == "\\":
                self.i += 1
                if self.peek() not in ("u", "U"):
                    self.error("only \\u and \\U escapes are allowed in IRIs")
                out.append(self.unicode_escape())
                continue
            if c in _IRI_FORBIDDEN:
                self.error(f"character {c!r} not allowed in IRI")
            out.append(c)
            self.i += 1
        if not out:
            self.error("empty IRI")
        return "".join(out)

    def blank(self):
        m = _BLANK.match(self.text, self.i + 2)
        if not self.text.startswith("_:", self.i) or not m:
            self.error("bad blank node label")
        label = m.group(0).rstrip(".")
        self.i += 2 + len(label)
        return "_:" + label

    def literal(self):
        t = self.text
        self.i += 1
        out = []
        while True:
            if self.i >= len(t):
                self.error("unterminated literal")
            c = t[self.i]
            if c == '"':
                self.i += 1
                break
            if c == "\\":
                self.i += 1
                e = self.peek()
                if e in ("u", "U"):
                    out.append(self.unicode_escape())
                    continue
                if e not in _ESCAPES:
                    self.error(f"bad escape \\{e}")
                out.append(_ESCAPES[e])
                self.i += 1
                continue
            out.append(c)
            self.i += 1
        value = '"' + "".join(_LITERAL_OUT.get(c, c) for c in out) + '"'
        if self.peek() == "@":
            m = _LANG.match(t, self.i + 1)
            if not m:
                self.error("bad language tag")
            self.i = m.end()
            return value + "@" + m.group(0)
        if t.startswith("^^", self.i):
            self.i += 2
            if self.peek() != "<":
                self.error("datatype must be an IRI")
            return value + "^^<" + self.iri() + ">"
        return value

    def term(self, position):
        self.skip_ws()
        c = self.peek()
        if c == "<":
            return self.iri()
        if c == "_" and position != "predicate":
            return self.blank()
        if c == '"':
            if position != "object":
                self.error(f"literal not allowed as {position}")
            return self.literal()
        if not c:
            self.error(f"missing {position}")
        self.error(f"unexpected {c!r} at {position}")


def parse_line(text, lineno=0):
    """Parse one line; returns a RawTriple, or None for blank/comment lines."""
    cur = _Line(text.rstrip("\r\n"), lineno)
    cur.skip_ws()
    if cur.at_end() or cur.peek() == "#":
        return None
    s = cur.term("subject")
    p = cur.term("predicate")
    o = cur.term("object")
    cur.skip_ws()
    if cur.peek() != ".":
        cur.error("missing terminating '.'")
    cur.i += 1
    cur.skip_ws()
    if not (cur.at_end() or cur.peek() == "#"):
        cur.error("trailing content after '.'")
    return RawTriple(s, p, o, lineno)


def _open(source):
    """Binary stream for a path, bytes or file object; gzip is sniffed."""
    if isinstance(source, (bytes, bytearray, memoryview)):
        stream = io.BytesIO(bytes(source))
    elif isinstance(source, (str, os.PathLike)):
        stream = open(source, "rb")
    else:
        stream = source
    if not stream.seekable():
        stream = io.BytesIO(stream.read())
    head = stream.read(2)
    stream.seek(-len(head), io.SEEK_CUR)
    if head == GZIP_MAGIC:
        return gzip.GzipFile(fileobj=stream)
    return stream


def parse_ntriples(source, strict=False, diagnostics=None):
    """Yield RawTriples from N-Triples ``source``.

    Malformed lines raise ParseError when ``strict``; otherwise they are
    logged, appended to ``diagnostics`` (if given) as ``(line, message)``
    and skipped.
    """
    stream = _open(source)
    try:
        yield from _parse_stream(stream, strict, diagnostics)
    finally:
        if isinstance(source, (str, os.PathLike)):
            stream.close()


def _parse_stream(stream, strict, diagnostics):
    for lineno, raw in enumerate(stream, 1):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            err = ParseError(f"invalid UTF-8: {exc.reason}", lineno)
        else:
            try:
                t = parse_line(text, lineno)
            except ParseError as exc:
                err = exc
            else:
                if t is not None:
                    yield t
                continue
        if strict:
            raise err
        log.warning("%s", err)
        if diagnostics is not None:
            diagnostics.append((lineno, str(err)))


def to_ntriples(term):
    """N-Triples text for a stored term."""
    if is_literal(term) or is_blank(term):
        return term
    return "<" + "".join(
        c if c not in _IRI_FORBIDDEN else f"\\u{ord(c):04X}" for c in term) + ">"


def format_triple(s, p, o):
    return f"{to_ntriples(s)} {to_ntriples(p)} {to_ntriples(o)} ."


def write_ntriples(triples, sink):
    """Write term triples as N-Triples lines to a text file object."""
    for s, p, o in triples:
        sink.write(format_triple(s, p, o) + "\n")


def build_pipeline(source, config=None, strict=False, diagnostics=None):
    """Parse ``source`` and build a TripleStore; duplicates are dropped."""
    raw = [t.terms for t in parse_ntriples(source, strict, diagnostics)]
    # pass 1: terms and dictionary
    d = Dictionary.build(raw)
    # pass 2: encode, sort-unique, partition and build
    ids = np.array(d.encode_triples(raw), dtype=np.int64).reshape(-1, 3)
    ids = np.unique(ids, axis=0)
    log.info("parsed %d statements, %d distinct", len(raw), len(ids))
    return TripleStore.build(ids, d, config)
