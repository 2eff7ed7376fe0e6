import gzip
import io

import numpy as np
import pytest

from k2triples.errors import ParseError
from k2triples.ntriples import (RawTriple, build_pipeline, format_triple, parse_line,
                                parse_ntriples, to_ntriples, write_ntriples)
from k2triples.samples import SPANISH_TEAM, spanish_team_ntriples
from k2triples.store import TripleStore


def test_minimal_statement():
    assert parse_line('<a> <p> "x" .', 1) == RawTriple("a", "p", '"x"', 1)


@pytest.mark.parametrize("line,obj", [
    ('<s> <p> "hi"@en-GB .', '"hi"@en-GB'),
    ('<s> <p> "4"^^<http://www.w3.org/2001/XMLSchema#int> .',
     '"4"^^<http://www.w3.org/2001/XMLSchema#int>'),
    ('<s> <p> "caf\\u00E9" .', '"café"'),
    ('<s> <p> "\\U0001F600" .', '"\U0001F600"'),
    ('<s> <p> "a\\tb\\\\c\\"d" .', '"a\\tb\\\\c\\"d"'),
    ('<s> <p> _:b1.', "_:b1"),
    ('<s>\t<p>\t<o>\t.\t# comment', "o"),
])
def test_terms(line, obj):
    assert parse_line(line).object == obj


def test_blank_and_comment_lines():
    assert parse_line("") is None
    assert parse_line("   # just a comment") is None


@pytest.mark.parametrize("line", [
    "<a> <p> <b>",
    '"lit" <p> <b> .',
    '<a> "p" <b> .',
    "<a> _:p <b> .",
    "<a> <p> <b> . extra",
    '<a> <p> "unterminated .',
    "<a> <p> <b c> .",
    '<a> <p> "x"@ .',
    '<a> <p> "\\q" .',
    "<a> <p> .",
])
def test_malformed(line):
    with pytest.raises(ParseError):
        parse_line(line, 7)


def test_lenient_and_strict():
    text = b"<a> <p> <b> .\n<a> <p> <c>\n<a> <p> <d> .\n"
    diags = []
    got = list(parse_ntriples(text, diagnostics=diags))
    assert [t.object for t in got] == ["b", "d"]
    assert [line for line, _ in diags] == [2]
    with pytest.raises(ParseError) as exc:
        list(parse_ntriples(text, strict=True))
    assert exc.value.line == 2


def test_invalid_utf8_is_reported():
    diags = []
    assert list(parse_ntriples(b'<a> <p> "\xff" .\n', diagnostics=diags)) == []
    assert len(diags) == 1


def test_gzip_and_file_sources(tmp_path):
    raw = spanish_team_ntriples().encode()
    plain = tmp_path / "a.nt"
    plain.write_bytes(raw)
    packed = tmp_path / "a.nt.gz"
    packed.write_bytes(gzip.compress(raw))
    a = [t.terms for t in parse_ntriples(plain)]
    b = [t.terms for t in parse_ntriples(packed)]
    c = [t.terms for t in parse_ntriples(io.BytesIO(raw))]
    assert a == b == c == SPANISH_TEAM


def random_term(rng, kind):
    chars = list("abcXYZ09 _-/#\t\n\"\\é€") + ["\U0001F600"]
    body = "".join(rng.choice(chars, size=rng.integers(1, 8)).tolist())
    if kind == 0:
        return "http://ex.org/" + body
    if kind == 1:
        return "_:b" + str(rng.integers(100))
    lit = '"' + "".join({"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}.get(c, c)
                        for c in body) + '"'
    return lit + ["", "@en", "^^<http://ex.org/dt>"][rng.integers(3)]


def test_emit_reparse_round_trip():
    rng = np.random.default_rng(9)
    triples = set()
    for _ in range(300):
        s = random_term(rng, rng.integers(2))
        p = random_term(rng, 0)
        o = random_term(rng, rng.integers(3))
        triples.add((s, p, o))
    buf = io.StringIO()
    write_ntriples(sorted(triples), buf)
    back = {t.terms for t in parse_ntriples(buf.getvalue().encode(), strict=True)}
    assert back == triples


def test_to_ntriples():
    assert to_ntriples("http://x/a b") == "<http://x/a\\u0020b>"
    assert to_ntriples('"x"@en') == '"x"@en'
    assert format_triple("a", "p", "_:b") == "<a> <p> _:b ."


def test_pipeline_football():
    st = build_pipeline(spanish_team_ntriples().encode())
    assert st.dictionary.counts() == {"SO": 2, "S": 3, "O": 3, "P": 6}
    assert st.to_bytes() == TripleStore.from_terms(SPANISH_TEAM).to_bytes()


def test_pipeline_dedup_and_determinism():
    raw = spanish_team_ntriples().encode()
    once = build_pipeline(raw).to_bytes()
    assert build_pipeline(raw + raw).to_bytes() == once
    assert build_pipeline(raw).to_bytes() == once


def test_pipeline_count_matches_distinct():
    rng = np.random.default_rng(3)
    lines = [f"<s{a}> <p{b}> <o{c}> .\n"
             for a, b, c in rng.integers(0, 12, size=(2000, 3)).tolist()]
    st = build_pipeline("".join(lines).encode())
    assert len(st) == len(set(lines))
