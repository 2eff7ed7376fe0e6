"""Command-line interface: build, query, bench and info.

Exit codes: 0 ok, 1 usage, 2 I/O or format error, 3 query error.
Set K2T_LOG (e.g. ``K2T_LOG=info``) for diagnostic logging on stderr.
"""

import argparse
import logging
import os
import re
import sys
import time

from .bench import run_bench
from .dictionary import OBJECT, PREDICATE, SUBJECT
from .errors import FormatError, InputError, NotFoundError, ParseError
from .joins import JoinQuery, classify_join, join
from .k2tree import K2Config
from .ntriples import _Line, build_pipeline, to_ntriples
from .store import TriplePattern, TripleStore, Var, is_var

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_QUERY = 0, 1, 2, 3

log = logging.getLogger("k2triples")

_VARNAME = re.compile(r"[A-Za-z0-9_]*")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- query text ---------------------------------------------------------------

def parse_query(text):
    """Parse one pattern or two '.'-separated patterns.

    Terms are ``?name`` (``?`` alone is anonymous), ``<iri>``,
    ``"literal"`` (with optional ``@lang`` or ``^^<iri>``) and ``_:label``.
    Returns a list of (s, p, o) tuples of term strings and ``Var``.
    """
    cur = _Line(text.replace("\n", " "), None)
    patterns = []
    while True:
        cur.skip_ws()
        if cur.at_end():
            break
        if len(patterns) == 2:
            cur.error("at most two patterns are supported")
        terms = []
        for position in ("subject", "predicate", "object"):
            cur.skip_ws()
            if cur.peek() == "?":
                m = _VARNAME.match(cur.text, cur.i + 1)
                cur.i = m.end()
                terms.append(Var(m.group(0)))
            else:
                terms.append(cur.term(position))
        patterns.append(tuple(terms))
        cur.skip_ws()
        if cur.peek() == ".":
            cur.i += 1
        elif not cur.at_end():
            cur.error("expected '.' between patterns")
    if not patterns:
        raise ParseError("empty query")
    return patterns


def _escape(text):
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _pattern_rows(store, terms):
    """Column names, roles and ID rows for a single pattern."""
    pat = store.encode_pattern(*terms)
    names, roles, idx = [], [], []
    for i, (v, role) in enumerate(zip(pat, (SUBJECT, PREDICATE, OBJECT))):
        if is_var(v):
            if v.name and v.name in names:
                continue
            names.append(v.name)
            roles.append(role)
            idx.append(i)
    s, p, o = pat
    if is_var(p) and p.name and p.name in (getattr(s, "name", None), getattr(o, "name", None)):
        raise InputError("a variable cannot be both predicate and node")
    stats = {}
    triples = store.resolve(pat, stats=stats)
    # a variable repeated within the pattern must bind the same term
    if is_var(s) and is_var(o) and s.name and s.name == o.name:
        triples = [t for t in triples if t[0] == t[2] and t[0] < store.n_so]
    if not idx:
        names, roles, idx = ["s", "p", "o"], [SUBJECT, PREDICATE, OBJECT], [0, 1, 2]
    rows = [tuple(t[i] for i in idx) for t in triples]
    return names, roles, rows, "pattern", stats


def _join_rows(store, left, right, strategy):
    # check the variable-sharing rule before any term lookup
    shape = [TriplePattern(*(v if is_var(v) else 0 for v in pat)) for pat in (left, right)]
    classify_join(JoinQuery(*shape))
    q = JoinQuery(store.encode_pattern(*left), store.encode_pattern(*right))
    stats = {}
    res = join(store, q, strategy, stats)
    return list(q.variables), list(q.column_roles), res.rows, res.strategy, stats


def cmd_query(args, out):
    store = TripleStore.load(args.store)
    try:
        patterns = parse_query(args.query)
    except ParseError as exc:
        raise InputError(f"malformed query: {exc}") from None
    t0 = time.perf_counter()
    try:
        if len(patterns) == 1:
            names, roles, rows, strategy, stats = _pattern_rows(store, patterns[0])
        else:
            names, roles, rows, strategy, stats = _join_rows(store, *patterns, args.strategy)
    except NotFoundError as exc:
        log.info("%s; empty result", exc)
        names, roles, rows, strategy, stats = [], [], [], "none", {}
    elapsed = time.perf_counter() - t0
    shown = rows if args.limit is None else rows[:args.limit]
    if names:
        out.write("\t".join("?" + n if n else "?" for n in names) + "\n")
    d = store.dictionary
    for row in shown:
        if args.ids:
            out.write("\t".join(str(d.external_id(v)) for v in row) + "\n")
        else:
            out.write("\t".join(_escape(to_ntriples(d.decode(v, r)))
                                for v, r in zip(row, roles)) + "\n")
    if args.stats:
        nodes = stats.get("nodes_visited", 0)
        sys.stderr.write(f"elapsed_ms\t{elapsed * 1000:.3f}\ncount\t{len(rows)}\n"
                         f"strategy\t{strategy}\nnodes_visited\t{nodes}\n")
    return EXIT_OK


# --- other commands -----------------------------------------------------------

def _config(args):
    try:
        return K2Config(args.k_upper, args.upper_levels, args.k_lower, args.leaf_size)
    except InputError as exc:
        raise UsageError(str(exc)) from None


def cmd_build(args, out):
    diagnostics = []
    store = build_pipeline(args.input, _config(args), args.strict, diagnostics)
    size = store.save(args.output)
    c = store.dictionary.counts()
    out.write(f"triples\t{len(store)}\n")
    for k in ("SO", "S", "O", "P"):
        out.write(f"|{k}|\t{c[k]}\n")
    for k, v in store.component_sizes().items():
        out.write(f"bytes.{k}\t{v}\n")
    out.write(f"bytes.total\t{size}\n")
    if diagnostics:
        out.write(f"skipped_lines\t{len(diagnostics)}\n")
    return EXIT_OK


def cmd_info(args, out):
    store = TripleStore.load(args.store)
    c = store.dictionary.counts()
    cfg = store.config
    out.write(f"triples\t{len(store)}\n")
    for k in ("SO", "S", "O", "P"):
        out.write(f"|{k}|\t{c[k]}\n")
    out.write(f"n_prime\t{store.n_prime}\n")
    out.write(f"config\tk_upper={cfg.k_upper} upper_levels={cfg.upper_levels} "
              f"k_lower={cfg.k_lower} leaf_size={cfg.leaf_size}\n")
    for k, v in store.component_sizes().items():
        out.write(f"bytes.{k}\t{v}\n")
    if args.predicates:
        for p, n in enumerate(store.counts):
            out.write(f"predicate\t{to_ntriples(store.dictionary.decode(p, PREDICATE))}\t{n}\n")
    return EXIT_OK


def cmd_bench(args, out):
    store = TripleStore.load(args.store)
    notes = []
    try:
        run_bench(store, args.workload, args.seed, out, notes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for note in notes:
        sys.stderr.write(f"note: {note}\n")
    return EXIT_OK


def make_parser():
    p = _Parser(prog="k2triples", description="Compressed RDF store over k2-trees.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="build a store from N-Triples (optionally gzipped)")
    b.add_argument("input")
    b.add_argument("output")
    b.add_argument("--strict", action="store_true", help="abort on the first malformed line")
    d = K2Config()
    b.add_argument("--k-upper", type=int, default=d.k_upper)
    b.add_argument("--upper-levels", type=int, default=d.upper_levels)
    b.add_argument("--k-lower", type=int, default=d.k_lower)
    b.add_argument("--leaf-size", type=int, default=d.leaf_size)
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="resolve a triple pattern or a two-pattern join")
    q.add_argument("store")
    q.add_argument("query")
    q.add_argument("--strategy", default="auto",
                   choices=["auto", "chain", "independent", "interactive"])
    q.add_argument("--limit", type=int, default=None)
    q.add_argument("--ids", action="store_true", help="print 1-based IDs instead of terms")
    q.add_argument("--stats", action="store_true", help="print timing and counters on stderr")
    q.set_defaults(func=cmd_query)

    bn = sub.add_parser("bench", help="time random workloads; CSV on stdout")
    bn.add_argument("store")
    bn.add_argument("workload", nargs="+", help='e.g. "patterns n=50" or "joins n=20"')
    bn.add_argument("--seed", type=int, default=0)
    bn.set_defaults(func=cmd_bench)

    i = sub.add_parser("info", help="print store statistics")
    i.add_argument("store")
    i.add_argument("--predicates", action="store_true", help="list per-predicate counts")
    i.set_defaults(func=cmd_info)
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    level = getattr(logging, os.environ.get("K2T_LOG", "").upper(), None)
    if isinstance(level, int):
        logging.basicConfig(level=level, stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")
    args = make_parser().parse_args(argv)
    if getattr(args, "limit", None) is not None and args.limit < 0:
        sys.stderr.write("k2triples: error: --limit must be >= 0\n")
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"k2triples: error: {exc}\n")
        return EXIT_USAGE
    except (OSError, FormatError) as exc:
        sys.stderr.write(f"k2triples: error: {exc}\n")
        return EXIT_IO
    except ParseError as exc:
        # only the build pipeline raises ParseError here (strict mode)
        sys.stderr.write(f"k2triples: error: {exc}\n")
        return EXIT_IO
    except InputError as exc:
        sys.stderr.write(f"k2triples: error: {exc}\n")
        return EXIT_QUERY


if __name__ == "__main__":
    sys.exit(main())
