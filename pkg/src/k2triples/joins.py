"""Pairwise joins of two triple patterns sharing one variable.

Joins are classified by how many predicates are unbound (rows) and how
many non-joined nodes are unbound (columns)::

                     0 var nodes   1 var node   2 var nodes
    0 var preds          A             B             C
    1 var pred           D           E1 / E2         F
    2 var preds          G             H          (I: rejected)

E1: the side with the unbound predicate binds its node. E2: that side is
all variables while the other binds both predicate and node.

Three evaluation strategies are provided:

* chain: resolve one side, deduplicate its join values, substitute each
  into the other side;
* independent: resolve both sides, sort by the join value, merge;
* interactive: descend the k2-trees of both sides in lock step, keeping
  only join-value intervals where both sides still have a 1.

Output rows are ``(X, left unbound..., right unbound...)`` with unbound
components in s, p, o order, sorted ascending.
"""

import heapq
from dataclasses import dataclass, field

from .dictionary import OBJECT, PREDICATE, SUBJECT
from .errors import InputError, StrategyError, UnsupportedJoinError
from .store import TriplePattern, is_var

CLASSES = ("A", "B", "C", "D", "E1", "E2", "F", "G", "H")
INDEPENDENT_CLASSES = frozenset({"A", "B", "C", "D", "E1", "G"})
STRATEGIES = ("chain", "independent", "interactive", "auto")
# chain is preferred when one side is expected to be this many times smaller
CHAIN_RATIO = 16


@dataclass(frozen=True)
class _Side:
    pattern: TriplePattern
    x_role: str
    pred: object
    node: object
    out_names: tuple

    @property
    def bound(self):
        return (self.pred is not None) + (self.node is not None)

    def project(self, triple):
        """(x, unbound values) of a matching (s, p, o) triple."""
        s, p, o = triple
        if self.x_role == SUBJECT:
            rest = ((p,) if self.pred is None else ()) + ((o,) if self.node is None else ())
            return s, rest
        rest = ((s,) if self.node is None else ()) + ((p,) if self.pred is None else ())
        return o, rest

    @property
    def out_roles(self):
        if self.x_role == SUBJECT:
            return ((PREDICATE,) if self.pred is None else ()) + \
                ((OBJECT,) if self.node is None else ())
        return ((SUBJECT,) if self.node is None else ()) + \
            ((PREDICATE,) if self.pred is None else ())

    def substitute(self, x):
        s, p, o = self.pattern
        return TriplePattern(x, p, o) if self.x_role == SUBJECT else TriplePattern(s, p, x)


def _names(pattern):
    return [v.name for v in pattern if is_var(v) and v.name]


def _make_side(pattern, join_var, tag):
    s, p, o = pattern
    if is_var(s) and s.name == join_var:
        x_role, node = SUBJECT, o
    else:
        x_role, node = OBJECT, s
    out = []
    fields = (("s", s), ("p", p), ("o", o))
    for f, v in fields:
        if is_var(v) and not (v.name == join_var and f == x_role[0]):
            out.append(v.name or f"_{tag}{f}")
    return _Side(pattern, x_role, None if is_var(p) else p,
                 None if is_var(node) else node, tuple(out))


@dataclass(frozen=True)
class JoinQuery:
    """Two triple patterns sharing exactly one (named) variable."""

    left: TriplePattern
    right: TriplePattern
    join_var: str = None

    def __post_init__(self):
        for side in ("left", "right"):
            pat = getattr(self, side)
            if not isinstance(pat, TriplePattern):
                pat = TriplePattern(*pat)
                object.__setattr__(self, side, pat)
            names = _names(pat)
            if len(names) != len(set(names)):
                raise InputError(f"{side} pattern repeats a variable")
        shared = set(_names(self.left)) & set(_names(self.right))
        if len(shared) != 1:
            raise InputError(f"patterns must share exactly one variable, got {sorted(shared)}")
        (x,) = shared
        if self.join_var is not None and self.join_var != x:
            raise InputError(f"join variable {self.join_var!r} is not the shared one ({x!r})")
        object.__setattr__(self, "join_var", x)
        for pat in (self.left, self.right):
            if is_var(pat.p) and pat.p.name == x:
                raise UnsupportedJoinError("joins on the predicate position are not supported")

    @property
    def sides(self):
        return _make_side(self.left, self.join_var, "l"), _make_side(self.right, self.join_var, "r")

    @property
    def join_axis(self):
        l, r = self.sides
        return l.x_role, r.x_role

    @property
    def variant(self):
        """'SS', 'OO', 'SO' or 'OS' (left role, right role)."""
        l, r = self.join_axis
        return l[0].upper() + r[0].upper()

    @property
    def variables(self):
        l, r = self.sides
        return (self.join_var,) + l.out_names + r.out_names

    @property
    def column_roles(self):
        """Dictionary role of each output column, for decoding."""
        l, r = self.sides
        return (l.x_role,) + l.out_roles + r.out_roles


@dataclass
class JoinResult:
    variables: tuple
    rows: list
    join_class: str
    strategy: str
    stats: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.rows)

    @property
    def x_values(self):
        """Distinct join-variable values, ascending."""
        return sorted({r[0] for r in self.rows})


def classify_join(q):
    l, r = q.sides
    var_preds = (l.pred is None) + (r.pred is None)
    var_nodes = (l.node is None) + (r.node is None)
    if var_preds == 0:
        return "ABC"[var_nodes]
    if var_preds == 1:
        if var_nodes == 1:
            vp = l if l.pred is None else r
            return "E1" if vp.node is not None else "E2"
        return "DEF"[var_nodes]
    if var_nodes == 2:
        raise UnsupportedJoinError("class I joins (all variables) are not supported")
    return "GH"[var_nodes]


def chain_starts(q):
    """Sides ('left'/'right') a chain evaluation may start from.

    The more bound side goes first; equally bound sides may go either way.
    """
    l, r = q.sides
    if l.bound > r.bound:
        return ("left",)
    if r.bound > l.bound:
        return ("right",)
    return ("left", "right")


def legal_strategies(q):
    cls = classify_join(q)
    out = ["chain"]
    if cls in INDEPENDENT_CLASSES:
        out.append("independent")
    out.append("interactive")
    return out


def _so_limit(store, l, r):
    return store.n_so if l.x_role != r.x_role else None


def _side_predicates(store, side):
    if side.pred is not None:
        return [side.pred]
    if side.node is None:
        return store.candidate_predicates()
    if side.x_role == SUBJECT:
        return store.candidate_predicates(o=side.node)
    return store.candidate_predicates(s=side.node)


def estimate_side(store, side):
    """Cheap cardinality estimate from per-predicate triple counts."""
    return sum(store.counts[p] for p in _side_predicates(store, side))


def distinct_sorted(values):
    """Distinct values, ascending, by merging the input's sorted runs."""
    runs = []
    start = 0
    for i in range(1, len(values)):
        if values[i] < values[i - 1]:
            runs.append(values[start:i])
            start = i
    if values:
        runs.append(values[start:])
    out = []
    for v in heapq.merge(*runs):
        if not out or out[-1] != v:
            out.append(v)
    return out


def _check_ids(store, q):
    for pat in (q.left, q.right):
        store._check(pat)


def _side_rows(store, side, so_limit, stats):
    rows = [side.project(t) for t in store.resolve(side.pattern, stats=stats)]
    if so_limit is not None:
        rows = [r for r in rows if r[0] < so_limit]
    return rows


def join_chain(store, q, start=None, stats=None):
    """Index join: resolve ``start`` side, substitute its X values."""
    cls = classify_join(q)
    _check_ids(store, q)
    stats = {} if stats is None else stats
    l, r = q.sides
    legal = chain_starts(q)
    if start is None:
        start = min(legal, key=lambda side: estimate_side(store, l if side == "left" else r))
    elif start not in legal:
        raise StrategyError(f"chain from the {start} side is not listed for class {cls}")
    first, second = (l, r) if start == "left" else (r, l)
    so_limit = _so_limit(store, l, r)
    first_rows = _side_rows(store, first, so_limit, stats)
    xs = distinct_sorted([x for x, _ in first_rows])
    by_x = {}
    for x, rest in first_rows:
        by_x.setdefault(x, []).append(rest)
    out = []
    probes = 0
    for x in xs:
        probes += 1
        for t in store.resolve(second.substitute(x), stats=stats):
            rest2 = second.project(t)[1]
            for rest1 in by_x[x]:
                if start == "left":
                    out.append((x,) + rest1 + rest2)
                else:
                    out.append((x,) + rest2 + rest1)
    out.sort()
    stats.update(probes=probes, chain_start=start)
    return JoinResult(q.variables, out, cls, "chain", stats)


def _merge_join(a, b):
    """Merge two lists of (x, rest) sorted by x."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        xa, xb = a[i][0], b[j][0]
        if xa < xb:
            i += 1
        elif xa > xb:
            j += 1
        else:
            i2 = i
            while i2 < len(a) and a[i2][0] == xa:
                i2 += 1
            j2 = j
            while j2 < len(b) and b[j2][0] == xa:
                j2 += 1
            for _, ra in a[i:i2]:
                for _, rb in b[j:j2]:
                    out.append((xa,) + ra + rb)
            i, j = i2, j2
    return out


def join_independent(store, q, stats=None):
    """Merge join over both fully resolved sides."""
    cls = classify_join(q)
    if cls not in INDEPENDENT_CLASSES:
        raise StrategyError(f"independent evaluation is not listed for class {cls}")
    _check_ids(store, q)
    stats = {} if stats is None else stats
    l, r = q.sides
    so_limit = _so_limit(store, l, r)
    # list.sort is adaptive: per-predicate runs already sorted by X merge cheaply
    a = sorted(_side_rows(store, l, so_limit, stats), key=lambda t: t[0])
    b = sorted(_side_rows(store, r, so_limit, stats), key=lambda t: t[0])
    out = _merge_join(a, b)
    out.sort()
    return JoinResult(q.variables, out, cls, "independent", stats)


@dataclass
class DescentSide:
    """One operand of a coordinated descent.

    ``x_axis`` is 'row' or 'col' (where the join value lives in the
    matrices); ``fixed`` optionally pins the other axis to one value.
    All trees of both sides must share n_prime and the level schedule.
    """

    trees: list
    x_axis: str
    fixed: object = None


def coordinated_descent(left, right, so_limit=None, trace=None, stats=None):
    """Lock-step descent over two sets of k2-trees.

    Yields ``(x, left_hits, right_hits)`` in ascending ``x`` where each hit
    list holds ``(tree_index, other_coordinate)`` pairs. ``trace`` is
    called as ``trace(event, level, x_lo, x_hi)`` with event 'pair' for a
    surviving interval pair and 'pruned' for a discarded one.
    """
    stats = {} if stats is None else stats
    trees = left.trees + right.trees
    if not left.trees or not right.trees:
        return
    ref = trees[0]
    ks, sides = ref.level_k, ref.level_sides
    for t in trees:
        if t.n_prime != ref.n_prime or t.level_k != ks:
            raise InputError("descent requires trees with a shared geometry")
    h = len(ks)
    kl = ref.config.leaf_size
    visited = [0]

    def group(side, entries, lvl):
        k, s = ks[lvl], sides[lvl]
        out = {}
        row_x = side.x_axis == "row"
        for ti, base, r0, c0 in entries:
            t = side.trees[ti]
            if not t.n_cells:
                continue
            data = t.T.packed
            if side.fixed is None:
                others = range(k)
            else:
                o = (side.fixed - (c0 if row_x else r0)) // s
                if not 0 <= o < k:
                    continue
                others = (o,)
            for xi in range(k):
                for o in others:
                    i, j = (xi, o) if row_x else (o, xi)
                    p = base + i * k + j
                    visited[0] += 1
                    if (data[p >> 3] >> (p & 7)) & 1:
                        out.setdefault(xi, []).append((ti, p, r0 + i * s, c0 + j * s))
        return out

    def leaf_hits(side, entries, lvl):
        hits = {}
        row_x = side.x_axis == "row"
        fixed = side.fixed
        for ti, p, r0, c0 in entries:
            t = side.trees[ti]
            w = t.leaf_word(t.child_base(p, lvl))
            while w:
                low = w & -w
                b = low.bit_length() - 1
                w ^= low
                rr, cc = r0 + b // kl, c0 + b % kl
                x, other = (rr, cc) if row_x else (cc, rr)
                if fixed is not None and other != fixed:
                    continue
                if so_limit is not None and x >= so_limit:
                    continue
                hits.setdefault(x, []).append((ti, other))
        return hits

    def descend(side, entries, lvl):
        return [(ti, side.trees[ti].child_base(p, lvl), r0, c0) for ti, p, r0, c0 in entries]

    stack = [(0, 0, [(i, 0, 0, 0) for i in range(len(left.trees))],
              [(i, 0, 0, 0) for i in range(len(right.trees))])]
    pairs = pruned = 0
    while stack:
        lvl, x_lo, le, re = stack.pop()
        s = sides[lvl]
        lg = group(left, le, lvl)
        rg = group(right, re, lvl) if lg else {}
        common = lg.keys() & rg.keys()
        for xi in sorted((lg.keys() | rg.keys()) - common):
            pruned += 1
            if trace:
                trace("pruned", lvl, x_lo + xi * s, x_lo + (xi + 1) * s)
        children = []
        for xi in sorted(common):
            lo = x_lo + xi * s
            if so_limit is not None and lo >= so_limit:
                pruned += 1
                if trace:
                    trace("pruned", lvl, lo, lo + s)
                continue
            pairs += 1
            if trace:
                trace("pair", lvl, lo, lo + s)
            if lvl + 1 < h:
                children.append((lvl + 1, lo, descend(left, lg[xi], lvl),
                                 descend(right, rg[xi], lvl)))
            else:
                children.append((None, lo, lg[xi], rg[xi]))
        stack.extend(reversed(children))
        while stack and stack[-1][0] is None:
            _, lo, lhit, rhit = stack.pop()
            lh = leaf_hits(left, lhit, h - 1)
            rh = leaf_hits(right, rhit, h - 1)
            for x in sorted(lh.keys() & rh.keys()):
                yield x, lh[x], rh[x]
    stats["nodes_visited"] = stats.get("nodes_visited", 0) + visited[0]
    stats["pairs"] = stats.get("pairs", 0) + pairs
    stats["pruned"] = stats.get("pruned", 0) + pruned


def _descent_side(store, side):
    preds = _side_predicates(store, side)
    return preds, DescentSide([store.trees[p] for p in preds],
                              "row" if side.x_role == SUBJECT else "col", side.node)


def _hit_rest(side, pred, other):
    if side.x_role == SUBJECT:
        return ((pred,) if side.pred is None else ()) + ((other,) if side.node is None else ())
    return ((other,) if side.node is None else ()) + ((pred,) if side.pred is None else ())


def join_interactive(store, q, stats=None, trace=None):
    """Coordinated descent over the trees of both sides."""
    cls = classify_join(q)
    _check_ids(store, q)
    stats = {} if stats is None else stats
    l, r = q.sides
    lpreds, lds = _descent_side(store, l)
    rpreds, rds = _descent_side(store, r)
    stats["trees"] = len(lpreds) + len(rpreds)
    out = []
    for x, lhits, rhits in coordinated_descent(lds, rds, _so_limit(store, l, r), trace, stats):
        lrest = [_hit_rest(l, lpreds[ti], other) for ti, other in lhits]
        rrest = [_hit_rest(r, rpreds[ti], other) for ti, other in rhits]
        for a in lrest:
            for b in rrest:
                out.append((x,) + a + b)
    out.sort()
    return JoinResult(q.variables, out, cls, "interactive", stats)


def choose_strategy(store, q):
    """Pick a strategy (and chain start) for ``auto``."""
    cls = classify_join(q)
    if cls in ("A", "G"):
        return "interactive", None
    l, r = q.sides
    el, er = estimate_side(store, l), estimate_side(store, r)
    small, big = ("left", "right") if el <= er else ("right", "left")
    es, eb = min(el, er), max(el, er)
    if es * CHAIN_RATIO <= eb and small in chain_starts(q):
        return "chain", small
    if cls in INDEPENDENT_CLASSES:
        return "independent", None
    return "interactive", None


def join(store, q, strategy="auto", stats=None):
    """Evaluate ``q`` with a named strategy or ``auto``."""
    if strategy not in STRATEGIES:
        raise StrategyError(f"unknown strategy {strategy!r}")
    cls = classify_join(q)
    start = None
    if strategy == "auto":
        strategy, start = choose_strategy(store, q)
    elif strategy not in legal_strategies(q):
        raise StrategyError(f"{strategy} evaluation is not listed for class {cls}")
    if strategy == "chain":
        return join_chain(store, q, start, stats)
    if strategy == "independent":
        return join_independent(store, q, stats)
    return join_interactive(store, q, stats)
