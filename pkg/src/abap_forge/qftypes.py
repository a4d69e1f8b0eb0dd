"""Quantifier-free 1-types with parameters: canonical forms, enumeration,
admissibility, and the equivariant type order used to break placement ties.

A type is stored as a sorted tuple of literals ``(kind, param)`` about one
free point x:

    LT[a]  : a < x          GT[b]  : x < b
    PLT[c] : c <| x         PGT[d] : x <| d      INC[e] : x, e <|-incomparable
    ARL[a] : a -> x         ARG[b] : x -> b
    ADJ[c] : x ~ c          NADJ[d]: x !~ d

plus a ``fresh`` flag for equivalence classes ("x lies in a brand-new class",
i.e. x !~ y for every y in the window).  Canonical types drop redundant and
auto-realized literals (NADJ, INC, dominated order bounds); the enumeration
emits exactly the canonical families each construction plants witness chains
for.

The type order compares the literal-kind shape first (fixed rank below), then
parameter slots via the structure's own order: < where the class is linearly
ordered, -> on plain tournaments.  Both are preserved by automorphisms, which
is what makes the placement tie-breaks equivariant.
"""

from __future__ import annotations

import functools
import itertools
import weakref
from dataclasses import dataclass, field

from .tags import (ADJ, ARROW, LT, TRI, BOUNDED_EQUIV, CONVEX_EQUIV, GRAPH,
                   KN_FREE, LINEAR, LINEXT, LOCAL, ORDERED_GRAPH,
                   ORDERED_KN_FREE, ORDERED_LINEAR, ORDERED_LOCAL, ClassTag,
                   ConfigError)
from .terms import Term, sort_terms, term_id, term_key

K_LT, K_GT = "LT", "GT"
K_PLT, K_PGT, K_INC = "PLT", "PGT", "INC"
K_ARL, K_ARG = "ARL", "ARG"
K_ADJ, K_NADJ = "ADJ", "NADJ"

KIND_RANK = {K_LT: 0, K_GT: 1, K_PLT: 2, K_PGT: 3,
             K_ARL: 4, K_ARG: 5, K_ADJ: 6, K_NADJ: 7, K_INC: 8}
_FRESH_RANK = 9

Lit = tuple[str, Term]


@dataclass(frozen=True, eq=False)
class AdmissibleType:
    lits: tuple[Lit, ...]
    fresh: bool = False

    def __hash__(self) -> int:
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.lits, self.fresh))
            object.__setattr__(self, "_h", h)
        return h

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (isinstance(other, AdmissibleType) and self.fresh == other.fresh
                and self.lits == other.lits)

    def encoding(self) -> str:
        return _encode(self)

    def shape(self) -> tuple[int, ...]:
        ranks = tuple(KIND_RANK[k] for k, _ in self.lits)
        return ranks + ((_FRESH_RANK,) if self.fresh else ())

    def params(self) -> tuple[Term, ...]:
        return tuple(p for _, p in self.lits)

    def of_kind(self, kind: str) -> tuple[Term, ...]:
        return tuple(p for k, p in self.lits if k == kind)

    def one(self, kind: str) -> Term | None:
        got = self.of_kind(kind)
        if len(got) > 1:
            raise ConfigError(f"type {self.encoding()} has several {kind} slots")
        return got[0] if got else None

    # Anchors, in the sense each construction uses them.
    @property
    def lt_anchor(self) -> Term | None:
        return self.one(K_LT)

    @property
    def lt_upper(self) -> Term | None:
        return self.one(K_GT)

    @property
    def tri_anchor(self) -> Term | None:
        return self.one(K_PLT)

    @property
    def tri_upper(self) -> Term | None:
        return self.one(K_PGT)

    @property
    def arl_chain(self) -> tuple[Term, ...]:
        return self.of_kind(K_ARL)

    @property
    def arg_chain(self) -> tuple[Term, ...]:
        return self.of_kind(K_ARG)

    @property
    def adj_set(self) -> tuple[Term, ...]:
        return self.of_kind(K_ADJ)

    @property
    def adj_anchor(self) -> Term | None:
        return self.one(K_ADJ)

    def __repr__(self) -> str:
        return f"T<{self.encoding()}>"


@functools.lru_cache(maxsize=None)
def _encode(tau: AdmissibleType) -> str:
    parts = [f"{k}[{term_id(p)}]" for k, p in tau.lits]
    if tau.fresh:
        parts.append("FRESH")
    return ";".join(parts)


# ---------------------------------------------------------------------------
# small relation helpers


def _leq(S, sym: str, u: Term, v: Term) -> bool:
    return u == v or S.rel(sym, u, v)


def _max_by(S, sym: str, items) -> Term:
    it = list(items)
    top = it[0]
    for u in it[1:]:
        if S.rel(sym, top, u):
            top = u
    return top


def _min_by(S, sym: str, items) -> Term:
    it = list(items)
    bot = it[0]
    for u in it[1:]:
        if S.rel(sym, u, bot):
            bot = u
    return bot


_memo_store = weakref.WeakKeyDictionary()


def _memo(S, universe) -> dict:
    """Per-structure scratch cache for window-derived data (class partition,
    order ranks).  Keyed on the structure; reset when the universe changes."""
    entry = _memo_store.get(S)
    if entry is None or entry["n"] != len(universe):
        entry = {"n": len(universe)}
        try:
            _memo_store[S] = entry
        except TypeError:  # unhashable/unweakrefable: skip caching
            pass
    return entry


def class_blocks(S, universe) -> list[list[Term]]:
    """~-classes of the window, each sorted by <, blocks sorted by their min."""
    memo = _memo(S, universe)
    if "blocks" not in memo:
        blocks: list[list[Term]] = []
        for t in universe:
            for blk in blocks:
                if S.rel(ADJ, t, blk[0]) or t == blk[0]:
                    blk.append(t)
                    break
            else:
                blocks.append([t])
        out = [sorted(blk, key=lambda u: _lt_rank(S, universe, u))
               for blk in blocks]
        out.sort(key=lambda blk: _lt_rank(S, universe, blk[0]))
        memo["blocks"] = out
        memo["block_of"] = {t: blk for blk in out for t in blk}
    return memo["blocks"]


def class_members(S, universe, t: Term) -> list[Term]:
    class_blocks(S, universe)
    return _memo(S, universe)["block_of"][t]


def _lt_rank(S, universe, t: Term) -> int:
    memo = _memo(S, universe)
    ranks = memo.get("ltrank")
    if ranks is None:
        if hasattr(S, "rank_of") and LT in getattr(S, "tag").symbols:
            ranks = {u: S.rank_of(LT, u) for u in universe}
        else:
            ranks = {u: sum(1 for v in universe if S.rel(LT, v, u))
                     for u in universe}
        memo["ltrank"] = ranks
    return ranks[t]


def class_min(S, universe, t: Term) -> Term:
    """<-least member of t's ~-class within the window (equivariant anchor)."""
    return class_members(S, universe, t)[0]


def _chain_sorted(S, items) -> list[Term]:
    """Arrange a tournament subset source-to-sink (anchor = last slot when the
    set is a chain; deterministic either way)."""
    it = list(items)
    wins = {u: sum(1 for v in it if v != u and S.rel(ARROW, u, v)) for u in it}
    return sorted(it, key=lambda u: (-wins[u], term_key(u)))


def is_chain(S, items) -> bool:
    it = list(items)
    for u, v, w in itertools.permutations(it, 3):
        if S.rel(ARROW, u, v) and S.rel(ARROW, v, w) and S.rel(ARROW, w, u):
            return False
    for u, v in itertools.combinations(it, 2):
        if not (S.rel(ARROW, u, v) or S.rel(ARROW, v, u)):
            return False
    return True


# ---------------------------------------------------------------------------
# canonicalization


def canonical_type(S, universe, tag: ClassTag, lits, fresh: bool = False
                   ) -> AdmissibleType | None:
    """Reduce a literal set to canonical form over ``S`` (None = inconsistent).

    Reductions: lower sets collapse to their maximum and upper sets to their
    minimum per order coordinate; <|-bounds fold into the <-bounds (a point
    below x in <| is below it in < too) and shrink to antichains; adjacency
    anchors collapse to the <-least member of their class; NADJ/INC literals
    are consistency-checked and dropped (exact-profile witnesses realize them
    for free).
    """
    groups: dict[str, list[Term]] = {}
    for kind, p in lits:
        groups.setdefault(kind, []).append(p)
    for kind in groups:
        groups[kind] = _dedup(groups[kind])

    kind_set = set(groups)
    allowed = _allowed_kinds(tag)
    if fresh and not tag.is_equiv:
        raise ConfigError("fresh flag only applies to equivalence classes")
    if not kind_set <= allowed:
        raise ConfigError(
            f"literal kinds {sorted(kind_set - allowed)} not in signature of {tag}")

    out: list[Lit] = []

    if tag.has_lt:
        lo = list(groups.get(K_LT, ()))
        hi = list(groups.get(K_GT, ()))
        if tag.kind == LINEXT:
            lo += groups.get(K_PLT, ())
            hi += groups.get(K_PGT, ())
        a = _max_by(S, LT, lo) if lo else None
        b = _min_by(S, LT, hi) if hi else None
        if a is not None and b is not None and not S.rel(LT, a, b):
            return None
        if a is not None:
            out.append((K_LT, a))
        if b is not None:
            out.append((K_GT, b))

    if tag.kind == ORDERED_LINEAR:
        c = _max_by(S, TRI, groups[K_PLT]) if K_PLT in groups else None
        d = _min_by(S, TRI, groups[K_PGT]) if K_PGT in groups else None
        if c is not None and d is not None and not S.rel(TRI, c, d):
            return None
        if c is not None:
            out.append((K_PLT, c))
        if d is not None:
            out.append((K_PGT, d))

    if tag.kind == LINEXT:
        cset = groups.get(K_PLT, [])
        dset = groups.get(K_PGT, [])
        for c, d in itertools.product(cset, dset):
            if c == d or S.rel(TRI, d, c):
                return None
        # keep <|-maximal lower bounds and <|-minimal upper bounds
        cmax = [c for c in cset if not any(S.rel(TRI, c, c2) for c2 in cset)]
        dmin = [d for d in dset if not any(S.rel(TRI, d2, d) for d2 in dset)]
        for e in groups.get(K_INC, ()):
            if any(_leq(S, TRI, e, c) for c in cset):
                return None
            if any(_leq(S, TRI, d, e) for d in dset):
                return None
        key = lambda t: (_lt_rank(S, universe, t), term_key(t))
        out.extend((K_PLT, c) for c in sorted(cmax, key=key))
        out.extend((K_PGT, d) for d in sorted(dmin, key=key))

    if tag.has_arrow:
        aset = groups.get(K_ARL, [])
        bset = groups.get(K_ARG, [])
        if set(aset) & set(bset):
            return None
        out.extend((K_ARL, t) for t in _chain_sorted(S, aset))
        out.extend((K_ARG, t) for t in _chain_sorted(S, bset))

    if tag.is_equiv:
        anchors = groups.get(K_ADJ, [])
        if fresh and anchors:
            raise ConfigError("a fresh-class type cannot carry ADJ literals")
        if anchors:
            for u, v in itertools.combinations(anchors, 2):
                if not S.rel(ADJ, u, v):
                    return None
            rep = class_min(S, universe, anchors[0])
            for d in groups.get(K_NADJ, ()):
                if d == rep or S.rel(ADJ, d, rep):
                    return None
            out.append((K_ADJ, rep))
        elif fresh:
            pass  # freshness recorded via the flag, no slot
    elif tag.has_adj:
        cset = groups.get(K_ADJ, [])
        for d in groups.get(K_NADJ, ()):
            if d in cset:
                return None
        if tag.has_lt:
            key = lambda t: (_lt_rank(S, universe, t), term_key(t))
        else:
            key = term_key
        out.extend((K_ADJ, c) for c in sorted(cset, key=key))

    out.sort(key=lambda lit: KIND_RANK[lit[0]])
    # stable within kind: the per-kind appends above already fixed slot order
    return AdmissibleType(tuple(_stable_kind_order(out)), fresh=fresh)


def _stable_kind_order(lits: list[Lit]) -> list[Lit]:
    # python sort is stable, so sorting only on kind keeps slot order per kind
    return lits


def _dedup(items: list[Term]) -> list[Term]:
    seen, out = set(), []
    for t in items:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def _allowed_kinds(tag: ClassTag) -> set[str]:
    allowed: set[str] = set()
    if tag.has_lt:
        allowed |= {K_LT, K_GT}
    if tag.has_tri:
        allowed |= {K_PLT, K_PGT}
        if tag.kind == LINEXT:
            allowed.add(K_INC)
    if tag.has_arrow:
        allowed |= {K_ARL, K_ARG}
    if tag.has_adj:
        allowed |= {K_ADJ, K_NADJ}
    return allowed


# ---------------------------------------------------------------------------
# admissibility (closed form per class; the brute one-point search in the
# test suite is the independent route)


def is_admissible(tau: AdmissibleType, S, tag: ClassTag | None = None,
                  universe=None) -> bool:
    tag = tag or S.tag
    universe = list(universe) if universe is not None else list(S.default_universe())

    if tag.has_lt and not _order_consistent(S, LT, tau.lt_anchor, tau.lt_upper):
        return False

    kind = tag.kind
    if kind == LINEAR:
        return True

    if kind == ORDERED_LINEAR:
        return _order_consistent(S, TRI, tau.tri_anchor, tau.tri_upper)

    if kind in (LOCAL, ORDERED_LOCAL):
        return _local_part_admissible(S, tau)

    if kind in (GRAPH, KN_FREE, ORDERED_GRAPH, ORDERED_KN_FREE):
        bound = tag.clique_bound
        if bound is None:
            return True
        return not _has_clique(S, tau.adj_set, bound - 1)

    if kind == LINEXT:
        cset, dset = tau.of_kind(K_PLT), tau.of_kind(K_PGT)
        # a point between c and d forces c <| d already in the base
        return all(S.rel(TRI, c, d) for c in cset for d in dset)

    if kind == CONVEX_EQUIV:
        return _convex_admissible(S, universe, tau)

    if kind == BOUNDED_EQUIV:
        if tau.fresh:
            bound = tag.class_bound
            return bound is None or len(class_blocks(S, universe)) < bound
        if tau.adj_anchor is None and tag.class_bound is not None:
            # ~-silent: the witness may join any existing class
            return len(class_blocks(S, universe)) >= 1
        return True

    raise ConfigError(f"unhandled tag {tag}")


def _order_consistent(S, sym: str, a: Term | None, b: Term | None) -> bool:
    if a is None or b is None:
        return True
    return S.rel(sym, a, b)


def _has_clique(S, verts, size: int) -> bool:
    if size <= 1:
        return len(verts) >= size
    for combo in itertools.combinations(verts, size):
        if all(S.rel(ADJ, u, v) for u, v in itertools.combinations(combo, 2)):
            return True
    return False


def _local_part_admissible(S, tau: AdmissibleType) -> bool:
    A, B = tau.arl_chain, tau.arg_chain
    if not A and not B:
        return True
    if set(A) & set(B):
        return False
    if not (is_chain(S, A) and is_chain(S, B)):
        return False
    # every parameter keeps linearly ordered in/out sets after x joins:
    # within pred(v) (v in B) and succ(v) (v in A), the A-side must beat the
    # B-side pointwise or a 3-cycle through x appears.
    P = list(A) + list(B)
    for v in B:
        ain = [u for u in A if u != v and S.rel(ARROW, u, v)]
        bin_ = [w for w in B if w != v and S.rel(ARROW, w, v)]
        for u, w in itertools.product(ain, bin_):
            if not S.rel(ARROW, u, w):
                return False
    for v in A:
        aout = [u for u in A if u != v and S.rel(ARROW, v, u)]
        bout = [w for w in B if w != v and S.rel(ARROW, v, w)]
        for u, w in itertools.product(aout, bout):
            if not S.rel(ARROW, u, w):
                return False
    del P
    return True


def _convex_admissible(S, universe, tau: AdmissibleType) -> bool:
    a, b = tau.lt_anchor, tau.lt_upper
    if tau.fresh:
        if a is None:
            return True  # below the window: a fresh bottom class
        cls = class_members(S, universe, a)
        return all(not S.rel(LT, a, e) for e in cls)  # a is its class's <-max
    c = tau.adj_anchor
    if c is None:
        # ~-silent: admissible iff some anchored or fresh realization exists
        for blk in class_blocks(S, universe):
            probe = AdmissibleType(tau.lits + ((K_ADJ, blk[0]),))
            probe = canonical_type(S, universe, ClassTag(CONVEX_EQUIV), probe.lits)
            if probe is not None and _convex_admissible(S, universe, probe):
                return True
        return _convex_admissible(S, universe,
                                  AdmissibleType(tau.lits, fresh=True))
    cls = class_members(S, universe, c)
    if a is not None and a in cls:
        return True
    if b is not None and b in cls:
        return True
    below = lambda e: a is None or S.rel(LT, a, e)
    above = lambda e: b is None or S.rel(LT, e, b)
    return all(below(e) and above(e) for e in cls)


# ---------------------------------------------------------------------------
# the type order (linear on ordered structures, tournament on tournaments)


def compare_types(t1: AdmissibleType, t2: AdmissibleType, S) -> int:
    """Total comparison: shape rank tuple first, then parameter slots via the
    structure's < (linear mode) or -> (tournament mode).  Returns -1/0/+1;
    0 only for the identical canonical type."""
    mode = S.tag.prec_mode
    if mode is None:
        raise ConfigError(f"{S.tag} carries neither a linear order nor ->")
    s1, s2 = t1.shape(), t2.shape()
    if s1 != s2:
        return -1 if s1 < s2 else 1
    sym = LT if mode == "linear" else ARROW
    for (_, u), (_, v) in zip(t1.lits, t2.lits):
        if u == v:
            continue
        return -1 if S.rel(sym, u, v) else 1
    return 0


def sort_types(types, S) -> list[AdmissibleType]:
    if S.tag.prec_mode == "linear":
        return sorted(types, key=functools.cmp_to_key(
            lambda x, y: compare_types(x, y, S)))
    # tournaments admit no global sort; plain graphs need none — use the
    # deterministic fallback (shape, then term order) for stable output
    return sorted(types, key=lambda t: (t.shape(),
                                        tuple(term_key(p) for p in t.params())))


def map_type(f, tau: AdmissibleType) -> AdmissibleType:
    """Push a type through a morphism: parameters map pointwise and the image
    is re-canonicalized over the codomain (class anchors re-minimized, chains
    re-sorted).  Isomorphisms preserve canonical slot order, so when an image
    parameter falls outside the codomain window (a clipped chain index) the
    structural image is returned as-is."""
    target = f.codomain
    mapped = []
    for kind, p in tau.lits:
        q = f.fwd(p)
        if q is None:
            raise ConfigError(f"morphism undefined on parameter {term_id(p)}")
        mapped.append((kind, q))
    structural = AdmissibleType(tuple(mapped), fresh=tau.fresh)
    if not all(target.supports(q) for _, q in mapped):
        return structural
    out = canonical_type(target, target.default_universe(), target.tag,
                         mapped, fresh=tau.fresh)
    if out is None:
        raise ConfigError("mapped type became inconsistent; morphism is not "
                          "relation-preserving")
    return out


# ---------------------------------------------------------------------------
# enumeration


def enumerate_types(S, window) -> list[AdmissibleType]:
    """All admissible canonical types over the window with at most ``window.p``
    distinct parameters, duplicate-free, sorted by the type order."""
    p = window.p
    if p == 0:
        return []
    U = S.window_terms(window)
    tag = S.tag
    fams = {
        LINEAR: _enum_linear,
        ORDERED_LINEAR: _enum_ordered_linear,
        LOCAL: _enum_local,
        ORDERED_LOCAL: _enum_ordered_local,
        GRAPH: _enum_graph,
        KN_FREE: _enum_graph,
        ORDERED_GRAPH: _enum_graph,
        ORDERED_KN_FREE: _enum_graph,
        LINEXT: _enum_linext,
        CONVEX_EQUIV: _enum_equiv,
        BOUNDED_EQUIV: _enum_equiv,
    }
    seen = set()
    uniq = []
    for cand in fams[tag.kind](S, U, p, tag):
        tau = canonical_type(S, U, tag, cand.lits, fresh=cand.fresh)
        if tau is None or len(set(tau.params())) > p:
            continue
        e = tau.encoding()
        if e in seen:
            continue
        seen.add(e)
        if is_admissible(tau, S, tag, U):
            uniq.append(tau)
    return sort_types(uniq, S)


def _bounded_product(U, p, families):
    """Concatenations, one part per family, whose distinct parameters number
    at most p.  Parts are (lits, param-frozenset); families are combined via
    exact-extension lookups so the work stays proportional to the output."""
    indexed = []
    for fam in families:
        idx: dict[frozenset, list] = {}
        for lits, ps in fam:
            idx.setdefault(ps, []).append(lits)
        indexed.append(idx)
    states: list[tuple[tuple, frozenset]] = [((), frozenset())]
    for idx in indexed:
        fresh_states = []
        for lits0, A in states:
            budget = p - len(A)
            rest = [u for u in U if u not in A]
            inside = list(A)
            for extra_size in range(budget + 1):
                for extra in itertools.combinations(rest, extra_size):
                    for ksize in range(len(inside) + 1):
                        for kept in itertools.combinations(inside, ksize):
                            key = frozenset(extra) | frozenset(kept)
                            for lits1 in idx.get(key, ()):
                                fresh_states.append((lits0 + lits1, A | key))
        states = fresh_states
    return [lits for lits, _ in states]


def _order_forms(S, U, sym: str, kinds=(K_LT, K_GT)):
    """Anchored interval forms (a, b), open forms (a, None), and the
    below-the-minimum form (None, b0) when the structure has a minimum;
    each as (lits, params) parts."""
    klo, khi = kinds
    forms: list[tuple[tuple[Lit, ...], frozenset]] = []
    for a in U:
        forms.append(((((klo, a)),), frozenset((a,))))
        for b in U:
            if S.rel(sym, a, b):
                forms.append((((klo, a), (khi, b)), frozenset((a, b))))
    if U and S.has_minimum(sym):
        b0 = _min_by(S, sym, U)
        forms.append(((((khi, b0)),), frozenset((b0,))))
    return forms


def _subset_parts(U, p, kind, include_empty=True):
    parts = [((), frozenset())] if include_empty else []
    for size in range(1, p + 1):
        for combo in itertools.combinations(U, size):
            parts.append((tuple((kind, c) for c in combo), frozenset(combo)))
    return parts


def _chain_parts(S, U, p, kind):
    """->-chains with 1..p vertices (plus the empty side)."""
    parts = [((), frozenset())]
    for size in range(1, p + 1):
        for combo in itertools.combinations(U, size):
            if is_chain(S, combo):
                parts.append((tuple((kind, c) for c in _chain_sorted(S, combo)),
                              frozenset(combo)))
    return parts


def _enum_linear(S, U, p, tag):
    return [AdmissibleType(f) for f, ps in _order_forms(S, U, LT)
            if len(ps) <= p]


def _enum_ordered_linear(S, U, p, tag):
    fams = [_order_forms(S, U, LT), _order_forms(S, U, TRI, (K_PLT, K_PGT))]
    return [AdmissibleType(lits) for lits in _bounded_product(U, p, fams)]


def _enum_local(S, U, p, tag):
    fams = [_chain_parts(S, U, p, K_ARL), _chain_parts(S, U, p, K_ARG)]
    return [AdmissibleType(lits) for lits in _bounded_product(U, p, fams)
            if lits]


def _enum_ordered_local(S, U, p, tag):
    fams = [_order_forms(S, U, LT), _chain_parts(S, U, p, K_ARL),
            _chain_parts(S, U, p, K_ARG)]
    return [AdmissibleType(lits) for lits in _bounded_product(U, p, fams)
            if any(k in (K_ARL, K_ARG) for k, _ in lits)]


def _enum_graph(S, U, p, tag):
    csets = _subset_parts(U, p, K_ADJ)
    if tag.has_lt:
        fams = [_order_forms(S, U, LT), csets]
        return [AdmissibleType(lits) for lits in _bounded_product(U, p, fams)]
    # plain graphs keep the empty-profile chain: it alone witnesses the
    # purely-negative adjacency types
    return [AdmissibleType(lits) for lits, _ in csets]


def _enum_linext(S, U, p, tag):
    fams = [_order_forms(S, U, LT), _subset_parts(U, p, K_PLT),
            _subset_parts(U, p, K_PGT)]
    return [AdmissibleType(lits) for lits in _bounded_product(U, p, fams)]


def _enum_equiv(S, U, p, tag):
    anchors = [(((K_ADJ, blk[0]),), frozenset((blk[0],)))
               for blk in class_blocks(S, U)]
    forms = _order_forms(S, U, LT)
    out = [AdmissibleType(lits)
           for lits in _bounded_product(U, p, [forms, anchors])]
    out.extend(AdmissibleType(f, fresh=True) for f, ps in forms if len(ps) <= p)
    return out
