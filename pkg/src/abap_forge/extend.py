"""Witness-chain extension operators.

``extend`` plants, for every canonical admissible type over a window of the
base, a Z-indexed chain of witnesses, and answers every relation query about
the extended structure by a closed-form rule keyed on the type's anchors —
no infinite relation set is ever enumerated.  The per-family rule sets:

* linear coordinates: a witness chain lives in the gap immediately above its
  anchor (or below the minimum for the bottom form); gaps order positionally,
  ties inside one gap break by band / type order / chain index;
* tournaments (local orders): case (a) chains sit immediately after their
  predecessor anchor, case (b) chains immediately after the antipode of their
  successor anchor, with the four cross-case rules plus a type-order tie at
  coincident anchors;
* graph adjacency: a witness is adjacent to exactly its type's vertex set,
  never to another witness;
* partial orders: c <| x <| d generators, transitively closed — which
  collapses to "some upper bound of x sits <|-below some lower bound of y";
* equivalence classes: witnesses join their anchor's class or form fresh
  classes (one per type on the convex class, one shared on the bounded one),
  with convexity kept by banding the witnesses inside each order gap.

The independent route that checks these rules is in :mod:`abap_forge.oracle`.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .qftypes import (AdmissibleType, compare_types, enumerate_types, K_ADJ,
                      K_ARL, K_ARG, K_GT, K_LT, K_PGT, K_PLT)
from .structures import FiniteStructure, FiniteWindow
from .tags import (ADJ, ARROW, LT, TRI, BOUNDED_EQUIV, CONVEX_EQUIV, GRAPH,
                   KN_FREE, LINEAR, LINEXT, LOCAL, ORDERED_GRAPH,
                   ORDERED_KN_FREE, ORDERED_LINEAR, ORDERED_LOCAL, ClassTag,
                   ConfigError)
from .terms import Term, Wit, sort_terms


@dataclass(frozen=True)
class _LinearSlot:
    """Placement of one witness chain along one linear coordinate: the gap is
    named by its lower endpoint (None = below the window), and the band gives
    the within-gap grouping (only the convex class uses bands 1 and 2)."""
    gap: Term | None
    band: int = 0


class ExtensionStructure:
    """Lazily presented E(A): the base plus one witness chain per canonical
    admissible type, relations by closed-form comparators."""

    def __init__(self, base, window: FiniteWindow):
        self.base = base
        self.tag: ClassTag = base.tag
        self.window = window
        self.w = window.w
        self.stage = _stage_of(base) + 1
        self.base_window: list[Term] = list(base.window_terms(window))
        self.types: list[AdmissibleType] = enumerate_types(base, window)
        self.tindex: dict[AdmissibleType, int] = {t: i
                                                  for i, t in enumerate(self.types)}
        self._lt: list[_LinearSlot] | None = None
        self._tri: list[_LinearSlot] | None = None
        self._arrow_case: list[tuple[str, Term]] | None = None
        self._csets: list[frozenset[Term]] | None = None
        self._dsets: list[frozenset[Term]] | None = None
        self._equiv_anchor: list[Term | None] | None = None
        self._prec_cache: dict[tuple[int, int], bool] = {}
        self._snapshot: FiniteStructure | None = None
        self._place()

    # -- placement ---------------------------------------------------------

    def _place(self):
        tag = self.tag
        if tag.has_lt:
            if tag.kind == CONVEX_EQUIV:
                self._lt = [self._convex_slot(t) for t in self.types]
            else:
                self._lt = [_LinearSlot(t.lt_anchor) for t in self.types]
        if tag.kind == ORDERED_LINEAR:
            self._tri = [_LinearSlot(t.tri_anchor) for t in self.types]
        if tag.has_arrow:
            self._arrow_case = [self._local_case(t) for t in self.types]
        if tag.is_graph_like:
            self._csets = [frozenset(t.adj_set) for t in self.types]
        if tag.kind == LINEXT:
            self._csets = [frozenset(t.of_kind(K_PLT)) for t in self.types]
            self._dsets = [frozenset(t.of_kind(K_PGT)) for t in self.types]
        if tag.is_equiv:
            self._equiv_anchor = [t.adj_anchor for t in self.types]

    def _convex_slot(self, t: AdmissibleType) -> _LinearSlot:
        a, b = t.lt_anchor, t.lt_upper
        if t.fresh:
            return _LinearSlot(a, band=1)
        c = t.adj_anchor
        if c is None:
            raise ConfigError("convex types are anchored or fresh")
        same = lambda u: u == c or self.base.rel(ADJ, u, c)
        if a is not None and same(a):
            return _LinearSlot(a, band=0)
        if b is not None and same(b):
            return _LinearSlot(self.base.pred_in_window(LT, b), band=2)
        return _LinearSlot(c, band=0)

    def _local_case(self, t: AdmissibleType) -> tuple[str, Term]:
        A, B = t.arl_chain, t.arg_chain
        if A and B:
            a_t, b_t = A[-1], B[-1]
            return ("a", a_t) if self.base.rel(ARROW, a_t, b_t) else ("b", b_t)
        if A:
            return ("a", A[-1])
        return ("b", B[-1])

    # -- structure protocol -------------------------------------------------

    def window_terms(self, window: FiniteWindow | None = None) -> list[Term]:
        wits = [Wit(self.stage, t, m)
                for t in self.types for m in range(-self.w, self.w + 1)]
        return sort_terms(list(self.base_window) + wits)

    def default_universe(self) -> list[Term]:
        return self.window_terms()

    def witnesses(self) -> list[Wit]:
        return [Wit(self.stage, t, m)
                for t in self.types for m in range(-self.w, self.w + 1)]

    def _mine(self, t: Term) -> bool:
        return isinstance(t, Wit) and t.stage == self.stage

    def supports(self, t: Term) -> bool:
        """Whether relation queries about t can be answered: any chain index
        of a known type, or anything the base supports."""
        if self._mine(t):
            return t.wtype in self.tindex
        return self.base.supports(t)

    def _idx(self, t: Wit) -> int:
        try:
            return self.tindex[t.wtype]
        except KeyError:
            raise ConfigError(f"foreign witness {t!r} at stage {self.stage}")

    def rel(self, sym: str, s: Term, t: Term) -> bool:
        if sym not in self.tag.symbols:
            raise ConfigError(f"symbol {sym!r} not in signature of {self.tag}")
        ms, mt = self._mine(s), self._mine(t)
        if not ms and not mt:
            return self.base.rel(sym, s, t)
        if sym == LT:
            return self._linear_rel(LT, self._lt, s, t, ms, mt)
        if sym == TRI and self.tag.tri_is_linear:
            return self._linear_rel(TRI, self._tri, s, t, ms, mt)
        if sym == TRI:
            return self._linext_rel(s, t, ms, mt)
        if sym == ARROW:
            return self._arrow_rel(s, t, ms, mt)
        if sym == ADJ and self.tag.is_equiv:
            return self._equiv_rel(s, t, ms, mt)
        if sym == ADJ:
            return self._graph_rel(s, t, ms, mt)
        raise ConfigError(f"no rule for symbol {sym!r}")  # pragma: no cover

    # -- linear coordinates --------------------------------------------------

    def _tie(self, s: Wit, t: Wit, slots) -> bool:
        i, j = self._idx(s), self._idx(t)
        ki = (slots[i].band, i, s.m)
        kj = (slots[j].band, j, t.m)
        return ki < kj

    def _linear_rel(self, sym, slots, s, t, ms, mt) -> bool:
        base = self.base
        if ms and mt:
            gi, gj = slots[self._idx(s)].gap, slots[self._idx(t)].gap
            if gi == gj:
                return self._tie(s, t, slots)
            if gi is None:
                return True
            if gj is None:
                return False
            return base.rel(sym, gi, gj)
        if mt:
            g = slots[self._idx(t)].gap
            if g is None:
                return False
            return s == g or base.rel(sym, s, g)
        g = slots[self._idx(s)].gap
        if g is None:
            return True
        return base.rel(sym, g, t)

    # -- tournaments ---------------------------------------------------------

    def _prec(self, i: int, j: int) -> bool:
        key = (i, j)
        got = self._prec_cache.get(key)
        if got is None:
            got = compare_types(self.types[i], self.types[j], self.base) < 0
            self._prec_cache[key] = got
        return got

    def _arrow_rel(self, s, t, ms, mt) -> bool:
        base = self.base
        cases = self._arrow_case
        if ms and mt:
            i, j = self._idx(s), self._idx(t)
            if i == j:
                return s.m < t.m
            ci, ai = cases[i]
            cj, aj = cases[j]
            if ci == cj:
                if ai == aj:
                    return self._prec(i, j)
                return base.rel(ARROW, ai, aj)
            # cross-case: s beats t iff t's anchor points at s's anchor (both
            # orientations reduce to the same test); at coincident anchors the
            # clockwise-placement tie makes the type order decide
            if ai == aj:
                return self._prec(j, i)
            return base.rel(ARROW, aj, ai)
        if mt:
            c, anchor = cases[self._idx(t)]
            if c == "a":
                return s == anchor or base.rel(ARROW, s, anchor)
            return base.rel(ARROW, anchor, s)
        c, anchor = cases[self._idx(s)]
        if c == "a":
            return base.rel(ARROW, anchor, t)
        return t == anchor or base.rel(ARROW, t, anchor)

    # -- graph adjacency ------------------------------------------------------

    def _graph_rel(self, s, t, ms, mt) -> bool:
        if ms and mt:
            return False  # no new edges between new vertices
        if mt:
            return s in self._csets[self._idx(t)]
        return t in self._csets[self._idx(s)]

    # -- equivalence ----------------------------------------------------------

    def _equiv_rel(self, s, t, ms, mt) -> bool:
        anchors = self._equiv_anchor
        if ms and mt:
            i, j = self._idx(s), self._idx(t)
            ci, cj = anchors[i], anchors[j]
            if ci is None and cj is None:
                if self.tag.kind == BOUNDED_EQUIV:
                    return s != t  # one shared new class
                return i == j and s != t  # one new class per fresh type
            if ci is None or cj is None:
                return False
            return ci == cj  # anchors are class minima, equal iff same class
        wit, other = (t, s) if mt else (s, t)
        c = anchors[self._idx(wit)]
        if c is None:
            return False
        return other == c or self.base.rel(ADJ, other, c)

    # -- partial order ----------------------------------------------------------

    def _tri_leq(self, u: Term, v: Term) -> bool:
        return u == v or self.base.rel(TRI, u, v)

    def _linext_rel(self, s, t, ms, mt) -> bool:
        if ms and mt:
            ds = self._dsets[self._idx(s)]
            ct = self._csets[self._idx(t)]
            return any(self._tri_leq(d, c) for d in ds for c in ct)
        if mt:
            ct = self._csets[self._idx(t)]
            return any(self._tri_leq(s, c) for c in ct)
        ds = self._dsets[self._idx(s)]
        return any(self._tri_leq(d, t) for d in ds)

    # -- materialization ---------------------------------------------------------

    def materialize(self, window: FiniteWindow | None = None) -> FiniteStructure:
        if self._snapshot is None:
            self._snapshot = self._build_snapshot()
        return self._snapshot

    def _build_snapshot(self) -> FiniteStructure:
        base = self.base
        bterms = list(self.base_window)
        wits = self.witnesses()
        terms = bterms + wits
        nb, nw = len(bterms), len(wits)
        n = nb + nw
        bpos = {t: i for i, t in enumerate(bterms)}
        rels: dict[str, np.ndarray] = {}

        def base_block(sym):
            m = np.zeros((n, n), dtype=bool)
            for i, u in enumerate(bterms):
                for j, v in enumerate(bterms):
                    if i != j and base.rel(sym, u, v):
                        m[i, j] = True
            return m

        for sym in self.tag.symbols:
            if sym == LT or (sym == TRI and self.tag.tri_is_linear):
                slots = self._lt if sym == LT else self._tri
                rels[sym] = self._linear_matrix(sym, slots, bterms, wits)
            elif sym == ARROW:
                rels[sym] = self._pairwise_matrix(sym, terms, base_block(sym))
            elif sym == ADJ and self.tag.is_equiv:
                rels[sym] = self._equiv_matrix(bterms, wits, base_block(sym))
            elif sym == ADJ:
                m = base_block(sym)
                for k, wt in enumerate(wits):
                    for c in self._csets[self.tindex[wt.wtype]]:
                        m[nb + k, bpos[c]] = m[bpos[c], nb + k] = True
                rels[sym] = m
            elif sym == TRI:
                rels[sym] = self._linext_matrix(bterms, wits, base_block(sym))
            else:  # pragma: no cover
                raise ConfigError(f"no materializer for {sym!r}")

        order = sorted(range(n), key=lambda i: _term_sort_key(terms[i]))
        perm = np.array(order)
        sorted_terms = [terms[i] for i in order]
        rels = {sym: m[np.ix_(perm, perm)] for sym, m in rels.items()}
        return FiniteStructure(self.tag, sorted_terms, rels)

    def _linear_matrix(self, sym, slots, bterms, wits) -> np.ndarray:
        lo = float("-inf")
        keys = [(self.base.rank_of(sym, u), 0, 0, 0, 0) for u in bterms]
        for wt in wits:
            i = self.tindex[wt.wtype]
            slot = slots[i]
            g = lo if slot.gap is None else self.base.rank_of(sym, slot.gap)
            keys.append((g, 1, slot.band, i, wt.m))
        order = sorted(range(len(keys)), key=lambda i: keys[i])
        rank = np.empty(len(keys), dtype=np.int64)
        rank[order] = np.arange(len(keys))
        return rank[:, None] < rank[None, :]

    def _pairwise_matrix(self, sym, terms, m) -> np.ndarray:
        """Tournament block: witness/base parts come off the anchor's row or
        column; witness/witness from the anchor tournament, with the per-group
        ties filled in pairwise."""
        nb = len(self.base_window)
        nw = len(terms) - nb
        wits = terms[nb:]
        bpos = {t: i for i, t in enumerate(self.base_window)}
        tidx = np.array([self._idx(x) for x in wits])
        case_a = np.array([self._arrow_case[i][0] == "a" for i in tidx])
        anchor = np.array([bpos[self._arrow_case[i][1]] for i in tidx])
        bar = m[:nb, :nb]

        # witness vs base
        for k, x in enumerate(wits):
            a = anchor[k]
            if case_a[k]:
                m[nb + k, :nb] = bar[a, :]
                m[:nb, nb + k] = bar[:, a]
                m[a, nb + k] = True
            else:
                m[nb + k, :nb] = bar[:, a]
                m[:nb, nb + k] = bar[a, :]
                m[nb + k, a] = True

        # witness vs witness: anchors decide, same orientation for the two
        # same-case rules and the transpose for cross-case
        same_case = case_a[:, None] == case_a[None, :]
        by_anchor = bar[np.ix_(anchor, anchor)]
        ww = np.where(same_case, by_anchor, by_anchor.T)
        # coincident anchors: chains, same-family type ties, cross-case ties
        coincide = anchor[:, None] == anchor[None, :]
        for k, l in np.argwhere(coincide):
            if k == l:
                continue
            i, j = int(tidx[k]), int(tidx[l])
            if i == j:
                ww[k, l] = wits[k].m < wits[l].m
            elif same_case[k, l]:
                ww[k, l] = self._prec(i, j)
            else:
                ww[k, l] = self._prec(j, i)
        # distinct same-type chains never share an anchor with another type's
        # case, but chain pairs across the same type always coincide; the loop
        # above already rewrote them
        np.fill_diagonal(ww, False)
        m[nb:, nb:] = ww
        return m

    def _equiv_matrix(self, bterms, wits, base_adj) -> np.ndarray:
        nb, nw = len(bterms), len(wits)
        comp = np.full(nb + nw, -1)
        nxt = 0
        for i, u in enumerate(bterms):
            if comp[i] >= 0:
                continue
            comp[i] = nxt
            for j in range(i + 1, nb):
                if base_adj[i, j]:
                    comp[j] = nxt
            nxt += 1
        bpos = {t: i for i, t in enumerate(bterms)}
        fresh_ids: dict[int | str, int] = {}
        for k, wt in enumerate(wits):
            ti = self.tindex[wt.wtype]
            anchor = self._equiv_anchor[ti]
            if anchor is not None:
                comp[nb + k] = comp[bpos[anchor]]
                continue
            key = "shared" if self.tag.kind == BOUNDED_EQUIV else ti
            if key not in fresh_ids:
                fresh_ids[key] = nxt
                nxt += 1
            comp[nb + k] = fresh_ids[key]
        m = comp[:, None] == comp[None, :]
        np.fill_diagonal(m, False)
        return m

    def _linext_matrix(self, bterms, wits, base_tri) -> np.ndarray:
        nb, nw = len(bterms), len(wits)
        n = nb + nw
        bpos = {t: i for i, t in enumerate(bterms)}
        leq = base_tri[:nb, :nb].copy()
        np.fill_diagonal(leq, True)
        cind = np.zeros((nw, nb), dtype=bool)
        dreach = np.zeros((nw, nb), dtype=bool)  # dreach[k,b]: some d of k is <|<= b
        into = np.zeros((nb, nw), dtype=bool)    # into[b,k]: b is <|<= some c of k
        for k, wt in enumerate(wits):
            ti = self.tindex[wt.wtype]
            cs = [bpos[c] for c in self._csets[ti]]
            ds = [bpos[d] for d in self._dsets[ti]]
            if cs:
                cind[k, cs] = True
                into[:, k] = leq[:, cs].any(axis=1)
            if ds:
                dreach[k] = leq[ds, :].any(axis=0)
        m = base_tri
        m[:nb, nb:] = into
        m[nb:, :nb] = dreach
        m[nb:, nb:] = (dreach.astype(np.uint8) @ cind.T.astype(np.uint8)) > 0
        np.fill_diagonal(m, False)
        return m

    def __repr__(self) -> str:
        return (f"ExtensionStructure({self.tag}, stage={self.stage}, "
                f"base={len(self.base_window)}, chains={len(self.types)}, w={self.w})")


def _term_sort_key(t: Term):
    from .terms import term_key
    return term_key(t)


def _stage_of(base) -> int:
    best = 0
    for t in getattr(base, "terms", ()) or ():
        if isinstance(t, Wit):
            best = max(best, t.stage)
    return best


# ---------------------------------------------------------------------------
# entry points


def extend(S, window: FiniteWindow | None = None) -> ExtensionStructure:
    """E(S) for whatever class S belongs to."""
    return ExtensionStructure(S, window or FiniteWindow())


def _checked(S, window, *kinds) -> ExtensionStructure:
    if S.tag.kind not in kinds:
        raise ConfigError(f"expected one of {kinds}, got {S.tag}")
    return extend(S, window)


def extend_linear(S, window: FiniteWindow | None = None) -> ExtensionStructure:
    return _checked(S, window, LINEAR)


def extend_ordered_linear(S, window: FiniteWindow | None = None) -> ExtensionStructure:
    return _checked(S, window, ORDERED_LINEAR)


def extend_local(S, window: FiniteWindow | None = None) -> ExtensionStructure:
    return _checked(S, window, LOCAL)


def extend_ordered_local(S, window: FiniteWindow | None = None) -> ExtensionStructure:
    return _checked(S, window, ORDERED_LOCAL)


def extend_graph(S, window: FiniteWindow | None = None) -> ExtensionStructure:
    return _checked(S, window, GRAPH, KN_FREE, ORDERED_GRAPH, ORDERED_KN_FREE)


def extend_linext(S, window: FiniteWindow | None = None) -> ExtensionStructure:
    return _checked(S, window, LINEXT)


def extend_equiv(S, window: FiniteWindow | None = None) -> ExtensionStructure:
    return _checked(S, window, CONVEX_EQUIV, BOUNDED_EQUIV)


def window_structure(ext: ExtensionStructure) -> FiniteStructure:
    """The finite induced window of E(A) as an explicit structure."""
    return ext.materialize()
