"""Generator-rule + transitive-closure oracle for extension windows.

This is the independent check on the closed-form comparators: re-derive every
witness's relations by writing down the raw placement generators (the bullet
rules, expanded against the base window) and explicitly closing orders under
transitivity and the equivalence under symmetry+transitivity.  Any cycle the
closure produces in an order relation is a construction bug and raises.

Used only as a test oracle; nothing in the construction path depends on it.
"""

from __future__ import annotations

import itertools

import numpy as np

from .extend import ExtensionStructure
from .qftypes import K_PGT, K_PLT, compare_types
from .structures import FiniteStructure
from .tags import (ADJ, ARROW, LT, TRI, BOUNDED_EQUIV, CONVEX_EQUIV,
                   ClassTag, ConfigError)
from .terms import Term, Wit


class OracleCycleError(Exception):
    """Transitive closure produced a reflexive pair in an order relation."""


def closure_oracle(terms, generators: dict[str, list[tuple[Term, Term]]],
                   tag: ClassTag) -> FiniteStructure:
    """Close a generated relation set: orders transitively, the equivalence
    symmetrically and transitively, plain adjacency symmetrically."""
    terms = list(terms)
    idx = {t: i for i, t in enumerate(terms)}
    n = len(terms)
    rels: dict[str, np.ndarray] = {}
    for sym in tag.symbols:
        m = np.zeros((n, n), dtype=bool)
        for a, b in generators.get(sym, ()):
            m[idx[a], idx[b]] = True
        if sym == ADJ:
            m |= m.T
            if tag.is_equiv:
                m = _transitive_close(m)
            np.fill_diagonal(m, False)
        elif sym == ARROW:
            pass  # tournaments are generated outright, nothing to close
        else:
            m = _transitive_close(m)
            if np.diag(m).any():
                t = terms[int(np.flatnonzero(np.diag(m))[0])]
                raise OracleCycleError(f"closure of {sym!r} cycles through {t!r}")
        rels[sym] = m
    return FiniteStructure(tag, terms, rels)


def _transitive_close(m: np.ndarray) -> np.ndarray:
    m = m.copy()
    for k in range(m.shape[0]):
        m |= m[:, k:k + 1] & m[k:k + 1, :]
    return m


# ---------------------------------------------------------------------------
# generators straight from the placement bullets


def oracle_structure(ext: ExtensionStructure) -> FiniteStructure:
    """The extension window rebuilt from raw generators + closure, on the
    same term list as ``ext.materialize()``."""
    gens = build_generators(ext)
    terms = ext.materialize().terms
    return closure_oracle(terms, gens, ext.tag)


def build_generators(ext: ExtensionStructure) -> dict[str, list[tuple[Term, Term]]]:
    tag = ext.tag
    gens: dict[str, list[tuple[Term, Term]]] = {sym: [] for sym in tag.symbols}
    base = ext.base
    B = list(ext.base_window)
    for sym in tag.symbols:
        out = gens[sym]
        for u, v in itertools.permutations(B, 2):
            if base.rel(sym, u, v):
                out.append((u, v))

    if tag.has_lt:
        _linear_generators(ext, LT, gens[LT])
    if tag.has_tri and tag.tri_is_linear:
        _linear_generators(ext, TRI, gens[TRI])
    if tag.has_tri and not tag.tri_is_linear:
        _linext_generators(ext, gens[TRI])
    if tag.has_arrow:
        _arrow_generators(ext, gens[ARROW])
    if tag.is_graph_like:
        for x in ext.witnesses():
            for c in x.wtype.adj_set:
                gens[ADJ].append((x, c))
    if tag.is_equiv:
        _equiv_adj_generators(ext, gens[ADJ])
    return gens


def _chain_indices(ext):
    return range(-ext.w, ext.w + 1)


def _wits_of(ext, tau):
    return [Wit(ext.stage, tau, m) for m in _chain_indices(ext)]


def _oracle_slot(ext, sym, tau):
    """Re-derive the order placement of one chain from its literals: the gap's
    lower endpoint (None = below the window) and the convexity band."""
    base = ext.base
    if sym == LT:
        a, b = tau.lt_anchor, tau.lt_upper
    else:
        a, b = tau.tri_anchor, tau.tri_upper
    if ext.tag.kind != CONVEX_EQUIV:
        return a, 0
    if tau.fresh:
        return a, 1
    c = tau.adj_anchor
    same = lambda u: u == c or base.rel(ADJ, u, c)
    if a is not None and same(a):
        return a, 0
    if b is not None and same(b):
        prev = [u for u in ext.base_window if base.rel(LT, u, b)]
        if not prev:
            return None, 2
        top = prev[0]
        for u in prev[1:]:
            if base.rel(LT, top, u):
                top = u
        return top, 2
    return c, 0


def _linear_generators(ext, sym, out):
    """Anchored chains sit above their anchor and below everything above it;
    bottom chains sit below the minimum; chains increase with m; within a gap
    the stipulated (band, type order, m) tie applies."""
    base = ext.base
    B = list(ext.base_window)
    slots = {}
    for tau in ext.types:
        slots[tau] = _oracle_slot(ext, sym, tau)
        gap, _band = slots[tau]
        xs = _wits_of(ext, tau)
        if gap is None:
            b0 = tau.lt_upper if sym == LT else tau.tri_upper
            if b0 is not None:
                for x in xs:
                    out.append((x, b0))
        else:
            for x in xs:
                out.append((gap, x))
                for b in B:
                    if base.rel(sym, gap, b):
                        out.append((x, b))
        for x, y in itertools.combinations(xs, 2):
            out.append((x, y))  # m < m'
    ranked = {tau: i for i, tau in enumerate(ext.types)}
    for t1, t2 in itertools.combinations(ext.types, 2):
        g1, b1 = slots[t1]
        g2, b2 = slots[t2]
        if g1 != g2:
            continue
        first, second = (t1, t2) if (b1, ranked[t1]) < (b2, ranked[t2]) else (t2, t1)
        for x in _wits_of(ext, first):
            for y in _wits_of(ext, second):
                out.append((x, y))


def _arrow_generators(ext, out):
    base = ext.base
    B = list(ext.base_window)

    def case_of(tau):
        A, Bc = tau.arl_chain, tau.arg_chain
        if A and Bc:
            return ("a", A[-1]) if base.rel(ARROW, A[-1], Bc[-1]) else ("b", Bc[-1])
        return ("a", A[-1]) if A else ("b", Bc[-1])

    info = {tau: case_of(tau) for tau in ext.types}
    for tau in ext.types:
        case, anchor = info[tau]
        xs = _wits_of(ext, tau)
        for x in xs:
            if case == "a":
                out.append((anchor, x))
                for y in B:
                    if base.rel(ARROW, anchor, y):
                        out.append((x, y))
                    if base.rel(ARROW, y, anchor):
                        out.append((y, x))
            else:
                out.append((x, anchor))
                for y in B:
                    if base.rel(ARROW, y, anchor):
                        out.append((x, y))
                    if base.rel(ARROW, anchor, y):
                        out.append((y, x))
        for x, y in itertools.combinations(xs, 2):
            out.append((x, y))
    for t1, t2 in itertools.permutations(ext.types, 2):
        c1, a1 = info[t1]
        c2, a2 = info[t2]
        fires = False
        if a1 == a2:
            # coincident anchors: the later type in the type order wins the
            # cross-case pair; same-case pairs follow the type order upward
            lt12 = compare_types(t1, t2, base) < 0
            fires = lt12 if c1 == c2 else not lt12
        elif c1 == c2:
            fires = base.rel(ARROW, a1, a2)
        else:
            fires = base.rel(ARROW, a2, a1)
        if fires:
            for x in _wits_of(ext, t1):
                for y in _wits_of(ext, t2):
                    out.append((x, y))


def _equiv_adj_generators(ext, out):
    for tau in ext.types:
        xs = _wits_of(ext, tau)
        c = tau.adj_anchor
        if c is not None:
            for x in xs:
                out.append((x, c))
        for x, y in itertools.combinations(xs, 2):
            out.append((x, y))
    if ext.tag.kind == BOUNDED_EQUIV:
        fresh = [tau for tau in ext.types if tau.fresh]
        for t1, t2 in itertools.combinations(fresh, 2):
            for x in _wits_of(ext, t1):
                for y in _wits_of(ext, t2):
                    out.append((x, y))


def _linext_generators(ext, out):
    for tau in ext.types:
        for x in _wits_of(ext, tau):
            for c in tau.of_kind(K_PLT):
                out.append((c, x))
            for d in tau.of_kind(K_PGT):
                out.append((x, d))


# ---------------------------------------------------------------------------
# agreement


def comparator_agreement(ext: ExtensionStructure):
    """Compare the closed-form window against the generator+closure window
    entrywise.  Returns (agrees, mismatches) with at most 5 mismatch tuples."""
    lhs = ext.materialize()
    rhs = oracle_structure(ext)
    mismatches = []
    for sym in ext.tag.symbols:
        diff = lhs.rels[sym] != rhs.rels[sym]
        for i, j in np.argwhere(diff)[:5]:
            mismatches.append((sym, lhs.terms[int(i)], lhs.terms[int(j)],
                               bool(lhs.rels[sym][i, j])))
        if mismatches:
            break
    return (not mismatches), mismatches
