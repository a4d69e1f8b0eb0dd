"""Identifications between signatures and the two baseline reduction maps.

An ordered tournament is the same data as an ordered graph (join two points
iff the arrow agrees with the order), and a linear extension of a partial
order likewise (join iff comparable).  Both identifications are involutive on
their images, eager, and finite-only — the extension operators always run on
native signatures.
"""

from __future__ import annotations

import numpy as np

from .structures import FiniteStructure
from .tags import (ADJ, ARROW, LT, TRI, GRAPH, LINEAR, LINEXT, ORDERED_GRAPH,
                   ORDERED_LINEAR, ORDERED_LOCAL, ClassTag, ConfigError)


def _require(S: FiniteStructure, *syms: str):
    for sym in syms:
        if sym not in S.tag.symbols:
            raise ConfigError(f"{S.tag} does not carry {sym!r}")


def tournament_to_ordered_graph(T: FiniteStructure) -> FiniteStructure:
    """(T, <, ->) as an ordered graph: a ~ b iff the arrow points <-upward."""
    _require(T, LT, ARROW)
    lt, ar = T.rels[LT], T.rels[ARROW]
    n = len(T.terms)
    off = ~np.eye(n, dtype=bool)
    if not ((ar ^ ar.T) == off).all():
        raise ConfigError("-> is not a tournament")
    adj = (lt & ar) | (lt & ar).T
    return FiniteStructure(ClassTag(ORDERED_GRAPH), T.terms,
                           {LT: lt.copy(), ADJ: adj})


def ordered_graph_to_tournament(G: FiniteStructure) -> FiniteStructure:
    """Inverse identification: for a < b, point a -> b iff a ~ b."""
    _require(G, LT, ADJ)
    lt, adj = G.rels[LT], G.rels[ADJ]
    ar = (lt & adj) | (lt.T & ~adj & ~np.eye(len(G.terms), dtype=bool))
    return FiniteStructure(ClassTag(ORDERED_LOCAL), G.terms,
                           {LT: lt.copy(), ARROW: ar})


def partial_to_ordered_graph(P: FiniteStructure) -> FiniteStructure:
    """(P, <, <|) as an ordered graph: a ~ b iff <|-comparable."""
    _require(P, LT, TRI)
    lt, tri = P.rels[LT], P.rels[TRI]
    if (tri & ~lt).any():
        raise ConfigError("< does not extend <|")
    adj = tri | tri.T
    return FiniteStructure(ClassTag(ORDERED_GRAPH), P.terms,
                           {LT: lt.copy(), ADJ: adj})


def ordered_graph_to_partial(G: FiniteStructure) -> FiniteStructure:
    """Inverse identification: a <| b iff a < b and a ~ b."""
    _require(G, LT, ADJ)
    lt, adj = G.rels[LT], G.rels[ADJ]
    return FiniteStructure(ClassTag(LINEXT), G.terms,
                           {LT: lt.copy(), TRI: lt & adj})


def bc_reduction_diag(L: FiniteStructure) -> FiniteStructure:
    """Duplicate the order: L goes to the ordered linear order (L, <, <)."""
    if L.tag.kind != LINEAR:
        raise ConfigError(f"expected a linear order, got {L.tag}")
    lt = L.rels[LT]
    return FiniteStructure(ClassTag(ORDERED_LINEAR), L.terms,
                           {LT: lt.copy(), TRI: lt.copy()})


def bc_reduction_empty(L: FiniteStructure) -> FiniteStructure:
    """L as the edgeless ordered graph (L, <, no edges)."""
    if L.tag.kind != LINEAR:
        raise ConfigError(f"expected a linear order, got {L.tag}")
    n = len(L.terms)
    return FiniteStructure(ClassTag(ORDERED_GRAPH), L.terms,
                           {LT: L.rels[LT].copy(),
                            ADJ: np.zeros((n, n), dtype=bool)})


def complement(G: FiniteStructure) -> FiniteStructure:
    """Flip every off-diagonal edge; the order coordinate is untouched."""
    if G.tag.kind not in (GRAPH, ORDERED_GRAPH):
        raise ConfigError(f"complement is defined on plain ordered/unordered "
                          f"graphs, got {G.tag}")
    n = len(G.terms)
    adj = ~G.rels[ADJ] & ~np.eye(n, dtype=bool)
    rels = {ADJ: adj}
    if G.tag.has_lt:
        rels[LT] = G.rels[LT].copy()
    return FiniteStructure(G.tag, G.terms, rels)
