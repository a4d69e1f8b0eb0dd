"""Exhaustive catalogs of small structures, one representative per
isomorphism class, for the verification suites.

Structures with a linear order are generated over the natural chain
0 < 1 < ... < n-1 (every finite linear order is rigid, so this loses no
isomorphism class); the remaining relations run over all combinations and
survivors are filtered by the class axioms and deduplicated by isomorphism
search.
"""

from __future__ import annotations

import itertools

import numpy as np

from .structures import FiniteStructure, isomorphic, validate_class
from .tags import (ADJ, ARROW, LT, TRI, BOUNDED_EQUIV, CONVEX_EQUIV, GRAPH,
                   KN_FREE, LINEAR, LINEXT, LOCAL, ORDERED_GRAPH,
                   ORDERED_KN_FREE, ORDERED_LINEAR, ORDERED_LOCAL, ClassTag,
                   ConfigError)

MAX_CATALOG_SIZE = 6  # hard cap: exhaustive enumeration stays under a minute


def catalog(tag: ClassTag, size: int) -> list[FiniteStructure]:
    """All isomorphism classes of the given exact size."""
    if size < 1:
        return []
    if size > MAX_CATALOG_SIZE:
        raise ConfigError(f"catalog size capped at {MAX_CATALOG_SIZE}")
    cands = _candidates(tag, size)
    out: list[FiniteStructure] = []
    for S in cands:
        if not validate_class(S).passed:
            continue
        if any(isomorphic(S, R) is not None for R in out):
            continue
        out.append(S)
    return out


def catalog_upto(tag: ClassTag, max_size: int) -> list[FiniteStructure]:
    """All isomorphism classes of sizes 1..max_size."""
    out = []
    for n in range(1, max_size + 1):
        out.extend(catalog(tag, n))
    return out


def _chain(n: int) -> np.ndarray:
    idx = np.arange(n)
    return idx[:, None] < idx[None, :]


def _pair_subsets(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    for bits in itertools.product((False, True), repeat=len(pairs)):
        m = np.zeros((n, n), dtype=bool)
        for (i, j), on in zip(pairs, bits):
            if on:
                m[i, j] = m[j, i] = True
        yield m


def _tournaments(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    for bits in itertools.product((False, True), repeat=len(pairs)):
        m = np.zeros((n, n), dtype=bool)
        for (i, j), fwd in zip(pairs, bits):
            if fwd:
                m[i, j] = True
            else:
                m[j, i] = True
        yield m


def _upward_posets(n: int):
    """Transitive sub-relations of the natural chain."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in itertools.product((False, True), repeat=len(pairs)):
        m = np.zeros((n, n), dtype=bool)
        for (i, j), on in zip(pairs, bits):
            if on:
                m[i, j] = True
        closed = m.copy()
        for k in range(n):
            closed |= closed[:, k:k + 1] & closed[k:k + 1, :]
        if (closed == m).all():
            yield m


def _partitions(n: int, max_blocks: int | None):
    """Set partitions of range(n) as block-id vectors."""
    def rec(i, ids, used):
        if i == n:
            yield tuple(ids)
            return
        for b in range(used):
            ids.append(b)
            yield from rec(i + 1, ids, used)
            ids.pop()
        if max_blocks is None or used < max_blocks:
            ids.append(used)
            yield from rec(i + 1, ids, used + 1)
            ids.pop()
    yield from rec(0, [], 0)


def _equiv_matrix(ids) -> np.ndarray:
    v = np.array(ids)
    m = v[:, None] == v[None, :]
    np.fill_diagonal(m, False)
    return m


def _candidates(tag: ClassTag, n: int):
    atoms = list(range(n))
    chain = _chain(n)
    kind = tag.kind
    if kind == LINEAR:
        yield _build(tag, atoms, {LT: chain})
    elif kind == ORDERED_LINEAR:
        for perm in itertools.permutations(range(n)):
            pos = np.argsort(np.array(perm))
            yield _build(tag, atoms, {LT: chain, TRI: pos[:, None] < pos[None, :]})
    elif kind == LOCAL:
        for m in _tournaments(n):
            yield _build(tag, atoms, {ARROW: m})
    elif kind == ORDERED_LOCAL:
        for m in _tournaments(n):
            yield _build(tag, atoms, {LT: chain, ARROW: m})
    elif kind in (GRAPH, KN_FREE):
        for m in _pair_subsets(n):
            yield _build(tag, atoms, {ADJ: m})
    elif kind in (ORDERED_GRAPH, ORDERED_KN_FREE):
        for m in _pair_subsets(n):
            yield _build(tag, atoms, {LT: chain, ADJ: m})
    elif kind == LINEXT:
        for m in _upward_posets(n):
            yield _build(tag, atoms, {LT: chain, TRI: m})
    elif kind == CONVEX_EQUIV:
        for ids in _partitions(n, None):
            if _convex_ids(ids):
                yield _build(tag, atoms, {LT: chain, ADJ: _equiv_matrix(ids)})
    elif kind == BOUNDED_EQUIV:
        for ids in _partitions(n, tag.class_bound):
            yield _build(tag, atoms, {LT: chain, ADJ: _equiv_matrix(ids)})
    else:  # pragma: no cover
        raise ConfigError(f"no catalog generator for {tag}")


def _convex_ids(ids) -> bool:
    seen_closed = set()
    for i, b in enumerate(ids):
        if i and ids[i - 1] != b:
            seen_closed.add(ids[i - 1])
        if b in seen_closed:
            return False
    return True


def _build(tag: ClassTag, atoms, rels) -> FiniteStructure:
    from .terms import Base, sort_terms
    terms = sort_terms(Base(a) for a in atoms)
    return FiniteStructure(tag, terms, rels)
