"""Finite and lazily presented structures, window extraction, class-axiom
validation, and finite isomorphism/automorphism search.

Relations live in boolean matrices over a canonical term order.  Validation
comes in two independent routes: :func:`validate_class` (vectorized) and
:func:`brute_force_report` (literal quantifier loops); the test suite insists
they agree on every small structure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .tags import (ADJ, ARROW, LT, TRI, BOUNDED_EQUIV, CONVEX_EQUIV,
                   KN_FREE, LINEAR, LINEXT, ORDERED_KN_FREE, ClassTag,
                   ConfigError)
from .terms import Base, Term, Wit, sort_terms, term_id, term_key


@dataclass(frozen=True)
class FiniteWindow:
    """Finite truncation parameters: iteration depth d, chain-index window
    [-w, w], parameter bound p, and (for infinite seeds only) how many base
    atoms around 0 take part."""

    d: int = 1
    w: int = 0
    p: int = 2
    base_span: int = 3

    def __post_init__(self):
        if self.d < 0 or self.w < 0 or self.p < 0 or self.base_span < 0:
            raise ConfigError("window bounds must be nonnegative")


class FiniteStructure:
    """Explicit finite structure: sorted terms plus one boolean matrix per
    relation symbol."""

    def __init__(self, tag: ClassTag, terms, rels: dict[str, np.ndarray]):
        self.tag = tag
        self.terms: tuple[Term, ...] = tuple(terms)
        self.index: dict[Term, int] = {t: i for i, t in enumerate(self.terms)}
        if len(self.index) != len(self.terms):
            raise ConfigError("duplicate terms in universe")
        n = len(self.terms)
        self.rels: dict[str, np.ndarray] = {}
        for sym in tag.symbols:
            m = rels.get(sym)
            if m is None:
                m = np.zeros((n, n), dtype=bool)
            m = np.asarray(m, dtype=bool)
            if m.shape != (n, n):
                raise ConfigError(f"relation {sym!r} has shape {m.shape}, want {(n, n)}")
            self.rels[sym] = m
        extra = set(rels) - set(tag.symbols)
        if extra:
            raise ConfigError(f"symbols {sorted(extra)} not in signature of {tag}")
        self._ranks: dict[str, np.ndarray] = {}

    @classmethod
    def from_pairs(cls, tag: ClassTag, atoms, pairs: dict[str, list]) -> "FiniteStructure":
        """Build from atom ids and relation pair lists; adjacency pairs are
        undirected edges."""
        terms = sort_terms(Base(a) for a in atoms)
        idx = {t.ident: i for i, t in enumerate(terms)}
        n = len(terms)
        rels = {}
        for sym, ps in pairs.items():
            if sym not in tag.symbols:
                raise ConfigError(f"symbol {sym!r} not in signature of {tag}")
            m = np.zeros((n, n), dtype=bool)
            for a, b in ps:
                if a not in idx or b not in idx:
                    raise ConfigError(f"pair ({a!r},{b!r}) mentions unknown atom")
                m[idx[a], idx[b]] = True
                if sym == ADJ:
                    m[idx[b], idx[a]] = True
            rels[sym] = m
        return cls(tag, terms, rels)

    def rel(self, sym: str, s: Term, t: Term) -> bool:
        return bool(self.rels[sym][self.index[s], self.index[t]])

    def supports(self, t: Term) -> bool:
        return t in self.index

    def default_universe(self) -> list[Term]:
        return list(self.terms)

    def window_terms(self, window: FiniteWindow) -> list[Term]:
        return list(self.terms)

    def has_minimum(self, sym: str) -> bool:
        return len(self.terms) > 0

    def minimum(self, sym: str) -> Term:
        r = self.ranks(sym)
        return self.terms[int(np.argmin(r))]

    def ranks(self, sym: str) -> np.ndarray:
        """Position of each term in the sym-order (# of strictly smaller)."""
        if sym not in self._ranks:
            self._ranks[sym] = self.rels[sym].sum(axis=0).astype(np.int64)
        return self._ranks[sym]

    def rank_of(self, sym: str, t: Term) -> float:
        return float(self.ranks(sym)[self.index[t]])

    def pred_in_window(self, sym: str, t: Term) -> Term | None:
        """Greatest window element strictly sym-below t, if any."""
        col = self.rels[sym][:, self.index[t]]
        if not col.any():
            return None
        below = np.flatnonzero(col)
        r = self.ranks(sym)
        return self.terms[below[np.argmax(r[below])]]

    def materialize(self, window: FiniteWindow | None = None) -> "FiniteStructure":
        return self

    def restrict(self, subset) -> "FiniteStructure":
        subset = sort_terms(subset)
        ids = [self.index[t] for t in subset]
        rels = {sym: m[np.ix_(ids, ids)] for sym, m in self.rels.items()}
        return FiniteStructure(self.tag, subset, rels)

    def retag(self, tag: ClassTag) -> "FiniteStructure":
        if set(tag.symbols) != set(self.tag.symbols):
            raise ConfigError(f"cannot retag {self.tag} as {tag}: signatures differ")
        return FiniteStructure(tag, self.terms, dict(self.rels))

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"FiniteStructure({self.tag}, n={len(self.terms)})"


class LazyIntegerChain:
    """The integer chain (Z, <), presented by rule.  Windows take the atoms
    in [-span, span]; relations are decided for arbitrary integer atoms."""

    def __init__(self, span: int = 3):
        self.tag = ClassTag(LINEAR)
        self.span = span

    def rel(self, sym: str, s: Term, t: Term) -> bool:
        if sym != LT:
            raise ConfigError(f"symbol {sym!r} not in signature of {self.tag}")
        return int(s.ident) < int(t.ident)

    def supports(self, t: Term) -> bool:
        return isinstance(t, Base) and isinstance(t.ident, int)

    def default_universe(self) -> list[Term]:
        return [Base(i) for i in range(-self.span, self.span + 1)]

    def window_terms(self, window: FiniteWindow) -> list[Term]:
        span = max(self.span, window.base_span)
        return [Base(i) for i in range(-span, span + 1)]

    def has_minimum(self, sym: str) -> bool:
        return False

    def rank_of(self, sym: str, t: Term) -> float:
        return float(int(t.ident))

    def materialize(self, window: FiniteWindow | None = None) -> FiniteStructure:
        terms = self.window_terms(window or FiniteWindow())
        n = len(terms)
        vals = np.array([int(t.ident) for t in terms])
        return FiniteStructure(self.tag, terms, {LT: vals[:, None] < vals[None, :]})

    def __repr__(self) -> str:
        return f"LazyIntegerChain(span={self.span})"


# ---------------------------------------------------------------------------
# validation


@dataclass
class Check:
    name: str
    ok: bool
    witness: tuple | None = None


@dataclass
class ValidationReport:
    tag: ClassTag
    size: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def violations(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def summary(self) -> str:
        lines = [f"{self.tag} on {self.size} elements: "
                 f"{'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            mark = "ok " if c.ok else "VIOLATION"
            wit = "" if c.witness is None else f"  witness={tuple(map(str, c.witness))}"
            lines.append(f"  [{mark}] {c.name}{wit}")
        return "\n".join(lines)


def validate_class(S, tag: ClassTag | None = None,
                   window: FiniteWindow | None = None) -> ValidationReport:
    """Check every class axiom on a finite window and report each one with a
    violating tuple where it fails.  A tag whose signature disagrees with the
    structure is a configuration error, not a validation failure."""
    F = S.materialize(window)
    tag = tag or F.tag
    if set(tag.symbols) != set(F.tag.symbols):
        raise ConfigError(f"tag {tag} does not match signature of {F.tag}")
    rpt = ValidationReport(tag, len(F.terms))
    terms = F.terms

    def name_of(i: int) -> Term:
        return terms[i]

    if tag.has_lt:
        _linear_checks(rpt, F, LT, name_of)
    if tag.has_tri:
        if tag.tri_is_linear:
            _linear_checks(rpt, F, TRI, name_of)
        else:
            _partial_checks(rpt, F, name_of)
    if tag.has_arrow:
        _tournament_checks(rpt, F, name_of)
        _local_linearity_checks(rpt, F, name_of)
    if tag.has_adj and tag.is_graph_like:
        _graph_checks(rpt, F, name_of)
        bound = tag.clique_bound
        if bound is not None:
            clique = _find_clique(F.rels[ADJ], bound)
            rpt.checks.append(Check(
                f"K{bound}-freeness(~)", clique is None,
                None if clique is None else tuple(name_of(i) for i in clique)))
    if tag.is_equiv:
        _equiv_checks(rpt, F, name_of)
        if tag.kind == CONVEX_EQUIV:
            _convexity_check(rpt, F, name_of)
        bound = tag.class_bound
        if bound is not None:
            k = _class_count(F.rels[ADJ])
            rpt.checks.append(Check(f"class-count<={bound}(~)", k <= bound,
                                    None if k <= bound else (k,)))
    return rpt


def _first_true(mask: np.ndarray):
    hits = np.argwhere(mask)
    return None if hits.size == 0 else tuple(int(x) for x in hits[0])


def _linear_checks(rpt, F, sym, name_of):
    M = F.rels[sym]
    n = M.shape[0]
    w = _first_true(np.diag(M))
    rpt.checks.append(Check(f"irreflexivity({sym})", w is None,
                            None if w is None else (name_of(w[0]),)))
    off = ~np.eye(n, dtype=bool)
    bad = (M ^ M.T) != off
    w = _first_true(bad & off)
    rpt.checks.append(Check(f"totality+antisymmetry({sym})", w is None,
                            None if w is None else tuple(name_of(i) for i in w)))
    # With totality and antisymmetry in place, transitivity is equivalent to
    # agreeing with the rank comparison (column sums count strict predecessors).
    r = M.sum(axis=0)
    expected = r[:, None] < r[None, :]
    w = _first_true((M != expected) & off)
    if w is not None and n <= 400:
        trip = _find_intransitive(M)
        if trip is not None:
            w = trip
    rpt.checks.append(Check(f"transitivity({sym})", w is None,
                            None if w is None else tuple(name_of(i) for i in w)))


def _find_intransitive(M):
    n = M.shape[0]
    for i in range(n):
        via = np.flatnonzero(M[i])
        reach = M[via].any(axis=0) & ~M[i]
        reach[i] = False
        if reach.any():
            j = int(np.flatnonzero(reach)[0])
            k = int(via[np.flatnonzero(M[via, j])[0]])
            return (i, k, j)
    return None


def _partial_checks(rpt, F, name_of):
    M = F.rels[TRI]
    w = _first_true(np.diag(M))
    rpt.checks.append(Check(f"irreflexivity({TRI})", w is None,
                            None if w is None else (name_of(w[0]),)))
    w = _first_true(M & M.T)
    rpt.checks.append(Check(f"antisymmetry({TRI})", w is None,
                            None if w is None else tuple(name_of(i) for i in w)))
    closure = (M.astype(np.float32) @ M.astype(np.float32)) > 0
    w = _first_true(closure & ~M)
    if w is not None:
        i, j = w
        k = int(np.flatnonzero(M[i] & M[:, j])[0])
        w = (i, k, j)
    rpt.checks.append(Check(f"transitivity({TRI})", w is None,
                            None if w is None else tuple(name_of(i) for i in w)))
    w = _first_true(M & ~F.rels[LT])
    rpt.checks.append(Check(f"linear-extension({LT} contains {TRI})", w is None,
                            None if w is None else tuple(name_of(i) for i in w)))


def _tournament_checks(rpt, F, name_of):
    M = F.rels[ARROW]
    n = M.shape[0]
    w = _first_true(np.diag(M))
    rpt.checks.append(Check(f"irreflexivity({ARROW})", w is None,
                            None if w is None else (name_of(w[0]),)))
    off = ~np.eye(n, dtype=bool)
    w = _first_true(((M ^ M.T) != off) & off)
    rpt.checks.append(Check(f"tournament-totality({ARROW})", w is None,
                            None if w is None else tuple(name_of(i) for i in w)))


def _local_linearity_checks(rpt, F, name_of):
    """Every vertex's predecessor set and successor set must be transitive
    tournaments; a tournament on k vertices is transitive iff its score
    sequence is 0..k-1."""
    M = F.rels[ARROW]
    Mf = M.astype(np.float32)
    for label, rows in (("predecessors", M.T), ("successors", M)):
        bad = None
        for v in range(M.shape[0]):
            members = np.flatnonzero(rows[v])
            if members.size < 3:
                continue
            sel = np.zeros(M.shape[0], dtype=np.float32)
            sel[members] = 1.0
            scores = (Mf @ sel)[members]
            if not np.array_equal(np.sort(scores), np.arange(members.size,
                                                             dtype=np.float32)):
                trip = _find_cycle_within(M, members)
                bad = (v,) + trip
                break
        rpt.checks.append(Check(
            f"{label}-linearly-ordered({ARROW})", bad is None,
            None if bad is None else tuple(name_of(i) for i in bad)))


def _find_cycle_within(M, members):
    for i, j, k in itertools.combinations(members.tolist(), 3):
        for a, b, c in ((i, j, k), (i, k, j)):
            if M[a, b] and M[b, c] and M[c, a]:
                return (a, b, c)
    return ()


def _graph_checks(rpt, F, name_of):
    A = F.rels[ADJ]
    w = _first_true(np.diag(A))
    rpt.checks.append(Check(f"irreflexivity({ADJ})", w is None,
                            None if w is None else (name_of(w[0]),)))
    w = _first_true(A != A.T)
    rpt.checks.append(Check(f"symmetry({ADJ})", w is None,
                            None if w is None else tuple(name_of(i) for i in w)))


def _equiv_checks(rpt, F, name_of):
    _graph_checks(rpt, F, name_of)
    A = F.rels[ADJ]
    comp = _components(A)
    blocks = comp[:, None] == comp[None, :]
    np.fill_diagonal(blocks, False)
    w = _first_true(blocks & ~A)
    if w is not None:
        i, j = w
        k = int(np.flatnonzero(A[i] & A[:, j])[0]) if (A[i] & A[:, j]).any() else i
        w = (i, k, j)
    rpt.checks.append(Check(f"transitivity({ADJ})", w is None,
                            None if w is None else tuple(name_of(i) for i in w)))


def _convexity_check(rpt, F, name_of):
    A, M = F.rels[ADJ], F.rels[LT]
    comp = _components(A)
    r = M.sum(axis=0)
    bad = None
    for cid in np.unique(comp):
        members = np.flatnonzero(comp == cid)
        lo, hi = r[members].min(), r[members].max()
        if hi - lo + 1 != members.size:
            inside = np.flatnonzero((r >= lo) & (r <= hi) & (comp != cid))
            bad = (int(members[np.argmin(r[members])]), int(inside[0]),
                   int(members[np.argmax(r[members])]))
            break
    rpt.checks.append(Check("convexity(~ classes under <)", bad is None,
                            None if bad is None else tuple(name_of(i) for i in bad)))


def _components(A: np.ndarray) -> np.ndarray:
    """Partition by identical closed neighborhoods.  For a genuine equivalence
    this is the class partition; for anything else the induced block matrix
    necessarily disagrees with A somewhere, so the transitivity check that
    compares them still fails exactly when it should."""
    closed = A | np.eye(A.shape[0], dtype=bool)
    return np.argmax(closed, axis=1)  # least member of each row's class


def _class_count(A: np.ndarray) -> int:
    return len(np.unique(_components(A))) if A.shape[0] else 0


def _find_clique(A: np.ndarray, k: int):
    """Vertex indices of some k-clique, or None.  Triangles via one matrix
    product; larger cliques by recursing into neighborhoods."""
    n = A.shape[0]
    if k <= 0:
        return []
    if k == 1:
        return [0] if n else None
    if k == 2:
        w = _first_true(A)
        return list(w) if w else None
    if k == 3:
        if n <= 400:
            paths = A.astype(np.float32) @ A.astype(np.float32)
            tri = (paths > 0) & A
            w = _first_true(tri)
            if w is None:
                return None
            i, j = w
            via = int(np.flatnonzero(A[i] & A[j])[0])
            return [i, via, j]
        # big windows are sparse: walk the edges instead of multiplying
        for i, j in np.argwhere(np.triu(A, 1)):
            common = A[i] & A[j]
            if common.any():
                return [int(i), int(np.flatnonzero(common)[0]), int(j)]
        return None
    for v in range(n):
        nb = np.flatnonzero(A[v])
        if nb.size < k - 1:
            continue
        sub = _find_clique(A[np.ix_(nb, nb)], k - 1)
        if sub is not None:
            return [v] + [int(nb[i]) for i in sub]
    return None


# ---------------------------------------------------------------------------
# independent brute-force axiom checker (the oracle route: plain quantifier
# loops over S.rel, no matrices, no shortcuts)


def brute_force_report(S, tag: ClassTag | None = None) -> ValidationReport:
    F = S.materialize(None) if not isinstance(S, FiniteStructure) else S
    tag = tag or F.tag
    if set(tag.symbols) != set(F.tag.symbols):
        raise ConfigError(f"tag {tag} does not match signature of {F.tag}")
    ts = list(F.terms)
    rpt = ValidationReport(tag, len(ts))
    add = rpt.checks.append

    def linear(sym):
        bad = next(((t,) for t in ts if F.rel(sym, t, t)), None)
        add(Check(f"irreflexivity({sym})", bad is None, bad))
        bad = None
        for s, t in itertools.combinations(ts, 2):
            if F.rel(sym, s, t) == F.rel(sym, t, s):
                bad = (s, t)
                break
        add(Check(f"totality+antisymmetry({sym})", bad is None, bad))
        bad = None
        for s, t, u in itertools.permutations(ts, 3):
            if F.rel(sym, s, t) and F.rel(sym, t, u) and not F.rel(sym, s, u):
                bad = (s, t, u)
                break
        add(Check(f"transitivity({sym})", bad is None, bad))

    if tag.has_lt:
        linear(LT)
    if tag.has_tri and tag.tri_is_linear:
        linear(TRI)
    if tag.has_tri and not tag.tri_is_linear:
        bad = next(((t,) for t in ts if F.rel(TRI, t, t)), None)
        add(Check(f"irreflexivity({TRI})", bad is None, bad))
        bad = None
        for s, t in itertools.permutations(ts, 2):
            if F.rel(TRI, s, t) and F.rel(TRI, t, s):
                bad = (s, t)
                break
        add(Check(f"antisymmetry({TRI})", bad is None, bad))
        bad = None
        for s, t, u in itertools.permutations(ts, 3):
            if F.rel(TRI, s, t) and F.rel(TRI, t, u) and not F.rel(TRI, s, u):
                bad = (s, t, u)
                break
        add(Check(f"transitivity({TRI})", bad is None, bad))
        bad = None
        for s, t in itertools.permutations(ts, 2):
            if F.rel(TRI, s, t) and not F.rel(LT, s, t):
                bad = (s, t)
                break
        add(Check(f"linear-extension({LT} contains {TRI})", bad is None, bad))
    if tag.has_arrow:
        bad = next(((t,) for t in ts if F.rel(ARROW, t, t)), None)
        add(Check(f"irreflexivity({ARROW})", bad is None, bad))
        bad = None
        for s, t in itertools.combinations(ts, 2):
            if F.rel(ARROW, s, t) == F.rel(ARROW, t, s):
                bad = (s, t)
                break
        add(Check(f"tournament-totality({ARROW})", bad is None, bad))
        for label, fwd in (("predecessors", False), ("successors", True)):
            bad = None
            for v in ts:
                side = [u for u in ts if u != v and
                        (F.rel(ARROW, v, u) if fwd else F.rel(ARROW, u, v))]
                for a, b, c in itertools.permutations(side, 3):
                    if F.rel(ARROW, a, b) and F.rel(ARROW, b, c) and F.rel(ARROW, c, a):
                        bad = (v, a, b, c)
                        break
                if bad:
                    break
            add(Check(f"{label}-linearly-ordered({ARROW})", bad is None, bad))
    if tag.has_adj:
        bad = next(((t,) for t in ts if F.rel(ADJ, t, t)), None)
        add(Check(f"irreflexivity({ADJ})", bad is None, bad))
        bad = None
        for s, t in itertools.permutations(ts, 2):
            if F.rel(ADJ, s, t) != F.rel(ADJ, t, s):
                bad = (s, t)
                break
        add(Check(f"symmetry({ADJ})", bad is None, bad))
    if tag.is_equiv:
        bad = None
        for s, t, u in itertools.permutations(ts, 3):
            if F.rel(ADJ, s, t) and F.rel(ADJ, t, u) and not F.rel(ADJ, s, u):
                bad = (s, t, u)
                break
        add(Check(f"transitivity({ADJ})", bad is None, bad))
    if tag.kind == CONVEX_EQUIV:
        bad = None
        for s, t, u in itertools.permutations(ts, 3):
            if (F.rel(ADJ, s, u) and F.rel(LT, s, t) and F.rel(LT, t, u)
                    and not F.rel(ADJ, s, t)):
                bad = (s, t, u)
                break
        add(Check("convexity(~ classes under <)", bad is None, bad))
    if tag.class_bound is not None:
        reps: list[Term] = []
        for t in ts:
            if not any(F.rel(ADJ, t, r) for r in reps):
                reps.append(t)
        ok = len(reps) <= tag.class_bound
        add(Check(f"class-count<={tag.class_bound}(~)", ok,
                  None if ok else (len(reps),)))
    if tag.clique_bound is not None:
        n = tag.clique_bound
        bad = None
        for combo in itertools.combinations(ts, n):
            if all(F.rel(ADJ, u, v) for u, v in itertools.combinations(combo, 2)):
                bad = combo
                break
        add(Check(f"K{n}-freeness(~)", bad is None, bad))
    return rpt


# ---------------------------------------------------------------------------
# finite isomorphism and automorphism search


def _backtrack_maps(A: FiniteStructure, B: FiniteStructure, find_all: bool):
    if set(A.tag.symbols) != set(B.tag.symbols):
        raise ConfigError(f"signature mismatch: {A.tag} vs {B.tag}")
    if len(A.terms) != len(B.terms):
        return []
    syms = A.tag.symbols
    n = len(A.terms)
    MA = [A.rels[s] for s in syms]
    MB = [B.rels[s] for s in syms]

    def profile(M_list, i):
        return tuple((int(M[i].sum()), int(M[:, i].sum())) for M in M_list)

    profA = [profile(MA, i) for i in range(n)]
    profB = [profile(MB, i) for i in range(n)]
    out: list[dict[Term, Term]] = []
    assign = [-1] * n
    used = [False] * n

    def rec(i: int) -> bool:
        if i == n:
            out.append({A.terms[k]: B.terms[assign[k]] for k in range(n)})
            return not find_all
        for j in range(n):
            if used[j] or profA[i] != profB[j]:
                continue
            ok = True
            for k in range(i):
                for M_a, M_b in zip(MA, MB):
                    if M_a[i, k] != M_b[j, assign[k]] or M_a[k, i] != M_b[assign[k], j]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            assign[i] = j
            used[j] = True
            if rec(i + 1):
                return True
            used[j] = False
            assign[i] = -1
        return False

    rec(0)
    return out


def isomorphic(A: FiniteStructure, B: FiniteStructure) -> dict[Term, Term] | None:
    """A relation-preserving bijection (deterministic given the term order),
    or None.  Signature mismatch raises."""
    maps = _backtrack_maps(A, B, find_all=False)
    return maps[0] if maps else None


def automorphisms(S: FiniteStructure) -> list[dict[Term, Term]]:
    """The full automorphism group as a list of term maps; always contains
    the identity."""
    return _backtrack_maps(S, S, find_all=True)
