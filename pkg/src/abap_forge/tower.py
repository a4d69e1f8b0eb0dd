"""Iterated extension towers and the conjugacy reduction at desk scale.

``reduction`` sends a structure A to the d-fold lift of its identity map.
The lifted map fixes exactly the seed (every witness shifts along its chain),
so two seeds with isomorphic fixed sets are isomorphic — the backward half —
while lifting an isomorphism stage by stage conjugates the two lifted
identities — the forward half.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .extend import ExtensionStructure, extend
from .lifts import (Morphism, check_conjugation, fixed_points, identity,
                    lift_automorphism, lift_isomorphism)
from .structures import FiniteStructure, FiniteWindow, validate_class
from .tags import ConfigError
from .terms import Term


class TowerStageError(Exception):
    def __init__(self, stage: int, report):
        self.stage = stage
        self.report = report
        super().__init__(f"stage {stage} window failed validation:\n{report.summary()}")


@dataclass
class Tower:
    """Seed plus d iterated extensions; stage s extends the materialized
    window of stage s-1, so every stage's parameters come from the previous
    window."""

    seed: object
    window: FiniteWindow
    exts: list[ExtensionStructure] = field(default_factory=list)
    snaps: list[FiniteStructure] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.exts)

    def stage_terms(self, s: int) -> list[Term]:
        return list(self.snaps[s].terms)

    def lift_chain(self, phi: Morphism) -> list[Morphism]:
        """Iterated automorphism lifts of a seed automorphism; entry s acts on
        the stage-s window (entry 0 is phi itself)."""
        chain = [phi]
        for s, ext in enumerate(self.exts):
            lifted = lift_automorphism(chain[-1], ext)
            chain.append(Morphism(self.snaps[s + 1], self.snaps[s + 1],
                                  lifted.rule, lifted.inv, lifted.name))
        return chain


def build_tower(A, depth: int, window: FiniteWindow | None = None,
                validate: bool = True) -> Tower:
    """d iterated extensions of A; with ``validate`` every stage window is
    checked against the class axioms and failures name the offending stage."""
    window = window or FiniteWindow()
    tower = Tower(A, window)
    tower.snaps.append(A.materialize(window))
    if validate:
        rpt = validate_class(tower.snaps[0])
        if not rpt.passed:
            raise TowerStageError(0, rpt)
    base = A
    for s in range(1, depth + 1):
        ext = extend(base, window)
        tower.exts.append(ext)
        snap = ext.materialize()
        tower.snaps.append(snap)
        if validate:
            rpt = validate_class(snap)
            if not rpt.passed:
                raise TowerStageError(s, rpt)
        base = snap
    return tower


def reduction(A, depth: int, window: FiniteWindow | None = None,
              validate: bool = True) -> tuple[FiniteStructure, Morphism, Tower]:
    """The stage-d window of the limit together with the d-fold lift of the
    identity of A (the reduction's output automorphism)."""
    tower = build_tower(A, depth, window, validate)
    chain = tower.lift_chain(identity(A))
    phi = chain[depth]
    if depth == 0:
        phi = Morphism(tower.snaps[0], tower.snaps[0], phi.rule, phi.inv, "id")
    return tower.snaps[depth], phi, tower


def iso_lift_chain(alpha: Morphism, t0: Tower, t1: Tower) -> list[Morphism]:
    """Stage-wise isomorphism lifts between two towers of equal depth."""
    if t0.depth != t1.depth:
        raise ConfigError("towers must have equal depth")
    chain = [alpha]
    for s in range(t0.depth):
        lifted = lift_isomorphism(chain[-1], t0.exts[s], t1.exts[s])
        chain.append(Morphism(t0.snaps[s + 1], t1.snaps[s + 1],
                              lifted.rule, lifted.inv, lifted.name))
    return chain


def verify_forward(A0, A1, alpha: Morphism | dict, depth: int,
                   window: FiniteWindow | None = None,
                   phi0: Morphism | None = None,
                   phi1: Morphism | None = None) -> bool:
    """Forward soundness of the reduction: lift alpha alongside the two
    automorphism chains (the identities by default) and insist the lifted map
    conjugates them at every stage window."""
    window = window or FiniteWindow()
    t0 = build_tower(A0, depth, window)
    t1 = build_tower(A1, depth, window)
    if isinstance(alpha, dict):
        alpha = Morphism.from_dict(A0, A1, alpha, "alpha")
    phi0 = phi0 or identity(A0)
    phi1 = phi1 or identity(A1)
    if not check_conjugation(alpha, phi0, phi1, t0.stage_terms(0)):
        return False
    chain_a = iso_lift_chain(alpha, t0, t1)
    chain_0 = t0.lift_chain(phi0)
    chain_1 = t1.lift_chain(phi1)
    return all(
        check_conjugation(chain_a[s], chain_0[s], chain_1[s], t0.stage_terms(s))
        for s in range(1, depth + 1))


def verify_backward(A0, A1, depth: int,
                    window: FiniteWindow | None = None) -> bool:
    """Backward soundness: the fixed sets of the two reduction maps carry the
    seeds, and they are isomorphic exactly when the seeds are."""
    from .structures import isomorphic

    window = window or FiniteWindow()
    lim0, phi0, _ = reduction(A0, depth, window)
    lim1, phi1, _ = reduction(A1, depth, window)
    f0 = lim0.restrict(fixed_points(phi0, lim0.terms))
    f1 = lim1.restrict(fixed_points(phi1, lim1.terms))
    if isomorphic(f0, A0.materialize(window)) is None:
        return False
    if isomorphic(f1, A1.materialize(window)) is None:
        return False
    seeds_iso = isomorphic(A0.materialize(window), A1.materialize(window)) is not None
    fixed_iso = isomorphic(f0, f1) is not None
    return seeds_iso == fixed_iso


# ---------------------------------------------------------------------------
# homogeneity probe (diagnostic only)


@dataclass
class ProbeReport:
    trials: int
    sampled: int
    extended: int

    @property
    def fraction(self) -> float:
        return self.extended / self.sampled if self.sampled else 0.0

    def summary(self) -> str:
        return (f"{self.extended}/{self.sampled} sampled partial automorphisms "
                f"extended one more point ({self.fraction:.0%})")


def homogeneity_probe(tower: Tower, trials: int = 50, seed: int = 0,
                      max_dom: int = 2) -> ProbeReport:
    """Sample partial automorphisms of the top window and report how often
    one more point extends inside the window.  A diagnostic for how closely a
    finite tower approximates the homogeneous limit, never a proof."""
    S = tower.snaps[tower.depth]
    terms = list(S.terms)
    rng = random.Random(seed)
    syms = S.tag.symbols
    sampled = extended = 0
    if len(terms) < 2:
        return ProbeReport(trials, 0, 0)

    def preserves(dom, img):
        for (s, fs), (t, ft) in itertools.combinations(zip(dom, img), 2):
            for sym in syms:
                if S.rel(sym, s, t) != S.rel(sym, fs, ft) \
                        or S.rel(sym, t, s) != S.rel(sym, ft, fs):
                    return False
        return True

    for _ in range(trials):
        k = rng.randint(1, min(max_dom, len(terms)))
        dom = rng.sample(terms, k)
        img = _random_partial_image(S, dom, terms, rng, preserves)
        if img is None:
            continue
        sampled += 1
        fresh = [t for t in terms if t not in dom]
        s_new = rng.choice(fresh)
        ok = any(
            t_new not in img and
            preserves(dom + [s_new], img + [t_new])
            for t_new in terms)
        extended += bool(ok)
    return ProbeReport(trials, sampled, extended)


def _random_partial_image(S, dom, terms, rng, preserves):
    pool = list(terms)
    rng.shuffle(pool)
    img: list[Term] = []
    for i, _s in enumerate(dom):
        found = None
        for cand in pool:
            if cand in img:
                continue
            if preserves(dom[:i + 1], img + [cand]):
                found = cand
                break
        if found is None:
            return None
        img.append(found)
    return img
