"""Morphisms and the two lift constructions.

An automorphism of the base extends to the witness level by mapping each
chain onto the chain of the image type, shifted one step along the chain:
x_{tau,m} -> x_{f(tau),m+1}.  The shift is what leaves no witness fixed.
Isomorphism lifts use the same type transport but keep the chain index, which
is exactly what makes conjugacy square with lifting.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .extend import ExtensionStructure
from .qftypes import map_type
from .structures import FiniteStructure
from .tags import ConfigError
from .terms import Term, Wit


@dataclass
class Morphism:
    """A total rule on terms, finite (table) or lazy (callable)."""

    domain: object
    codomain: object
    rule: Callable[[Term], Term]
    inv: Callable[[Term], Term] | None = None
    name: str = ""

    def fwd(self, t: Term) -> Term:
        return self.rule(t)

    def __call__(self, t: Term) -> Term:
        return self.rule(t)

    @classmethod
    def from_dict(cls, domain, codomain, table: dict[Term, Term],
                  name: str = "") -> "Morphism":
        back = {v: k for k, v in table.items()}
        if len(back) != len(table):
            raise ConfigError("morphism table is not injective")
        return cls(domain, codomain, table.__getitem__, back.get, name)

    def as_pairs(self, terms) -> list[tuple[Term, Term]]:
        return [(t, self.fwd(t)) for t in terms]


def identity(S) -> Morphism:
    return Morphism(S, S, lambda t: t, lambda t: t, "id")


def compose(f: Morphism, g: Morphism, name: str = "") -> Morphism:
    """f after g."""
    inv = None
    if f.inv and g.inv:
        inv = lambda t: g.inv(f.inv(t))
    return Morphism(g.domain, f.codomain, lambda t: f.fwd(g.fwd(t)), inv,
                    name or f"{f.name}*{g.name}")


def shift_morphism(Z, k: int = 1) -> Morphism:
    """The shift n -> n+k on the lazily presented integer chain."""
    from .terms import Base
    return Morphism(Z, Z, lambda t: Base(int(t.ident) + k),
                    lambda t: Base(int(t.ident) - k), f"shift{k:+d}")


# ---------------------------------------------------------------------------
# lifts


def lift_automorphism(phi: Morphism, ext: ExtensionStructure) -> Morphism:
    """Extend an automorphism of the base across one extension stage.  The
    witness rule transports the type through phi and shifts the chain index,
    so the restriction to the base is phi and no witness is fixed."""
    if phi.domain is not ext.base or phi.codomain is not ext.base:
        raise ConfigError("lift_automorphism wants an endomorphism of ext.base")

    def rule(t: Term) -> Term:
        if isinstance(t, Wit) and t.stage == ext.stage:
            return Wit(t.stage, map_type(phi, t.wtype), t.m + 1)
        return phi.fwd(t)

    inv = None
    if phi.inv is not None:
        phi_back = Morphism(ext.base, ext.base, phi.inv, phi.fwd)

        def inv(t: Term) -> Term:
            if isinstance(t, Wit) and t.stage == ext.stage:
                return Wit(t.stage, map_type(phi_back, t.wtype), t.m - 1)
            return phi_back.fwd(t)

    return Morphism(ext, ext, rule, inv, name=f"lift({phi.name})")


def lift_isomorphism(alpha: Morphism, ext0: ExtensionStructure,
                     ext1: ExtensionStructure) -> Morphism:
    """Extend an isomorphism of the bases to the extensions, chain index kept."""
    if alpha.domain is not ext0.base or alpha.codomain is not ext1.base:
        raise ConfigError("lift_isomorphism wants alpha: ext0.base -> ext1.base")

    def rule(t: Term) -> Term:
        if isinstance(t, Wit) and t.stage == ext0.stage:
            return Wit(t.stage, map_type(alpha, t.wtype), t.m)
        return alpha.fwd(t)

    inv = None
    if alpha.inv is not None:
        alpha_back = Morphism(ext1.base, ext0.base, alpha.inv, alpha.fwd)

        def inv(t: Term) -> Term:
            if isinstance(t, Wit) and t.stage == ext1.stage:
                return Wit(t.stage, map_type(alpha_back, t.wtype), t.m)
            return alpha_back.fwd(t)

    return Morphism(ext0, ext1, rule, inv, name=f"lift({alpha.name})")


# ---------------------------------------------------------------------------
# pointwise checks


def fixed_points(f: Morphism, terms) -> list[Term]:
    """Exactly the window terms f leaves in place."""
    return [t for t in terms if f.fwd(t) == t]


def check_conjugation(alpha_hat: Morphism, phi0_t: Morphism, phi1_t: Morphism,
                      terms) -> bool:
    """Whether alpha_hat conjugates the lifted automorphisms: compares
    alpha_hat(phi0(t)) with phi1(alpha_hat(t)) term by term."""
    return conjugation_defect(alpha_hat, phi0_t, phi1_t, terms) is None


def conjugation_defect(alpha_hat, phi0_t, phi1_t, terms):
    for t in terms:
        lhs = alpha_hat.fwd(phi0_t.fwd(t))
        rhs = phi1_t.fwd(alpha_hat.fwd(t))
        if lhs != rhs:
            return (t, lhs, rhs)
    return None


def preserves_relations(f: Morphism, S, terms, sample: int | None = None,
                        seed: int = 0) -> bool:
    """Pointwise relation preservation on window pairs whose images the
    structure can still answer for (clipped chain ends are skipped).  With
    ``sample`` set, that many random pairs are checked instead — the knob for
    lazily presented bases."""
    return first_preservation_defect(f, S, terms, sample, seed) is None


def first_preservation_defect(f: Morphism, S, terms, sample: int | None = None,
                              seed: int = 0):
    pool = [t for t in terms if S.supports(t)]
    images = {t: f.fwd(t) for t in pool}
    pool = [t for t in pool if S.supports(images[t])]
    target = f.codomain
    if sample is None:
        pairs = ((s, t) for s in pool for t in pool if s != t)
    else:
        rng = random.Random(seed)
        pairs = ((rng.choice(pool), rng.choice(pool)) for _ in range(sample))
    for s, t in pairs:
        if s == t:
            continue
        for sym in S.tag.symbols:
            if S.rel(sym, s, t) != target.rel(sym, images[s], images[t]):
                return (sym, s, t)
    return None


def injective_on(f: Morphism, terms) -> bool:
    seen = {}
    for t in terms:
        v = f.fwd(t)
        if v in seen and seen[v] != t:
            return False
        seen[v] = t
    return True


def morphism_pairs_json(f: Morphism, terms) -> list[list[str]]:
    from .terms import term_id
    return [[term_id(t), term_id(f.fwd(t))] for t in terms]
