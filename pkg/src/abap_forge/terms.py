"""Element terms: base atoms and witness-chain members.

A witness term ``Wit(stage, wtype, m)`` names the m-th member of the chain
inserted for one canonical type at one extension stage.  Term equality is
structural; the global term order (base atoms by id, witnesses by stage /
type encoding / chain index) exists only to make outputs reproducible and
is never used where an automorphism-equivariant comparison is required.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

if TYPE_CHECKING:  # pragma: no cover
    from .qftypes import AdmissibleType

Atom = Union[str, int]


@dataclass(frozen=True)
class Base:
    ident: Atom

    def __repr__(self) -> str:
        return f"Base({self.ident!r})"


@dataclass(frozen=True, eq=False)
class Wit:
    stage: int
    wtype: "AdmissibleType"
    m: int

    # terms are nested (types hold terms); cache the hash so dict-heavy code
    # does not rewalk the tree on every lookup
    def __hash__(self) -> int:
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.stage, self.wtype, self.m))
            object.__setattr__(self, "_h", h)
        return h

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (isinstance(other, Wit) and self.stage == other.stage
                and self.m == other.m and self.wtype == other.wtype)

    def __repr__(self) -> str:
        return f"Wit({self.stage},{self.wtype.encoding()},{self.m})"


Term = Union[Base, Wit]


def _atom_key(a: Atom):
    # ints sort before strings; within a kind, natural order
    if isinstance(a, bool):  # bools are ints but make lousy atom ids
        a = int(a)
    if isinstance(a, int):
        return (0, a, "")
    return (1, 0, str(a))


def term_key(t: Term):
    """Deterministic global sort key: base atoms first by id, then witnesses
    by (stage, canonical type encoding, chain index)."""
    if isinstance(t, Base):
        return (0, 0, _atom_key(t.ident), "", 0)
    return (1, t.stage, (0, 0, ""), t.wtype.encoding(), t.m)


def term_id(t: Term) -> str:
    """Stable text id; witness ids embed the canonical type encoding."""
    if isinstance(t, Base):
        return str(t.ident)
    return f"x({t.stage};{t.wtype.encoding()};{t.m})"


def sort_terms(terms) -> list[Term]:
    return sorted(terms, key=term_key)
