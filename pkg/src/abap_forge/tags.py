"""Class tags for the eleven supported structure classes and their signatures."""

from __future__ import annotations

import re
from dataclasses import dataclass

# Relation symbols.  These strings double as JSON keys.
LT = "<"        # linear order
TRI = "<|"      # second order: linear (ordered linear orders) or partial (linear extensions)
ARROW = "->"    # tournament edge
ADJ = "adj"     # graph adjacency / equivalence

LINEAR = "LinearOrder"
ORDERED_LINEAR = "OrderedLinearOrder"
LOCAL = "LocalOrder"
ORDERED_LOCAL = "OrderedLocalOrder"
GRAPH = "Graph"
KN_FREE = "KnFreeGraph"
ORDERED_GRAPH = "OrderedGraph"
ORDERED_KN_FREE = "OrderedKnFreeGraph"
LINEXT = "LinExtPartialOrder"
CONVEX_EQUIV = "ConvexOrderedEquiv"
BOUNDED_EQUIV = "BoundedOrderedEquiv"

_SIGNATURES = {
    LINEAR: (LT,),
    ORDERED_LINEAR: (LT, TRI),
    LOCAL: (ARROW,),
    ORDERED_LOCAL: (LT, ARROW),
    GRAPH: (ADJ,),
    KN_FREE: (ADJ,),
    ORDERED_GRAPH: (LT, ADJ),
    ORDERED_KN_FREE: (LT, ADJ),
    LINEXT: (LT, TRI),
    CONVEX_EQUIV: (LT, ADJ),
    BOUNDED_EQUIV: (LT, ADJ),
}

_PARAMETRIC = {KN_FREE, ORDERED_KN_FREE, BOUNDED_EQUIV}


class ConfigError(Exception):
    """Configuration mistake: bad tag, signature mismatch, malformed input."""


@dataclass(frozen=True)
class ClassTag:
    """One of the eleven structure classes.  ``n`` parameterizes the K_n-free
    and bounded-class tags; ``n=None`` on BoundedOrderedEquiv means no bound (∞)."""

    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind not in _SIGNATURES:
            raise ConfigError(f"unknown class kind {self.kind!r}")
        if self.kind in (KN_FREE, ORDERED_KN_FREE):
            if self.n is None or self.n < 3:
                raise ConfigError("K_n-free tags require n >= 3")
        elif self.kind == BOUNDED_EQUIV:
            if self.n is not None and self.n < 1:
                raise ConfigError("bounded equivalence tags require n >= 1 or None (no bound)")
        elif self.n is not None:
            raise ConfigError(f"{self.kind} takes no parameter")

    @property
    def symbols(self) -> tuple[str, ...]:
        return _SIGNATURES[self.kind]

    @property
    def has_lt(self) -> bool:
        return LT in self.symbols

    @property
    def has_arrow(self) -> bool:
        return ARROW in self.symbols

    @property
    def has_adj(self) -> bool:
        return ADJ in self.symbols

    @property
    def has_tri(self) -> bool:
        return TRI in self.symbols

    @property
    def tri_is_linear(self) -> bool:
        return self.kind == ORDERED_LINEAR

    @property
    def is_graph_like(self) -> bool:
        return self.kind in (GRAPH, KN_FREE, ORDERED_GRAPH, ORDERED_KN_FREE)

    @property
    def is_equiv(self) -> bool:
        return self.kind in (CONVEX_EQUIV, BOUNDED_EQUIV)

    @property
    def clique_bound(self) -> int | None:
        """Forbidden clique size for the K_n-free tags."""
        return self.n if self.kind in (KN_FREE, ORDERED_KN_FREE) else None

    @property
    def class_bound(self) -> int | None:
        """Cap on the number of equivalence classes (None = unbounded)."""
        return self.n if self.kind == BOUNDED_EQUIV else None

    @property
    def prec_mode(self) -> str | None:
        """How the type order compares parameter slots: via < where a linear
        order is present, via -> on plain tournaments, otherwise undefined."""
        if self.has_lt:
            return "linear"
        if self.kind == LOCAL:
            return "tournament"
        return None

    def __str__(self) -> str:
        if self.kind in _PARAMETRIC:
            return f"{self.kind}({'inf' if self.n is None else self.n})"
        return self.kind


_ALIASES = {
    "linear": LINEAR,
    "ordered-linear": ORDERED_LINEAR,
    "ordered_linear": ORDERED_LINEAR,
    "local": LOCAL,
    "ordered-local": ORDERED_LOCAL,
    "ordered_local": ORDERED_LOCAL,
    "graph": GRAPH,
    "ordered-graph": ORDERED_GRAPH,
    "ordered_graph": ORDERED_GRAPH,
    "linext": LINEXT,
    "convex-equiv": CONVEX_EQUIV,
    "convex_equiv": CONVEX_EQUIV,
    "bounded-equiv": BOUNDED_EQUIV,
    "bounded_equiv": BOUNDED_EQUIV,
}


def parse_tag(text: str) -> ClassTag:
    """Parse ``"KnFreeGraph(3)"``, ``"BoundedOrderedEquiv(inf)"``, plain kind
    names, or the CLI shorthands like ``linear`` and ``knfree:3``."""
    text = text.strip()
    m = re.fullmatch(r"([A-Za-z_-]+)\s*[(:]\s*([0-9]+|inf)\s*\)?", text)
    if m:
        head, arg = m.group(1), m.group(2)
        n = None if arg == "inf" else int(arg)
    else:
        head, n = text, None
    key = head.lower()
    kind = _ALIASES.get(key)
    if kind is None:
        shorthand = {"knfree": KN_FREE, "ordered-knfree": ORDERED_KN_FREE,
                     "ordered_knfree": ORDERED_KN_FREE}
        kind = shorthand.get(key)
    if kind is None:
        for canonical in _SIGNATURES:
            if canonical.lower() == key:
                kind = canonical
                break
    if kind is None:
        raise ConfigError(f"unrecognized class tag {text!r}")
    return ClassTag(kind, n)
