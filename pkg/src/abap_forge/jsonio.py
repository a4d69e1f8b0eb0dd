"""JSON and DOT serialization of finite structures.

Schema: ``{"class": tag, "universe": [atoms], "relations": {"<": [[a,b],...],
"adj": [[a,b],...], ...}}``.  Adjacency pairs are undirected edges; windows
of extensions export with witness terms flattened to their stable text ids.
"""

from __future__ import annotations

import json

import numpy as np

from .structures import FiniteStructure
from .tags import ADJ, ARROW, LT, TRI, ClassTag, ConfigError, parse_tag
from .terms import Base, term_id


def structure_to_json(F: FiniteStructure) -> dict:
    ids = [term_id(t) for t in F.terms]
    rels: dict[str, list] = {}
    for sym, m in F.rels.items():
        pairs = []
        for i, j in np.argwhere(m):
            if sym == ADJ and j < i:
                continue
            pairs.append([ids[int(i)], ids[int(j)]])
        rels[sym] = pairs
    return {"class": str(F.tag), "universe": ids, "relations": rels}


def json_to_structure(doc: dict) -> FiniteStructure:
    try:
        tag = parse_tag(doc["class"])
        atoms = doc["universe"]
        rels = doc.get("relations", {})
    except (KeyError, TypeError) as e:
        raise ConfigError(f"malformed structure document: {e}")
    if len(set(atoms)) != len(atoms):
        raise ConfigError("universe has duplicate atoms")
    return FiniteStructure.from_pairs(tag, atoms, rels)


def dumps(F: FiniteStructure, indent: int | None = 2) -> str:
    return json.dumps(structure_to_json(F), indent=indent, sort_keys=True)


def loads(text: str) -> FiniteStructure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e}")
    return json_to_structure(doc)


def dot_export(F: FiniteStructure) -> str:
    """DOT text: directed edges for -> and <|, undirected for ~, and when a
    linear order is present the nodes are chained left-to-right along it by
    invisible edges."""
    names = {t: f"n{i}" for i, t in enumerate(F.terms)}
    lines = ["digraph window {", "  rankdir=LR;"]
    order = list(F.terms)
    if LT in F.rels:
        r = F.ranks(LT)
        order = [t for _, t in sorted(zip(r.tolist(), F.terms),
                                      key=lambda x: x[0])]
    for t in order:
        lines.append(f'  {names[t]} [label="{term_id(t)}"];')
    if LT in F.rels:
        for a, b in zip(order, order[1:]):
            lines.append(f"  {names[a]} -> {names[b]} [style=invis];")
    for sym, style in ((ARROW, "solid"), (TRI, "dashed")):
        if sym not in F.rels:
            continue
        m = F.rels[sym]
        for i, j in np.argwhere(m):
            lines.append(f'  {names[F.terms[int(i)]]} -> {names[F.terms[int(j)]]}'
                         f' [style={style}];')
    if ADJ in F.rels:
        m = F.rels[ADJ]
        for i, j in np.argwhere(m):
            if j < i:
                continue
            lines.append(f'  {names[F.terms[int(i)]]} -> {names[F.terms[int(j)]]}'
                         f' [dir=none, color=gray30];')
    lines.append("}")
    return "\n".join(lines)


def summary(F: FiniteStructure) -> str:
    counts = {sym: int(m.sum()) for sym, m in F.rels.items()}
    rel_txt = ", ".join(f"{sym}:{c}" for sym, c in counts.items())
    return f"{F.tag}: {len(F.terms)} elements ({rel_txt})"
