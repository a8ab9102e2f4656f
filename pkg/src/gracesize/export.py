"""DOT export of labelled trees, and the reverse parse used to check round-trips."""

from __future__ import annotations

import re

from .tree import Tree
from .verify import Labelling, LabellingError

__all__ = ["to_dot", "parse_dot"]

_NODE = re.compile(r'^\s*(\d+)\s*\[label="(-?\d+)"\];\s*$')
_EDGE = re.compile(r'^\s*(\d+)\s*--\s*(\d+)\s*\[label="(\d+)"\];\s*$')
_BOUND = re.compile(r'^\s*graph\s*\[label_bound="(\d+)",\s*min_label="(-?\d+)"\];\s*$')


def to_dot(tree: Tree, lab: Labelling, name: str = "T") -> str:
    """Undirected DOT graph: node captions are labels, edge captions colours."""
    lines = [f"graph {name} {{", f'  graph [label_bound="{lab.label_bound}", min_label="{lab.min_label}"];']
    for v in range(tree.n):
        lines.append(f'  {v} [label="{lab[v]}"];')
    for a, b in tree.edges:
        lines.append(f'  {a} -- {b} [label="{abs(lab[a] - lab[b])}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_dot(text: str) -> tuple[Tree, Labelling]:
    """Recover the tree and labelling written by :func:`to_dot`."""
    labels: dict[int, int] = {}
    edges = []
    bound = lo = None
    for raw in text.splitlines()[1:-1]:
        if m := _NODE.match(raw):
            labels[int(m[1])] = int(m[2])
        elif m := _EDGE.match(raw):
            a, b = int(m[1]), int(m[2])
            edges.append((a, b))
            if a in labels and b in labels and abs(labels[a] - labels[b]) != int(m[3]):
                raise LabellingError("dot-mismatch", f"edge {a}--{b} caption disagrees with labels")
        elif m := _BOUND.match(raw):
            bound, lo = int(m[1]), int(m[2])
        elif raw.strip():
            raise LabellingError("syntax", f"unrecognised DOT line {raw.strip()!r}")
    if not labels:
        raise LabellingError("empty", "no nodes in DOT document")
    tree = Tree(len(labels), tuple(edges))
    lab = Labelling(labels, max(labels.values()) if bound is None else bound, 1 if lo is None else lo)
    return tree, lab
