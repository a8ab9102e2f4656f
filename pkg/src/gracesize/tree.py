"""Tree and rooted-forest primitives.

Vertex ids are dense 0-based integers.  Labels (1-based) only appear in the
labelling modules.
"""

from __future__ import annotations

import heapq
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Tree",
    "TreeError",
    "RootedComponent",
    "RootedForest",
    "ForestShape",
    "parse_tree",
    "format_tree",
    "random_tree",
    "tree_from_prufer",
    "prufer_sequence",
    "enumerate_trees",
    "rooted_code",
    "free_code",
    "canonical_preorder",
    "components",
    "MAX_ENUMERATE_N",
]

MAX_ENUMERATE_N = 12


class TreeError(ValueError):
    """Malformed tree input.  ``kind`` is a short machine-readable tag."""

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


@dataclass(frozen=True)
class Tree:
    """An undirected tree on vertices ``0..n-1``.

    Edges are stored normalised as ``(min, max)`` pairs in input order.
    Construction validates that the edge set really is a tree.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or n < 1:
            raise TreeError("bad-order", f"vertex count must be >= 1, got {n!r}")
        norm = []
        seen = set()
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise TreeError("id-out-of-range", f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise TreeError("not-a-tree", f"self-loop at {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise TreeError("duplicate-edge", f"edge {key} repeated")
            seen.add(key)
            norm.append(key)
        if len(norm) != n - 1:
            raise TreeError("not-a-tree", f"{len(norm)} edges for {n} vertices")
        object.__setattr__(self, "edges", tuple(norm))
        if n > 1 and len(_bfs_order(self.adjacency, 0)) != n:
            raise TreeError("not-a-tree", "edge set is disconnected (contains a cycle)")

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(a) for a in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def __len__(self) -> int:
        return self.n

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]]) -> "Tree":
        edges = [(u, v) for u, nbrs in enumerate(adj) for v in nbrs if u < v]
        return cls(len(adj), tuple(edges))


def _bfs_order(adj, root, alive=None) -> list[int]:
    order = [root]
    seen = {root}
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for w in adj[u]:
            if w not in seen and (alive is None or w in alive):
                seen.add(w)
                order.append(w)
    return order


def components(adj, alive: Iterable[int]) -> list[list[int]]:
    """Connected components of the subgraph induced on ``alive``.

    Each component is returned in BFS order from its lowest-id vertex;
    components are sorted by that lowest id.
    """
    alive = set(alive)
    out = []
    for v in sorted(alive):
        if v in alive:
            comp = _bfs_order(adj, v, alive)
            alive.difference_update(comp)
            out.append(comp)
    return out


# ---------------------------------------------------------------- text format


def parse_tree(text: str) -> Tree:
    """Parse an edge-list document: first line ``n``, then ``u v`` per edge.

    Blank lines and lines starting with ``#`` are ignored.
    """
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    if not rows:
        raise TreeError("empty", "no vertex count line")
    try:
        n = int(rows[0][0])
        if len(rows[0]) != 1:
            raise ValueError
        edges = []
        for r in rows[1:]:
            if len(r) != 2:
                raise ValueError
            edges.append((int(r[0]), int(r[1])))
    except ValueError:
        raise TreeError("syntax", "expected 'n' then 'u v' lines") from None
    return Tree(n, tuple(edges))


def format_tree(tree: Tree) -> str:
    lines = [str(tree.n)] + [f"{u} {v}" for u, v in tree.edges]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- Prüfer codes


def tree_from_prufer(seq: Sequence[int], n: int | None = None) -> Tree:
    """Decode a Prüfer sequence of length ``n - 2``."""
    if n is None:
        n = len(seq) + 2
    if n == 1:
        return Tree(1, ())
    if n == 2:
        return Tree(2, ((0, 1),))
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return Tree(n, tuple(edges))


def prufer_sequence(tree: Tree) -> tuple[int, ...]:
    n = tree.n
    if n <= 2:
        return ()
    degree = list(tree.degrees)
    removed = [False] * n
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        removed[leaf] = True
        for w in tree.adjacency[leaf]:
            if not removed[w]:
                seq.append(w)
                degree[w] -= 1
                if degree[w] == 1:
                    heapq.heappush(leaves, w)
                break
    return tuple(seq)


def random_tree(n: int, seed: int | random.Random | None = None) -> Tree:
    """Uniform labelled tree on ``n`` vertices via a random Prüfer sequence."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return tree_from_prufer([rng.randrange(n) for _ in range(max(n - 2, 0))], n)


# ---------------------------------------------------------------- canonical codes


def _rooted_codes(adj, root, alive=None) -> tuple[dict[int, str], dict[int, list[int]]]:
    order = _bfs_order(adj, root, alive)
    parent = {root: -1}
    children: dict[int, list[int]] = {}
    for u in order:
        kids = []
        for w in adj[u]:
            if w != parent[u] and (alive is None or w in alive):
                parent[w] = u
                kids.append(w)
        children[u] = kids
    code: dict[int, str] = {}
    for u in reversed(order):
        kids = children[u]
        if kids:
            kids.sort(key=code.__getitem__)
            code[u] = "(" + "".join(code[w] for w in kids) + ")"
        else:
            code[u] = "()"
    return code, children


def rooted_code(tree: Tree | Sequence[Sequence[int]], root: int, alive=None) -> str:
    """AHU parenthesis code; equal iff the rooted trees are isomorphic.

    ``tree`` may be a :class:`Tree` or a raw adjacency list, in which case
    ``alive`` restricts to the component of ``root`` inside that vertex set.
    """
    adj = tree.adjacency if isinstance(tree, Tree) else tree
    n = len(adj)
    if not (0 <= root < n) or (alive is not None and root not in alive):
        raise TreeError("bad-root", f"root {root} not in tree")
    return _rooted_codes(adj, root, alive)[0][root]


def canonical_preorder(adj, root, alive=None) -> list[int]:
    """Preorder with children visited in code order.

    For rooted-isomorphic trees the i-th vertices of their canonical
    preorders correspond under an isomorphism.
    """
    _, children = _rooted_codes(adj, root, alive)
    out = []
    stack = [root]
    while stack:
        u = stack.pop()
        out.append(u)
        stack.extend(reversed(children[u]))
    return out


def _centres(tree: Tree) -> list[int]:
    n = tree.n
    if n <= 2:
        return list(range(n))
    deg = list(tree.degrees)
    layer = [v for v in range(n) if deg[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for leaf in layer:
            for w in tree.adjacency[leaf]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def free_code(tree: Tree) -> str:
    """Canonical code of the unrooted tree (minimum over its centres)."""
    return min(rooted_code(tree, c) for c in _centres(tree))


def enumerate_trees(n: int) -> Iterator[Tree]:
    """Yield one tree per isomorphism class on ``n`` vertices (n <= 12).

    Classes on ``n`` vertices are grown from classes on ``n - 1`` by
    attaching a leaf anywhere, then deduplicated by :func:`free_code`.
    """
    if not 1 <= n <= MAX_ENUMERATE_N:
        raise ValueError(f"enumerate_trees supports 1 <= n <= {MAX_ENUMERATE_N}")
    yield from _classes(n)


def _classes(n: int) -> list[Tree]:
    level = [Tree(1, ())]
    for size in range(2, n + 1):
        found: dict[str, Tree] = {}
        for t in level:
            for v in range(t.n):
                grown = Tree(size, t.edges + ((v, size - 1),))
                found.setdefault(free_code(grown), grown)
        level = [found[k] for k in sorted(found)]
    return level


# ---------------------------------------------------------------- rooted forests


@dataclass(frozen=True)
class RootedComponent:
    root: int
    vertices: frozenset[int]

    def __post_init__(self):
        if self.root not in self.vertices:
            raise TreeError("bad-root", f"root {self.root} not in its component")


@dataclass(frozen=True)
class RootedForest:
    """Rooted components living inside a shared adjacency structure."""

    adjacency: Sequence[Sequence[int]]
    components: tuple[RootedComponent, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for c in self.components:
            if seen & c.vertices:
                raise TreeError("overlap", "forest components share vertices")
            seen |= c.vertices

    @property
    def n_vertices(self) -> int:
        return sum(len(c.vertices) for c in self.components)

    def code(self, comp: RootedComponent) -> str:
        return rooted_code(self.adjacency, comp.root, comp.vertices)

    def shape(self) -> "ForestShape":
        return ForestShape(Counter(self.code(c) for c in self.components))


@dataclass(frozen=True)
class ForestShape:
    """Multiset of rooted-tree codes."""

    counts: Mapping[str, int]

    def __post_init__(self):
        clean = {k: int(v) for k, v in self.counts.items()}
        if any(v <= 0 for v in clean.values()):
            raise ValueError("ForestShape counts must be positive")
        object.__setattr__(self, "counts", dict(sorted(clean.items())))

    @staticmethod
    def code_order(code: str) -> int:
        return code.count("(")

    @property
    def order(self) -> int:
        return sum(self.code_order(k) * v for k, v in self.counts.items())

    def scaled(self, d: int) -> "ForestShape":
        return ForestShape({k: v * d for k, v in self.counts.items()})

    def __bool__(self) -> bool:
        return bool(self.counts)
