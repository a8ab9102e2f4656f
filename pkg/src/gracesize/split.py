"""Tree splitting: cut a tree into a protected set, a small waste set and
many identical copies of a small rooted forest."""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .tree import (
    ForestShape,
    RootedComponent,
    RootedForest,
    Tree,
    _bfs_order,
    components,
    rooted_code,
)

__all__ = [
    "SplitResult",
    "InfeasibleSplit",
    "steiner_subtree",
    "steiner_separator",
    "leaf_count_identity",
    "centroid_vertex",
    "split_small_components",
    "bound_components",
    "trim_to_uniform_forest",
    "trim_waste",
    "split_structure",
    "plan_split",
    "SplitPlan",
    "check_split",
]


class InfeasibleSplit(ValueError):
    """Raised when no uniform forest exists for the requested parameters."""

    def __init__(self, message: str, diagnostics: Mapping | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


# ---------------------------------------------------------------- separators


def steiner_subtree(tree: Tree, S: Iterable[int]) -> set[int]:
    """Vertex set of the smallest subtree containing ``S``."""
    S = set(S)
    if not S:
        return set()
    deg = list(tree.degrees)
    alive = set(range(tree.n))
    stack = [v for v in range(tree.n) if deg[v] <= 1 and v not in S]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in tree.adjacency[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] == 1 and w not in S:
                    stack.append(w)
    return alive


def steiner_separator(tree: Tree, S: Iterable[int]) -> set[int]:
    """Neighbours of ``S`` inside the Steiner subtree of ``S``, minus ``S``.

    Every component left after deleting ``S`` and the result sends at most
    one edge to ``S``, and the result has at most ``6|S|`` vertices.
    """
    S = set(S)
    span = steiner_subtree(tree, S)
    return {w for s in S for w in tree.adjacency[s] if w in span and w not in S}


def leaf_count_identity(tree: Tree) -> tuple[int, int]:
    """``(number of leaves, sum over degree>=3 of (deg - 2) + 2)``; always equal."""
    if tree.n < 2:
        raise ValueError("identity needs at least two vertices")
    deg = tree.degrees
    return sum(1 for d in deg if d == 1), sum(d - 2 for d in deg if d >= 3) + 2


def _centroid(adj, comp: list[int], alive: set[int]) -> int:
    """Vertex of ``comp`` whose removal leaves pieces of order <= |comp|/2.

    ``comp`` must be in BFS order from its first vertex.
    """
    size = len(comp)
    parent = {comp[0]: -1}
    for u in comp:
        for w in adj[u]:
            if w in alive and w != parent[u]:
                parent[w] = u
    sub = dict.fromkeys(comp, 1)
    for u in reversed(comp[1:]):
        sub[parent[u]] += sub[u]
    best, best_val = comp[0], size
    for u in comp:
        worst = size - sub[u]
        for w in adj[u]:
            if w in alive and w != parent[u]:
                worst = max(worst, sub[w])
        if worst < best_val or (worst == best_val and u < best):
            best, best_val = u, worst
    return best


def centroid_vertex(tree: Tree) -> int:
    return _centroid(tree.adjacency, _bfs_order(tree.adjacency, 0), set(range(tree.n)))


def _split_component(adj, comp: list[int], k: int) -> set[int]:
    n = len(comp)
    alive = set(comp)
    W: set[int] = set()
    for level in range(1, k + 1):
        limit = n / 2**level
        for piece in components(adj, alive):
            if len(piece) > limit:
                c = _centroid(adj, piece, alive)
                W.add(c)
        alive -= W
    return W


def split_small_components(tree: Tree, k: int) -> set[int]:
    """Recursive centroid removal: at most ``2^(k+1) - 1`` vertices, after
    which every component has order at most ``n / 2^k``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return _split_component(tree.adjacency, _bfs_order(tree.adjacency, 0), k)


def _depth_for(n: int, m: int) -> int:
    return 0 if n <= m else math.ceil(math.log2(n / m))


def bound_components(tree: Tree, m: int) -> set[int]:
    """At most ``4n/m`` vertices whose removal leaves components of order <= m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return split_small_components(tree, _depth_for(tree.n, m))


def _bound_forest(adj, alive: Iterable[int], m: int) -> set[int]:
    W: set[int] = set()
    for comp in components(adj, alive):
        W |= _split_component(adj, comp, _depth_for(len(comp), m))
    return W


# ---------------------------------------------------------------- uniform trimming


def trim_waste(counts: Mapping[str, int], d: int) -> int:
    """Vertices deleted when every class count is cut to a multiple of ``d``."""
    return sum((c % d) * ForestShape.code_order(k) for k, c in counts.items())


def trim_to_uniform_forest(forest: RootedForest, d: int) -> tuple[set[int], ForestShape]:
    """Delete whole components so every rooted class count is a multiple of ``d``.

    Returns the deleted vertices and the per-copy shape ``F`` (the surviving
    forest is ``F x d``).  Within a class the components with the largest
    root ids are the ones deleted.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    by_code: dict[str, list[RootedComponent]] = defaultdict(list)
    for comp in forest.components:
        by_code[forest.code(comp)].append(comp)
    W: set[int] = set()
    per_copy = {}
    for code, comps in by_code.items():
        comps.sort(key=lambda c: c.root)
        keep = len(comps) - len(comps) % d
        for c in comps[keep:]:
            W |= c.vertices
        if keep:
            per_copy[code] = keep // d
    return W, ForestShape(per_copy)


# ---------------------------------------------------------------- full split


@dataclass(frozen=True)
class SplitPlan:
    """Everything before the multiplicity is chosen: separators and rooted classes."""

    S: set[int]
    W1: set[int]
    W2: set[int]
    forest: RootedForest
    counts: Counter

    def waste(self, d: int) -> int:
        """``|W|`` if the classes are trimmed to multiples of ``d``."""
        return len(self.W1) + len(self.W2) + trim_waste(self.counts, d)


def plan_split(tree: Tree, S: Iterable[int] = (), m: int = 8) -> SplitPlan:
    n = tree.n
    S = set(S)
    if any(not 0 <= s < n for s in S):
        raise ValueError("S must be a subset of the vertex set")
    W1 = steiner_separator(tree, S)
    rest = set(range(n)) - S - W1
    W2 = _bound_forest(tree.adjacency, rest, m)
    rest -= W2
    comps = components(tree.adjacency, rest)
    roots = _mark_roots(tree, comps, S)
    forest = RootedForest(
        tree.adjacency,
        tuple(RootedComponent(r, frozenset(c)) for r, c in zip(roots, comps)),
    )
    counts = Counter(forest.code(c) for c in forest.components)
    return SplitPlan(S, W1, W2, forest, counts)


@dataclass(frozen=True)
class SplitResult:
    S: frozenset[int]
    W: frozenset[int]
    shape: ForestShape
    multiplicity: int
    component_roots: Mapping[int, int]  # component index -> root id
    components: tuple[frozenset[int], ...] = field(repr=False)
    parts: Mapping[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "S": sorted(self.S),
            "W": sorted(self.W),
            "shape": dict(self.shape.counts),
            "multiplicity": self.multiplicity,
            "roots": [self.component_roots[i] for i in range(len(self.components))],
            "parts": dict(self.parts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _mark_roots(tree: Tree, comps: list[list[int]], S: set[int]) -> list[int]:
    roots = []
    for comp in comps:
        touching = [u for u in comp if any(w in S for w in tree.adjacency[u])]
        if len(touching) > 1:
            raise AssertionError("component sees S through several vertices")
        if touching:
            u = touching[0]
            assert sum(w in S for w in tree.adjacency[u]) == 1, "root has two S-neighbours"
            roots.append(u)
        else:
            roots.append(min(comp))
    return roots


def split_structure(
    tree: Tree,
    S: Iterable[int] = (),
    zeta: float | None = None,
    *,
    m: int = 8,
    delta: float = 0.1,
    multiplicity: int | None = None,
    plan: SplitPlan | None = None,
) -> SplitResult:
    """Find ``W`` with ``T - (W u S)`` a disjoint union of copies of one rooted forest.

    Steps: Steiner separator around ``S``; centroid cuts so components have
    order at most ``m``; roots are the vertices adjacent to ``S`` (else the
    lowest id); whole components are discarded so each class count becomes
    a multiple of ``d``.  ``d`` is ``floor(zeta * n)`` when ``zeta`` is
    given, ``multiplicity`` if given, otherwise the largest value whose
    trimming waste stays within ``delta * n / 2``.

    A precomputed ``plan`` (same ``S`` and ``m``) skips the separator steps.

    Raises :class:`InfeasibleSplit` when ``d < 1``, nothing survives, or
    ``|W|`` exceeds ``delta * n``.
    """
    n = tree.n
    if plan is None:
        plan = plan_split(tree, S, m)
    elif plan.S != set(S):
        raise ValueError("plan was built for a different S")
    S, W1, W2, forest, counts = plan.S, plan.W1, plan.W2, plan.forest, plan.counts
    budget = delta * n
    diag = {"n": n, "S": len(S), "W1": len(W1), "W2": len(W2), "classes": len(counts)}

    if zeta is not None:
        d = math.floor(zeta * n)
    elif multiplicity is not None:
        d = multiplicity
    else:
        d = 0
        top = max(counts.values(), default=0)
        for cand in range(top, 0, -1):
            if trim_waste(counts, cand) <= budget / 2:
                d = cand
                break
    diag["d"] = d
    if d < 1:
        raise InfeasibleSplit("multiplicity d < 1", diag)
    W3, shape = trim_to_uniform_forest(forest, d)
    diag["W3"] = len(W3)
    W = (W1 | W2 | W3) - S
    diag["W"] = len(W)
    if not shape:
        raise InfeasibleSplit(f"no class has {d} copies", diag)
    if len(W) > budget:
        raise InfeasibleSplit(f"|W| = {len(W)} exceeds delta*n = {budget:g}", diag)
    kept = [c for c in forest.components if not (c.vertices & W3)]
    return SplitResult(
        S=frozenset(S),
        W=frozenset(W),
        shape=shape,
        multiplicity=d,
        component_roots={i: c.root for i, c in enumerate(kept)},
        components=tuple(c.vertices for c in kept),
        parts={"W1": len(W1), "W2": len(W2), "W3": len(W3)},
    )


def check_split(tree: Tree, split: SplitResult) -> None:
    """Re-derive the split invariants from scratch; raise AssertionError on failure."""
    S, W = set(split.S), set(split.W)
    assert not (S & W), "W meets S"
    rest = set(range(tree.n)) - S - W
    comps = components(tree.adjacency, rest)
    codes = Counter()
    for comp in comps:
        touching = [(u, w) for u in comp for w in tree.adjacency[u] if w in S]
        assert len(touching) <= 1, "component has two edges to S"
        root = touching[0][0] if touching else min(comp)
        codes[rooted_code(tree.adjacency, root, set(comp))] += 1
    expected = split.shape.scaled(split.multiplicity).counts
    assert dict(codes) == dict(expected), "surviving forest is not shape x multiplicity"
    assert sorted(split.component_roots.values()) == sorted(
        next(u for u in c if any(w in S for w in tree.adjacency[u])) if any(
            w in S for u in c for w in tree.adjacency[u]) else min(c)
        for c in comps
    )
