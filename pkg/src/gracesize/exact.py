"""Exhaustive search for graceful labellings and exact gracesize on small trees."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .tree import Tree
from .verify import Labelling, is_graceful

__all__ = ["SearchStats", "solve_graceful", "max_gracesize", "MAX_EXACT_GRACESIZE_N"]

MAX_EXACT_GRACESIZE_N = 11


@dataclass(frozen=True)
class SearchStats:
    nodes_expanded: int
    best_found: int
    proven_optimal: bool
    elapsed: float
    budget_exhausted: bool = False


def _search_order(tree: Tree) -> tuple[list[int], list[int]]:
    """Connected vertex order, highest degree first among frontier vertices.

    Returns the order and, per position, the index of the unique earlier
    neighbour (-1 for the first vertex).
    """
    deg = tree.degrees
    start = max(range(tree.n), key=lambda v: (deg[v], -v))
    order = [start]
    pos = {start: 0}
    parent_pos = [-1]
    frontier = {w: 0 for w in tree.adjacency[start]}
    while frontier:
        v = max(frontier, key=lambda w: (deg[w], -w))
        parent_pos.append(frontier.pop(v))
        pos[v] = len(order)
        order.append(v)
        for w in tree.adjacency[v]:
            if w not in pos:
                frontier[w] = pos[v]
    return order, parent_pos


def _extremes_first(n: int) -> list[int]:
    out = []
    lo, hi = 1, n
    while lo <= hi:
        out.append(lo)
        if hi != lo:
            out.append(hi)
        lo += 1
        hi -= 1
    return out


def solve_graceful(tree: Tree, budget: int = 10_000_000) -> tuple[Labelling | None, SearchStats]:
    """Backtracking search for a graceful labelling of ``tree``.

    Vertices are labelled in a connected, degree-first order; every new
    vertex closes exactly one edge, and the branch dies as soon as that
    edge repeats a colour.  The first vertex is restricted to labels
    ``<= ceil(n/2)`` (complementation symmetry).  ``budget`` caps the number
    of label assignments tried.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    t0 = time.perf_counter()
    n = tree.n
    if n == 1:
        lab = Labelling({0: 1}, 1)
        return lab, SearchStats(1, 0, True, time.perf_counter() - t0)
    order, parent_pos = _search_order(tree)
    label_order = _extremes_first(n)
    first_labels = [x for x in label_order if x <= (n + 1) // 2]
    assigned = [0] * n  # by position
    used_label = [False] * (n + 1)
    used_colour = [False] * n
    nodes = 0
    exhausted = False

    def rec(k: int) -> bool:
        nonlocal nodes, exhausted
        if k == n:
            return True
        p = assigned[parent_pos[k]]
        for x in label_order:
            if used_label[x]:
                continue
            c = abs(x - p)
            if used_colour[c]:
                continue
            nodes += 1
            if nodes > budget:
                exhausted = True
                return False
            used_label[x] = used_colour[c] = True
            assigned[k] = x
            if rec(k + 1):
                return True
            used_label[x] = used_colour[c] = False
            if exhausted:
                return False
        return False

    found = False
    for x in first_labels:
        nodes += 1
        if nodes > budget:
            exhausted = True
            break
        used_label[x] = True
        assigned[0] = x
        if rec(1):
            found = True
            break
        used_label[x] = False
        if exhausted:
            break
    elapsed = time.perf_counter() - t0
    if not found:
        return None, SearchStats(nodes, 0, not exhausted, elapsed, exhausted)
    lab = Labelling({order[i]: assigned[i] for i in range(n)}, n)
    assert is_graceful(tree, lab)
    return lab, SearchStats(nodes, n - 1, True, elapsed)


def max_gracesize(tree: Tree, use_graceful_search: bool = True) -> tuple[Labelling, int]:
    """Exact gracesize and a witnessing bijective labelling (``n <= 11``).

    When ``use_graceful_search`` is set a graceful labelling is tried first,
    which settles the optimum at ``n - 1`` immediately.  Otherwise a plain
    branch and bound over bijections runs, pruning whenever the colours
    still obtainable cannot beat the incumbent.
    """
    n = tree.n
    if n > MAX_EXACT_GRACESIZE_N:
        raise ValueError(f"exact gracesize supports n <= {MAX_EXACT_GRACESIZE_N}")
    if n == 1:
        return Labelling({0: 1}, 1), 0
    if use_graceful_search:
        lab, _ = solve_graceful(tree)
        if lab is not None:
            return lab, n - 1

    order, parent_pos = _search_order(tree)
    label_order = _extremes_first(n)
    assigned = [0] * n
    used_label = [False] * (n + 1)
    colour_count = [0] * n
    best = [-1, None]
    distinct = 0

    def rec(k: int):
        nonlocal distinct
        if distinct + (n - k) <= best[0]:
            return
        if k == n:
            best[0] = distinct
            best[1] = list(assigned)
            return
        p = assigned[parent_pos[k]]
        for x in label_order:
            if used_label[x]:
                continue
            c = abs(x - p)
            used_label[x] = True
            assigned[k] = x
            colour_count[c] += 1
            if colour_count[c] == 1:
                distinct += 1
            rec(k + 1)
            if colour_count[c] == 1:
                distinct -= 1
            colour_count[c] -= 1
            used_label[x] = False
            if best[0] == n - 1:
                return

    for x in label_order:
        if x > (n + 1) // 2:
            continue
        used_label[x] = True
        assigned[0] = x
        rec(1)
        used_label[x] = False
        if best[0] == n - 1:
            break
    lab = Labelling({order[i]: best[1][i] for i in range(n)}, n)
    return lab, best[0]
