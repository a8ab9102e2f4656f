"""Structured tree families for tests and benchmarks."""

from __future__ import annotations

import random

from .tree import Tree, random_tree

__all__ = ["FAMILIES", "gen_family", "path", "star", "caterpillar", "spider", "binary", "broom"]


def path(n: int) -> Tree:
    return Tree(n, tuple((i, i + 1) for i in range(n - 1)))


def star(n: int) -> Tree:
    return Tree(n, tuple((0, i) for i in range(1, n)))


def binary(n: int) -> Tree:
    """Complete binary tree in heap order, truncated to ``n`` vertices."""
    return Tree(n, tuple(((i - 1) // 2, i) for i in range(1, n)))


def caterpillar(n: int, seed=None) -> Tree:
    """Spine ``0..L-1`` with every other vertex a leaf hung on a random spine vertex."""
    rng = random.Random(seed)
    spine = max(1, min(n, round(n * rng.uniform(0.1, 0.5))))
    edges = [(i, i + 1) for i in range(spine - 1)]
    edges += [(rng.randrange(spine), v) for v in range(spine, n)]
    return Tree(n, tuple(edges))


def spider(n: int, seed=None) -> Tree:
    """Centre 0 with ``k`` legs of random positive lengths summing to ``n - 1``."""
    rng = random.Random(seed)
    if n <= 2:
        return path(n)
    k = rng.randint(2, max(2, min(n - 1, int((n - 1) ** 0.5))))
    cuts = sorted(rng.sample(range(1, n - 1), k - 1))
    lengths = [b - a for a, b in zip([0] + cuts, cuts + [n - 1])]
    edges = []
    nxt = 1
    for length in lengths:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Tree(n, tuple(edges))


def broom(n: int, handle: int | None = None, seed=None) -> Tree:
    """Path handle with pendant stars: a spine whose vertices carry bristles.

    The first ``handle`` vertices form a bare path; each further spine
    vertex carries a random number of leaves.
    """
    rng = random.Random(seed)
    if handle is None:
        handle = max(1, n // 4)
    handle = min(handle, n)
    edges = [(i, i + 1) for i in range(handle - 1)]
    v = handle
    prev = handle - 1
    while v < n:
        edges.append((prev, v))
        prev = v
        v += 1
        for _ in range(min(rng.randint(0, 12), n - v)):
            edges.append((prev, v))
            v += 1
    return Tree(n, tuple(edges))


FAMILIES = {
    "random": lambda n, seed: random_tree(n, seed),
    "path": lambda n, seed: path(n),
    "star": lambda n, seed: star(n),
    "caterpillar": caterpillar,
    "spider": spider,
    "binary": lambda n, seed: binary(n),
    "broom": lambda n, seed: broom(n, seed=seed),
}


def gen_family(family: str, n: int, seed: int = 0) -> Tree:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    if n < 1:
        raise ValueError("n must be >= 1")
    return FAMILIES[family](n, seed)
