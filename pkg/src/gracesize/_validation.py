"""Input validation shared by the estimators and the CLI."""

from __future__ import annotations

import numbers
from typing import Iterable

from .tree import Tree, TreeError, parse_tree

__all__ = ["check_tree", "check_trees", "check_epsilon", "check_seed", "check_positive_int"]


def check_tree(obj) -> Tree:
    """Accept a :class:`Tree`, edge-list text, or a sequence of vertex pairs.

    Pairs infer ``n`` as one more than the largest id (a single vertex needs
    an explicit :class:`Tree` or text).
    """
    if isinstance(obj, Tree):
        return obj
    if isinstance(obj, str):
        return parse_tree(obj)
    try:
        pairs = [tuple(int(x) for x in e) for e in obj]
    except (TypeError, ValueError) as exc:
        raise TreeError("syntax", f"cannot read a tree from {type(obj).__name__}") from exc
    if any(len(p) != 2 for p in pairs):
        raise TreeError("syntax", "edges must be pairs")
    if not pairs:
        raise TreeError("empty", "no edges given")
    n = max(max(p) for p in pairs) + 1
    return Tree(n, tuple(pairs))


def check_trees(X: Iterable) -> list[Tree]:
    if isinstance(X, (Tree, str)):
        X = [X]
    out = [check_tree(x) for x in X]
    if not out:
        raise ValueError("expected at least one tree")
    return out


def check_epsilon(epsilon, name: str = "epsilon") -> float:
    if isinstance(epsilon, bool) or not isinstance(epsilon, numbers.Real):
        raise TypeError(f"{name} must be a real number")
    eps = float(epsilon)
    if not 0 < eps < 1:
        raise ValueError(f"{name} must lie in (0, 1), got {epsilon!r}")
    return eps


def check_seed(seed) -> int | None:
    if seed is None:
        return None
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral):
        raise TypeError("seed must be an integer or None")
    return int(seed)


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
