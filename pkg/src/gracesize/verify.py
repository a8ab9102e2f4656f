"""Edge-difference census and near-graceful certification."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .tree import Tree

__all__ = [
    "Labelling",
    "LabellingError",
    "EmbeddingReport",
    "edge_differences",
    "colour_census",
    "gracesize_of",
    "is_graceful",
    "is_rainbow",
    "check_report",
    "parse_labelling",
    "format_labelling",
    "near_graceful_thresholds",
]


class LabellingError(ValueError):
    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


@dataclass(frozen=True)
class Labelling:
    """Injective map vertex id -> integer label in ``[min_label, label_bound]``.

    ``min_label`` is 1 for ordinary labellings; the hub embeddings use 0.
    """

    labels: Mapping[int, int]
    label_bound: int
    min_label: int = 1

    def __post_init__(self):
        labels = {int(k): int(v) for k, v in self.labels.items()}
        object.__setattr__(self, "labels", labels)
        if len(set(labels.values())) != len(labels):
            dup = [v for v, c in Counter(labels.values()).items() if c > 1][0]
            raise LabellingError("not-injective", f"label {dup} used twice")
        for x, lab in labels.items():
            if not self.min_label <= lab <= self.label_bound:
                raise LabellingError(
                    "out-of-range",
                    f"vertex {x} has label {lab} outside [{self.min_label}, {self.label_bound}]",
                )

    def __getitem__(self, v: int) -> int:
        return self.labels[v]

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def max_label(self) -> int:
        return max(self.labels.values(), default=0)

    @classmethod
    def from_sequence(cls, seq: Sequence[int], label_bound: int | None = None) -> "Labelling":
        return cls(dict(enumerate(seq)), max(seq) if label_bound is None else label_bound)


def colour_census(edges: Iterable[tuple[int, int]], labels: Mapping[int, int]) -> Counter:
    return Counter(abs(labels[u] - labels[v]) for u, v in edges)


def edge_differences(tree: Tree, lab: Labelling) -> Counter:
    """Multiset of edge colours ``|phi(x) - phi(y)|``, one per edge."""
    missing = [v for v in range(tree.n) if v not in lab.labels]
    if missing:
        raise LabellingError("unassigned", f"vertex {missing[0]} has no label")
    return colour_census(tree.edges, lab.labels)


def gracesize_of(tree: Tree, lab: Labelling) -> int:
    """Number of distinct edge colours under ``lab``."""
    return len(edge_differences(tree, lab))


def is_rainbow(edges: Iterable[tuple[int, int]], labels: Mapping[int, int]) -> bool:
    cols = [abs(labels[u] - labels[v]) for u, v in edges]
    return len(cols) == len(set(cols))


def is_graceful(tree: Tree, lab: Labelling) -> bool:
    n = tree.n
    if lab.label_bound != n or sorted(lab.labels.values()) != list(range(1, n + 1)):
        return False
    return gracesize_of(tree, lab) == n - 1


def near_graceful_thresholds(n: int, epsilon: float) -> tuple[int, int]:
    """``(ceil((1-eps) n), floor((1+eps) n))`` computed exactly."""
    eps = Fraction(str(epsilon))
    return math.ceil((1 - eps) * n), math.floor((1 + eps) * n)


@dataclass(frozen=True)
class EmbeddingReport:
    n: int
    edges: int
    epsilon: float
    label_bound: int
    labels_used: int
    max_label: int
    distinct_colours: int
    repeated_colours: tuple[tuple[int, int], ...]
    graceful: bool
    near_graceful: bool
    stage_log: tuple[tuple[str, str], ...] = field(default=())

    @property
    def excess(self) -> int:
        return sum(m - 1 for _, m in self.repeated_colours)

    @property
    def fraction(self) -> float:
        return self.distinct_colours / self.n

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": self.edges,
            "epsilon": self.epsilon,
            "label_bound": self.label_bound,
            "labels_used": self.labels_used,
            "max_label": self.max_label,
            "distinct_colours": self.distinct_colours,
            "repeated_colours": [list(p) for p in self.repeated_colours],
            "graceful": self.graceful,
            "near_graceful": self.near_graceful,
            "stage_log": [list(p) for p in self.stage_log],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "EmbeddingReport":
        return cls(
            n=d["n"],
            edges=d["edges"],
            epsilon=d["epsilon"],
            label_bound=d["label_bound"],
            labels_used=d["labels_used"],
            max_label=d["max_label"],
            distinct_colours=d["distinct_colours"],
            repeated_colours=tuple(tuple(p) for p in d["repeated_colours"]),
            graceful=d["graceful"],
            near_graceful=d["near_graceful"],
            stage_log=tuple(tuple(p) for p in d["stage_log"]),
        )


def check_report(
    tree: Tree,
    lab: Labelling,
    epsilon: float,
    stage_log: Sequence[tuple[str, str]] = (),
) -> EmbeddingReport:
    """Recount colours and decide the graceful / near-graceful verdicts.

    near_graceful means at least ``ceil((1-eps) n)`` distinct colours (capped
    at the edge count, so graceful implies near-graceful) and no label above
    ``floor((1+eps) n)``.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    census = edge_differences(tree, lab)
    distinct = len(census)
    repeated = tuple(sorted((c, m) for c, m in census.items() if m > 1))
    low, high = near_graceful_thresholds(tree.n, epsilon)
    low = min(low, tree.n - 1)
    report = EmbeddingReport(
        n=tree.n,
        edges=tree.n - 1,
        epsilon=epsilon,
        label_bound=lab.label_bound,
        labels_used=len(lab),
        max_label=lab.max_label,
        distinct_colours=distinct,
        repeated_colours=repeated,
        graceful=is_graceful(tree, lab),
        near_graceful=distinct >= low and lab.max_label <= high,
        stage_log=tuple((str(a), str(b)) for a, b in stage_log),
    )
    assert report.distinct_colours + report.excess == report.edges
    return report


# ---------------------------------------------------------------- documents


def format_labelling(lab: Labelling) -> str:
    lines = [f"# label_bound {lab.label_bound}"]
    lines += [f"{v} {lab.labels[v]}" for v in sorted(lab.labels)]
    return "\n".join(lines) + "\n"


def parse_labelling(text: str) -> Labelling:
    """Parse ``vertex label`` lines; an optional ``# label_bound N`` header
    fixes the bound, otherwise the maximum label is used."""
    labels: dict[int, int] = {}
    bound = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "label_bound":
                bound = int(parts[1])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise LabellingError("syntax", f"bad labelling line {line!r}")
        v, lab = int(parts[0]), int(parts[1])
        if v in labels:
            raise LabellingError("duplicate-vertex", f"vertex {v} labelled twice")
        labels[v] = lab
    if not labels:
        raise LabellingError("empty", "no labels found")
    return Labelling(labels, max(labels.values()) if bound is None else bound)
