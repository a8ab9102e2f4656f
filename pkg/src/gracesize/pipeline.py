"""Top-level near-graceful driver, degree windows and the repair pass."""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .embed import SMALL_EXACT_N, EmbeddingError, embed_rooted_structure
from .exact import solve_graceful
from .split import InfeasibleSplit, SplitPlan, plan_split, split_structure
from .tree import Tree
from .verify import EmbeddingReport, Labelling, check_report, edge_differences, near_graceful_thresholds

__all__ = [
    "DegreeWindow",
    "PipelineConfig",
    "degree_ladder",
    "degree_window",
    "repair_pass",
    "near_graceful",
    "trim_leaves",
    "place_waste",
]


# ---------------------------------------------------------------- degree windows


def degree_ladder(n: int, epsilon: float, base: int = 8, ratio: int = 4) -> list[int]:
    """``base * ratio^i`` capped at ``n``, for ``i = 0..ceil(4/eps)``."""
    count = math.ceil(4 / Fraction(str(epsilon)))
    return [min(base * ratio**i, n) for i in range(count + 1)]


@dataclass(frozen=True)
class DegreeWindow:
    index: int
    low: int
    high: int
    U: frozenset[int]
    S_high: frozenset[int]
    edges_touching_U: int


def degree_window(tree: Tree, epsilon: float, ladder: Sequence[int] | None = None) -> DegreeWindow:
    """First window ``[D_i, D_{i+1})`` whose vertices touch at most ``eps n / 2`` edges.

    Every edge touches at most two windows, so with ``ceil(4/eps)`` windows
    one of them is light.  ``S_high`` holds the vertices of degree at least
    the window's upper end.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    n = tree.n
    if ladder is None:
        ladder = degree_ladder(n, epsilon)
    if len(ladder) < 2 or any(a > b for a, b in zip(ladder, ladder[1:])):
        raise ValueError("ladder must be non-decreasing with at least two values")
    deg = tree.degrees
    limit = Fraction(str(epsilon)) * n / 2
    for i in range(len(ladder) - 1):
        lo, hi = ladder[i], ladder[i + 1]
        U = {v for v in range(n) if lo <= deg[v] < hi}
        touching = sum(1 for a, b in tree.edges if a in U or b in U)
        if touching <= limit:
            S_high = frozenset(v for v in range(n) if deg[v] >= hi)
            return DegreeWindow(i, lo, hi, frozenset(U), S_high, touching)
    raise AssertionError("no light degree window; the ladder is too short for this epsilon")


# ---------------------------------------------------------------- repair


class _ColourState:
    def __init__(self, tree: Tree, lab: Labelling):
        self.n = tree.n
        self.bound = lab.label_bound
        self.lo = lab.min_label
        self.lab = np.array([lab[v] for v in range(tree.n)], dtype=np.int64)
        self.nbrs = [np.fromiter(a, dtype=np.int64, count=len(a)) for a in tree.adjacency]
        e = np.array(tree.edges, dtype=np.int64).reshape(-1, 2)
        self.eu, self.ev = e[:, 0], e[:, 1]
        self.cnt = np.zeros(self.bound - self.lo + 2, dtype=np.int64)
        np.add.at(self.cnt, np.abs(self.lab[self.eu] - self.lab[self.ev]), 1)
        self.free = np.ones(self.bound + 1, dtype=bool)
        self.free[: self.lo] = False
        self.free[self.lab] = False
        self.distinct = int(np.count_nonzero(self.cnt))

    def dup_vertices(self) -> np.ndarray:
        c = np.abs(self.lab[self.eu] - self.lab[self.ev])
        bad = self.cnt[c] > 1
        return np.unique(np.concatenate([self.eu[bad], self.ev[bad]]))

    def best_move(self, x: int) -> tuple[int, int]:
        """``(net gain, label)`` of the best relabelling of ``x``; label -1 if none."""
        cand = np.flatnonzero(self.free)
        if not len(cand):
            return 0, -1
        a = self.lab[self.nbrs[x]]
        old = np.abs(self.lab[x] - a)
        np.subtract.at(self.cnt, old, 1)
        try:
            loss = len(np.unique(old[self.cnt[old] == 0]))
            C = np.abs(cand[:, None] - a[None, :])
            if C.shape[1] > 1:
                C.sort(axis=1)
                zero = self.cnt[C] == 0
                fresh = np.ones_like(zero)
                fresh[:, 1:] = C[:, 1:] != C[:, :-1]
                gain = np.count_nonzero(zero & fresh, axis=1)
            else:
                gain = (self.cnt[C[:, 0]] == 0).astype(np.int64)
        finally:
            np.add.at(self.cnt, old, 1)
        net = gain - loss
        i = int(np.argmax(net))  # first maximum: smallest label
        return int(net[i]), int(cand[i])

    def move(self, x: int, q: int):
        a = self.lab[self.nbrs[x]]
        np.subtract.at(self.cnt, np.abs(self.lab[x] - a), 1)
        self.free[self.lab[x]] = True
        self.lab[x] = q
        self.free[q] = False
        np.add.at(self.cnt, np.abs(q - a), 1)
        self.distinct = int(np.count_nonzero(self.cnt))

    def labelling(self) -> Labelling:
        return Labelling(dict(enumerate(self.lab.tolist())), self.bound, self.lo)


def repair_pass(
    tree: Tree,
    lab: Labelling,
    budget: int | None = None,
    trace: list[int] | None = None,
) -> Labelling:
    """Relabel endpoints of repeated-colour edges with unused labels.

    Vertices touching a repeated colour are visited in id order; each moves
    to the unused label (within ``[min_label, label_bound]``) that raises
    the distinct-colour count the most, smallest label on ties, and only if
    the count strictly rises.  Passes repeat until one makes no move or
    ``budget`` vertex evaluations are spent.  ``trace`` receives the count
    before the first move and after every move.
    """
    if tree.n < 2:
        return lab
    st = _ColourState(tree, lab)
    if trace is not None:
        trace.append(st.distinct)
    spent = 0
    while budget is None or spent < budget:
        moved = False
        for x in st.dup_vertices().tolist():
            if budget is not None and spent >= budget:
                break
            spent += 1
            net, q = st.best_move(x)
            if net > 0:
                before = st.distinct
                st.move(x, q)
                assert st.distinct == before + net
                moved = True
                if trace is not None:
                    trace.append(st.distinct)
        if not moved:
            break
    if spent == 0:
        return lab
    return st.labelling()


# ---------------------------------------------------------------- driver


@dataclass(frozen=True)
class PipelineConfig:
    """Desk-scale settings for :func:`near_graceful`.

    ``component_bounds`` are the component orders tried by the splitter;
    ``max_block`` caps the multiplicity searched; ``hub_slack`` is the
    minimum spare fraction of interval indices the hub embedding needs.
    """

    ladder_base: int = 8
    ladder_ratio: int = 4
    component_bounds: tuple[int, ...] = (4, 8, 16)
    min_block: int = 9
    max_block: int = 64
    deltas: tuple[float, ...] = (0.1, 0.2, 0.3, 0.5, 1.0)
    hub_slack: float = 0.25
    seed_retries: int = 10
    hub_retries: int = 1
    repair_budget: int | None = 200_000
    compare_fallback: bool = True


@dataclass
class _Candidate:
    m: int
    d: int
    waste: int
    plan: SplitPlan = field(repr=False)


def _split_candidates(tree: Tree, S: frozenset[int], bound_total: int, cfg: PipelineConfig) -> list[_Candidate]:
    """Feasible ``(m, d)`` pairs sorted by the size of the resulting ``W``."""
    out = []
    s = len(S)
    for m in cfg.component_bounds:
        plan = plan_split(tree, S, m)
        for d in range(max(cfg.min_block, 3 * s + 1), cfg.max_block + 1):
            L = d + 3 * s
            if L % 2 == 0:
                continue
            waste = plan.waste(d)
            kept = tree.n - waste - s
            eta = kept // d
            if eta <= 0:
                continue
            if bound_total // L - 1 < max(eta + 1, math.ceil((1 + cfg.hub_slack) * eta)):
                continue
            out.append(_Candidate(m, d, waste, plan))
    out.sort(key=lambda c: (c.waste, -c.d, c.m))
    return out


def place_waste(lab: dict[int, int], waste: Sequence[int], bound: int, lo: int = 1) -> dict[int, int]:
    """Give ``waste`` vertices, in ascending id, the ascending unused labels."""
    used = set(lab.values())
    free = (x for x in range(lo, bound + 1) if x not in used)
    out = dict(lab)
    for v in sorted(waste):
        out[v] = next(free)
    return out


def _seed_stream(seed: int | None, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


def _random_labelling(tree: Tree, bound: int, rng: random.Random) -> Labelling:
    labels = rng.sample(range(1, bound + 1), tree.n)
    return Labelling(dict(enumerate(labels)), bound)


def _constructive(tree: Tree, epsilon: float, bound: int, seed, cfg: PipelineConfig, log: list):
    """Window, split, rooted embedding and waste placement.  Raises on failure."""
    n = tree.n
    win = degree_window(tree, epsilon, degree_ladder(n, epsilon, cfg.ladder_base, cfg.ladder_ratio))
    S = win.S_high
    log.append(("degree-window", f"i={win.index} window=[{win.low},{win.high}) |U|={len(win.U)} "
                                 f"E_U={win.edges_touching_U} |S_high|={len(S)}"))
    cands = _split_candidates(tree, S, bound, cfg)
    if not cands:
        raise InfeasibleSplit("no feasible (m, d) pair", {"S": len(S)})
    rng = _seed_stream(seed, "embed")
    last = None
    for cand in cands[:3]:
        split = None
        for delta in cfg.deltas:
            try:
                split = split_structure(tree, S, m=cand.m, delta=delta, multiplicity=cand.d, plan=cand.plan)
                break
            except InfeasibleSplit as exc:
                last = exc
        if split is None:
            continue
        log.append(("split", f"m={cand.m} d={cand.d} |W|={len(split.W)} delta={delta}"
                             + (" (relaxed)" if delta != cfg.deltas[0] else "")))
        m_tilde = n - len(split.W)
        # first the subtree's own range, then the caller's full range
        bounds = [math.floor((1 + Fraction(str(epsilon))) * m_tilde), bound]
        for step, tb in enumerate(bounds):
            for attempt in range(cfg.seed_retries):
                st: dict = {}
                try:
                    sub = embed_rooted_structure(
                        tree, S, split, epsilon, rng.randrange(2**32), label_bound=tb, stats=st,
                        retries=cfg.hub_retries,
                    )
                except EmbeddingError as exc:
                    last = exc
                    log.append(("rooted-structure", f"attempt {attempt + 1} failed: {exc}"))
                    continue
                tag = "" if step == 0 else f" (relaxed range to {tb})"
                log.append(("rooted-structure", f"embedded {m_tilde} vertices into [1,{tb}]{tag} "
                                                f"eta={st.get('eta')} L={st.get('L')}"))
                labels = place_waste(sub.labels, split.W, bound)
                log.append(("waste", f"placed {len(split.W)} vertices in ascending order"))
                return Labelling(labels, bound)
    raise EmbeddingError(f"constructive stages failed: {last}")


def _core(tree: Tree, epsilon: float, bound: int, seed, cfg: PipelineConfig, log: list) -> Labelling:
    n = tree.n
    if n == 1:
        return Labelling({0: 1}, bound)
    low, _ = near_graceful_thresholds(n, epsilon)
    best = None
    target = min(low, n - 1)
    try:
        lab = _constructive(tree, epsilon, bound, seed, cfg, log)
        before = len(edge_differences(tree, lab))
        lab = repair_pass(tree, lab, cfg.repair_budget)
        after = len(edge_differences(tree, lab))
        log.append(("repair", f"distinct {before} -> {after}"))
        best = (after, lab)
    except (EmbeddingError, InfeasibleSplit) as exc:
        log.append(("fallback", f"constructive pipeline failed: {exc}"))
    if best is None or (cfg.compare_fallback and best[0] < low):
        rng = _seed_stream(seed, "fallback")
        for attempt in range(max(1, cfg.seed_retries)):
            lab = _random_labelling(tree, bound, rng)
            before = len(edge_differences(tree, lab))
            lab = repair_pass(tree, lab, cfg.repair_budget)
            after = len(edge_differences(tree, lab))
            log.append(("fallback", f"random labelling + repair (seed {attempt + 1}): distinct {before} -> {after}"))
            if best is None or after > best[0]:
                best = (after, lab)
                log.append(("fallback", "kept fallback labelling"))
            if best[0] >= target:
                break
    if best[0] < target and n <= SMALL_EXACT_N:
        # tiny trees: exhaustive search finds a graceful labelling inside 1..n
        found, _ = solve_graceful(tree)
        if found is not None:
            log.append(("exact", "graceful labelling by exhaustive search"))
            best = (n - 1, Labelling(found.labels, bound))
    return best[1]


def trim_leaves(tree: Tree, count: int) -> tuple[Tree, list[int], list[int]]:
    """Remove ``count`` leaves one at a time, each a leaf of the current tree.

    The lowest-id current leaf goes first.  Returns the remaining tree
    (relabelled ``0..n'-1`` in increasing old id), the map new id -> old id
    and the removed vertices in removal order.
    """
    n = tree.n
    count = max(0, min(count, n - 1))
    deg = list(tree.degrees)
    gone = [False] * n
    heap = [v for v in range(n) if deg[v] <= 1]
    heapq.heapify(heap)
    removed = []
    while len(removed) < count:
        v = heapq.heappop(heap)
        if gone[v] or deg[v] > 1:
            continue
        gone[v] = True
        removed.append(v)
        for w in tree.adjacency[v]:
            if not gone[w]:
                deg[w] -= 1
                if deg[w] == 1:
                    heapq.heappush(heap, w)
    keep = [v for v in range(n) if not gone[v]]
    new_id = {v: i for i, v in enumerate(keep)}
    edges = tuple((new_id[a], new_id[b]) for a, b in tree.edges if not gone[a] and not gone[b])
    return Tree(len(keep), edges), keep, removed


def _bijective(tree: Tree, epsilon: float, seed, cfg: PipelineConfig, log: list) -> Labelling:
    n = tree.n
    t = math.ceil(Fraction(str(epsilon)) * n / 2) if n > 2 else 0
    sub, keep, removed = trim_leaves(tree, t)
    log.append(("leaf-trim", f"removed {len(removed)} leaves; subtree has {sub.n} vertices"))
    sub_eps = max(float(epsilon) / 2, 1e-9)
    inner = _core(sub, min(sub_eps, 0.999), n, seed, cfg, log)
    labels = {keep[i]: inner[i] for i in range(sub.n)}
    used = set(labels.values())
    colours = set(edge_differences(sub, inner))
    # reattach in reverse removal order so each leaf's neighbour is labelled
    for v in reversed(removed):
        w = next(u for u in tree.adjacency[v] if u in labels)
        free = [x for x in range(1, n + 1) if x not in used]
        pick = next((x for x in free if abs(x - labels[w]) not in colours), free[0])
        labels[v] = pick
        used.add(pick)
        colours.add(abs(pick - labels[w]))
    log.append(("leaf-trim", "reattached removed leaves into the remaining labels"))
    lab = Labelling(labels, n)
    low, _ = near_graceful_thresholds(n, epsilon)
    if n <= SMALL_EXACT_N and len(edge_differences(tree, lab)) < min(low, n - 1):
        found, _ = solve_graceful(tree)
        if found is not None:
            log.append(("exact", "graceful labelling by exhaustive search"))
            return found
    return lab


def near_graceful(
    tree: Tree,
    epsilon: float,
    seed: int | None = 0,
    *,
    bijective: bool = False,
    config: PipelineConfig | None = None,
) -> tuple[Labelling, EmbeddingReport]:
    """Injective labelling into ``[floor((1 + eps) n)]`` with many distinct colours.

    Stages: light degree window, split around the high-degree vertices,
    rainbow embedding of everything outside the waste set, waste placed in
    ascending order, repair.  If a constructive stage fails after seed
    retries and range relaxation, or the result misses ``(1 - eps) n``
    distinct colours, a random labelling plus repair is tried and the
    better result kept.  With ``bijective`` the labels are exactly
    ``1..n``: leaves are trimmed first, the rest is labelled inside
    ``[n]``, and the leaves take the remaining labels.

    The report is recomputed from scratch by the verifier.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    cfg = config or PipelineConfig()
    log: list[tuple[str, str]] = []
    if bijective:
        lab = _bijective(tree, epsilon, seed, cfg, log)
    else:
        _, bound = near_graceful_thresholds(tree.n, epsilon)
        lab = _core(tree, epsilon, max(bound, tree.n), seed, cfg, log)
    report = check_report(tree, lab, epsilon, log)
    return lab, report
