"""Rainbow embeddings of trees into difference-coloured complete graphs.

Two constructions live here.  The first handles a hub vertex whose removal
leaves small components: the hub goes to label 0 and every edge gets a new
colour other than 1.  The second handles a protected set ``S`` together with
many copies of one rooted forest: blocks of copies are laid into equal
intervals, and whole blocks are joined by the explicit interval matchings.
"""

from __future__ import annotations

import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .matching import interval_colours, interval_matching, random_pair_rainbow_matching
from .split import SplitResult
from .tree import Tree, _rooted_codes, components
from .verify import Labelling, colour_census, is_rainbow

__all__ = [
    "EmbeddingError",
    "AuxTree",
    "IntervalLayout",
    "embed_splitting_vertex_tree",
    "embed_rooted_structure",
    "check_hub_embedding",
]


class EmbeddingError(RuntimeError):
    """A constructive stage could not finish; ``diagnostics`` says why."""

    def __init__(self, message: str, diagnostics: Mapping | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


def _scaled_bound(n: int, epsilon: float) -> int:
    return math.floor((1 + Fraction(str(epsilon))) * n)


def _layout(adj, root: int, alive) -> tuple[str, list[int], list[int]]:
    """Rooted code, canonical preorder and parent positions (-1 for the root)."""
    codes, children = _rooted_codes(adj, root, alive)
    order: list[int] = []
    parent_pos: list[int] = []
    stack = [(root, -1)]
    while stack:
        u, p = stack.pop()
        pos = len(order)
        order.append(u)
        parent_pos.append(p)
        for w in reversed(children[u]):
            stack.append((w, pos))
    return codes[root], order, parent_pos


def check_hub_embedding(tree: Tree, hub: int, lab: Labelling) -> None:
    """Assert the hub-embedding contract: hub at 0, rainbow, colour 1 absent."""
    assert lab[hub] == 0, "hub is not labelled 0"
    assert is_rainbow(tree.edges, lab.labels), "embedding is not rainbow"
    assert 1 not in colour_census(tree.edges, lab.labels), "colour 1 used"


# ---------------------------------------------------------------- hub embeddings


class _Greedy:
    """Label pool for greedy completion: free labels and unused colours."""

    def __init__(self, bound: int, used_labels: Iterable[int], used_colours: Iterable[int]):
        self.free = np.ones(bound + 1, dtype=bool)
        self.free[0] = False
        self.free[list(used_labels)] = False
        self.col = np.zeros(bound + 1, dtype=bool)
        self.col[list(used_colours)] = True
        self.col[1] = True  # colour 1 is reserved
        self.col[0] = True
        self.labels = np.arange(bound + 1)
        self.mid = bound + 1

    def place(self, parent_label: int) -> int | None:
        cand = self.labels[self.free]
        if not len(cand):
            return None
        cols = np.abs(cand - parent_label)
        ok = ~self.col[cols]
        if not ok.any():
            return None
        # labels far from the middle first; the middle is easiest to use late
        idx = np.flatnonzero(ok)
        best = idx[np.argmax(np.abs(2 * cand[idx] - self.mid))]
        x = int(cand[best])
        self.free[x] = False
        self.col[int(cols[best])] = True
        return x


def _star_embedding(tree: Tree, hub: int, bound: int) -> Labelling:
    n = tree.n - 1
    if bound < n + 1:
        raise EmbeddingError("star needs labels up to n + 1", {"bound": bound, "n": n})
    leaves = sorted(tree.adjacency[hub])
    labels = {hub: 0}
    labels.update({u: 2 + i for i, u in enumerate(leaves)})
    return Labelling(labels, bound, min_label=0)


SMALL_EXACT_N = 12


def _exact_hub(tree: Tree, hub: int, bound: int, budget: int = 200_000) -> dict[int, int] | None:
    """Backtracking fallback for tiny trees: hub at 0, rainbow, colour 1 unused."""
    order = [hub]
    parent = {hub: -1}
    for u in order:
        for w in tree.adjacency[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
    labels = {hub: 0}
    used = {0}
    cols = {1}
    nodes = 0

    def rec(k: int) -> bool:
        nonlocal nodes
        if k == len(order):
            return True
        u = order[k]
        p = labels[parent[u]]
        for x in range(bound, 0, -1):
            c = abs(x - p)
            if x in used or c in cols:
                continue
            nodes += 1
            if nodes > budget:
                return False
            labels[u] = x
            used.add(x)
            cols.add(c)
            if rec(k + 1):
                return True
            used.discard(x)
            cols.discard(c)
        labels.pop(u, None)
        return False

    return dict(labels) if rec(1) else None


def embed_splitting_vertex_tree(
    tree: Tree,
    v: int,
    epsilon: float,
    seed: int | None = 0,
    *,
    label_bound: int | None = None,
    comp_limit: int | None = None,
    multiplicity: int | None = None,
    mu: float = 0.05,
    gadget_width: int | None = None,
    retries: int = 10,
    stats: dict | None = None,
) -> Labelling:
    """Rainbow labelling with the hub ``v`` at 0 and no edge of colour 1.

    ``n = |T| - 1`` vertices go into ``[1, floor((1 + eps) n)]`` (or
    ``label_bound``).  Components of ``T - v`` are grouped by rooted shape and
    cut into groups of at most ``multiplicity`` copies; each position of each
    group owns one random part of the label range, with label 1 kept out of
    root parts.  A rainbow matching between the parts of a parent and a child
    position (colours inside the child's part) is built for every edge of the
    group shape, and copies are read off by following matchings from root
    labels.  Copies that the matchings do not complete are finished greedily
    with unused labels and colours.  Trees of at most ``SMALL_EXACT_N``
    vertices fall back to exhaustive search when every attempt fails.

    Raises :class:`EmbeddingError` when no attempt yields a rainbow labelling.
    """
    if not 0 < epsilon:
        raise ValueError("epsilon must be positive")
    n = tree.n - 1
    bound = _scaled_bound(n, epsilon) if label_bound is None else label_bound
    adj = tree.adjacency
    if n == 0:
        return Labelling({v: 0}, max(bound, 1), min_label=0)
    alive = set(range(tree.n)) - {v}
    comps = components(adj, alive)
    if comp_limit is not None and max(len(c) for c in comps) > comp_limit:
        raise EmbeddingError("component larger than the configured limit", {"limit": comp_limit})
    if all(len(c) == 1 for c in comps):
        lab = _star_embedding(tree, v, bound)
        if stats is not None:
            stats.update(star=True, matched=0, greedy=0, attempts=1)
        return lab
    if bound < n + 1:
        raise EmbeddingError("label range too small", {"bound": bound, "n": n})

    # root each component at the hub's neighbour
    hub_nb = set(adj[v])
    classes: dict[str, list[tuple[list[int], list[int]]]] = defaultdict(list)
    for comp in comps:
        root = next(u for u in comp if u in hub_nb)
        code, order, parent_pos = _layout(adj, root, set(comp))
        classes[code].append((order, parent_pos))
    top = max(len(c) for c in classes.values())
    d = top if multiplicity is None else max(1, multiplicity)

    # F-hat: one group per (class, chunk of d copies)
    groups = []
    for code in sorted(classes):
        members = classes[code]
        for start in range(0, len(members), d):
            groups.append(members[start:start + d])
    positions = []  # (group index, position in canonical preorder)
    for gi, g in enumerate(groups):
        positions.extend((gi, p) for p in range(len(g[0][0])))
    n_even = bound - bound % 2
    rng = random.Random(seed)
    last_err = None
    for attempt in range(1, max(1, retries) + 1):
        try:
            labels, matched, greedy = _hub_attempt(
                adj, v, groups, positions, n_even, bound, mu, gadget_width, rng
            )
        except EmbeddingError as exc:
            last_err = exc
            continue
        lab = Labelling(labels, bound, min_label=0)
        check_hub_embedding(tree, v, lab)
        if stats is not None:
            stats.update(star=False, matched=matched, greedy=greedy, attempts=attempt, multiplicity=d)
        return lab
    if tree.n <= SMALL_EXACT_N:
        labels = _exact_hub(tree, v, bound)
        if labels is not None:
            lab = Labelling(labels, bound, min_label=0)
            check_hub_embedding(tree, v, lab)
            if stats is not None:
                stats.update(star=False, matched=0, greedy=0, attempts=retries, exact=True)
            return lab
    raise EmbeddingError(
        f"hub embedding failed after {retries} attempts: {last_err}",
        dict(last_err.diagnostics if last_err else {}, attempts=retries),
    )


def _hub_attempt(adj, hub, groups, positions, n_even, bound, mu, gadget_width, rng):
    k = len(positions)
    pool = list(range(1, n_even + 1))
    rng.shuffle(pool)
    parts = [pool[i::k] for i in range(k)]
    is_root = [groups[gi][0][1][p] == -1 for gi, p in positions]
    # keep label 1 out of root parts
    where = next(i for i, part in enumerate(parts) if 1 in part)
    if is_root[where]:
        non_root = [i for i in range(k) if not is_root[i]]
        j = rng.choice(non_root)
        a = parts[where].index(1)
        b = rng.randrange(len(parts[j]))
        parts[where][a], parts[j][b] = parts[j][b], parts[where][a]
    index = {pos: i for i, pos in enumerate(positions)}
    width = n_even // 2 if gadget_width is None else gadget_width

    labels: dict[int, int] = {hub: 0}
    used_cols: set[int] = set()
    leftovers = []
    matched = 0
    for gi, g in enumerate(groups):
        order0, parent_pos = g[0]
        partner = [None] * len(order0)
        for p in range(1, len(order0)):
            pp = parent_pos[p]
            S1 = parts[index[(gi, pp)]]
            S2 = parts[index[(gi, p)]]
            M, _ = random_pair_rainbow_matching(
                n_even, S1, S2, mu, rng.randrange(2**32), s=width, retries=1, max_rounds=5
            )
            S1set = set(S1)
            partner[p] = {(a if a in S1set else b): (b if a in S1set else a) for a, b in M}
        chains = []
        for r in sorted(parts[index[(gi, 0)]]):
            chain = [r]
            for p in range(1, len(order0)):
                nxt = partner[p].get(chain[parent_pos[p]])
                if nxt is None:
                    break
                chain.append(nxt)
            if len(chain) == len(order0):
                chains.append(chain)
                if len(chains) == len(g):
                    break
        for (order, _), chain in zip(g, chains):
            for u, x in zip(order, chain):
                labels[u] = x
            for p in range(len(order)):
                parent_label = 0 if parent_pos[p] == -1 else chain[parent_pos[p]]
                used_cols.add(abs(chain[p] - parent_label))
            matched += 1
        leftovers.extend(g[len(chains):])

    greedy = _Greedy(bound, [x for x in labels.values() if x], used_cols)
    leftovers.sort(key=lambda op: -len(op[0]))
    for order, parent_pos in leftovers:
        for p, u in enumerate(order):
            pl = 0 if parent_pos[p] == -1 else labels[order[parent_pos[p]]]
            x = greedy.place(pl)
            if x is None:
                raise EmbeddingError("greedy completion ran out of labels", {"placed": len(labels)})
            labels[u] = x
    return labels, matched, len(leftovers)


# ---------------------------------------------------------------- rooted structures


@dataclass(frozen=True)
class AuxTree:
    """Hub plus one vertex per block of ``d`` corresponding original vertices.

    ``blocks[i]`` lists the original vertices of block ``i`` (one per copy, in
    copy order); ``tree`` has the hub at id 0 and block ``i`` at id ``i + 1``.
    """

    tree: Tree
    blocks: tuple[tuple[int, ...], ...]
    block_parent: tuple[int, ...]  # -1 for root blocks
    d: int

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            assert len(b) == self.d, "block of wrong size"
            assert not seen.intersection(b), "blocks overlap"
            seen.update(b)
        hub_nbrs = set(self.tree.adjacency[0])
        roots = {i + 1 for i, p in enumerate(self.block_parent) if p == -1}
        assert hub_nbrs == roots, "hub must be adjacent exactly to root blocks"


def build_aux_tree(tree: Tree, split: SplitResult) -> AuxTree:
    d = split.multiplicity
    adj = tree.adjacency
    by_code: dict[str, list[tuple[list[int], list[int]]]] = defaultdict(list)
    for idx, comp in enumerate(split.components):
        code, order, parent_pos = _layout(adj, split.component_roots[idx], set(comp))
        by_code[code].append((order, parent_pos))
    blocks: list[tuple[int, ...]] = []
    block_parent: list[int] = []
    for code in sorted(by_code):
        members = sorted(by_code[code], key=lambda op: op[0][0])
        assert len(members) % d == 0, "class count is not a multiple of d"
        for start in range(0, len(members), d):
            group = members[start:start + d]
            base = len(blocks)
            parent_pos = group[0][1]
            for p in range(len(parent_pos)):
                blocks.append(tuple(order[p] for order, _ in group))
                block_parent.append(-1 if parent_pos[p] == -1 else base + parent_pos[p])
    edges = [(0 if p == -1 else p + 1, i + 1) for i, p in enumerate(block_parent)]
    aux = Tree(len(blocks) + 1, tuple(edges))
    return AuxTree(aux, tuple(blocks), tuple(block_parent), d)


@dataclass(frozen=True)
class IntervalLayout:
    """Equal consecutive intervals ``I_0..I_eta`` of odd length ``L = d + 3|S|``.

    ``I_i = [iL + 1, (i + 1)L]``.  ``S`` lives in the middle window
    ``[ceil((d - 3|S|)/2), ceil((d + 3|S|)/2)]`` of ``I_0`` and root blocks in
    the first ``d`` labels of their interval.
    """

    d: int
    s: int
    eta: int
    used_pairs: tuple[tuple[int, int], ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.length % 2 == 0:
            raise EmbeddingError("interval length d + 3|S| must be odd", {"d": self.d, "S": self.s})
        if self.s and self.d < 3 * self.s + 1:
            raise EmbeddingError("need d >= 3|S| + 1", {"d": self.d, "S": self.s})
        self._check_claims()

    @property
    def length(self) -> int:
        return self.d + 3 * self.s

    @property
    def total(self) -> int:
        return (self.eta + 1) * self.length

    def interval(self, i: int) -> range:
        L = self.length
        return range(i * L + 1, (i + 1) * L + 1)

    def s_window(self) -> range:
        lo = -(-(self.d - 3 * self.s) // 2)
        hi = -(-(self.d + 3 * self.s) // 2)
        return range(lo, hi + 1)

    def root_window(self, j: int) -> range:
        return range(j * self.length + 1, j * self.length + self.d + 1)

    def s_colours(self) -> range:
        return range(1, 3 * self.s + 1)

    def colours(self, i: int, j: int) -> range:
        return interval_colours(min(i, j), max(i, j), self.length)

    def _check_claims(self):
        # blocks with different index gaps never share colours, and
        # gaps of two or more stay clear of the S colours
        gaps = sorted({abs(j - i) for i, j in self.used_pairs})
        spans = [(g, self.colours(0, g)) for g in gaps]
        for (g1, c1), (g2, c2) in zip(spans, spans[1:]):
            assert c1[-1] < c2[0], f"colour blocks for gaps {g1}, {g2} intersect"
        cs = self.s_colours()
        for g, c in spans:
            if g >= 2 and len(cs):
                assert cs[-1] < c[0], f"gap {g} colours meet the S colours"


def _augment_S(tree: Tree, S: set[int]) -> tuple[list[int], list[int], set[tuple[int, int]]]:
    """Order ``S`` so each vertex after the first has one earlier neighbour.

    Components of ``T[S]`` are chained by virtual edges between their lowest
    ids.  Returns the order, the parent of each (-1 first) and the virtual edges.
    """
    adj = tree.adjacency
    comps = components(adj, S)
    virtual = {(min(comps[i]), min(comps[i + 1])) for i in range(len(comps) - 1)}
    extra = defaultdict(list)
    for a, b in virtual:
        extra[a].append(b)
        extra[b].append(a)
    if not S:
        return [], [], set()
    start = min(S)
    order, parent = [start], [-1]
    seen = {start}
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for w in sorted([w for w in adj[u] if w in S] + extra[u]):
            if w not in seen:
                seen.add(w)
                order.append(w)
                parent.append(u)
    assert len(order) == len(S)
    return order, parent, virtual


def embed_rooted_structure(
    tree: Tree,
    S: Iterable[int],
    split: SplitResult,
    epsilon: float,
    seed: int | None = 0,
    *,
    label_bound: int | None = None,
    hub_epsilon: float | None = None,
    stats: dict | None = None,
    **hub_options,
) -> Labelling:
    """Rainbow labelling of ``T - W`` (``W`` from ``split``) into ``[(1 + eps) m]``.

    ``m = |T| - |W|``.  An auxiliary tree (hub plus one vertex per block of
    ``d`` copies) is embedded with the hub embedder; the block with auxiliary
    label ``i`` then occupies interval ``I_i``.  ``S`` is placed greedily into
    a window of ``I_0`` taking the smallest admissible label each time; root
    blocks take the first ``d`` labels of their interval, in descending order
    of their ``S``-neighbour's label; every other block follows its parent
    block through the interval matching.  Roots without an ``S``-neighbour,
    and disconnected parts of ``S``, are joined by virtual edges that are
    kept rainbow but left out of the census.
    """
    S = set(S)
    if S != set(split.S):
        raise ValueError("S must equal the split's protected set")
    keep = set(range(tree.n)) - set(split.W)
    m = len(keep)
    bound = _scaled_bound(m, epsilon) if label_bound is None else label_bound
    d = split.multiplicity
    L = d + 3 * len(S)
    diag = {"m": m, "bound": bound, "d": d, "S": len(S), "L": L}
    if L % 2 == 0:
        raise EmbeddingError("interval length d + 3|S| must be odd", diag)
    if S and d < 3 * len(S) + 1:
        raise EmbeddingError("need d >= 3|S| + 1", diag)
    aux = build_aux_tree(tree, split)
    eta = aux.tree.n - 1
    aux_bound = bound // L - 1
    diag.update(eta=eta, aux_bound=aux_bound)
    if eta and aux_bound < eta + 1:
        raise EmbeddingError("interval layout overflows the label range", diag)

    phi = {0: 0}
    if eta:
        eps_aux = hub_epsilon if hub_epsilon is not None else aux_bound / eta - 1
        phi = embed_splitting_vertex_tree(
            aux.tree, 0, eps_aux, seed, label_bound=aux_bound, **hub_options
        ).labels
    used_pairs = tuple(
        (0 if p == -1 else phi[p + 1], phi[i + 1]) for i, p in enumerate(aux.block_parent)
    )
    layout = IntervalLayout(d, len(S), max(phi.values()), used_pairs)

    labels: dict[int, int] = {}
    # S: smallest admissible label in the window
    s_order, s_parent, virtual = _augment_S(tree, S)
    window = list(layout.s_window())
    s_cols: set[int] = set()
    for u, p in zip(s_order, s_parent):
        taken = set(labels.values())
        for x in window:
            if x in taken:
                continue
            if p != -1:
                c = abs(x - labels[p])
                if c in s_cols:
                    continue
            break
        else:
            raise EmbeddingError("no admissible label for S", diag)
        labels[u] = x
        if p != -1:
            s_cols.add(abs(x - labels[p]))
    assert all(c in layout.s_colours() for c in s_cols)

    # root blocks
    adj = tree.adjacency
    anchor = min(S) if S else None
    for i, block in enumerate(aux.blocks):
        if aux.block_parent[i] != -1:
            continue
        j = phi[i + 1]
        nbr = {}
        for u in block:
            sn = [w for w in adj[u] if w in S]
            nbr[u] = sn[0] if sn else anchor
        ordered = sorted(block, key=lambda u: (-(labels[nbr[u]] if nbr[u] is not None else 0), u))
        for x, u in zip(layout.root_window(j), ordered):
            labels[u] = x
        if S:
            cols = [labels[u] - labels[nbr[u]] for u in ordered]
            assert all(a < b for a, b in zip(cols, cols[1:])), "root colours not increasing"
            span = layout.colours(0, j)
            assert span[0] <= cols[0] and cols[-1] <= span[-1]

    # remaining blocks follow their parents (block_parent precedes child)
    for i, block in enumerate(aux.blocks):
        p = aux.block_parent[i]
        if p == -1:
            continue
        a, b = phi[p + 1], phi[i + 1]
        partner = interval_matching(min(a, b), max(a, b), L).partner()
        for u_par, u in zip(aux.blocks[p], block):
            labels[u] = partner[labels[u_par]]

    lab = Labelling(labels, bound)
    real = [(u, w) for u, w in tree.edges if u in keep and w in keep]
    assert is_rainbow(real, labels), "rooted-structure embedding is not rainbow"
    virt = [(u, w) for u, w in virtual]
    virt += [(u, anchor) for i, blk in enumerate(aux.blocks) if aux.block_parent[i] == -1
             for u in blk if S and not any(w in S for w in adj[u])]
    assert is_rainbow(real + virt, labels), "virtual edges clash"
    assert lab.max_label <= min(bound, layout.total)
    if stats is not None:
        stats.update(diag, virtual=len(virt), layout_total=layout.total)
    return lab
