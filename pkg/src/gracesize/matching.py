"""Rainbow matchings in difference-coloured complete graphs.

An edge ``ab`` of ``K_[n]`` has colour ``|a - b|``.  A set of such edges is
a rainbow matching exactly when the triples ``{a, b, |a - b|}`` form a
matching in the 3-partite hypergraph on (A, B, colours).
"""

from __future__ import annotations

import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ColouredBipartiteView",
    "TripartiteHypergraph",
    "RainbowMatching",
    "MatchingResult",
    "theta",
    "theta_inverse",
    "is_rainbow_matching",
    "is_hypergraph_matching",
    "rainbow_iff_matching_check",
    "spanning_difference_graph",
    "gadget_pairs",
    "interval_matching",
    "interval_colours",
    "hypergraph_matching",
    "random_pair_rainbow_matching",
]


Triple = tuple[int, int, int]


def theta(edge: tuple[int, int]) -> Triple:
    """Map edge ``(a, b)`` to the hyperedge ``(min, max, |b - a|)``."""
    a, b = edge
    if a == b:
        raise ValueError("theta needs two distinct endpoints")
    lo, hi = (a, b) if a < b else (b, a)
    return lo, hi, hi - lo


def theta_inverse(h: Triple) -> tuple[int, int]:
    lo, hi, c = h
    if hi - lo != c:
        raise ValueError(f"{h} is not a difference triple")
    return lo, hi


@dataclass(frozen=True)
class ColouredBipartiteView:
    """``K_[n][A, B, C]``: edges ``ab`` with ``a in A``, ``b in B``, ``|b - a| in C``."""

    A: frozenset[int]
    B: frozenset[int]
    C: frozenset[int]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.A & self.B:
            raise ValueError("A and B must be disjoint")
        for a, b in self.edges:
            if a not in self.A or b not in self.B or abs(b - a) not in self.C:
                raise ValueError(f"edge {(a, b)} not in the view")

    @classmethod
    def complete(cls, A: Iterable[int], B: Iterable[int], C: Iterable[int]) -> "ColouredBipartiteView":
        A, B, C = frozenset(A), frozenset(B), frozenset(C)
        edges = tuple((a, b) for a in sorted(A) for b in sorted(B) if abs(b - a) in C)
        return cls(A, B, C, edges)

    def hypergraph(self) -> "TripartiteHypergraph":
        return TripartiteHypergraph(
            self.A, self.B, self.C, tuple((a, b, abs(b - a)) for a, b in self.edges)
        )

    def colour_counts(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for a, b in self.edges:
            out[abs(b - a)] += 1
        return dict(out)

    def degrees(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for a, b in self.edges:
            out[a] += 1
            out[b] += 1
        return dict(out)


@dataclass(frozen=True)
class TripartiteHypergraph:
    """Hyperedges ``(a, b, c)`` with ``a in A``, ``b in B``, ``c in C``.

    The three parts are separate vertex classes even when their integer
    values coincide.
    """

    A: frozenset[int]
    B: frozenset[int]
    C: frozenset[int]
    edges: tuple[Triple, ...]

    def is_linear(self) -> bool:
        seen: dict[tuple, Triple] = {}
        for e in self.edges:
            a, b, c = e
            for key in (("ab", a, b), ("ac", a, c), ("bc", b, c)):
                if key in seen and seen[key] != e:
                    return False
                seen[key] = e
        return True


@dataclass(frozen=True)
class RainbowMatching:
    edges: tuple[tuple[int, int], ...]

    @property
    def colours(self) -> tuple[int, ...]:
        return tuple(abs(b - a) for a, b in self.edges)

    def partner(self) -> dict[int, int]:
        out = {}
        for a, b in self.edges:
            out[a] = b
            out[b] = a
        return out

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)


def is_rainbow_matching(M: Iterable[tuple[int, int]]) -> bool:
    verts, cols = set(), set()
    for a, b in M:
        c = abs(b - a)
        if a in verts or b in verts or a == b or c in cols:
            return False
        verts.update((a, b))
        cols.add(c)
    return True


def is_hypergraph_matching(H: Iterable[Triple]) -> bool:
    seen_a, seen_b, seen_c = set(), set(), set()
    for a, b, c in H:
        if a in seen_a or b in seen_b or c in seen_c:
            return False
        seen_a.add(a)
        seen_b.add(b)
        seen_c.add(c)
    return True


def rainbow_iff_matching_check(
    M: Iterable[tuple[int, int]], view: ColouredBipartiteView
) -> tuple[bool, bool]:
    """Return ``(is rainbow matching, is hypergraph matching of theta(M))``.

    Edges are oriented A to B; the hypergraph check uses that orientation so
    a label used once in A and once in B counts as two vertices, exactly as
    in ``H[A, B, C]``.
    """
    M = list(M)
    allowed = set(view.edges)
    for e in M:
        if tuple(e) not in allowed:
            raise ValueError(f"edge {e} is not in the view")
    triples = [(a, b, abs(b - a)) for a, b in M]
    return is_rainbow_matching(M), is_hypergraph_matching(triples)


# ---------------------------------------------------------------- spanning gadget


def _check_gadget_params(n: int, s: int):
    if n < 2 or n % 2 or not 1 <= s <= n // 2:
        raise ValueError(f"need n even and 1 <= s <= n/2 (n={n}, s={s})")


def spanning_difference_graph(n: int, s: int) -> ColouredBipartiteView:
    """Spanning subgraph of ``K_[n][A, B, [n-1]]`` with ``A = [1, n/2]``.

    Colour ``c >= 2`` contributes the pairs
    ``((n - c + i)/2, (n + c + i)/2)`` for ``i = 1..2s`` that are integral
    and lie in ``A x B``.  Maximum degree is ``2s``, each colour appears at
    most ``s`` times (exactly ``s`` on ``[2s, n - 2s]``), colour 1 never.
    """
    _check_gadget_params(n, s)
    half = n // 2
    c = np.arange(2, n, dtype=np.int64)[:, None]
    i = np.arange(1, 2 * s + 1, dtype=np.int64)[None, :]
    num_a = n - c + i
    num_b = n + c + i
    ok = (num_a % 2 == 0) & (num_b % 2 == 0)
    a = num_a // 2
    b = num_b // 2
    ok &= (a >= 1) & (a <= half) & (b >= half + 1) & (b <= n)
    a_arr = np.broadcast_to(a, ok.shape)[ok]
    b_arr = np.broadcast_to(b, ok.shape)[ok]
    edges = tuple(sorted(zip(a_arr.tolist(), b_arr.tolist())))
    return ColouredBipartiteView(
        frozenset(range(1, half + 1)),
        frozenset(range(half + 1, n + 1)),
        frozenset(range(1, n)),
        edges,
    )


def gadget_pairs(n: int, s: int, A: Sequence[int], B: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Edges of :func:`spanning_difference_graph` restricted to ``A x B``.

    Uses the closed form: ``(a, b)`` is a gadget edge iff ``a <= n/2 < b``,
    ``n + 1 <= a + b <= n + 2s`` and ``b - a >= 2``.
    """
    _check_gadget_params(n, s)
    half = n // 2
    a = np.asarray(sorted(x for x in A if 1 <= x <= half), dtype=np.int64)
    b = np.asarray(sorted(x for x in B if half < x <= n), dtype=np.int64)
    if not len(a) or not len(b):
        return np.empty(0, np.int64), np.empty(0, np.int64)
    tot = a[:, None] + b[None, :]
    ok = (tot >= n + 1) & (tot <= n + 2 * s) & (b[None, :] - a[:, None] >= 2)
    ia, ib = np.nonzero(ok)
    return a[ia], b[ib]


# ---------------------------------------------------------------- interval matchings


def interval_colours(i: int, j: int, ell: int) -> range:
    """Colour block ``[(j-i) ell - floor(ell/2), (j-i) ell + floor(ell/2)]``."""
    lo = (j - i) * ell - ell // 2
    return range(lo, lo + 2 * (ell // 2) + 1)


def interval_matching(i: int, j: int, ell: int, n: int | None = None) -> RainbowMatching:
    """Rainbow perfect matching between ``I_i`` and ``I_j`` (``I_k = [k ell + 1, (k+1) ell]``).

    The first ``ceil(ell/2)`` elements of ``I_i`` are matched in reverse to
    the first ``ceil(ell/2)`` of ``I_j``; the remaining elements likewise.
    Colours fill :func:`interval_colours` exactly.
    """
    if ell < 1 or ell % 2 == 0:
        raise ValueError("ell must be a positive odd integer")
    if not 0 <= i < j:
        raise ValueError("need 0 <= i < j")
    if n is not None and (j + 1) * ell > n:
        raise ValueError(f"interval I_{j} overflows [1, {n}]")
    up = (ell + 1) // 2
    first = [(i * ell + y, j * ell + up + 1 - y) for y in range(1, up + 1)]
    second = [(i * ell + up + z, (j + 1) * ell + 1 - z) for z in range(1, ell // 2 + 1)]
    return RainbowMatching(tuple(first + second))


# ---------------------------------------------------------------- matching engine


@dataclass
class MatchingResult:
    edges: list[Triple]
    vertices: int
    uncovered: int
    rounds: int = 0
    swaps: int = 0

    @property
    def uncovered_fraction(self) -> float:
        return self.uncovered / self.vertices if self.vertices else 0.0


def hypergraph_matching(
    H: TripartiteHypergraph | Sequence[Triple],
    target_uncovered: float = 0.05,
    seed: int | None = None,
    max_rounds: int = 50,
    n_vertices: int | None = None,
) -> MatchingResult:
    """Large matching in a 3-partite 3-uniform hypergraph.

    Greedy maximal matching over a seeded random edge order, then rounds of
    (2,1)-swaps: drop one matched edge and add two edges that were blocked
    only by it.  Stops at the target, when a round finds no swap, or after
    ``max_rounds``.  The output is always a valid matching.
    """
    if isinstance(H, TripartiteHypergraph):
        edges = list(H.edges)
        nv = len(H.A) + len(H.B) + len(H.C)
    else:
        edges = list(H)
        nv = n_vertices
    if nv is None:
        nv = len({e[0] for e in edges}) + len({e[1] for e in edges}) + len({e[2] for e in edges})
    rng = random.Random(seed)
    rng.shuffle(edges)
    # owner[k][x]: index of matched edge using vertex x of part k
    owner = ({}, {}, {})
    matched: dict[int, Triple] = {}

    def free(e):
        return e[0] not in owner[0] and e[1] not in owner[1] and e[2] not in owner[2]

    def add(idx, e):
        matched[idx] = e
        for k in range(3):
            owner[k][e[k]] = idx

    def drop(idx):
        e = matched.pop(idx)
        for k in range(3):
            del owner[k][e[k]]

    for idx, e in enumerate(edges):
        if free(e):
            add(idx, e)

    def uncovered():
        return nv - 3 * len(matched)

    rounds = swaps = 0
    while rounds < max_rounds and uncovered() > target_uncovered * nv:
        rounds += 1
        blocked: dict[int, list[int]] = defaultdict(list)
        for idx, e in enumerate(edges):
            if idx in matched:
                continue
            blockers = {owner[k][e[k]] for k in range(3) if e[k] in owner[k]}
            if len(blockers) == 1:
                blocked[blockers.pop()].append(idx)
            elif not blockers:
                add(idx, e)
        improved = False
        for m_idx, cands in blocked.items():
            if m_idx not in matched or len(cands) < 2:
                continue
            m_edge = matched[m_idx]
            # candidates must still be blocked by m_idx alone
            live = []
            for c in cands:
                e = edges[c]
                if c in matched:
                    continue
                ok = True
                for k in range(3):
                    o = owner[k].get(e[k])
                    if o is not None and o != m_idx:
                        ok = False
                        break
                if ok:
                    live.append(c)
            pair = None
            for x in range(len(live)):
                ex = edges[live[x]]
                for y in range(x + 1, len(live)):
                    ey = edges[live[y]]
                    if ex[0] != ey[0] and ex[1] != ey[1] and ex[2] != ey[2]:
                        pair = (live[x], live[y])
                        break
                if pair:
                    break
            if pair:
                drop(m_idx)
                add(pair[0], edges[pair[0]])
                add(pair[1], edges[pair[1]])
                # the dropped edge may fit back in nowhere; leave it
                del m_edge
                swaps += 1
                improved = True
        if not improved:
            break
    out = sorted(matched.values())
    assert is_hypergraph_matching(out)
    return MatchingResult(out, nv, nv - 3 * len(out), rounds, swaps)


def random_pair_rainbow_matching(
    n: int,
    S1: Iterable[int],
    S2: Iterable[int],
    mu: float = 0.05,
    seed: int | None = None,
    s: int | None = None,
    retries: int = 20,
    max_rounds: int = 50,
) -> tuple[RainbowMatching, dict]:
    """Rainbow matching between ``S1`` and ``S2`` with colours in ``S2 - {1}``.

    Built from the spanning gadget of width ``s`` (default
    ``ceil(mu * 3pn / 20)`` with ``p = max(|S1|, |S2|) / n``):
    colours are split by a seeded fair coin into ``P`` and ``Q``; edges
    ``A n S1 -> B n S2`` with colour in ``P n S2`` and ``A n S2 -> B n S1``
    with colour in ``Q n S2`` are matched separately and united.  Up to
    ``retries`` colour splits are tried until both sides leave at most
    ``2 mu max(|S1|, |S2|)`` vertices uncovered; the best attempt is kept.
    """
    if n % 2:
        raise ValueError("n must be even")
    S1, S2 = set(S1), set(S2)
    if S1 & S2:
        raise ValueError("S1 and S2 must be disjoint")
    if s is None:
        p = max(len(S1), len(S2)) / n
        s = math.ceil(mu * 3 * p * n / 20)
    s = max(1, min(s, n // 2))
    target = 2 * mu * max(len(S1), len(S2))
    info = {"target": target, "attempts": 0, "uncovered_S1": len(S1), "uncovered_S2": len(S2), "s": s}
    if not S1 or not S2:
        return RainbowMatching(()), info

    half = n // 2
    nA1 = sum(1 for x in S1 if x <= half)
    nA2 = sum(1 for x in S2 if x <= half)
    nB1, nB2 = len(S1) - nA1, len(S2) - nA2
    pa_P, pb_P = gadget_pairs(n, s, sorted(S1), sorted(S2))
    pa_Q, pb_Q = gadget_pairs(n, s, sorted(S2), sorted(S1))
    s2 = np.zeros(n + 1, dtype=bool)
    s2[list(S2)] = True
    s2[1] = False
    col_P = pb_P - pa_P
    col_Q = pb_Q - pa_Q
    keep_P = s2[col_P]
    keep_Q = s2[col_Q]
    pa_P, pb_P, col_P = pa_P[keep_P], pb_P[keep_P], col_P[keep_P]
    pa_Q, pb_Q, col_Q = pa_Q[keep_Q], pb_Q[keep_Q], col_Q[keep_Q]

    rng = random.Random(seed)
    best = None
    for attempt in range(max(1, retries)):
        coin = np.frombuffer(rng.randbytes(n + 1), dtype=np.uint8) & 1
        in_P = coin.astype(bool)
        selP = in_P[col_P]
        selQ = ~in_P[col_Q]
        HP = list(zip(pa_P[selP].tolist(), pb_P[selP].tolist(), col_P[selP].tolist()))
        HQ = list(zip(pa_Q[selQ].tolist(), pb_Q[selQ].tolist(), col_Q[selQ].tolist()))
        sub_seed = rng.randrange(2**32)
        nP = nA1 + nB2 + int(np.count_nonzero(s2 & in_P))
        nQ = nA2 + nB1 + int(np.count_nonzero(s2 & ~in_P))
        mp = hypergraph_matching(HP, mu, sub_seed, max_rounds, n_vertices=nP)
        mq = hypergraph_matching(HQ, mu, sub_seed + 1, max_rounds, n_vertices=nQ)
        pairs = [(a, b) for a, b, _ in mp.edges] + [(a, b) for a, b, _ in mq.edges]
        size = len(pairs)
        if best is None or size > len(best):
            best = pairs
        info["attempts"] = attempt + 1
        if max(len(S1), len(S2)) - len(best) <= target:
            break
    M = RainbowMatching(tuple(sorted(best)))
    assert is_rainbow_matching(M.edges)
    info["uncovered_S1"] = len(S1) - len(M)
    info["uncovered_S2"] = len(S2) - len(M)
    info["met_target"] = max(info["uncovered_S1"], info["uncovered_S2"]) <= target
    return M, info
