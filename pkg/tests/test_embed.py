import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gracesize.embed import (
    EmbeddingError,
    IntervalLayout,
    build_aux_tree,
    embed_rooted_structure,
    embed_splitting_vertex_tree,
)
from gracesize.families import broom, caterpillar, star
from gracesize.matching import interval_colours
from gracesize.pipeline import degree_window
from gracesize.split import InfeasibleSplit, split_structure
from gracesize.tree import Tree, random_tree, rooted_code
from gracesize.verify import colour_census, is_rainbow


def hub_tree(n, seed, max_comp=5):
    """Hub 0 joined to one vertex of each of many random small trees."""
    rng = random.Random(seed)
    edges, nxt = [], 1
    while nxt < n:
        k = min(rng.randint(1, max_comp), n - nxt)
        edges.append((0, nxt + rng.randrange(k)))
        for i in range(1, k):
            edges.append((nxt + rng.randrange(i), nxt + i))
        nxt += k
    return Tree(n, tuple(edges))


def assert_hub_contract(tree, hub, lab, epsilon):
    assert lab[hub] == 0
    assert is_rainbow(tree.edges, lab.labels)
    assert 1 not in colour_census(tree.edges, lab.labels)
    assert len(lab) == tree.n
    assert lab.max_label <= int((1 + epsilon) * (tree.n - 1) + 1e-9)


# ---------------------------------------------------------------- hub embedder


def test_star_hub_embedding():
    with pytest.raises(EmbeddingError):
        embed_splitting_vertex_tree(star(2), 0, 0.2)  # needs label 2 > floor(1.2)
    for n in (5, 10, 40):
        t = star(n + 1)
        lab = embed_splitting_vertex_tree(t, 0, 0.2)
        assert lab[0] == 0
        assert sorted(lab[u] for u in range(1, n + 1)) == list(range(2, n + 2))
        assert sorted(colour_census(t.edges, lab.labels)) == list(range(2, n + 2))


def test_single_vertex_hub():
    lab = embed_splitting_vertex_tree(Tree(1, ()), 0, 0.5)
    assert lab.labels == {0: 0}


def test_spider_three_legs():
    t = Tree(7, ((0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)))
    for seed in range(10):
        assert_hub_contract(t, 0, embed_splitting_vertex_tree(t, 0, 0.25, seed), 0.25)


def test_hub_small_components_sweep():
    ok = 0
    for seed in range(100):
        t = hub_tree(500, seed)
        try:
            lab = embed_splitting_vertex_tree(t, 0, 0.25, seed)
        except EmbeddingError:
            continue
        assert_hub_contract(t, 0, lab, 0.25)
        ok += 1
    assert ok == 100  # measured success rate; validity is the gate


def test_hub_is_deterministic():
    t = hub_tree(300, 4)
    assert embed_splitting_vertex_tree(t, 0, 0.25, 9) == embed_splitting_vertex_tree(t, 0, 0.25, 9)


def test_hub_errors():
    t = hub_tree(200, 1)
    with pytest.raises(EmbeddingError):
        embed_splitting_vertex_tree(t, 0, 0.25, comp_limit=2, seed=0)
    with pytest.raises(EmbeddingError):
        embed_splitting_vertex_tree(t, 0, 0.25, label_bound=150)
    with pytest.raises(ValueError):
        embed_splitting_vertex_tree(t, 0, 0.0)


def test_hub_stats_and_multiplicity():
    t = hub_tree(400, 2)
    st_ = {}
    lab = embed_splitting_vertex_tree(t, 0, 0.3, 1, multiplicity=4, stats=st_)
    assert_hub_contract(t, 0, lab, 0.3)
    assert st_["multiplicity"] == 4 and st_["matched"] + st_["greedy"] >= 0


@given(st.integers(2, 150), st.integers(0, 10**6), st.sampled_from([0.25, 0.4, 0.6]))
def test_hub_contract_on_every_success(n, seed, eps):
    t = hub_tree(n, seed, max_comp=4)
    try:
        lab = embed_splitting_vertex_tree(t, 0, eps, seed)
    except EmbeddingError:
        return
    assert_hub_contract(t, 0, lab, eps)


# ---------------------------------------------------------------- interval layout


def test_layout_geometry():
    lay = IntervalLayout(d=10, s=1, eta=3)
    assert lay.length == 13 and lay.total == 52
    assert list(lay.interval(1)) == list(range(14, 27))
    assert list(lay.s_window()) == list(range(4, 8))
    assert list(lay.root_window(2)) == list(range(27, 37))
    assert list(lay.s_colours()) == [1, 2, 3]
    assert list(lay.colours(3, 1)) == list(interval_colours(1, 3, 13))


def test_layout_rejects_bad_parameters():
    with pytest.raises(EmbeddingError):
        IntervalLayout(d=9, s=1, eta=2)  # even length
    with pytest.raises(EmbeddingError):
        IntervalLayout(d=4, s=3, eta=2)  # d < 3|S| + 1


@pytest.mark.parametrize("s", range(0, 5))
def test_layout_colour_claims_by_intersection(s):
    for d in range(3 * s + 1, 3 * s + 14):
        if (d + 3 * s) % 2 == 0:
            continue
        eta = 12
        pairs = tuple(itertools.combinations(range(eta + 1), 2))
        lay = IntervalLayout(d, s, eta, pairs)
        cs = set(lay.s_colours())
        for (i, j), (k, l) in itertools.combinations(pairs, 2):
            if abs(j - i) != abs(l - k):
                assert not set(lay.colours(i, j)) & set(lay.colours(k, l))
        for i, j in pairs:
            if abs(j - i) >= 2:
                assert not set(lay.colours(i, j)) & cs


# ---------------------------------------------------------------- rooted structure


def assert_rooted_contract(tree, split, lab, epsilon):
    keep = set(range(tree.n)) - set(split.W)
    assert set(lab.labels) == keep
    real = [(u, w) for u, w in tree.edges if u in keep and w in keep]
    assert is_rainbow(real, lab.labels)
    assert lab.max_label <= int((1 + epsilon) * len(keep) + 1e-9)


def test_aux_tree_structure():
    t = random_tree(600, 3)
    split = split_structure(t, (), m=8, multiplicity=5, delta=1.0)
    aux = build_aux_tree(t, split)
    assert sum(len(b) for b in aux.blocks) == sum(len(c) for c in split.components)
    for i, block in enumerate(aux.blocks):
        p = aux.block_parent[i]
        if p == -1:
            assert all(u in split.component_roots.values() for u in block)
        else:
            # copies line up: each vertex's parent is in the parent block, same copy
            for u, up in zip(block, aux.blocks[p]):
                assert up in t.adjacency[u]


def test_rooted_structure_empty_S():
    t = random_tree(3000, 5)
    split = split_structure(t, (), m=8, multiplicity=9, delta=1.0)
    lab = embed_rooted_structure(t, (), split, 0.3, 1)
    assert_rooted_contract(t, split, lab, 0.3)


def test_rooted_structure_requires_matching_S():
    t = random_tree(500, 5)
    split = split_structure(t, (), m=8, multiplicity=9, delta=1.0)
    with pytest.raises(ValueError):
        embed_rooted_structure(t, {1}, split, 0.3)


def test_rooted_structure_parity_and_size_checks():
    t = random_tree(1000, 2)
    S = {0}
    split = split_structure(t, S, m=8, multiplicity=5, delta=1.0)
    with pytest.raises(EmbeddingError):
        embed_rooted_structure(t, S, split, 0.3)  # 5 + 3 is even
    split = split_structure(t, S, m=8, multiplicity=3, delta=1.0)
    with pytest.raises(EmbeddingError):
        embed_rooted_structure(t, S, split, 0.3)  # d < 3|S| + 1


def test_rooted_structure_overflow_is_reported():
    t = broom(2000, seed=0)
    S = {max(range(t.n), key=lambda v: (t.degrees[v], -v))}
    split = split_structure(t, S, m=8, multiplicity=4, delta=1.0)
    with pytest.raises(EmbeddingError) as exc:
        embed_rooted_structure(t, S, split, 0.25)
    assert exc.value.diagnostics["aux_bound"] < exc.value.diagnostics["eta"] + 1


def test_broom_single_protected_vertex():
    for seed in range(20):
        t = broom(2000, seed=seed)
        S = {max(range(t.n), key=lambda v: (t.degrees[v], -v))}
        split = split_structure(t, S, m=8, multiplicity=24, delta=1.0)
        stats = {}
        lab = embed_rooted_structure(t, S, split, 0.25, seed, stats=stats)
        assert_rooted_contract(t, split, lab, 0.25)
        assert stats["L"] % 2 == 1


def test_caterpillar_rooted_structure_twenty_seeds():
    for seed in range(20):
        t = caterpillar(10**4, seed)
        S = degree_window(t, 0.2).S_high
        d = 15 if (15 + 3 * len(S)) % 2 else 16
        split = split_structure(t, S, m=8, multiplicity=d, delta=1.0)
        lab = embed_rooted_structure(t, S, split, 0.25, seed)
        assert_rooted_contract(t, split, lab, 0.25)


@given(st.integers(30, 400), st.integers(0, 10**6), st.sampled_from([3, 5, 7, 9]), st.booleans())
def test_rooted_contract_on_every_success(n, seed, d, with_S):
    t = random_tree(n, seed)
    S = {max(range(n), key=lambda v: (t.degrees[v], -v))} if with_S else set()
    if with_S:
        d += 1  # keep d + 3 odd
    try:
        split = split_structure(t, S, m=8, multiplicity=d, delta=1.0)
        lab = embed_rooted_structure(t, S, split, 0.5, seed)
    except (EmbeddingError, InfeasibleSplit):
        return
    assert_rooted_contract(t, split, lab, 0.5)
    # copies of each rooted class really are aligned blocks of d
    codes = {rooted_code(t, split.component_roots[i], c) for i, c in enumerate(split.components)}
    assert codes == set(split.shape.counts)
