import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from gracesize import ExactGracefulSolver, NearGracefulLabeller, TreeSplitter
from gracesize._validation import check_epsilon, check_positive_int, check_seed, check_tree, check_trees
from gracesize.families import path, star
from gracesize.pipeline import PipelineConfig
from gracesize.split import check_split
from gracesize.tree import Tree, TreeError, enumerate_trees, random_tree
from gracesize.verify import gracesize_of, is_graceful


def test_labeller_params_and_clone():
    est = NearGracefulLabeller(epsilon=0.3, seed=4, bijective=True)
    assert est.get_params() == {"epsilon": 0.3, "seed": 4, "bijective": True, "config": None}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est
    est.set_params(epsilon=0.25)
    assert est.epsilon == 0.25


def test_labeller_fit_transform_predict_score():
    trees = [random_tree(200, s) for s in range(3)]
    est = NearGracefulLabeller(epsilon=0.2, seed=1).fit(trees)
    assert est.n_trees_ == 3 and len(est.labellings_) == 3
    labs = est.transform(trees)
    assert labs == est.labellings_
    pred = est.predict(trees)
    assert isinstance(pred, np.ndarray)
    assert pred.tolist() == [gracesize_of(t, lab) for t, lab in zip(trees, labs)]
    assert est.score(trees) == pytest.approx(np.mean([r.fraction for r in est.reports_]))
    assert est.fit_transform(trees) == labs


def test_labeller_accepts_text_and_pairs():
    est = NearGracefulLabeller(config=PipelineConfig(seed_retries=2))
    est.fit("5\n0 1\n1 2\n2 3\n3 4\n")
    assert est.n_trees_ == 1
    est.fit([[(0, 1), (1, 2)], path(6)])
    assert est.n_trees_ == 2


def test_labeller_not_fitted_and_bad_params():
    with pytest.raises(NotFittedError):
        NearGracefulLabeller().predict([path(5)])
    with pytest.raises(ValueError):
        NearGracefulLabeller(epsilon=1.5).fit([path(5)])
    with pytest.raises(TypeError):
        NearGracefulLabeller(seed="x").fit([path(5)])


def test_exact_solver():
    trees = list(enumerate_trees(7))
    est = ExactGracefulSolver().fit(trees)
    assert all(lab is not None and is_graceful(t, lab) for t, lab in zip(trees, est.labellings_))
    assert est.predict(trees).tolist() == [6] * len(trees)
    assert clone(est).get_params() == {"budget": 10_000_000}
    with pytest.raises(ValueError):
        ExactGracefulSolver(budget=0).fit(trees)


def test_exact_solver_large_tree_uses_search():
    est = ExactGracefulSolver(budget=5).fit([star(3)])
    assert est.predict([random_tree(40, 1)]).tolist() == [-1]


def test_splitter():
    trees = [random_tree(2000, s) for s in range(2)]
    est = TreeSplitter(m=8, delta=1.0).fit(trees)
    for t, split in zip(trees, est.splits_):
        check_split(t, split)
    assert est.transform(trees) == est.splits_
    assert clone(est).get_params()["m"] == 8


def test_validation_helpers():
    assert check_tree("2\n0 1\n") == Tree(2, ((0, 1),))
    assert check_tree([(0, 1), (1, 2)]).n == 3
    with pytest.raises(TreeError):
        check_tree(42)
    with pytest.raises(TreeError):
        check_tree([(0, 1, 2)])
    with pytest.raises(TreeError):
        check_tree([])
    with pytest.raises(ValueError):
        check_trees([])
    assert len(check_trees(path(3))) == 1
    assert check_epsilon(0.5) == 0.5
    with pytest.raises(TypeError):
        check_epsilon(True)
    assert check_seed(None) is None and check_seed(np.int64(3)) == 3
    with pytest.raises(ValueError):
        check_positive_int(-1, "k")
