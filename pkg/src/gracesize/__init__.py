"""Near-graceful labellings of trees.

Trees are embedded into difference-coloured complete graphs so that almost
every edge receives its own label difference, using labels up to
``(1 + eps) n``.
"""

from .embed import EmbeddingError, embed_rooted_structure, embed_splitting_vertex_tree
from .estimators import ExactGracefulSolver, NearGracefulLabeller, TreeSplitter
from .exact import max_gracesize, solve_graceful
from .families import gen_family
from .matching import interval_matching, random_pair_rainbow_matching, spanning_difference_graph
from .pipeline import PipelineConfig, degree_window, near_graceful, repair_pass
from .split import InfeasibleSplit, split_structure
from .tree import Tree, TreeError, enumerate_trees, parse_tree, random_tree
from .verify import EmbeddingReport, Labelling, LabellingError, check_report, is_graceful

__all__ = [
    "EmbeddingError",
    "EmbeddingReport",
    "ExactGracefulSolver",
    "InfeasibleSplit",
    "Labelling",
    "LabellingError",
    "NearGracefulLabeller",
    "PipelineConfig",
    "Tree",
    "TreeError",
    "TreeSplitter",
    "check_report",
    "degree_window",
    "embed_rooted_structure",
    "embed_splitting_vertex_tree",
    "enumerate_trees",
    "gen_family",
    "interval_matching",
    "is_graceful",
    "max_gracesize",
    "near_graceful",
    "parse_tree",
    "random_pair_rainbow_matching",
    "random_tree",
    "repair_pass",
    "solve_graceful",
    "spanning_difference_graph",
    "split_structure",
]

__version__ = "0.1.0"
