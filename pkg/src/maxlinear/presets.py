"""Ready-made graphs, weight policies, and random model factories.

The ten-node DAG is the package's worked example: one parentless node
(10) feeding two intermediate layers and four terminal nodes, labelled
so that the graph is well-ordered.  Its generations are
``{10}, {8, 9}, {5, 6, 7}, {1, 2, 3, 4}``.

Weight policies target the simulation-study regime: innovation weights
are all one and squared edge weights are drawn uniformly from
``{2/1, 2/2, ..., 2/8}``, mixing amplifying and damping edges.
"""

from __future__ import annotations

import numpy as np

from .dag import DagStructure
from .errors import ValidationError
from .model import standardize
from .dag import path_coefficients

TEN_NODE_EDGES: tuple[tuple[int, int], ...] = (
    (10, 9),
    (10, 8),
    (9, 7),
    (9, 6),
    (8, 6),
    (8, 5),
    (7, 4),
    (7, 3),
    (6, 3),
    (6, 2),
    (5, 2),
    (5, 1),
)

TEN_NODE_GENERATIONS: tuple[frozenset[int], ...] = (
    frozenset({10}),
    frozenset({8, 9}),
    frozenset({5, 6, 7}),
    frozenset({1, 2, 3, 4}),
)

# Squared edge weights of the frozen ten-node example model, keyed by
# (parent, child) edge.  Chosen from the standard weight grid so that
# every exact-mode ordering delta sits far from the acceptance bands
# (see tests); values are frozen verbatim from the selection run.
TEN_NODE_SQUARED_WEIGHTS: dict[tuple[int, int], float] = {
    (5, 1): 0.4,
    (5, 2): 0.3333333333333333,
    (6, 2): 0.28571428571428575,
    (6, 3): 0.3333333333333333,
    (7, 3): 0.28571428571428575,
    (7, 4): 0.4,
    (8, 5): 0.6666666666666666,
    (8, 6): 0.25,
    (9, 6): 1.0,
    (9, 7): 0.6666666666666666,
    (10, 8): 0.5000000000000001,
    (10, 9): 0.6666666666666666,
}

EDGE_WEIGHT_GRID = tuple(2.0 / r for r in range(1, 9))


def ten_node_dag() -> DagStructure:
    return DagStructure(10, TEN_NODE_EDGES)


def unit_weights(dag: DagStructure) -> np.ndarray:
    """All innovation and edge weights equal to one."""
    d = dag.node_count
    w = np.zeros((d, d))
    for i in range(1, d + 1):
        w[i - 1, i - 1] = 1.0
        for p in dag.parents(i):
            w[i - 1, p - 1] = 1.0
    return w


def random_weights(dag: DagStructure, rng: np.random.Generator) -> np.ndarray:
    """Study policy: unit innovation weights, squared edge weights uniform
    on the grid {2/1, ..., 2/8}.

    Edge draws consume the generator in a fixed (child, parent) order,
    so a seeded generator reproduces the same matrix.
    """
    d = dag.node_count
    w = np.zeros((d, d))
    for i in range(1, d + 1):
        w[i - 1, i - 1] = 1.0
        for p in sorted(dag.parents(i)):
            w[i - 1, p - 1] = float(np.sqrt(rng.choice(EDGE_WEIGHT_GRID)))
    return w


def ten_node_weights() -> np.ndarray:
    """The frozen edge-weight matrix of the worked example."""
    dag = ten_node_dag()
    w = np.zeros((10, 10))
    for i in range(1, 11):
        w[i - 1, i - 1] = 1.0
    for (j, i), sq in TEN_NODE_SQUARED_WEIGHTS.items():
        w[i - 1, j - 1] = float(np.sqrt(sq))
    return w


def ten_node_model() -> np.ndarray:
    """Standardized coefficient matrix of the frozen ten-node example."""
    return standardize(path_coefficients(ten_node_dag(), ten_node_weights()))


def random_well_ordered_dag(
    d: int, rng: np.random.Generator, edge_prob: float = 0.4
) -> DagStructure:
    """A random DAG in which every edge points from a larger label to a
    smaller one; every non-top node receives at least one parent so the
    graph has depth."""
    if d < 1:
        raise ValidationError("d must be >= 1")
    edges = []
    for i in range(1, d):
        candidates = [j for j in range(i + 1, d + 1)]
        picked = [j for j in candidates if rng.random() < edge_prob]
        if not picked:
            picked = [int(rng.choice(candidates))]
        edges.extend((j, i) for j in picked)
    return DagStructure(d, edges)


def random_standardized_model(
    d: int, rng: np.random.Generator, edge_prob: float = 0.4
) -> np.ndarray:
    """Standardized coefficients of a random well-ordered model under the
    study weight policy."""
    dag = random_well_ordered_dag(d, rng, edge_prob)
    return standardize(path_coefficients(dag, random_weights(dag, rng)))
