import numpy as np

from memrc.models.reservoir import Mask


def random_mask(num_nodes: int, num_features: int, seed: int, density: float = 0.5) -> Mask:
    """Binary projection mask; rows left empty by the draw get one randomly placed connection."""
    rng = np.random.default_rng(seed)
    matrix = (rng.random((num_nodes, num_features)) < density).astype(float)
    for row in np.flatnonzero(matrix.sum(axis=1) == 0):
        matrix[row, rng.integers(num_features)] = 1.0
    return Mask(matrix=matrix, seed=seed)


def identity_mask(num_nodes: int) -> Mask:
    """One node per input, used when inputs are already scalar per node."""
    return Mask(matrix=np.eye(num_nodes), seed=0)
