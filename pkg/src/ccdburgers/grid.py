"""Uniform 1D grid axes shared by every coordinate direction."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GridAxis:
    """A uniform axis with ``n_cells`` intervals between ``left`` and ``right``.

    Nodes sit at ``left + i*spacing`` for ``i = 0 .. n_cells``. At least 4
    cells are required: with only 4 nodes the derivative-operator coefficient
    matrix is exactly singular (its boundary closures and interior relations
    become linearly dependent), so 5 nodes is the smallest solvable system.
    """

    n_cells: int
    left: float = 0.0
    right: float = 1.0

    def __post_init__(self):
        if self.n_cells < 4:
            raise ValueError(
                f"axis needs at least 4 cells, got {self.n_cells}"
            )
        if not self.right > self.left:
            raise ValueError(
                f"invalid interval [{self.left}, {self.right}]"
            )

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1

    @property
    def spacing(self) -> float:
        return (self.right - self.left) / self.n_cells

    def nodes(self) -> np.ndarray:
        return np.linspace(self.left, self.right, self.n_nodes)
