from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Grid1D:
    """Uniform node-centred grid including both endpoints."""

    x_min: float
    x_max: float
    nx: int

    def __post_init__(self):
        if self.nx < 3:
            raise ValueError(f"need at least 3 nodes, got {self.nx}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @classmethod
    def from_spacing(cls, x_min: float, x_max: float, dx: float) -> "Grid1D":
        n_cells = round((x_max - x_min) / dx)
        if abs(n_cells * dx - (x_max - x_min)) > 1e-9 * (x_max - x_min):
            raise ValueError(f"dx={dx} does not divide [{x_min}, {x_max}]")
        return cls(x_min, x_max, n_cells + 1)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @cached_property
    def x(self) -> np.ndarray:
        x = np.linspace(self.x_min, self.x_max, self.nx)
        x.setflags(write=False)
        return x

    def node_at(self, location: float) -> bool:
        k = (location - self.x_min) / self.dx
        return abs(k - round(k)) < 1e-9
