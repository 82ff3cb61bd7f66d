"""Containers for marched coefficients and evaluated surface strips."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .grid import SGrid

__all__ = ["CoeffTensor", "SolutionStrip", "BOUNDARY_SKIP"]

# columns next to the ends of an open grid carry one-sided-stencil error
# and are excluded from residual maxima
BOUNDARY_SKIP = 3


@dataclass
class CoeffTensor:
    """Per-gridpoint t-expansion coefficients a[k][j] in R^3.

    ``a[0]`` and ``a[1]`` hold the curve and the field evaluated on the
    grid; higher rows are produced by the marching recurrence.  ``da``
    and ``dda`` cache the first and second s-derivative of every row
    (rows 0 and 1 are exact, from the symbolic derivatives of the data).
    """

    grid: SGrid
    a: np.ndarray    # (K+1, n, 3)
    da: np.ndarray
    dda: np.ndarray

    @property
    def order(self) -> int:
        return self.a.shape[0] - 1


@dataclass
class SolutionStrip:
    """Evaluated strip over the (s_j, t_i) grid with derivative caches.

    All cached arrays have shape (n_t, n_s, 3); ``t`` is symmetric about
    zero so the axis row t=0 sits at index ``len(t) // 2``.
    """

    grid: SGrid
    t: np.ndarray
    psi: np.ndarray
    psi_s: np.ndarray
    psi_t: np.ndarray
    psi_ss: np.ndarray
    psi_st: np.ndarray
    psi_tt: np.ndarray
    eta: np.ndarray
    delta: float
    source: str = "ck"
    coeffs: Optional[CoeffTensor] = None
    meta: dict = field(default_factory=dict)

    @property
    def n_t(self) -> int:
        return self.t.shape[0]

    @property
    def boundary_skip(self) -> int:
        return 0 if self.grid.periodic else BOUNDARY_SKIP

    def interior_columns(self) -> slice:
        b = self.boundary_skip
        return slice(b, self.grid.n - b if b else None)

    def axis_index(self) -> int:
        return self.n_t // 2
