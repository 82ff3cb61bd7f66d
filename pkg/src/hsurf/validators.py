"""Numerical pass/fail checks on solution strips.

Each check reduces a structural identity of the continuous problem
(conformality of the parametrization, the prescribed-curvature law, the
symmetries forced by uniqueness of the Cauchy problem, and the half-turn
identification behind Moebius data) to a sup-norm residual over the
cached grid, excluding the boundary band of open grids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .data import PrescribedH
from .grid import GridAlignmentError
from .strip import SolutionStrip

__all__ = [
    "CheckReport", "conformality_check", "mean_curvature_check",
    "symmetry_check", "mobius_involution_check", "normal_antipodality_check",
    "DEFAULT_THRESHOLDS",
]

DEFAULT_THRESHOLDS = {
    "conformality": 1e-8,
    "mean_curvature": 1e-6,
    "symmetry": 1e-8,
    "mobius_involution": 1e-6,
    "normal_antipodality": 1e-6,
}


@dataclass(frozen=True)
class CheckReport:
    name: str
    max_residual: float
    location: tuple  # (s, t) of the maximum
    threshold: float
    passed: bool

    def line(self) -> str:
        s, t = self.location
        return (f"check={self.name} max={self.max_residual!r} "
                f"at=({s!r},{t!r}) pass={str(self.passed).lower()}")


def _report(name: str, residual: np.ndarray, strip: SolutionStrip, threshold: float,
            columns: Optional[np.ndarray] = None) -> CheckReport:
    """Reduce a (n_t, n_cols) residual field to a located sup-norm report."""
    i, j = np.unravel_index(int(np.argmax(residual)), residual.shape)
    cols = columns if columns is not None else np.arange(strip.grid.n)[strip.interior_columns()]
    loc = (float(strip.grid.points[cols[j]]), float(strip.t[i]))
    value = float(residual[i, j])
    return CheckReport(name, value, loc, threshold, bool(value <= threshold))


def conformality_check(strip: SolutionStrip,
                       threshold: float = DEFAULT_THRESHOLDS["conformality"]) -> CheckReport:
    """Residual of the conformality identity, |E - G|/4 + |F|/2 pointwise.

    These are the real and imaginary parts of the quadratic differential
    that vanishes identically for an exact solution (it is holomorphic
    and zero on the axis, where it reduces to the data identities).
    """
    cols = strip.interior_columns()
    ps, pt = strip.psi_s[:, cols], strip.psi_t[:, cols]
    ee = (ps * ps).sum(-1)
    gg = (pt * pt).sum(-1)
    ff = (ps * pt).sum(-1)
    residual = np.abs(ee - gg) / 4.0 + np.abs(ff) / 2.0
    return _report("conformality", residual, strip, threshold)


def mean_curvature_check(strip: SolutionStrip, h: PrescribedH,
                         threshold: float = DEFAULT_THRESHOLDS["mean_curvature"]) -> CheckReport:
    """Compare the first/second-fundamental-form mean curvature with h(eta)."""
    cols = strip.interior_columns()
    ps, pt = strip.psi_s[:, cols], strip.psi_t[:, cols]
    eta = strip.eta[:, cols]
    ee = (ps * ps).sum(-1)
    ff = (ps * pt).sum(-1)
    gg = (pt * pt).sum(-1)
    e2 = (strip.psi_ss[:, cols] * eta).sum(-1)
    f2 = (strip.psi_st[:, cols] * eta).sum(-1)
    g2 = (strip.psi_tt[:, cols] * eta).sum(-1)
    det = ee * gg - ff * ff
    if det.min() < 1e-14:
        raise ValueError("degenerate first fundamental form (EG - F^2 ~ 0)")
    h_num = (e2 * gg - 2.0 * f2 * ff + g2 * ee) / (2.0 * det)
    residual = np.abs(h_num - h.eval(eta))
    return _report("mean_curvature", residual, strip, threshold)


def _rotation_z(phi: float) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def symmetry_check(strip: SolutionStrip, rot_angle: float, translation, s_shift: float,
                   threshold: float = DEFAULT_THRESHOLDS["symmetry"]) -> CheckReport:
    """Residual of psi(s + sigma, t) = R_phi psi(s, t) + v on the overlap.

    ``s_shift`` must be grid aligned.  Periodic grids wrap, so the overlap
    is the whole grid; open grids compare the columns whose shift stays
    inside, minus the boundary band on either side.
    """
    g = strip.grid
    k = g.shift_index(s_shift)
    rotated = strip.psi @ _rotation_z(rot_angle).T + np.asarray(translation, dtype=float)
    if g.periodic:
        shifted = np.roll(strip.psi, -k, axis=1)
        cols = np.arange(g.n)
    else:
        b = strip.boundary_skip
        lo, hi = max(b, b - k), min(g.n - b, g.n - b - k)
        if hi <= lo:
            raise ValueError("empty overlap for the requested shift")
        cols = np.arange(lo, hi)
        shifted = strip.psi[:, cols + k]
        rotated = rotated[:, cols]
    residual = np.linalg.norm(shifted - rotated, axis=-1)
    return _report("symmetry", residual, strip, threshold, columns=cols)


def _half_turn_pair(strip: SolutionStrip, period: float):
    g = strip.grid
    if not g.periodic:
        raise GridAlignmentError("half-turn checks need the periodic double-cover grid")
    k = g.shift_index(period)
    if strip.n_t % 2 == 0 or not np.allclose(strip.t, -strip.t[::-1]):
        raise GridAlignmentError("strip must be symmetric in t")
    return k


def mobius_involution_check(strip: SolutionStrip, period: float,
                            threshold: float = DEFAULT_THRESHOLDS["mobius_involution"]) -> CheckReport:
    """Residual of the gluing identity psi(s + T, -t) = psi(s, t)."""
    k = _half_turn_pair(strip, period)
    moved = np.roll(strip.psi[::-1], -k, axis=1)
    residual = np.linalg.norm(moved - strip.psi, axis=-1)
    return _report("mobius_involution", residual, strip, threshold,
                   columns=np.arange(strip.grid.n))


def normal_antipodality_check(strip: SolutionStrip, period: float,
                              threshold: float = DEFAULT_THRESHOLDS["normal_antipodality"]) -> CheckReport:
    """Residual of eta(s + T, -t) = -eta(s, t), the flip side of the gluing."""
    k = _half_turn_pair(strip, period)
    moved = np.roll(strip.eta[::-1], -k, axis=1)
    residual = np.linalg.norm(moved + strip.eta, axis=-1)
    return _report("normal_antipodality", residual, strip, threshold,
                   columns=np.arange(strip.grid.n))
