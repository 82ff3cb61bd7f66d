"""Series marcher: build the t-expansion of the strip level by level.

Writing the strip as ``psi(s, t) = sum_k a_k(s) t^k``, the governing
equation in conformal coordinates,

    psi_ss + psi_tt = 2 h(eta) psi_s ^ psi_t,
    eta = psi_s ^ psi_t / |psi_s ^ psi_t|,

turns into an explicit recurrence: coefficient k of the right-hand side
involves only rows a_0 .. a_{k+1} (and their s-derivatives), so

    (k+1)(k+2) a_{k+2} = [2 h(N/|N|) N - psi_ss]_k,   N = psi_s ^ psi_t,

builds the tensor one level at a time.  Each level works with series
truncated at exactly the level order, so nothing past the final order is
ever read or written.  Rows 0 and 1 and their s-derivatives come from
the symbolic data expressions; this keeps screw-periodic data (curve
advancing by a constant pitch per period, field periodic) exact on a
periodic grid, where only rows k >= 2, which are genuinely periodic,
are differentiated numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import BjorlingData, PrescribedH
from .grid import SGrid
from .series import SeriesDomainError, TruncSeries, cross3, dot3
from .strip import CoeffTensor, SolutionStrip
from . import expr as ex

__all__ = ["expand_coefficients", "s_derivative", "estimate_radius",
           "evaluate_strip", "RadiusEstimate", "SolverError",
           "BlowUpError", "DegenerateImmersionError"]


class SolverError(RuntimeError):
    pass


class BlowUpError(SolverError):
    """Non-finite values appeared while marching."""


class DegenerateImmersionError(SolverError):
    """|psi_s ^ psi_t| fell below the immersion floor."""


def s_derivative(rows: np.ndarray, grid: SGrid, order: int) -> np.ndarray:
    """Differentiate coefficient rows along the grid (axis 0).

    Periodic grids use trigonometric differentiation, open grids centered
    finite differences of order >= 6 with one-sided closures at the ends.
    """
    return grid.derivative(np.asarray(rows, dtype=float), order)


def _denoise_periodic(rows: np.ndarray, grid: SGrid) -> np.ndarray:
    """Zero Fourier modes below the spectral round-off floor of one level.

    Repeated spectral differentiation amplifies the round-off floor of
    the high modes level by level (the marching direction is the
    ill-posed one), while the exact rows of analytic data have
    exponentially decaying mode content.  One second derivative creates
    relative noise of order eps * (n/2)^2, so modes below a few times
    that level are pure noise and are dropped before they can compound.
    """
    threshold = max(1e-13, 4.0 * np.finfo(float).eps * (grid.n / 2.0) ** 2)
    fk = np.fft.rfft(rows, axis=0)
    mag = np.abs(fk)
    top = mag.max(axis=0, keepdims=True)
    fk[mag < threshold * top] = 0.0
    return np.fft.irfft(fk, n=grid.n, axis=0)


def expand_coefficients(data: BjorlingData, h: PrescribedH, grid: SGrid, order: int = 16) -> CoeffTensor:
    """March the recurrence up to the requested truncation order."""
    if order < 2:
        raise ValueError("need at least order 2")
    n = grid.n
    s = grid.points
    a = np.zeros((order + 1, n, 3))
    da = np.zeros_like(a)
    dda = np.zeros_like(a)

    beta_p = data.beta.derivative("s")
    field_p = data.field_b.derivative("s")
    a[0] = data.beta.eval("s", s)
    a[1] = data.field_b.eval("s", s)
    da[0] = beta_p.eval("s", s)
    da[1] = field_p.eval("s", s)
    dda[0] = beta_p.derivative("s").eval("s", s)
    dda[1] = field_p.derivative("s").eval("s", s)

    h_const = h.constant_value() if h.is_constant() else None

    # pt[m] = (m+1) a[m+1] holds the t-derivative rows
    pt = np.zeros((order, n, 3))
    pt[0] = a[1]

    for k in range(order - 1):
        if h_const == 0.0:
            rhs = -dda[k]
        else:
            ps = TruncSeries(da[:k + 1])
            ptk = TruncSeries(pt[:k + 1])
            cross = cross3(ps, ptk)
            if h_const is not None:
                hn_k = 2.0 * h_const * cross.c[k]
            else:
                try:
                    mag = dot3(cross, cross).sqrt()
                except SeriesDomainError as err:
                    raise DegenerateImmersionError(
                        "degenerate normal while marching (|beta' ^ B| = 0 somewhere?)") from err
                hser = ex.eval_series(h.h, {
                    "x": TruncSeries(cross.c[..., 0]) / mag,
                    "y": TruncSeries(cross.c[..., 1]) / mag,
                    "z": TruncSeries(cross.c[..., 2]) / mag,
                })
                hn_k = 2.0 * _product_coefficient(hser.c[:, :, None], cross.c, k)
            rhs = hn_k - dda[k]
        new = rhs / ((k + 1.0) * (k + 2.0))
        if not np.isfinite(new).all():
            raise BlowUpError(f"non-finite coefficient at level {k + 2}")
        if grid.periodic:
            new = _denoise_periodic(new, grid)
        a[k + 2] = new
        da[k + 2] = grid.derivative(new, 1)
        dda[k + 2] = grid.derivative(new, 2)
        if k + 1 < order:
            pt[k + 1] = (k + 2.0) * a[k + 2]

    return CoeffTensor(grid, a, da, dda)


def _product_coefficient(u: np.ndarray, v: np.ndarray, k: int) -> np.ndarray:
    acc = u[0] * v[k]
    for m in range(1, k + 1):
        acc = acc + u[m] * v[k - m]
    return acc


@dataclass(frozen=True)
class RadiusEstimate:
    per_point: np.ndarray       # (n,), may contain inf
    suggestion: float           # safety_factor * min per-point radius
    safety_factor: float


def estimate_radius(coeffs: CoeffTensor, safety_factor: float = 0.5, window: int = 6) -> RadiusEstimate:
    """Root-test radius estimate from the tail of the coefficient norms.

    Uses the largest |a_k|^(1/k) over the last ``window`` orders at every
    grid point (parity-robust: alternating zero rows are skipped).  Data
    whose rows vanish beyond the field row has infinite radius.
    """
    order = coeffs.order
    if order < 6:
        raise ValueError("radius estimation needs order >= 6")
    norms = np.linalg.norm(coeffs.a, axis=-1)  # (K+1, n)
    lo = max(2, order + 1 - window)
    tail = norms[lo:]
    ks = np.arange(lo, order + 1, dtype=float)
    roots = np.where(tail > 0.0, tail, 1.0) ** (1.0 / ks[:, None])
    roots = np.where(tail > 0.0, roots, 0.0)
    top = roots.max(axis=0)
    per_point = np.where(top > 0.0, 1.0 / np.maximum(top, 1e-300), np.inf)
    return RadiusEstimate(per_point, safety_factor * float(per_point.min()), safety_factor)


IMMERSION_FLOOR = 1e-12


def evaluate_strip(coeffs: CoeffTensor, delta: float, m_t: int,
                   force: bool = False) -> SolutionStrip:
    """Fill the strip cache on the (2 m_t + 1) x n grid over |t| <= delta.

    Unless ``force`` is set, ``delta`` must not exceed the suggested
    convergence radius from :func:`estimate_radius`.
    """
    if delta <= 0 or m_t < 1:
        raise ValueError("need delta > 0 and m_t >= 1")
    if not force and coeffs.order >= 6:
        suggestion = estimate_radius(coeffs).suggestion
        if delta > suggestion:
            raise SolverError(
                f"delta {delta} exceeds suggested radius {suggestion:.6g}; pass force=True to override")
    t = np.arange(-m_t, m_t + 1) * (delta / m_t)
    a, da, dda = coeffs.a, coeffs.da, coeffs.dda
    order = coeffs.order

    def horner(rows: np.ndarray) -> np.ndarray:
        acc = np.zeros((t.size,) + rows.shape[1:])
        for k in range(rows.shape[0] - 1, -1, -1):
            acc = acc * t[:, None, None] + rows[k]
        return acc

    shift1 = np.arange(1, order + 1)[:, None, None]
    shift2 = (np.arange(2, order + 1) * np.arange(1, order))[:, None, None]
    psi = horner(a)
    psi_t = horner(shift1 * a[1:])
    psi_tt = horner(shift2 * a[2:])
    psi_s = horner(da)
    psi_ss = horner(dda)
    psi_st = horner(shift1 * da[1:])

    normal = np.cross(psi_s, psi_t)
    mag = np.linalg.norm(normal, axis=-1)
    if mag.min() < IMMERSION_FLOOR:
        i, j = np.unravel_index(int(np.argmin(mag)), mag.shape)
        raise DegenerateImmersionError(
            f"immersion degenerates at (s, t) = ({coeffs.grid.points[j]:.6g}, {t[i]:.6g})")
    eta = normal / mag[..., None]

    return SolutionStrip(
        grid=coeffs.grid, t=t, psi=psi, psi_s=psi_s, psi_t=psi_t,
        psi_ss=psi_ss, psi_st=psi_st, psi_tt=psi_tt, eta=eta,
        delta=delta, source="ck", coeffs=coeffs,
    )
