"""Explicit time-stepping cross-check for the series marcher.

The strip equation is integrated as a second-order evolution in t,

    psi_tt = 2 h(eta) psi_s ^ psi_t - psi_ss,

with a leapfrog update and the first step seeded from the level-2
expansion coefficient.  The t-derivative entering the right-hand side is
a centered difference, realized with one predictor/corrector pass so the
scheme stays explicit and second order.  Marching a Cauchy problem for
an elliptic operator amplifies high s-frequencies exponentially, so on
periodic grids each new row can be low-pass filtered; this backend is
meant for small |t| cross-checks, not for production strips.

The marcher evolves the displacement u = psi - beta.  For closed,
half-turn and screw-periodic data alike u is periodic in s even when
beta itself is not, so spectral differentiation of u plus the symbolic
derivatives of beta stay exact on periodic grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ck import BlowUpError, DegenerateImmersionError, expand_coefficients
from .data import BjorlingData, PrescribedH
from .grid import SGrid, lowpass_filter
from .strip import SolutionStrip

__all__ = ["FDConfig", "march"]


@dataclass(frozen=True)
class FDConfig:
    dt: float
    n_steps: int
    filter_cutoff: float = 2.0 / 3.0  # fraction of Nyquist; 1 = no filtering
    deriv_order: int = 8

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.n_steps < 1:
            raise ValueError("need at least one step per half-strip")
        if not 0.0 < self.filter_cutoff <= 1.0:
            raise ValueError("filter_cutoff must lie in (0, 1]")


def march(data: BjorlingData, h: PrescribedH, grid: SGrid, cfg: FDConfig) -> SolutionStrip:
    """Leapfrog both half-strips t > 0 and t < 0 from the axis data."""
    s = grid.points
    beta = data.beta.eval("s", s)
    beta_p = data.beta.derivative("s")
    bp = beta_p.eval("s", s)
    bpp = beta_p.derivative("s").eval("s", s)
    field = data.field_b.eval("s", s)

    level2 = expand_coefficients(data, h, grid, order=2)
    a2 = level2.a[2]

    h_const = h.constant_value() if h.is_constant() else None
    use_filter = grid.periodic and cfg.filter_cutoff < 1.0

    def smooth(u):
        return lowpass_filter(u, cfg.filter_cutoff, grid) if use_filter else u

    def accel(u, u_t):
        psi_s = bp + grid.derivative(u, 1)
        cross = np.cross(psi_s, u_t)
        if h_const is not None:
            hval = h_const
        else:
            mag = np.linalg.norm(cross, axis=-1)
            if mag.min() < 1e-14:
                raise DegenerateImmersionError("cross product degenerated during time stepping")
            hval = h.eval(cross / mag[..., None])[..., None]
        return 2.0 * hval * cross - (bpp + grid.derivative(u, 2))

    dt = cfg.dt

    def half_march(sign: float):
        rows = [np.zeros_like(beta)]
        first = sign * dt * field + dt * dt * a2
        rows.append(smooth(first))
        for step in range(1, cfg.n_steps):
            prev, cur = rows[-2], rows[-1]
            u_t = (cur - prev) / dt * sign
            pred = 2.0 * cur - prev + dt * dt * accel(cur, u_t)
            u_t = (pred - prev) / (2.0 * dt) * sign
            nxt = 2.0 * cur - prev + dt * dt * accel(cur, u_t)
            if not np.isfinite(nxt).all():
                raise BlowUpError(f"time stepping blew up at step {step + 1} (t = {sign * (step + 1) * dt:.6g})")
            rows.append(smooth(nxt))
        return rows

    up = half_march(+1.0)
    down = half_march(-1.0)
    t = np.arange(-cfg.n_steps, cfg.n_steps + 1) * dt
    u = np.stack([*reversed(down[1:]), *up], axis=0)
    psi = u + beta

    psi_s = bp + np.stack([grid.derivative(r, 1) for r in u], axis=0)
    psi_ss = bpp + np.stack([grid.derivative(r, 2) for r in u], axis=0)
    psi_t = _time_derivative(psi, dt)
    psi_tt = _time_derivative(psi_t, dt)
    psi_st = _time_derivative(psi_s, dt)

    normal = np.cross(psi_s, psi_t)
    mag = np.linalg.norm(normal, axis=-1)
    if mag.min() < 1e-14:
        raise DegenerateImmersionError("cross product degenerated on the assembled strip")
    eta = normal / mag[..., None]

    return SolutionStrip(
        grid=grid, t=t, psi=psi, psi_s=psi_s, psi_t=psi_t,
        psi_ss=psi_ss, psi_st=psi_st, psi_tt=psi_tt, eta=eta,
        delta=cfg.n_steps * dt, source="fd", coeffs=None,
        meta={"dt": dt, "n_steps": cfg.n_steps, "filter_cutoff": cfg.filter_cutoff},
    )


def _time_derivative(rows: np.ndarray, dt: float) -> np.ndarray:
    out = np.empty_like(rows)
    out[1:-1] = (rows[2:] - rows[:-2]) / (2.0 * dt)
    out[0] = (-3.0 * rows[0] + 4.0 * rows[1] - rows[2]) / (2.0 * dt)
    out[-1] = (3.0 * rows[-1] - 4.0 * rows[-2] + rows[-3]) / (2.0 * dt)
    return out
