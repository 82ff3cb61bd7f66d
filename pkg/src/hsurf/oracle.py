"""Independent ground-truth generators used to validate the solvers.

Two classical constructions are implemented:

* the minimal-surface (h = 0) representation formula
  ``psi(s, t) = Re beta(z) + Im int_{s0}^{z} B(w) dw`` with ``z = s + it``
  and the data extended holomorphically, integrating along the real axis
  and then vertically with adaptive Gauss-Legendre quadrature, and

* the profile curve of the rotational surface translating vertically
  under mean curvature flow, whose arc-length profile (r, z, theta)
  obeys ``r' = cos theta, z' = sin theta,
  theta' = 2 cos theta - sin theta / r`` with a vertical tangent at the
  neck ``r(0) = tau``.  The sign and the factor in theta' are pinned by
  requiring the revolved surface to pass the mean-curvature check for
  the law h(x) = <x, e3> under this package's normal convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import BjorlingData
from .grid import SGrid
from .strip import SolutionStrip

__all__ = [
    "schwarz_solve", "translator_profile_ode", "ProfileCurve",
    "revolve_profile_strip", "distance_to_profile", "QuadratureError",
]


class QuadratureError(RuntimeError):
    """Adaptive segment refinement failed to converge."""


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _segment_integrals(data: BjorlingData, z0: np.ndarray, z1: np.ndarray) -> np.ndarray:
    """32-point Gauss-Legendre of the field over straight segments [z0, z1]."""
    mid = 0.5 * (z0 + z1)
    half = 0.5 * (z1 - z0)
    nodes = mid[..., None] + half[..., None] * _GL_NODES  # (..., 32)
    vals = data.field_b.eval_complex("s", nodes)          # (..., 32, 3)
    return (vals * _GL_WEIGHTS[:, None]).sum(axis=-2) * half[..., None]


def _adaptive_integrals(data: BjorlingData, z0: np.ndarray, z1: np.ndarray,
                        tol: float = 1e-12, max_splits: int = 12) -> np.ndarray:
    coarse = _segment_integrals(data, z0, z1)
    pieces = 1
    for _ in range(max_splits):
        pieces *= 2
        frac = np.linspace(0.0, 1.0, pieces + 1)
        ends = z0[..., None] + (z1 - z0)[..., None] * frac
        fine = _segment_integrals(data, ends[..., :-1], ends[..., 1:]).sum(axis=-2)
        if np.abs(fine - coarse).max() < tol:
            return fine
        coarse = fine
    raise QuadratureError("segment refinement did not converge; data may not extend holomorphically")


def schwarz_solve(data: BjorlingData, grid: SGrid, delta: float, m_t: int) -> SolutionStrip:
    """Exact minimal strip for vanishing curvature law via holomorphic extension.

    All derivative caches are filled from the holomorphic derivatives of
    the data, so only the positions need quadrature.
    """
    if delta <= 0 or m_t < 1:
        raise ValueError("need delta > 0 and m_t >= 1")
    s = grid.points
    t = np.arange(-m_t, m_t + 1) * (delta / m_t)
    z = s[None, :] + 1j * t[:, None]  # (n_t, n_s)

    beta_c = data.beta.eval_complex("s", z)
    # real-axis prefix integrals to each gridpoint, then vertical legs
    s_c = s.astype(complex)
    cell = _adaptive_integrals(data, s_c[:-1], s_c[1:])
    prefix = np.concatenate([np.zeros((1, 3), complex), np.cumsum(cell, axis=0)], axis=0)
    vertical = _adaptive_integrals(data, np.broadcast_to(s_c, z.shape), z)
    integral = prefix[None, :, :] + vertical

    psi = beta_c.real + integral.imag

    beta_p = data.beta.derivative("s")
    beta_pp = beta_p.derivative("s")
    field_p = data.field_b.derivative("s")
    bp = beta_p.eval_complex("s", z)
    bpp = beta_pp.eval_complex("s", z)
    bb = data.field_b.eval_complex("s", z)
    bbp = field_p.eval_complex("s", z)

    psi_s = bp.real + bb.imag
    psi_t = -bp.imag + bb.real
    psi_ss = bpp.real + bbp.imag
    psi_st = -bpp.imag + bbp.real
    psi_tt = -psi_ss  # harmonic

    normal = np.cross(psi_s, psi_t)
    mag = np.linalg.norm(normal, axis=-1)
    eta = normal / mag[..., None]

    return SolutionStrip(
        grid=grid, t=t, psi=psi, psi_s=psi_s, psi_t=psi_t,
        psi_ss=psi_ss, psi_st=psi_st, psi_tt=psi_tt, eta=eta,
        delta=delta, source="schwarz", coeffs=None,
    )


# --------------------------------------------------------------------------
# Rotational translator profile

@dataclass(frozen=True)
class ProfileCurve:
    u: np.ndarray      # arc length, symmetric about the neck at u = 0
    r: np.ndarray
    z: np.ndarray
    theta: np.ndarray

    @property
    def neck_radius(self) -> float:
        return float(self.r.min())


def _profile_rhs(state: np.ndarray) -> np.ndarray:
    r, _, theta = state
    return np.array([np.cos(theta), np.sin(theta), 2.0 * np.cos(theta) - np.sin(theta) / r])


def _rk4_path(state0: np.ndarray, step: float, n_steps: int) -> np.ndarray:
    out = np.empty((n_steps + 1, 3))
    out[0] = state0
    y = state0.astype(float)
    for i in range(n_steps):
        k1 = _profile_rhs(y)
        k2 = _profile_rhs(y + 0.5 * step * k1)
        k3 = _profile_rhs(y + 0.5 * step * k2)
        k4 = _profile_rhs(y + step * k3)
        y = y + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if y[0] <= 0.0:
            raise ValueError("profile hit the rotation axis; neck size must be positive")
        out[i + 1] = y
    return out


def translator_profile_ode(tau: float, u_max: float, step: float) -> ProfileCurve:
    """Integrate the profile both ways from the neck with classical RK4.

    Initial state r(0) = tau, z(0) = 0, theta(0) = pi/2 (vertical tangent,
    matching an upward field at the neck circle).
    """
    if tau <= 0:
        raise ValueError("neck size must be positive")
    if step <= 0 or u_max <= 0:
        raise ValueError("need positive step and range")
    n_steps = int(round(u_max / step))
    state0 = np.array([tau, 0.0, np.pi / 2.0])
    fwd = _rk4_path(state0, step, n_steps)
    bwd = _rk4_path(state0, -step, n_steps)
    u = np.concatenate([-step * np.arange(n_steps, 0, -1), step * np.arange(n_steps + 1)])
    states = np.concatenate([bwd[1:][::-1], fwd], axis=0)
    return ProfileCurve(u=u, r=states[:, 0], z=states[:, 1], theta=states[:, 2])


def revolve_profile_strip(profile: ProfileCurve, n_phi: int = 256) -> SolutionStrip:
    """Surface of revolution of the profile as a strip over (phi, u).

    The cache carries exact analytic derivatives of the parametrization
    (the ODE supplies theta'), so curvature checks run on it directly;
    the (phi, u) chart is not conformal, which is fine for those checks.
    """
    grid = SGrid(0.0, 2.0 * np.pi, n_phi, periodic=True)
    phi = grid.points
    r, z, theta = profile.r[:, None], profile.z[:, None], profile.theta[:, None]
    cphi, sphi = np.cos(phi)[None, :], np.sin(phi)[None, :]
    ct, st = np.cos(theta), np.sin(theta)
    theta_p = 2.0 * ct - st / r

    def assemble(radial, vertical):
        return np.stack([radial * cphi, radial * sphi, vertical * np.ones_like(cphi)], axis=-1)

    psi = assemble(r, z)
    psi_u = assemble(ct, st)
    psi_uu = assemble(-st * theta_p, ct * theta_p)
    psi_phi = np.stack([-r * sphi, r * cphi, np.zeros_like(r * cphi)], axis=-1)
    psi_uphi = np.stack([-ct * sphi, ct * cphi, np.zeros_like(ct * cphi)], axis=-1)

    normal = np.cross(psi_phi, psi_u)
    mag = np.linalg.norm(normal, axis=-1)
    eta = normal / mag[..., None]

    return SolutionStrip(
        grid=grid, t=profile.u, psi=psi, psi_s=psi_phi, psi_t=psi_u,
        psi_ss=np.stack([-r * cphi, -r * sphi, np.zeros_like(r * cphi)], axis=-1),
        psi_st=psi_uphi, psi_tt=psi_uu, eta=eta,
        delta=float(profile.u.max()), source="revolved",
    )


def distance_to_profile(points: np.ndarray, profile: ProfileCurve) -> np.ndarray:
    """Distance of R^3 points to the revolved profile surface.

    By rotational symmetry this is the planar distance of (radius, height)
    to the profile polyline, with exact point-segment projection.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    pr = np.hypot(pts[:, 0], pts[:, 1])
    pz = pts[:, 2]
    q = np.stack([pr, pz], axis=-1)                       # (m, 2)
    poly = np.stack([profile.r, profile.z], axis=-1)      # (p, 2)
    seg_a, seg_b = poly[:-1], poly[1:]
    d = seg_b - seg_a
    len2 = (d * d).sum(-1)
    best = np.full(len(q), np.inf)
    chunk = 2048
    for lo in range(0, len(q), chunk):
        qq = q[lo:lo + chunk]
        diff = qq[:, None, :] - seg_a[None, :, :]
        tproj = np.clip((diff * d[None, :, :]).sum(-1) / len2[None, :], 0.0, 1.0)
        closest = seg_a[None, :, :] + tproj[..., None] * d[None, :, :]
        dist = np.linalg.norm(qq[:, None, :] - closest, axis=-1).min(axis=1)
        best[lo:lo + chunk] = dist
    return best.reshape(np.asarray(points).shape[:-1])
