"""Curve/field data pairs and prescribed curvature laws.

A valid data pair is an analytic regular curve ``beta(s)`` together with
an analytic field ``B(s)`` along it satisfying the two pointwise
identities ``|beta'| = |B|`` and ``<beta', B> = 0``.  The module
validates pairs on a sample grid, constructs them from a normal field
or from an arc-length curve (geodesic case), classifies their
periodicity (closed, half-turn/Moebius, or screw-periodic), and checks
the antipodal antisymmetry ``H(-x) = -H(x)`` that non-orientable
quotients require of the curvature law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import expr as ex
from .expr import VecExpr3

__all__ = [
    "Periodicity", "BjorlingData", "PrescribedH", "ValidationReport",
    "DataError", "validate_data", "verify_periodicity", "from_normal_field",
    "geodesic_data", "classify_periodicity", "check_antipodal_antisymmetry",
    "make_bended_helicoid_data", "sphere_samples",
]

DEFAULT_TOL = 1e-9
DEFAULT_RMIN = 1e-6


class DataError(ValueError):
    """Ill-formed curve/field data."""


@dataclass(frozen=True)
class Periodicity:
    kind: str  # none | periodic | moebius | helicoidal
    period: Optional[float] = None
    pitch: Optional[tuple] = None  # translation vector for helicoidal data

    def __post_init__(self):
        if self.kind not in ("none", "periodic", "moebius", "helicoidal"):
            raise DataError(f"unknown periodicity kind {self.kind!r}")
        if self.kind != "none" and not (self.period and self.period > 0):
            raise DataError("periodic declarations need a positive period")


@dataclass(frozen=True)
class BjorlingData:
    """Curve ``beta`` and tangent-plane field ``B``, both expressions in s."""

    beta: VecExpr3
    field_b: VecExpr3
    s0: float
    s1: float
    periodicity: Periodicity = field(default_factory=lambda: Periodicity("none"))

    def __post_init__(self):
        if not self.s1 > self.s0:
            raise DataError("empty parameter interval")

    def sample_points(self, n: int) -> np.ndarray:
        return np.linspace(self.s0, self.s1, n)

    def beta_prime(self) -> VecExpr3:
        return self.beta.derivative("s")


@dataclass(frozen=True)
class PrescribedH:
    """Curvature law h(x, y, z), evaluated on unit normals only."""

    h: ex.Expr
    antisym: bool

    @classmethod
    def from_text(cls, text: str, n_samples: int = 512, tol: float = DEFAULT_TOL) -> "PrescribedH":
        e = ex.parse_expr(text, ("x", "y", "z"))
        flag = _antisym(e, n_samples, tol)
        return cls(e, flag)

    def is_constant(self) -> bool:
        return not ex.free_vars(self.h)

    def constant_value(self) -> float:
        return float(ex.eval_real(self.h, {}))

    def eval(self, normals: np.ndarray) -> np.ndarray:
        normals = np.asarray(normals, dtype=float)
        env = {"x": normals[..., 0], "y": normals[..., 1], "z": normals[..., 2]}
        out = ex.eval_real(self.h, env)
        return np.broadcast_to(np.asarray(out, dtype=float), normals.shape[:-1])


@dataclass(frozen=True)
class ValidationReport:
    r_len: float
    r_orth: float
    r_reg: float  # min |beta'| over the sample grid
    s_len: float  # argmax locations
    s_orth: float
    tol: float
    r_min: float
    passed: bool

    def lines(self):
        yield f"check=data_length max={self.r_len!r} at=({self.s_len!r},0.0) pass={str(self.r_len <= self.tol).lower()}"
        yield f"check=data_orthogonality max={self.r_orth!r} at=({self.s_orth!r},0.0) pass={str(self.r_orth <= self.tol).lower()}"
        yield f"check=data_regularity max={self.r_reg!r} at=(0.0,0.0) pass={str(self.r_reg >= self.r_min).lower()}"


def validate_data(data: BjorlingData, n_samples: int = 1024, tol: float = DEFAULT_TOL,
                  r_min: float = DEFAULT_RMIN) -> ValidationReport:
    """Check the defining identities on an endpoint-inclusive uniform grid."""
    if n_samples < 2:
        raise ValueError("need at least two samples")
    s = data.sample_points(n_samples)
    bp = data.beta_prime().eval("s", s)
    bb = data.field_b.eval("s", s)
    len_bp = np.linalg.norm(bp, axis=-1)
    len_bb = np.linalg.norm(bb, axis=-1)
    r_len = np.abs(len_bp - len_bb)
    r_orth = np.abs((bp * bb).sum(axis=-1))
    i_len = int(np.argmax(r_len))
    i_orth = int(np.argmax(r_orth))
    passed = bool(r_len[i_len] <= tol and r_orth[i_orth] <= tol and len_bp.min() >= r_min)
    return ValidationReport(
        r_len=float(r_len[i_len]), r_orth=float(r_orth[i_orth]),
        r_reg=float(len_bp.min()), s_len=float(s[i_len]), s_orth=float(s[i_orth]),
        tol=tol, r_min=r_min, passed=passed,
    )


def from_normal_field(beta: VecExpr3, normal: VecExpr3, s0: float, s1: float,
                      periodicity: Periodicity | None = None,
                      n_samples: int = 256, tol: float = 1e-8) -> BjorlingData:
    """Data pair with ``B = n ^ beta'`` for a unit normal field n along beta.

    With this orientation the solved strip's unit normal along t=0 equals +n,
    which is asserted numerically on the sample grid.
    """
    s = np.linspace(s0, s1, n_samples)
    nv = normal.eval("s", s)
    bp = beta.derivative("s").eval("s", s)
    unit_err = np.abs(np.linalg.norm(nv, axis=-1) - 1.0).max()
    if unit_err > tol:
        raise DataError(f"normal field is not unit (max deviation {unit_err:.3e})")
    orth_err = np.abs((nv * bp).sum(axis=-1)).max()
    if orth_err > tol:
        raise DataError(f"normal field is not orthogonal to the curve (max {orth_err:.3e})")
    data = BjorlingData(beta, normal.cross(beta.derivative("s")), s0, s1,
                        periodicity or Periodicity("none"))
    # orientation guard: beta' ^ B = |beta'|^2 n, so the axis normal is +n
    bb = data.field_b.eval("s", s)
    axis_normal = np.cross(bp, bb)
    axis_normal /= np.linalg.norm(axis_normal, axis=-1, keepdims=True)
    assert np.abs(axis_normal - nv).max() < 1e-6, "orientation convention violated"
    return data


def geodesic_data(beta: VecExpr3, s0: float, s1: float,
                  periodicity: Periodicity | None = None,
                  n_samples: int = 256, tol: float = 1e-8,
                  curvature_floor: float = 1e-8) -> BjorlingData:
    """Data whose solved surface contains beta as a geodesic.

    Requires beta in arc-length parametrization with nowhere-vanishing
    curvature on [s0, s1]; the surface normal along the curve is then
    ``beta'' / |beta''|``.
    """
    s = np.linspace(s0, s1, n_samples)
    bp = beta.derivative("s").eval("s", s)
    speed_err = np.abs(np.linalg.norm(bp, axis=-1) - 1.0).max()
    if speed_err > tol:
        raise DataError(f"curve is not arc-length parametrized (max | |beta'|-1 | = {speed_err:.3e})")
    bpp_expr = beta.derivative("s").derivative("s")
    bpp = bpp_expr.eval("s", s)
    kappa_min = np.linalg.norm(bpp, axis=-1).min()
    if kappa_min < curvature_floor:
        raise DataError(f"curvature vanishes on the interval (min |beta''| = {kappa_min:.3e})")
    norm_expr = ex.Call("sqrt", bpp_expr.dot(bpp_expr))
    normal = VecExpr3(*(ex._div(c, norm_expr) for c in bpp_expr.components()))
    return from_normal_field(beta, normal, s0, s1, periodicity, n_samples, tol)


@dataclass(frozen=True)
class PeriodicityResult:
    kind: str
    period: float
    pitch: Optional[tuple]
    residual: float

    def as_periodicity(self) -> Periodicity:
        return Periodicity(self.kind, None if self.kind == "none" else self.period, self.pitch)


def classify_periodicity(data: BjorlingData, period: float, tol: float = DEFAULT_TOL,
                         n_samples: int = 512) -> PeriodicityResult:
    """Compare data at s and s+T on a sample grid.

    Returns moebius if beta is T-periodic while B flips sign, periodic if
    both repeat, helicoidal (with the constant translation vector) if beta
    shifts by a constant while B repeats, and none otherwise.  The data
    expressions are analytic on the whole line, so shifted samples are
    evaluated directly even when s+T leaves the declared interval.
    """
    if period <= 0:
        raise DataError("period must be positive")
    s = np.linspace(data.s0, data.s0 + period, n_samples, endpoint=False)
    b0 = data.beta.eval("s", s)
    b1 = data.beta.eval("s", s + period)
    f0 = data.field_b.eval("s", s)
    f1 = data.field_b.eval("s", s + period)

    beta_res = np.abs(b1 - b0).max()
    if beta_res <= tol:
        anti = np.abs(f1 + f0).max()
        if anti <= tol:
            return PeriodicityResult("moebius", period, None, float(anti))
        peri = np.abs(f1 - f0).max()
        if peri <= tol:
            return PeriodicityResult("periodic", period, None, float(peri))
        return PeriodicityResult("none", period, None, float(min(anti, peri)))

    shift = b1 - b0
    v = shift.mean(axis=0)
    helico = max(np.abs(shift - v).max(), np.abs(f1 - f0).max())
    if helico <= tol:
        return PeriodicityResult("helicoidal", period, tuple(float(c) for c in v), float(helico))
    return PeriodicityResult("none", period, None, float(beta_res))


def verify_periodicity(data: BjorlingData, tol: float = DEFAULT_TOL) -> PeriodicityResult:
    """Check the declared periodicity; raises DataError on mismatch."""
    decl = data.periodicity
    if decl.kind == "none":
        return PeriodicityResult("none", 0.0, None, 0.0)
    result = classify_periodicity(data, decl.period, tol)
    if result.kind != decl.kind:
        raise DataError(
            f"declared periodicity {decl.kind!r} (T={decl.period}) but data classifies as {result.kind!r}")
    return result


def sphere_samples(n: int) -> np.ndarray:
    """Deterministic low-discrepancy sample of the unit sphere (Fibonacci lattice)."""
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    phi = i * (math.pi * (3.0 - math.sqrt(5.0)))
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


def _antisym(h: ex.Expr, n_samples: int, tol: float) -> bool:
    p = sphere_samples(max(1, n_samples))
    env_p = {"x": p[:, 0], "y": p[:, 1], "z": p[:, 2]}
    env_m = {"x": -p[:, 0], "y": -p[:, 1], "z": -p[:, 2]}
    hp = np.broadcast_to(np.asarray(ex.eval_real(h, env_p), dtype=float), (len(p),))
    hm = np.broadcast_to(np.asarray(ex.eval_real(h, env_m), dtype=float), (len(p),))
    return bool(np.abs(hp + hm).max() <= tol)


def check_antipodal_antisymmetry(h: PrescribedH | ex.Expr, n_samples: int = 512,
                                 tol: float = DEFAULT_TOL) -> bool:
    """True iff max |h(-p) + h(p)| <= tol over a deterministic sphere sample."""
    e = h.h if isinstance(h, PrescribedH) else h
    return _antisym(e, n_samples, tol)


def make_bended_helicoid_data(radius: float, k: int, allow_even: bool = False) -> BjorlingData:
    """Circle of the given radius with a field that half-rotates k times per turn.

    Odd k closes up only after two turns (B(s+2pi) = -B(s)), giving
    half-turn (Moebius) data solved on the double cover [0, 4pi]; even k
    yields plainly periodic data, which is refused unless allow_even is set.
    """
    if radius <= 0:
        raise DataError("radius must be positive")
    if k % 2 == 0 and not allow_even:
        raise DataError("even twist count closes up; the quotient is an annulus, not a Moebius band")
    r = repr(float(radius))
    beta = ex.parse_vec3(f"{r}*cos(s)", f"{r}*sin(s)", "0", ("s",))
    field = ex.parse_vec3(
        f"{r}*cos({k}*s/2)*cos(s)",
        f"{r}*cos({k}*s/2)*sin(s)",
        f"{r}*sin({k}*s/2)",
        ("s",),
    )
    if k % 2 == 1:
        per = Periodicity("moebius", 2.0 * math.pi)
        return BjorlingData(beta, field, 0.0, 4.0 * math.pi, per)
    per = Periodicity("periodic", 2.0 * math.pi)
    return BjorlingData(beta, field, 0.0, 2.0 * math.pi, per)
