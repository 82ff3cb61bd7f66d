"""Flat key = value run configurations.

One run per file; ``#`` starts a comment; expression values are quoted;
numeric values are parsed with the expression language (so ``2*pi`` is a
valid number).  Unknown keys are rejected to keep configs diff-friendly
and typo-proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

from . import expr as ex
from .data import BjorlingData, DataError, Periodicity, PrescribedH

__all__ = ["RunConfig", "ConfigError", "parse_config", "parse_config_file"]


class ConfigError(ValueError):
    pass


KNOWN_CHECKS = ("conformality", "mean_curvature", "symmetry",
                "mobius_involution", "normal_antipodality", "schwarz")


@dataclass
class RunConfig:
    name: str = "run"
    beta: tuple = ("0", "0", "0")
    field_b: tuple = ("0", "0", "0")
    h: str = "0"
    s0: float = 0.0
    s1: float = 2.0 * math.pi
    periodicity: str = "none"
    period: Optional[float] = None
    solver: str = "ck"
    order: int = 16
    n: int = 256
    delta: Optional[float] = None  # None = auto from the radius estimate
    force_delta: bool = False
    m_t: int = 12
    fd_dt: float = 1e-3
    fd_steps: int = 100
    fd_cutoff: float = 2.0 / 3.0
    out: str = ""
    checks: tuple = ("conformality", "mean_curvature")
    thresholds: dict = dc_field(default_factory=dict)
    symmetry_phi: float = 0.0
    symmetry_v: tuple = (0.0, 0.0, 0.0)
    symmetry_sigma_points: int = 0
    glue: str = "auto"  # auto | none | moebius
    oracle: str = "auto"  # auto | schwarz | translator
    oracle_tau: Optional[float] = None

    # -- derived builders ------------------------------------------------

    def grid_periodic(self) -> bool:
        # half-turn data is solved on its periodic double cover; screw-periodic
        # data has periodic rows above the curve itself (see the solver notes)
        return self.periodicity in ("periodic", "moebius", "helicoidal")

    def build_data(self) -> BjorlingData:
        try:
            beta = ex.parse_vec3(*self.beta, variables=("s",))
            fb = ex.parse_vec3(*self.field_b, variables=("s",))
        except ex.ParseError as err:
            raise ConfigError(f"bad expression: {err}") from err
        per = Periodicity(self.periodicity, self.period) if self.periodicity != "none" \
            else Periodicity("none")
        return BjorlingData(beta, fb, self.s0, self.s1, per)

    def build_h(self) -> PrescribedH:
        try:
            return PrescribedH.from_text(self.h)
        except ex.ParseError as err:
            raise ConfigError(f"bad curvature expression: {err}") from err

    def threshold(self, check: str, default: float) -> float:
        return self.thresholds.get(check, default)


def _number(raw: str, key: str) -> float:
    try:
        return float(ex.eval_real(ex.parse_expr(raw, ()), {}))
    except (ex.ParseError, ex.EvalError) as err:
        raise ConfigError(f"bad numeric value for {key!r}: {raw!r} ({err})") from err


def _boolean(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ConfigError(f"bad boolean for {key!r}: {raw!r}")


def _strip_comment(line: str) -> str:
    out = []
    in_quote = False
    for ch in line:
        if ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            break
        out.append(ch)
    return "".join(out)


def _split_items(raw: str):
    return [item.strip() for item in raw.split(",") if item.strip()]


def parse_config(text: str) -> RunConfig:
    cfg = RunConfig()
    exprs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if value.startswith('"') and value.endswith('"') and len(value) >= 2:
            value = value[1:-1]
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")

        if key in ("beta.x", "beta.y", "beta.z", "B.x", "B.y", "B.z", "H"):
            exprs[key] = value
        elif key == "name":
            cfg.name = value
        elif key == "s0":
            cfg.s0 = _number(value, key)
        elif key == "s1":
            cfg.s1 = _number(value, key)
        elif key == "periodicity":
            if value not in ("none", "periodic", "moebius", "helicoidal"):
                raise ConfigError(f"line {lineno}: unknown periodicity {value!r}")
            cfg.periodicity = value
        elif key == "T":
            cfg.period = _number(value, key)
        elif key == "solver":
            if value not in ("ck", "fd"):
                raise ConfigError(f"line {lineno}: solver must be ck or fd")
            cfg.solver = value
        elif key == "K":
            cfg.order = int(_number(value, key))
        elif key == "N":
            cfg.n = int(_number(value, key))
        elif key == "delta":
            cfg.delta = None if value == "auto" else _number(value, key)
        elif key == "force_delta":
            cfg.force_delta = _boolean(value, key)
        elif key == "M_t":
            cfg.m_t = int(_number(value, key))
        elif key == "fd.dt":
            cfg.fd_dt = _number(value, key)
        elif key == "fd.steps":
            cfg.fd_steps = int(_number(value, key))
        elif key == "fd.cutoff":
            cfg.fd_cutoff = _number(value, key)
        elif key == "out":
            cfg.out = value
        elif key == "checks":
            items = tuple(_split_items(value))
            for item in items:
                if item not in KNOWN_CHECKS:
                    raise ConfigError(f"line {lineno}: unknown check {item!r}")
            cfg.checks = items
        elif key.startswith("check.") and key.endswith(".threshold"):
            name = key[len("check."):-len(".threshold")]
            if name not in KNOWN_CHECKS:
                raise ConfigError(f"line {lineno}: unknown check {name!r}")
            cfg.thresholds[name] = _number(value, key)
        elif key == "check.symmetry.phi":
            cfg.symmetry_phi = _number(value, key)
        elif key == "check.symmetry.v":
            items = _split_items(value)
            if len(items) != 3:
                raise ConfigError(f"line {lineno}: check.symmetry.v needs three components")
            cfg.symmetry_v = tuple(_number(c, key) for c in items)
        elif key == "check.symmetry.sigma_points":
            cfg.symmetry_sigma_points = int(_number(value, key))
        elif key == "glue":
            if value not in ("auto", "none", "moebius"):
                raise ConfigError(f"line {lineno}: glue must be auto, none or moebius")
            cfg.glue = value
        elif key == "oracle":
            if value not in ("auto", "schwarz", "translator"):
                raise ConfigError(f"line {lineno}: oracle must be auto, schwarz or translator")
            cfg.oracle = value
        elif key == "oracle.tau":
            cfg.oracle_tau = _number(value, key)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")

    cfg.beta = (exprs.get("beta.x", "0"), exprs.get("beta.y", "0"), exprs.get("beta.z", "0"))
    cfg.field_b = (exprs.get("B.x", "0"), exprs.get("B.y", "0"), exprs.get("B.z", "0"))
    cfg.h = exprs.get("H", "0")

    if cfg.periodicity != "none" and not cfg.period:
        raise ConfigError("periodic declarations need T")
    if not cfg.s1 > cfg.s0:
        raise ConfigError("need s1 > s0")
    # surface the parse errors of the expressions themselves now
    try:
        cfg.build_data()
        cfg.build_h()
    except (ConfigError, DataError) as err:
        raise ConfigError(str(err)) from err
    return cfg


def parse_config_file(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
