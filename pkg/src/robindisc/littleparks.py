"""Little-Parks critical-temperature curves from the linearised criterion.

The normal state loses stability when ``lambda1(b, gamma)`` drops below
``(R/xi0)^2 mu(T)`` with ``mu(T) = 1 - T/Tc0``, giving

    Tc(b) = (1 - (xi0/R)^2 lambda1(b, gamma)) Tc0.

Inputs are dimensionless: ``xi0/R``, ``gamma = R/l`` and ``Tc0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .asymptotics import lambda1_prediction
from .diamag import DEFAULT_DISC_OPTIONS, DiscOptions, FiberCache, b_grid, lambda1_disc
from .errors import MissingKey, MissingPhysicalBlock, ParseError, UnknownKey

__all__ = [
    "PhysicalBlock",
    "PhysicalConfig",
    "TcRow",
    "parse_config",
    "load_config",
    "kappa_of",
    "mu_of_T",
    "tc_from_lambda",
    "stability_margin",
    "critical_temperature",
    "little_parks_curve",
]

REQUIRED_KEYS = ("xi0_over_R", "gamma", "Tc0", "b_min", "b_max")
PHYSICAL_KEYS = ("hbar", "e_charge", "c_light", "mass", "beta_gl")
DEFAULT_STEPS = 200


@dataclass(frozen=True)
class PhysicalBlock:
    hbar: float
    e_charge: float
    c_light: float
    mass: float
    beta_gl: float

    def __post_init__(self):
        for name in PHYSICAL_KEYS:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class PhysicalConfig:
    xi0_over_R: float
    gamma: float
    Tc0: float
    b_min: float
    b_max: float
    steps: int = DEFAULT_STEPS
    physical: Optional[PhysicalBlock] = None

    def __post_init__(self):
        if not self.gamma < 0:
            raise ValueError(f"gamma must be negative, got {self.gamma}")
        if not self.xi0_over_R > 0:
            raise ValueError(f"xi0_over_R must be positive, got {self.xi0_over_R}")
        if not self.Tc0 > 0:
            raise ValueError(f"Tc0 must be positive, got {self.Tc0}")
        if not 0 <= self.b_min < self.b_max:
            raise ValueError(f"need 0 <= b_min < b_max, got {self.b_min}, {self.b_max}")
        if self.steps < 2:
            raise ValueError(f"steps must be >= 2, got {self.steps}")


def parse_config(text: str) -> PhysicalConfig:
    """Parse the flat ``key=value`` format (``#`` starts a comment)."""
    values = {}
    where = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {raw.strip()!r}", lineno)
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in REQUIRED_KEYS + PHYSICAL_KEYS + ("steps",):
            raise UnknownKey(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ParseError(f"duplicate key {key!r}", lineno)
        try:
            values[key] = int(val) if key == "steps" else float(val)
        except ValueError:
            raise ParseError(f"bad value for {key}: {val!r}", lineno) from None
        where[key] = lineno

    for key, check, msg in (
        ("gamma", lambda v: v < 0, "gamma must be negative"),
        ("xi0_over_R", lambda v: v > 0, "xi0_over_R must be positive"),
        ("Tc0", lambda v: v > 0, "Tc0 must be positive"),
        ("steps", lambda v: v >= 2, "steps must be >= 2"),
    ) + tuple((k, lambda v: v > 0, f"{k} must be positive") for k in PHYSICAL_KEYS):
        if key in values and not check(values[key]):
            raise ParseError(f"{msg}, got {values[key]}", where[key])

    missing = [k for k in REQUIRED_KEYS if k not in values]
    if missing:
        raise MissingKey(f"missing required key(s): {', '.join(missing)}")

    present = [k for k in PHYSICAL_KEYS if k in values]
    physical = None
    if present:
        absent = [k for k in PHYSICAL_KEYS if k not in values]
        if absent:
            raise MissingKey(f"incomplete physical block, missing: {', '.join(absent)}")
        physical = PhysicalBlock(*(values[k] for k in PHYSICAL_KEYS))

    try:
        return PhysicalConfig(
            values["xi0_over_R"], values["gamma"], values["Tc0"],
            values["b_min"], values["b_max"], values.get("steps", DEFAULT_STEPS), physical,
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def load_config(path) -> PhysicalConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def kappa_of(cfg: PhysicalConfig) -> float:
    """Ginzburg-Landau parameter ``sqrt(m^2 beta c^2 / (8 pi e^2 hbar))``."""
    p = cfg.physical
    if p is None:
        raise MissingPhysicalBlock("kappa needs hbar, e_charge, c_light, mass and beta_gl")
    return math.sqrt(p.mass**2 * p.beta_gl * p.c_light**2 / (8.0 * math.pi * p.e_charge**2 * p.hbar))


def mu_of_T(T: float, Tc0: float) -> float:
    return 1.0 - T / Tc0


def tc_from_lambda(lambda1: float, cfg: PhysicalConfig) -> float:
    return (1.0 - cfg.xi0_over_R**2 * lambda1) * cfg.Tc0


def stability_margin(lambda1: float, T: float, cfg: PhysicalConfig) -> float:
    """``lambda1 - (R/xi0)^2 mu(T)``: positive means the normal state is locally stable."""
    return lambda1 - mu_of_T(T, cfg.Tc0) / cfg.xi0_over_R**2


@dataclass(frozen=True)
class TcRow:
    b: float
    lambda1: float
    Tc_exact: float
    Tc_asym: float


def critical_temperature(b: float, cfg: PhysicalConfig, opts: DiscOptions = DEFAULT_DISC_OPTIONS, cache=None) -> TcRow:
    lam = lambda1_disc(b, cfg.gamma, opts, cache).lam
    asym = lambda1_prediction(b, cfg.gamma).value
    return TcRow(float(b), lam, tc_from_lambda(lam, cfg), tc_from_lambda(asym, cfg))


def little_parks_curve(cfg: PhysicalConfig, opts: DiscOptions = DEFAULT_DISC_OPTIONS) -> list:
    cache = FiberCache(opts.solver)
    return [critical_temperature(float(b), cfg, opts, cache)
            for b in b_grid(cfg.b_min, cfg.b_max, cfg.steps)]
