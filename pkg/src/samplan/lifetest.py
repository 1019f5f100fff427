"""Truncated life test: turn a lifetime distribution and a test duration into
the per-item probability of failing before the test ends."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .oc import DomainError

FAMILIES = ("exponential", "weibull")


@dataclass(frozen=True)
class DistSpec:
    family: str
    scale: float
    shape: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown distribution family {self.family!r}; expected one of {FAMILIES}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError(f"scale must be a positive finite number, got {self.scale!r}")
        if not (self.shape > 0 and math.isfinite(self.shape)):
            raise DomainError(f"shape must be a positive finite number, got {self.shape!r}")
        if self.family == "exponential" and self.shape != 1.0:
            raise DomainError("exponential distribution takes no shape parameter")

    @classmethod
    def parse(cls, text: str) -> "DistSpec":
        """Parse ``exponential:scale=10`` or ``weibull:shape=2,scale=10``."""
        family, sep, rest = text.strip().partition(":")
        family = family.strip().lower()
        params = {}
        if sep and rest.strip():
            for item in rest.split(","):
                key, eq, value = item.partition("=")
                key = key.strip().lower()
                if not eq or key not in ("scale", "shape"):
                    raise DomainError(f"bad distribution parameter {item.strip()!r}")
                if key in params:
                    raise DomainError(f"duplicate distribution parameter {key!r}")
                try:
                    params[key] = float(value)
                except ValueError:
                    raise DomainError(f"{key} must be a number, got {value.strip()!r}") from None
        if "scale" not in params:
            raise DomainError("distribution needs a scale parameter")
        if family == "weibull" and "shape" not in params:
            raise DomainError("weibull distribution needs a shape parameter")
        return cls(family=family, **params)

    def to_dict(self) -> dict:
        out = {"family": self.family, "scale": self.scale}
        if self.family == "weibull":
            out["shape"] = self.shape
        return out


def fraction_nonconforming(dist: DistSpec, t: float) -> float:
    """p = F(t): probability that an item fails before truncation time ``t``."""
    if not isinstance(dist, DistSpec):
        raise DomainError(f"expected a DistSpec, got {type(dist).__name__}")
    t = float(t)
    if not t >= 0:
        raise DomainError(f"truncation time must be >= 0, got {t!r}")
    z = t / dist.scale
    if dist.family == "weibull":
        z = z**dist.shape
    return -math.expm1(-z)
