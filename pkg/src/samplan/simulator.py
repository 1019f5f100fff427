"""Monte Carlo check of the chained lot-acceptance rule.

A stream of lots of constant quality ``p`` is inspected one after another.
Lot ``t`` conforms when its defective count ``d_t <= c``; it is accepted when
it conforms and at most one of the ``i`` lots immediately before it failed to
conform. Rejected lots still count in later windows, because the rule looks
at conformance and not at earlier decisions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .oc import DomainError, PlanParams, check_probability, oc_mchgsp

Z_LIMIT = 4.0


@dataclass(frozen=True)
class SimConfig:
    plan: PlanParams
    p: float
    lots: int
    seed: int
    burn_in: int | None = None  # None means plan.i

    def __post_init__(self):
        check_probability(self.p)
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.effective_burn_in < self.plan.i:
            raise DomainError(f"burn_in must be >= i={self.plan.i}, got {self.burn_in}")
        if self.lots <= self.effective_burn_in:
            raise DomainError(f"lots must exceed burn_in={self.effective_burn_in}, got {self.lots}")

    @property
    def effective_burn_in(self) -> int:
        return self.plan.i if self.burn_in is None else self.burn_in

    def to_dict(self) -> dict:
        return {
            "plan": self.plan.to_dict(),
            "p": self.p,
            "lots": self.lots,
            "seed": self.seed,
            "burn_in": self.effective_burn_in,
        }


@dataclass(frozen=True)
class SimResult:
    lots_counted: int
    accepted: int
    rate: float
    std_err: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "lots_counted": self.lots_counted,
            "accepted": self.accepted,
            "rate": self.rate,
            "std_err": self.std_err,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SimResult":
        return cls(
            lots_counted=int(data["lots_counted"]),
            accepted=int(data["accepted"]),
            rate=float(data["rate"]),
            std_err=float(data["std_err"]),
            seed=int(data["seed"]),
        )


@dataclass(frozen=True)
class Comparison:
    analytic: float
    empirical: float
    z: float | None
    flagged: bool
    exact_disagreement: bool
    result: SimResult

    def to_dict(self) -> dict:
        return {
            "analytic": self.analytic,
            "empirical": self.empirical,
            "z": self.z,
            "flagged": self.flagged,
            "exact_disagreement": self.exact_disagreement,
            "simulation": self.result.to_dict(),
        }


def acceptance_flags(conforms: np.ndarray, i: int) -> np.ndarray:
    """Per-lot acceptance given the boolean conformance history.

    Lots earlier than ``i`` see a truncated window; callers discard them.
    """
    failures = np.concatenate(([0], np.cumsum(~conforms, dtype=np.int64)))
    t = np.arange(conforms.size)
    start = np.maximum(t - i, 0)
    recent = failures[t] - failures[start]
    return conforms & (recent <= 1)


def simulate_chain(cfg: SimConfig) -> SimResult:
    plan = cfg.plan
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    d = rng.binomial(plan.n, cfg.p, size=cfg.lots)
    accepted_flags = acceptance_flags(d <= plan.c, plan.i)
    counted = accepted_flags[cfg.effective_burn_in :]
    lots_counted = int(counted.size)
    accepted = int(np.count_nonzero(counted))
    rate = accepted / lots_counted
    std_err = math.sqrt(rate * (1.0 - rate) / lots_counted)
    return SimResult(lots_counted, accepted, rate, std_err, cfg.seed)


def compare_to_analytic(cfg: SimConfig) -> Comparison:
    res = simulate_chain(cfg)
    analytic = oc_mchgsp(cfg.plan, cfg.p)
    if res.std_err == 0.0:
        agree = res.rate == analytic
        return Comparison(analytic, res.rate, 0.0 if agree else None, not agree, not agree, res)
    z = (res.rate - analytic) / res.std_err
    return Comparison(analytic, res.rate, z, abs(z) > Z_LIMIT, False, res)
