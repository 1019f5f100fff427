"""Binomial kernels and operating-characteristic (OC) functions.

All functions here are pure. The binomial terms are generated in log space
from ``log f_0 = n log(1 - p)`` using the ratio
``f_{k+1} / f_k = (n - k) / (k + 1) * p / (1 - p)``, so no binomial
coefficient is ever formed and sample sizes in the tens of thousands stay
accurate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "PlanParams",
    "binom_pmf",
    "binom_cdf",
    "binom_cdf_prefix",
    "oc_single",
    "oc_mchsp",
    "oc_mchgsp",
]

CLAMP_EPS = 1e-12


class DomainError(ValueError):
    """An argument falls outside the domain of an OC or kernel function."""


@dataclass(frozen=True)
class PlanParams:
    """A chained group sampling plan.

    ``r`` items per group, ``g`` groups, acceptance number ``c`` and chain
    length ``i`` (number of preceding lots consulted). The per-lot sample
    size is ``n = r * g``.
    """

    r: int
    g: int
    c: int
    i: int = 1

    def __post_init__(self):
        for name in ("r", "g", "c", "i"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise DomainError(f"{name} must be an integer, got {value!r}")
        if self.r < 1:
            raise DomainError(f"r must be >= 1, got {self.r}")
        if self.g < 1:
            raise DomainError(f"g must be >= 1, got {self.g}")
        if self.i < 1:
            raise DomainError(f"i must be >= 1, got {self.i}")
        if not 0 <= self.c <= self.r * self.g:
            raise DomainError(f"c must lie in [0, r*g={self.r * self.g}], got {self.c}")

    @property
    def n(self) -> int:
        return self.r * self.g

    def to_dict(self) -> dict:
        return {"r": self.r, "g": self.g, "c": self.c, "i": self.i}

    @classmethod
    def from_dict(cls, data: dict) -> "PlanParams":
        return cls(r=int(data["r"]), g=int(data["g"]), c=int(data["c"]), i=int(data.get("i", 1)))


def check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:  # also rejects NaN
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def _check_count(n: int, k: int) -> None:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 <= k <= n:
        raise DomainError(f"count must lie in [0, n={n}], got {k}")


def _clamp(x: float) -> float:
    if 0.0 <= x <= 1.0:
        return x
    if -CLAMP_EPS <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + CLAMP_EPS:
        return 1.0
    raise ArithmeticError(f"probability computation left [0, 1]: {x!r}")


def _log_terms(n: int, upto: int, p: float) -> list[float]:
    """log f_k for k = 0..upto, with 0 < p < 1.

    The running log C(n, k) is accumulated with Neumaier compensation; a
    plain running sum loses ~1e-8 relative accuracy by k ~ 10^4.
    """
    log_q = math.log1p(-p)
    logit = math.log(p) - log_q
    base = n * log_q
    out = [base]
    s = 0.0
    comp = 0.0
    for k in range(upto):
        x = math.log((n - k) / (k + 1))
        t = s + x
        if abs(s) >= abs(x):
            comp += (s - t) + x
        else:
            comp += (x - t) + s
        s = t
        out.append(base + (k + 1) * logit + (s + comp))
    return out


def binom_pmf(n: int, k: int, p: float) -> float:
    """Binomial probability mass ``P(X = k)`` for ``X ~ Bin(n, p)``."""
    _check_count(n, k)
    p = check_probability(p)
    if p == 0.0:
        return 1.0 if k == 0 else 0.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    # Walk from whichever end is closer so the recurrence stays short.
    if k <= n - k:
        return _clamp(math.exp(_log_terms(n, k, p)[k]))
    return _clamp(math.exp(_log_terms(n, n - k, 1.0 - p)[n - k]))


def binom_cdf_prefix(n: int, c_max: int, p: float) -> list[float]:
    """``[P(X <= c) for c in 0..c_max]`` from a single pass over the terms.

    Entry ``c`` is bit-identical to ``binom_cdf(n, c, p)``.
    """
    _check_count(n, c_max)
    p = check_probability(p)
    if p == 0.0:
        return [1.0] * (c_max + 1)
    if p == 1.0:
        return [1.0 if c >= n else 0.0 for c in range(c_max + 1)]
    mean = n * p
    # Above the mean the CDF is near 1; summing the small upper tail and
    # subtracting keeps it monotone in p down to the last ulp.
    upto = n if c_max >= mean else c_max
    terms = [math.exp(t) for t in _log_terms(n, upto, p)]
    out = []
    for c in range(c_max + 1):
        if c >= n:
            out.append(1.0)
        elif c >= mean:
            out.append(_clamp(1.0 - math.fsum(terms[c + 1 :])))
        else:
            out.append(_clamp(math.fsum(terms[: c + 1])))
    return out


def binom_cdf(n: int, c: int, p: float) -> float:
    """``P(X <= c)`` for ``X ~ Bin(n, p)``: the lot-conformance probability."""
    return binom_cdf_prefix(n, c, p)[c]


def oc_single(n: int, c: int, p: float) -> float:
    """Acceptance probability of a single-stage attribute plan (n, c).

    With ``n = r * g`` this is the group plan; with ``r = 1`` it is the
    ordinary single sampling plan.
    """
    return binom_cdf(n, c, p)


def oc_mchsp(P: float, i: int) -> float:
    """Modified chain OC given the per-lot conformance probability ``P``.

    The lot is accepted when it conforms and at most one of the preceding
    ``i`` lots failed to conform: ``P * (P^i + i P^(i-1) (1 - P))``.
    """
    P = check_probability(P, "P")
    if isinstance(i, bool) or not isinstance(i, int) or i < 1:
        raise DomainError(f"chain length i must be an integer >= 1, got {i!r}")
    if i == 1:
        # bracket is P + (1 - P) == 1; skip it to keep i=1 bit-identical to oc_single
        return P
    bracket = P ** (i - 1) * (P + i * (1.0 - P))
    return _clamp(P * bracket)


def oc_mchgsp(plan: PlanParams, p: float) -> float:
    """Long-run per-lot acceptance probability of the chained group plan."""
    return oc_mchsp(oc_single(plan.n, plan.c, p), plan.i)
