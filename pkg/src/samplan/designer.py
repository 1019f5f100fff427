"""Two-point (AQL/LQL) design of minimum-sample-size sampling plans.

The objective ``n = g * r`` depends on ``g`` alone once ``r`` is fixed, so
the search walks ``g`` upward and stops at the first group count that admits
any feasible ``(c, i)``. Within that ``g`` the tie is broken
lexicographically, ``(c, i)`` by default or ``(i, c)`` on request.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum

from .oc import DomainError, PlanParams, binom_cdf_prefix, oc_mchgsp, oc_mchsp, oc_single


class Kind(str, Enum):
    MCHGSP = "mchgsp"
    GASIP = "gasip"
    SASIP = "sasip"


TIE_BREAKS = ("ci", "ic")


@dataclass(frozen=True)
class SearchBounds:
    g_max: int = 1000
    c_max: int = 10
    i_max: int = 10

    def __post_init__(self):
        if self.g_max < 1:
            raise DomainError(f"g_max must be >= 1, got {self.g_max}")
        if self.c_max < 0:
            raise DomainError(f"c_max must be >= 0, got {self.c_max}")
        if self.i_max < 1:
            raise DomainError(f"i_max must be >= 1, got {self.i_max}")


@dataclass(frozen=True)
class DesignRequest:
    r: int
    p0: float
    p1: float
    alpha: float = 0.05
    beta: float = 0.10
    bounds: SearchBounds = field(default_factory=SearchBounds)

    def __post_init__(self):
        if isinstance(self.r, bool) or not isinstance(self.r, int) or self.r < 1:
            raise DomainError(f"r must be a positive integer, got {self.r!r}")
        if not 0.0 < self.p0 < 1.0:
            raise DomainError(f"aql must lie in (0, 1), got {self.p0!r}")
        if not 0.0 < self.p1 < 1.0:
            raise DomainError(f"lql must lie in (0, 1), got {self.p1!r}")
        if not self.p0 < self.p1:
            raise DomainError("lql must exceed aql")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not 0.0 < self.beta < 1.0:
            raise DomainError(f"beta must lie in (0, 1), got {self.beta!r}")


@dataclass(frozen=True)
class PlanDesign:
    params: PlanParams
    n: int
    oc_at_aql: float
    oc_at_lql: float
    kind: Kind

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "params": self.params.to_dict(),
            "n": self.n,
            "oc_at_aql": self.oc_at_aql,
            "oc_at_lql": self.oc_at_lql,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PlanDesign":
        return cls(
            params=PlanParams.from_dict(data["params"]),
            n=int(data["n"]),
            oc_at_aql=float(data["oc_at_aql"]),
            oc_at_lql=float(data["oc_at_lql"]),
            kind=Kind(data["kind"]),
        )


class InfeasibleDesignError(Exception):
    """No plan satisfies both risk constraints inside the searched bounds."""

    def __init__(self, kind: Kind, request: DesignRequest):
        self.kind = Kind(kind)
        self.request = request
        self.bounds = request.bounds
        b = request.bounds
        super().__init__(
            f"infeasible within bounds: no {self.kind.value} plan for "
            f"aql={request.p0}, lql={request.p1} with g<={b.g_max}, c<={b.c_max}"
            + (f", i<={b.i_max}" if self.kind is Kind.MCHGSP else "")
        )

    def to_dict(self) -> dict:
        return {
            "status": "infeasible",
            "kind": self.kind.value,
            "message": str(self),
            "bounds": asdict(self.bounds),
        }


def plan_oc(plan: PlanParams, p: float, kind: Kind | str) -> float:
    if Kind(kind) is Kind.MCHGSP:
        return oc_mchgsp(plan, p)
    return oc_single(plan.n, plan.c, p)


def feasible(plan: PlanParams, req: DesignRequest, kind: Kind | str = Kind.MCHGSP) -> bool:
    """True iff the plan meets the producer's and consumer's risk constraints."""
    return (
        plan_oc(plan, req.p0, kind) >= 1.0 - req.alpha
        and plan_oc(plan, req.p1, kind) <= req.beta
    )


def _finish(plan: PlanParams, req: DesignRequest, kind: Kind) -> PlanDesign:
    return PlanDesign(
        params=plan,
        n=plan.n,
        oc_at_aql=plan_oc(plan, req.p0, kind),
        oc_at_lql=plan_oc(plan, req.p1, kind),
        kind=kind,
    )


def _scan(r: int, req: DesignRequest, i_max: int, tie_break: str) -> PlanParams | None:
    if tie_break not in TIE_BREAKS:
        raise DomainError(f"tie_break must be one of {TIE_BREAKS}, got {tie_break!r}")
    lo = 1.0 - req.alpha
    b = req.bounds
    for g in range(1, b.g_max + 1):
        n = r * g
        top = min(b.c_max, n)
        # prefix entries are bit-identical to binom_cdf, hence to feasible()
        P0 = binom_cdf_prefix(n, top, req.p0)
        P1 = binom_cdf_prefix(n, top, req.p1)
        ok = [
            (c, i)
            for c in range(top + 1)
            for i in range(1, i_max + 1)
            if oc_mchsp(P0[c], i) >= lo and oc_mchsp(P1[c], i) <= req.beta
        ]
        if ok:
            if tie_break == "ci":
                c, i = min(ok)
            else:
                i, c = min((i, c) for c, i in ok)
            return PlanParams(r=r, g=g, c=c, i=i)
    return None


def design_mchgsp(req: DesignRequest, tie_break: str = "ci") -> PlanDesign:
    """Smallest-g chained group plan meeting both risk constraints."""
    plan = _scan(req.r, req, req.bounds.i_max, tie_break)
    if plan is None:
        raise InfeasibleDesignError(Kind.MCHGSP, req)
    return _finish(plan, req, Kind.MCHGSP)


def design_gasip(req: DesignRequest) -> PlanDesign:
    """Smallest-g group plan (no chaining); smallest feasible c at that g."""
    plan = _scan(req.r, req, 1, "ci")
    if plan is None:
        raise InfeasibleDesignError(Kind.GASIP, req)
    return _finish(plan, req, Kind.GASIP)


def design_sasip(req: DesignRequest) -> PlanDesign:
    """Smallest-n single sampling plan; ``req.r`` is ignored (r = 1, n = g)."""
    plan = _scan(1, req, 1, "ci")
    if plan is None:
        raise InfeasibleDesignError(Kind.SASIP, req)
    return _finish(plan, req, Kind.SASIP)


DESIGNERS = {
    Kind.MCHGSP: design_mchgsp,
    Kind.GASIP: design_gasip,
    Kind.SASIP: design_sasip,
}


def design(req: DesignRequest, kind: Kind | str = Kind.MCHGSP, tie_break: str = "ci") -> PlanDesign:
    kind = Kind(kind)
    if kind is Kind.MCHGSP:
        return design_mchgsp(req, tie_break=tie_break)
    return DESIGNERS[kind](req)
