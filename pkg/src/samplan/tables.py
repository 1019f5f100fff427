"""Regenerate the published plan tables and diff them against the recomputation.

The published numbers live in ``data/published_tables.json``; nothing in this
module hard-codes them. Disagreements are classified and reported rather than
reconciled.
"""
from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

from .designer import (
    DesignRequest,
    InfeasibleDesignError,
    Kind,
    PlanDesign,
    SearchBounds,
    design_gasip,
    design_mchgsp,
    design_sasip,
    feasible,
)
from .oc import PlanParams, oc_mchgsp

MATCH_CATEGORIES = ("exact", "oc_mismatch", "params_mismatch", "feasibility_mismatch")
DEFAULT_TOLERANCE = 1e-3
INFEASIBLE = "--"

TABLE1_CSV_COLUMNS = [
    "p0", "p1",
    "published_g", "published_c", "published_i",
    "computed_g", "computed_c", "computed_i",
    "oc_aql_published", "oc_aql_computed",
    "oc_lql_published", "oc_lql_computed",
    "match",
]
TABLE2_CSV_COLUMNS = [
    "p0", "p1",
    "mchgsp_published", "mchgsp_computed",
    "gasip_published", "gasip_computed",
    "sasip_published", "sasip_computed",
    "match",
]


def load_published() -> dict:
    text = resources.files("samplan").joinpath("data/published_tables.json").read_text("utf-8")
    return json.loads(text)


def _try(designer, req):
    try:
        return designer(req)
    except InfeasibleDesignError:
        return None


@dataclass
class TableRow:
    """One Table 1 row: the published plan, our design, and the OC deltas.

    ``oc_aql_computed``/``oc_lql_computed`` are the chained OC re-evaluated at
    the *published* (g, c, i); ``computed`` is what the designer finds.
    """

    p0: float
    p1: float
    published: dict
    computed: PlanDesign | None
    oc_aql_computed: float
    oc_lql_computed: float
    oc_diffs: tuple[float, float]
    oc_within_tolerance: bool
    match: str
    published_feasible: bool
    note: str | None = None

    def csv_row(self) -> dict:
        comp = self.computed.params if self.computed else None
        return {
            "p0": self.p0,
            "p1": self.p1,
            "published_g": self.published["g"],
            "published_c": self.published["c"],
            "published_i": self.published["i"],
            "computed_g": comp.g if comp else INFEASIBLE,
            "computed_c": comp.c if comp else INFEASIBLE,
            "computed_i": comp.i if comp else INFEASIBLE,
            "oc_aql_published": self.published["oc_aql"],
            "oc_aql_computed": self.oc_aql_computed,
            "oc_lql_published": self.published["oc_lql"],
            "oc_lql_computed": self.oc_lql_computed,
            "match": self.match,
        }

    def to_dict(self) -> dict:
        return {
            "p0": self.p0,
            "p1": self.p1,
            "published": dict(self.published),
            "computed": self.computed.to_dict() if self.computed else None,
            "oc_aql_computed": self.oc_aql_computed,
            "oc_lql_computed": self.oc_lql_computed,
            "oc_diffs": list(self.oc_diffs),
            "oc_within_tolerance": self.oc_within_tolerance,
            "published_feasible": self.published_feasible,
            "match": self.match,
            "note": self.note,
        }


@dataclass
class Table2Row:
    p0: float
    p1: float
    published: dict  # kind -> n or None
    computed: dict  # kind -> PlanDesign or None
    match: str
    note: str | None = None

    def computed_n(self, kind: str) -> int | None:
        d = self.computed[kind]
        return d.n if d else None

    def column_matches(self, kind: str) -> bool:
        return self.published[kind] == self.computed_n(kind)

    def csv_row(self) -> dict:
        out = {"p0": self.p0, "p1": self.p1}
        for kind in ("mchgsp", "gasip", "sasip"):
            pub = self.published[kind]
            comp = self.computed_n(kind)
            out[f"{kind}_published"] = INFEASIBLE if pub is None else pub
            out[f"{kind}_computed"] = INFEASIBLE if comp is None else comp
        out["match"] = self.match
        return out

    def to_dict(self) -> dict:
        return {
            "p0": self.p0,
            "p1": self.p1,
            "published": dict(self.published),
            "computed": {k: (d.to_dict() if d else None) for k, d in self.computed.items()},
            "match": self.match,
            "note": self.note,
        }


@dataclass
class TableReport:
    table: int
    rows: list
    tolerance: float | None
    bounds: SearchBounds = field(default_factory=SearchBounds)

    @property
    def summary(self) -> dict:
        counts = Counter(row.match for row in self.rows)
        return {cat: counts.get(cat, 0) for cat in MATCH_CATEGORIES}

    @property
    def all_exact(self) -> bool:
        return all(row.match == "exact" for row in self.rows)

    def to_dict(self) -> dict:
        return {
            "table": self.table,
            "tolerance": self.tolerance,
            "bounds": {"g_max": self.bounds.g_max, "c_max": self.bounds.c_max, "i_max": self.bounds.i_max},
            "summary": self.summary,
            "rows": [row.to_dict() for row in self.rows],
        }

    def to_csv(self) -> str:
        columns = TABLE1_CSV_COLUMNS if self.table == 1 else TABLE2_CSV_COLUMNS
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row.csv_row())
        return buf.getvalue()

    def to_text(self) -> str:
        columns = TABLE1_CSV_COLUMNS if self.table == 1 else TABLE2_CSV_COLUMNS
        cells = [columns] + [[_fmt(row.csv_row()[c]) for c in columns] for row in self.rows]
        widths = [max(len(r[j]) for r in cells) for j in range(len(columns))]
        lines = ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
        lines.append("")
        lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in self.summary.items()))
        return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.7g}"
    return str(value)


def reproduce_table1(tolerance: float = DEFAULT_TOLERANCE, bounds: SearchBounds | None = None,
                     tie_break: str = "ci") -> TableReport:
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance!r}")
    data = load_published()
    conv = data["conventions"]
    bounds = bounds or SearchBounds()
    rows = []
    for pub in data["table1"]:
        req = DesignRequest(r=conv["r"], p0=pub["p0"], p1=pub["p1"],
                            alpha=conv["alpha"], beta=conv["beta"], bounds=bounds)
        plan = PlanParams(r=conv["r"], g=pub["g"], c=pub["c"], i=pub["i"])
        a = oc_mchgsp(plan, req.p0)
        b = oc_mchgsp(plan, req.p1)
        diffs = (a - pub["oc_aql"], b - pub["oc_lql"])
        within = max(abs(diffs[0]), abs(diffs[1])) <= tolerance
        computed = _try(lambda q: design_mchgsp(q, tie_break=tie_break), req)
        if computed is None:
            match = "feasibility_mismatch"
        elif (computed.params.g, computed.params.c, computed.params.i) != (pub["g"], pub["c"], pub["i"]):
            match = "params_mismatch"
        elif not within:
            match = "oc_mismatch"
        else:
            match = "exact"
        rows.append(TableRow(
            p0=pub["p0"], p1=pub["p1"],
            published={k: pub[k] for k in ("g", "c", "i", "oc_aql", "oc_lql")},
            computed=computed,
            oc_aql_computed=a, oc_lql_computed=b, oc_diffs=diffs,
            oc_within_tolerance=within,
            match=match,
            published_feasible=feasible(plan, req, Kind.MCHGSP),
            note=pub.get("note"),
        ))
    return TableReport(table=1, rows=rows, tolerance=tolerance, bounds=bounds)


def reproduce_table2(bounds: SearchBounds | None = None) -> TableReport:
    data = load_published()
    conv = data["conventions"]
    bounds = bounds or SearchBounds()
    rows = []
    for pub in data["table2"]:
        req = DesignRequest(r=conv["r"], p0=pub["p0"], p1=pub["p1"],
                            alpha=conv["alpha"], beta=conv["beta"], bounds=bounds)
        computed = {
            "mchgsp": _try(design_mchgsp, req),
            "gasip": _try(design_gasip, req),
            "sasip": _try(design_sasip, req),
        }
        published = {k: (pub[k]["n"] if pub[k] else None) for k in ("mchgsp", "gasip", "sasip")}
        if any((published[k] is None) != (computed[k] is None) for k in published):
            match = "feasibility_mismatch"
        elif any(published[k] != computed[k].n for k in published if computed[k] is not None):
            match = "params_mismatch"
        else:
            match = "exact"
        rows.append(Table2Row(pub["p0"], pub["p1"], published, computed, match, pub.get("note")))
    return TableReport(table=2, rows=rows, tolerance=None, bounds=bounds)
