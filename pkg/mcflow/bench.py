"""Operation counts of gluing versus brute force on the three-arc chain.

The chain s -> v1 -> v2 -> t has capacities
  (s, v1):  integer points with x, y >= 0 and x + y <= 2  (six points)
  (v1, v2): integer points of [0, U] x [0, 3]
  (v2, t):  integer points of [0, 3] x [0, U]
and the fold runs over its three chain cuts, left to right.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .constants import DEFAULT_BUDGET
from .cuts import Cut, enumerate_cuts
from .errors import InvalidParameterError
from .gluing import brute_force, mutual_capacity
from .logging import resolve_logger
from .model import Arc, EnhancedNetwork, build_network
from .regions import PointSet, box_points
from .util import now_s


def chain_network(U: int) -> EnhancedNetwork:
    if U < 0:
        raise InvalidParameterError(f"U must be nonnegative, got {U}")
    simplex = PointSet.of(2, [(x, y) for x in range(3) for y in range(3) if x + y <= 2])
    return build_network(2, ["s", "v1", "v2", "t"], [
        Arc("a1", "s", "v1", simplex),
        Arc("a2", "v1", "v2", box_points((0, 0), (U, 3))),
        Arc("a3", "v2", "t", box_points((0, 0), (3, U))),
    ], "s", "t")


def chain_cuts(net: EnhancedNetwork) -> list[Cut]:
    """{s}, {s, v1}, {s, v1, v2} on the source side, in that order."""
    prefixes = [{"s"}, {"s", "v1"}, {"s", "v1", "v2"}]
    by_side = {c.s_side: c for c in enumerate_cuts(net)}
    return [by_side[frozenset(p)] for p in prefixes]


@dataclass(frozen=True)
class BenchRow:
    U: int
    first_cut_flows: int
    gluing_semantic: int
    gluing_survivor: int
    gluing_actual: int
    gluing_closed_form: int       # 48(U+1)
    brute_coordinates: int
    brute_operations: int
    brute_closed_form: int        # 384(U+1)^2
    ratio: Fraction               # brute operations / gluing semantic
    ratio_stated: int             # 8U
    ratio_derived: int            # 8(U+1)
    values_agree: bool
    gluing_seconds: float = 0.0
    brute_seconds: float = 0.0


@dataclass
class BenchReport:
    rows: list[BenchRow]
    gluing_exponent: float | None = None
    brute_exponent: float | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self, timings: bool = False) -> dict:
        rows = []
        for r in self.rows:
            d = asdict(r)
            d["ratio"] = str(r.ratio)
            if not timings:
                d.pop("gluing_seconds")
                d.pop("brute_seconds")
            rows.append(d)
        return {
            "rows": rows,
            "gluing_exponent": None if self.gluing_exponent is None else round(self.gluing_exponent, 6),
            "brute_exponent": None if self.brute_exponent is None else round(self.brute_exponent, 6),
            "notes": list(self.notes),
        }


def bench_chain(U: int, *, budget: int = DEFAULT_BUDGET, logger=None) -> BenchRow:
    logger = resolve_logger(logger)
    net = chain_network(U)
    t0 = now_s()
    glued = mutual_capacity(net, chain_cuts(net), budget=budget, logger=logger)
    t1 = now_s()
    brute = brute_force(net, budget=budget, logger=logger)
    t2 = now_s()
    first = glued.stats.steps[0]["partials"] if glued.stats.steps else len(glued)
    row = BenchRow(
        U=U,
        first_cut_flows=first,
        gluing_semantic=glued.stats.semantic_comparisons,
        gluing_survivor=glued.stats.survivor_comparisons,
        gluing_actual=glued.stats.actual_comparisons,
        gluing_closed_form=48 * (U + 1),
        brute_coordinates=brute.stats.coordinates,
        brute_operations=brute.stats.operations,
        brute_closed_form=384 * (U + 1) ** 2,
        ratio=Fraction(brute.stats.operations, glued.stats.semantic_comparisons or 1),
        ratio_stated=8 * U,
        ratio_derived=8 * (U + 1),
        values_agree=glued.values() == brute.values(),
        gluing_seconds=t1 - t0,
        brute_seconds=t2 - t1,
    )
    logger.debug("bench_row", U=U, gluing=row.gluing_semantic, brute=row.brute_operations)
    return row


def fitted_exponent(us: Sequence[int], counts: Sequence[int]) -> float | None:
    """Slope of log(count) against log(U+1)."""
    if len(us) < 2:
        return None
    x = np.log(np.asarray([u + 1 for u in us], dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def run_bench(us: Sequence[int], *, budget: int = DEFAULT_BUDGET, logger=None) -> BenchReport:
    logger = resolve_logger(logger)
    rows = [bench_chain(u, budget=budget, logger=logger) for u in us]
    report = BenchReport(rows)
    report.gluing_exponent = fitted_exponent(us, [r.gluing_semantic for r in rows])
    report.brute_exponent = fitted_exponent(us, [r.brute_operations for r in rows])
    pruned = [r.U for r in rows if r.gluing_survivor < r.gluing_semantic]
    if pruned:
        report.notes.append(
            "survivor count below the semantic count for U in " + ",".join(map(str, pruned))
            + ": partial flows with no partner in cut 2 are dropped before cut 3")
    report.notes.append("brute/gluing ratio is 8(U+1) from the closed forms; 8U is listed for comparison")
    logger.emit("bench_done", sweep=list(us), gluing_exponent=report.gluing_exponent,
                brute_exponent=report.brute_exponent)
    return report


def report_rows_csv(report: BenchReport, timings: bool = False) -> list[list]:
    d = report.to_dict(timings)
    if not d["rows"]:
        return []
    header = list(d["rows"][0].keys())
    return [header] + [[r[h] for h in header] for r in d["rows"]]


def expected_survivor_count(U: int) -> int:
    """Survivor count the fold performs on the chain, for any U >= 0."""
    survivors = sum(1 for x in range(3) for y in range(3) if x + y <= 2 and x <= U)
    return 6 * 4 * (U + 1) + survivors * 4 * (U + 1)
