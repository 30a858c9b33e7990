"""Binary search for the largest multiple of a commodity ratio.

Both searches need reducible (down-closed) capacities: then feasibility of
T*R is monotone in T and bisection is sound. Point sets are down-closed
only on the lattice, so they are searched over integer multiples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .constants import DEFAULT_BRANCH_BUDGET, DEFAULT_BUDGET, MAX_UPPER_DOUBLINGS
from .cycles import Decision, decide
from .errors import InvalidParameterError, NonReducibleError
from .logging import resolve_logger
from .model import EnhancedNetwork, Flow
from .regions import PointSet
from .util import as_rational
from .vector import CommodityVector

REDUCIBLE_EXACT = "exact"
REDUCIBLE_GRID = "grid-certified"
REDUCIBLE_ASSUMED = "assumed"


@dataclass(frozen=True)
class RatioProblem:
    net: EnhancedNetwork
    ratio: CommodityVector
    upper: Fraction
    epsilon: Fraction
    integer_mode: bool = False
    reducible_declared: bool = False

    def __post_init__(self):
        object.__setattr__(self, "ratio", CommodityVector(self.ratio))
        object.__setattr__(self, "upper", as_rational(self.upper))
        object.__setattr__(self, "epsilon", as_rational(self.epsilon))
        if len(self.ratio) != self.net.k:
            raise InvalidParameterError(f"ratio has {len(self.ratio)} entries, network has k={self.net.k}")
        if not self.ratio.is_nonnegative() or self.ratio.is_zero():
            raise InvalidParameterError("ratio must be nonnegative and nonzero", ratio=str(self.ratio))
        if self.upper <= 0:
            raise InvalidParameterError("upper bound must be positive", upper=str(self.upper))
        if self.epsilon <= 0:
            raise InvalidParameterError("epsilon must be positive", eps=str(self.epsilon))
        if self.integer_mode and self.epsilon >= Fraction(1, 2):
            raise InvalidParameterError("integer search needs epsilon < 1/2", eps=str(self.epsilon))


@dataclass(frozen=True)
class RatioResult:
    multiple: Fraction              # B- for the rational search, P* for the integer one
    witness: Flow
    iterations: int
    upper: Fraction                 # B+ the bisection started from
    reducibility: str
    checks: tuple = field(default=())  # (T, feasible) in search order


Oracle = Callable[[EnhancedNetwork, CommodityVector], Decision]


def _points_only(net: EnhancedNetwork) -> bool:
    return bool(net.arcs) and all(isinstance(a.capacity, PointSet) for a in net.arcs)


def _lattice_problems(net: EnhancedNetwork, ratio: CommodityVector | None, integer_mode: bool) -> list[str]:
    """Why the integer lattice search would be unsound here; empty when it is sound."""
    out = []
    if not integer_mode:
        out.append("point-set capacities are down-closed only on the lattice; search integer multiples")
    if ratio is not None and not ratio.is_integral():
        out.append(f"integer multiples of {ratio} leave the lattice")
    off = [a.id for a in net.arcs if any(not p.is_integral() for p in a.capacity.points)]
    if off:
        out.append(f"capacity points off the lattice on {', '.join(off)}")
    return out


def check_reducibility(net: EnhancedNetwork, declared: bool = False, logger=None, *,
                       ratio: CommodityVector | None = None, integer_mode: bool = False) -> str:
    """Certify that feasibility is monotone along the search.

    Polygons are checked for down-closure on their integer grid. Point sets
    are down-closed only on the lattice, so they are certified exactly for
    an integer search with an integral ratio and integral capacity points.
    A failed check raises unless the input declared the capacities
    reducible, in which case the result is stamped "assumed".
    """
    logger = resolve_logger(logger)
    failing = [a.id for a in net.arcs if not a.capacity.is_reducible()]
    reasons = [f"capacities are not reducible: {', '.join(failing)}"] if failing else []
    points_only = _points_only(net)
    if points_only:
        reasons += _lattice_problems(net, ratio, integer_mode)
    if reasons:
        if not declared:
            raise NonReducibleError("; ".join(reasons), arcs=failing)
        logger.emit("reducibility_assumed", arcs=failing, reasons=reasons)
        return REDUCIBLE_ASSUMED
    return REDUCIBLE_EXACT if points_only else REDUCIBLE_GRID


def _default_oracle(budget: int, branch_budget: int, logger) -> Oracle:
    def oracle(net, value):
        return decide(net, value, budget=budget, branch_budget=branch_budget, logger=logger)
    return oracle


def _double_upper(prob: RatioProblem, oracle: Oracle, logger, upper):
    """Double ``upper`` until upper*R is infeasible."""
    checks = []
    doublings = 0
    while True:
        d = oracle(prob.net, prob.ratio * upper)
        checks.append((Fraction(upper), d.feasible))
        if not d.feasible:
            return upper, checks
        doublings += 1
        if doublings > MAX_UPPER_DOUBLINGS:
            raise InvalidParameterError("ratio multiple appears unbounded", upper=str(upper))
        logger.emit("upper_bound_doubled", upper=upper * 2)
        upper *= 2


def _search(prob: RatioProblem, oracle: Oracle, logger):
    net, R = prob.net, prob.ratio
    upper, checks = _double_upper(prob, oracle, logger, prob.upper)

    lo, hi = Fraction(0), upper
    witness = None
    iterations = 0
    while hi - lo > prob.epsilon:
        iterations += 1
        mid = (lo + hi) / 2
        d = oracle(net, R * mid)
        checks.append((mid, d.feasible))
        logger.debug("ratio_check", iteration=iterations, multiple=mid, feasible=d.feasible)
        if d.feasible:
            lo, witness = mid, d.witness
        else:
            hi = mid
    if witness is None:
        witness = oracle(net, R * lo).witness
    return lo, witness, iterations, upper, checks


def _lattice_search(prob: RatioProblem, oracle: Oracle, logger):
    """Bisection over integer multiples; stops when the bracket is one apart."""
    net, R = prob.net, prob.ratio
    upper, checks = _double_upper(prob, oracle, logger, max(1, math.ceil(prob.upper)))

    lo, hi = 0, upper
    witness = None
    iterations = 0
    while hi - lo > 1:
        iterations += 1
        mid = (lo + hi) // 2
        d = oracle(net, R * mid)
        checks.append((Fraction(mid), d.feasible))
        logger.debug("ratio_check", iteration=iterations, multiple=mid, feasible=d.feasible)
        if d.feasible:
            lo, witness = mid, d.witness
        else:
            hi = mid
    if witness is None:
        witness = oracle(net, R * lo).witness
    return Fraction(lo), witness, iterations, Fraction(upper), checks


def ratio_max(prob: RatioProblem, *, oracle: Oracle | None = None, budget: int = DEFAULT_BUDGET,
              branch_budget: int = DEFAULT_BRANCH_BUDGET, logger=None) -> RatioResult:
    """B- with B-*R feasible and the true maximum within epsilon above it."""
    logger = resolve_logger(logger)
    status = check_reducibility(prob.net, prob.reducible_declared, logger, ratio=prob.ratio)
    oracle = oracle or _default_oracle(budget, branch_budget, logger)
    lo, witness, iterations, upper, checks = _search(prob, oracle, logger)
    logger.emit("ratio_search_done", multiple=lo, iterations=iterations, upper=upper, reducibility=status)
    return RatioResult(lo, witness, iterations, upper, status, tuple(checks))


def int_ratio_max(prob: RatioProblem, *, oracle: Oracle | None = None, budget: int = DEFAULT_BUDGET,
                  branch_budget: int = DEFAULT_BRANCH_BUDGET, logger=None) -> RatioResult:
    """Largest integer P with P*R feasible.

    Polygonal networks bisect over rationals and then test ceil(B-):
    feasible gives ceil(B-), otherwise floor(B-). With epsilon < 1/2 at most
    one integer lies within reach. Point-set networks bisect over the
    integers directly.
    """
    if not prob.integer_mode:
        raise InvalidParameterError("int_ratio_max needs integer_mode")
    logger = resolve_logger(logger)
    status = check_reducibility(prob.net, prob.reducible_declared, logger, ratio=prob.ratio, integer_mode=True)
    oracle = oracle or _default_oracle(budget, branch_budget, logger)
    if _points_only(prob.net):
        best, witness, iterations, upper, checks = _lattice_search(prob, oracle, logger)
        logger.emit("ratio_search_done", multiple=best, iterations=iterations, upper=upper,
                    reducibility=status, integer=True)
        return RatioResult(best, witness, iterations, upper, status, tuple(checks))

    lo, witness, iterations, upper, checks = _search(prob, oracle, logger)
    top = math.ceil(lo)
    d = oracle(prob.net, prob.ratio * top)
    checks.append((Fraction(top), d.feasible))
    if d.feasible:
        best, witness = top, d.witness
    else:
        best = math.floor(lo)
        if best != lo:
            witness = oracle(prob.net, prob.ratio * best).witness
    logger.emit("ratio_search_done", multiple=best, iterations=iterations, upper=upper,
                reducibility=status, integer=True)
    return RatioResult(Fraction(best), witness, iterations, upper, status, tuple(checks))
