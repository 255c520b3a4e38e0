"""Exact upper bounds on achievable key length for the three cases.

Each bound is an exact rational with a combinatorial witness, so a
protocol's gap to its bound is an exact number, never an estimate:

- broadcast case (star networks): the smallest leaf budget;
- two-terminal case with helpers: the minimum s-t cut of the budget graph;
- group case: the minimum over node partitions of crossing weight
  divided by (block count - 1), i.e. the normalized multicut.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotAStar
from .graph import (
    CutResult,
    Partition,
    WeightedGraph,
    min_normalized_multicut,
    min_st_cut,
    min_st_cut_bruteforce,
)
from .model import NetworkSpec

# Cross-check the flow-based cut against the exhaustive oracle when it is
# cheap; 2**(m-2) sides at m=12 is 1024 subset scans.
_CUT_CROSSCHECK_LIMIT = 12


@dataclass(frozen=True)
class BoundReport:
    """A bound value, the witness attaining it, and which formula produced it."""

    case: str
    value: Fraction
    witness: Partition | CutResult
    formula: str

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("bounds are nonnegative")


def budget_graph(spec: NetworkSpec) -> WeightedGraph:
    """The spec's budgets as an undirected weighted graph."""
    return WeightedGraph(spec.m, dict(spec.budgets))


def broadcast_bound(spec: NetworkSpec) -> BoundReport:
    """Smallest leaf budget of a star centered at terminal 0.

    The witness is the 2-partition isolating the poorest leaf (smallest
    id on ties).  Raises NotAStar when some positive budget avoids the
    center.
    """
    if not spec.is_star(center=0):
        raise NotAStar("broadcast case needs a star centered at terminal 0")
    leaves = range(1, spec.m)
    poorest = min(leaves, key=lambda i: (spec.budget(0, i), i))
    value = spec.budget(0, poorest)
    witness = Partition((frozenset((poorest,)), frozenset(range(spec.m)) - {poorest}))
    return BoundReport(case="broadcast", value=Fraction(value), witness=witness, formula="min-leaf-budget")


def subgroup_bound(spec: NetworkSpec, s: int, t: int) -> BoundReport:
    """Minimum s-t cut of the budget graph, witnessed by a cut.

    Computed from the max-flow residual; on small instances the value is
    cross-checked against exhaustive cut enumeration.
    """
    spec.check_terminal(s)
    spec.check_terminal(t)
    if s == t:
        raise ValueError("the two key-holding terminals must differ")
    g = budget_graph(spec)
    cut = min_st_cut(g, s, t)
    if spec.m <= _CUT_CROSSCHECK_LIMIT:
        oracle = min_st_cut_bruteforce(g, s, t)
        assert oracle.value == cut.value, "flow-based cut disagrees with enumeration"
    return BoundReport(case="subgroup", value=Fraction(cut.value), witness=cut, formula="min-st-cut")


def group_bound(spec: NetworkSpec) -> BoundReport:
    """Minimum normalized multicut of the budget graph, as an exact rational.

    Minimizes crossing_weight / (k - 1) over all partitions of the
    terminals into k >= 2 blocks.  Hard guard: m <= 12.
    """
    value, witness = min_normalized_multicut(budget_graph(spec))
    return BoundReport(case="group", value=value, witness=witness, formula="min-normalized-multicut")
