"""Exact capacity bounds for all three protocol cases, with witnesses.

Every bound comes with the partition or cut that attains it, and each
one is cross-checked against an exhaustive oracle where the instance is
small enough to enumerate.
"""

from fractions import Fraction

from pinkey import (
    NetworkSpec,
    broadcast_bound,
    budget_graph,
    group_bound,
    min_normalized_multicut,
    min_st_cut_bruteforce,
    optimal_tree_packing_bruteforce,
    subgroup_bound,
)


def show(label, report):
    print(f"{label}: {report.value}  formula {report.formula}")
    witness = report.witness.partition() if hasattr(report.witness, "partition") else report.witness
    print(f"  witness {witness}")


star = NetworkSpec.star([7, 5, 9])
show("broadcast on a 7/5/9 star", broadcast_bound(star))

triangle = NetworkSpec.from_pairs(3, [(0, 1, 5), (0, 2, 4), (1, 2, 3)])
show("subgroup 0->2 on the triangle", subgroup_bound(triangle, 0, 2))
brute = min_st_cut_bruteforce(budget_graph(triangle), 0, 2)
print(f"  brute-force cut agrees: {brute.value}")

show("group key on the triangle", group_bound(triangle))
value, witness = min_normalized_multicut(budget_graph(triangle))
print(f"  multicut oracle agrees: {value} at {witness}")
packed = optimal_tree_packing_bruteforce(budget_graph(triangle))
print(f"  optimal packing attains it: {packed}")

# A fractional bound: the 4-cycle with unit budgets has crossing
# weight 4 over k-1 = 3 blocks minus... just look:
cycle = NetworkSpec.from_pairs(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
report = group_bound(cycle)
show("group key on the unit 4-cycle", report)
assert report.value == Fraction(4, 3)
print("  fractional: protocols can only take the floor, 1 bit")
