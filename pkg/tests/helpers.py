"""Seeded random-instance generators shared across the test modules."""

from __future__ import annotations

import random

from pinkey import NetworkSpec, budget_graph, is_connected


def random_spec(rng: random.Random, max_m: int = 6, max_budget: int = 8, min_m: int = 2) -> NetworkSpec:
    m = rng.randint(min_m, max_m)
    budgets = {}
    for i in range(m):
        for j in range(i + 1, m):
            w = rng.randint(0, max_budget)
            if w:
                budgets[(i, j)] = w
    return NetworkSpec(m, budgets)


def random_connected_spec(rng: random.Random, max_m: int = 6, max_budget: int = 8) -> NetworkSpec:
    while True:
        spec = random_spec(rng, max_m, max_budget)
        if is_connected(budget_graph(spec)):
            return spec


def random_star_spec(rng: random.Random, max_m: int = 8, max_budget: int = 12) -> NetworkSpec:
    m = rng.randint(2, max_m)
    return NetworkSpec.star([rng.randint(0, max_budget) for _ in range(m - 1)])
