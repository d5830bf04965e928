"""Search for small sensor sets that satisfy the recoverability criterion."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .exceptions import InfeasiblePlacement, SearchSpaceTooLarge
from .feasibility import FeasibilityReport, check_jordan
from .spectral import JordanStructure, scaled_subrank

#: Exhaustive search refuses dimensions above this unless overridden.
DEFAULT_EXHAUSTIVE_LIMIT = 20


@dataclass
class PlacementResult:
    omega: list[int]
    size: int
    certificate: FeasibilityReport
    method: str
    optimal: bool


def minimal_placement_exhaustive(js: JordanStructure,
                                 size_cap: int | None = None,
                                 exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
                                 ) -> PlacementResult | None:
    """Smallest feasible site set, ties broken lexicographically.

    Enumerates subsets by size starting from the structural lower bound
    (the largest block count over eigenvalues); returns None when no subset
    within ``size_cap`` is feasible.
    """
    d = js.dim
    if d > exhaustive_limit:
        raise SearchSpaceTooLarge(
            f"dimension {d} exceeds exhaustive limit {exhaustive_limit}")
    if size_cap is None:
        size_cap = d
    size_cap = min(int(size_cap), d)
    lower = js.max_gamma
    for size in range(max(lower, 1), size_cap + 1):
        for omega in itertools.combinations(range(d), size):
            report = check_jordan(js, list(omega))
            if report.feasible:
                return PlacementResult(list(omega), size, report, "exhaustive", True)
    return None


def greedy_placement(js: JordanStructure) -> PlacementResult:
    """Add sites by largest total rank gain across eigen-blocks.

    Deterministic: ties break toward the smallest site index.  The result is
    always feasible when the full site set is (otherwise
    InfeasiblePlacement is raised, which can only happen for untrusted
    similarities).
    """
    d = js.dim
    B = js.basis
    targets = [(s, js.cyclic_rows(s), blk.gamma) for s, blk in enumerate(js.blocks)]

    def achieved(sites):
        return [min(scaled_subrank(B, rows, sites, js.rank_tol), gamma)
                for _, rows, gamma in targets]

    chosen: list[int] = []
    current = [0] * len(targets)
    goal = [gamma for _, _, gamma in targets]
    while current != goal:
        best_site, best_gain = None, 0
        for i in range(d):
            if i in chosen:
                continue
            trial = achieved(chosen + [i])
            gain = sum(t - c for t, c in zip(trial, current))
            if gain > best_gain:
                best_site, best_gain = i, gain
        if best_site is None:
            raise InfeasiblePlacement(
                "no remaining site improves coverage; similarity may be untrusted")
        chosen.append(best_site)
        current = achieved(chosen)
    chosen.sort()
    report = check_jordan(js, chosen)
    if not report.feasible:
        raise InfeasiblePlacement("greedy selection failed the final certificate")
    return PlacementResult(chosen, len(chosen), report, "greedy", False)
