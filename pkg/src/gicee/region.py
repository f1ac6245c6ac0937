"""Assembly of the rate constraint systems and allocation-family unions.

The region for one allocation is the projection of a 10-variable polytope:
for every receiver, each subset of its decodable components caps the summed
message-plus-randomization rates by a conditional MI; the eavesdropper's
subsets cap the randomization rates alone, with the full-set row promoted
to an equality so the dummy rates exactly saturate what the eavesdropper
observes.  Unions over power grids are merged by convex closure.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement, product

import numpy as np

from . import schemes
from .gaussmi import DECODABLE, SignalIndex, gamma, receiver_view
from .model import (
    BUDGET_TOL,
    ChannelParams,
    PowerState,
    TimeSharedAllocation,
    validate_allocation,
)
from .polytope import Frontier, RateSystem, SolverFailure, pareto_merge, project_frontier

# Variable order of every RateSystem built here.  The two "other" message
# rates are pinned to zero by the construction and eliminated, leaving
# their randomization rates as pure dummy-randomness variables.
VARIABLE_ORDER = (
    "r_c1", "rx_c1", "r_s1", "rx_s1", "rx_o1",
    "r_c2", "rx_c2", "r_s2", "rx_s2", "rx_o2",
)
N_VARS = len(VARIABLE_ORDER)

_MSG_COL = {
    int(SignalIndex.C1): 0,
    int(SignalIndex.S1): 2,
    int(SignalIndex.C2): 5,
    int(SignalIndex.S2): 7,
}
_RX_COL = {
    int(SignalIndex.C1): 1,
    int(SignalIndex.S1): 3,
    int(SignalIndex.O1): 4,
    int(SignalIndex.C2): 6,
    int(SignalIndex.S2): 8,
    int(SignalIndex.O2): 9,
}

R1_OBJECTIVE = np.zeros(N_VARS)
R1_OBJECTIVE[[_MSG_COL[int(SignalIndex.C1)], _MSG_COL[int(SignalIndex.S1)]]] = 1.0
R1_OBJECTIVE.setflags(write=False)
R2_OBJECTIVE = np.zeros(N_VARS)
R2_OBJECTIVE[[_MSG_COL[int(SignalIndex.C2)], _MSG_COL[int(SignalIndex.S2)]]] = 1.0
R2_OBJECTIVE.setflags(write=False)

VARIANTS = ("full", "r3", "borcp", "ncp")


def _nonempty_subsets(indices: frozenset[int], proper: bool = False):
    """All nonempty subsets in deterministic binary-counting order."""
    idx = sorted(indices)
    top = 2 ** len(idx)
    for mask in range(1, top):
        if proper and mask == top - 1:
            continue
        yield tuple(idx[k] for k in range(len(idx)) if mask >> k & 1)


def build_system(channel: ChannelParams, alloc: TimeSharedAllocation) -> RateSystem:
    """Constraint system for one allocation: 92 inequalities plus the
    eavesdropper equality, with time-share-averaged MI bounds."""
    report = validate_allocation(channel, alloc)
    if not report.ok:
        raise ValueError(f"invalid allocation ({report.code}): {report.detail}")

    views = {
        receiver: [(w, receiver_view(channel, s, receiver)) for w, s in alloc.states]
        for receiver in ("y1", "y2", "ye")
    }

    def bound(receiver: str, subset: tuple[int, ...]) -> float:
        return sum(
            w * gamma(v.subset_power(subset) / v.floor) for w, v in views[receiver]
        )

    rows, bounds = [], []
    for receiver in ("y1", "y2"):
        for subset in _nonempty_subsets(DECODABLE[receiver]):
            row = np.zeros(N_VARS)
            for i in subset:
                if i in _MSG_COL:
                    row[_MSG_COL[i]] = 1.0
                row[_RX_COL[i]] = 1.0
            rows.append(row)
            bounds.append(bound(receiver, subset))
    for subset in _nonempty_subsets(DECODABLE["ye"], proper=True):
        row = np.zeros(N_VARS)
        for i in subset:
            row[_RX_COL[i]] = 1.0
        rows.append(row)
        bounds.append(bound("ye", subset))

    eq_row = np.zeros(N_VARS)
    for i in DECODABLE["ye"]:
        eq_row[_RX_COL[i]] = 1.0
    eq_bound = bound("ye", tuple(sorted(DECODABLE["ye"])))

    return RateSystem(
        a_ub=np.array(rows), b_ub=np.array(bounds),
        a_eq=eq_row[np.newaxis, :], b_eq=np.array([eq_bound]),
    )


def region_for_allocation(
    channel: ChannelParams,
    alloc: TimeSharedAllocation,
    directions: int = 64,
) -> Frontier:
    """Achievable (r1, r2) frontier for a single allocation.

    An empty frontier means the allocation admits no rate point at all
    (the equality can outgrow the receiver bounds); that is an expected
    outcome, not an error.
    """
    system = build_system(channel, alloc)
    return project_frontier(
        system, R1_OBJECTIVE, R2_OBJECTIVE, directions,
        metadata={"scheme": "single-allocation"},
    )


@dataclass(frozen=True)
class RegionSpec:
    """A region computation: channel, allocation family and sweep sizes."""

    channel: ChannelParams
    variant: str = "r3"
    steps: int = 11
    directions: int = 64
    states: int = 1
    weight_steps: int = 5

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.steps < 2:
            raise ValueError("steps must be at least 2 per swept dimension")
        if self.directions < 3:
            raise ValueError("directions must be at least 3")
        if not 1 <= self.states <= 4:
            raise ValueError("states must be between 1 and 4")
        if self.states > 1 and self.weight_steps < 2:
            raise ValueError("weight_steps must be at least 2")


def _full_states(channel: ChannelParams, steps: int, span: int) -> list[PowerState]:
    """Grid over all eight power components, capped per user."""
    out = []
    caps = (span * channel.p1, span * channel.p2)
    axes = []
    for cap in caps:
        grid = tuple(np.linspace(0.0, cap, steps)) if cap > 0 else (0.0,)
        quads = [
            q for q in product(grid, repeat=4) if sum(q) <= cap + BUDGET_TOL
        ]
        axes.append(quads)
    for (pc1, ps1, po1, pj1), (pc2, ps2, po2, pj2) in product(*axes):
        out.append(PowerState(pc1, ps1, po1, pj1, pc2, ps2, po2, pj2))
    return out


def _weight_grid(k: int, steps: int) -> list[tuple[float, ...]]:
    values = np.linspace(0.0, 1.0, steps)
    out = []
    for combo in product(values, repeat=k):
        if abs(sum(combo) - 1.0) <= 1e-9:
            out.append(tuple(float(v) for v in combo))
    return out


def _family_allocations(spec: RegionSpec) -> list[TimeSharedAllocation]:
    budgets = (spec.channel.p1, spec.channel.p2)
    if spec.variant == "full":
        base = _full_states(spec.channel, spec.steps, span=spec.states)
    else:
        base = schemes.single_power_states(
            spec.variant, budgets, spec.steps, span=spec.states
        )
    if spec.states == 1:
        return [TimeSharedAllocation.single_state(s) for s in base]
    allocations = []
    weights = _weight_grid(spec.states, spec.weight_steps)
    for combo in combinations_with_replacement(base, spec.states):
        for w in weights:
            alloc = TimeSharedAllocation(tuple(zip(w, combo)))
            if validate_allocation(spec.channel, alloc).ok:
                allocations.append(alloc)
    return allocations


def _worker_count(explicit: int | None = None) -> int:
    if explicit is not None:
        if explicit < 1:
            raise ValueError("worker count must be >= 1")
        return explicit
    env = os.environ.get("GICEE_WORKERS")
    if env:
        count = int(env)
        if count < 1:
            raise ValueError(f"GICEE_WORKERS must be >= 1, got {env!r}")
        return count
    return os.cpu_count() or 1


def _evaluate_allocation(job: tuple[ChannelParams, TimeSharedAllocation, int]):
    channel, alloc, directions = job
    try:
        return ("ok", region_for_allocation(channel, alloc, directions))
    except SolverFailure as exc:
        return ("fail", str(exc))


def region_union(
    spec: RegionSpec, *, workers: int | None = None
) -> Frontier:
    """Convex-closure union of the per-allocation regions of a family grid.

    Deterministic for a fixed spec: the allocation order is fixed and the
    merge is order-insensitive, so the result does not depend on the
    worker count.
    """
    allocations = _family_allocations(spec)
    jobs = [(spec.channel, alloc, spec.directions) for alloc in allocations]
    count = min(_worker_count(workers), max(len(jobs), 1))
    if count > 1 and len(jobs) >= 32:
        chunk = max(1, len(jobs) // (count * 8))
        with ProcessPoolExecutor(max_workers=count) as pool:
            results = list(pool.map(_evaluate_allocation, jobs, chunksize=chunk))
    else:
        results = [_evaluate_allocation(job) for job in jobs]

    failures = [detail for status, detail in results if status == "fail"]
    if failures:
        raise SolverFailure(
            f"{len(failures)} of {len(jobs)} allocations failed; first: {failures[0]}"
        )
    frontiers = [frontier for _, frontier in results]
    infeasible = sum(1 for f in frontiers if f.is_empty)
    return pareto_merge(
        frontiers,
        metadata={
            "scheme": spec.variant,
            "steps": spec.steps,
            "states": spec.states,
            "directions": spec.directions,
            "allocations": len(allocations),
            "infeasible_allocations": infeasible,
        },
    )
