"""Closed-form cooperative TDMA region, variant grids and baselines.

The time-division scheme splits the block into two slots.  In its own slot
a user sends a wiretap codeword (optionally jamming as well); in the other
slot it can only jam to cover the active user.  Rates follow in closed form,
so regions are plain grid sweeps plus a convex merge, no LP involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .gaussmi import clamp_rate, gamma
from .model import BUDGET_TOL, ChannelParams, PowerState, TimeSharedAllocation
from .polytope import Frontier, _pareto_prune, pareto_merge

_LN2 = math.log(2.0)

R3_TAGS = ("r3", "borcp", "ncp")
CTDMA_TAGS = ("ctdma", "ctdma_nscp", "tdma")

# Jamming grids are dense up to this level and coarse beyond: the useful
# helper-jamming levels sit well below the power budgets.
JAM_DENSE_MAX = 2.0


@dataclass(frozen=True)
class CtdmaParams:
    """Two-slot time division: slot 1 belongs to user 1, slot 2 to user 2.

    ``p1b``/``p2b`` are codeword powers in the owner's slot, ``pkj1``/``pkj2``
    the jamming powers user k spends in slot 1 and slot 2.
    """

    alpha: float
    p1b: float = 0.0
    p1j1: float = 0.0
    p2j1: float = 0.0
    p2b: float = 0.0
    p2j2: float = 0.0
    p1j2: float = 0.0

    def __post_init__(self) -> None:
        for name in ("alpha", "p1b", "p1j1", "p2j1", "p2b", "p2j2", "p1j2"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {value!r}")
        if self.alpha > 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")

    def budget_violation(self, channel: ChannelParams) -> str | None:
        a, ab = self.alpha, 1.0 - self.alpha
        used1 = a * (self.p1b + self.p1j1) + ab * self.p1j2
        if used1 > channel.p1 + BUDGET_TOL:
            return f"user 1 average power {used1} exceeds budget {channel.p1}"
        used2 = a * self.p2j1 + ab * (self.p2b + self.p2j2)
        if used2 > channel.p2 + BUDGET_TOL:
            return f"user 2 average power {used2} exceeds budget {channel.p2}"
        return None


def ctdma_rates(channel: ChannelParams, params: CtdmaParams) -> tuple[float, float]:
    """Closed-form secrecy rate pair of one time-division operating point.

    Each slot is a wiretap channel whose receiver and eavesdropper noise
    floors include the slot's jamming; the rate difference is clamped at
    zero before scaling by the slot length.
    """
    violation = params.budget_violation(channel)
    if violation:
        raise ValueError(violation)
    a, ab = params.alpha, 1.0 - params.alpha
    r1 = a * clamp_rate(
        gamma(params.p1b / (1.0 + params.p1j1 + channel.c21 * params.p2j1))
        - gamma(
            channel.c1e * params.p1b
            / (1.0 + channel.c1e * params.p1j1 + channel.c2e * params.p2j1)
        )
    )
    r2 = ab * clamp_rate(
        gamma(params.p2b / (1.0 + params.p2j2 + channel.c12 * params.p1j2))
        - gamma(
            channel.c2e * params.p2b
            / (1.0 + channel.c2e * params.p2j2 + channel.c1e * params.p1j2)
        )
    )
    return r1, r2


def ctdma_allocation(params: CtdmaParams) -> TimeSharedAllocation:
    """The two-state allocation realizing a time-division operating point.

    The slot owner's codeword rides its self signal (decoded only by its own
    receiver); everything else in the slot is jamming.
    """
    slot1 = PowerState(ps1=params.p1b, pj1=params.p1j1, pj2=params.p2j1)
    slot2 = PowerState(ps2=params.p2b, pj2=params.p2j2, pj1=params.p1j2)
    return TimeSharedAllocation(
        states=((params.alpha, slot1), (1.0 - params.alpha, slot2))
    )


def single_user_wiretap(power: float, eve_gain: float) -> float:
    """Wiretap rate of a lone user: [gamma(P) - gamma(g_e P)]+."""
    if not (math.isfinite(power) and math.isfinite(eve_gain)) or power < 0 or eve_gain < 0:
        raise ValueError("power and eve_gain must be finite and nonnegative")
    return clamp_rate(gamma(power) - gamma(eve_gain * power))


def _uniform_grid(cap: float, steps: int) -> tuple[float, ...]:
    if cap <= 0:
        return (0.0,)
    return tuple(float(v) for v in np.linspace(0.0, cap, steps))


def _jam_grid(cap: float, steps: int) -> tuple[float, ...]:
    """Two-segment jamming grid: dense in [0, JAM_DENSE_MAX], coarse above."""
    if cap <= 0:
        return (0.0,)
    values = set(np.linspace(0.0, min(cap, JAM_DENSE_MAX), steps))
    if cap > JAM_DENSE_MAX:
        coarse = max(2, steps // 2)
        values.update(np.linspace(JAM_DENSE_MAX, cap, coarse))
    return tuple(sorted(float(v) for v in values))


def single_power_states(
    tag: str, budgets: tuple[float, float], steps: int, span: int = 1
) -> list[PowerState]:
    """Per-state grid of the common/jamming power families.

    ``r3`` sweeps (pc1, pj1, pc2, pj2); ``borcp`` keeps only states where
    each user either bins or jams, never both; ``ncp`` pins jamming to zero.
    ``span`` stretches the grid beyond the budget for multi-state searches.
    """
    if tag not in R3_TAGS:
        raise ValueError(f"tag must be one of {R3_TAGS}, got {tag!r}")
    out = []
    per_user = []
    for budget in budgets:
        cap = span * budget
        pc_grid = _uniform_grid(cap, steps)
        pj_grid = (0.0,) if tag == "ncp" else _uniform_grid(cap, steps)
        pairs = []
        for pc in pc_grid:
            for pj in pj_grid:
                if pc + pj > cap + BUDGET_TOL:
                    continue
                if tag == "borcp" and pc > 0 and pj > 0:
                    continue
                pairs.append((pc, pj))
        per_user.append(pairs)
    for (pc1, pj1) in per_user[0]:
        for (pc2, pj2) in per_user[1]:
            out.append(PowerState(pc1=pc1, pj1=pj1, pc2=pc2, pj2=pj2))
    return out


def _slot_grids(
    tag: str, channel: ChannelParams, alpha: float, steps: int
) -> tuple[list[tuple[float, float, float]], list[tuple[float, float, float]]]:
    """Per-slot power tuples for one time split.

    Slot 1 tuples are (p1b, p1j1, p2j1), slot 2 tuples (p2b, p2j2, p1j2).
    Per-slot powers may exceed the nominal budgets when the slot is short;
    the joint average constraint is enforced by the caller.
    """
    ab = 1.0 - alpha
    own_jam = tag == "ctdma"          # jamming in one's own slot
    helper_jam = tag != "tdma"        # jamming in the other user's slot

    if alpha <= 0:
        slot1 = [(0.0, 0.0, 0.0)]
    else:
        cap1, cap2 = channel.p1 / alpha, channel.p2 / alpha
        sig = _uniform_grid(cap1, steps)
        self_jam = _jam_grid(cap1, steps) if own_jam else (0.0,)
        other_jam = _jam_grid(cap2, steps) if helper_jam else (0.0,)
        slot1 = [
            (pb, sj, oj)
            for pb in sig
            for sj in self_jam
            if pb + sj <= cap1 + BUDGET_TOL
            for oj in other_jam
        ]
    if ab <= 0:
        slot2 = [(0.0, 0.0, 0.0)]
    else:
        cap2, cap1 = channel.p2 / ab, channel.p1 / ab
        sig = _uniform_grid(cap2, steps)
        self_jam = _jam_grid(cap2, steps) if own_jam else (0.0,)
        other_jam = _jam_grid(cap1, steps) if helper_jam else (0.0,)
        slot2 = [
            (pb, sj, oj)
            for pb in sig
            for sj in self_jam
            if pb + sj <= cap2 + BUDGET_TOL
            for oj in other_jam
        ]
    return slot1, slot2


def ctdma_family(
    tag: str, channel: ChannelParams, steps: int, alpha_steps: int | None = None
) -> Iterator[CtdmaParams]:
    """Every grid-feasible time-division operating point, lazily."""
    if tag not in CTDMA_TAGS:
        raise ValueError(f"tag must be one of {CTDMA_TAGS}, got {tag!r}")
    alphas = np.linspace(0.0, 1.0, alpha_steps or steps)
    for alpha in alphas:
        alpha = float(alpha)
        slot1, slot2 = _slot_grids(tag, channel, alpha, steps)
        ab = 1.0 - alpha
        for p1b, p1j1, p2j1 in slot1:
            used1_slot1 = alpha * (p1b + p1j1)
            used2_slot1 = alpha * p2j1
            for p2b, p2j2, p1j2 in slot2:
                if used1_slot1 + ab * p1j2 > channel.p1 + BUDGET_TOL:
                    continue
                if used2_slot1 + ab * (p2b + p2j2) > channel.p2 + BUDGET_TOL:
                    continue
                yield CtdmaParams(alpha, p1b, p1j1, p2j1, p2b, p2j2, p1j2)


def variant_family(
    tag: str,
    budgets: tuple[float, float],
    steps: int,
    *,
    channel: ChannelParams | None = None,
) -> Iterable:
    """Parameter grid of a scheme variant.

    The binning-family tags return single-state allocations; the
    time-division tags return :class:`CtdmaParams`.  Grid construction only
    needs the budgets, so a zero-gain channel is synthesized for the
    time-division tags when none is given.
    """
    if tag in R3_TAGS:
        return [
            TimeSharedAllocation.single_state(s)
            for s in single_power_states(tag, budgets, steps)
        ]
    if tag in CTDMA_TAGS:
        if channel is None:
            channel = ChannelParams(0.0, 0.0, 0.0, 0.0, budgets[0], budgets[1])
        return ctdma_family(tag, channel, steps)
    raise ValueError(f"unknown variant tag {tag!r}")


def _gamma_vec(x: np.ndarray) -> np.ndarray:
    return 0.5 * np.log1p(x) / _LN2


def _slot_arrays(channel: ChannelParams, alpha: float, slot: int,
                 tuples: list[tuple[float, float, float]]):
    """Vectorized rates and per-user consumed average power for one slot."""
    arr = np.asarray(tuples, dtype=float).reshape(-1, 3)
    pb, self_jam, other_jam = arr[:, 0], arr[:, 1], arr[:, 2]
    share = alpha if slot == 1 else 1.0 - alpha
    if slot == 1:
        cross, own_eve, other_eve = channel.c21, channel.c1e, channel.c2e
    else:
        cross, own_eve, other_eve = channel.c12, channel.c2e, channel.c1e
    rate = share * np.maximum(
        0.0,
        _gamma_vec(pb / (1.0 + self_jam + cross * other_jam))
        - _gamma_vec(
            own_eve * pb / (1.0 + own_eve * self_jam + other_eve * other_jam)
        ),
    )
    owner_used = share * (pb + self_jam)
    helper_used = share * other_jam
    return rate, owner_used, helper_used


def ctdma_region(
    channel: ChannelParams,
    variant: str = "ctdma",
    steps: int = 11,
    alpha_steps: int | None = None,
) -> Frontier:
    """Convex closure of the time-division operating points on a grid.

    Equivalent to merging the singleton frontiers of every grid-feasible
    operating point; internally only the best pairing per slot-1 tuple is
    kept, which cannot change the merged hull.
    """
    if variant not in CTDMA_TAGS:
        raise ValueError(f"variant must be one of {CTDMA_TAGS}, got {variant!r}")
    points: list[tuple[float, float]] = []
    alphas = np.linspace(0.0, 1.0, alpha_steps or steps)
    for alpha in alphas:
        alpha = float(alpha)
        slot1, slot2 = _slot_grids(variant, channel, alpha, steps)
        r1, used1_a, used2_a = _slot_arrays(channel, alpha, 1, slot1)
        r2, used2_b, used1_b = _slot_arrays(channel, alpha, 2, slot2)
        # Pair each slot-1 tuple with its best jointly-feasible slot-2 tuple.
        chunk = 512
        for lo in range(0, r1.size, chunk):
            hi = min(lo + chunk, r1.size)
            ok = (
                used1_a[lo:hi, None] + used1_b[None, :] <= channel.p1 + BUDGET_TOL
            ) & (
                used2_a[lo:hi, None] + used2_b[None, :] <= channel.p2 + BUDGET_TOL
            )
            best = np.where(ok, r2[None, :], -np.inf).max(axis=1)
            for i in range(hi - lo):
                if best[i] > -np.inf:
                    points.append((float(r1[lo + i]), float(best[i])))
    meta = {"scheme": variant, "steps": steps, "alpha_steps": alpha_steps or steps}
    if not points:
        return Frontier(points=(), metadata=meta)
    base = Frontier(points=_pareto_prune(points))
    return pareto_merge([base], metadata=meta)
