"""Channel instances and time-shared power allocations.

The channel is kept in standard form: direct gains and every noise variance
are normalized to 1, so an instance is fully described by four cross gains
and two average power budgets.  Transmit strategies are lists of weighted
power states; each state splits a user's power into a common, self, other
and jamming component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# Averaged-power checks accept values this far past the cap so grid points
# sitting exactly on the budget still validate after float rounding.
BUDGET_TOL = 1e-12

# Time-share state lists longer than this are rejected at construction
# unless the caller raises the cap explicitly.
DEFAULT_MAX_STATES = 4

_PRESETS = {
    "fig2": (1.9, 1.9, 0.5, 0.5, 10.0, 10.0),
    "fig3": (1.9, 1.0, 0.5, 1.6, 10.0, 10.0),
}

_CHANNEL_FIELDS = ("c12", "c21", "c1e", "c2e", "p1", "p2")
_STATE_FIELDS = ("pc1", "ps1", "po1", "pj1", "pc2", "ps2", "po2", "pj2")


@dataclass(frozen=True)
class ChannelParams:
    """A two-user Gaussian interference channel with an external eavesdropper.

    ``c12``/``c21`` are the cross gains between the user pairs, ``c1e``/``c2e``
    the gains toward the eavesdropper, ``p1``/``p2`` the average power budgets
    (in units of the unit noise variance).
    """

    c12: float
    c21: float
    c1e: float
    c2e: float
    p1: float
    p2: float

    def __post_init__(self) -> None:
        for name in _CHANNEL_FIELDS:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"channel field {name} must be finite, got {value!r}")
            if value < 0:
                raise ValueError(f"channel field {name} must be nonnegative, got {value!r}")

    def to_dict(self) -> dict:
        return {name: float(getattr(self, name)) for name in _CHANNEL_FIELDS}

    @classmethod
    def from_dict(cls, data: dict) -> "ChannelParams":
        missing = [name for name in _CHANNEL_FIELDS if name not in data]
        if missing:
            raise ValueError(f"channel JSON is missing fields {missing}")
        return cls(**{name: float(data[name]) for name in _CHANNEL_FIELDS})


def preset(name: str) -> ChannelParams:
    """Return one of the two built-in example channels (``fig2``, ``fig3``)."""
    try:
        values = _PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(_PRESETS))
        raise ValueError(f"unknown preset {name!r} (known: {known})") from None
    return ChannelParams(*values)


@dataclass(frozen=True)
class PowerState:
    """Per-state transmit powers: common, self, other and jamming, per user."""

    pc1: float = 0.0
    ps1: float = 0.0
    po1: float = 0.0
    pj1: float = 0.0
    pc2: float = 0.0
    ps2: float = 0.0
    po2: float = 0.0
    pj2: float = 0.0

    @property
    def pb1(self) -> float:
        """Codeword (non-jamming) power of user 1."""
        return self.pc1 + self.ps1 + self.po1

    @property
    def pb2(self) -> float:
        """Codeword (non-jamming) power of user 2."""
        return self.pc2 + self.ps2 + self.po2

    def to_dict(self) -> dict:
        return {name: float(getattr(self, name)) for name in _STATE_FIELDS}

    @classmethod
    def from_dict(cls, data: dict) -> "PowerState":
        return cls(**{name: float(data.get(name, 0.0)) for name in _STATE_FIELDS})


@dataclass(frozen=True)
class TimeSharedAllocation:
    """A weighted list of power states realizing a time-sharing strategy.

    Weights are normalized to sum to one at construction whenever they are
    all finite and nonnegative with a positive sum; anything else is kept
    as-is so that :func:`validate_allocation` can report it.
    """

    states: tuple[tuple[float, PowerState], ...]
    max_states: int = field(default=DEFAULT_MAX_STATES, repr=False, compare=False)

    def __post_init__(self) -> None:
        states = tuple((float(w), s) for w, s in self.states)
        if not states:
            raise ValueError("allocation needs at least one state")
        if len(states) > self.max_states:
            raise ValueError(
                f"allocation has {len(states)} states, cap is {self.max_states}"
            )
        weights = [w for w, _ in states]
        if all(math.isfinite(w) and w >= 0 for w in weights):
            total = sum(weights)
            if total > 0:
                states = tuple((w / total, s) for w, s in states)
        object.__setattr__(self, "states", states)

    @classmethod
    def single_state(cls, state: PowerState) -> "TimeSharedAllocation":
        return cls(states=((1.0, state),))

    def average_power(self, user: int) -> float:
        """Average total transmit power (codeword plus jamming) of a user."""
        if user == 1:
            return sum(w * (s.pb1 + s.pj1) for w, s in self.states)
        if user == 2:
            return sum(w * (s.pb2 + s.pj2) for w, s in self.states)
        raise ValueError(f"user must be 1 or 2, got {user}")

    def to_dict(self) -> dict:
        return {
            "states": [
                dict(weight=float(w), **s.to_dict()) for w, s in self.states
            ]
        }

    @classmethod
    def from_dict(cls, data: dict, max_states: int | None = None) -> "TimeSharedAllocation":
        raw = data.get("states")
        if not isinstance(raw, list) or not raw:
            raise ValueError("allocation JSON needs a nonempty 'states' list")
        states = tuple(
            (float(entry.get("weight", 0.0)), PowerState.from_dict(entry))
            for entry in raw
        )
        if max_states is None:
            max_states = max(DEFAULT_MAX_STATES, len(states))
        return cls(states=states, max_states=max_states)


# Violation codes reported by validate_allocation.
NON_FINITE = "non_finite"
NEGATIVE_WEIGHT = "negative_weight"
NEGATIVE_POWER = "negative_power"
WEIGHT_SUM = "weight_sum"
BUDGET = "budget"


@dataclass(frozen=True)
class AllocationReport:
    """Outcome of validating an allocation against a channel's budgets."""

    ok: bool
    code: str | None = None
    detail: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_allocation(
    channel: ChannelParams, alloc: TimeSharedAllocation
) -> AllocationReport:
    """Check weights, power signs and the averaged power budgets.

    Returns an ok report iff every weight is a finite probability, every
    power component is finite and nonnegative, and the weighted average of
    codeword-plus-jamming power stays within each user's budget (up to
    ``BUDGET_TOL``).
    """
    for idx, (weight, state) in enumerate(alloc.states):
        if not math.isfinite(weight):
            return AllocationReport(False, NON_FINITE, f"state {idx}: weight={weight!r}")
        for name in _STATE_FIELDS:
            value = getattr(state, name)
            if not math.isfinite(value):
                return AllocationReport(
                    False, NON_FINITE, f"state {idx}: {name}={value!r}"
                )
    for idx, (weight, state) in enumerate(alloc.states):
        if weight < 0:
            return AllocationReport(
                False, NEGATIVE_WEIGHT, f"state {idx}: weight={weight!r}"
            )
        for name in _STATE_FIELDS:
            value = getattr(state, name)
            if value < 0:
                return AllocationReport(
                    False, NEGATIVE_POWER, f"state {idx}: {name}={value!r}"
                )
    total = sum(w for w, _ in alloc.states)
    if abs(total - 1.0) > 1e-12:
        return AllocationReport(False, WEIGHT_SUM, f"weights sum to {total!r}")
    for user, budget in ((1, channel.p1), (2, channel.p2)):
        used = alloc.average_power(user)
        if used > budget + BUDGET_TOL:
            return AllocationReport(
                False, BUDGET, f"user {user}: average power {used!r} > budget {budget!r}"
            )
    return AllocationReport(True)
