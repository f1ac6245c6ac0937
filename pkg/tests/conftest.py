import numpy as np
import pytest

from gicee import ChannelParams, CtdmaParams, PowerState, TimeSharedAllocation, gamma, preset


@pytest.fixture
def fig2() -> ChannelParams:
    return preset("fig2")


@pytest.fixture
def fig3() -> ChannelParams:
    return preset("fig3")


def random_channel(rng: np.random.Generator) -> ChannelParams:
    return ChannelParams(
        c12=rng.uniform(0.0, 2.5),
        c21=rng.uniform(0.0, 2.5),
        c1e=rng.uniform(0.0, 1.2),
        c2e=rng.uniform(0.0, 1.2),
        p1=rng.uniform(1.0, 15.0),
        p2=rng.uniform(1.0, 15.0),
    )


def random_state(rng: np.random.Generator, p1: float, p2: float) -> PowerState:
    """A state that always respects the per-user budgets."""
    shares = rng.uniform(0.0, 1.0, 8)
    u1 = shares[:4] / max(shares[:4].sum(), 1e-12) * p1 * rng.uniform(0.0, 1.0)
    u2 = shares[4:] / max(shares[4:].sum(), 1e-12) * p2 * rng.uniform(0.0, 1.0)
    return PowerState(*u1, *u2)


def single(state: PowerState) -> TimeSharedAllocation:
    return TimeSharedAllocation.single_state(state)


def sample_nonneg_bracket_params(rng, channel, count, max_tries=20000):
    """Time-division operating points whose rate brackets are nonnegative.

    Codeword powers are zeroed with some probability: on channels with a
    strong eavesdropper link one user may only ever contribute jamming.
    """
    out = []
    for _ in range(max_tries):
        if len(out) >= count:
            break
        alpha = rng.uniform(0.1, 0.9)
        u1, v1, w1 = rng.uniform(0, 1, 3)
        u2, v2, w2 = rng.uniform(0, 1, 3)
        p1b = u1 * channel.p1 / alpha * v1
        p1j1 = u1 * channel.p1 / alpha * (1 - v1)
        p1j2 = (1 - u1) * channel.p1 / (1 - alpha) * w1
        p2j1 = u2 * channel.p2 / alpha * w2
        p2b = (1 - u2) * channel.p2 / (1 - alpha) * v2
        p2j2 = (1 - u2) * channel.p2 / (1 - alpha) * (1 - v2)
        if rng.uniform() < 0.3:
            p1b = 0.0
        if rng.uniform() < 0.3:
            p2b = 0.0
        a1 = gamma(p1b / (1 + p1j1 + channel.c21 * p2j1))
        b1 = gamma(channel.c1e * p1b / (1 + channel.c1e * p1j1 + channel.c2e * p2j1))
        a2 = gamma(p2b / (1 + p2j2 + channel.c12 * p1j2))
        b2 = gamma(channel.c2e * p2b / (1 + channel.c2e * p2j2 + channel.c1e * p1j2))
        if a1 < b1 or a2 < b2:
            continue
        params = CtdmaParams(alpha, p1b, p1j1, p2j1, p2b, p2j2, p1j2)
        out.append((params, a1, b1, a2, b2))
    return out
