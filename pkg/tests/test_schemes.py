import math

import numpy as np
import pytest

from gicee import (
    ChannelParams,
    CtdmaParams,
    Frontier,
    ctdma_family,
    ctdma_rates,
    ctdma_region,
    pareto_merge,
    single_power_states,
    single_user_wiretap,
    validate_allocation,
    variant_family,
)
from gicee.polytope import _pareto_prune
from gicee.schemes import ctdma_allocation

# [gamma(10) - gamma(5)], the lone-user rate on the preset channels.
WIRETAP_10 = 0.4372345589580706
# rate of user 1 on the asymmetric preset with helper jamming at 0.88
JAMMED_R1_088 = 0.5192407813112971


def test_rates_full_power_no_jamming(fig2):
    r1, r2 = ctdma_rates(fig2, CtdmaParams(alpha=1.0, p1b=10.0))
    assert r1 == pytest.approx(WIRETAP_10, abs=1e-12)
    assert r2 == 0.0


def test_rates_with_helper_jamming(fig3):
    r1, _ = ctdma_rates(fig3, CtdmaParams(alpha=1.0, p1b=10.0, p2j1=0.88))
    assert r1 == pytest.approx(JAMMED_R1_088, abs=1e-12)
    assert abs(r1 - 0.5192) <= 5e-3


def test_rates_zero_time_share(fig2):
    r1, _ = ctdma_rates(fig2, CtdmaParams(alpha=0.0, p1b=99.0, p1j1=5.0))
    assert r1 == 0.0


def test_rates_reject_budget_violation(fig2):
    with pytest.raises(ValueError, match="budget"):
        ctdma_rates(fig2, CtdmaParams(alpha=1.0, p1b=11.0))


def test_params_validation():
    with pytest.raises(ValueError, match="alpha"):
        CtdmaParams(alpha=1.5)
    with pytest.raises(ValueError, match="p1b"):
        CtdmaParams(alpha=0.5, p1b=-1.0)


def test_rates_match_lone_user_baseline(fig2, fig3):
    for channel in (fig2, fig3):
        for power in (0.0, 2.5, 10.0):
            r1, r2 = ctdma_rates(channel, CtdmaParams(alpha=1.0, p1b=power))
            assert r1 == single_user_wiretap(power, channel.c1e)
            assert r2 == 0.0


def test_single_user_wiretap_values():
    assert single_user_wiretap(10.0, 0.5) == pytest.approx(WIRETAP_10, abs=1e-12)
    assert single_user_wiretap(10.0, 1.6) == 0.0
    assert single_user_wiretap(0.0, 0.7) == 0.0
    with pytest.raises(ValueError):
        single_user_wiretap(-1.0, 0.5)


def test_region_contains_time_shared_mixtures(fig2):
    frontier = ctdma_region(fig2, "tdma", steps=5, alpha_steps=3)
    assert frontier.max_r1 == pytest.approx(WIRETAP_10, abs=1e-9)
    assert frontier.max_r2 == pytest.approx(WIRETAP_10, abs=1e-9)
    # the equal-split mixture lies on or below the hull
    assert frontier.r2_at(WIRETAP_10 / 2) >= WIRETAP_10 / 2 - 1e-9


def test_region_asymmetric_user2_silent(fig3):
    frontier = ctdma_region(fig3, "ctdma", steps=7)
    assert frontier.max_r2 <= 1e-9


def test_region_zero_budgets():
    channel = ChannelParams(c12=1.0, c21=1.0, c1e=0.5, c2e=0.5, p1=0.0, p2=0.0)
    frontier = ctdma_region(channel, "ctdma", steps=4)
    assert frontier.points == ((0.0, 0.0),)


def test_region_unknown_variant(fig2):
    with pytest.raises(ValueError, match="variant"):
        ctdma_region(fig2, "bogus", steps=4)


def test_region_matches_literal_enumeration(fig2, fig3):
    # the vectorized sweep must agree with merging every grid point
    for channel, variant in ((fig2, "ctdma"), (fig3, "ctdma_nscp")):
        fast = ctdma_region(channel, variant, steps=4, alpha_steps=3)
        points = [ctdma_rates(channel, p) for p in
                  ctdma_family(variant, channel, steps=4, alpha_steps=3)]
        literal = pareto_merge([Frontier(points=_pareto_prune(points))])
        assert len(fast.points) == len(literal.points)
        for a, b in zip(fast.points, literal.points):
            assert a == pytest.approx(b, abs=1e-12)


def test_variant_tdma_is_time_sharing_only(fig2):
    for params in ctdma_family("tdma", fig2, steps=4, alpha_steps=3):
        assert params.p1j1 == params.p2j1 == params.p2j2 == params.p1j2 == 0.0


def test_variant_nscp_never_jams_own_slot(fig3):
    saw_helper_jam = False
    for params in ctdma_family("ctdma_nscp", fig3, steps=4, alpha_steps=3):
        assert params.p1j1 == 0.0 and params.p2j2 == 0.0
        saw_helper_jam |= params.p2j1 > 0 or params.p1j2 > 0
    assert saw_helper_jam


def test_variant_parameter_nesting(fig2):
    kwargs = dict(steps=3, alpha_steps=3)
    tdma = set(ctdma_family("tdma", fig2, **kwargs))
    nscp = set(ctdma_family("ctdma_nscp", fig2, **kwargs))
    full = set(ctdma_family("ctdma", fig2, **kwargs))
    assert tdma < nscp < full


def test_variant_family_binning_grids():
    allocations = variant_family("ncp", (10.0, 10.0), 3)
    assert len(allocations) == 9
    seen = set()
    for alloc in allocations:
        (_, state), = alloc.states
        assert state.pj1 == state.pj2 == 0.0
        seen.add((state.pc1, state.pc2))
    assert seen == {(a, b) for a in (0.0, 5.0, 10.0) for b in (0.0, 5.0, 10.0)}


def test_variant_family_exclusive_binning_or_jamming():
    states = [a.states[0][1] for a in variant_family("borcp", (10.0, 10.0), 3)]
    assert all(s.pc1 == 0 or s.pj1 == 0 for s in states)
    assert all(s.pc2 == 0 or s.pj2 == 0 for s in states)
    assert any(s.pc1 == 5.0 and s.pj1 == 0.0 for s in states)
    r3_states = [a.states[0][1] for a in variant_family("r3", (10.0, 10.0), 3)]
    assert any(s.pc1 == 5.0 and s.pj1 == 5.0 for s in r3_states)
    assert set(states) < set(r3_states)


def test_variant_family_unknown_tag():
    with pytest.raises(ValueError, match="tag"):
        variant_family("nope", (10.0, 10.0), 3)


def test_binning_grid_respects_budget_cap():
    for state in single_power_states("r3", (10.0, 4.0), 5):
        assert state.pc1 + state.pj1 <= 10.0 + 1e-9
        assert state.pc2 + state.pj2 <= 4.0 + 1e-9


def test_dominance_chain_at_equal_grids(fig2, fig3):
    for channel in (fig2, fig3):
        tdma = ctdma_region(channel, "tdma", steps=5)
        nscp = ctdma_region(channel, "ctdma_nscp", steps=5)
        full = ctdma_region(channel, "ctdma", steps=5)
        assert nscp.dominates(tdma, tol=1e-9)
        assert full.dominates(nscp, tol=1e-9)


def test_symmetric_channel_symmetric_region(fig2):
    frontier = ctdma_region(fig2, "ctdma", steps=6)
    for k in range(41):
        theta = 0.5 * math.pi * k / 40
        assert frontier.support(theta) == pytest.approx(
            frontier.support(0.5 * math.pi - theta), abs=1e-9
        )


def test_helper_jamming_hurts_on_symmetric_channel(fig2):
    # cross gain toward the receiver (1.9) beats the eavesdropper gain (0.5),
    # so slot-1 jamming by user 2 only degrades user 1's rate
    levels = np.linspace(0.0, 10.0, 21)
    rates = [
        ctdma_rates(fig2, CtdmaParams(alpha=1.0, p1b=10.0, p2j1=t))[0]
        for t in levels
    ]
    assert all(b < a for a, b in zip(rates, rates[1:]) if a > 0)
    assert all(b <= a for a, b in zip(rates, rates[1:]))
    assert rates[0] == max(rates)


def test_helper_jamming_helps_on_asymmetric_channel(fig3):
    base = ctdma_rates(fig3, CtdmaParams(alpha=1.0, p1b=10.0))[0]
    jammed = ctdma_rates(fig3, CtdmaParams(alpha=1.0, p1b=10.0, p2j1=0.88))[0]
    assert jammed > base + 0.05


def test_ctdma_allocation_round_trip(fig2):
    params = CtdmaParams(alpha=0.4, p1b=20.0, p1j1=2.0, p2j1=1.0,
                         p2b=12.0, p2j2=0.5, p1j2=1.0)
    assert params.budget_violation(fig2) is None
    alloc = ctdma_allocation(params)
    assert validate_allocation(fig2, alloc).ok
    (w1, s1), (w2, s2) = alloc.states
    assert w1 == pytest.approx(0.4)
    assert s1.ps1 == 20.0 and s1.pj2 == 1.0
    assert s2.ps2 == 12.0 and s2.pj1 == 1.0
