"""Tests for the stimulus-combination rule and the motivation-degree curves.

Closed-form reference values were computed independently with exact
rational arithmetic (fractions.Fraction) over the curve definitions and
frozen here as literals; the grid-based properties cross-check the
implementation against those definitions at fine resolution.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from motivsim.motivation import (
    AlphaState,
    CombinationInputs,
    alpha_update,
    combine_activation,
    decrement_alpha,
    external_sum,
    increment_alpha,
    raw_activation,
)


def state(**kw):
    return AlphaState(**kw)


GRID = np.linspace(0.0, 1.0, 1000)


# --- external_sum -----------------------------------------------------------


def test_external_sum_empty_is_zero():
    assert external_sum([], []) == 0.0


def test_external_sum_single_term():
    assert external_sum([1.0], [0.9]) == 0.9


def test_external_sum_weighted_pair():
    assert external_sum([0.5, 0.5], [0.4, 0.8]) == pytest.approx(0.6)


def test_external_sum_rejects_length_mismatch():
    with pytest.raises(ValueError, match="lengths differ"):
        external_sum([1.0], [0.5, 0.5])


# --- combine_activation -----------------------------------------------------


def inputs(
    o_internal=0.0,
    fa_internal=1.0,
    o_external=(),
    fa_external=(),
    o_drive=0.0,
    fa_drive=0.2,
    alpha=0.0,
):
    return CombinationInputs(
        o_internal=o_internal,
        fa_internal=fa_internal,
        o_external=tuple(o_external),
        fa_external=tuple(fa_external),
        o_drive=o_drive,
        fa_drive=fa_drive,
        alpha=alpha,
    )


def test_no_internal_state_means_no_activation():
    got = combine_activation(
        inputs(alpha=0.0, o_internal=0.0, o_external=[0.9], fa_external=[1.0])
    )
    assert got == 0.0


def test_zero_alpha_and_no_signals_annihilate():
    assert combine_activation(inputs(alpha=0.0, o_internal=0.8)) == 0.0


def test_pure_need_activation_equals_alpha():
    assert combine_activation(inputs(alpha=0.7, o_internal=1.0)) == pytest.approx(0.7)


def test_activation_clamped_to_unit_interval():
    full = inputs(alpha=1.0, o_internal=1.0, o_external=[1.0], fa_external=[1.0], o_drive=1.0)
    assert raw_activation(full) == pytest.approx(2.2)
    assert combine_activation(full) == 1.0


def test_gating_needs_both_internal_state_and_signal():
    # With alpha pinned to 0 and no drive echo, activation vanishes whenever
    # either the need or the external evidence is missing; a 21x21x21 sweep
    # over the remaining inputs confirms both factors are required.
    levels = np.linspace(0.0, 1.0, 21)
    for o_i in levels:
        for o_e in levels:
            for fa_e in levels:
                got = combine_activation(
                    inputs(alpha=0.0, o_internal=o_i, o_external=[o_e], fa_external=[fa_e])
                )
                if o_i == 0.0 or o_e * fa_e == 0.0:
                    assert got == 0.0
                else:
                    assert got > 0.0


def test_satiety_zeroes_activation_despite_signals():
    for alpha in (0.0, 0.3, 1.0):
        got = combine_activation(
            inputs(alpha=alpha, o_internal=0.0, o_external=[1.0], fa_external=[1.0])
        )
        assert got == 0.0


def test_activation_linear_in_external_sum():
    # Slope with respect to the external sum must equal fa_internal * o_internal.
    o_i, fa_i, alpha = 0.6, 0.9, 0.4
    xs = np.linspace(0.0, 1.0, 11)
    ys = [
        raw_activation(
            inputs(alpha=alpha, o_internal=o_i, fa_internal=fa_i, o_external=[x], fa_external=[1.0])
        )
        for x in xs
    ]
    slopes = np.diff(ys) / np.diff(xs)
    assert np.allclose(slopes, fa_i * o_i, atol=1e-12)


def test_combination_inputs_validate_ranges():
    with pytest.raises(ValueError, match="o_internal"):
        inputs(o_internal=1.5)
    with pytest.raises(ValueError, match="o_external"):
        inputs(o_external=[-0.1], fa_external=[1.0])
    with pytest.raises(ValueError, match="lengths differ"):
        inputs(o_external=[0.5], fa_external=[])


# --- AlphaState validation ---------------------------------------------------


@pytest.mark.parametrize(
    "kw,msg",
    [
        (dict(alpha_min=1.0, alpha_max=0.0, alpha=0.5), "alpha_min must be below alpha_max"),
        (dict(alpha=1.5), r"alpha must lie in \[alpha_min, alpha_max\]"),
        (dict(delta=0.0), "delta must be positive"),
        (dict(rho=0.0), r"rho must lie in \(0, delta\)"),
        (dict(rho=200.0), r"rho must lie in \(0, delta\)"),
        (dict(theta=1.5), r"theta must lie in \[0, 1\]"),
        (dict(epsilon_ext=-1.0), "epsilon_ext must be non-negative"),
    ],
)
def test_alpha_state_rejects_bad_parameters(kw, msg):
    with pytest.raises(ValueError, match=msg):
        state(**kw)


def test_alpha_state_defaults():
    s = state()
    assert (s.alpha, s.alpha_min, s.alpha_max) == (0.7, 0.0, 1.0)
    assert (s.delta, s.rho, s.theta) == (100.0, 1.0, 0.5)
    assert s.epsilon_ext == 1e-6


# --- increment / decrement ---------------------------------------------------


def test_increment_from_floor_exact_value():
    # One stride up the rising curve from the floor lands at 1/((delta-rho)*delta).
    got = increment_alpha(state(alpha=0.0))
    assert got == pytest.approx(float(Fraction(1, 9900)), abs=1e-15)


def test_increment_at_ceiling_is_fixed_point():
    assert increment_alpha(state(alpha=1.0)) == 1.0


def test_decrement_from_ceiling_exact_value():
    got = decrement_alpha(state(alpha=1.0))
    assert got == pytest.approx(float(1 - Fraction(1, 9900)), abs=1e-15)


def test_decrement_at_floor_is_fixed_point():
    assert decrement_alpha(state(alpha=0.0)) == 0.0


def test_rise_reaches_ceiling_in_exactly_100_steps():
    s = state(alpha=0.0)
    steps = 0
    while s.alpha < 1.0:
        s = AlphaState(**{**s.__dict__, "alpha": increment_alpha(s)})
        steps += 1
        assert steps <= 100
    assert steps == 100


def test_fall_reaches_floor_in_exactly_100_steps():
    s = state(alpha=1.0)
    steps = 0
    while s.alpha > 0.0:
        s = AlphaState(**{**s.__dict__, "alpha": decrement_alpha(s)})
        steps += 1
        assert steps <= 100
    assert steps == 100


def test_updates_stay_inside_bounds_on_grid():
    for a in GRID:
        s = state(alpha=float(a))
        up, down = increment_alpha(s), decrement_alpha(s)
        assert 0.0 <= up <= 1.0
        assert 0.0 <= down <= 1.0


def test_strict_progress_on_grid():
    for a in GRID:
        s = state(alpha=float(a))
        if a < 1.0:
            assert increment_alpha(s) > a
        if a > 0.0:
            assert decrement_alpha(s) < a


def test_updates_monotone_in_alpha():
    ups = [increment_alpha(state(alpha=float(a))) for a in GRID]
    downs = [decrement_alpha(state(alpha=float(a))) for a in GRID]
    assert all(b >= a for a, b in zip(ups, ups[1:]))
    assert all(b >= a for a, b in zip(downs, downs[1:]))


def test_fall_mirrors_rise_on_grid():
    # The falling curve is the rising curve reflected through the midpoint:
    # stepping down from alpha equals 1 - (step up from 1 - alpha).
    for a in GRID:
        down = decrement_alpha(state(alpha=float(a)))
        mirrored = 1.0 - increment_alpha(state(alpha=float(1.0 - a)))
        assert down == pytest.approx(mirrored, abs=1e-9)


def test_rise_outpaces_fall_above_midpoint_and_dually_below():
    # Near the ceiling the rising curve is steep while the falling curve is
    # flat, so a motivated column loses motivation much more slowly than it
    # gained it -- and symmetrically near the floor.  Checked on an interior
    # grid with a stride small enough that neither step clips at a bound.
    s0 = state(alpha=0.0, rho=0.5)
    for a in np.linspace(0.0, 1.0, 1002)[1:-1]:
        s = AlphaState(**{**s0.__dict__, "alpha": float(a)})
        up = increment_alpha(s) - s.alpha
        down = s.alpha - decrement_alpha(s)
        if a - 0.0 > 1.0 - a:
            assert up > down
        elif 1.0 - a > a - 0.0:
            assert down > up


def test_pole_overshoot_saturates():
    # A stride that crosses the curve's pole must land exactly on the bound,
    # not on the far branch of the hyperbola.
    s = state(alpha=0.999999, delta=10.0, rho=9.9)
    assert increment_alpha(s) == 1.0
    s = state(alpha=1e-6, delta=10.0, rho=9.9)
    assert decrement_alpha(s) == 0.0


def test_custom_band_respects_its_own_bounds():
    s = state(alpha=0.25, alpha_min=0.2, alpha_max=0.8)
    for _ in range(500):
        s = AlphaState(**{**s.__dict__, "alpha": increment_alpha(s)})
    assert s.alpha == 0.8
    for _ in range(500):
        s = AlphaState(**{**s.__dict__, "alpha": decrement_alpha(s)})
    assert s.alpha == 0.2


# --- alpha_update ------------------------------------------------------------


def test_frustration_raises_alpha():
    s = state(alpha=0.7, theta=0.5)
    out = alpha_update(s, o_internal=0.9, ext_sum=0.0)
    assert out.alpha > 0.7


def test_easy_living_lowers_alpha():
    s = state(alpha=0.7, theta=0.5)
    out = alpha_update(s, o_internal=0.1, ext_sum=0.8)
    assert out.alpha < 0.7


def test_need_with_signal_leaves_alpha_unchanged():
    s = state(alpha=0.7, theta=0.5)
    out = alpha_update(s, o_internal=0.9, ext_sum=0.8)
    assert out is s


def test_no_need_no_signal_leaves_alpha_unchanged():
    s = state(alpha=0.7, theta=0.5)
    out = alpha_update(s, o_internal=0.1, ext_sum=0.0)
    assert out is s


def test_alpha_update_treats_faint_signal_as_absent():
    s = state(alpha=0.5, theta=0.5, epsilon_ext=1e-6)
    assert alpha_update(s, o_internal=0.9, ext_sum=1e-7).alpha > 0.5
    assert alpha_update(s, o_internal=0.9, ext_sum=1e-5) is s


def test_alpha_update_validates_inputs():
    s = state()
    with pytest.raises(ValueError, match="o_internal"):
        alpha_update(s, o_internal=-0.1, ext_sum=0.0)
    with pytest.raises(ValueError, match="ext_sum"):
        alpha_update(s, o_internal=0.5, ext_sum=-1.0)


def test_alpha_update_only_touches_alpha():
    s = state(alpha=0.7, rho=0.25, theta=0.4)
    out = alpha_update(s, o_internal=0.9, ext_sum=0.0)
    assert (out.alpha_min, out.alpha_max, out.delta, out.rho, out.theta) == (
        s.alpha_min,
        s.alpha_max,
        s.delta,
        s.rho,
        s.theta,
    )
