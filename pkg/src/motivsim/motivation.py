"""Scalar math for motivated stimulus combination and its slow adaptation.

The combination rule merges an internal need signal with external stimulus
signals and a drive feedback term into one activation certainty.  The
motivation degree alpha weights how far the internal need alone can push
that certainty: a high alpha lets a need drive behaviour with no external
evidence at all, a low alpha makes the column wait for opportunities.

alpha itself adapts between a floor and a ceiling along two mirrored
hyperbolic curves.  Rises start fast and flatten near the ceiling, falls
mirror them exactly, so repeated frustration or repeated easy satisfaction
shifts future selection gradually instead of on a single sample.  Both
updates advance position along the curve by a fixed stride, which keeps
the number of updates needed to traverse the whole range finite and
parameter-controlled.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

DEFAULT_ALPHA = 0.7
DEFAULT_ALPHA_MIN = 0.0
DEFAULT_ALPHA_MAX = 1.0
DEFAULT_DELTA = 100.0
DEFAULT_RHO = 1.0
DEFAULT_THETA = 0.5
DEFAULT_EPSILON_EXT = 1e-6


@dataclass(frozen=True)
class AlphaState:
    """Motivation degree of one behavioural column plus its adaptation knobs.

    delta is the pole of both adaptation curves (larger values flatten
    them), rho the stride taken along the curve per update, theta the need
    threshold above which scarcity counts as frustration, and epsilon_ext
    the external-signal level below which the surroundings count as empty.
    """

    alpha: float = DEFAULT_ALPHA
    alpha_min: float = DEFAULT_ALPHA_MIN
    alpha_max: float = DEFAULT_ALPHA_MAX
    delta: float = DEFAULT_DELTA
    rho: float = DEFAULT_RHO
    theta: float = DEFAULT_THETA
    epsilon_ext: float = DEFAULT_EPSILON_EXT

    def __post_init__(self) -> None:
        if not self.alpha_min < self.alpha_max:
            raise ValueError("alpha_min must be below alpha_max")
        if not self.alpha_min <= self.alpha <= self.alpha_max:
            raise ValueError("alpha must lie in [alpha_min, alpha_max]")
        if self.delta <= 0.0:
            raise ValueError("delta must be positive")
        if not 0.0 < self.rho < self.delta:
            raise ValueError("rho must lie in (0, delta)")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [0, 1]")
        if self.epsilon_ext < 0.0:
            raise ValueError("epsilon_ext must be non-negative")


@dataclass(frozen=True)
class CombinationInputs:
    """One column's signals for a single combination step.

    o_external and fa_external are parallel sequences, one slot per
    external stimulus signal currently feeding the column.
    """

    o_internal: float
    fa_internal: float
    o_external: Sequence[float]
    fa_external: Sequence[float]
    o_drive: float
    fa_drive: float
    alpha: float

    def __post_init__(self) -> None:
        if len(self.o_external) != len(self.fa_external):
            raise ValueError("o_external and fa_external lengths differ")
        for name in ("o_internal", "fa_internal", "o_drive", "fa_drive"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        for name in ("o_external", "fa_external"):
            for value in getattr(self, name):
                if not 0.0 <= value <= 1.0:
                    raise ValueError(f"{name} values must lie in [0, 1]")


def external_sum(fa_external: Sequence[float], o_external: Sequence[float]) -> float:
    """Coupling-weighted sum of the external stimulus signals."""
    if len(fa_external) != len(o_external):
        raise ValueError("fa_external and o_external lengths differ")
    return sum(fa * o for fa, o in zip(fa_external, o_external))


def raw_activation(inputs: CombinationInputs) -> float:
    """Combined activation before clamping, linear in the external sum."""
    ext = external_sum(inputs.fa_external, inputs.o_external)
    return (
        inputs.fa_internal * inputs.o_internal * (inputs.alpha + ext)
        + inputs.fa_drive * inputs.o_drive
    )


def combine_activation(inputs: CombinationInputs) -> float:
    """Combined activation clamped to [0, 1] so it reads as a certainty."""
    return min(1.0, max(0.0, raw_activation(inputs)))


def _rise(state: AlphaState, x: float) -> float:
    """Value of the rising curve at position x; anchored at alpha_min for x=0."""
    return 1.0 / (state.delta - x) + state.alpha_min - 1.0 / state.delta


def _rise_position(state: AlphaState, alpha: float) -> float:
    """Position on the rising curve where it takes the value alpha."""
    return state.delta - 1.0 / (alpha - state.alpha_min + 1.0 / state.delta)


def _fall(state: AlphaState, x: float) -> float:
    """Value of the falling curve at position x; anchored at alpha_max for x=0."""
    return state.alpha_max + 1.0 / state.delta - 1.0 / (state.delta - x)


def _fall_position(state: AlphaState, alpha: float) -> float:
    """Position on the falling curve where it takes the value alpha."""
    return state.delta - 1.0 / (state.alpha_max + 1.0 / state.delta - alpha)


def increment_alpha(state: AlphaState) -> float:
    """One reinforcement step up the rising curve, capped at alpha_max."""
    x = _rise_position(state, state.alpha) + state.rho
    if x >= state.delta:
        # Stepped past the pole: the curve value would exceed any ceiling.
        return state.alpha_max
    return min(_rise(state, x), state.alpha_max)


def decrement_alpha(state: AlphaState) -> float:
    """One extinction step down the falling curve, capped at alpha_min."""
    x = _fall_position(state, state.alpha) + state.rho
    if x >= state.delta:
        return state.alpha_min
    return max(_fall(state, x), state.alpha_min)


def alpha_update(state: AlphaState, o_internal: float, ext_sum: float) -> AlphaState:
    """Adapt alpha from one tick's evidence.

    A need above theta with no external signal worth epsilon_ext is
    frustration and raises alpha; a need at or below theta while signals
    are present is easy living and lowers it.  Every other combination
    leaves alpha untouched.
    """
    if not 0.0 <= o_internal <= 1.0:
        raise ValueError("o_internal must lie in [0, 1]")
    if ext_sum < 0.0:
        raise ValueError("ext_sum must be non-negative")
    if o_internal > state.theta and ext_sum <= state.epsilon_ext:
        return replace(state, alpha=increment_alpha(state))
    if o_internal <= state.theta and ext_sum > state.epsilon_ext:
        return replace(state, alpha=decrement_alpha(state))
    return state
