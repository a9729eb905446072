"""Deterministic animat action-selection simulator with adaptive motivation degrees."""

from .motivation import (
    AlphaState,
    CombinationInputs,
    alpha_update,
    combine_activation,
    decrement_alpha,
    external_sum,
    increment_alpha,
    raw_activation,
)
from .network import BecaNetwork, BehaviouralColumn, NetworkConfig, default_network
from .world import Animat, Entity, EntityKind, MotorBehavior, Percept, TraceRecord, World

__all__ = [
    "AlphaState",
    "CombinationInputs",
    "alpha_update",
    "combine_activation",
    "decrement_alpha",
    "external_sum",
    "increment_alpha",
    "raw_activation",
    "BecaNetwork",
    "BehaviouralColumn",
    "NetworkConfig",
    "default_network",
    "Animat",
    "Entity",
    "EntityKind",
    "MotorBehavior",
    "Percept",
    "TraceRecord",
    "World",
]

__version__ = "0.1.0"
