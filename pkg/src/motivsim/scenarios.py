"""Scenario documents: schema validation, defaults, built-ins, world building.

A scenario is a JSON document with top-level keys `world`, `entities`,
`animats`, `phases`, `seed` and `ticks`.  Loading validates every field
and fills defaults, so a loaded scenario round-trips through to_dict()
into a fully explicit document; that normalized form rides along in trace
headers and makes replays self-contained.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from .motivation import AlphaState
from .network import BecaNetwork, NetworkConfig, default_columns
from .world import Animat, Entity, EntityKind, PhysiologyRates, World

DEFAULT_TICKS = 1000
DEFAULT_WORLD_SIZE = 100.0

ALPHA_FIELDS = ("alpha", "alpha_min", "alpha_max", "delta", "rho", "theta", "epsilon_ext")
COLUMN_IDS = ("hunger", "thirst", "fatigue")
NETWORK_FIELDS = (
    "persistence_decay",
    "activation_floor",
    "explore_threshold",
    "obstacle_reflex_threshold",
    "fa_internal",
    "fa_drive",
    "interact_range",
)
PHYSIOLOGY_FIELDS = (
    "hunger_growth",
    "thirst_growth",
    "fatigue_growth",
    "eat_relief",
    "drink_relief",
    "rest_relief",
    "quality_blend",
)


class ScenarioError(ValueError):
    """A scenario document failed validation; the message names the field."""


def _fail(path: str, message: str) -> None:
    raise ScenarioError(f"{path}: {message}")


def _check_mapping(value: Any, path: str, allowed: tuple[str, ...]) -> dict:
    if not isinstance(value, dict):
        _fail(path, "must be an object")
    for key in value:
        if key not in allowed:
            _fail(f"{path}.{key}", "unknown field")
    return value


def _number(obj: Mapping, key: str, path: str, default: float | None = None,
            lo: float | None = None, hi: float | None = None) -> float:
    if key not in obj:
        if default is None:
            _fail(f"{path}.{key}", "required field missing")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(f"{path}.{key}", "must be a number")
    value = float(value)
    if math.isnan(value):
        _fail(f"{path}.{key}", "must not be NaN")
    if lo is not None and value < lo:
        _fail(f"{path}.{key}", f"must be >= {lo}")
    if hi is not None and value > hi:
        _fail(f"{path}.{key}", f"must be <= {hi}")
    return value


def _integer(obj: Mapping, key: str, path: str, default: int | None = None,
             lo: int | None = None, hi: int | None = None) -> int:
    if key not in obj:
        if default is None:
            _fail(f"{path}.{key}", "required field missing")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(f"{path}.{key}", "must be an integer")
    if lo is not None and value < lo:
        _fail(f"{path}.{key}", f"must be >= {lo}")
    if hi is not None and value > hi:
        _fail(f"{path}.{key}", f"must be <= {hi}")
    return value


@dataclass
class EntitySpec:
    kind: str
    x: float
    y: float
    radius: float
    magnitude: float

    def to_dict(self) -> dict:
        magnitude = None if math.isinf(self.magnitude) else self.magnitude
        return {"kind": self.kind, "x": self.x, "y": self.y,
                "radius": self.radius, "magnitude": magnitude}


@dataclass
class AnimatSpec:
    x: float
    y: float
    heading: float
    speed: float
    perception_radius: float
    internal: dict[str, float]
    alpha: dict[str, dict[str, float]]

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "heading": self.heading, "speed": self.speed,
                "perception_radius": self.perception_radius,
                "internal": dict(self.internal),
                "alpha": {col: dict(params) for col, params in self.alpha.items()}}


@dataclass
class Phase:
    ticks: int
    reset_internal: dict[str, float] | None = None
    entities: list[EntitySpec] | None = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"ticks": self.ticks}
        if self.reset_internal is not None:
            out["reset_internal"] = dict(self.reset_internal)
        if self.entities is not None:
            out["entities"] = [e.to_dict() for e in self.entities]
        return out


@dataclass
class Scenario:
    name: str
    seed: int
    width: float
    height: float
    entities: list[EntitySpec]
    animats: list[AnimatSpec]
    phases: list[Phase]
    network: dict[str, float] = field(default_factory=dict)
    physiology: dict[str, float] = field(default_factory=dict)

    @property
    def total_ticks(self) -> int:
        return sum(phase.ticks for phase in self.phases)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "world": {"width": self.width, "height": self.height},
            "entities": [e.to_dict() for e in self.entities],
            "animats": [a.to_dict() for a in self.animats],
            "phases": [p.to_dict() for p in self.phases],
            "network": dict(self.network),
            "physiology": dict(self.physiology),
        }


def _parse_entity(obj: Any, path: str, width: float, height: float) -> EntitySpec:
    _check_mapping(obj, path, ("kind", "x", "y", "radius", "magnitude"))
    kind = obj.get("kind")
    valid_kinds = tuple(k.value for k in EntityKind)
    if kind not in valid_kinds:
        _fail(f"{path}.kind", f"must be one of {', '.join(valid_kinds)}")
    x = _number(obj, "x", path, lo=0.0, hi=width)
    y = _number(obj, "y", path, lo=0.0, hi=height)
    radius = _number(obj, "radius", path, default=1.0)
    if radius <= 0.0:
        _fail(f"{path}.radius", "must be positive")
    if "magnitude" in obj and obj["magnitude"] is None:
        magnitude = math.inf
    else:
        magnitude = _number(obj, "magnitude", path, default=math.inf, lo=0.0)
    return EntitySpec(kind=kind, x=x, y=y, radius=radius, magnitude=magnitude)


def _parse_alpha_params(obj: Any, path: str) -> dict[str, float]:
    _check_mapping(obj, path, ALPHA_FIELDS)
    params = {
        "alpha": _number(obj, "alpha", path, default=AlphaState.alpha),
        "alpha_min": _number(obj, "alpha_min", path, default=AlphaState.alpha_min),
        "alpha_max": _number(obj, "alpha_max", path, default=AlphaState.alpha_max),
        "delta": _number(obj, "delta", path, default=AlphaState.delta),
        "rho": _number(obj, "rho", path, default=AlphaState.rho),
        "theta": _number(obj, "theta", path, default=AlphaState.theta),
        "epsilon_ext": _number(obj, "epsilon_ext", path, default=AlphaState.epsilon_ext),
    }
    try:
        AlphaState(**params)
    except ValueError as exc:
        message = str(exc)
        fname = message.split()[0] if message else "alpha"
        _fail(f"{path}.{fname}", message)
    return params


def _parse_animat(obj: Any, path: str, width: float, height: float) -> AnimatSpec:
    _check_mapping(
        obj, path,
        ("x", "y", "heading", "speed", "perception_radius", "internal", "alpha"),
    )
    x = _number(obj, "x", path, default=width / 2.0, lo=0.0, hi=width)
    y = _number(obj, "y", path, default=height / 2.0, lo=0.0, hi=height)
    heading = _number(obj, "heading", path, default=0.0)
    speed = _number(obj, "speed", path, default=1.0)
    if speed <= 0.0:
        _fail(f"{path}.speed", "must be positive")
    perception = _number(obj, "perception_radius", path, default=10.0)
    if perception <= 0.0:
        _fail(f"{path}.perception_radius", "must be positive")
    internal_obj = _check_mapping(obj.get("internal", {}), f"{path}.internal", COLUMN_IDS)
    internal = {
        col: _number(internal_obj, col, f"{path}.internal", default=0.0, lo=0.0, hi=1.0)
        for col in COLUMN_IDS
    }
    alpha_obj = _check_mapping(obj.get("alpha", {}), f"{path}.alpha", COLUMN_IDS)
    alpha = {
        col: _parse_alpha_params(alpha_obj.get(col, {}), f"{path}.alpha.{col}")
        for col in COLUMN_IDS
    }
    return AnimatSpec(x=x, y=y, heading=heading, speed=speed, perception_radius=perception,
                      internal=internal, alpha=alpha)


def _parse_phase(obj: Any, path: str, first: bool, width: float, height: float) -> Phase:
    _check_mapping(obj, path, ("ticks", "reset_internal", "entities"))
    ticks = _integer(obj, "ticks", path, lo=1)
    reset_internal = None
    entities = None
    if "reset_internal" in obj:
        if first:
            _fail(f"{path}.reset_internal", "the first phase cannot reset state")
        reset_obj = _check_mapping(obj["reset_internal"], f"{path}.reset_internal", COLUMN_IDS)
        reset_internal = {
            col: _number(reset_obj, col, f"{path}.reset_internal", lo=0.0, hi=1.0)
            for col in reset_obj
        }
    if "entities" in obj:
        if first:
            _fail(f"{path}.entities", "the first phase cannot swap entities")
        if not isinstance(obj["entities"], list):
            _fail(f"{path}.entities", "must be a list")
        entities = [
            _parse_entity(item, f"{path}.entities[{i}]", width, height)
            for i, item in enumerate(obj["entities"])
        ]
    return Phase(ticks=ticks, reset_internal=reset_internal, entities=entities)


def scenario_from_dict(doc: Any, name: str = "custom") -> Scenario:
    """Validate a parsed scenario document and fill every default."""
    if not isinstance(doc, dict):
        raise ScenarioError("document root: must be an object")
    _check_mapping(
        doc, "document root",
        ("name", "seed", "ticks", "world", "entities", "animats", "phases",
         "network", "physiology"),
    )
    if "name" in doc:
        if not isinstance(doc["name"], str) or not doc["name"]:
            _fail("name", "must be a non-empty string")
        name = doc["name"]
    seed = _integer(doc, "seed", "document root", default=1, lo=0, hi=2**64 - 1)
    world_obj = _check_mapping(doc.get("world", {}), "world", ("width", "height"))
    width = _number(world_obj, "width", "world", default=DEFAULT_WORLD_SIZE)
    height = _number(world_obj, "height", "world", default=DEFAULT_WORLD_SIZE)
    if width <= 0.0 or height <= 0.0:
        _fail("world.width" if width <= 0.0 else "world.height", "must be positive")

    if not isinstance(doc.get("entities", []), list):
        _fail("entities", "must be a list")
    entities = [
        _parse_entity(item, f"entities[{i}]", width, height)
        for i, item in enumerate(doc.get("entities", []))
    ]

    animats_doc = doc.get("animats", [{}])
    if not isinstance(animats_doc, list) or not animats_doc:
        _fail("animats", "must be a non-empty list")
    animats = [
        _parse_animat(item, f"animats[{i}]", width, height)
        for i, item in enumerate(animats_doc)
    ]

    if "phases" in doc:
        if "ticks" in doc:
            _fail("ticks", "give either ticks or phases, not both")
        phases_doc = doc["phases"]
        if not isinstance(phases_doc, list) or not phases_doc:
            _fail("phases", "must be a non-empty list")
        phases = [
            _parse_phase(item, f"phases[{i}]", i == 0, width, height)
            for i, item in enumerate(phases_doc)
        ]
    else:
        ticks = _integer(doc, "ticks", "document root", default=DEFAULT_TICKS, lo=1)
        phases = [Phase(ticks=ticks)]

    network = _check_mapping(doc.get("network", {}), "network", NETWORK_FIELDS)
    network = {key: _number(network, key, "network") for key in network}
    try:
        NetworkConfig(**network)
    except TypeError as exc:
        _fail("network", str(exc))

    physiology = _check_mapping(doc.get("physiology", {}), "physiology", PHYSIOLOGY_FIELDS)
    physiology = {key: _number(physiology, key, "physiology", lo=0.0) for key in physiology}

    return Scenario(name=name, seed=seed, width=width, height=height, entities=entities,
                    animats=animats, phases=phases, network=network, physiology=physiology)


def load_scenario(text: str, name: str = "custom") -> Scenario:
    """Parse and validate a scenario document from JSON text."""
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(doc, name=name)


def build_entity(spec: EntitySpec) -> Entity:
    return Entity(kind=EntityKind(spec.kind), x=spec.x, y=spec.y,
                  radius=spec.radius, magnitude=spec.magnitude)


def build(scenario: Scenario, seed: int | None = None) -> tuple[World, list[Animat]]:
    """Construct the initial world and animats for a scenario."""
    world = World(
        width=scenario.width,
        height=scenario.height,
        entities=[build_entity(spec) for spec in scenario.entities],
        rng_seed=scenario.seed if seed is None else seed,
    )
    config = NetworkConfig(**scenario.network)
    rates = PhysiologyRates(**scenario.physiology)
    animats = []
    for index, spec in enumerate(scenario.animats):
        alpha_states = {col: AlphaState(**params) for col, params in spec.alpha.items()}
        network = BecaNetwork(columns=default_columns(alpha_states, config), config=config)
        animats.append(
            Animat(
                id=index,
                x=spec.x,
                y=spec.y,
                heading=spec.heading,
                speed=spec.speed,
                perception_radius=spec.perception_radius,
                internal=dict(spec.internal),
                rates=rates,
                network=network,
            )
        )
    return world, animats


def _alpha_block(hunger_alpha: float, rho: float, others: float = 0.3) -> dict:
    return {
        "hunger": {"alpha": hunger_alpha, "rho": rho},
        "thirst": {"alpha": others, "rho": rho},
        "fatigue": {"alpha": others, "rho": rho},
    }


BUILTIN_RHO = 0.025

_SCARCE = {
    "name": "scarce_food",
    "seed": 1,
    "ticks": 2000,
    "world": {"width": 100, "height": 100},
    "entities": [
        {"kind": "water_source", "x": 80, "y": 20, "radius": 2.0},
        {"kind": "spot", "x": 20, "y": 80, "radius": 3.0, "magnitude": 1.0},
        {"kind": "grass", "x": 92, "y": 92, "radius": 1.5, "magnitude": 4.0},
    ],
    "animats": [
        {"x": 50, "y": 50, "internal": {"hunger": 0.95},
         "alpha": _alpha_block(0.7, BUILTIN_RHO)},
    ],
}

_ABUNDANT = {
    "name": "abundant_food",
    "seed": 1,
    "ticks": 2000,
    "world": {"width": 100, "height": 100},
    "entities": [
        # Four broad meadows whose percept fields jointly cover the whole
        # arena: food is in view from everywhere, so hunger never builds
        # while blind.
        {"kind": "food_source", "x": 25, "y": 25, "radius": 30.0},
        {"kind": "food_source", "x": 75, "y": 25, "radius": 30.0},
        {"kind": "food_source", "x": 25, "y": 75, "radius": 30.0},
        {"kind": "food_source", "x": 75, "y": 75, "radius": 30.0},
    ],
    "animats": [
        {"x": 44, "y": 42, "internal": {"hunger": 0.95},
         "alpha": _alpha_block(0.7, BUILTIN_RHO, others=0.0)},
    ],
}

_WALL = [
    {"kind": "obstacle", "x": 100, "y": y, "radius": 5.0}
    for y in list(range(0, 97, 8)) + [100]
]

_REUNION = {
    "name": "reunion",
    "seed": 1,
    "world": {"width": 200, "height": 100},
    "entities": _WALL
    + [
        {"kind": "water_source", "x": 20, "y": 70, "radius": 2.0},
        {"kind": "water_source", "x": 185, "y": 85, "radius": 2.0},
        {"kind": "spot", "x": 15, "y": 15, "radius": 3.0, "magnitude": 1.0},
        {"kind": "spot", "x": 110, "y": 90, "radius": 3.0, "magnitude": 1.0},
    ]
    + [
        {"kind": "food_source", "x": 115, "y": 25, "radius": 3.0},
        {"kind": "food_source", "x": 115, "y": 75, "radius": 3.0},
        {"kind": "food_source", "x": 145, "y": 25, "radius": 3.0},
        {"kind": "food_source", "x": 145, "y": 75, "radius": 3.0},
        {"kind": "food_source", "x": 175, "y": 50, "radius": 3.0},
        {"kind": "food_source", "x": 150, "y": 40, "radius": 3.0},
        {"kind": "grass", "x": 160, "y": 65, "radius": 1.5, "magnitude": 6.0},
    ],
    "animats": [
        {"x": 50, "y": 50, "internal": {"hunger": 0.95}, "alpha": _alpha_block(0.7, BUILTIN_RHO)},
        {"x": 150, "y": 50, "internal": {"hunger": 0.95}, "alpha": _alpha_block(0.7, BUILTIN_RHO)},
    ],
    "phases": [
        {"ticks": 2000},
        {
            "ticks": 500,
            "reset_internal": {"hunger": 0.6, "thirst": 0.0, "fatigue": 0.0},
            "entities": [],
        },
    ],
}

_UI_DEMO = {
    "name": "ui_demo",
    "seed": 1,
    "ticks": 100000,
    "world": {"width": 100, "height": 100},
    "entities": [
        {"kind": "water_source", "x": 80, "y": 80, "radius": 2.0},
    ],
    "animats": [
        {"x": 50, "y": 50, "internal": {"hunger": 0.95}, "alpha": _alpha_block(0.7, BUILTIN_RHO)},
    ],
}

BUILTIN_SCENARIOS: dict[str, dict] = {
    "scarce_food": _SCARCE,
    "abundant_food": _ABUNDANT,
    "reunion": _REUNION,
    "ui_demo": _UI_DEMO,
}


def builtin_scenario(name: str) -> Scenario:
    if name not in BUILTIN_SCENARIOS:
        raise KeyError(name)
    return scenario_from_dict(BUILTIN_SCENARIOS[name], name=name)


def list_scenarios() -> list[str]:
    return sorted(BUILTIN_SCENARIOS)
