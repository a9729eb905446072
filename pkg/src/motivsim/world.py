"""Flat 2D world hosting animats, stimulus sources and obstacles.

Continuous coordinates, discrete time.  Each tick an animat senses the
strongest source of every stimulus kind, lets its selection network pick a
motor behaviour, moves (or stays put for consummatory acts), then pays the
physiological cost of the tick.  All randomness flows through one seeded
generator owned by the world, so a run is a pure function of its seed.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .network import BecaNetwork

logger = logging.getLogger(__name__)

TICK_DURATION = 1.0
INTERACT_RANGE = 1.0
CONTAINMENT_EPS = 1e-9

EXPLORE_GRID = 10
EXPLORE_BLOCKED_PENALTY = 1000.0
EXPLORE_VISIT_WEIGHT = 10.0

MAX_TURN = 0.5
WANDER_JITTER = 0.3
EXPLORE_JITTER = 0.1


class EntityKind(str, Enum):
    FOOD = "food_source"
    WATER = "water_source"
    GRASS = "grass"
    SPOT = "spot"
    BLOB = "blob"
    OBSTACLE = "obstacle"


class MotorBehavior(str, Enum):
    WANDER = "wander"
    EXPLORE = "explore"
    APPROACH = "approach"
    AVOID_OBSTACLES = "avoid_obstacles"
    REST = "rest"
    EAT = "eat"
    DRINK = "drink"
    RUNAWAY = "runaway"


MOVING_BEHAVIORS = frozenset(
    {
        MotorBehavior.WANDER,
        MotorBehavior.EXPLORE,
        MotorBehavior.APPROACH,
        MotorBehavior.AVOID_OBSTACLES,
        MotorBehavior.RUNAWAY,
    }
)

EDIBLE_KINDS = {EntityKind.FOOD: 1.0, EntityKind.GRASS: 0.5}


@dataclass
class Entity:
    """A circular thing in the world; magnitude is resource stock or potency."""

    kind: EntityKind
    x: float
    y: float
    radius: float
    magnitude: float = math.inf
    id: int = -1

    def __post_init__(self) -> None:
        self.kind = EntityKind(self.kind)
        if self.radius <= 0.0:
            raise ValueError("radius must be positive")
        if self.magnitude < 0.0 or math.isnan(self.magnitude):
            raise ValueError("magnitude must be non-negative")


@dataclass(frozen=True)
class Percept:
    """Strongest detected source of one stimulus kind.

    distance is from the animat to the entity surface and goes negative
    when the animat stands inside the entity.
    """

    kind: EntityKind
    intensity: float
    bearing: float
    distance: float


@dataclass(frozen=True)
class PhysiologyRates:
    hunger_growth: float = 0.002
    thirst_growth: float = 0.003
    fatigue_growth: float = 0.001
    eat_relief: float = 0.02
    drink_relief: float = 0.02
    rest_relief: float = 0.01
    quality_blend: float = 0.99


@dataclass
class Animat:
    """One embodied agent: pose, needs, derived qualities and its network."""

    id: int
    x: float
    y: float
    heading: float = 0.0
    speed: float = 1.0
    perception_radius: float = 10.0
    internal: dict[str, float] = field(
        default_factory=lambda: {"hunger": 0.0, "thirst": 0.0, "fatigue": 0.0}
    )
    strength: float = 1.0
    lucidity: float = 1.0
    rates: PhysiologyRates = field(default_factory=PhysiologyRates)
    network: "BecaNetwork | None" = None
    visits: dict[tuple[int, int], int] = field(default_factory=dict)


@dataclass
class TraceRecord:
    """Full observable state of one animat after one completed tick."""

    tick: int
    animat: int
    x: float
    y: float
    heading: float
    behavior: str
    alpha: dict[str, float]
    activation: dict[str, float]
    internal: dict[str, float]
    strength: float
    lucidity: float


@dataclass
class World:
    width: float
    height: float
    entities: list[Entity] = field(default_factory=list)
    rng_seed: int = 1
    tick: int = 0
    rng: random.Random = field(init=False, repr=False)
    _next_entity_id: int = field(default=0, repr=False)

    def __post_init__(self) -> None:
        if self.width <= 0.0 or self.height <= 0.0:
            raise ValueError("world dimensions must be positive")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must fit in 64 bits")
        self.rng = random.Random(self.rng_seed)
        given = self.entities
        self.entities = []
        for entity in given:
            self.add_entity(entity)

    def add_entity(self, entity: Entity) -> Entity:
        if not (0.0 <= entity.x <= self.width and 0.0 <= entity.y <= self.height):
            raise ValueError("entity position out of bounds")
        entity.id = self._next_entity_id
        self._next_entity_id += 1
        self.entities.append(entity)
        return entity

    def remove_entity(self, entity_id: int) -> bool:
        for i, entity in enumerate(self.entities):
            if entity.id == entity_id:
                del self.entities[i]
                return True
        return False

    def replace_entities(self, entities: list[Entity]) -> None:
        """Swap the full entity set, keeping the id sequence monotonic."""
        self.entities = []
        for entity in entities:
            self.add_entity(entity)


def surface_distance(animat: Animat, entity: Entity) -> float:
    return math.hypot(entity.x - animat.x, entity.y - animat.y) - entity.radius


def sense(world: World, animat: Animat) -> list[Percept]:
    """Strongest percept per stimulus kind within the perception radius.

    Intensity falls linearly from 1 at the entity surface to 0 at the
    perception radius.  Kinds with nothing detectable yield no percept.
    """
    best: dict[EntityKind, tuple[float, Entity, float]] = {}
    for entity in world.entities:
        if entity.magnitude <= 0.0:
            continue
        d = surface_distance(animat, entity)
        intensity = min(1.0, max(0.0, 1.0 - d / animat.perception_radius))
        if intensity <= 0.0:
            continue
        current = best.get(entity.kind)
        if current is None or intensity > current[0]:
            best[entity.kind] = (intensity, entity, d)
    percepts = []
    for kind in EntityKind:
        found = best.get(kind)
        if found is None:
            continue
        intensity, entity, d = found
        bearing = math.atan2(entity.y - animat.y, entity.x - animat.x)
        percepts.append(Percept(kind=kind, intensity=intensity, bearing=bearing, distance=d))
    return percepts


def _nearest_in_range(world: World, animat: Animat, kinds: set[EntityKind]) -> Entity | None:
    best: Entity | None = None
    best_d = INTERACT_RANGE
    for entity in world.entities:
        if entity.kind not in kinds or entity.magnitude <= 0.0:
            continue
        d = surface_distance(animat, entity)
        if d <= best_d:
            best = entity
            best_d = d
    return best


def _clamp01(value: float) -> float:
    return min(1.0, max(0.0, value))


def physiology_step(world: World, animat: Animat, behavior: MotorBehavior) -> Animat:
    """Apply one tick of need growth, consumption relief and quality decay.

    A consummatory act replaces its own need's growth for the tick; the
    other needs keep accruing.  Consuming decrements the source's stock by
    one unit when it is finite.
    """
    rates = animat.rates
    internal = animat.internal

    ate = drank = rested = False
    if behavior is MotorBehavior.EAT:
        target = _nearest_in_range(world, animat, set(EDIBLE_KINDS))
        if target is None:
            logger.warning("animat %d selected eat with no edible in range", animat.id)
        else:
            internal["hunger"] -= rates.eat_relief * EDIBLE_KINDS[target.kind]
            if not math.isinf(target.magnitude):
                target.magnitude -= 1.0
            ate = True
    elif behavior is MotorBehavior.DRINK:
        target = _nearest_in_range(world, animat, {EntityKind.WATER})
        if target is None:
            logger.warning("animat %d selected drink with no water in range", animat.id)
        else:
            internal["thirst"] -= rates.drink_relief
            if not math.isinf(target.magnitude):
                target.magnitude -= 1.0
            drank = True
    elif behavior is MotorBehavior.REST:
        target = _nearest_in_range(world, animat, {EntityKind.SPOT})
        if target is None:
            logger.warning("animat %d selected rest with no spot in range", animat.id)
        else:
            factor = 1.0 if math.isinf(target.magnitude) else min(target.magnitude, 4.0)
            internal["fatigue"] -= rates.rest_relief * factor
            rested = True

    if not ate:
        internal["hunger"] += rates.hunger_growth
    if not drank:
        internal["thirst"] += rates.thirst_growth
    if not rested and behavior in MOVING_BEHAVIORS:
        internal["fatigue"] += rates.fatigue_growth

    for key in internal:
        internal[key] = _clamp01(internal[key])

    blend = rates.quality_blend
    strength_target = 1.0 - max(internal["hunger"], internal["thirst"])
    lucidity_target = 1.0 - internal["fatigue"]
    animat.strength = _clamp01(blend * animat.strength + (1.0 - blend) * strength_target)
    animat.lucidity = _clamp01(blend * animat.lucidity + (1.0 - blend) * lucidity_target)
    return animat


def _wrap_angle(angle: float) -> float:
    return math.atan2(math.sin(angle), math.cos(angle))


def _turn_towards(heading: float, target: float, max_turn: float = MAX_TURN) -> float:
    diff = _wrap_angle(target - heading)
    diff = min(max_turn, max(-max_turn, diff))
    return _wrap_angle(heading + diff)


def _segment_blocked(world: World, x0: float, y0: float, x1: float, y1: float) -> bool:
    if not (0.0 <= x1 <= world.width and 0.0 <= y1 <= world.height):
        return True
    for entity in world.entities:
        if entity.kind is not EntityKind.OBSTACLE:
            continue
        # Distance from the obstacle centre to the probe segment.
        dx, dy = x1 - x0, y1 - y0
        length_sq = dx * dx + dy * dy
        if length_sq == 0.0:
            t = 0.0
        else:
            t = max(0.0, min(1.0, ((entity.x - x0) * dx + (entity.y - y0) * dy) / length_sq))
        px, py = x0 + t * dx, y0 + t * dy
        if math.hypot(entity.x - px, entity.y - py) < entity.radius:
            return True
    return False


def _visit_cell(world: World, x: float, y: float) -> tuple[int, int]:
    cell = world.width / EXPLORE_GRID
    cx = min(EXPLORE_GRID - 1, max(0, int(x / cell)))
    cy = max(0, int(y / cell))
    return cx, cy


def _explore_heading(world: World, animat: Animat) -> float:
    """Pick the candidate heading probing into the least-visited free cell."""
    probe = max(0.75 * world.width / EXPLORE_GRID, 3.0 * animat.speed)
    best_heading = animat.heading
    best_score = math.inf
    for k in range(-3, 4):
        heading = _wrap_angle(animat.heading + 0.45 * k)
        px = animat.x + probe * math.cos(heading)
        py = animat.y + probe * math.sin(heading)
        score = EXPLORE_VISIT_WEIGHT * animat.visits.get(_visit_cell(world, px, py), 0)
        score += abs(k)
        if _segment_blocked(world, animat.x, animat.y, px, py):
            score += EXPLORE_BLOCKED_PENALTY
        if score < best_score:
            best_score = score
            best_heading = heading
    return best_heading


def _resolve_position(world: World, x: float, y: float, heading: float) -> tuple[float, float]:
    """Keep a position inside bounds and outside every obstacle disc."""
    for _ in range(8):
        x = min(world.width, max(0.0, x))
        y = min(world.height, max(0.0, y))
        pushed = False
        for entity in world.entities:
            if entity.kind is not EntityKind.OBSTACLE:
                continue
            dx, dy = x - entity.x, y - entity.y
            dist = math.hypot(dx, dy)
            if dist >= entity.radius:
                continue
            if dist == 0.0:
                dx, dy, dist = -math.cos(heading), -math.sin(heading), 1.0
            scale = (entity.radius + CONTAINMENT_EPS) / dist
            x = entity.x + dx * scale
            y = entity.y + dy * scale
            pushed = True
        if not pushed and 0.0 <= x <= world.width and 0.0 <= y <= world.height:
            break
    return min(world.width, max(0.0, x)), min(world.height, max(0.0, y))


def motor_step(
    world: World, animat: Animat, behavior: MotorBehavior, percepts: list[Percept]
) -> Animat:
    """Turn and advance the animat for one tick of the given behaviour.

    Consummatory behaviours hold position.  Movement draws on the world
    generator, so call order across animats fixes the trajectory.
    """
    rng = world.rng
    by_kind = {p.kind: p for p in percepts}
    distance = animat.speed

    if behavior is MotorBehavior.WANDER:
        animat.heading = _wrap_angle(animat.heading + rng.uniform(-WANDER_JITTER, WANDER_JITTER))
        distance = 0.5 * animat.speed
    elif behavior is MotorBehavior.EXPLORE:
        heading = _explore_heading(world, animat)
        animat.heading = _wrap_angle(heading + rng.uniform(-EXPLORE_JITTER, EXPLORE_JITTER))
    elif behavior is MotorBehavior.APPROACH:
        target_kind = animat.network.approach_kind if animat.network else None
        percept = by_kind.get(target_kind) if target_kind else None
        if percept is not None:
            animat.heading = _turn_towards(animat.heading, percept.bearing)
        # With only a remembered stimulus, keep the current heading.
    elif behavior is MotorBehavior.RUNAWAY:
        percept = by_kind.get(EntityKind.BLOB)
        if percept is not None:
            animat.heading = _turn_towards(animat.heading, _wrap_angle(percept.bearing + math.pi))
    elif behavior is MotorBehavior.AVOID_OBSTACLES:
        percept = by_kind.get(EntityKind.OBSTACLE)
        if percept is not None:
            side = _wrap_angle(percept.bearing - animat.heading)
            away = percept.bearing - math.pi / 2 if side >= 0.0 else percept.bearing + math.pi / 2
            animat.heading = _turn_towards(animat.heading, _wrap_angle(away))
    else:
        distance = 0.0

    if distance > 0.0:
        x = animat.x + distance * math.cos(animat.heading)
        y = animat.y + distance * math.sin(animat.heading)
        animat.x, animat.y = _resolve_position(world, x, y, animat.heading)

    cell = _visit_cell(world, animat.x, animat.y)
    animat.visits[cell] = animat.visits.get(cell, 0) + 1
    return animat


def _make_record(tick: int, animat: Animat, behavior: MotorBehavior) -> TraceRecord:
    network: Any = animat.network
    return TraceRecord(
        tick=tick,
        animat=animat.id,
        x=animat.x,
        y=animat.y,
        heading=animat.heading,
        behavior=behavior.value,
        alpha=network.alphas() if network else {},
        activation=network.last_activations() if network else {},
        internal=dict(animat.internal),
        strength=animat.strength,
        lucidity=animat.lucidity,
    )


def world_tick(world: World, animats: list[Animat]) -> list[TraceRecord]:
    """Advance the whole simulation one tick and report per-animat state.

    Per animat: sense, select through the network, move, then pay
    physiology.  Exhausted finite sources disappear at the end of the
    tick.
    """
    records = []
    for animat in animats:
        percepts = sense(world, animat)
        behavior = animat.network.network_tick(percepts, animat.internal)
        motor_step(world, animat, behavior, percepts)
        physiology_step(world, animat, behavior)
        records.append(_make_record(world.tick, animat, behavior))
    world.entities = [e for e in world.entities if e.magnitude > 0.0]
    world.tick += 1
    return records
