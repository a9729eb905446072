"""Tests for the 2D world: perception, physiology, motion and tick order.

Perception and physiology are checked against hand-computed values; the
motor behaviours are checked by their observable signatures (straight-line
approach, reflection away from threats, coverage of exploration) and the
whole tick loop by determinism, containment and conservation properties.
"""

import logging
import math

import pytest

from motivsim.motivation import AlphaState
from motivsim.network import default_network
from motivsim.world import (
    Animat,
    Entity,
    EntityKind,
    MotorBehavior,
    Percept,
    World,
    motor_step,
    physiology_step,
    sense,
    surface_distance,
    world_tick,
)


def make_world(width=100.0, height=100.0, entities=(), seed=1):
    return World(width=width, height=height, entities=list(entities), rng_seed=seed)


def make_animat(x=50.0, y=50.0, alpha=0.7, **kw):
    states = {cid: AlphaState(alpha=alpha) for cid in ("hunger", "thirst", "fatigue")}
    return Animat(id=0, x=x, y=y, network=default_network(states), **kw)


def food(x, y, radius=1.0, magnitude=math.inf):
    return Entity(kind=EntityKind.FOOD, x=x, y=y, radius=radius, magnitude=magnitude)


# --- entities and world bookkeeping -------------------------------------------


def test_entity_requires_positive_radius():
    with pytest.raises(ValueError, match="radius"):
        Entity(kind=EntityKind.FOOD, x=0, y=0, radius=0.0)


def test_entity_rejects_negative_or_nan_magnitude():
    with pytest.raises(ValueError, match="magnitude"):
        Entity(kind=EntityKind.FOOD, x=0, y=0, radius=1.0, magnitude=-1.0)
    with pytest.raises(ValueError, match="magnitude"):
        Entity(kind=EntityKind.FOOD, x=0, y=0, radius=1.0, magnitude=math.nan)


def test_entity_kind_accepts_wire_strings():
    assert Entity(kind="grass", x=0, y=0, radius=1.0).kind is EntityKind.GRASS


def test_world_validates_dimensions_and_seed():
    with pytest.raises(ValueError, match="dimensions"):
        make_world(width=0.0)
    with pytest.raises(ValueError, match="rng_seed"):
        make_world(seed=2**64)


def test_world_rejects_out_of_bounds_entity():
    with pytest.raises(ValueError, match="out of bounds"):
        make_world(entities=[food(200.0, 50.0)])


def test_entity_ids_stay_monotonic_across_changes():
    world = make_world(entities=[food(10, 10), food(20, 20)])
    assert [e.id for e in world.entities] == [0, 1]
    assert world.remove_entity(0) is True
    assert world.remove_entity(0) is False
    added = world.add_entity(food(30, 30))
    assert added.id == 2
    world.replace_entities([food(40, 40)])
    assert world.entities[0].id == 3


# --- perception ------------------------------------------------------------------


def test_sense_full_intensity_at_surface():
    world = make_world(entities=[food(52.0, 50.0, radius=2.0)])
    animat = make_animat(50.0, 50.0)
    (got,) = sense(world, animat)
    assert got.kind is EntityKind.FOOD
    assert got.intensity == 1.0
    assert got.distance == pytest.approx(0.0)


def test_sense_nothing_at_perception_edge():
    world = make_world(entities=[food(61.0, 50.0, radius=1.0)])
    animat = make_animat(50.0, 50.0)  # surface exactly 10 away
    assert sense(world, animat) == []


def test_sense_reports_nearest_of_a_kind():
    world = make_world(
        entities=[food(50.0, 58.0 + 1.0), food(52.0 + 1.0, 50.0)]  # surfaces at 8 and 2
    )
    animat = make_animat(50.0, 50.0)
    (got,) = sense(world, animat)
    assert got.intensity == pytest.approx(0.8)
    assert got.bearing == pytest.approx(0.0)  # toward the nearer one, due east


def test_sense_intensity_saturates_inside_entity():
    world = make_world(entities=[food(50.0, 50.0, radius=5.0)])
    animat = make_animat(50.0, 50.0)
    (got,) = sense(world, animat)
    assert got.intensity == 1.0
    assert got.distance < 0.0


def test_sense_skips_exhausted_sources():
    world = make_world(entities=[food(52.0, 50.0, magnitude=0.0)])
    assert sense(world, make_animat()) == []


def test_sense_one_percept_per_kind():
    world = make_world(
        entities=[
            food(52, 50),
            food(54, 50),
            Entity(kind=EntityKind.WATER, x=50, y=53, radius=1.0),
        ]
    )
    got = sense(world, make_animat())
    assert sorted(p.kind.value for p in got) == ["food_source", "water_source"]


def test_animats_are_invisible_to_each_other():
    world = make_world()
    a = make_animat(50.0, 50.0)
    b = make_animat(51.0, 50.0)
    b.id = 1
    assert sense(world, a) == []
    assert sense(world, b) == []


# --- physiology ---------------------------------------------------------------------


def test_eating_relieves_hunger():
    world = make_world(entities=[food(50.5, 50.0)])
    animat = make_animat(50.0, 50.0)
    animat.internal["hunger"] = 0.5
    physiology_step(world, animat, MotorBehavior.EAT)
    assert animat.internal["hunger"] == pytest.approx(0.48)


def test_grass_feeds_at_half_rate():
    world = make_world(entities=[Entity(kind=EntityKind.GRASS, x=50.5, y=50.0, radius=1.0)])
    animat = make_animat(50.0, 50.0)
    animat.internal["hunger"] = 0.5
    physiology_step(world, animat, MotorBehavior.EAT)
    assert animat.internal["hunger"] == pytest.approx(0.49)


def test_resting_relieves_fatigue():
    world = make_world(
        entities=[Entity(kind=EntityKind.SPOT, x=50.5, y=50.0, radius=1.0, magnitude=1.0)]
    )
    animat = make_animat(50.0, 50.0)
    animat.internal["fatigue"] = 1.0
    physiology_step(world, animat, MotorBehavior.REST)
    assert animat.internal["fatigue"] == pytest.approx(0.99)


def test_spot_magnitude_scales_rest_up_to_a_cap():
    animat = make_animat(50.0, 50.0)
    animat.internal["fatigue"] = 1.0
    world = make_world(
        entities=[Entity(kind=EntityKind.SPOT, x=50.5, y=50.0, radius=1.0, magnitude=8.0)]
    )
    physiology_step(world, animat, MotorBehavior.REST)
    assert animat.internal["fatigue"] == pytest.approx(1.0 - 0.01 * 4.0)


def test_needs_clamp_at_one():
    world = make_world()
    animat = make_animat()
    animat.internal["hunger"] = 1.0
    physiology_step(world, animat, MotorBehavior.WANDER)
    assert animat.internal["hunger"] == 1.0


def test_needs_grow_while_moving():
    world = make_world()
    animat = make_animat()
    physiology_step(world, animat, MotorBehavior.WANDER)
    assert animat.internal["hunger"] == pytest.approx(0.002)
    assert animat.internal["thirst"] == pytest.approx(0.003)
    assert animat.internal["fatigue"] == pytest.approx(0.001)


def test_fatigue_only_accrues_in_motion():
    world = make_world(entities=[food(50.5, 50.0)])
    animat = make_animat()
    physiology_step(world, animat, MotorBehavior.EAT)  # stationary act
    assert animat.internal["fatigue"] == 0.0


def test_consuming_replaces_own_growth_but_not_others():
    world = make_world(entities=[food(50.5, 50.0)])
    animat = make_animat()
    animat.internal["hunger"] = 0.5
    physiology_step(world, animat, MotorBehavior.EAT)
    assert animat.internal["hunger"] == pytest.approx(0.48)  # no +0.002 on top
    assert animat.internal["thirst"] == pytest.approx(0.003)  # still accrues


def test_eat_without_source_is_logged_noop(caplog):
    world = make_world()
    animat = make_animat()
    animat.internal["hunger"] = 0.5
    with caplog.at_level(logging.WARNING):
        physiology_step(world, animat, MotorBehavior.EAT)
    assert "no edible in range" in caplog.text
    assert animat.internal["hunger"] == pytest.approx(0.502)  # growth still applies


def test_finite_stock_decrements_per_consumption():
    world = make_world(entities=[food(50.5, 50.0, magnitude=5.0)])
    animat = make_animat()
    for _ in range(3):
        animat.internal["hunger"] = 0.5
        physiology_step(world, animat, MotorBehavior.EAT)
    assert world.entities[0].magnitude == 2.0


def test_qualities_blend_slowly_toward_targets():
    world = make_world()
    animat = make_animat()
    animat.internal.update({"hunger": 1.0, "thirst": 0.2, "fatigue": 0.5})
    physiology_step(world, animat, MotorBehavior.WANDER)
    assert animat.strength == pytest.approx(0.99 * 1.0 + 0.01 * (1.0 - 1.0))
    assert animat.lucidity == pytest.approx(0.99 * 1.0 + 0.01 * (1.0 - 0.501))


# --- motion -----------------------------------------------------------------------


def test_approach_advances_straight_at_full_speed():
    world = make_world(entities=[food(60.0, 50.0)])
    animat = make_animat(50.0, 50.0)
    # Open the gate on food so approach knows its target kind.
    percepts = sense(world, animat)
    behavior = animat.network.network_tick(
        percepts, {"hunger": 0.9, "thirst": 0.0, "fatigue": 0.0}
    )
    assert behavior is MotorBehavior.APPROACH
    motor_step(world, animat, behavior, percepts)
    assert (animat.x, animat.y) == pytest.approx((51.0, 50.0))
    assert animat.heading == pytest.approx(0.0)


def test_approach_keeps_heading_on_memory_alone():
    world = make_world()
    animat = make_animat(50.0, 50.0)
    animat.heading = 0.7
    animat.network.network_tick(
        [Percept(EntityKind.FOOD, 0.5, bearing=0.7, distance=5.0)],
        {"hunger": 0.9, "thirst": 0.0, "fatigue": 0.0},
    )
    motor_step(world, animat, MotorBehavior.APPROACH, [])
    assert animat.heading == pytest.approx(0.7)
    assert math.hypot(animat.x - 50.0, animat.y - 50.0) == pytest.approx(1.0)


def test_runaway_turns_away_from_threat():
    world = make_world()
    animat = make_animat(50.0, 50.0)
    blob = Percept(EntityKind.BLOB, 0.9, bearing=0.0, distance=2.0)
    motor_step(world, animat, MotorBehavior.RUNAWAY, [blob])
    # One tick of max turn toward the reflected bearing.
    assert abs(animat.heading) == pytest.approx(0.5)


def test_runaway_flees_along_reflected_bearing_eventually():
    world = make_world()
    animat = make_animat(50.0, 50.0)
    blob = Percept(EntityKind.BLOB, 0.9, bearing=0.0, distance=2.0)
    for _ in range(10):
        motor_step(world, animat, MotorBehavior.RUNAWAY, [blob])
    assert abs(abs(animat.heading) - math.pi) < 1e-9
    assert animat.x < 50.0


def test_wander_advances_at_half_speed():
    world = make_world()
    animat = make_animat(50.0, 50.0)
    motor_step(world, animat, MotorBehavior.WANDER, [])
    assert math.hypot(animat.x - 50.0, animat.y - 50.0) == pytest.approx(0.5)


def test_consummatory_acts_hold_position():
    world = make_world()
    animat = make_animat(50.0, 50.0)
    for behavior in (MotorBehavior.EAT, MotorBehavior.DRINK, MotorBehavior.REST):
        motor_step(world, animat, behavior, [])
        assert (animat.x, animat.y) == (50.0, 50.0)


def test_explore_covers_far_more_ground_than_wander():
    # Same seed, same start: exploration's visit-avoidance must open up at
    # least three times as many coarse grid cells as undirected wandering.
    def unique_cells(behavior):
        world = make_world(seed=7)
        animat = make_animat(50.0, 50.0)
        for _ in range(500):
            motor_step(world, animat, behavior, [])
        return len(animat.visits)

    assert unique_cells(MotorBehavior.EXPLORE) >= 3 * unique_cells(MotorBehavior.WANDER)


def test_motion_respects_world_bounds():
    world = make_world(width=20.0, height=20.0, seed=3)
    animat = make_animat(1.0, 1.0)
    for _ in range(500):
        motor_step(world, animat, MotorBehavior.EXPLORE, [])
        assert 0.0 <= animat.x <= 20.0
        assert 0.0 <= animat.y <= 20.0


def test_motion_never_penetrates_obstacles():
    wall = Entity(kind=EntityKind.OBSTACLE, x=10.0, y=10.0, radius=4.0)
    world = make_world(width=20.0, height=20.0, entities=[wall], seed=5)
    animat = make_animat(2.0, 10.0)
    for behavior in (MotorBehavior.WANDER, MotorBehavior.EXPLORE):
        for _ in range(300):
            motor_step(world, animat, behavior, [])
            assert math.hypot(animat.x - 10.0, animat.y - 10.0) >= 4.0 - 1e-9


# --- full tick ---------------------------------------------------------------------


def zeroed_animat(x=50.0, y=50.0):
    animat = make_animat(x, y, alpha=0.0)
    return animat


def test_tick_moves_a_contented_animat_by_wandering():
    world = make_world()
    animat = zeroed_animat()
    positions = set()
    for _ in range(10):
        (record,) = world_tick(world, [animat])
        assert record.behavior == "wander"
        positions.add((record.x, record.y))
    assert len(positions) > 1
    assert world.tick == 10


def test_tick_runs_hunger_through_approach_eat_decline():
    world = make_world(entities=[food(59.0, 50.0)])
    animat = make_animat(50.0, 50.0)
    animat.internal["hunger"] = 0.9
    behaviors = []
    hunger = []
    for _ in range(40):
        (record,) = world_tick(world, [animat])
        behaviors.append(record.behavior)
        hunger.append(record.internal["hunger"])
    assert "approach" in behaviors
    assert "eat" in behaviors
    assert behaviors.index("approach") < behaviors.index("eat")
    assert min(hunger) < 0.9


def test_tick_removes_exhausted_sources():
    world = make_world(entities=[food(50.5, 50.0, magnitude=1.0)])
    animat = make_animat(50.0, 50.0)
    animat.internal["hunger"] = 0.9
    world_tick(world, [animat])
    assert world.entities == []


def test_identical_setups_produce_identical_traces():
    def run():
        world = make_world(
            entities=[food(70.0, 60.0), Entity(kind=EntityKind.WATER, x=30.0, y=40.0, radius=2.0)],
            seed=11,
        )
        animat = make_animat(50.0, 50.0)
        animat.internal.update({"hunger": 0.8, "thirst": 0.4})
        records = []
        for _ in range(200):
            records.extend(world_tick(world, [animat]))
        return records

    assert run() == run()


def test_trace_records_expose_full_observable_state():
    world = make_world()
    animat = zeroed_animat()
    (record,) = world_tick(world, [animat])
    assert record.tick == 0
    assert record.animat == 0
    assert set(record.alpha) == {"hunger", "thirst", "fatigue"}
    assert set(record.activation) == {"hunger", "thirst", "fatigue"}
    assert set(record.internal) == {"hunger", "thirst", "fatigue"}
    assert 0.0 <= record.strength <= 1.0
    assert 0.0 <= record.lucidity <= 1.0


def test_surface_distance_subtracts_radius():
    animat = make_animat(50.0, 50.0)
    assert surface_distance(animat, food(53.0, 50.0, radius=2.0)) == pytest.approx(1.0)
