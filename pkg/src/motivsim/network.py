"""Two-node blackboard network that turns percepts and needs into one action.

A cognitive node tracks what is out there (perceptions, short-lived
perceptual memories, the preferred consummatory act and its gate), a
motivational node tracks what the body wants (interoception, the combined
need-opportunity congruence per column, the winning drive).  Behavioural
columns tie the two together: each column links one internal need to the
stimulus kinds that can satisfy it and to one consummatory behaviour.

Every tick each column combines its signals into a congruence certainty,
the strongest certainty above a floor becomes the drive, a perceptual
memory of a linked stimulus opens the gate from preference to action, and
a reactive ladder picks the motor behaviour, letting reflexes pre-empt
motivated choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, Sequence

from .motivation import (
    AlphaState,
    CombinationInputs,
    alpha_update,
    combine_activation,
    external_sum,
)
from .world import EntityKind, MotorBehavior, Percept


class CognitiveLevel(Enum):
    EXTERNAL_PERCEPTIONS = "external_perceptions"
    PERCEPTUAL_PERSISTENTS = "perceptual_persistents"
    CONSUMMATORY_PREFERENTS = "consummatory_preferents"
    DRIVE_PERCEPTION_CONGRUENTS = "drive_perception_congruents"
    POTENTIAL_ACTIONS = "potential_actions"
    ACTIONS = "actions"


class MotivationalLevel(Enum):
    INTERNAL_PERCEPTIONS = "internal_perceptions"
    EXTERNAL_PERCEPTIONS = "external_perceptions"
    INTERO_EXTERO_DRIVE_CONGRUENTS = "intero_extero_drive_congruents"
    DRIVE = "drive"


@dataclass(frozen=True)
class SolutionElement:
    """One certainty-stamped entry on a blackboard level."""

    key: str
    certainty: float
    tick: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.certainty <= 1.0:
            raise ValueError("certainty must lie in [0, 1]")


@dataclass(frozen=True)
class Coupling:
    """Signal weight; modifiable couplings may be tuned at run time."""

    weight: float
    modifiable: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError("weight must lie in [0, 1]")


@dataclass(frozen=True)
class CouplingVector:
    """All couplings feeding one combination: internal, external, drive."""

    internal: Coupling
    external: tuple[tuple[EntityKind, Coupling], ...]
    drive: Coupling


@dataclass(frozen=True)
class ElementalBehavior:
    """An internal behaviour: reads one level, writes another, weighted."""

    id: str
    reads: tuple[Enum, ...]
    writes: Enum
    couplings: CouplingVector


@dataclass
class BehaviouralColumn:
    """One need's slice through both nodes, ending in a consummatory act."""

    id: str
    consummatory: MotorBehavior
    congruence: ElementalBehavior
    alpha_state: AlphaState

    @property
    def stimulus_kinds(self) -> tuple[EntityKind, ...]:
        return tuple(kind for kind, _ in self.congruence.couplings.external)


@dataclass
class NetworkConfig:
    persistence_decay: float = 0.9
    activation_floor: float = 0.01
    explore_threshold: float = 0.3
    obstacle_reflex_threshold: float = 0.7
    fa_internal: float = 1.0
    fa_drive: float = 0.2
    interact_range: float = 1.0


def _congruence_behavior(column_id: str, external: Sequence[tuple[EntityKind, float]],
                         config: NetworkConfig) -> ElementalBehavior:
    vector = CouplingVector(
        internal=Coupling(config.fa_internal),
        external=tuple((kind, Coupling(weight)) for kind, weight in external),
        drive=Coupling(config.fa_drive),
    )
    return ElementalBehavior(
        id=f"{column_id}_congruence",
        reads=(
            MotivationalLevel.INTERNAL_PERCEPTIONS,
            MotivationalLevel.EXTERNAL_PERCEPTIONS,
            MotivationalLevel.DRIVE,
        ),
        writes=MotivationalLevel.INTERO_EXTERO_DRIVE_CONGRUENTS,
        couplings=vector,
    )


DEFAULT_COLUMN_STIMULI: dict[str, tuple[tuple[EntityKind, float], ...]] = {
    "hunger": ((EntityKind.FOOD, 1.0), (EntityKind.GRASS, 0.5)),
    "thirst": ((EntityKind.WATER, 1.0),),
    "fatigue": ((EntityKind.SPOT, 1.0),),
}

DEFAULT_COLUMN_ACTS = {
    "hunger": MotorBehavior.EAT,
    "thirst": MotorBehavior.DRINK,
    "fatigue": MotorBehavior.REST,
}


def default_columns(
    alpha_states: Mapping[str, AlphaState] | None = None,
    config: NetworkConfig | None = None,
) -> list[BehaviouralColumn]:
    """The stock columns in tie-break order: hunger, thirst, fatigue."""
    config = config or NetworkConfig()
    alpha_states = alpha_states or {}
    columns = []
    for column_id, stimuli in DEFAULT_COLUMN_STIMULI.items():
        columns.append(
            BehaviouralColumn(
                id=column_id,
                consummatory=DEFAULT_COLUMN_ACTS[column_id],
                congruence=_congruence_behavior(column_id, stimuli, config),
                alpha_state=alpha_states.get(column_id, AlphaState()),
            )
        )
    return columns


class BecaNetwork:
    """Blackboard state plus the internal behaviours that advance it."""

    def __init__(
        self,
        columns: list[BehaviouralColumn] | None = None,
        config: NetworkConfig | None = None,
    ):
        self.config = config or NetworkConfig()
        self.columns = columns if columns is not None else default_columns(config=self.config)
        if not self.columns:
            raise ValueError("a network needs at least one column")
        self.tick = 0
        self.cognitive: dict[CognitiveLevel, dict[str, SolutionElement]] = {
            level: {} for level in CognitiveLevel
        }
        self.motivational: dict[MotivationalLevel, dict[str, SolutionElement]] = {
            level: {} for level in MotivationalLevel
        }
        self.activity: dict[str, float] = {}
        self._percepts: dict[EntityKind, Percept] = {}
        self._winner: str | None = None
        self._gate_kind: EntityKind | None = None

    def column(self, column_id: str) -> BehaviouralColumn:
        for column in self.columns:
            if column.id == column_id:
                return column
        raise KeyError(column_id)

    @property
    def approach_kind(self) -> EntityKind | None:
        """Stimulus kind the current gate opened on; target for approach."""
        return self._gate_kind

    def alphas(self) -> dict[str, float]:
        return {column.id: column.alpha_state.alpha for column in self.columns}

    def clear_persistents(self) -> None:
        """Drop all perceptual memories (the world changed under the animat)."""
        self.cognitive[CognitiveLevel.PERCEPTUAL_PERSISTENTS].clear()

    def last_activations(self) -> dict[str, float]:
        congruents = self.motivational[MotivationalLevel.INTERO_EXTERO_DRIVE_CONGRUENTS]
        return {
            column.id: congruents[column.id].certainty if column.id in congruents else 0.0
            for column in self.columns
        }

    def _begin_tick(self) -> None:
        self.tick += 1
        self.cognitive[CognitiveLevel.EXTERNAL_PERCEPTIONS].clear()
        self.cognitive[CognitiveLevel.CONSUMMATORY_PREFERENTS].clear()
        self.cognitive[CognitiveLevel.DRIVE_PERCEPTION_CONGRUENTS].clear()
        self.cognitive[CognitiveLevel.POTENTIAL_ACTIONS].clear()
        self.cognitive[CognitiveLevel.ACTIONS].clear()
        self.motivational[MotivationalLevel.INTERNAL_PERCEPTIONS].clear()
        self.motivational[MotivationalLevel.EXTERNAL_PERCEPTIONS].clear()
        self.motivational[MotivationalLevel.INTERO_EXTERO_DRIVE_CONGRUENTS].clear()
        self.activity = {}
        self._winner = None
        self._gate_kind = None

    def write_exteroception(self, percepts: Sequence[Percept]) -> None:
        """Post current percepts on both nodes; duplicate kinds keep the max."""
        merged: dict[EntityKind, Percept] = {}
        for percept in percepts:
            current = merged.get(percept.kind)
            if current is None or percept.intensity > current.intensity:
                merged[percept.kind] = percept
        self._percepts = merged
        strongest = 0.0
        for kind, percept in merged.items():
            element = SolutionElement(kind.value, percept.intensity, self.tick)
            self.cognitive[CognitiveLevel.EXTERNAL_PERCEPTIONS][kind.value] = element
            self.motivational[MotivationalLevel.EXTERNAL_PERCEPTIONS][kind.value] = element
            strongest = max(strongest, percept.intensity)
        self.activity["write_exteroception"] = strongest

    def write_interoception(self, internal: Mapping[str, float]) -> None:
        """Post each column's need level on the motivational node.

        Fully satisfied needs leave no element, so an animat at rest posts
        an empty level rather than a row of zeros.
        """
        strongest = 0.0
        level = self.motivational[MotivationalLevel.INTERNAL_PERCEPTIONS]
        for column in self.columns:
            value = min(1.0, max(0.0, internal.get(column.id, 0.0)))
            if value > 0.0:
                level[column.id] = SolutionElement(column.id, value, self.tick)
                strongest = max(strongest, value)
        self.activity["write_interoception"] = strongest

    def perceptual_persistence_step(self) -> None:
        """Decay perceptual memories, refresh them from current percepts.

        A memory is the max of the decayed previous value and the live
        intensity; memories below the activation floor are dropped.
        """
        level = self.cognitive[CognitiveLevel.PERCEPTUAL_PERSISTENTS]
        decay = self.config.persistence_decay
        keys = set(level) | {kind.value for kind in self._percepts}
        strongest = 0.0
        for kind in EntityKind:
            key = kind.value
            if key not in keys:
                continue
            decayed = level[key].certainty * decay if key in level else 0.0
            live = self._percepts[kind].intensity if kind in self._percepts else 0.0
            value = max(decayed, live)
            if value < self.config.activation_floor:
                level.pop(key, None)
                continue
            level[key] = SolutionElement(key, value, self.tick)
            strongest = max(strongest, value)
        self.activity["perceptual_persistence"] = strongest

    def congruence_step(self) -> None:
        """Combine each column's signals and adapt its motivation degree."""
        internal_level = self.motivational[MotivationalLevel.INTERNAL_PERCEPTIONS]
        drive_level = self.motivational[MotivationalLevel.DRIVE]
        congruent_level = self.motivational[MotivationalLevel.INTERO_EXTERO_DRIVE_CONGRUENTS]
        strongest = 0.0
        for column in self.columns:
            o_internal = (
                internal_level[column.id].certainty if column.id in internal_level else 0.0
            )
            o_drive = drive_level[column.id].certainty if column.id in drive_level else 0.0
            couplings = column.congruence.couplings
            fa_external = tuple(c.weight for _, c in couplings.external)
            o_external = tuple(
                self._percepts[kind].intensity if kind in self._percepts else 0.0
                for kind, _ in couplings.external
            )
            inputs = CombinationInputs(
                o_internal=o_internal,
                fa_internal=couplings.internal.weight,
                o_external=o_external,
                fa_external=fa_external,
                o_drive=o_drive,
                fa_drive=couplings.drive.weight,
                alpha=column.alpha_state.alpha,
            )
            certainty = combine_activation(inputs)
            congruent_level[column.id] = SolutionElement(column.id, certainty, self.tick)
            ext = external_sum(fa_external, o_external)
            column.alpha_state = alpha_update(column.alpha_state, o_internal, ext)
            strongest = max(strongest, certainty)
        self.activity["congruence"] = strongest

    def consummatory_preference_select(self) -> str | None:
        """Promote the strongest congruence above the floor to the drive.

        Ties resolve in column order.  The winner is also posted as the
        cognitive consummatory preference; with no winner the drive level
        goes empty.
        """
        congruent_level = self.motivational[MotivationalLevel.INTERO_EXTERO_DRIVE_CONGRUENTS]
        winner: BehaviouralColumn | None = None
        winning = 0.0
        for column in self.columns:
            element = congruent_level.get(column.id)
            if element is None or element.certainty < self.config.activation_floor:
                continue
            if winner is None or element.certainty > winning:
                winner = column
                winning = element.certainty
        self.motivational[MotivationalLevel.DRIVE].clear()
        self._winner = None
        if winner is None:
            self.activity["preference_select"] = 0.0
            return None
        element = SolutionElement(winner.id, winning, self.tick)
        self.motivational[MotivationalLevel.DRIVE][winner.id] = element
        self.cognitive[CognitiveLevel.CONSUMMATORY_PREFERENTS][winner.id] = element
        self._winner = winner.id
        self.activity["preference_select"] = winning
        return winner.id

    def attention_to_preferences_step(self) -> None:
        """Gate the winning preference with its best perceptual memory.

        The gate certainty is the min of memory and preference.  No linked
        memory means the gate stays shut and approach has no target.
        """
        self._gate_kind = None
        if self._winner is None:
            self.activity["attention"] = 0.0
            return
        column = self.column(self._winner)
        persistents = self.cognitive[CognitiveLevel.PERCEPTUAL_PERSISTENTS]
        best_kind: EntityKind | None = None
        best_value = 0.0
        for kind in column.stimulus_kinds:
            element = persistents.get(kind.value)
            if element is not None and element.certainty > best_value:
                best_kind = kind
                best_value = element.certainty
        if best_kind is None:
            self.activity["attention"] = 0.0
            return
        preference = self.cognitive[CognitiveLevel.CONSUMMATORY_PREFERENTS][self._winner]
        gated = min(best_value, preference.certainty)
        self.cognitive[CognitiveLevel.DRIVE_PERCEPTION_CONGRUENTS][self._winner] = (
            SolutionElement(self._winner, gated, self.tick)
        )
        self._gate_kind = best_kind
        self.activity["attention"] = gated

    def reactive_and_select_action(self) -> MotorBehavior:
        """Run the selection ladder and post the chosen action.

        Rungs, first match wins: obstacle reflex, flight from an aversive
        blob stronger than the winning drive, the consummatory act when
        the gate is open, the stimulus is in reach and the need is not yet
        sated, approach when the gate is open but the stimulus is out of
        reach, explore on a strong ungated drive, wander otherwise.
        """
        potential = self.cognitive[CognitiveLevel.POTENTIAL_ACTIONS]
        drive_level = self.motivational[MotivationalLevel.DRIVE]
        winning = drive_level[self._winner].certainty if self._winner else 0.0
        gate = (
            self.cognitive[CognitiveLevel.DRIVE_PERCEPTION_CONGRUENTS].get(self._winner)
            if self._winner
            else None
        )

        behavior: MotorBehavior | None = None
        certainty = 0.0

        obstacle = self._percepts.get(EntityKind.OBSTACLE)
        if obstacle is not None and obstacle.intensity > self.config.obstacle_reflex_threshold:
            potential["avoid_obstacles"] = SolutionElement(
                "avoid_obstacles", obstacle.intensity, self.tick
            )
            behavior, certainty = MotorBehavior.AVOID_OBSTACLES, obstacle.intensity

        blob = self._percepts.get(EntityKind.BLOB)
        if behavior is None and blob is not None and blob.intensity > winning:
            potential["runaway"] = SolutionElement("runaway", blob.intensity, self.tick)
            behavior, certainty = MotorBehavior.RUNAWAY, blob.intensity

        if behavior is None and self._winner is not None and gate is not None:
            column = self.column(self._winner)
            percept = self._percepts.get(self._gate_kind) if self._gate_kind else None
            in_range = percept is not None and percept.distance <= self.config.interact_range
            felt = self.motivational[MotivationalLevel.INTERNAL_PERCEPTIONS].get(self._winner)
            o_internal = felt.certainty if felt is not None else 0.0
            if in_range and o_internal > 0.0:
                potential[column.consummatory.value] = SolutionElement(
                    column.consummatory.value, gate.certainty, self.tick
                )
                behavior, certainty = column.consummatory, gate.certainty
            elif not in_range:
                potential["approach"] = SolutionElement("approach", gate.certainty, self.tick)
                behavior, certainty = MotorBehavior.APPROACH, gate.certainty

        if (
            behavior is None
            and self._winner is not None
            and gate is None
            and winning > self.config.explore_threshold
        ):
            potential["explore"] = SolutionElement("explore", winning, self.tick)
            behavior, certainty = MotorBehavior.EXPLORE, winning

        if behavior is None:
            behavior, certainty = MotorBehavior.WANDER, self.config.activation_floor

        element = SolutionElement(behavior.value, min(1.0, certainty), self.tick)
        potential.setdefault(behavior.value, element)
        self.cognitive[CognitiveLevel.ACTIONS][behavior.value] = element
        self.activity["reactive_select"] = element.certainty
        return behavior

    def network_tick(
        self, percepts: Sequence[Percept], internal: Mapping[str, float]
    ) -> MotorBehavior:
        """One full pass: post signals, combine, select, gate, act."""
        self._begin_tick()
        self.write_exteroception(percepts)
        self.write_interoception(internal)
        self.perceptual_persistence_step()
        self.congruence_step()
        self.consummatory_preference_select()
        self.attention_to_preferences_step()
        return self.reactive_and_select_action()


def default_network(
    alpha_states: Mapping[str, AlphaState] | None = None,
    config: NetworkConfig | None = None,
) -> BecaNetwork:
    config = config or NetworkConfig()
    return BecaNetwork(columns=default_columns(alpha_states, config), config=config)
