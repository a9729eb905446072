"""Seeded scenario execution, trace persistence and metric computation.

A Simulation owns one world plus its animats and steps them tick by tick,
applying phase transitions (state resets, entity swaps) at their
boundaries.  Traces persist as JSONL with a self-describing header line
carrying the normalized scenario and seed, so a trace file alone suffices
to replay and verify the run, and as CSV for spreadsheet work.  Metrics
are recomputable from a persisted trace.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

from .scenarios import Scenario, build, build_entity
from .world import TraceRecord, world_tick

TRACE_FORMAT = "motivsim-trace"
TRACE_VERSION = 1

CSV_HEADER = (
    "tick,animat,x,y,behavior,alpha_hunger,alpha_thirst,alpha_fatigue,"
    "A_hunger,A_thirst,A_fatigue,hunger,thirst,fatigue,strength,lucidity"
)
CSV_COLUMNS = ("hunger", "thirst", "fatigue")

ALPHA_EDGE_TOL = 1e-12


class Simulation:
    """One running scenario: the world, its animats and phase bookkeeping."""

    def __init__(self, scenario: Scenario, seed: int | None = None):
        self.scenario = scenario
        self.seed = scenario.seed if seed is None else seed
        self.world, self.animats = build(scenario, self.seed)
        self.total_ticks = scenario.total_ticks
        starts = []
        at = 0
        for phase in scenario.phases:
            starts.append(at)
            at += phase.ticks
        self.phase_starts = starts
        self._next_phase = 1

    @property
    def tick(self) -> int:
        return self.world.tick

    @property
    def done(self) -> bool:
        return self.world.tick >= self.total_ticks

    def _apply_phase(self, index: int) -> None:
        phase = self.scenario.phases[index]
        if phase.reset_internal is not None:
            for animat in self.animats:
                animat.internal.update(phase.reset_internal)
        if phase.entities is not None:
            self.world.replace_entities([build_entity(spec) for spec in phase.entities])
            # Stale percept memories would point at things that no longer exist.
            for animat in self.animats:
                if animat.network is not None:
                    animat.network.clear_persistents()

    def step(self) -> list[TraceRecord]:
        """Advance one tick, applying any phase boundary that starts here."""
        if self.done:
            raise RuntimeError("scenario already finished")
        while (
            self._next_phase < len(self.phase_starts)
            and self.phase_starts[self._next_phase] == self.world.tick
        ):
            self._apply_phase(self._next_phase)
            self._next_phase += 1
        return world_tick(self.world, self.animats)

    def run(self) -> list[TraceRecord]:
        records: list[TraceRecord] = []
        while not self.done:
            records.extend(self.step())
        return records


@dataclass
class AnimatMetrics:
    animat: int
    final_alpha: dict[str, float]
    ticks_to_alpha_max: dict[str, int | None]
    ticks_to_alpha_min: dict[str, int | None]
    first_tick_below_theta: dict[str, int | None]
    behavior_counts: list[dict[str, int]]

    def to_dict(self) -> dict:
        return {
            "animat": self.animat,
            "final_alpha": self.final_alpha,
            "ticks_to_alpha_max": self.ticks_to_alpha_max,
            "ticks_to_alpha_min": self.ticks_to_alpha_min,
            "first_tick_below_theta": self.first_tick_below_theta,
            "behavior_counts": self.behavior_counts,
        }


@dataclass
class ExperimentMetrics:
    scenario: str
    seed: int
    ticks: int
    animats: list[AnimatMetrics] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "ticks": self.ticks,
            "animats": [a.to_dict() for a in self.animats],
        }


def compute_metrics(records: list[TraceRecord], scenario: Scenario,
                    seed: int | None = None) -> ExperimentMetrics:
    """Derive per-animat adaptation and behaviour metrics from a trace."""
    metrics = ExperimentMetrics(
        scenario=scenario.name,
        seed=scenario.seed if seed is None else seed,
        ticks=scenario.total_ticks,
    )
    phase_ends = []
    at = 0
    for phase in scenario.phases:
        at += phase.ticks
        phase_ends.append(at)

    for index, spec in enumerate(scenario.animats):
        own = [r for r in records if r.animat == index]
        own.sort(key=lambda r: r.tick)
        columns = list(spec.alpha)
        to_max: dict[str, int | None] = {}
        to_min: dict[str, int | None] = {}
        below_theta: dict[str, int | None] = {}
        for column in columns:
            params = spec.alpha[column]
            to_max[column] = next(
                (r.tick for r in own
                 if r.alpha.get(column, 0.0) >= params["alpha_max"] - ALPHA_EDGE_TOL),
                None,
            )
            to_min[column] = next(
                (r.tick for r in own
                 if r.alpha.get(column, 0.0) <= params["alpha_min"] + ALPHA_EDGE_TOL),
                None,
            )
            below_theta[column] = next(
                (r.tick for r in own if r.internal.get(column, 0.0) < params["theta"]),
                None,
            )
        counts: list[dict[str, int]] = []
        for phase_index, end in enumerate(phase_ends):
            start = 0 if phase_index == 0 else phase_ends[phase_index - 1]
            histogram: dict[str, int] = {}
            for record in own:
                if start <= record.tick < end:
                    histogram[record.behavior] = histogram.get(record.behavior, 0) + 1
            counts.append(histogram)
        final_alpha = dict(own[-1].alpha) if own else {}
        metrics.animats.append(
            AnimatMetrics(
                animat=index,
                final_alpha=final_alpha,
                ticks_to_alpha_max=to_max,
                ticks_to_alpha_min=to_min,
                first_tick_below_theta=below_theta,
                behavior_counts=counts,
            )
        )
    return metrics


def run(scenario: Scenario, seed: int | None = None) -> tuple[list[TraceRecord], ExperimentMetrics]:
    """Execute a scenario deterministically and compute its metrics."""
    simulation = Simulation(scenario, seed)
    records = simulation.run()
    return records, compute_metrics(records, scenario, simulation.seed)


@dataclass
class ComparisonReport:
    """Per-tick alpha deltas (a minus b) and aggregate behaviour distance."""

    alpha_delta: dict[str, list[float]]
    behavior_distance: int
    first_divergence_tick: int | None

    def to_dict(self) -> dict:
        return {
            "alpha_delta": self.alpha_delta,
            "behavior_distance": self.behavior_distance,
            "first_divergence_tick": self.first_divergence_tick,
        }


def compare_runs(trace_a: list[TraceRecord], trace_b: list[TraceRecord]) -> ComparisonReport:
    """Compare two traces tick by tick; durations must match."""
    by_tick_a = _group_by_tick(trace_a)
    by_tick_b = _group_by_tick(trace_b)
    if sorted(by_tick_a) != sorted(by_tick_b):
        raise ValueError("trace durations differ")

    columns: list[str] = []
    for record in trace_a:
        for column in record.alpha:
            if column not in columns:
                columns.append(column)

    alpha_delta: dict[str, list[float]] = {column: [] for column in columns}
    first_divergence: int | None = None
    for tick in sorted(by_tick_a):
        group_a, group_b = by_tick_a[tick], by_tick_b[tick]
        for column in columns:
            values_a = [r.alpha.get(column, 0.0) for r in group_a]
            values_b = [r.alpha.get(column, 0.0) for r in group_b]
            delta = sum(values_a) / len(values_a) - sum(values_b) / len(values_b)
            alpha_delta[column].append(delta)
        if first_divergence is None:
            for ra, rb in zip(group_a, group_b):
                if (ra.x, ra.y, ra.behavior) != (rb.x, rb.y, rb.behavior) or ra.alpha != rb.alpha:
                    first_divergence = tick
                    break

    counts_a = _behavior_counts(trace_a)
    counts_b = _behavior_counts(trace_b)
    behaviors = set(counts_a) | set(counts_b)
    distance = sum(abs(counts_a.get(b, 0) - counts_b.get(b, 0)) for b in behaviors)
    return ComparisonReport(
        alpha_delta=alpha_delta,
        behavior_distance=distance,
        first_divergence_tick=first_divergence,
    )


def _group_by_tick(records: Iterable[TraceRecord]) -> dict[int, list[TraceRecord]]:
    groups: dict[int, list[TraceRecord]] = {}
    for record in records:
        groups.setdefault(record.tick, []).append(record)
    for group in groups.values():
        group.sort(key=lambda r: r.animat)
    return groups


def _behavior_counts(records: Iterable[TraceRecord]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for record in records:
        counts[record.behavior] = counts.get(record.behavior, 0) + 1
    return counts


def record_to_dict(record: TraceRecord) -> dict:
    return {
        "tick": record.tick,
        "animat": record.animat,
        "x": record.x,
        "y": record.y,
        "heading": record.heading,
        "behavior": record.behavior,
        "alpha": record.alpha,
        "activation": record.activation,
        "internal": record.internal,
        "strength": record.strength,
        "lucidity": record.lucidity,
    }


def record_from_dict(doc: dict) -> TraceRecord:
    return TraceRecord(
        tick=doc["tick"],
        animat=doc["animat"],
        x=doc["x"],
        y=doc["y"],
        heading=doc["heading"],
        behavior=doc["behavior"],
        alpha=doc["alpha"],
        activation=doc["activation"],
        internal=doc["internal"],
        strength=doc["strength"],
        lucidity=doc["lucidity"],
    )


def _dumps(doc: dict) -> str:
    return json.dumps(doc, allow_nan=False, separators=(",", ":"))


def trace_to_jsonl(records: list[TraceRecord], scenario: Scenario, seed: int) -> str:
    """Serialize a trace with its self-describing header line."""
    header = {
        "format": TRACE_FORMAT,
        "version": TRACE_VERSION,
        "seed": seed,
        "scenario": scenario.to_dict(),
    }
    lines = [_dumps(header)]
    lines.extend(_dumps(record_to_dict(record)) for record in records)
    return "\n".join(lines) + "\n"


def trace_header(text: str) -> tuple[Scenario, int]:
    """Parse just the self-describing header line of a persisted trace."""
    from .scenarios import scenario_from_dict

    lines = text.splitlines()
    if not lines:
        raise ValueError("empty trace file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ValueError(f"bad header line: {exc.msg}") from exc
    if not isinstance(header, dict) or header.get("format") != TRACE_FORMAT:
        raise ValueError("not a trace file: bad header line")
    scenario_doc = header.get("scenario")
    if not isinstance(scenario_doc, dict):
        raise ValueError("not a trace file: header lacks a scenario")
    scenario = scenario_from_dict(scenario_doc, name=scenario_doc.get("name", "custom"))
    seed = header.get("seed", scenario.seed)
    return scenario, seed


def trace_from_jsonl(text: str) -> tuple[Scenario, int, list[TraceRecord]]:
    """Parse a persisted trace back into its scenario, seed and records."""
    scenario, seed = trace_header(text)
    lines = text.splitlines()
    records = [record_from_dict(json.loads(line)) for line in lines[1:] if line]
    return scenario, seed, records


def trace_to_csv(records: list[TraceRecord]) -> str:
    """Flatten a trace to the fixed-column CSV form."""
    lines = [CSV_HEADER]
    for r in records:
        row = [str(r.tick), str(r.animat), repr(r.x), repr(r.y), r.behavior]
        row.extend(repr(r.alpha.get(c, 0.0)) for c in CSV_COLUMNS)
        row.extend(repr(r.activation.get(c, 0.0)) for c in CSV_COLUMNS)
        row.extend(repr(r.internal.get(c, 0.0)) for c in CSV_COLUMNS)
        row.append(repr(r.strength))
        row.append(repr(r.lucidity))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def verify_trace(text: str) -> tuple[bool, int | None]:
    """Re-simulate a persisted trace and compare line by line.

    The header alone drives the re-simulation, so any record-line change,
    including one that breaks its JSON, shows up as a mismatch.  Returns
    (ok, first mismatching line number), 1-based counting the header.
    """
    scenario, seed = trace_header(text)
    records = Simulation(scenario, seed).run()
    expected = trace_to_jsonl(records, scenario, seed).splitlines()
    got = text.splitlines()
    for number, (want, have) in enumerate(zip(expected, got), start=1):
        if want != have:
            return False, number
    if len(expected) != len(got):
        return False, min(len(expected), len(got)) + 1
    return True, None


def metrics_to_json(metrics: ExperimentMetrics) -> str:
    return json.dumps(metrics.to_dict(), indent=2, allow_nan=False) + "\n"
