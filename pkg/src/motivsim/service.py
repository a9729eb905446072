"""Live simulation service over websockets.

One loop task owns the simulation.  Connection handlers only enqueue
commands; the loop drains the queue between ticks, applies each command
atomically, replies to its issuer, then steps and broadcasts snapshots.
The service adds no randomness of its own, so a served run with no
state-changing commands reproduces the CLI trace exactly.

Commands are JSON objects discriminated by "type": place_entity,
remove_entity, set_animat_state, set_alpha_params, pause, resume,
step_n, reset_scenario, set_snapshot_rate.  Replies are {"type":"ok",...}
or {"type":"error","msg":...,"field":...}.  Snapshots are
{"type":"snapshot","seq":n,"tick":n,"animats":[...],"entities":[...],
"paused":b} plus world dimensions.
"""

from __future__ import annotations

import asyncio
import dataclasses
import json
import logging
import math
from dataclasses import dataclass
from typing import Any

from websockets.asyncio.server import serve
from websockets.exceptions import ConnectionClosed

from .harness import Simulation
from .scenarios import Scenario, builtin_scenario
from .world import Entity, EntityKind, MotorBehavior, TraceRecord

logger = logging.getLogger(__name__)

MAX_STEP_N = 100_000


def _error(msg: str, field: str) -> dict:
    return {"type": "error", "msg": msg, "field": field}


def _ok(**extra: Any) -> dict:
    reply = {"type": "ok"}
    reply.update(extra)
    return reply


@dataclass
class _Conn:
    seq: int = 0
    rate: int = 1


class LiveService:
    """Simulation state plus the command logic the loop applies between ticks."""

    def __init__(self, scenario: Scenario, seed: int | None = None,
                 start_paused: bool = False, tick_rate: float = 20.0):
        self.scenario = scenario
        self.seed = seed
        self.sim = Simulation(scenario, seed)
        self.paused = start_paused
        self.tick_rate = tick_rate
        self.pending_steps = 0
        self.last_records: list[TraceRecord] | None = None

    def _number(self, payload: dict, key: str, lo: float | None = None,
                hi: float | None = None) -> float:
        value = payload.get(key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise _Invalid(f"{key} must be a number", key)
        value = float(value)
        if math.isnan(value):
            raise _Invalid(f"{key} must not be NaN", key)
        if lo is not None and value < lo:
            raise _Invalid(f"{key} must be >= {lo}", key)
        if hi is not None and value > hi:
            raise _Invalid(f"{key} must be <= {hi}", key)
        return value

    def _animat(self, payload: dict):
        index = payload.get("animat")
        if isinstance(index, bool) or not isinstance(index, int):
            raise _Invalid("animat must be an integer", "animat")
        if not 0 <= index < len(self.sim.animats):
            raise _Invalid("no such animat", "animat")
        return self.sim.animats[index]

    def apply_command(self, payload: Any) -> tuple[dict, bool]:
        """Validate and apply one command; returns (reply, state_mutated)."""
        if not isinstance(payload, dict):
            return _error("message must be a JSON object", "type"), False
        kind = payload.get("type")
        try:
            if kind == "place_entity":
                return self._place_entity(payload)
            if kind == "remove_entity":
                return self._remove_entity(payload)
            if kind == "set_animat_state":
                return self._set_animat_state(payload)
            if kind == "set_alpha_params":
                return self._set_alpha_params(payload)
            if kind == "pause":
                self.paused = True
                return _ok(), False
            if kind == "resume":
                self.paused = False
                return _ok(), False
            if kind == "step_n":
                n = payload.get("n")
                if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                    raise _Invalid("n must be a positive integer", "n")
                self.pending_steps = min(self.pending_steps + n, MAX_STEP_N)
                return _ok(), False
            if kind == "reset_scenario":
                return self._reset_scenario(payload)
            if kind == "set_snapshot_rate":
                k = payload.get("k")
                if isinstance(k, bool) or not isinstance(k, int) or k < 1:
                    raise _Invalid("k must be a positive integer", "k")
                raise _Rate(k)
            raise _Invalid("unknown command type", "type")
        except _Invalid as exc:
            return _error(exc.msg, exc.field), False

    def _place_entity(self, payload: dict) -> tuple[dict, bool]:
        kind = payload.get("kind")
        valid = tuple(k.value for k in EntityKind)
        if kind not in valid:
            raise _Invalid(f"kind must be one of {', '.join(valid)}", "kind")
        x = self._number(payload, "x", lo=0.0, hi=self.sim.world.width)
        y = self._number(payload, "y", lo=0.0, hi=self.sim.world.height)
        radius = self._number(payload, "radius", lo=0.0) if "radius" in payload else 1.0
        if radius <= 0.0:
            raise _Invalid("radius must be positive", "radius")
        if "magnitude" not in payload or payload.get("magnitude") is None:
            magnitude = math.inf
        else:
            magnitude = self._number(payload, "magnitude", lo=0.0)
        entity = self.sim.world.add_entity(
            Entity(kind=EntityKind(kind), x=x, y=y, radius=radius, magnitude=magnitude)
        )
        return _ok(id=entity.id), True

    def _remove_entity(self, payload: dict) -> tuple[dict, bool]:
        entity_id = payload.get("id")
        if isinstance(entity_id, bool) or not isinstance(entity_id, int):
            raise _Invalid("id must be an integer", "id")
        if not self.sim.world.remove_entity(entity_id):
            raise _Invalid("no such entity", "id")
        return _ok(), True

    def _set_animat_state(self, payload: dict) -> tuple[dict, bool]:
        animat = self._animat(payload)
        state = payload.get("state")
        if state not in animat.internal:
            raise _Invalid("no such internal state", "state")
        value = self._number(payload, "value", lo=0.0, hi=1.0)
        animat.internal[state] = value
        return _ok(), True

    def _set_alpha_params(self, payload: dict) -> tuple[dict, bool]:
        animat = self._animat(payload)
        column_id = payload.get("column")
        try:
            column = animat.network.column(column_id)
        except (KeyError, TypeError):
            raise _Invalid("no such column", "column") from None
        names = ("alpha", "alpha_min", "alpha_max", "delta", "rho", "theta", "epsilon_ext")
        changes = {}
        for name in names:
            if name in payload:
                changes[name] = self._number(payload, name)
        if not changes:
            raise _Invalid("no parameter given", "column")
        try:
            column.alpha_state = dataclasses.replace(column.alpha_state, **changes)
        except ValueError as exc:
            message = str(exc)
            raise _Invalid(message, message.split()[0]) from None
        return _ok(), True

    def _reset_scenario(self, payload: dict) -> tuple[dict, bool]:
        scenario = self.scenario
        if "scenario" in payload:
            name = payload["scenario"]
            try:
                scenario = builtin_scenario(name)
            except (KeyError, TypeError):
                raise _Invalid("unknown scenario", "scenario") from None
        self.scenario = scenario
        self.sim = Simulation(scenario, self.seed)
        self.pending_steps = 0
        self.last_records = None
        return _ok(), True

    def snapshot(self, conn: _Conn) -> str:
        """Render the current state as this connection's next snapshot."""
        conn.seq += 1
        if self.last_records is not None:
            tick = self.last_records[0].tick
            animats = [
                {
                    "id": r.animat, "x": r.x, "y": r.y, "heading": r.heading,
                    "behavior": r.behavior, "alpha": r.alpha, "activation": r.activation,
                    "internal": r.internal, "strength": r.strength, "lucidity": r.lucidity,
                }
                for r in self.last_records
            ]
        else:
            tick = self.sim.tick
            animats = [
                {
                    "id": a.id, "x": a.x, "y": a.y, "heading": a.heading,
                    "behavior": MotorBehavior.WANDER.value,
                    "alpha": a.network.alphas(),
                    "activation": a.network.last_activations(),
                    "internal": dict(a.internal),
                    "strength": a.strength, "lucidity": a.lucidity,
                }
                for a in self.sim.animats
            ]
        doc = {
            "type": "snapshot",
            "seq": conn.seq,
            "tick": tick,
            "paused": self.paused,
            "world": {"width": self.sim.world.width, "height": self.sim.world.height},
            "entities": [
                {
                    "id": e.id, "kind": e.kind.value, "x": e.x, "y": e.y,
                    "radius": e.radius,
                    "magnitude": None if math.isinf(e.magnitude) else e.magnitude,
                }
                for e in self.sim.world.entities
            ],
            "animats": animats,
        }
        return json.dumps(doc, allow_nan=False, separators=(",", ":"))


class _Invalid(Exception):
    def __init__(self, msg: str, field: str):
        super().__init__(msg)
        self.msg = msg
        self.field = field


class _Rate(Exception):
    """Control-flow marker: set_snapshot_rate acts on the connection."""

    def __init__(self, k: int):
        super().__init__(str(k))
        self.k = k


async def run_service(
    scenario: Scenario,
    host: str = "127.0.0.1",
    port: int = 8765,
    seed: int | None = None,
    tick_rate: float = 20.0,
    start_paused: bool = False,
    wait_for_client: bool = False,
    bound_port: "asyncio.Future[int] | None" = None,
) -> None:
    """Serve one simulation until cancelled.

    wait_for_client delays the first tick until a viewer is connected;
    bound_port, when given, receives the actual listening port.
    """
    service = LiveService(scenario, seed, start_paused, tick_rate)
    queue: asyncio.Queue = asyncio.Queue()
    conns: dict[Any, _Conn] = {}

    async def handler(connection) -> None:
        conns[connection] = _Conn()
        logger.info("viewer connected")
        try:
            async for raw in connection:
                queue.put_nowait((connection, raw))
        except ConnectionClosed:
            pass
        finally:
            conns.pop(connection, None)
            logger.info("viewer disconnected")

    async def send_safe(connection, text: str) -> None:
        try:
            await connection.send(text)
        except ConnectionClosed:
            conns.pop(connection, None)

    async def handle_one(connection, raw) -> bool:
        try:
            payload = json.loads(raw)
        except json.JSONDecodeError:
            await send_safe(connection, json.dumps(_error("not valid JSON", "type")))
            return False
        try:
            reply, mutated = service.apply_command(payload)
        except _Rate as rate:
            conn = conns.get(connection)
            if conn is not None:
                conn.rate = rate.k
            reply, mutated = _ok(), False
        await send_safe(connection, json.dumps(reply))
        return mutated

    async def broadcast(stepped: bool) -> None:
        for connection, conn in list(conns.items()):
            if stepped and (service.sim.tick % conn.rate) != 0:
                continue
            await send_safe(connection, service.snapshot(conn))

    async def loop() -> None:
        while True:
            mutated = False
            while True:
                try:
                    connection, raw = queue.get_nowait()
                except asyncio.QueueEmpty:
                    break
                mutated = (await handle_one(connection, raw)) or mutated
            if wait_for_client and not conns:
                await asyncio.sleep(0.01)
                continue
            stepping = not self_done() and (not service.paused or service.pending_steps > 0)
            if stepping:
                service.last_records = service.sim.step()
                if service.pending_steps > 0:
                    service.pending_steps -= 1
                await broadcast(stepped=True)
                if service.tick_rate > 0:
                    await asyncio.sleep(1.0 / service.tick_rate)
                else:
                    await asyncio.sleep(0)
            else:
                if mutated:
                    await broadcast(stepped=False)
                try:
                    connection, raw = await asyncio.wait_for(queue.get(), timeout=0.05)
                except asyncio.TimeoutError:
                    continue
                if await handle_one(connection, raw):
                    await broadcast(stepped=False)

    def self_done() -> bool:
        return service.sim.done

    async with serve(handler, host, port) as server:
        actual = server.sockets[0].getsockname()[1] if server.sockets else port
        if bound_port is not None and not bound_port.done():
            bound_port.set_result(actual)
        print(f"listening on ws://{host}:{actual}", flush=True)
        await loop()
