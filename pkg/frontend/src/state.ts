/**
 * The console's entire client-side state and the pure functions that
 * evolve it. The view is stateless with respect to simulation truth:
 * everything here derives from received snapshots and local gestures,
 * and no function simulates anything on its own. Feeding the same
 * snapshot sequence through a fresh state — even with reconnects in
 * between — reproduces the same charts and the same rendered view.
 */

import { RingBuffer } from "./ringbuffer.js";
import type {
  Behavior,
  Command,
  EntityKind,
  Reply,
  Snapshot,
} from "./protocol.js";
import type { Viewport } from "./transform.js";
import { canvasToWorld } from "./transform.js";

/** How many ticks of history each strip chart keeps. */
export const CHART_CAPACITY = 2000;

export type Tool = EntityKind | "select";

export type ConnectionStatus = "connecting" | "open" | "closed";

/** One animat's charted history, all buffers advancing in lockstep. */
export interface AnimatSeries {
  ticks: RingBuffer<number>;
  alpha: Map<string, RingBuffer<number>>;
  activation: Map<string, RingBuffer<number>>;
  internal: Map<string, RingBuffer<number>>;
  behavior: RingBuffer<Behavior>;
}

export interface ViewState {
  status: ConnectionStatus;
  /** Latest rendered snapshot; the view never draws anything else. */
  snapshot: Snapshot | null;
  tool: Tool;
  /** Chart histories keyed by animat id. */
  charts: Map<number, AnimatSeries>;
  paused: boolean;
  /** Animat whose charts are shown. */
  selectedAnimat: number;
  /** Commands awaiting replies; the server answers strictly in order. */
  pending: Command[];
  /** Most recent server rejection, shown inline until the next gesture. */
  lastError: string | null;
  /** Highest seq seen on the current connection (resets on reconnect). */
  lastSeq: number;
}

export function initialState(): ViewState {
  return {
    status: "connecting",
    snapshot: null,
    tool: "food_source",
    charts: new Map(),
    paused: false,
    selectedAnimat: 0,
    pending: [],
    lastError: null,
    lastSeq: -1,
  };
}

export function connectionOpened(state: ViewState): void {
  state.status = "open";
  state.lastSeq = -1;
  state.pending = [];
}

export function connectionClosed(state: ViewState): void {
  state.status = "closed";
  state.pending = [];
}

function newSeries(): AnimatSeries {
  return {
    ticks: new RingBuffer(CHART_CAPACITY),
    alpha: new Map(),
    activation: new Map(),
    internal: new Map(),
    behavior: new RingBuffer(CHART_CAPACITY),
  };
}

function appendKeyed(
  buffers: Map<string, RingBuffer<number>>,
  values: Record<string, number>,
): void {
  for (const [key, value] of Object.entries(values)) {
    let buffer = buffers.get(key);
    if (buffer === undefined) {
      buffer = new RingBuffer(CHART_CAPACITY);
      buffers.set(key, buffer);
    }
    buffer.push(value);
  }
}

/**
 * Fold one snapshot into the state. Returns true when it was applied,
 * false when it was dropped as stale.
 *
 * Staleness has two layers: `seq` orders frames within one connection
 * (anything at or below lastSeq is a duplicate or reordering and is
 * dropped whole), while `tick` orders chart history across the whole
 * session — a mutation echo repeats the current tick, and a reconnect
 * may replay ticks already charted, so a snapshot's tick contributes to
 * the charts only when it is strictly newer than what they hold.
 */
export function applySnapshot(state: ViewState, snapshot: Snapshot): boolean {
  if (snapshot.seq <= state.lastSeq) {
    return false;
  }
  state.lastSeq = snapshot.seq;
  state.snapshot = snapshot;
  state.paused = snapshot.paused;
  for (const animat of snapshot.animats) {
    let series = state.charts.get(animat.id);
    if (series === undefined) {
      series = newSeries();
      state.charts.set(animat.id, series);
    }
    const lastTick = series.ticks.last();
    if (lastTick !== undefined && snapshot.tick <= lastTick) {
      continue;
    }
    series.ticks.push(snapshot.tick);
    appendKeyed(series.alpha, animat.alpha);
    appendKeyed(series.activation, animat.activation);
    appendKeyed(series.internal, animat.internal);
    series.behavior.push(animat.behavior);
  }
  return true;
}

/**
 * Map a pointer click on the world canvas to at most one command.
 *
 * Placement tools emit a place_entity at the transformed coordinates;
 * clicks outside the world rectangle emit nothing. The select tool is
 * local: it switches which animat the charts follow (nearest to the
 * click) and never talks to the server.
 */
export function commandForClick(
  state: ViewState,
  view: Viewport,
  px: number,
  py: number,
): Command | null {
  const world = canvasToWorld(view, px, py);
  if (world === null) {
    return null;
  }
  if (state.tool === "select") {
    const snapshot = state.snapshot;
    if (snapshot !== null && snapshot.animats.length > 0) {
      let best = snapshot.animats[0]!;
      let bestDist = Infinity;
      for (const animat of snapshot.animats) {
        const d = (animat.x - world.x) ** 2 + (animat.y - world.y) ** 2;
        if (d < bestDist) {
          bestDist = d;
          best = animat;
        }
      }
      state.selectedAnimat = best.id;
    }
    return null;
  }
  return { type: "place_entity", kind: state.tool, x: world.x, y: world.y };
}

/** Record a command as sent; replies are matched back in FIFO order. */
export function enqueueCommand(state: ViewState, command: Command): void {
  state.pending.push(command);
  state.lastError = null;
}

/**
 * Match one reply to the oldest pending command. Rejections surface as
 * an inline message naming the command and the offending field.
 */
export function applyReply(state: ViewState, reply: Reply): Command | null {
  const command = state.pending.shift() ?? null;
  if (reply.type === "error") {
    const subject = command === null ? "command" : command.type;
    state.lastError = `${subject} rejected — ${reply.field}: ${reply.msg}`;
  }
  return command;
}
