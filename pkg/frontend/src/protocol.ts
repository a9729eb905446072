/**
 * Wire types for the simulation service: JSON text frames over one
 * WebSocket, discriminated by `type`. These mirror the server's
 * documented message schema (docs/service-protocol.md in the simulator
 * repository); the console never invents fields of its own.
 */

export type EntityKind =
  | "food_source"
  | "water_source"
  | "grass"
  | "spot"
  | "blob"
  | "obstacle";

export const ENTITY_KINDS: readonly EntityKind[] = [
  "food_source",
  "water_source",
  "grass",
  "spot",
  "blob",
  "obstacle",
];

export type Behavior =
  | "wander"
  | "explore"
  | "approach"
  | "avoid_obstacles"
  | "rest"
  | "eat"
  | "drink"
  | "runaway";

export interface EntityView {
  id: number;
  kind: EntityKind;
  x: number;
  y: number;
  radius: number;
  /** null means unlimited stock. */
  magnitude: number | null;
}

export interface AnimatView {
  id: number;
  x: number;
  y: number;
  heading: number;
  behavior: Behavior;
  alpha: Record<string, number>;
  activation: Record<string, number>;
  internal: Record<string, number>;
  strength: number;
  lucidity: number;
}

export interface Snapshot {
  type: "snapshot";
  /** Strictly increasing per connection. */
  seq: number;
  /** The completed tick this snapshot describes (repeated by mutation echoes). */
  tick: number;
  paused: boolean;
  world: { width: number; height: number };
  entities: EntityView[];
  animats: AnimatView[];
}

export interface OkReply {
  type: "ok";
  /** Present on place_entity acknowledgements. */
  id?: number;
}

export interface ErrorReply {
  type: "error";
  msg: string;
  field: string;
}

export type Reply = OkReply | ErrorReply;
export type ServerMessage = Snapshot | Reply;

export type Command =
  | { type: "pause" }
  | { type: "resume" }
  | { type: "step_n"; n: number }
  | {
      type: "place_entity";
      kind: EntityKind;
      x: number;
      y: number;
      radius?: number;
      magnitude?: number | null;
    }
  | { type: "remove_entity"; id: number }
  | { type: "set_animat_state"; animat: number; state: string; value: number }
  | {
      type: "set_alpha_params";
      animat: number;
      column: string;
      alpha?: number;
      alpha_min?: number;
      alpha_max?: number;
      delta?: number;
      rho?: number;
      theta?: number;
      epsilon_ext?: number;
    }
  | { type: "reset_scenario"; scenario?: string }
  | { type: "set_snapshot_rate"; k: number };

export function isSnapshot(message: ServerMessage): message is Snapshot {
  return message.type === "snapshot";
}

export function isReply(message: ServerMessage): message is Reply {
  return message.type === "ok" || message.type === "error";
}

/**
 * Parse one frame into a ServerMessage, or null for anything that is not
 * a well-formed message (the console must never act on garbage).
 */
export function parseServerMessage(raw: string): ServerMessage | null {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    return null;
  }
  const message = doc as { type?: unknown };
  if (message.type === "snapshot") {
    const snap = doc as Partial<Snapshot>;
    if (
      typeof snap.seq === "number" &&
      typeof snap.tick === "number" &&
      typeof snap.paused === "boolean" &&
      typeof snap.world === "object" &&
      snap.world !== null &&
      Array.isArray(snap.entities) &&
      Array.isArray(snap.animats)
    ) {
      return snap as Snapshot;
    }
    return null;
  }
  if (message.type === "ok") {
    return doc as OkReply;
  }
  if (message.type === "error") {
    const err = doc as Partial<ErrorReply>;
    if (typeof err.msg === "string" && typeof err.field === "string") {
      return err as ErrorReply;
    }
    return null;
  }
  return null;
}
