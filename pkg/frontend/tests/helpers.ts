import type {
  AnimatView,
  Behavior,
  EntityView,
  Snapshot,
} from "../src/protocol.js";

let seqCounter = 0;

export function resetSeq(): void {
  seqCounter = 0;
}

export function animat(overrides: Partial<AnimatView> = {}): AnimatView {
  return {
    id: 0,
    x: 50,
    y: 50,
    heading: 0,
    behavior: "wander",
    alpha: { hunger: 0.7 },
    activation: { hunger: 0.5 },
    internal: { hunger: 0.8 },
    strength: 1,
    lucidity: 1,
    ...overrides,
  };
}

export function entity(overrides: Partial<EntityView> = {}): EntityView {
  return {
    id: 0,
    kind: "food_source",
    x: 20,
    y: 20,
    radius: 2,
    magnitude: null,
    ...overrides,
  };
}

export function snapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  seqCounter += 1;
  return {
    type: "snapshot",
    seq: seqCounter,
    tick: seqCounter - 1,
    paused: false,
    world: { width: 100, height: 100 },
    entities: [],
    animats: [animat()],
    ...overrides,
  };
}

/** A run of snapshots with the given per-tick behaviours and alphas. */
export function snapshotRun(
  behaviors: Behavior[],
  alphas?: number[],
): Snapshot[] {
  return behaviors.map((behavior, index) =>
    snapshot({
      animats: [
        animat({
          behavior,
          alpha: { hunger: alphas?.[index] ?? 0.7 },
        }),
      ],
    }),
  );
}
