/**
 * World rendering, split in two: a pure scene builder that turns a
 * snapshot into a display list (testable without a browser), and a thin
 * painter that walks the list onto a canvas context.
 */

import type { Behavior, EntityKind, Snapshot } from "./protocol.js";
import type { Viewport } from "./transform.js";
import { scaleOf, originOf, worldToCanvas } from "./transform.js";

export const ENTITY_COLORS: Record<EntityKind, string> = {
  food_source: "#2e7d32",
  grass: "#7cb342",
  water_source: "#1565c0",
  spot: "#8d6e63",
  blob: "#c62828",
  obstacle: "#616161",
};

export const BEHAVIOR_COLORS: Record<Behavior, string> = {
  wander: "#90a4ae",
  explore: "#ffb300",
  approach: "#1e88e5",
  avoid_obstacles: "#6d4c41",
  rest: "#8d6e63",
  eat: "#2e7d32",
  drink: "#00acc1",
  runaway: "#c62828",
};

export type Glyph =
  | { kind: "grid" }
  | {
      kind: "disc";
      x: number;
      y: number;
      radius: number;
      color: string;
      /** Remaining stock shown for finite sources. */
      label: string | null;
    }
  | {
      kind: "animat";
      x: number;
      y: number;
      /** Canvas-space heading (world heading with the y-flip applied). */
      heading: number;
      radius: number;
      color: string;
      label: string;
      selected: boolean;
    }
  | { kind: "badge"; text: string };

/**
 * Build the display list for one snapshot: always a grid, one disc per
 * entity, one oriented triangle per animat with its behaviour label
 * beside it, and a pause badge when the loop is paused.
 */
export function buildScene(
  snapshot: Snapshot,
  view: Viewport,
  selectedAnimat: number,
): Glyph[] {
  const s = scaleOf(view);
  const glyphs: Glyph[] = [{ kind: "grid" }];
  for (const entity of snapshot.entities) {
    const at = worldToCanvas(view, entity.x, entity.y);
    glyphs.push({
      kind: "disc",
      x: at.x,
      y: at.y,
      radius: entity.radius * s,
      color: ENTITY_COLORS[entity.kind],
      label: entity.magnitude === null ? null : entity.magnitude.toFixed(0),
    });
  }
  for (const animat of snapshot.animats) {
    const at = worldToCanvas(view, animat.x, animat.y);
    glyphs.push({
      kind: "animat",
      x: at.x,
      y: at.y,
      // World angles turn counter-clockwise with y up; the canvas y-flip
      // mirrors them, so the drawn triangle turns clockwise by -heading.
      heading: -animat.heading,
      radius: Math.max(5, 0.8 * s),
      color: BEHAVIOR_COLORS[animat.behavior],
      label: animat.behavior,
      selected: animat.id === selectedAnimat,
    });
  }
  if (snapshot.paused) {
    glyphs.push({ kind: "badge", text: "paused" });
  }
  return glyphs;
}

const GRID_STEP = 10;

export function paintScene(
  ctx: CanvasRenderingContext2D,
  view: Viewport,
  glyphs: Glyph[],
): void {
  ctx.clearRect(0, 0, view.canvasWidth, view.canvasHeight);
  const s = scaleOf(view);
  const origin = originOf(view);
  for (const glyph of glyphs) {
    switch (glyph.kind) {
      case "grid": {
        ctx.fillStyle = "#fafafa";
        ctx.fillRect(
          origin.x,
          origin.y,
          view.worldWidth * s,
          view.worldHeight * s,
        );
        ctx.strokeStyle = "#e0e0e0";
        ctx.lineWidth = 1;
        ctx.beginPath();
        for (let gx = 0; gx <= view.worldWidth; gx += GRID_STEP) {
          const top = worldToCanvas(view, gx, view.worldHeight);
          const bottom = worldToCanvas(view, gx, 0);
          ctx.moveTo(top.x, top.y);
          ctx.lineTo(bottom.x, bottom.y);
        }
        for (let gy = 0; gy <= view.worldHeight; gy += GRID_STEP) {
          const left = worldToCanvas(view, 0, gy);
          const right = worldToCanvas(view, view.worldWidth, gy);
          ctx.moveTo(left.x, left.y);
          ctx.lineTo(right.x, right.y);
        }
        ctx.stroke();
        ctx.strokeStyle = "#9e9e9e";
        ctx.strokeRect(
          origin.x,
          origin.y,
          view.worldWidth * s,
          view.worldHeight * s,
        );
        break;
      }
      case "disc": {
        ctx.fillStyle = glyph.color;
        ctx.globalAlpha = 0.85;
        ctx.beginPath();
        ctx.arc(glyph.x, glyph.y, glyph.radius, 0, 2 * Math.PI);
        ctx.fill();
        ctx.globalAlpha = 1;
        if (glyph.label !== null) {
          ctx.fillStyle = "#212121";
          ctx.font = "10px sans-serif";
          ctx.textAlign = "center";
          ctx.fillText(glyph.label, glyph.x, glyph.y + 3);
        }
        break;
      }
      case "animat": {
        ctx.save();
        ctx.translate(glyph.x, glyph.y);
        ctx.rotate(glyph.heading);
        ctx.fillStyle = glyph.color;
        ctx.beginPath();
        ctx.moveTo(glyph.radius * 1.6, 0);
        ctx.lineTo(-glyph.radius, glyph.radius * 0.9);
        ctx.lineTo(-glyph.radius, -glyph.radius * 0.9);
        ctx.closePath();
        ctx.fill();
        if (glyph.selected) {
          ctx.strokeStyle = "#212121";
          ctx.lineWidth = 1.5;
          ctx.beginPath();
          ctx.arc(0, 0, glyph.radius * 2, 0, 2 * Math.PI);
          ctx.stroke();
        }
        ctx.restore();
        ctx.fillStyle = "#212121";
        ctx.font = "11px sans-serif";
        ctx.textAlign = "left";
        ctx.fillText(glyph.label, glyph.x + glyph.radius * 2 + 2, glyph.y + 3);
        break;
      }
      case "badge": {
        ctx.fillStyle = "#c62828";
        ctx.fillRect(origin.x + 8, origin.y + 8, 64, 20);
        ctx.fillStyle = "#ffffff";
        ctx.font = "bold 12px sans-serif";
        ctx.textAlign = "center";
        ctx.fillText(glyph.text, origin.x + 40, origin.y + 22);
        break;
      }
    }
  }
}
