/**
 * World <-> canvas coordinate mapping.
 *
 * The world has its origin at the bottom-left corner with y growing
 * upward; the canvas has its origin at the top-left with y growing
 * downward. Both mappings therefore flip y around the world height —
 * worldToCanvas draws world (0, 0) at the bottom-left of the viewport,
 * and canvasToWorld inverts that for pointer events.
 *
 * The scale is uniform (same factor on both axes) so discs stay round;
 * the world rectangle is centered in the canvas with letterboxing.
 */

export interface Viewport {
  canvasWidth: number;
  canvasHeight: number;
  worldWidth: number;
  worldHeight: number;
}

export function scaleOf(view: Viewport): number {
  return Math.min(
    view.canvasWidth / view.worldWidth,
    view.canvasHeight / view.worldHeight,
  );
}

/** Canvas offset of the world rectangle's top-left corner. */
export function originOf(view: Viewport): { x: number; y: number } {
  const s = scaleOf(view);
  return {
    x: (view.canvasWidth - view.worldWidth * s) / 2,
    y: (view.canvasHeight - view.worldHeight * s) / 2,
  };
}

export function worldToCanvas(
  view: Viewport,
  x: number,
  y: number,
): { x: number; y: number } {
  const s = scaleOf(view);
  const origin = originOf(view);
  return {
    x: origin.x + x * s,
    // y-flip: world y is measured from the bottom edge, canvas y from the top.
    y: origin.y + (view.worldHeight - y) * s,
  };
}

/**
 * Invert worldToCanvas for a pointer position. Returns null when the
 * position falls outside the world rectangle (letterbox margins or
 * beyond), so callers can suppress the gesture entirely.
 */
export function canvasToWorld(
  view: Viewport,
  px: number,
  py: number,
): { x: number; y: number } | null {
  const s = scaleOf(view);
  const origin = originOf(view);
  const x = (px - origin.x) / s;
  const y = view.worldHeight - (py - origin.y) / s;
  if (x < 0 || x > view.worldWidth || y < 0 || y > view.worldHeight) {
    return null;
  }
  return { x, y };
}
