/**
 * Strip charts over one animat's history: motivation degrees and
 * activations as line series, need levels as bars, and the selected
 * behaviour as a colored timeline band. Like the world view, the
 * geometry builders are pure and the canvas painter is a thin walk
 * over their output.
 */

import type { AnimatSeries } from "./state.js";
import type { Behavior } from "./protocol.js";
import { BEHAVIOR_COLORS } from "./render.js";
import { RingBuffer } from "./ringbuffer.js";

export interface ChartGeometry {
  width: number;
  height: number;
}

export interface Polyline {
  key: string;
  /** Flat [x0, y0, x1, y1, …] in chart-local pixels. */
  points: number[];
}

export interface Band {
  behavior: Behavior;
  x0: number;
  x1: number;
  /** First tick covered — band edges land on exact tick boundaries. */
  tick: number;
}

const SERIES_COLORS = ["#e53935", "#1e88e5", "#43a047", "#fb8c00", "#8e24aa"];

export function seriesColor(index: number): string {
  return SERIES_COLORS[index % SERIES_COLORS.length] as string;
}

function xAt(index: number, count: number, capacity: number, width: number): number {
  // The x axis always spans one full buffer capacity, so a filling
  // buffer grows rightward and a full one scrolls left as ticks evict.
  const step = width / Math.max(1, capacity - 1);
  return (capacity - count + index) * step;
}

/**
 * Build one polyline per keyed series, values 0..1 mapped to the chart
 * height with larger values higher on screen.
 */
export function valuePolylines(
  buffers: Map<string, RingBuffer<number>>,
  geometry: ChartGeometry,
): Polyline[] {
  const out: Polyline[] = [];
  for (const [key, buffer] of buffers) {
    const values = buffer.toArray();
    const points: number[] = [];
    for (let i = 0; i < values.length; i += 1) {
      points.push(
        xAt(i, values.length, buffer.capacity, geometry.width),
        (1 - (values[i] as number)) * geometry.height,
      );
    }
    out.push({ key, points });
  }
  out.sort((a, b) => (a.key < b.key ? -1 : a.key > b.key ? 1 : 0));
  return out;
}

/**
 * Merge the behaviour history into runs of equal behaviour. Each run
 * becomes one band; a behaviour change starts a new band at exactly the
 * tick it happened.
 */
export function behaviorBands(
  behaviors: RingBuffer<Behavior>,
  ticks: RingBuffer<number>,
  geometry: ChartGeometry,
): Band[] {
  const history = behaviors.toArray();
  const tickValues = ticks.toArray();
  const bands: Band[] = [];
  const count = history.length;
  for (let i = 0; i < count; i += 1) {
    const behavior = history[i] as Behavior;
    const x = xAt(i, count, behaviors.capacity, geometry.width);
    const previous = bands[bands.length - 1];
    if (previous !== undefined && previous.behavior === behavior) {
      previous.x1 = x;
      continue;
    }
    if (previous !== undefined) {
      previous.x1 = x;
    }
    bands.push({ behavior, x0: x, x1: x, tick: tickValues[i] ?? i });
  }
  const last = bands[bands.length - 1];
  if (last !== undefined) {
    last.x1 = geometry.width;
  }
  return bands;
}

export interface ChartPanel {
  title: string;
  lines: Polyline[];
}

export function drawCharts(
  ctx: CanvasRenderingContext2D,
  series: AnimatSeries,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  const bandHeight = 14;
  const gap = 18;
  const panelHeight = (height - bandHeight - 4 * gap) / 3;
  const panels: ChartPanel[] = [
    {
      title: "motivation degree",
      lines: valuePolylines(series.alpha, { width, height: panelHeight }),
    },
    {
      title: "activation",
      lines: valuePolylines(series.activation, { width, height: panelHeight }),
    },
    {
      title: "need levels",
      lines: valuePolylines(series.internal, { width, height: panelHeight }),
    },
  ];
  let top = 0;
  for (const panel of panels) {
    ctx.save();
    ctx.translate(0, top);
    ctx.fillStyle = "#fafafa";
    ctx.fillRect(0, 0, width, panelHeight);
    ctx.strokeStyle = "#e0e0e0";
    ctx.strokeRect(0.5, 0.5, width - 1, panelHeight - 1);
    panel.lines.forEach((line, index) => {
      ctx.strokeStyle = seriesColor(index);
      ctx.lineWidth = 1.2;
      ctx.beginPath();
      for (let p = 0; p + 1 < line.points.length; p += 2) {
        const x = line.points[p] as number;
        const y = line.points[p + 1] as number;
        if (p === 0) {
          ctx.moveTo(x, y);
        } else {
          ctx.lineTo(x, y);
        }
      }
      ctx.stroke();
    });
    ctx.fillStyle = "#616161";
    ctx.font = "10px sans-serif";
    ctx.textAlign = "left";
    ctx.fillText(
      panel.title +
        (panel.lines.length > 0
          ? "  (" + panel.lines.map((l) => l.key).join(", ") + ")"
          : ""),
      4,
      10,
    );
    ctx.restore();
    top += panelHeight + gap;
  }
  ctx.save();
  ctx.translate(0, top);
  for (const band of behaviorBands(series.behavior, series.ticks, {
    width,
    height: bandHeight,
  })) {
    ctx.fillStyle = BEHAVIOR_COLORS[band.behavior];
    ctx.fillRect(band.x0, 0, Math.max(1, band.x1 - band.x0), bandHeight);
  }
  ctx.fillStyle = "#616161";
  ctx.font = "10px sans-serif";
  ctx.fillText("behaviour", 4, bandHeight + 11);
  ctx.restore();
}
