/**
 * Console entry point: one WebSocket, one world canvas, one chart
 * canvas, and a side panel of controls. Socket frames append to a
 * queue that is drained once per animation frame, so rendering work
 * never runs ahead of the display and a flood of snapshots coalesces
 * into the latest visible state.
 */

import {
  parseServerMessage,
  isSnapshot,
  ENTITY_KINDS,
  type Command,
} from "./protocol.js";
import {
  initialState,
  connectionOpened,
  connectionClosed,
  applySnapshot,
  applyReply,
  commandForClick,
  enqueueCommand,
  type Tool,
} from "./state.js";
import type { Viewport } from "./transform.js";
import { buildScene, paintScene } from "./render.js";
import { drawCharts } from "./charts.js";

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

const worldCanvas = element<HTMLCanvasElement>("world");
const chartCanvas = element<HTMLCanvasElement>("charts");
const statusLine = element<HTMLSpanElement>("status");
const errorLine = element<HTMLDivElement>("error");
const tickLine = element<HTMLSpanElement>("tick");
const toolBox = element<HTMLDivElement>("tools");
const urlInput = element<HTMLInputElement>("url");

const state = initialState();
const inbox: string[] = [];
let socket: WebSocket | null = null;

function send(command: Command): void {
  if (socket === null || socket.readyState !== WebSocket.OPEN) {
    state.lastError = "not connected";
    return;
  }
  enqueueCommand(state, command);
  socket.send(JSON.stringify(command));
}

function connect(url: string): void {
  if (socket !== null) {
    socket.close();
  }
  state.status = "connecting";
  const ws = new WebSocket(url);
  socket = ws;
  ws.onopen = () => connectionOpened(state);
  ws.onclose = () => connectionClosed(state);
  ws.onerror = () => connectionClosed(state);
  ws.onmessage = (event) => {
    if (typeof event.data === "string") {
      inbox.push(event.data);
    }
  };
}

// ---------------------------------------------------------------- controls

for (const kind of [...ENTITY_KINDS, "select"] as Tool[]) {
  const button = document.createElement("button");
  button.textContent = kind.replace("_", " ");
  button.dataset["tool"] = kind;
  button.onclick = () => {
    state.tool = kind;
    for (const other of toolBox.querySelectorAll("button")) {
      other.classList.toggle("active", other === button);
    }
  };
  if (kind === state.tool) {
    button.classList.add("active");
  }
  toolBox.appendChild(button);
}

element<HTMLButtonElement>("pause").onclick = () => send({ type: "pause" });
element<HTMLButtonElement>("resume").onclick = () => send({ type: "resume" });
element<HTMLButtonElement>("step").onclick = () => send({ type: "step_n", n: 1 });
element<HTMLButtonElement>("reset").onclick = () =>
  send({ type: "reset_scenario" });
element<HTMLButtonElement>("connect").onclick = () => connect(urlInput.value);

element<HTMLButtonElement>("apply-params").onclick = () => {
  const column = element<HTMLSelectElement>("param-column").value;
  const command: Command = {
    type: "set_alpha_params",
    animat: state.selectedAnimat,
    column,
  };
  for (const name of ["alpha", "theta", "delta", "rho"] as const) {
    const raw = element<HTMLInputElement>(`param-${name}`).value.trim();
    if (raw !== "") {
      command[name] = Number(raw);
    }
  }
  send(command);
};

worldCanvas.onclick = (event) => {
  const bounds = worldCanvas.getBoundingClientRect();
  const command = commandForClick(
    state,
    viewport(),
    event.clientX - bounds.left,
    event.clientY - bounds.top,
  );
  if (command !== null) {
    send(command);
  }
};

// ---------------------------------------------------------------- rendering

function viewport(): Viewport {
  return {
    canvasWidth: worldCanvas.width,
    canvasHeight: worldCanvas.height,
    worldWidth: state.snapshot?.world.width ?? 100,
    worldHeight: state.snapshot?.world.height ?? 100,
  };
}

function drainInbox(): void {
  for (const raw of inbox.splice(0)) {
    const message = parseServerMessage(raw);
    if (message === null) {
      continue;
    }
    if (isSnapshot(message)) {
      applySnapshot(state, message);
    } else {
      applyReply(state, message);
    }
  }
}

function renderFrame(): void {
  drainInbox();
  statusLine.textContent = `${state.status}${state.paused ? " · paused" : ""}`;
  tickLine.textContent =
    state.snapshot === null ? "–" : `tick ${state.snapshot.tick}`;
  errorLine.textContent = state.lastError ?? "";
  const worldCtx = worldCanvas.getContext("2d");
  if (worldCtx !== null && state.snapshot !== null) {
    paintScene(
      worldCtx,
      viewport(),
      buildScene(state.snapshot, viewport(), state.selectedAnimat),
    );
  }
  const chartCtx = chartCanvas.getContext("2d");
  const series = state.charts.get(state.selectedAnimat);
  if (chartCtx !== null && series !== undefined) {
    drawCharts(chartCtx, series, chartCanvas.width, chartCanvas.height);
  }
  requestAnimationFrame(renderFrame);
}

connect(urlInput.value);
requestAnimationFrame(renderFrame);
