/**
 * Browser wiring: grid, panels, and buttons over a SessionClient.
 * All truth comes from the message feed; this file only renders and stages.
 */

import { canonicalJson } from "./canonical.js";
import { SessionClient } from "./client.js";
import { gridModel, obligations, stageCell, submitEnabled } from "./gameView.js";
import { certificateLines, monitorRows } from "./panels.js";
import { Cell, SessionConfig, SessionMessage } from "./protocol.js";
import { ViewState, initialView, reduceBurst } from "./store.js";

const $ = (id: string) => document.getElementById(id)!;

let client: SessionClient | null = null;
let view: ViewState = initialView();
let staged: Cell[] = [];
let abelian = false;
let busy = false;

function render() {
  const state = view.state;
  const status = $("status");
  if (!state) {
    status.textContent = "no session";
    return;
  }
  const mine = client && state.toMove === client.humanSide;
  status.textContent = view.over
    ? "session over"
    : `step ${state.step}, ${mine ? "your move" : "engine to move"} (block through ${state.blockBound})`;

  renderGrid();
  renderObligations();
  renderMonitors();
  renderVerdict();
  ($("submit") as HTMLButtonElement).disabled =
    busy || view.over || !client || !submitEnabled(state, staged, client.humanSide, abelian);
  $("errors").textContent = view.errors.join("\n");
}

function renderGrid() {
  const state = view.state!;
  const model = gridModel(state, staged, client ? client.humanSide : "eve");
  const table = $("grid");
  table.innerHTML = "";
  const head = document.createElement("tr");
  head.appendChild(document.createElement("th"));
  for (let j = 1; j <= model.size; j++) {
    const th = document.createElement("th");
    th.textContent = String(j);
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const row of model.rows) {
    const tr = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = String(row[0]!.row);
    tr.appendChild(th);
    for (const cell of row) {
      const td = document.createElement("td");
      td.className =
        (cell.inBlock ? "in-block " : "") + (cell.staged ? "staged " : "") + (cell.editable ? "editable" : "");
      td.textContent = cell.value === null ? "" : String(cell.value);
      if (cell.editable && !busy && !view.over) {
        td.onclick = () => promptCell(cell.row, cell.col);
      }
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
}

function promptCell(i: number, j: number) {
  const raw = window.prompt(`value for cell (${i},${j})`);
  if (!raw) return;
  const k = Number(raw);
  const rejection = stageCell(view.state!, staged, [i, j, k]);
  if (rejection) {
    view = { ...view, errors: [...view.errors, rejection] };
  } else {
    staged = [...staged, [i, j, k]];
  }
  render();
}

function renderObligations() {
  const o = obligations(view.state!, staged, abelian);
  const bits: string[] = [];
  if (o.missingCells.length) {
    bits.push(`fill ${o.missingCells.map(([i, j]) => `(${i},${j})`).join(" ")}`);
  }
  if (o.rowsWithoutIdentity.length) bits.push(`rows needing a 1: ${o.rowsWithoutIdentity.join(",")}`);
  if (o.colsWithoutIdentity.length) bits.push(`columns needing a 1: ${o.colsWithoutIdentity.join(",")}`);
  if (o.asymmetric.length) {
    bits.push(`unmirrored: ${o.asymmetric.map(([i, j]) => `(${i},${j})`).join(" ")}`);
  }
  $("obligations").textContent = bits.length ? bits.join(" | ") : "move is structurally complete";
}

function renderMonitors() {
  const list = $("monitors");
  list.innerHTML = "";
  for (const row of monitorRows(view.monitors)) {
    const li = document.createElement("li");
    li.className = row.status.startsWith("achieved") ? "achieved" : "pending";
    li.textContent = row.note ? `${row.label}: ${row.status} (${row.note})` : `${row.label}: ${row.status}`;
    list.appendChild(li);
  }
}

function renderVerdict() {
  const v = view.lastVerdict;
  $("verdict").textContent = !v
    ? ""
    : v.verdict === "legal"
      ? `legal (witness: ${v.witnessRef ? canonicalJson(v.witnessRef) : "none"})`
      : `${v.verdict}: ${v.reason}`;
  const cert = $("certificate");
  cert.innerHTML = "";
  if (view.certificate?.certificate) {
    for (const line of certificateLines(view.certificate.certificate)) {
      const li = document.createElement("li");
      li.textContent = line;
      cert.appendChild(li);
    }
  }
}

function apply(msgs: SessionMessage[]) {
  view = reduceBurst(view, msgs);
  staged = [];
  render();
}

async function start() {
  const side = ($("side") as HTMLSelectElement).value as "eve" | "odd";
  const opponent = ($("opponent") as HTMLSelectElement).value as "random" | "spoiler" | "scheduler";
  const seed = Number(($("seed") as HTMLInputElement).value || "0");
  abelian = ($("mode") as HTMLSelectElement).value === "abelian";
  const scheduleRaw = ($("schedule") as HTMLTextAreaElement).value.trim();
  const config: SessionConfig = {
    mode: abelian ? "abelian" : "general",
    humanSide: side,
    opponent: { kind: opponent, seed },
  };
  if (scheduleRaw) config.schedule = JSON.parse(scheduleRaw);

  const url = `ws://${window.location.hostname || "127.0.0.1"}:8321/ws`;
  const ws = new WebSocket(url);
  await new Promise((resolve, reject) => {
    ws.onopen = resolve;
    ws.onerror = reject;
  });
  client = new SessionClient(ws as never);
  view = initialView();
  busy = true;
  render();
  apply(await client.create(config));
  busy = false;
  if (client.sessionId) window.sessionStorage.setItem("session", client.sessionId);
  render();
}

async function submit() {
  if (!client || busy) return;
  busy = true;
  render();
  try {
    apply(await client.move(staged));
  } finally {
    busy = false;
    render();
  }
}

async function exportTranscript() {
  if (!client) return;
  const snap = await client.snapshot();
  const bytes = canonicalJson(snap.transcript);
  const blob = new Blob([bytes], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = `transcript-${client.sessionId ?? "session"}.json`;
  a.click();
}

function wire() {
  ($("start") as HTMLButtonElement).onclick = () => void start();
  ($("submit") as HTMLButtonElement).onclick = () => void submit();
  ($("export") as HTMLButtonElement).onclick = () => void exportTranscript();
  ($("resign") as HTMLButtonElement).onclick = async () => {
    if (client) apply(await client.resign());
  };
  ($("clear") as HTMLButtonElement).onclick = () => {
    staged = [];
    render();
  };
}

if (typeof document !== "undefined") {
  wire();
  render();
}
