// DOM rendering for the two views. No framework: build elements, replace
// children. State lives in play.ts / graph.ts structures.

import type { EmergenceReport, GraphDoc } from "./types.js";
import type { PlayState } from "./play.js";
import { currentDay, currentStep, stepsUntilBoom, visibleLines } from "./play.js";
import { Layout, layoutGraph, nodeDetail, styleClass, visibleUnderFilter } from "./graph.js";

const NODE_W = 170;
const NODE_H = 46;
const GAP_X = 60;
const GAP_Y = 18;

export function renderPlay(root: HTMLElement, state: PlayState): void {
  const status = root.querySelector(".status-bar") as HTMLElement;
  status.innerHTML = "";
  status.append(
    chip(`Day ${currentDay(state)}`),
    chip(`Step ${currentStep(state)}/${state.stepLimit}`),
    chip(`Boom in ${stepsUntilBoom(state)}`, stepsUntilBoom(state) <= 5 ? "chip-danger" : ""),
  );

  const log = root.querySelector(".chat-log") as HTMLElement;
  log.innerHTML = "";
  for (const line of visibleLines(state)) {
    const bubble = document.createElement("div");
    bubble.className = `bubble bubble-${line.kind}`;
    if (line.speaker) {
      const speaker = document.createElement("div");
      speaker.className = "speaker";
      speaker.textContent = line.speaker;
      bubble.append(speaker);
    }
    const text = document.createElement("div");
    text.textContent = line.text;
    bubble.append(text);
    log.append(bubble);
  }

  const bannerHost = root.querySelector(".banner-host") as HTMLElement;
  bannerHost.innerHTML = "";
  if (state.banner) {
    const banner = document.createElement("div");
    banner.className = `banner banner-${state.banner.kind}`;
    banner.textContent =
      state.banner.kind === "explosion"
        ? `The bomb exploded. Day ${state.banner.day} begins — you remember everything.`
        : state.banner.kind === "won"
          ? "You defused the bomb. The village is safe!"
          : state.banner.kind === "over"
            ? `Session finished: ${state.banner.detail}`
            : `Connection trouble: ${state.banner.detail}`;
    bannerHost.append(banner);
  }

  const input = root.querySelector(".command-input") as HTMLInputElement;
  const button = root.querySelector(".command-send") as HTMLButtonElement;
  const blocked = state.pending || state.status !== "RUNNING";
  input.disabled = blocked;
  button.disabled = blocked;
  log.scrollTop = log.scrollHeight;
}

export function renderGraph(
  root: HTMLElement,
  doc: GraphDoc,
  report: EmergenceReport,
  category: string | null,
  selected: string | null,
): void {
  const layout: Layout = layoutGraph(doc);
  const visible = visibleUnderFilter(doc, report, category);
  const svg = root.querySelector(".graph-svg") as unknown as SVGSVGElement;
  svg.innerHTML = "";
  const width = layout.layerCount * (NODE_W + GAP_X) + GAP_X;
  const height = Math.max(...layout.layerSizes, 1) * (NODE_H + GAP_Y) + GAP_Y;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);

  const place = (id: string) => {
    const pos = layout.positions.get(id)!;
    return { px: GAP_X + pos.x * (NODE_W + GAP_X), py: GAP_Y + pos.y * (NODE_H + GAP_Y) };
  };

  for (const [a, b] of doc.edges) {
    if (!visible.has(a) || !visible.has(b)) continue;
    const from = place(a);
    const to = place(b);
    const line = document.createElementNS("http://www.w3.org/2000/svg", "line");
    line.setAttribute("x1", String(from.px + NODE_W));
    line.setAttribute("y1", String(from.py + NODE_H / 2));
    line.setAttribute("x2", String(to.px));
    line.setAttribute("y2", String(to.py + NODE_H / 2));
    line.setAttribute("class", "edge");
    svg.append(line);
  }

  for (const node of doc.nodes) {
    if (!visible.has(node.id)) continue;
    const { px, py } = place(node.id);
    const group = document.createElementNS("http://www.w3.org/2000/svg", "g");
    group.setAttribute(
      "class",
      `node ${styleClass(node)}${node.id === selected ? " node-selected" : ""}`,
    );
    group.setAttribute("data-node-id", node.id);
    group.setAttribute("transform", `translate(${px}, ${py})`);
    const rect = document.createElementNS("http://www.w3.org/2000/svg", "rect");
    rect.setAttribute("width", String(NODE_W));
    rect.setAttribute("height", String(NODE_H));
    rect.setAttribute("rx", "8");
    const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
    label.setAttribute("x", String(NODE_W / 2));
    label.setAttribute("y", String(NODE_H / 2 + 4));
    label.setAttribute("text-anchor", "middle");
    label.textContent =
      node.summary.length > 26 ? node.summary.slice(0, 24) + "…" : node.summary;
    group.append(rect, label);
    svg.append(group);
  }

  const panel = root.querySelector(".detail-panel") as HTMLElement;
  panel.innerHTML = "";
  if (selected) {
    const detail = nodeDetail(doc, report, selected);
    if (detail) {
      panel.append(
        detailRow("Strategy", detail.summary),
        detailRow("Kind", detail.emergent ? "emergent (player-created)" : "designer"),
        detailRow("Category", detail.category ?? "—"),
        detailRow("Milestones", `${detail.milestones} (${detail.stateLabel})`),
        detailRow(
          "Seen in",
          detail.provenance.map((p) => `${p.source}, day ${p.day}`).join("; "),
        ),
      );
    }
  }
}

function chip(text: string, extra = ""): HTMLElement {
  const el = document.createElement("span");
  el.className = `chip ${extra}`.trim();
  el.textContent = text;
  return el;
}

function detailRow(label: string, value: string): HTMLElement {
  const row = document.createElement("div");
  row.className = "detail-row";
  const key = document.createElement("span");
  key.className = "detail-key";
  key.textContent = label;
  const val = document.createElement("span");
  val.textContent = value;
  row.append(key, val);
  return row;
}
