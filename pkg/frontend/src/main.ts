// Application wiring: session bootstrap, command submission, view switch.

import { ApiError, GameClient } from "./api.js";
import {
  applyError,
  applyResponse,
  beginSubmit,
  canSubmit,
  initialState,
  reconcile,
  withSession,
  type PlayState,
} from "./play.js";
import { categoriesPresent } from "./graph.js";
import { renderGraph, renderPlay } from "./render.js";
import type { EmergenceReport, GraphDoc } from "./types.js";

const client = new GameClient("");

async function bootPlay(root: HTMLElement): Promise<void> {
  let state: PlayState = initialState();
  const { session_id } = await client.createSession();
  state = withSession(state, session_id);
  const { records } = await client.getLog(session_id);
  state = reconcile(state, records);
  renderPlay(root, state);

  const form = root.querySelector(".command-form") as HTMLFormElement;
  const input = root.querySelector(".command-input") as HTMLInputElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const text = input.value;
    if (!canSubmit(state, text)) return; // empty submits blocked client-side
    input.value = "";
    state = beginSubmit(state, text);
    renderPlay(root, state);
    try {
      const response = await client.postCommand(state.sessionId!, text);
      state = applyResponse(state, response);
    } catch (error) {
      if (error instanceof ApiError) {
        state = applyError(state, error.status, error.detail);
      } else {
        state = applyError(state, 0, String(error));
        input.value = text; // retry affordance: put the command back
      }
    }
    renderPlay(root, state);
  });
}

async function bootGraph(root: HTMLElement, graphId: string): Promise<void> {
  const doc: GraphDoc = await client.getGraph(graphId);
  const report: EmergenceReport = await client.getEmergence(graphId);
  let category: string | null = null;
  let selected: string | null = null;

  const filter = root.querySelector(".category-filter") as HTMLSelectElement;
  filter.innerHTML = "";
  const allOption = document.createElement("option");
  allOption.value = "";
  allOption.textContent = "all nodes";
  filter.append(allOption);
  for (const cat of categoriesPresent(report)) {
    const option = document.createElement("option");
    option.value = cat;
    option.textContent = cat;
    filter.append(option);
  }
  filter.addEventListener("change", () => {
    category = filter.value || null;
    renderGraph(root, doc, report, category, selected);
  });
  root.addEventListener("click", (event) => {
    const target = (event.target as Element).closest("[data-node-id]");
    selected = target ? target.getAttribute("data-node-id") : null;
    renderGraph(root, doc, report, category, selected);
  });
  renderGraph(root, doc, report, category, selected);
}

function main(): void {
  const playRoot = document.getElementById("play-view");
  const graphRoot = document.getElementById("graph-view");
  const params = new URLSearchParams(window.location.search);
  const graphId = params.get("graph");

  if (graphId && graphRoot) {
    (document.getElementById("play-section") as HTMLElement).hidden = true;
    void bootGraph(graphRoot, graphId);
  } else if (playRoot) {
    (document.getElementById("graph-section") as HTMLElement).hidden = true;
    void bootPlay(playRoot);
  }
}

document.addEventListener("DOMContentLoaded", main);
