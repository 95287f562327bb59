/** DOM wiring. Everything here delegates to the pure modules; the only
 * numbers this file handles are already-formatted strings from render.ts.
 */

import { ApiClient, ApiError } from "./api.js";
import { layeredLayout } from "./layout.js";
import type { DagLayout } from "./layout.js";
import { renderBars, renderDag, renderPathList } from "./render.js";
import type { PathListing } from "./render.js";
import { ScenarioState } from "./state.js";
import type { ModelDoc, PathInfo } from "./types.js";

const api = new ApiClient("");

let model: ModelDoc | null = null;
let layout: DagLayout | null = null;
let state: ScenarioState | null = null;
let highlight: string[] = [];
let pathListings: PathListing[] = [];
let pathGeneration = 0;
let pathsSearched = false;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function renderAll(): void {
  if (!model || !layout || !state) return;
  el("dag").innerHTML = renderDag(model, layout, state.evidence, highlight);
  el("bars").innerHTML = renderBars(state.barRows(), state.anyEvidence);
  el<HTMLButtonElement>("clear-all").disabled = !state.anyEvidence;
}

function renderPaths(): void {
  el("path-results").innerHTML = pathsSearched
    ? renderPathList(pathListings)
    : "";
}

function showBanner(message: string): void {
  const banner = el("banner");
  banner.textContent = "";
  banner.append(`Could not load the model: ${message} `);
  const retry = document.createElement("button");
  retry.textContent = "retry";
  retry.addEventListener("click", () => void bootstrap());
  banner.append(retry);
  banner.hidden = false;
}

function populateDomainSelects(doc: ModelDoc): void {
  const domains = [...new Set(doc.nodes.map((n) => n.domain))].sort();
  for (const id of ["source-domain", "target-domain"]) {
    const select = el<HTMLSelectElement>(id);
    const previous = select.value;
    select.innerHTML = "";
    for (const d of domains) {
      const option = document.createElement("option");
      option.value = d;
      option.textContent = d;
      select.append(option);
    }
    if (domains.includes(previous)) select.value = previous;
  }
}

async function bootstrap(): Promise<void> {
  el("banner").hidden = true;
  try {
    const doc = await api.model();
    const kept = state?.evidence ?? {};
    model = doc;
    layout = layeredLayout(doc);
    state = new ScenarioState(api, doc);
    state.onChange = renderAll;
    highlight = [];
    pathListings = [];
    pathsSearched = false;
    populateDomainSelects(doc);
    renderPaths();
    for (const [name, value] of Object.entries(kept)) {
      if (doc.nodes.some((n) => n.name === name)) {
        state.setEvidence(name, value as 0 | 1).catch(() => undefined);
      }
    }
    await state.refresh();
  } catch (err) {
    showBanner(err instanceof Error ? err.message : String(err));
  }
}

async function findPaths(): Promise<void> {
  if (!state) return;
  pathGeneration += 1;
  const gen = pathGeneration;
  const source = el<HTMLSelectElement>("source-domain").value;
  const target = el<HTMLSelectElement>("target-domain").value;
  const maxHops = Number(el<HTMLInputElement>("max-hops").value) || 4;
  pathsSearched = true;
  pathListings = [];
  renderPaths();
  try {
    const found = await api.paths(source, target, maxHops);
    if (gen !== pathGeneration) return;
    pathListings = found.paths.map((path: PathInfo) => ({ path }));
    renderPaths();
    await Promise.allSettled(
      pathListings.map(async (listing, i) => {
        const head = listing.path.nodes[0];
        const tail = listing.path.nodes[listing.path.nodes.length - 1];
        try {
          const report = await api.cascade({ [head]: 1 }, tail, maxHops);
          if (gen !== pathGeneration) return;
          pathListings[i] = { ...listing, lift: report.lift };
        } catch (err) {
          if (gen !== pathGeneration) return;
          const detail = err instanceof ApiError ? err.detail : String(err);
          pathListings[i] = { ...listing, error: detail };
        }
        renderPaths();
      }),
    );
  } catch (err) {
    if (gen !== pathGeneration) return;
    el("path-results").innerHTML =
      `<p class="empty-state">Path search failed: ` +
      `${err instanceof ApiError ? err.detail : String(err)}</p>`;
  }
}

function pickPath(index: number): void {
  const listing = pathListings[index];
  if (!listing || !state) return;
  highlight = listing.path.nodes;
  const head = listing.path.nodes[0];
  void state.setEvidence(head, 1);
}

function wireEvents(): void {
  el("dag").addEventListener("click", (event) => {
    const group = (event.target as Element).closest("[data-node]");
    const name = group?.getAttribute("data-node");
    if (name && state) void state.toggleEvidence(name);
  });

  el("bars").addEventListener("click", (event) => {
    const button = (event.target as Element).closest("button.clear-one");
    const name = button?.getAttribute("data-node");
    if (name && state) void state.clearEvidence(name);
  });

  el("clear-all").addEventListener("click", () => {
    highlight = [];
    if (state) void state.clearAll();
  });

  el("find-paths").addEventListener("click", () => void findPaths());

  el("path-results").addEventListener("click", (event) => {
    const button = (event.target as Element).closest("button.path-pick");
    const index = button?.getAttribute("data-path-index");
    if (index !== null && index !== undefined) pickPath(Number(index));
  });

  el("reload-model").addEventListener("click", async () => {
    try {
      await api.reload();
    } catch {
      // the banner from bootstrap covers the failure modes that matter
    }
    await bootstrap();
  });
}

wireEvents();
void bootstrap();
