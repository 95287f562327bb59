/** Evidence state and query batching.
 *
 * Every number stored here came out of a server response body. The
 * posterior for each unobserved node comes from POST /query; when
 * evidence is set, the baseline tick and the lift come from POST
 * /cascade for the same node. Nothing is derived client-side.
 *
 * At most one batch is current: changing evidence bumps a generation
 * counter and aborts in-flight requests, and any response carrying a
 * stale generation is dropped even if its transport ignored the abort.
 */

import { ApiClient, ApiError } from "./api.js";
import type { BarRow } from "./render.js";
import type { Evidence, ModelDoc } from "./types.js";

export interface NodeReading {
  p1?: number;
  baseline?: number;
  lift?: number;
  error?: string;
  pending: boolean;
}

export class ScenarioState {
  private api: ApiClient;
  private model: ModelDoc;
  private evidenceMap: Evidence = {};
  private readings = new Map<string, NodeReading>();
  private generation = 0;
  private aborter: AbortController | null = null;

  /** called after any reading or evidence change; app.ts re-renders here */
  onChange: () => void = () => {};

  constructor(api: ApiClient, model: ModelDoc) {
    this.api = api;
    this.model = model;
  }

  get evidence(): Evidence {
    return { ...this.evidenceMap };
  }

  get anyEvidence(): boolean {
    return Object.keys(this.evidenceMap).length > 0;
  }

  hasNode(name: string): boolean {
    return this.model.nodes.some((n) => n.name === name);
  }

  evidenceOf(name: string): 0 | 1 | undefined {
    return this.evidenceMap[name];
  }

  setEvidence(name: string, value: 0 | 1): Promise<void> {
    if (!this.hasNode(name)) throw new Error(`unknown node: ${name}`);
    this.evidenceMap[name] = value;
    return this.refresh();
  }

  /** cycles unobserved -> 1 -> 0 -> unobserved, the single-click gesture */
  toggleEvidence(name: string): Promise<void> {
    const current = this.evidenceMap[name];
    if (current === undefined) return this.setEvidence(name, 1);
    if (current === 1) return this.setEvidence(name, 0);
    return this.clearEvidence(name);
  }

  clearEvidence(name: string): Promise<void> {
    delete this.evidenceMap[name];
    return this.refresh();
  }

  clearAll(): Promise<void> {
    this.evidenceMap = {};
    return this.refresh();
  }

  reading(name: string): NodeReading | undefined {
    return this.readings.get(name);
  }

  /** Re-queries every unobserved node under the current evidence. */
  refresh(): Promise<void> {
    this.generation += 1;
    const gen = this.generation;
    this.aborter?.abort();
    this.aborter = typeof AbortController === "undefined" ? null : new AbortController();
    const signal = this.aborter?.signal;

    const evidence = { ...this.evidenceMap };
    const withLift = this.anyEvidence;
    const jobs: Promise<void>[] = [];

    for (const node of this.model.nodes) {
      const name = node.name;
      if (evidence[name] !== undefined) {
        this.readings.delete(name);
        continue;
      }
      const prior = this.readings.get(name);
      this.readings.set(name, { ...prior, pending: true, error: undefined });

      jobs.push(
        this.api.query(name, evidence, signal).then(
          (post) => {
            if (gen !== this.generation) return;
            const reading = this.readings.get(name) ?? { pending: false };
            reading.p1 = post.p1;
            if (!withLift) {
              // no evidence: the posterior is its own baseline
              reading.baseline = post.p1;
              reading.lift = undefined;
            }
            reading.pending = false;
            this.readings.set(name, reading);
            this.onChange();
          },
          (err) => this.noteFailure(gen, name, err),
        ),
      );

      if (withLift) {
        jobs.push(
          this.api.cascade(evidence, name, 4, signal).then(
            (report) => {
              if (gen !== this.generation) return;
              const reading = this.readings.get(name) ?? { pending: false };
              reading.baseline = report.baseline;
              reading.lift = report.lift;
              this.readings.set(name, reading);
              this.onChange();
            },
            (err) => this.noteFailure(gen, name, err),
          ),
        );
      }
    }

    this.onChange();
    return Promise.allSettled(jobs).then(() => undefined);
  }

  private noteFailure(gen: number, name: string, err: unknown): void {
    if (gen !== this.generation) return;
    if (err instanceof Error && err.name === "AbortError") return;
    const detail = err instanceof ApiError ? err.detail : String(err);
    this.readings.set(name, { pending: false, error: detail });
    this.onChange();
  }

  barRows(): BarRow[] {
    return this.model.nodes.map((node) => {
      const ev = this.evidenceMap[node.name];
      if (ev !== undefined) {
        return { name: node.name, domain: node.domain, evidence: ev };
      }
      const reading = this.readings.get(node.name);
      return {
        name: node.name,
        domain: node.domain,
        p1: reading?.p1,
        baseline: reading?.baseline,
        lift: reading?.lift,
        error: reading?.error,
        pending: reading?.pending ?? true,
      };
    });
  }
}
