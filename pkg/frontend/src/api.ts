/** Thin HTTP client for the model service.
 *
 * The transport is injected so tests can replay canned responses and
 * record every request; production code passes `fetchTransport`.
 */

import type {
  CascadeReport,
  Evidence,
  HealthInfo,
  ModelDoc,
  Posterior,
} from "./types.js";

export interface HttpReply {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export interface TransportOptions {
  method?: string;
  body?: string;
  signal?: AbortSignal;
}

export type Transport = (url: string, opts?: TransportOptions) => Promise<HttpReply>;

export const fetchTransport: Transport = (url, opts) =>
  fetch(url, {
    method: opts?.method ?? "GET",
    body: opts?.body,
    signal: opts?.signal,
    headers: opts?.body !== undefined ? { "Content-Type": "application/json" } : undefined,
  });

export class ApiError extends Error {
  status: number;
  detail: string;
  node?: string;

  constructor(status: number, body: unknown) {
    const rec = (body ?? {}) as Record<string, unknown>;
    const detail = typeof rec.detail === "string" ? rec.detail : `HTTP ${status}`;
    super(detail);
    this.status = status;
    this.detail = detail;
    if (typeof rec.node === "string") this.node = rec.node;
  }
}

export class ApiClient {
  private base: string;
  private transport: Transport;

  constructor(base = "", transport: Transport = fetchTransport) {
    this.base = base.replace(/\/$/, "");
    this.transport = transport;
  }

  private async request<T>(
    path: string,
    opts?: TransportOptions,
  ): Promise<T> {
    const reply = await this.transport(this.base + path, opts);
    const body = await reply.json().catch(() => ({}));
    if (!reply.ok) throw new ApiError(reply.status, body);
    return body as T;
  }

  health(): Promise<HealthInfo> {
    return this.request<HealthInfo>("/health");
  }

  model(): Promise<ModelDoc> {
    return this.request<ModelDoc>("/model");
  }

  query(target: string, evidence: Evidence, signal?: AbortSignal): Promise<Posterior> {
    return this.request<Posterior>("/query", {
      method: "POST",
      body: JSON.stringify({ target, evidence }),
      signal,
    });
  }

  cascade(
    evidence: Evidence,
    target: string,
    maxHops = 4,
    signal?: AbortSignal,
  ): Promise<CascadeReport> {
    return this.request<CascadeReport>("/cascade", {
      method: "POST",
      body: JSON.stringify({ evidence, target, max_hops: maxHops }),
      signal,
    });
  }

  paths(sourceDomain: string, targetDomain: string, maxHops = 4): Promise<{ paths: { nodes: string[]; domains: string[] }[] }> {
    const qs = new URLSearchParams({
      source_domain: sourceDomain,
      target_domain: targetDomain,
      max_hops: String(maxHops),
    });
    return this.request(`/paths?${qs}`);
  }

  reload(): Promise<HealthInfo> {
    return this.request<HealthInfo>("/reload", { method: "POST" });
  }
}
