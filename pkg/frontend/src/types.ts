/** Wire types mirroring the server's JSON bodies. */

export interface ModelNode {
  name: string;
  domain: string;
}

export interface CptDoc {
  parents: string[];
  alpha: number;
  table: number[][];
}

export interface ModelDoc {
  nodes: ModelNode[];
  edges: [string, string][];
  cpts: Record<string, CptDoc>;
  metadata: Record<string, unknown>;
}

export interface Posterior {
  target: string;
  p0: number;
  p1: number;
}

export interface PathInfo {
  nodes: string[];
  domains: string[];
}

export interface CascadeReport {
  target: string;
  evidence: Record<string, number>;
  baseline: number;
  conditioned: number;
  lift: number;
  paths: PathInfo[];
}

export interface HealthInfo {
  status: string;
  nodes: number;
}

export type Evidence = Record<string, 0 | 1>;
