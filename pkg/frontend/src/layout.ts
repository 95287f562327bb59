/** Deterministic layered layout for the model DAG.
 *
 * A node's column is its longest distance from any root, so every edge
 * points strictly left to right. Within a column nodes are sorted by
 * name. Same model in, same coordinates out; there is no physics step.
 */

import type { ModelDoc } from "./types.js";

export interface NodePosition {
  name: string;
  domain: string;
  x: number;
  y: number;
  layer: number;
}

export interface DagLayout {
  positions: Map<string, NodePosition>;
  width: number;
  height: number;
}

export const NODE_W = 132;
export const NODE_H = 44;
const COL_GAP = 210;
const ROW_GAP = 72;
const MARGIN = 36;

export function layeredLayout(model: ModelDoc): DagLayout {
  const parents = new Map<string, string[]>();
  for (const n of model.nodes) parents.set(n.name, []);
  for (const [u, v] of model.edges) parents.get(v)?.push(u);

  const layer = new Map<string, number>();
  const resolve = (name: string, trail: Set<string>): number => {
    const known = layer.get(name);
    if (known !== undefined) return known;
    if (trail.has(name)) throw new Error(`cycle through ${name}`);
    trail.add(name);
    const ps = parents.get(name) ?? [];
    const depth = ps.length === 0 ? 0 : 1 + Math.max(...ps.map((p) => resolve(p, trail)));
    trail.delete(name);
    layer.set(name, depth);
    return depth;
  };
  for (const n of model.nodes) resolve(n.name, new Set());

  const columns = new Map<number, string[]>();
  for (const n of model.nodes) {
    const l = layer.get(n.name)!;
    const col = columns.get(l);
    if (col) col.push(n.name);
    else columns.set(l, [n.name]);
  }

  const domainOf = new Map(model.nodes.map((n) => [n.name, n.domain]));
  const positions = new Map<string, NodePosition>();
  let maxRows = 1;
  for (const [l, names] of columns) {
    names.sort();
    maxRows = Math.max(maxRows, names.length);
    names.forEach((name, i) => {
      positions.set(name, {
        name,
        domain: domainOf.get(name) ?? "",
        x: MARGIN + l * COL_GAP,
        y: MARGIN + i * ROW_GAP,
        layer: l,
      });
    });
  }

  const maxLayer = columns.size === 0 ? 0 : Math.max(...columns.keys());
  return {
    positions,
    width: MARGIN * 2 + maxLayer * COL_GAP + NODE_W,
    height: MARGIN * 2 + (maxRows - 1) * ROW_GAP + NODE_H,
  };
}
