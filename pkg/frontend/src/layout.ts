/** Deterministic layered DAG layout: information flows left to right, the
 * target assertion lands in the rightmost column. Same input, same pixels. */

import type { WireEdge, WireSubgraph } from './types.js';

export interface Point {
  x: number;
  y: number;
}

export interface Layout {
  positions: Map<string, Point>;
  width: number;
  height: number;
  flowEdges: Array<{ from: string; to: string; agentLink: boolean }>;
}

export const COLUMN_GAP = 190;
export const ROW_GAP = 86;
export const MARGIN_X = 110;
export const MARGIN_Y = 70;

/** PROV edges point upstream; flip them so arrows follow information flow. */
export function flowEdges(edges: WireEdge[]): Array<{ from: string; to: string; agentLink: boolean }> {
  return edges.map((e) => ({
    from: e.to,
    to: e.from,
    agentLink: e.relation === 'wasAssociatedWith' || e.relation === 'wasAttributedTo',
  }));
}

export function computeLayout(subgraph: WireSubgraph): Layout {
  const ids = subgraph.nodes.map((n) => n.id).sort();
  const flows = flowEdges(subgraph.edges);
  const out = new Map<string, string[]>();
  for (const id of ids) out.set(id, []);
  for (const e of flows) out.get(e.from)?.push(e.to);

  // longest flow distance to any target; rank = maxDistance - distance, so
  // targets sit in the last column and pure sources drift left
  const targets = new Set(subgraph.targets);
  const memo = new Map<string, number>();
  const distanceToTarget = (id: string): number => {
    const cached = memo.get(id);
    if (cached !== undefined) return cached;
    memo.set(id, targets.has(id) ? 0 : -Infinity);
    let best = targets.has(id) ? 0 : -Infinity;
    for (const nxt of out.get(id) ?? []) {
      const d = distanceToTarget(nxt);
      if (d >= 0) best = Math.max(best, d + 1);
    }
    memo.set(id, best);
    return best;
  };
  let maxDistance = 0;
  for (const id of ids) maxDistance = Math.max(maxDistance, distanceToTarget(id));
  const rank = new Map<string, number>();
  for (const id of ids) {
    const d = distanceToTarget(id);
    rank.set(id, d < 0 ? 0 : maxDistance - d);
  }

  const columns = new Map<number, string[]>();
  for (const id of ids) {
    const r = rank.get(id)!;
    if (!columns.has(r)) columns.set(r, []);
    columns.get(r)!.push(id);
  }

  // one barycenter pass over predecessor rows cuts crossings; sorts are
  // stable and inputs pre-sorted, so the result is deterministic
  const rowIndex = new Map<string, number>();
  const into = new Map<string, string[]>();
  for (const e of flows) {
    if (!into.has(e.to)) into.set(e.to, []);
    into.get(e.to)!.push(e.from);
  }
  const ranksAscending = [...columns.keys()].sort((a, b) => a - b);
  for (const r of ranksAscending) {
    const column = columns.get(r)!;
    column.sort();
    if (r > 0) {
      const bary = new Map<string, number>();
      for (const id of column) {
        const preds = (into.get(id) ?? []).filter((p) => rowIndex.has(p));
        const mean = preds.length
          ? preds.reduce((acc, p) => acc + rowIndex.get(p)!, 0) / preds.length
          : Number.POSITIVE_INFINITY;
        bary.set(id, mean);
      }
      column.sort((a, b) => {
        const d = bary.get(a)! - bary.get(b)!;
        return d !== 0 && Number.isFinite(d) ? d : a < b ? -1 : 1;
      });
    }
    column.forEach((id, i) => rowIndex.set(id, i));
  }

  const tallest = Math.max(...ranksAscending.map((r) => columns.get(r)!.length));
  const height = 2 * MARGIN_Y + (tallest - 1) * ROW_GAP;
  const positions = new Map<string, Point>();
  for (const r of ranksAscending) {
    const column = columns.get(r)!;
    const columnHeight = (column.length - 1) * ROW_GAP;
    const top = MARGIN_Y + (height - 2 * MARGIN_Y - columnHeight) / 2;
    column.forEach((id, i) => {
      positions.set(id, { x: MARGIN_X + r * COLUMN_GAP, y: top + i * ROW_GAP });
    });
  }

  return {
    positions,
    width: 2 * MARGIN_X + maxDistance * COLUMN_GAP,
    height,
    flowEdges: flows,
  };
}
