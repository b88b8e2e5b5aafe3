/**
 * Client-side node positions, persisted to localStorage per graph id.
 * The server schema is layout-free; positions never ride along on API calls.
 */

import type { GraphDoc } from './types.js';

export interface Point {
  x: number;
  y: number;
}

export type LayoutMap = Record<string, Point>;

const STORAGE_PREFIX = 'argugraph-layout:';

export function loadLayout(graphId: string): LayoutMap {
  try {
    const raw = localStorage.getItem(STORAGE_PREFIX + graphId);
    return raw ? (JSON.parse(raw) as LayoutMap) : {};
  } catch {
    return {};
  }
}

export function saveLayout(graphId: string, layout: LayoutMap): void {
  try {
    localStorage.setItem(STORAGE_PREFIX + graphId, JSON.stringify(layout));
  } catch {
    // storage full or unavailable: layout is a convenience, not state
  }
}

/** Fill in circle-layout defaults for nodes that have no saved position. */
export function completeLayout(graph: GraphDoc, saved: LayoutMap, width: number, height: number): LayoutMap {
  const layout: LayoutMap = { ...saved };
  const missing = graph.nodes.filter((node) => !(node.id in layout));
  const radius = Math.min(width, height) * 0.38;
  const cx = width / 2;
  const cy = height / 2;
  missing.forEach((node, i) => {
    const angle = (2 * Math.PI * (graph.nodes.indexOf(node) || i)) / Math.max(graph.nodes.length, 1);
    layout[node.id] = { x: cx + radius * Math.cos(angle), y: cy + radius * Math.sin(angle) };
  });
  return layout;
}
