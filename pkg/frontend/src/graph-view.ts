/**
 * SVG graph canvas: claims as circles with type badge, credibility value,
 * and staleness flag; support edges solid green, attack edges dashed red.
 *
 * Rendering is a pure function of (graph, scores, staleness, layout); the
 * view owns no analysis state and displays only API-delivered numbers.
 */

import type { EditorState } from './store.js';
import type { EdgeDoc, NodeDoc } from './types.js';
import { LayoutMap, Point } from './layout.js';

const SVG_NS = 'http://www.w3.org/2000/svg';
const NODE_RADIUS = 34;

export interface GraphViewCallbacks {
  onNodeClick?(node: NodeDoc, event: MouseEvent): void;
  onEdgeClick?(edge: EdgeDoc, event: MouseEvent): void;
  onEvidenceDrop?(nodeId: string, payload: string): void;
  onNodeMoved?(nodeId: string, position: Point): void;
}

export function formatScore(value: number): string {
  return value.toFixed(5);
}

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

function edgePath(from: Point, to: Point): string {
  // slight arc so antiparallel edge pairs stay distinguishable
  const mx = (from.x + to.x) / 2 + (to.y - from.y) * 0.08;
  const my = (from.y + to.y) / 2 - (to.x - from.x) * 0.08;
  return `M ${from.x} ${from.y} Q ${mx} ${my} ${to.x} ${to.y}`;
}

export function renderGraph(
  svg: SVGSVGElement,
  state: EditorState,
  layout: LayoutMap,
  callbacks: GraphViewCallbacks = {},
): void {
  while (svg.firstChild) svg.removeChild(svg.firstChild);
  const graph = state.graph;
  if (!graph) return;

  const defs = svgEl('defs');
  for (const [id, color] of [
    ['arrow-support', '#2e7d32'],
    ['arrow-attack', '#c62828'],
  ] as const) {
    const marker = svgEl('marker');
    marker.setAttribute('id', id);
    marker.setAttribute('viewBox', '0 0 10 10');
    marker.setAttribute('refX', '9');
    marker.setAttribute('refY', '5');
    marker.setAttribute('markerWidth', '7');
    marker.setAttribute('markerHeight', '7');
    marker.setAttribute('orient', 'auto-start-reverse');
    const tip = svgEl('path');
    tip.setAttribute('d', 'M 0 0 L 10 5 L 0 10 z');
    tip.setAttribute('fill', color);
    marker.appendChild(tip);
    defs.appendChild(marker);
  }
  svg.appendChild(defs);

  const edgesGroup = svgEl('g');
  edgesGroup.setAttribute('class', 'edges');
  for (const edge of graph.edges) {
    const from = layout[edge.source_id];
    const to = layout[edge.target_id];
    if (!from || !to) continue;
    const path = svgEl('path');
    path.setAttribute('class', `edge ${edge.relation}`);
    path.setAttribute('data-edge-id', edge.id);
    path.setAttribute('d', edgePath(from, to));
    path.setAttribute('fill', 'none');
    path.setAttribute('stroke', edge.relation === 'support' ? '#2e7d32' : '#c62828');
    path.setAttribute('stroke-width', '2');
    if (edge.relation === 'attack') path.setAttribute('stroke-dasharray', '6 4');
    path.setAttribute('marker-end', `url(#arrow-${edge.relation})`);
    path.addEventListener('click', (event) => callbacks.onEdgeClick?.(edge, event as MouseEvent));
    edgesGroup.appendChild(path);
  }
  svg.appendChild(edgesGroup);

  const nodesGroup = svgEl('g');
  nodesGroup.setAttribute('class', 'nodes');
  for (const node of graph.nodes) {
    const position = layout[node.id];
    if (!position) continue;
    const score = state.lastPropagation?.scores[node.id] ?? node.credibility;
    const stale = state.staleNodeIds.has(node.id);
    const sign = score > 0 ? 'positive' : score < 0 ? 'negative' : 'neutral';

    const group = svgEl('g');
    group.setAttribute('class', `node ${node.claim_type} ${sign}${stale ? ' stale' : ''}`);
    group.setAttribute('data-node-id', node.id);
    group.setAttribute('transform', `translate(${position.x}, ${position.y})`);

    const circle = svgEl('circle');
    circle.setAttribute('r', String(NODE_RADIUS));
    circle.setAttribute(
      'fill',
      sign === 'positive' ? '#dcedc8' : sign === 'negative' ? '#ffcdd2' : '#eceff1',
    );
    circle.setAttribute('stroke', stale ? '#f9a825' : '#546e7a');
    circle.setAttribute('stroke-width', stale ? '3' : '1.5');
    group.appendChild(circle);

    const label = svgEl('text');
    label.setAttribute('class', 'node-label');
    label.setAttribute('text-anchor', 'middle');
    label.setAttribute('dy', '-4');
    label.textContent = node.id;
    group.appendChild(label);

    const scoreText = svgEl('text');
    scoreText.setAttribute('class', 'node-score');
    scoreText.setAttribute('text-anchor', 'middle');
    scoreText.setAttribute('dy', '12');
    scoreText.textContent = formatScore(score);
    group.appendChild(scoreText);

    const badge = svgEl('text');
    badge.setAttribute('class', 'node-type');
    badge.setAttribute('text-anchor', 'middle');
    badge.setAttribute('dy', String(NODE_RADIUS + 14));
    badge.textContent = node.claim_type + (stale ? ' (stale)' : '');
    group.appendChild(badge);

    const title = svgEl('title');
    title.textContent = node.text;
    group.appendChild(title);

    group.addEventListener('click', (event) => callbacks.onNodeClick?.(node, event as MouseEvent));
    group.addEventListener('dragover', (event) => event.preventDefault());
    group.addEventListener('drop', (event) => {
      event.preventDefault();
      const payload = (event as DragEvent).dataTransfer?.getData('application/x-argugraph-extract');
      if (payload) callbacks.onEvidenceDrop?.(node.id, payload);
    });

    nodesGroup.appendChild(group);
  }
  svg.appendChild(nodesGroup);
}
