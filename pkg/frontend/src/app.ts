/**
 * Browser entry point: wires the API client, editor store, graph canvas,
 * classification review, suggestion list (drag source), and chat panel.
 *
 * Server location and token come from query parameters or localStorage:
 *   index.html?graph=demo&api=http://127.0.0.1:8000&token=...
 */

import { ApiClient } from './client.js';
import { EditorStore } from './store.js';
import { completeLayout, loadLayout, saveLayout, LayoutMap } from './layout.js';
import { renderGraph } from './graph-view.js';
import { createChatPanel } from './chat-panel.js';
import { createReviewPanel } from './review-panel.js';
import type { SuggestionDoc } from './types.js';

function param(name: string, fallback: string): string {
  const fromQuery = new URLSearchParams(location.search).get(name);
  if (fromQuery) {
    localStorage.setItem(`argugraph-${name}`, fromQuery);
    return fromQuery;
  }
  return localStorage.getItem(`argugraph-${name}`) ?? fallback;
}

export function bootstrap(root: HTMLElement): EditorStore {
  const client = new ApiClient({
    baseUrl: param('api', 'http://127.0.0.1:8000'),
    token: param('token', '') || undefined,
  });
  const store = new EditorStore(client);
  const graphId = param('graph', 'demo');

  root.innerHTML = `
    <header class="toolbar">
      <strong class="graph-title"></strong>
      <span class="revision-badge"></span>
      <button class="propagate-button">Propagate</button>
      <span class="stale-hint" hidden>scores stale — propagate to refresh</span>
      <span class="error-banner" role="alert" hidden></span>
      <button class="retry-button" hidden>Retry</button>
    </header>
    <main class="workbench">
      <svg class="graph-canvas" width="900" height="600"></svg>
      <aside class="side-panels">
        <section class="suggestions-panel"><h3>Suggested extracts</h3><ul class="suggestion-list"></ul></section>
      </aside>
    </main>
  `;

  const svg = root.querySelector<SVGSVGElement>('.graph-canvas')!;
  const title = root.querySelector<HTMLElement>('.graph-title')!;
  const revisionBadge = root.querySelector<HTMLElement>('.revision-badge')!;
  const staleHint = root.querySelector<HTMLElement>('.stale-hint')!;
  const errorBanner = root.querySelector<HTMLElement>('.error-banner')!;
  const retryButton = root.querySelector<HTMLButtonElement>('.retry-button')!;
  const propagateButton = root.querySelector<HTMLButtonElement>('.propagate-button')!;
  const suggestionList = root.querySelector<HTMLUListElement>('.suggestion-list')!;

  const reviewPanel = createReviewPanel(store);
  root.querySelector('.side-panels')!.prepend(reviewPanel.element);
  const chatPanel = createChatPanel(store);
  root.querySelector('.side-panels')!.appendChild(chatPanel.element);

  let layout: LayoutMap = {};

  function redraw(): void {
    const state = store.getState();
    errorBanner.hidden = state.loadError === null;
    retryButton.hidden = state.loadError === null;
    if (state.loadError) errorBanner.textContent = `failed to load graph: ${state.loadError}`;
    if (!state.graph) return;
    title.textContent = state.graph.title;
    revisionBadge.textContent = `revision ${state.revision}`;
    staleHint.hidden = state.staleNodeIds.size === 0;
    layout = completeLayout(state.graph, { ...loadLayout(state.graph.id), ...layout }, 900, 600);
    renderGraph(svg, state, layout, {
      onNodeMoved(nodeId, position) {
        layout[nodeId] = position;
        saveLayout(state.graph!.id, layout);
      },
      onEvidenceDrop(nodeId, payload) {
        const suggestion = JSON.parse(payload) as SuggestionDoc;
        void store.attachSuggestion(nodeId, suggestion);
      },
    });
    suggestionList.textContent = '';
    for (const suggestion of state.suggestions) {
      const item = document.createElement('li');
      item.className = 'suggestion';
      item.draggable = true;
      item.textContent = `[${suggestion.relevance}] ${suggestion.excerpt}`;
      item.addEventListener('dragstart', (event) => {
        event.dataTransfer?.setData('application/x-argugraph-extract', JSON.stringify(suggestion));
      });
      suggestionList.appendChild(item);
    }
  }

  store.subscribe(redraw);
  propagateButton.addEventListener('click', () => void store.propagate());
  retryButton.addEventListener('click', () => void store.loadGraph(graphId));
  reviewPanel.onCommitted = () => {
    if (window.confirm('Edge committed. Propagate scores now?')) void store.propagate();
  };

  void store.loadGraph(graphId).then(() => store.startPolling());
  return store;
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  bootstrap(document.getElementById('app')!);
}
