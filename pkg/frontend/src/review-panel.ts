/**
 * Classification review: shows the machine's pending proposal for a new
 * edge and lets the user accept it as-is (provenance stays machine) or
 * edit relation/strength before committing (provenance becomes
 * human_override). While a proposal is pending, this panel is the only
 * path to an edge commit.
 */

import { EditorStore } from './store.js';
import type { RelationKind, Strength } from './types.js';

const STRENGTHS: Strength[] = ['none', 'very_weak', 'weak', 'moderate', 'strong', 'very_strong'];

export interface ReviewPanel {
  element: HTMLElement;
  refresh(): void;
  accept(): Promise<void>;
  override(relation: RelationKind, strength: Strength): Promise<void>;
  /** Fires after any successful commit so the app can offer propagation. */
  onCommitted?: () => void;
}

export function createReviewPanel(store: EditorStore): ReviewPanel {
  const element = document.createElement('section');
  element.className = 'review-panel';

  const summary = document.createElement('p');
  summary.className = 'review-summary';
  element.appendChild(summary);

  const relationSelect = document.createElement('select');
  relationSelect.className = 'review-relation';
  for (const value of ['support', 'attack'] as RelationKind[]) {
    const option = document.createElement('option');
    option.value = value;
    option.textContent = value;
    relationSelect.appendChild(option);
  }

  const strengthSelect = document.createElement('select');
  strengthSelect.className = 'review-strength';
  for (const value of STRENGTHS) {
    const option = document.createElement('option');
    option.value = value;
    option.textContent = value;
    strengthSelect.appendChild(option);
  }

  const acceptButton = document.createElement('button');
  acceptButton.className = 'review-accept';
  acceptButton.textContent = 'Accept';
  const overrideButton = document.createElement('button');
  overrideButton.className = 'review-override';
  overrideButton.textContent = 'Commit override';
  const discardButton = document.createElement('button');
  discardButton.className = 'review-discard';
  discardButton.textContent = 'Discard';

  element.appendChild(relationSelect);
  element.appendChild(strengthSelect);
  element.appendChild(acceptButton);
  element.appendChild(overrideButton);
  element.appendChild(discardButton);

  const panel: ReviewPanel = {
    element,
    refresh(): void {
      const pending = store.getState().pending;
      element.hidden = pending === null;
      if (!pending) return;
      const { proposal } = pending;
      summary.textContent =
        `Machine proposal: ${proposal.source_id} -${proposal.relation}/${proposal.strength}-> ` +
        `${proposal.target_id} — ${proposal.justification}`;
      relationSelect.value = proposal.relation;
      strengthSelect.value = proposal.strength;
    },
    async accept(): Promise<void> {
      await store.acceptPending();
      panel.onCommitted?.();
    },
    async override(relation: RelationKind, strength: Strength): Promise<void> {
      await store.overridePending(relation, strength);
      panel.onCommitted?.();
    },
  };

  acceptButton.addEventListener('click', () => void panel.accept());
  overrideButton.addEventListener('click', () =>
    void panel.override(relationSelect.value as RelationKind, strengthSelect.value as Strength),
  );
  discardButton.addEventListener('click', () => store.discardPending());

  store.subscribe(panel.refresh);
  panel.refresh();
  return panel;
}
