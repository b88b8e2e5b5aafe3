/**
 * Copilot chat panel: transcript list plus an input bar whose send button
 * stays disabled while the input is empty. Replies land in the transcript
 * via the store; failures render as inline error entries without losing
 * earlier turns.
 */

import { EditorStore } from './store.js';

export interface ChatPanel {
  element: HTMLElement;
  /** Re-render the transcript from store state. */
  refresh(): void;
  /** Send the current input value; resolves when the reply (or error) landed. */
  submit(): Promise<void>;
  input: HTMLInputElement;
  sendButton: HTMLButtonElement;
}

export function createChatPanel(store: EditorStore): ChatPanel {
  const element = document.createElement('section');
  element.className = 'chat-panel';

  const transcriptList = document.createElement('ul');
  transcriptList.className = 'chat-transcript';
  element.appendChild(transcriptList);

  const bar = document.createElement('form');
  bar.className = 'chat-input-bar';
  const input = document.createElement('input');
  input.type = 'text';
  input.placeholder = 'Ask about this argument…';
  const sendButton = document.createElement('button');
  sendButton.type = 'submit';
  sendButton.textContent = 'Send';
  sendButton.disabled = true;
  bar.appendChild(input);
  bar.appendChild(sendButton);
  element.appendChild(bar);

  input.addEventListener('input', () => {
    sendButton.disabled = input.value.trim().length === 0;
  });

  function refresh(): void {
    transcriptList.textContent = '';
    for (const entry of store.getState().transcript) {
      const item = document.createElement('li');
      item.className = `chat-entry ${entry.role}`;
      item.textContent = entry.text;
      transcriptList.appendChild(item);
    }
  }

  async function submit(): Promise<void> {
    const message = input.value.trim();
    if (!message) return;
    input.value = '';
    sendButton.disabled = true;
    try {
      await store.sendChat(message);
    } catch {
      // the store already appended an inline error entry
    }
    refresh();
  }

  bar.addEventListener('submit', (event) => {
    event.preventDefault();
    void submit();
  });

  store.subscribe(refresh);
  return { element, refresh, submit, input, sendButton };
}
