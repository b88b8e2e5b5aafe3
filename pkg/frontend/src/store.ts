/**
 * Editor state: one loaded graph, its revision, pending classification
 * review, the chat transcript, and per-node staleness.
 *
 * Invariants the store enforces:
 * - every displayed number comes from an API response; nothing is computed
 *   client-side;
 * - a pending machine classification blocks edge commit until it is
 *   accepted (origin stays "machine") or overridden (origin becomes
 *   "human_override");
 * - provider/API failures leave the transcript and graph state untouched;
 * - layout positions are client-only and never accompany API payloads.
 */

import { ApiClient, ApiError, EdgeCommit } from './client.js';
import type {
  ChatReply,
  ClaimType,
  ClassificationProposal,
  EdgeDoc,
  GraphDoc,
  PropagationDoc,
  RelationKind,
  StoredGraphPayload,
  Strength,
  SuggestionDoc,
} from './types.js';

export interface TranscriptEntry {
  role: 'user' | 'assistant' | 'error';
  text: string;
}

export interface PendingClassification {
  proposal: ClassificationProposal;
}

export interface EditorState {
  graphId: string | null;
  revision: number;
  graph: GraphDoc | null;
  staleNodeIds: ReadonlySet<string>;
  lastPropagation: PropagationDoc | null;
  lastPropagationRevision: number | null;
  pending: PendingClassification | null;
  transcript: readonly TranscriptEntry[];
  suggestions: readonly SuggestionDoc[];
  loadError: string | null;
}

export type Listener = (state: EditorState) => void;

function emptyState(): EditorState {
  return {
    graphId: null,
    revision: 0,
    graph: null,
    staleNodeIds: new Set(),
    lastPropagation: null,
    lastPropagationRevision: null,
    pending: null,
    transcript: [],
    suggestions: [],
    loadError: null,
  };
}

export class EditorStore {
  private state: EditorState = emptyState();
  private listeners = new Set<Listener>();
  private sessionId = 'default';

  constructor(private readonly client: ApiClient) {}

  getState(): EditorState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private update(patch: Partial<EditorState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  private applyStored(payload: StoredGraphPayload): void {
    this.update({
      graphId: payload.graph.id,
      revision: payload.revision,
      graph: payload.graph,
      staleNodeIds: new Set(payload.stale_node_ids),
      lastPropagation: payload.last_propagation,
      lastPropagationRevision: payload.last_propagation_revision,
      loadError: null,
    });
  }

  /** Score shown for a node: propagation output when fresh, else the stored credibility. */
  displayedScore(nodeId: string): number | null {
    const { lastPropagation, graph } = this.state;
    if (lastPropagation && nodeId in lastPropagation.scores) {
      return lastPropagation.scores[nodeId];
    }
    const node = graph?.nodes.find((n) => n.id === nodeId);
    return node ? node.credibility : null;
  }

  async loadGraph(graphId: string): Promise<void> {
    try {
      this.applyStored(await this.client.getGraph(graphId));
    } catch (error) {
      this.update({ loadError: error instanceof Error ? error.message : String(error) });
      throw error;
    }
  }

  /** Re-fetch if the server moved past our revision; used by polling. */
  async refresh(): Promise<boolean> {
    if (!this.state.graphId) return false;
    const payload = await this.client.getGraph(this.state.graphId);
    if (payload.revision !== this.state.revision) {
      this.applyStored(payload);
      return true;
    }
    return false;
  }

  startPolling(intervalMs = 2000): () => void {
    const timer = setInterval(() => {
      this.refresh().catch(() => undefined);
    }, intervalMs);
    return () => clearInterval(timer);
  }

  private requireGraph(): string {
    if (!this.state.graphId) throw new Error('no graph loaded');
    return this.state.graphId;
  }

  async addClaim(text: string, claimType: ClaimType): Promise<void> {
    const graphId = this.requireGraph();
    await this.client.addClaim(graphId, text, claimType);
    await this.loadGraph(graphId);
  }

  /**
   * Ask the provider to classify a prospective edge. The proposal parks in
   * `pending`; no edge exists until the user accepts or overrides it.
   */
  async requestClassification(sourceId: string, targetId: string): Promise<ClassificationProposal> {
    const graphId = this.requireGraph();
    const proposal = await this.client.classifyEdge(graphId, sourceId, targetId);
    this.update({ pending: { proposal } });
    return proposal;
  }

  /** Commit the pending proposal unchanged; provenance stays machine. */
  async acceptPending(justification?: string): Promise<EdgeDoc> {
    const pending = this.state.pending;
    if (!pending) throw new Error('no pending classification to accept');
    return this.commitPending({
      source_id: pending.proposal.source_id,
      target_id: pending.proposal.target_id,
      relation: pending.proposal.relation,
      strength: pending.proposal.strength,
      justification: justification ?? pending.proposal.justification,
      origin: 'machine',
    });
  }

  /** Commit the pending proposal with edited labels; provenance records the human override. */
  async overridePending(
    relation: RelationKind,
    strength: Strength,
    justification?: string,
  ): Promise<EdgeDoc> {
    const pending = this.state.pending;
    if (!pending) throw new Error('no pending classification to override');
    return this.commitPending({
      source_id: pending.proposal.source_id,
      target_id: pending.proposal.target_id,
      relation,
      strength,
      justification: justification ?? pending.proposal.justification,
      origin: 'human_override',
    });
  }

  discardPending(): void {
    this.update({ pending: null });
  }

  private async commitPending(commit: EdgeCommit): Promise<EdgeDoc> {
    const graphId = this.requireGraph();
    try {
      const payload = await this.client.addEdge(graphId, commit);
      this.update({ pending: null });
      await this.loadGraph(graphId);
      return payload.edge as EdgeDoc;
    } catch (error) {
      if (error instanceof ApiError && error.code === 'conflict') {
        // someone moved the graph; reload and re-present the proposal
        await this.loadGraph(graphId);
        throw error;
      }
      throw error;
    }
  }

  async propagate(params?: { delta?: number; epsilon?: number; max_iters?: number }): Promise<PropagationDoc> {
    const graphId = this.requireGraph();
    try {
      const { result } = await this.client.propagate(graphId, params);
      await this.loadGraph(graphId);
      return result;
    } catch (error) {
      if (error instanceof ApiError && error.code === 'conflict') {
        await this.loadGraph(graphId);
        const { result } = await this.client.propagate(graphId, params);
        await this.loadGraph(graphId);
        return result;
      }
      throw error;
    }
  }

  /**
   * One copilot turn. The transcript gains the user line and the reply
   * only on success; a failure appends an inline error entry instead and
   * keeps the conversation intact.
   */
  async sendChat(message: string): Promise<ChatReply> {
    const graphId = this.requireGraph();
    try {
      const reply = await this.client.chat(graphId, message, this.sessionId);
      this.update({
        transcript: [
          ...this.state.transcript,
          { role: 'user', text: message },
          { role: 'assistant', text: reply.reply },
        ],
      });
      return reply;
    } catch (error) {
      const text = error instanceof Error ? error.message : String(error);
      this.update({
        transcript: [...this.state.transcript, { role: 'error', text: `copilot unavailable: ${text}` }],
      });
      throw error;
    }
  }

  async loadSuggestions(documentId: string, claimId: string, max = 3): Promise<void> {
    const graphId = this.requireGraph();
    const { suggestions } = await this.client.suggestExtracts(documentId, graphId, claimId, max);
    this.update({ suggestions });
  }

  /** Drop a suggested extract onto a claim: attach as evidence with provider assessment. */
  async attachSuggestion(claimId: string, suggestion: SuggestionDoc): Promise<void> {
    const graphId = this.requireGraph();
    await this.client.addEvidence(graphId, claimId, {
      excerpt: suggestion.excerpt,
      assess: true,
      source_document: suggestion.document_id,
    });
    this.update({ suggestions: this.state.suggestions.filter((s) => s !== suggestion) });
    await this.loadGraph(graphId);
  }
}
