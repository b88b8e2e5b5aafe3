/**
 * Typed fetch client for the argugraph REST API.
 *
 * Every server error surfaces as an ApiError carrying the structured
 * {code, message, details} body, so callers can branch on `code`
 * (e.g. "conflict" for optimistic-concurrency retries).
 */

import type {
  ApiErrorBody,
  AssumptionDoc,
  ChatReply,
  ClaimType,
  ClassificationProposal,
  EdgeDoc,
  EvidenceDoc,
  FindingDoc,
  GraphDoc,
  NodeDoc,
  OriginKind,
  Polarity,
  PropagationDoc,
  RelationKind,
  StoredGraphPayload,
  Strength,
  SuggestionDoc,
} from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ClientOptions {
  baseUrl: string;
  token?: string;
  fetchFn?: FetchLike;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly details: unknown;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.status = status;
    this.code = body.code;
    this.details = body.details;
  }
}

export interface EdgeCommit {
  source_id: string;
  target_id: string;
  relation: RelationKind;
  strength: Strength;
  justification: string;
  origin: OriginKind;
}

export interface MutationPayload<T> {
  revision: number;
  stale_node_ids: string[];
  claim?: T;
  edge?: T;
  evidence?: T;
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly token?: string;
  private readonly fetchFn: FetchLike;

  constructor(options: ClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/$/, '');
    this.token = options.token;
    this.fetchFn = options.fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown, rawText?: string): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) headers['Authorization'] = `Bearer ${this.token}`;
    let payload: string | undefined;
    if (rawText !== undefined) {
      headers['Content-Type'] = 'text/plain; charset=utf-8';
      payload = rawText;
    } else if (body !== undefined) {
      headers['Content-Type'] = 'application/json';
      payload = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.baseUrl}${path}`, { method, headers, body: payload });
    if (!response.ok) {
      let errorBody: ApiErrorBody;
      try {
        errorBody = (await response.json()) as ApiErrorBody;
      } catch {
        errorBody = { code: 'http_error', message: `HTTP ${response.status}`, details: null };
      }
      throw new ApiError(response.status, errorBody);
    }
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request('GET', '/health');
  }

  listGraphs(): Promise<{ graph_ids: string[] }> {
    return this.request('GET', '/graphs');
  }

  getGraph(graphId: string): Promise<StoredGraphPayload> {
    return this.request('GET', `/graphs/${encodeURIComponent(graphId)}`);
  }

  createGraph(doc: GraphDoc | { title: string; id?: string; delta?: number }): Promise<StoredGraphPayload> {
    return this.request('POST', '/graphs', doc);
  }

  putGraph(graphId: string, doc: GraphDoc, revision?: number): Promise<StoredGraphPayload> {
    const query = revision === undefined ? '' : `?revision=${revision}`;
    return this.request('PUT', `/graphs/${encodeURIComponent(graphId)}${query}`, doc);
  }

  deleteGraph(graphId: string): Promise<void> {
    return this.request('DELETE', `/graphs/${encodeURIComponent(graphId)}`);
  }

  addClaim(graphId: string, text: string, claimType: ClaimType): Promise<MutationPayload<NodeDoc>> {
    return this.request('POST', `/graphs/${encodeURIComponent(graphId)}/claims`, {
      text,
      claim_type: claimType,
    });
  }

  addEdge(graphId: string, commit: EdgeCommit): Promise<MutationPayload<EdgeDoc>> {
    return this.request('POST', `/graphs/${encodeURIComponent(graphId)}/edges`, commit);
  }

  addEvidence(
    graphId: string,
    claimId: string,
    body: { excerpt: string; assess?: boolean; polarity?: Polarity; strength?: Strength; justification?: string; source_document?: string },
  ): Promise<MutationPayload<EvidenceDoc>> {
    return this.request(
      'POST',
      `/graphs/${encodeURIComponent(graphId)}/claims/${encodeURIComponent(claimId)}/evidence`,
      body,
    );
  }

  classifyEdge(graphId: string, sourceId: string, targetId: string): Promise<ClassificationProposal> {
    return this.request('POST', `/graphs/${encodeURIComponent(graphId)}/classify-edge`, {
      source_id: sourceId,
      target_id: targetId,
    });
  }

  propagate(
    graphId: string,
    params?: { delta?: number; epsilon?: number; max_iters?: number },
  ): Promise<{ revision: number; result: PropagationDoc }> {
    const query = new URLSearchParams();
    if (params?.delta !== undefined) query.set('delta', String(params.delta));
    if (params?.epsilon !== undefined) query.set('epsilon', String(params.epsilon));
    if (params?.max_iters !== undefined) query.set('max_iters', String(params.max_iters));
    const suffix = query.toString() ? `?${query}` : '';
    return this.request('POST', `/graphs/${encodeURIComponent(graphId)}/propagate${suffix}`);
  }

  critique(graphId: string, semantic = false): Promise<{ findings: FindingDoc[]; diagnostics: string[] }> {
    const suffix = semantic ? '?semantic=true' : '';
    return this.request('POST', `/graphs/${encodeURIComponent(graphId)}/critique${suffix}`);
  }

  assumptions(graphId: string, edgeId: string): Promise<{ edge_id: string; assumptions: AssumptionDoc[] }> {
    return this.request('POST', `/graphs/${encodeURIComponent(graphId)}/assumptions`, { edge_id: edgeId });
  }

  report(graphId: string): Promise<{ graph_id: string; generated_at: string; sections: { title: string; body: string }[] }> {
    return this.request('POST', `/graphs/${encodeURIComponent(graphId)}/report`);
  }

  chat(graphId: string, message: string, sessionId = 'default'): Promise<ChatReply> {
    return this.request('POST', `/graphs/${encodeURIComponent(graphId)}/chat`, {
      message,
      session_id: sessionId,
    });
  }

  uploadDocument(text: string): Promise<{ document_id: string }> {
    return this.request('POST', '/documents', undefined, text);
  }

  suggestExtracts(
    documentId: string,
    graphId: string,
    claimId: string,
    maxSuggestions = 3,
  ): Promise<{ suggestions: SuggestionDoc[]; diagnostics: string[] }> {
    return this.request('POST', `/documents/${encodeURIComponent(documentId)}/suggest`, {
      graph_id: graphId,
      claim_id: claimId,
      max_suggestions: maxSuggestions,
    });
  }
}
