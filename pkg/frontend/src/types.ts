/**
 * Wire-format types for the argugraph HTTP API.
 *
 * These mirror the server's JSON schemas exactly; the UI never invents
 * fields and never sends client-only state (layout positions, transcripts)
 * to the server.
 */

export type ClaimType = 'fact' | 'policy' | 'value';
export type Strength = 'none' | 'very_weak' | 'weak' | 'moderate' | 'strong' | 'very_strong';
export type Polarity = 'supporting' | 'negating';
export type RelationKind = 'support' | 'attack';
export type OriginKind = 'machine' | 'human_override';

export interface EvidenceDoc {
  id: string;
  excerpt: string;
  polarity: Polarity;
  strength: Strength;
  justification: string;
  origin: OriginKind;
  source_document?: string | null;
}

export interface NodeDoc {
  id: string;
  text: string;
  claim_type: ClaimType;
  credibility: number;
  credibility_stale?: boolean;
  evidence: EvidenceDoc[];
}

export interface EdgeDoc {
  id: string;
  source_id: string;
  target_id: string;
  relation: RelationKind;
  strength: Strength;
  justification: string;
  origin: OriginKind;
}

export interface GraphDoc {
  id: string;
  title: string;
  delta: number;
  nodes: NodeDoc[];
  edges: EdgeDoc[];
  metadata: { created_at: string; modified_at: string };
}

export interface PropagationDoc {
  scores: Record<string, number>;
  converged: boolean;
  iterations_used: number;
  max_residual: number;
  delta: number;
  epsilon: number;
}

export interface StoredGraphPayload {
  revision: number;
  graph: GraphDoc;
  stale_node_ids: string[];
  last_propagation: PropagationDoc | null;
  last_propagation_revision: number | null;
}

export interface ClassificationProposal {
  source_id: string;
  target_id: string;
  relation: RelationKind;
  strength: Strength;
  justification: string;
  origin: OriginKind;
}

export interface FindingDoc {
  pattern_id: string;
  involved_node_ids: string[];
  involved_edge_ids: string[];
  explanation: string;
  severity: 'info' | 'warning' | 'critical';
  category: string;
  origin: 'structural' | 'semantic';
}

export interface AssumptionDoc {
  text: string;
  importance: number;
  justification: string;
}

export interface SuggestionDoc {
  document_id: string;
  start_offset: number;
  end_offset: number;
  excerpt: string;
  relevance: Strength;
}

export interface ChatReply {
  session_id: string;
  reply: string;
  revision: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details: unknown;
}
