// Wire types for the session protocol. These mirror the JSON the service
// emits; nothing here is recomputed locally (the client renders what the
// server sends, coordinates included).

export type NodeKind = 'decision' | 'chance' | 'utility';

export interface DiagramNode {
  id: string;
  label: string;
  kind: NodeKind;
  x: number;
  y: number;
  dark?: boolean;
  contingency?: { group: string; condition: string };
}

export interface DiagramEdge {
  from: string;
  to: string;
  sign: string; // plus | minus | unknown | info | plain
}

export interface DiagramDoc {
  nodes: DiagramNode[];
  edges: DiagramEdge[];
}

export type ChoiceKind =
  | 'anchor_selection'
  | 'extension_confirmation'
  | 'term_assignment'
  | 'stem_selection'
  | 'manual_classification';

export interface ChoiceRequest {
  id: number;
  kind: ChoiceKind;
  candidates: Record<string, unknown>[];
  context: Record<string, unknown>;
}

export interface PropertyResult {
  number: number;
  description: string;
  status: string;
  witness: unknown;
}

export interface AppliedRule {
  production: string;
  labels: string[];
}

export type SessionStatus =
  | 'running'
  | 'awaiting_choice'
  | 'completed'
  | 'failed'
  | 'error'
  | 'aborted';

export interface SessionState {
  id: string;
  terms: string[];
  mode: string;
  status: SessionStatus;
  stage: number;
  snapshots: DiagramDoc[];
  history: AppliedRule[];
  pending_choice: ChoiceRequest | null;
  diagram: DiagramDoc | null;
  properties: { properties: PropertyResult[] } | null;
  error: string | null;
}
