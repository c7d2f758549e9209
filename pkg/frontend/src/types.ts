/** Wire types mirroring the service's JSON payloads (schema emorole-api/1). */

export type Role =
  | "Cue" | "Experiencer" | "Target" | "Cause" | "Territory"
  | "Object" | "Attack" | "Attacker" | "Modifier" | "Negation";

export const ALL_ROLES: Role[] = [
  "Cue", "Experiencer", "Target", "Cause", "Territory",
  "Object", "Attack", "Attacker", "Modifier", "Negation",
];

export interface SpanRef {
  sent: number;
  start: number;
  end: number;
}

export interface AnnotationRecord {
  id: number;
  role: Role;
  span: SpanRef;
  emotion: string | null;
  negated: boolean;
  intensity: SpanRef | null;
  cue_link: number | null;
  provenance: string;
}

export interface AnnotationSetPayload {
  schema: string;
  doc_id: string;
  kind?: string;
  annotations: AnnotationRecord[];
}

export interface TokenPayload {
  index: number;
  surface: string;
  lemma: string;
  upos: string;
  head: number;
  deprel: string;
  feats: Record<string, string>;
}

export interface SentencePayload {
  index: number;
  section: string;
  tokens: TokenPayload[];
  chunks: SpanRef[];
}

export interface DocumentPayload {
  schema: string;
  id: string;
  language: string;
  sentences: SentencePayload[];
  chains: { id: number; mentions: SpanRef[] }[];
  meta: Record<string, string>;
}

export interface GraphNodePayload {
  id: string;
  surface: string;
  sent: number;
  index: number;
  roles: string[];
}

export interface GraphEdgePayload {
  src: string;
  dst: string;
  type: "Sequential" | "Dependency" | "ChunkMembership" | "Coref";
  label: string | null;
}

export interface GraphPayload {
  schema: string;
  layers: string[];
  nodes: GraphNodePayload[];
  edges: GraphEdgePayload[];
}

export interface PreviewMatch {
  sent: number;
  bindings: Record<string, { index: number; surface: string }>;
}

export interface PreviewResponse {
  schema: string;
  rule: string;
  documents: Record<string, { count: number; matches: PreviewMatch[] }>;
}

export interface RulesetPayload {
  schema: string;
  ruleset: { schema: string; rules: unknown[] };
}

/** Node and edge colors, matching the engine's DOT palette. */
export const ROLE_COLORS: Record<Role, string> = {
  Experiencer: "red",
  Territory: "purple",
  Attacker: "brown",
  Attack: "gold",
  Cue: "orange",
  Target: "gray",
  Cause: "gray",
  Object: "gray",
  Modifier: "gray",
  Negation: "gray",
};

/** Priority used when one token carries several roles. */
export const ROLE_PRIORITY: Role[] = [
  "Experiencer", "Territory", "Attacker", "Attack", "Cue",
  "Target", "Cause", "Object", "Modifier", "Negation",
];

export const EDGE_COLORS: Record<GraphEdgePayload["type"], string> = {
  Sequential: "pink",
  ChunkMembership: "green",
  Dependency: "silver",
  Coref: "blue",
};
