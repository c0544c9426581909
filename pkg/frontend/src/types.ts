/** Payload shapes of the colormap service API. */

export interface ViewSummary {
  id: string;
  bbox: number[];
  chart_kind: string;
  color_field: string;
  field_kind: 'categorical' | 'sequential';
  domain: (string | number)[];
  group: string;
}

export interface GroupSummary {
  id: string;
  views: string[];
  kind: 'categorical' | 'sequential';
  domain: string[];
}

export interface RelationSummary {
  a: string;
  b: string;
  kind: 'full' | 'partial' | 'none' | 'hierarchy';
  parent: string | null;
}

export interface HierarchyLinkSummary {
  parent_group: string;
  parent_key: string;
  child_group: string;
}

export interface GraphSummary {
  views: ViewSummary[];
  groups: GroupSummary[];
  relations: RelationSummary[];
  hierarchy: HierarchyLinkSummary[];
}

export interface ViewAssignment {
  kind: 'discrete' | 'continuous';
  keys: string[];
  colors: string[];
}

export interface Assignment {
  views: Record<string, ViewAssignment>;
}

export interface FrontMember {
  c_sv: number;
  c_mv: number;
  assignment: Assignment;
}

export interface FrontResponse {
  members: FrontMember[];
  selected: number;
}

export interface CostSummary {
  c_sv: number;
  c_mv: number;
  [key: string]: unknown;
}

export interface SelectResponse {
  selected: number;
  assignment: Assignment;
  costs: CostSummary | null;
  scores: Record<string, unknown>;
}

export interface EditResponse {
  assignment: Assignment;
  costs: CostSummary;
  scores: Record<string, unknown>;
  gamut_warnings: { view: string; key: string }[];
}

export interface PaletteEntry {
  name: string;
  colors: string[];
}

export interface SessionCreated {
  session_id: string;
  graph: GraphSummary;
}

export interface OptimizeOverrides {
  pop_size?: number;
  generations?: number;
  n_best?: number;
  step?: number;
  seed?: number;
  weights?: Record<string, number>;
}

export interface ExportDocument {
  case_id: string;
  seed: number;
  members: { assignment: Assignment; costs: CostSummary; scores: Record<string, unknown> }[];
  selected?: { index: number; assignment: Assignment };
  [key: string]: unknown;
}

export interface ApiError {
  code: string;
  detail: string;
}
