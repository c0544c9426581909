/** Single UI state container.
 *
 * Every mutation round-trips through the service; the state only ever
 * holds what the server last returned, so rendered colors can never
 * drift from the session's actual solution.
 */

import type { Assignment, CostSummary, FrontMember, GraphSummary } from './types.js';

export const GALLERY_LIMIT = 20;

export interface UiState {
  sessionId: string | null;
  graph: GraphSummary | null;
  weights: { w_d: number; w_gdis: number; w_hu: number; w_con: number };
  front: FrontMember[];
  selected: number;
  assignment: Assignment | null;
  costs: CostSummary | null;
  scores: Record<string, unknown> | null;
  activeView: string | null;
  pending: boolean;
  error: string | null;
}

export function initialState(): UiState {
  return {
    sessionId: null,
    graph: null,
    weights: { w_d: 1, w_gdis: 1, w_hu: 1, w_con: 1 },
    front: [],
    selected: 0,
    assignment: null,
    costs: null,
    scores: null,
    activeView: null,
    pending: false,
    error: null,
  };
}

type Listener = (state: UiState) => void;

export class Store {
  private state: UiState = initialState();
  private listeners: Listener[] = [];

  get(): UiState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  update(patch: Partial<UiState>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners) fn(this.state);
  }

  galleryMembers(): FrontMember[] {
    return this.state.front.slice(0, GALLERY_LIMIT);
  }

  /** Guard: at most one in-flight mutation per session. */
  async mutate<T>(action: () => Promise<T>, apply: (result: T) => Partial<UiState>): Promise<T | null> {
    if (this.state.pending) return null;
    this.update({ pending: true, error: null });
    try {
      const result = await action();
      this.update({ ...apply(result), pending: false });
      return result;
    } catch (err) {
      this.update({ pending: false, error: err instanceof Error ? err.message : String(err) });
      return null;
    }
  }
}

/** Relation badge label for a view pair, as inferred by the server. */
export function relationBadge(graph: GraphSummary, a: string, b: string): string {
  for (const rel of graph.relations) {
    if ((rel.a === a && rel.b === b) || (rel.a === b && rel.b === a)) {
      return rel.kind;
    }
  }
  return 'none';
}
