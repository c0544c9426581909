/** Studio entry point: wires the store, API client, and panels. */

import { ApiClient } from './api.js';
import { renderAuthoring, renderViewGrid } from './authoring.js';
import { renderGallery } from './gallery.js';
import { renderControls, renderError } from './panels.js';
import { Store } from './state.js';
import type { ExportDocument } from './types.js';

export interface StudioElements {
  controls: HTMLElement;
  gallery: HTMLElement;
  authoring: HTMLElement;
  viewGrid: HTMLElement;
  errors: HTMLElement;
}

export class Studio {
  readonly store = new Store();

  constructor(
    private readonly api: ApiClient,
    private readonly el: StudioElements,
    private readonly download: (doc: ExportDocument) => void = () => {},
  ) {
    this.store.subscribe(() => this.render());
    this.render();
  }

  async loadSpec(spec: unknown): Promise<void> {
    await this.store.mutate(
      () => this.api.createSession(spec),
      (created) => ({
        sessionId: created.session_id,
        graph: created.graph,
        front: [],
        assignment: null,
        activeView: created.graph.views[0]?.id ?? null,
      }),
    );
  }

  async generate(): Promise<void> {
    const { sessionId, weights } = this.store.get();
    if (!sessionId) return;
    const front = await this.store.mutate(
      () => this.api.optimize(sessionId, { weights }),
      (res) => ({ front: res.members, selected: res.selected }),
    );
    if (front && front.members.length > 0) {
      await this.select(front.selected);
    }
  }

  async select(index: number): Promise<void> {
    const { sessionId } = this.store.get();
    if (!sessionId) return;
    await this.store.mutate(
      () => this.api.select(sessionId, index),
      (res) => ({
        selected: res.selected,
        assignment: res.assignment,
        costs: res.costs,
        scores: res.scores,
      }),
    );
  }

  async edit(view: string, key: string, color: string): Promise<void> {
    const { sessionId } = this.store.get();
    if (!sessionId) return;
    await this.store.mutate(
      () => this.api.edit(sessionId, view, key, color),
      (res) => ({ assignment: res.assignment, costs: res.costs, scores: res.scores }),
    );
  }

  async exportDocument(): Promise<ExportDocument | null> {
    const { sessionId } = this.store.get();
    if (!sessionId) return null;
    const doc = await this.api.exportDocument(sessionId);
    this.download(doc);
    return doc;
  }

  private render(): void {
    const state = this.store.get();
    renderControls(this.el.controls, state.weights, state.pending, {
      onLoadSpec: (spec) => void this.loadSpec(spec),
      onGenerate: () => void this.generate(),
      onExport: () => void this.exportDocument(),
      onWeight: (name, value) =>
        this.store.update({ weights: { ...state.weights, [name]: value } }),
    });
    renderGallery(this.el.gallery, this.store.galleryMembers(), state.selected, {
      onSelect: (index) => void this.select(index),
    });
    if (state.graph && state.assignment) {
      renderAuthoring(this.el.authoring, state.graph, state.assignment, state.activeView, {
        onEdit: (view, key, color) => void this.edit(view, key, color),
        onActivate: (view) => this.store.update({ activeView: view }),
      });
      renderViewGrid(this.el.viewGrid, state.assignment);
    } else {
      this.el.authoring.textContent = '';
      this.el.viewGrid.textContent = '';
    }
    renderError(this.el.errors, state.error);
  }
}

export function mount(root: Document = document): Studio {
  const el: StudioElements = {
    controls: root.getElementById('controls')!,
    gallery: root.getElementById('gallery')!,
    authoring: root.getElementById('authoring')!,
    viewGrid: root.getElementById('view-grid')!,
    errors: root.getElementById('errors')!,
  };
  const studio = new Studio(new ApiClient(''), el, (doc) => {
    const blob = new Blob([JSON.stringify(doc, null, 2)], { type: 'application/json' });
    const a = root.createElement('a');
    a.href = URL.createObjectURL(blob);
    a.download = `${doc.case_id}-export.json`;
    a.click();
    URL.revokeObjectURL(a.href);
  });
  return studio;
}

if (typeof document !== 'undefined' && document.getElementById('controls')) {
  mount();
}
