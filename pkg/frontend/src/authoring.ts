/** Authoring panel: per-view tabs, relation badges, and a color picker
 * per entity.  Edits call the service and re-render from its response. */

import { relationBadge } from './state.js';
import { editableSwatchRow, swatchStrip } from './swatches.js';
import type { Assignment, GraphSummary } from './types.js';

export interface AuthoringHandlers {
  onEdit: (view: string, key: string, color: string) => void;
  onActivate: (view: string) => void;
}

export function renderAuthoring(
  container: HTMLElement,
  graph: GraphSummary,
  assignment: Assignment,
  activeView: string | null,
  handlers: AuthoringHandlers,
): void {
  container.textContent = '';
  const current = activeView && assignment.views[activeView] ? activeView : graph.views[0].id;

  const tabs = document.createElement('div');
  tabs.className = 'view-tabs';
  for (const view of graph.views) {
    const tab = document.createElement('button');
    tab.type = 'button';
    tab.className = 'view-tab' + (view.id === current ? ' active' : '');
    tab.dataset.view = view.id;
    tab.textContent = view.id;
    tab.addEventListener('click', () => handlers.onActivate(view.id));
    tabs.appendChild(tab);
  }
  container.appendChild(tabs);

  const view = graph.views.find((v) => v.id === current)!;
  const detail = document.createElement('div');
  detail.className = 'view-detail';

  const meta = document.createElement('p');
  meta.className = 'view-meta';
  meta.textContent =
    `${view.chart_kind} · field "${view.color_field}" (${view.field_kind}) · group ${view.group}`;
  detail.appendChild(meta);

  const badges = document.createElement('div');
  badges.className = 'relation-badges';
  for (const other of graph.views) {
    if (other.id === view.id) continue;
    const badge = document.createElement('span');
    badge.className = 'relation-badge';
    badge.dataset.pair = `${view.id}~${other.id}`;
    badge.textContent = `${other.id}: ${relationBadge(graph, view.id, other.id)}`;
    badge.style.marginRight = '8px';
    badge.style.fontSize = '11px';
    badges.appendChild(badge);
  }
  detail.appendChild(badges);

  const viewAssignment = assignment.views[view.id];
  // all views render their server-assigned swatches; only entity-keyed
  // top-level groups are directly editable (children derive from parents)
  const group = graph.groups.find((g) => g.id === view.group)!;
  const derived = graph.hierarchy.some((l) => l.child_group === group.id);
  if (viewAssignment.kind === 'discrete' && !derived) {
    detail.appendChild(
      editableSwatchRow(viewAssignment, {
        onPick: (key, color) => handlers.onEdit(view.id, key, color),
      }),
    );
  } else {
    const note = document.createElement('p');
    note.className = 'derived-note';
    note.textContent = derived
      ? `derived from ${graph.hierarchy.find((l) => l.child_group === group.id)!.parent_group}; edit the parent entity`
      : 'continuous ramp; edit the group root color via its field key';
    note.style.fontSize = '11px';
    detail.appendChild(note);
    detail.appendChild(swatchStrip(viewAssignment));
  }

  container.appendChild(detail);
}

/** Swatch grids for every view, mirroring the current server state. */
export function renderViewGrid(container: HTMLElement, assignment: Assignment): void {
  container.textContent = '';
  for (const [viewId, viewAssignment] of Object.entries(assignment.views)) {
    const block = document.createElement('div');
    block.className = 'view-block';
    block.dataset.view = viewId;
    const caption = document.createElement('div');
    caption.textContent = viewId;
    caption.style.fontSize = '12px';
    block.appendChild(caption);
    block.appendChild(swatchStrip(viewAssignment));
    container.appendChild(block);
  }
}
