/** Gallery: non-dominated solutions as swatch strips plus an objective
 * scatter (inline SVG; values come straight from the server). */

import { swatchStrip } from './swatches.js';
import type { FrontMember } from './types.js';

export interface GalleryHandlers {
  onSelect: (index: number) => void;
}

export function renderGallery(
  container: HTMLElement,
  members: FrontMember[],
  selected: number,
  handlers: GalleryHandlers,
): void {
  container.textContent = '';
  container.appendChild(costScatter(members, selected, handlers));

  const list = document.createElement('div');
  list.className = 'gallery-list';
  members.forEach((member, index) => {
    const entry = document.createElement('button');
    entry.type = 'button';
    entry.className = 'gallery-entry' + (index === selected ? ' selected' : '');
    entry.dataset.index = String(index);
    entry.style.display = 'block';
    entry.style.margin = '4px 0';
    entry.addEventListener('click', () => handlers.onSelect(index));

    const label = document.createElement('span');
    label.className = 'gallery-costs';
    label.textContent = `#${index}  sv ${member.c_sv.toFixed(3)} / mv ${member.c_mv.toFixed(3)}`;
    label.style.fontSize = '11px';
    label.style.marginRight = '8px';
    entry.appendChild(label);

    for (const viewId of Object.keys(member.assignment.views)) {
      entry.appendChild(swatchStrip(member.assignment.views[viewId], 12));
    }
    list.appendChild(entry);
  });
  container.appendChild(list);
}

const SVG_NS = 'http://www.w3.org/2000/svg';

function costScatter(
  members: FrontMember[],
  selected: number,
  handlers: GalleryHandlers,
): SVGSVGElement {
  const width = 260;
  const height = 180;
  const pad = 24;
  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('class', 'cost-scatter');
  svg.setAttribute('viewBox', `0 0 ${width} ${height}`);
  svg.setAttribute('width', String(width));
  svg.setAttribute('height', String(height));

  if (members.length === 0) return svg;
  const xs = members.map((m) => m.c_sv);
  const ys = members.map((m) => m.c_mv);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const sx = (v: number) =>
    pad + (xMax === xMin ? 0.5 : (v - xMin) / (xMax - xMin)) * (width - 2 * pad);
  const sy = (v: number) =>
    height - pad - (yMax === yMin ? 0.5 : (v - yMin) / (yMax - yMin)) * (height - 2 * pad);

  members.forEach((member, index) => {
    const dot = document.createElementNS(SVG_NS, 'circle');
    dot.setAttribute('cx', String(sx(member.c_sv)));
    dot.setAttribute('cy', String(sy(member.c_mv)));
    dot.setAttribute('r', index === selected ? '6' : '4');
    dot.setAttribute('fill', index === selected ? '#d95f02' : '#4477aa');
    dot.setAttribute('data-index', String(index));
    const tip = document.createElementNS(SVG_NS, 'title');
    tip.textContent = `#${index}: sv ${member.c_sv.toFixed(4)}, mv ${member.c_mv.toFixed(4)}`;
    dot.appendChild(tip);
    dot.addEventListener('click', () => handlers.onSelect(index));
    svg.appendChild(dot);
  });
  return svg;
}
