/** Swatch rendering helpers (plain DOM, no client-side color math). */

import type { ViewAssignment } from './types.js';

export function swatchStrip(assignment: ViewAssignment, size = 18): HTMLElement {
  const strip = document.createElement('div');
  strip.className = 'swatch-strip';
  strip.style.display = 'flex';
  strip.style.gap = '2px';
  assignment.colors.forEach((color, i) => {
    const cell = document.createElement('span');
    cell.className = 'swatch';
    cell.dataset.key = assignment.keys[i];
    cell.dataset.color = color;
    cell.title = `${assignment.keys[i]}: ${color}`;
    cell.style.width = `${size}px`;
    cell.style.height = `${size}px`;
    cell.style.display = 'inline-block';
    cell.style.borderRadius = '3px';
    cell.style.background = color;
    strip.appendChild(cell);
  });
  return strip;
}

export interface SwatchRowHandlers {
  onPick?: (key: string, color: string) => void;
}

/** A labeled swatch row with an attached native color picker per entry. */
export function editableSwatchRow(
  assignment: ViewAssignment,
  handlers: SwatchRowHandlers = {},
): HTMLElement {
  const row = document.createElement('div');
  row.className = 'swatch-row';
  assignment.keys.forEach((key, i) => {
    const item = document.createElement('label');
    item.className = 'swatch-item';
    item.style.display = 'inline-flex';
    item.style.alignItems = 'center';
    item.style.gap = '4px';
    item.style.marginRight = '10px';

    const picker = document.createElement('input');
    picker.type = 'color';
    picker.value = assignment.colors[i];
    picker.dataset.key = key;
    picker.addEventListener('change', () => {
      handlers.onPick?.(key, picker.value);
    });

    const caption = document.createElement('span');
    caption.textContent = key;
    caption.style.fontSize = '12px';

    item.appendChild(picker);
    item.appendChild(caption);
    row.appendChild(item);
  });
  return row;
}
