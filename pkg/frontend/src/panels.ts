/** Control panel: spec loading, weight sliders, generate and export. */

export interface ControlHandlers {
  onLoadSpec: (spec: unknown) => void;
  onGenerate: () => void;
  onExport: () => void;
  onWeight: (name: string, value: number) => void;
}

const WEIGHT_NAMES = ['w_d', 'w_gdis', 'w_hu', 'w_con'] as const;

export function renderControls(
  container: HTMLElement,
  weights: Record<string, number>,
  pending: boolean,
  handlers: ControlHandlers,
): void {
  container.textContent = '';

  const specInput = document.createElement('textarea');
  specInput.id = 'spec-input';
  specInput.rows = 6;
  specInput.placeholder = 'paste a multi-view spec (JSON)';
  container.appendChild(specInput);

  const load = document.createElement('button');
  load.type = 'button';
  load.id = 'load-spec';
  load.textContent = 'Load spec';
  load.addEventListener('click', () => {
    try {
      handlers.onLoadSpec(JSON.parse(specInput.value));
    } catch {
      specInput.classList.add('invalid');
    }
  });
  container.appendChild(load);

  const sliders = document.createElement('div');
  sliders.className = 'weight-sliders';
  for (const name of WEIGHT_NAMES) {
    const label = document.createElement('label');
    label.style.display = 'block';
    label.style.fontSize = '12px';
    const slider = document.createElement('input');
    slider.type = 'range';
    slider.min = '0';
    slider.max = '3';
    slider.step = '0.1';
    slider.value = String(weights[name] ?? 1);
    slider.dataset.weight = name;
    slider.addEventListener('input', () => handlers.onWeight(name, Number(slider.value)));
    label.appendChild(slider);
    label.appendChild(document.createTextNode(` ${name}`));
    sliders.appendChild(label);
  }
  container.appendChild(sliders);

  const generate = document.createElement('button');
  generate.type = 'button';
  generate.id = 'generate';
  generate.textContent = pending ? 'Working…' : 'GENERATE';
  generate.disabled = pending;
  generate.addEventListener('click', handlers.onGenerate);
  container.appendChild(generate);

  const exportBtn = document.createElement('button');
  exportBtn.type = 'button';
  exportBtn.id = 'export';
  exportBtn.textContent = 'Export';
  exportBtn.disabled = pending;
  exportBtn.addEventListener('click', handlers.onExport);
  container.appendChild(exportBtn);
}

export function renderError(container: HTMLElement, message: string | null): void {
  container.textContent = message ?? '';
  container.style.display = message ? 'block' : 'none';
}
