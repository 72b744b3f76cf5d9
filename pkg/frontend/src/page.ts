/** Standalone demo page: look up any package against a service URL. */

import { fetchCentrality, NotFoundError } from './api';
import { toViewModel } from './model';
import { renderErrorPanel, renderNoDataPanel, renderTrendPanel } from './panel';

const DEFAULT_SERVICE_URL = 'http://127.0.0.1:8184';

async function lookup(baseUrl: string, name: string, target: HTMLElement): Promise<void> {
  target.innerHTML = '<div class="dw-panel"><div class="dw-panel-footer">loading…</div></div>';
  try {
    const response = await fetchCentrality(baseUrl, name);
    target.innerHTML = renderTrendPanel(toViewModel(response));
  } catch (error) {
    target.innerHTML =
      error instanceof NotFoundError ? renderNoDataPanel(name) : renderErrorPanel(name);
  }
}

function init(): void {
  const form = document.getElementById('lookup-form') as HTMLFormElement;
  const nameInput = document.getElementById('package-name') as HTMLInputElement;
  const baseInput = document.getElementById('service-url') as HTMLInputElement;
  const target = document.getElementById('panel-root') as HTMLElement;

  const params = new URLSearchParams(window.location.search);
  baseInput.value = params.get('base') ?? DEFAULT_SERVICE_URL;
  const preset = params.get('pkg');
  if (preset !== null) {
    nameInput.value = preset;
    void lookup(baseInput.value, preset, target);
  }

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    if (nameInput.value.trim() !== '') {
      void lookup(baseInput.value.trim(), nameInput.value.trim(), target);
    }
  });
}

if (document.readyState === 'loading') {
  document.addEventListener('DOMContentLoaded', init);
} else {
  init();
}
