/** Content script: inject the trend panel into registry package pages.
 *
 * Anchors the panel at the top of the page sidebar (the documented
 * selector below); when the page has no sidebar it falls back to a
 * floating panel in the corner. One in-flight fetch per navigation;
 * the fetch starts after the page is interactive so it never blocks load.
 */

import { fetchCentrality, NotFoundError } from './api';
import { toViewModel } from './model';
import { renderErrorPanel, renderNoDataPanel, renderTrendPanel } from './panel';

const DEFAULT_SERVICE_URL = 'http://127.0.0.1:8184';
// registry package pages render their metadata column inside this container
const SIDEBAR_SELECTOR = '#top main aside, main aside, aside';
const CONTAINER_ID = 'declinewatch-panel';

function serviceUrl(): string {
  try {
    return window.localStorage.getItem('declinewatch.serviceUrl') ?? DEFAULT_SERVICE_URL;
  } catch {
    return DEFAULT_SERVICE_URL;
  }
}

/** "/package/foo" and "/package/@scope/foo" on the registry site. */
export function packageNameFromPath(pathname: string): string | null {
  const match = pathname.match(/^\/package\/((?:@[^/]+\/)?[^/]+)/);
  if (match === null) {
    return null;
  }
  return decodeURIComponent(match[1]);
}

function mountContainer(): HTMLElement {
  const existing = document.getElementById(CONTAINER_ID);
  if (existing !== null) {
    return existing;
  }
  const container = document.createElement('div');
  container.id = CONTAINER_ID;
  const sidebar = document.querySelector(SIDEBAR_SELECTOR);
  if (sidebar !== null) {
    sidebar.prepend(container);
  } else {
    container.classList.add('dw-floating');
    document.body.appendChild(container);
  }
  return container;
}

let inFlight: string | null = null;

async function showPanel(): Promise<void> {
  const name = packageNameFromPath(window.location.pathname);
  if (name === null || inFlight === name) {
    return;
  }
  inFlight = name;
  try {
    const response = await fetchCentrality(serviceUrl(), name);
    mountContainer().innerHTML = renderTrendPanel(toViewModel(response));
  } catch (error) {
    if (error instanceof NotFoundError) {
      mountContainer().innerHTML = renderNoDataPanel(name);
    } else {
      mountContainer().innerHTML = renderErrorPanel(name);
    }
  } finally {
    inFlight = null;
  }
}

if (typeof window !== 'undefined' && typeof document !== 'undefined') {
  if (document.readyState === 'loading') {
    document.addEventListener('DOMContentLoaded', () => void showPanel());
  } else {
    void showPanel();
  }
}
