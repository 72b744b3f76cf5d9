/** Pure HTML renderers for the trend panel and its fallback states. */

import { TrendViewModel } from './model';
import { sparklineSvg } from './sparkline';

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderTrendPanel(vm: TrendViewModel): string {
  const sparkline = sparklineSvg(vm.points.map((p) => ({ label: p.label, value: p.rankNeg })));
  const months = vm.points.length;
  return (
    `<div class="dw-panel">` +
    `<div class="dw-panel-header">` +
    `<span class="dw-title">${escapeHtml(vm.packageName)}</span>` +
    `<span class="dw-badge dw-badge--${vm.badge.tone}">${escapeHtml(vm.badge.text)}</span>` +
    `</div>` +
    `<div class="dw-chart">${sparkline}</div>` +
    `<div class="dw-panel-footer">centrality rank, ${months} month${months === 1 ? '' : 's'}` +
    ` · computed ${escapeHtml(vm.computedAt)}</div>` +
    `</div>`
  );
}

export function renderNoDataPanel(packageName: string): string {
  return (
    `<div class="dw-panel dw-panel--empty">` +
    `<div class="dw-panel-header">` +
    `<span class="dw-title">${escapeHtml(packageName)}</span>` +
    `<span class="dw-badge dw-badge--neutral">no data</span>` +
    `</div>` +
    `<div class="dw-panel-footer">this package has no centrality history</div>` +
    `</div>`
  );
}

export function renderErrorPanel(packageName: string): string {
  return (
    `<div class="dw-panel dw-panel--error">` +
    `<div class="dw-panel-header">` +
    `<span class="dw-title">${escapeHtml(packageName)}</span>` +
    `<span class="dw-badge dw-badge--neutral">unavailable</span>` +
    `</div>` +
    `<div class="dw-panel-footer">could not reach the trend service</div>` +
    `</div>`
  );
}
