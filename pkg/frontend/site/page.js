"use strict";
(() => {
  // src/api.ts
  var NotFoundError = class extends Error {
  };
  function sleep(ms) {
    return new Promise((resolve) => setTimeout(resolve, ms));
  }
  async function fetchCentrality(baseUrl, packageName, options = {}) {
    const months = options.months ?? 12;
    const retryDelayMs = options.retryDelayMs ?? 500;
    const fetchFn = options.fetchFn ?? fetch;
    const url = `${baseUrl.replace(/\/$/, "")}/v1/packages/${encodeURIComponent(packageName)}/centrality?months=${months}`;
    for (let attempt = 0; ; attempt++) {
      try {
        const response = await fetchFn(url);
        if (response.status === 404) {
          throw new NotFoundError(`no data for ${packageName}`);
        }
        if (!response.ok) {
          throw new Error(`service returned ${response.status}`);
        }
        return await response.json();
      } catch (error) {
        if (error instanceof NotFoundError || attempt >= 1) {
          throw error;
        }
        await sleep(retryDelayMs);
      }
    }
  }

  // src/model.ts
  var BADGES = {
    in_decline: { text: "in decline", tone: "declining" },
    not_in_decline: { text: "stable/rising", tone: "healthy" },
    insufficient_data: { text: "insufficient data", tone: "neutral" }
  };
  function toViewModel(response) {
    const badge = BADGES[response.decline.status];
    if (badge === void 0) {
      throw new TypeError(`unknown decline status: ${response.decline.status}`);
    }
    return {
      packageName: response.package,
      points: response.series.map((p) => ({ label: p.month, rankNeg: p.rank_neg })),
      badge,
      computedAt: response.computed_at
    };
  }

  // src/sparkline.ts
  function escapeXml(text) {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
  }
  function sparklineSvg(points, options = {}) {
    const width = options.width ?? 220;
    const height = options.height ?? 48;
    const padding = options.padding ?? 4;
    if (points.length === 0) {
      return `<svg class="dw-sparkline" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" role="img"></svg>`;
    }
    const values = points.map((p) => p.value);
    const min = Math.min(...values);
    const max = Math.max(...values);
    const range = max - min;
    const innerW = width - 2 * padding;
    const innerH = height - 2 * padding;
    const coords = points.map((p, i) => {
      const x = points.length === 1 ? width / 2 : padding + i / (points.length - 1) * innerW;
      const normalized = range === 0 ? 0.5 : (p.value - min) / range;
      const y = padding + (1 - normalized) * innerH;
      return { x: Number(x.toFixed(2)), y: Number(y.toFixed(2)) };
    });
    const polyline = coords.map((c) => `${c.x},${c.y}`).join(" ");
    const markers = points.map((p, i) => {
      const title = escapeXml(`${p.label}: ${p.value}`);
      return `<circle class="dw-sparkline-point" cx="${coords[i].x}" cy="${coords[i].y}" r="2.5"><title>${title}</title></circle>`;
    }).join("");
    return `<svg class="dw-sparkline" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" role="img"><polyline points="${polyline}" fill="none" stroke="currentColor" stroke-width="1.5" stroke-linecap="round" stroke-linejoin="round"/>` + markers + `</svg>`;
  }

  // src/panel.ts
  function escapeHtml(text) {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
  }
  function renderTrendPanel(vm) {
    const sparkline = sparklineSvg(vm.points.map((p) => ({ label: p.label, value: p.rankNeg })));
    const months = vm.points.length;
    return `<div class="dw-panel"><div class="dw-panel-header"><span class="dw-title">${escapeHtml(vm.packageName)}</span><span class="dw-badge dw-badge--${vm.badge.tone}">${escapeHtml(vm.badge.text)}</span></div><div class="dw-chart">${sparkline}</div><div class="dw-panel-footer">centrality rank, ${months} month${months === 1 ? "" : "s"} \xB7 computed ${escapeHtml(vm.computedAt)}</div></div>`;
  }
  function renderNoDataPanel(packageName) {
    return `<div class="dw-panel dw-panel--empty"><div class="dw-panel-header"><span class="dw-title">${escapeHtml(packageName)}</span><span class="dw-badge dw-badge--neutral">no data</span></div><div class="dw-panel-footer">this package has no centrality history</div></div>`;
  }
  function renderErrorPanel(packageName) {
    return `<div class="dw-panel dw-panel--error"><div class="dw-panel-header"><span class="dw-title">${escapeHtml(packageName)}</span><span class="dw-badge dw-badge--neutral">unavailable</span></div><div class="dw-panel-footer">could not reach the trend service</div></div>`;
  }

  // src/page.ts
  var DEFAULT_SERVICE_URL = "http://127.0.0.1:8184";
  async function lookup(baseUrl, name, target) {
    target.innerHTML = '<div class="dw-panel"><div class="dw-panel-footer">loading\u2026</div></div>';
    try {
      const response = await fetchCentrality(baseUrl, name);
      target.innerHTML = renderTrendPanel(toViewModel(response));
    } catch (error) {
      target.innerHTML = error instanceof NotFoundError ? renderNoDataPanel(name) : renderErrorPanel(name);
    }
  }
  function init() {
    const form = document.getElementById("lookup-form");
    const nameInput = document.getElementById("package-name");
    const baseInput = document.getElementById("service-url");
    const target = document.getElementById("panel-root");
    const params = new URLSearchParams(window.location.search);
    baseInput.value = params.get("base") ?? DEFAULT_SERVICE_URL;
    const preset = params.get("pkg");
    if (preset !== null) {
      nameInput.value = preset;
      void lookup(baseInput.value, preset, target);
    }
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      if (nameInput.value.trim() !== "") {
        void lookup(baseInput.value.trim(), nameInput.value.trim(), target);
      }
    });
  }
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", init);
  } else {
    init();
  }
})();
