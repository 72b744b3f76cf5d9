/** Inline SVG sparkline over (label, value) pairs.
 *
 * The y axis is min-max normalized per chart; every point carries a
 * native <title> so hovering shows "month: rank". Output is a plain
 * markup string so rendering stays pure and snapshot-testable.
 */

export interface SparklinePoint {
  label: string;
  value: number;
}

export interface SparklineOptions {
  width?: number;
  height?: number;
  padding?: number;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function sparklineSvg(points: SparklinePoint[], options: SparklineOptions = {}): string {
  const width = options.width ?? 220;
  const height = options.height ?? 48;
  const padding = options.padding ?? 4;
  if (points.length === 0) {
    return (
      `<svg class="dw-sparkline" width="${width}" height="${height}"` +
      ` viewBox="0 0 ${width} ${height}" role="img"></svg>`
    );
  }

  const values = points.map((p) => p.value);
  const min = Math.min(...values);
  const max = Math.max(...values);
  const range = max - min;
  const innerW = width - 2 * padding;
  const innerH = height - 2 * padding;

  const coords = points.map((p, i) => {
    const x = points.length === 1 ? width / 2 : padding + (i / (points.length - 1)) * innerW;
    // flat series draws a centered line instead of dividing by zero
    const normalized = range === 0 ? 0.5 : (p.value - min) / range;
    const y = padding + (1 - normalized) * innerH;
    return { x: Number(x.toFixed(2)), y: Number(y.toFixed(2)) };
  });

  const polyline = coords.map((c) => `${c.x},${c.y}`).join(' ');
  const markers = points
    .map((p, i) => {
      const title = escapeXml(`${p.label}: ${p.value}`);
      return (
        `<circle class="dw-sparkline-point" cx="${coords[i].x}" cy="${coords[i].y}" r="2.5">` +
        `<title>${title}</title></circle>`
      );
    })
    .join('');

  return (
    `<svg class="dw-sparkline" width="${width}" height="${height}"` +
    ` viewBox="0 0 ${width} ${height}" role="img">` +
    `<polyline points="${polyline}" fill="none" stroke="currentColor"` +
    ` stroke-width="1.5" stroke-linecap="round" stroke-linejoin="round"/>` +
    markers +
    `</svg>`
  );
}
