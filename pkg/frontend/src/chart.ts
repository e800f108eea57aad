/**
 * Minimal dependency-free SVG line chart for the effect-curve preview.
 *
 * Every plotted value comes straight from the service's resolved curves;
 * this module only maps numbers to pixels.
 */

import type { EffectCurvesResponseDoc } from "./documents.js";

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                 "#8c564b", "#17becf", "#7f7f7f"];

export interface ChartOptions {
  width?: number;
  height?: number;
  pad?: number;
}

export function effectChartSvg(curves: EffectCurvesResponseDoc,
                               options: ChartOptions = {}): string {
  const width = options.width ?? 640;
  const height = options.height ?? 260;
  const pad = options.pad ?? 36;
  const everyValue = curves.curves.flatMap((c) => c.values);
  if (everyValue.length === 0) return `<svg width="${width}" height="${height}"></svg>`;
  let lo = Math.min(0, ...everyValue);
  let hi = Math.max(0, ...everyValue);
  if (hi - lo < 1e-12) hi = lo + 1;
  const dayMax = curves.days;

  const x = (day: number) => pad + ((day - 1) / Math.max(dayMax - 1, 1)) * (width - 2 * pad);
  const y = (value: number) => height - pad - ((value - lo) / (hi - lo)) * (height - 2 * pad);

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" `
    + `viewBox="0 0 ${width} ${height}" role="img">`);
  // axes
  parts.push(`<line x1="${pad}" y1="${y(0)}" x2="${width - pad}" y2="${y(0)}" `
    + `stroke="#999" stroke-width="1"/>`);
  parts.push(`<line x1="${pad}" y1="${pad}" x2="${pad}" y2="${height - pad}" `
    + `stroke="#999" stroke-width="1"/>`);
  parts.push(`<text x="${width - pad}" y="${height - 8}" text-anchor="end" `
    + `font-size="11" fill="#555">day ${dayMax}</text>`);
  parts.push(`<text x="${pad}" y="${height - 8}" font-size="11" fill="#555">day 1</text>`);
  parts.push(`<text x="8" y="${pad}" font-size="11" fill="#555">${hi.toPrecision(3)}</text>`);
  parts.push(`<text x="8" y="${height - pad}" font-size="11" fill="#555">`
    + `${lo.toPrecision(3)}</text>`);

  curves.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const points = curve.days
      .map((d, k) => `${x(d).toFixed(2)},${y(curve.values[k]).toFixed(2)}`)
      .join(" ");
    parts.push(`<polyline fill="none" stroke="${color}" stroke-width="2" `
      + `points="${points}"/>`);
    // adding-day marker: curves for later categories start mid-study
    parts.push(`<circle cx="${x(curve.adding_day).toFixed(2)}" `
      + `cy="${y(curve.values[0]).toFixed(2)}" r="3.5" fill="${color}"/>`);
    parts.push(`<text x="${(width - pad) + 4 - 0}" y="${(pad + 14 * i)}" font-size="11" `
      + `fill="${color}" text-anchor="end">cat ${curve.category}</text>`);
  });
  parts.push("</svg>");
  return parts.join("");
}
