/**
 * DOM wiring for the planner page.
 *
 * All statistics happen on the service; this file moves values between
 * form controls, the typed form model, and rendered responses.
 */

import { ApiClient, ApiError, StaleResponseError } from "./apiClient.js";
import type { CalculationDoc, SizeResponseDoc, EvaluateResponseDoc } from "./documents.js";
import { demoPreset, studentPreset, toDocument, totalCategories } from "./formModel.js";
import type { PlannerForm } from "./formModel.js";
import { SessionHistory } from "./history.js";
import { effectChartSvg } from "./chart.js";
import { errorsByPanel, validateForm } from "./validation.js";
import type { Panel } from "./validation.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const input = (id: string) => $<HTMLInputElement>(id);
const select = (id: string) => $<HTMLSelectElement>(id);

const history = new SessionHistory();
let client = new ApiClient("http://127.0.0.1:8000");
let previewTimer: number | undefined;

function parseNumberList(raw: string): number | number[] | undefined {
  const cells = raw.split(",").map((s) => s.trim()).filter((s) => s !== "");
  if (cells.length === 0) return undefined;
  const values = cells.map(Number);
  if (values.some((v) => Number.isNaN(v))) return undefined;
  return values.length === 1 ? values[0] : values;
}

function parseIntList(raw: string): number[] {
  return raw.split(",").map((s) => Number.parseInt(s.trim(), 10))
    .filter((v) => !Number.isNaN(v));
}

function readForm(): PlannerForm {
  const uniform = input("rand-uniform").checked;
  let randomization: PlannerForm["randomization"] = "uniform";
  if (!uniform) {
    try {
      randomization = JSON.parse($<HTMLTextAreaElement>("rand-matrix").value);
    } catch {
      randomization = [];
    }
  }
  const availabilityShape = select("tau-shape").value;
  const method = select("method").value as PlannerForm["method"];
  const result = select("result").value as PlannerForm["result"];
  const ssRaw = input("ss").value.trim();
  const turningRaw = input("beta-turn").value.trim();
  const initialRaw = input("beta-initial").value.trim();
  const form: PlannerForm = {
    days: Number(input("days").value),
    occPerDay: Number(input("occ").value) || undefined,
    categoryCounts: parseIntList(input("cat-counts").value),
    addingDays: parseIntList(input("cat-days").value),
    randomization,
    availabilityPresent: true,
    availabilityShape,
    availabilityMean: Number(input("tau-mean").value),
    method,
    test: select("test").value as PlannerForm["test"],
    betaShape: select("beta-shape").value as PlannerForm["betaShape"],
    betaMean: parseNumberList(input("beta-mean").value) ?? [],
    pow: Number(input("pow").value),
    sigLev: Number(input("siglev").value),
    result,
    baselinePresent: false,
  };
  if (availabilityShape !== "constant") {
    form.availabilityInitial = Number(input("tau-initial").value);
    const turn = input("tau-turn").value.trim();
    if (turn !== "") form.availabilityTurningDay = Number(turn);
  } else {
    form.availabilityInitial = Number(input("tau-mean").value);
  }
  if (initialRaw !== "") form.betaInitial = parseNumberList(initialRaw);
  if (turningRaw !== "") {
    const turns = parseIntList(turningRaw);
    form.betaQuadraticMax = turns.length === 1 ? turns[0] : turns;
  }
  const sigma = input("sigma").value.trim();
  if (sigma !== "") form.sigma = Number(sigma);
  if (ssRaw !== "") form.ss = Number(ssRaw);
  return form;
}

function renderErrors(errors: ReturnType<typeof validateForm>): void {
  const panels: Panel[] = ["decision-time", "category", "randomization",
                           "availability", "method", "test", "proximal-effect",
                           "result"];
  const grouped = errorsByPanel(errors);
  for (const panel of panels) {
    const node = $(`errors-${panel}`);
    const messages = grouped.get(panel) ?? [];
    node.textContent = messages.join(" · ");
    node.style.display = messages.length ? "block" : "none";
  }
}

function renderServerViolations(error: ApiError): void {
  const node = $("server-errors");
  node.style.display = "block";
  node.textContent = `${error.code}: ${error.violations
    .map((v) => v.message).join(" · ")}`;
}

function detailCard(detail: Record<string, unknown>): string {
  const rows = Object.entries(detail)
    .filter(([, v]) => v !== null && v !== undefined)
    .map(([k, v]) => `<tr><th>${k}</th><td>${formatValue(v)}</td></tr>`);
  return `<table>${rows.join("")}</table>`;
}

function formatValue(v: unknown): string {
  if (typeof v === "number") return Number.isInteger(v) ? String(v) : v.toPrecision(6);
  if (Array.isArray(v)) {
    return v.map((x) => (Array.isArray(x)
      ? `[${x.map((y) => Number(y).toPrecision(5)).join(", ")}]`
      : formatValue(x))).join(" ");
  }
  return String(v);
}

function renderHistory(): void {
  const list = $("history");
  list.innerHTML = "";
  for (const entry of [...history.list()].reverse()) {
    const item = document.createElement("li");
    item.innerHTML = `<strong>#${entry.id} ${entry.headline}</strong> `
      + `<span>${entry.sentence}</span>`;
    list.appendChild(item);
  }
}

async function refreshPreview(form: PlannerForm): Promise<void> {
  const preview = $("preview");
  try {
    const curves = await client.effectCurves(toDocument(form));
    preview.innerHTML = effectChartSvg(curves);
    preview.style.display = "block";
  } catch (err) {
    if (!(err instanceof StaleResponseError)) preview.style.display = "none";
  }
}

function schedulePreview(): void {
  window.clearTimeout(previewTimer);
  previewTimer = window.setTimeout(() => {
    const form = readForm();
    if (validateForm(form).length === 0) void refreshPreview(form);
    else $("preview").style.display = "none";
  }, 250);
}

async function submit(): Promise<void> {
  $("server-errors").style.display = "none";
  const form = readForm();
  const errors = validateForm(form);
  renderErrors(errors);
  if (errors.length > 0) return;
  const doc = toDocument(form);
  try {
    let sentence: string;
    let headline: string;
    let detail: Record<string, unknown>;
    if ((doc.result ?? "choice_sample_size") === "choice_sample_size") {
      const reply: SizeResponseDoc = await client.size(doc);
      sentence = reply.sentence;
      headline = `N = ${reply.n}`;
      detail = {
        n: reply.n,
        achieved: reply.achieved_power ?? reply.achieved_coverage,
        ncp: reply.ncp,
        df1: reply.df1,
        df2: reply.df2,
        statistic: reply.stat,
        "resolved coefficients": reply.deltas,
      };
    } else {
      const reply: EvaluateResponseDoc = await client.evaluate(doc);
      sentence = reply.sentence;
      headline = `${reply.kind} ${(reply.value).toFixed(2)} at N = ${reply.n}`;
      detail = { n: reply.n, [reply.kind]: reply.value, ncp: reply.ncp,
                 df1: reply.df1, df2: reply.df2 };
    }
    $("sentence").textContent = sentence;
    $("detail").innerHTML = detailCard(detail);
    history.push({ sentence, headline, document: doc, detail });
    renderHistory();
    void refreshPreview(form);
  } catch (err) {
    if (err instanceof ApiError) renderServerViolations(err);
    else if (!(err instanceof StaleResponseError)) {
      $("server-errors").style.display = "block";
      $("server-errors").textContent = String(err);
    }
  }
}

function applyPreset(form: PlannerForm): void {
  input("days").value = String(form.days);
  input("occ").value = String(form.occPerDay ?? 1);
  input("cat-counts").value = form.categoryCounts.join(",");
  input("cat-days").value = form.addingDays.join(",");
  input("rand-uniform").checked = form.randomization === "uniform"
    || form.randomization === undefined;
  select("tau-shape").value = form.availabilityShape ?? "constant";
  input("tau-mean").value = String(form.availabilityMean ?? 1);
  input("tau-initial").value = String(form.availabilityInitial ?? "");
  input("tau-turn").value = form.availabilityTurningDay == null
    ? "" : String(form.availabilityTurningDay);
  select("method").value = form.method ?? "power";
  select("test").value = form.test ?? "hotelling N-q-1";
  select("beta-shape").value = Array.isArray(form.betaShape)
    ? form.betaShape[0] : form.betaShape;
  input("beta-mean").value = Array.isArray(form.betaMean)
    ? form.betaMean.join(",") : String(form.betaMean);
  input("beta-initial").value = form.betaInitial == null
    ? "" : (Array.isArray(form.betaInitial)
      ? form.betaInitial.join(",") : String(form.betaInitial));
  input("beta-turn").value = form.betaQuadraticMax == null
    ? "" : (Array.isArray(form.betaQuadraticMax)
      ? form.betaQuadraticMax.join(",") : String(form.betaQuadraticMax));
  input("sigma").value = form.sigma === undefined ? "" : String(form.sigma);
  input("pow").value = String(form.pow ?? 0.8);
  input("siglev").value = String(form.sigLev ?? 0.05);
  select("result").value = form.result ?? "choice_sample_size";
  input("ss").value = form.ss == null ? "" : String(form.ss);
  schedulePreview();
}

export function boot(): void {
  client = new ApiClient(input("server-url").value.trim() || "http://127.0.0.1:8000");
  input("server-url").addEventListener("change", () => {
    client = new ApiClient(input("server-url").value.trim());
  });
  $("submit").addEventListener("click", () => void submit());
  $("preset-demo").addEventListener("click", () => applyPreset(demoPreset()));
  $("preset-student").addEventListener("click", () => applyPreset(studentPreset()));
  select("method").addEventListener("change", () => {
    // precision mode reuses the effect panel as margin-of-error targets
    $("effect-legend").textContent = select("method").value === "precision"
      ? "Precision targets (margins on the standardized scale)"
      : "Proximal effect sizes (standardized)";
  });
  for (const node of Array.from(document.querySelectorAll("input, select, textarea"))) {
    node.addEventListener("input", schedulePreview);
  }
  applyPreset(demoPreset());
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
