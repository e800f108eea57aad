/**
 * Client-side mirrors of the service's design validation.
 *
 * These catch the same problems the server answers 422 for, so users see
 * errors next to the offending panel before anything is submitted.  The
 * server remains authoritative; anything it rejects that slipped through
 * here is rendered from the 422 payload instead.
 */

import type { PlannerForm } from "./formModel.js";
import { totalCategories } from "./formModel.js";

export type Panel =
  | "decision-time"
  | "category"
  | "randomization"
  | "availability"
  | "method"
  | "test"
  | "proximal-effect"
  | "result";

export interface FormError {
  panel: Panel;
  message: string;
}

const ROW_SUM_TOL = 1e-9;

function asList(value: number | number[] | null | undefined): number[] | null {
  if (value === null || value === undefined) return null;
  return Array.isArray(value) ? value : [value];
}

function shapes(form: PlannerForm): string[] {
  const m = totalCategories(form);
  const raw = form.betaShape;
  const list = Array.isArray(raw) ? raw : Array(m).fill(raw);
  return list.map((s) => String(s).toLowerCase().replace(/[-_]/g, " "));
}

export function validateForm(form: PlannerForm): FormError[] {
  const errors: FormError[] = [];
  const push = (panel: Panel, message: string) => errors.push({ panel, message });

  if (!Number.isInteger(form.days) || form.days < 1) {
    push("decision-time", "days must be >= 1");
  }
  if (form.occPerDay !== undefined
      && (!Number.isInteger(form.occPerDay) || form.occPerDay < 1)) {
    push("decision-time", "decision time points per day must be >= 1");
  }

  if (form.categoryCounts.length === 0) {
    push("category", "at least one category batch is required");
  }
  if (form.categoryCounts.length !== form.addingDays.length) {
    push("category", "category counts and adding days must align");
  }
  form.categoryCounts.forEach((c, i) => {
    if (!Number.isInteger(c) || c < 1) {
      push("category", `batch ${i + 1}: count must be a positive integer`);
    }
  });
  if (form.addingDays.length > 0) {
    if (form.addingDays[0] > 1) push("category", "the first adding day must be 1");
    for (let i = 1; i < form.addingDays.length; i++) {
      if (form.addingDays[i] <= form.addingDays[i - 1] || form.addingDays[i] <= 1) {
        push("category", "adding days must be strictly increasing after day 1");
        break;
      }
    }
    const last = form.addingDays[form.addingDays.length - 1];
    if (last > form.days) push("category", "last adding day is beyond the study period");
  }

  errors.push(...validateRandomization(form));
  errors.push(...validateAvailability(form));

  if (form.method !== undefined && !["power", "precision"].includes(form.method)) {
    push("method", "method must be power or precision");
  }
  if (form.test !== undefined
      && !["chi", "hotelling N", "hotelling N-q-1"].includes(form.test)) {
    push("test", "unknown test statistic");
  }

  errors.push(...validateEffects(form));

  if (form.pow !== undefined && !(form.pow > 0 && form.pow < 1)) {
    push("result", "target power must be in (0, 1)");
  }
  if (form.sigLev !== undefined && !(form.sigLev > 0 && form.sigLev < 1)) {
    push("result", "significance level must be in (0, 1)");
  }
  if (form.result !== "choice_sample_size" && form.result !== undefined
      && (form.ss === undefined || form.ss === null)) {
    push("result", "a sample size is required to evaluate power or coverage");
  }
  return errors;
}

function validateRandomization(form: PlannerForm): FormError[] {
  const errors: FormError[] = [];
  const plan = form.randomization;
  if (plan === undefined || plan === "uniform") return errors;
  const m = totalCategories(form);
  if (plan.length !== form.days) {
    errors.push({ panel: "randomization",
                  message: `matrix has ${plan.length} rows for ${form.days} days` });
    return errors;
  }
  const addingByCategory: number[] = [];
  form.categoryCounts.forEach((count, i) => {
    for (let k = 0; k < count; k++) {
      addingByCategory.push(Math.max(form.addingDays[i], 1));
    }
  });
  for (let d = 0; d < plan.length; d++) {
    const row = plan[d];
    if (row.length !== m + 1) {
      errors.push({ panel: "randomization",
                    message: `row ${d + 1} has ${row.length} entries, expected ${m + 1}` });
      return errors;
    }
    if (row.some((p) => p < 0 || p > 1)) {
      errors.push({ panel: "randomization",
                    message: `row ${d + 1}: probabilities must be in [0, 1]` });
    }
    const sum = row.reduce((a, b) => a + b, 0);
    if (Math.abs(sum - 1) > ROW_SUM_TOL) {
      errors.push({ panel: "randomization",
                    message: `row ${d + 1} sums to ${sum.toPrecision(6)}, expected 1` });
    }
    for (let cat = 1; cat <= m; cat++) {
      const active = d + 1 >= addingByCategory[cat - 1];
      if (!active && row[cat] > 0) {
        errors.push({ panel: "randomization",
                      message: `category ${cat} has positive probability on day ${d + 1}, `
                        + `before its adding day` });
      }
      if (active && row[cat] <= 0) {
        errors.push({ panel: "randomization",
                      message: `category ${cat} needs positive probability on day ${d + 1}` });
      }
    }
    if (errors.length > 8) return errors; // enough to point at the problem
  }
  return errors;
}

function validateAvailability(form: PlannerForm): FormError[] {
  const errors: FormError[] = [];
  if (!form.availabilityPresent) return errors;
  const mean = form.availabilityMean;
  if (mean !== undefined && !(mean > 0 && mean <= 1)) {
    errors.push({ panel: "availability", message: "expected availability must be in (0, 1]" });
  }
  const shape = (form.availabilityShape ?? "constant").toLowerCase();
  if (shape !== "constant") {
    if (form.availabilityInitial === undefined || form.availabilityInitial === null) {
      errors.push({ panel: "availability",
                    message: "non-constant availability needs an initial value" });
    }
    if ((shape.includes("quadratic") || shape.includes("plateau")
         || shape.includes("linear and constant"))
        && shape !== "linear"
        && (form.availabilityTurningDay === undefined
            || form.availabilityTurningDay === null)) {
      errors.push({ panel: "availability",
                    message: "this availability shape needs a turning day" });
    }
  }
  return errors;
}

function validateEffects(form: PlannerForm): FormError[] {
  const errors: FormError[] = [];
  const m = totalCategories(form);
  const push = (message: string) =>
    errors.push({ panel: "proximal-effect", message });

  const shapeList = shapes(form);
  if (Array.isArray(form.betaShape) && form.betaShape.length !== m) {
    push(`beta_shape lists ${form.betaShape.length} entries for ${m} categories`);
  }
  const means = asList(form.betaMean);
  if (means === null || means.length === 0) {
    push("average effect size is required");
  } else if (means.length !== 1 && means.length !== m) {
    push(`beta_mean lists ${means.length} entries for ${m} categories`);
  }
  const initials = asList(form.betaInitial ?? null);
  const needsInitial = shapeList.some((s) => s !== "constant");
  if (needsInitial && initials === null) {
    push("initial effect size is required for non-constant trends");
  }
  if (initials !== null && initials.length !== 1 && initials.length !== m) {
    push(`beta_initial lists ${initials.length} entries for ${m} categories`);
  }
  const turns = asList(form.betaQuadraticMax ?? null);
  const needsTurn = shapeList.some(
    (s) => s.includes("quadratic") || s.includes("plateau") || s === "linear and constant");
  if (needsTurn && turns === null) {
    push("a turning day is required for quadratic or linear-plateau trends");
  }
  if (turns !== null && turns.length !== 1 && turns.length !== m) {
    push(`beta_quadratic_max lists ${turns.length} entries for ${m} categories`);
  }
  if (turns !== null) {
    const addingByCategory: number[] = [];
    form.categoryCounts.forEach((count, i) => {
      for (let k = 0; k < count; k++) {
        addingByCategory.push(Math.max(form.addingDays[i] ?? 1, 1));
      }
    });
    const expanded = turns.length === 1 ? Array(m).fill(turns[0]) : turns;
    expanded.forEach((t, idx) => {
      if (needsTurn && (t < addingByCategory[idx] || t > form.days)) {
        push(`category ${idx + 1}: turning day ${t} outside its active period`);
      }
    });
  }
  if (form.sigma !== undefined && !(form.sigma > 0)) {
    push("sigma must be positive");
  }
  return errors;
}

/** Group errors by panel for inline rendering. */
export function errorsByPanel(errors: FormError[]): Map<Panel, string[]> {
  const grouped = new Map<Panel, string[]>();
  for (const e of errors) {
    const bucket = grouped.get(e.panel) ?? [];
    bucket.push(e.message);
    grouped.set(e.panel, bucket);
  }
  return grouped;
}
