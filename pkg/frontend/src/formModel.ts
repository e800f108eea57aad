/**
 * Planner form state and its lossless mapping onto calculation documents.
 *
 * The form mirrors the service schema one field per panel; converting a
 * document into a form and back must reproduce the document exactly, so
 * saved configs survive editing sessions untouched.
 */

import type {
  CalculationDoc,
  MethodName,
  ResultChoice,
  TestName,
  TrendShape,
} from "./documents.js";

export interface PlannerForm {
  // decision-time panel
  days: number;
  occPerDay?: number;
  // category panel
  categoryCounts: number[];
  addingDays: number[];
  // randomization panel
  randomization?: "uniform" | number[][];
  // availability panel
  availabilityShape?: string;
  availabilityMean?: number;
  availabilityInitial?: number | null;
  availabilityTurningDay?: number | null;
  availabilityPresent: boolean;
  // method panel
  method?: MethodName;
  // test panel
  test?: TestName;
  // proximal-effect panel
  betaShape: TrendShape | TrendShape[];
  betaMean: number | number[];
  betaInitial?: number | number[] | null;
  betaQuadraticMax?: number | number[] | null;
  sigma?: number;
  // result panel
  pow?: number;
  sigLev?: number;
  result?: ResultChoice;
  ss?: number | null;
  // advanced overrides
  q?: number | null;
  baselineShape?: string;
  baselineTurningDay?: number | null;
  baselinePresent: boolean;
}

export function fromDocument(doc: CalculationDoc): PlannerForm {
  const availability = doc.availability;
  const baseline = doc.baseline ?? undefined;
  return {
    days: doc.days,
    occPerDay: doc.occ_per_day,
    categoryCounts: [...doc.category_counts],
    addingDays: [...doc.adding_days],
    randomization: doc.randomization,
    availabilityPresent: availability !== undefined,
    availabilityShape: availability?.shape,
    availabilityMean: availability?.mean,
    availabilityInitial: availability?.initial,
    availabilityTurningDay: availability?.turning_day,
    method: doc.method,
    test: doc.test,
    betaShape: doc.beta_shape,
    betaMean: doc.beta_mean,
    betaInitial: doc.beta_initial,
    betaQuadraticMax: doc.beta_quadratic_max,
    sigma: doc.sigma,
    pow: doc.pow,
    sigLev: doc.sigLev,
    result: doc.result,
    ss: doc.SS,
    q: doc.q,
    baselinePresent: baseline !== undefined,
    baselineShape: baseline?.shape,
    baselineTurningDay: baseline?.turning_day,
  };
}

export function toDocument(form: PlannerForm): CalculationDoc {
  const doc: CalculationDoc = {
    days: form.days,
    category_counts: [...form.categoryCounts],
    adding_days: [...form.addingDays],
    beta_shape: form.betaShape,
    beta_mean: form.betaMean,
  };
  if (form.occPerDay !== undefined) doc.occ_per_day = form.occPerDay;
  if (form.randomization !== undefined) doc.randomization = form.randomization;
  if (form.availabilityPresent) {
    doc.availability = {};
    if (form.availabilityShape !== undefined) doc.availability.shape = form.availabilityShape;
    if (form.availabilityMean !== undefined) doc.availability.mean = form.availabilityMean;
    if (form.availabilityInitial !== undefined) {
      doc.availability.initial = form.availabilityInitial;
    }
    if (form.availabilityTurningDay !== undefined) {
      doc.availability.turning_day = form.availabilityTurningDay;
    }
  }
  if (form.betaInitial !== undefined) doc.beta_initial = form.betaInitial;
  if (form.betaQuadraticMax !== undefined) doc.beta_quadratic_max = form.betaQuadraticMax;
  if (form.sigma !== undefined) doc.sigma = form.sigma;
  if (form.pow !== undefined) doc.pow = form.pow;
  if (form.sigLev !== undefined) doc.sigLev = form.sigLev;
  if (form.method !== undefined) doc.method = form.method;
  if (form.test !== undefined) doc.test = form.test;
  if (form.result !== undefined) doc.result = form.result;
  if (form.ss !== undefined) doc.SS = form.ss;
  if (form.q !== undefined) doc.q = form.q;
  if (form.baselinePresent) {
    doc.baseline = { shape: form.baselineShape ?? "constant" };
    if (form.baselineTurningDay !== undefined) {
      doc.baseline.turning_day = form.baselineTurningDay;
    }
  }
  return doc;
}

/** Total categories declared by the schedule panel. */
export function totalCategories(form: PlannerForm): number {
  return form.categoryCounts.reduce((a, b) => a + b, 0);
}

/** Fresh form prefilled with the published 180-day demo scenario. */
export function demoPreset(): PlannerForm {
  return fromDocument({
    days: 180,
    occ_per_day: 1,
    category_counts: [3, 1],
    adding_days: [1, 91],
    randomization: "uniform",
    availability: { shape: "constant", mean: 0.7, initial: 0.7 },
    beta_shape: "linear and constant",
    beta_initial: 0.01,
    beta_mean: 0.1,
    beta_quadratic_max: [28, 28, 28, 118],
    sigma: 1.0,
    pow: 0.8,
    sigLev: 0.05,
    method: "power",
    test: "hotelling N-q-1",
    result: "choice_sample_size",
  });
}

/** Student-study preset: three constant-effect categories, full availability. */
export function studentPreset(): PlannerForm {
  return fromDocument({
    days: 44,
    occ_per_day: 1,
    category_counts: [3],
    adding_days: [1],
    randomization: "uniform",
    availability: { shape: "constant", mean: 1.0, initial: 1.0 },
    beta_shape: "constant",
    beta_mean: [0.073, 0.121, 0.108],
    sigma: 4869.0,
    pow: 0.8,
    sigLev: 0.05,
    method: "power",
    test: "hotelling N-q-1",
    result: "choice_sample_size",
  });
}
