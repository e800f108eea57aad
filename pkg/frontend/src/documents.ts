/**
 * Wire documents exchanged with the sizing service.
 *
 * Field names are the service contract; the planner never computes any
 * statistic itself, it only builds these documents and renders responses.
 */

export type TrendShape =
  | "constant"
  | "linear"
  | "quadratic"
  | "linear_plateau"
  | "linear and constant";

export type TestName = "chi" | "hotelling N" | "hotelling N-q-1";

export type MethodName = "power" | "precision";

export type ResultChoice =
  | "choice_sample_size"
  | "choice_power"
  | "choice_coverage_probability";

export interface AvailabilityDoc {
  shape?: string;
  mean?: number;
  initial?: number | null;
  turning_day?: number | null;
}

export interface BaselineDoc {
  shape: string;
  turning_day?: number | null;
}

export interface CalculationDoc {
  days: number;
  occ_per_day?: number;
  category_counts: number[];
  adding_days: number[];
  randomization?: "uniform" | number[][];
  availability?: AvailabilityDoc;
  beta_shape: TrendShape | TrendShape[];
  beta_mean: number | number[];
  beta_initial?: number | number[] | null;
  beta_quadratic_max?: number | number[] | null;
  sigma?: number;
  pow?: number;
  sigLev?: number;
  method?: MethodName;
  test?: TestName;
  result?: ResultChoice;
  SS?: number | null;
  q?: number | null;
  baseline?: BaselineDoc | null;
}

export interface SizeResponseDoc {
  n: number;
  achieved_power: number | null;
  achieved_coverage: number | null;
  achieved_at_n_minus_1: number | null;
  ncp: number | null;
  precision_quadform: number | null;
  bound_at_n: number | null;
  df1: number;
  df2: number | null;
  stat: string;
  method: string;
  alpha: number;
  target: number;
  deltas: number[][];
  sentence: string;
  request: CalculationDoc;
}

export interface EvaluateResponseDoc {
  n: number;
  kind: "power" | "coverage";
  value: number;
  ncp: number | null;
  df1: number;
  df2: number | null;
  sentence: string;
  request: CalculationDoc;
}

export interface EffectCurveDoc {
  category: number;
  shape: string;
  adding_day: number;
  turning_day: number | null;
  coefficients: number[];
  days: number[];
  values: number[];
}

export interface EffectCurvesResponseDoc {
  days: number;
  curves: EffectCurveDoc[];
}

export interface ViolationDoc {
  code: string;
  message: string;
  day?: number | null;
  category?: number | null;
}

export interface ErrorResponseDoc {
  code: string;
  violations: ViolationDoc[];
}

export interface HealthResponseDoc {
  status: string;
  name: string;
  version: string;
}
