import { describe, expect, it } from "vitest";

import { demoPreset, fromDocument } from "../src/formModel.js";
import { errorsByPanel, validateForm } from "../src/validation.js";
import type { PlannerForm } from "../src/formModel.js";

function valid(): PlannerForm {
  return demoPreset();
}

describe("client-side validation", () => {
  it("accepts the demo preset", () => {
    expect(validateForm(valid())).toEqual([]);
  });

  it("rejects non-positive days on the decision-time panel", () => {
    const form = { ...valid(), days: 0 };
    const errors = validateForm(form);
    expect(errors.some((e) => e.panel === "decision-time"
      && e.message.includes(">= 1"))).toBe(true);
  });

  it("rejects adding days beyond the study period", () => {
    const form = { ...valid(), addingDays: [1, 300] };
    expect(validateForm(form).some((e) => e.panel === "category")).toBe(true);
  });

  it("rejects misordered adding days", () => {
    const form = { ...valid(), addingDays: [1, 1] };
    expect(validateForm(form).some((e) => e.panel === "category")).toBe(true);
  });

  it("rejects probability rows that do not sum to one", () => {
    const rows = Array.from({ length: 180 }, (_, d) =>
      d < 90 ? [0.3, 0.25, 0.25, 0.25, 0.0] : [0.2, 0.2, 0.2, 0.2, 0.2]);
    const form = { ...valid(), randomization: rows as number[][] };
    const errors = validateForm(form);
    expect(errors.some((e) => e.panel === "randomization"
      && e.message.includes("sums to"))).toBe(true);
  });

  it("rejects probability before a category's adding day", () => {
    const rows = Array.from({ length: 180 }, (_, d) =>
      d < 90 ? [0.25, 0.25, 0.25, 0.25, 0.0] : [0.2, 0.2, 0.2, 0.2, 0.2]);
    rows[40] = [0.05, 0.25, 0.25, 0.25, 0.2]; // category 4 live before day 91
    const form = { ...valid(), randomization: rows as number[][] };
    expect(validateForm(form).some((e) => e.panel === "randomization"
      && e.message.includes("before its adding day"))).toBe(true);
  });

  it("rejects availability outside (0, 1]", () => {
    const form = { ...valid(), availabilityMean: 1.2 };
    expect(validateForm(form).some((e) => e.panel === "availability")).toBe(true);
  });

  it("requires an initial effect for non-constant trends", () => {
    const form = { ...valid(), betaInitial: undefined };
    expect(validateForm(form).some((e) => e.panel === "proximal-effect"
      && e.message.includes("initial"))).toBe(true);
  });

  it("requires a turning day inside the active period", () => {
    const form = { ...valid(), betaQuadraticMax: [28, 28, 28, 40] };
    expect(validateForm(form).some((e) => e.panel === "proximal-effect"
      && e.message.includes("turning day"))).toBe(true);
  });

  it("requires SS when asking for power at a given N", () => {
    const form: PlannerForm = { ...valid(), result: "choice_power", ss: undefined };
    expect(validateForm(form).some((e) => e.panel === "result")).toBe(true);
  });

  it("groups errors by panel for inline rendering", () => {
    const form = { ...valid(), days: 0, availabilityMean: 0 };
    const grouped = errorsByPanel(validateForm(form));
    expect(grouped.get("decision-time")?.length).toBe(1);
    expect(grouped.get("availability")?.length).toBe(1);
  });

  it("flags mismatched per-category lists", () => {
    const form = { ...valid(), betaMean: [0.1, 0.1] };
    expect(validateForm(form).some((e) => e.panel === "proximal-effect"
      && e.message.includes("beta_mean"))).toBe(true);
  });
});
