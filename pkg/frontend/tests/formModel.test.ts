import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import type { CalculationDoc } from "../src/documents.js";
import { demoPreset, fromDocument, studentPreset, toDocument, totalCategories }
  from "../src/formModel.js";

const FIXTURES = join(__dirname, "..", "..", "fixtures");

function calculationFixtures(): Array<[string, CalculationDoc]> {
  return readdirSync(FIXTURES)
    .filter((name) => name.endsWith(".json"))
    .map((name) => [name, JSON.parse(readFileSync(join(FIXTURES, name), "utf8"))]);
}

describe("form/document round trip", () => {
  it("is lossless for every fixture config", () => {
    const fixtures = calculationFixtures();
    expect(fixtures.length).toBeGreaterThan(5);
    for (const [name, doc] of fixtures) {
      const once = toDocument(fromDocument(doc));
      expect(once, name).toEqual(doc);
      const twice = toDocument(fromDocument(once));
      expect(twice, name).toEqual(once);
    }
  });

  it("keeps absent optional fields absent", () => {
    const doc: CalculationDoc = {
      days: 30,
      category_counts: [2],
      adding_days: [1],
      beta_shape: "constant",
      beta_mean: 0.2,
    };
    const round = toDocument(fromDocument(doc));
    expect(round).toEqual(doc);
    expect("availability" in round).toBe(false);
    expect("SS" in round).toBe(false);
  });

  it("counts categories across batches", () => {
    const form = fromDocument({
      days: 44,
      category_counts: [3, 2],
      adding_days: [1, 23],
      beta_shape: "constant",
      beta_mean: 0.1,
    });
    expect(totalCategories(form)).toBe(5);
  });

  it("presets produce valid documents", () => {
    const demo = toDocument(demoPreset());
    expect(demo.days).toBe(180);
    expect(demo.beta_quadratic_max).toEqual([28, 28, 28, 118]);
    const student = toDocument(studentPreset());
    expect(student.days).toBe(44);
    expect(student.beta_mean).toEqual([0.073, 0.121, 0.108]);
  });
});
