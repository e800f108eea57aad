/**
 * End-to-end against the live sizing service: form model in, rendered
 * sentences and history out, client validation mirroring server rejections.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/apiClient.js";
import { demoPreset, studentPreset, toDocument } from "../src/formModel.js";
import type { PlannerForm } from "../src/formModel.js";
import { SessionHistory } from "../src/history.js";
import { validateForm } from "../src/validation.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

let service: ChildProcess;
const client = new ApiClient(BASE);

async function waitForHealth(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const body = await client.health();
      if (body.status === "ok") return;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 300));
    }
  }
  throw new Error("service did not come up in time");
}

beforeAll(async () => {
  service = spawn("python3", ["-m", "fleximrt.cli", "serve", "--port", String(PORT)],
                  { cwd: __dirname, stdio: "ignore" });
  await waitForHealth();
}, 45_000);

afterAll(() => {
  service?.kill();
});

describe("planner against the live service", () => {
  it("returns the published demo sentence for the form scenario", async () => {
    const form = demoPreset();
    expect(validateForm(form)).toEqual([]);
    const reply = await client.size(toDocument(form));
    expect(reply.n).toBe(73);
    expect(reply.sentence).toBe(
      "The required sample size is 73 to attain 80% power "
      + "when the significance level is 0.05.");
    expect(reply.deltas.length).toBe(4);
  });

  it("evaluates power at a chosen sample size", async () => {
    const form: PlannerForm = { ...demoPreset(), result: "choice_power", ss: 73 };
    const reply = await client.evaluate(toDocument(form));
    expect(reply.sentence).toBe(
      "The sample size 73 gives 80% power when the significance level is 0.05");
  });

  it("walks the student-study availability what-if through history", async () => {
    const history = new SessionHistory();
    const submit = async (form: PlannerForm) => {
      expect(validateForm(form)).toEqual([]);
      const reply = await client.size(toDocument(form));
      history.push({ sentence: reply.sentence, headline: `N = ${reply.n}`,
                     document: reply.request, detail: { n: reply.n } });
      return reply.n;
    };

    // three categories, full availability
    expect(await submit(studentPreset())).toBe(117);

    // planner adds the two scheduled categories and drops availability to 70%
    const expanded: PlannerForm = {
      ...studentPreset(),
      categoryCounts: [3, 2],
      addingDays: [1, 23],
      betaMean: [0.073, 0.121, 0.108, 0.062, 0.062],
      availabilityMean: 0.7,
      availabilityInitial: 0.7,
    };
    expect(await submit(expanded)).toBe(230);

    // same design at 50% availability
    expect(await submit({ ...expanded, availabilityMean: 0.5,
                          availabilityInitial: 0.5 })).toBe(319);

    expect(history.headlines()).toEqual(["N = 117", "N = 230", "N = 319"]);
  });

  it("previews resolved effect curves without client-side math", async () => {
    const curves = await client.effectCurves(toDocument(demoPreset()));
    expect(curves.days).toBe(180);
    expect(curves.curves.length).toBe(4);
    const added = curves.curves[3];
    expect(added.adding_day).toBe(91);
    expect(added.days[0]).toBe(91);
    // plateau: flat beyond the turning day
    const afterTurn = added.values.slice(added.days.indexOf(118));
    expect(Math.max(...afterTurn) - Math.min(...afterTurn)).toBeLessThan(1e-12);
  });

  it("client validation mirrors server 422s", async () => {
    const broken: Array<(f: PlannerForm) => PlannerForm> = [
      (f) => ({ ...f, days: 0 }),
      (f) => ({ ...f, addingDays: [1, 200] }),
      (f) => ({ ...f, availabilityMean: 1.4 }),
      (f) => ({ ...f, betaInitial: undefined }),
      (f) => ({ ...f, betaQuadraticMax: [28, 28, 28, 40] }),
    ];
    for (const mutate of broken) {
      const form = mutate(demoPreset());
      expect(validateForm(form).length, JSON.stringify(form)).toBeGreaterThan(0);
      try {
        await client.size(toDocument(form));
        expect.unreachable("server accepted a document the client rejects");
      } catch (err) {
        expect(err, JSON.stringify(form)).toBeInstanceOf(ApiError);
        expect((err as ApiError).status).toBe(422);
      }
    }
  });

  it("renders server violations for anything the client cannot see", async () => {
    // infeasible effect size: client-valid, server says 422 infeasible
    const form = { ...demoPreset(), betaMean: 1e-5, betaInitial: 1e-6 };
    expect(validateForm(form)).toEqual([]);
    try {
      await client.size(toDocument(form));
      expect.unreachable("expected an infeasibility error");
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).code).toBe("infeasible");
    }
  });
});
