/**
 * Typed client for the sizing service.
 *
 * Requests carry a sequence number; responses arriving after a newer
 * request has been issued are discarded, so a slow older submission can
 * never overwrite a newer result on screen.
 */

import type {
  CalculationDoc,
  EffectCurvesResponseDoc,
  ErrorResponseDoc,
  EvaluateResponseDoc,
  HealthResponseDoc,
  SizeResponseDoc,
} from "./documents.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly violations: ErrorResponseDoc["violations"];

  constructor(status: number, body: ErrorResponseDoc) {
    super(body.violations.map((v) => v.message).join("; ") || body.code);
    this.status = status;
    this.code = body.code;
    this.violations = body.violations;
  }
}

export class StaleResponseError extends Error {
  constructor() {
    super("superseded by a newer request");
  }
}

export class ApiClient {
  private sequence = 0;

  constructor(readonly baseUrl: string) {}

  private async post<T>(endpoint: string, payload: unknown): Promise<T> {
    const ticket = ++this.sequence;
    const reply = await fetch(`${this.baseUrl}${endpoint}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
    const body = await reply.json();
    if (ticket !== this.sequence) throw new StaleResponseError();
    if (!reply.ok) throw new ApiError(reply.status, body as ErrorResponseDoc);
    return body as T;
  }

  size(doc: CalculationDoc): Promise<SizeResponseDoc> {
    return this.post("/api/v1/size", doc);
  }

  evaluate(doc: CalculationDoc): Promise<EvaluateResponseDoc> {
    return this.post("/api/v1/evaluate", doc);
  }

  effectCurves(doc: CalculationDoc): Promise<EffectCurvesResponseDoc> {
    return this.post("/api/v1/effect-curves", doc);
  }

  async health(): Promise<HealthResponseDoc> {
    const reply = await fetch(`${this.baseUrl}/api/v1/health`);
    if (!reply.ok) throw new Error(`health check failed: ${reply.status}`);
    return (await reply.json()) as HealthResponseDoc;
  }
}
