/**
 * In-memory session history of submitted what-ifs.  Nothing persists across
 * a page reload, matching the throwaway nature of design exploration.
 */

import type { CalculationDoc } from "./documents.js";

export interface HistoryEntry {
  id: number;
  sentence: string;
  headline: string; // e.g. "N = 73" or "power 0.80"
  document: CalculationDoc;
  detail: Record<string, unknown>;
}

export class SessionHistory {
  private entries: HistoryEntry[] = [];
  private nextId = 1;

  push(entry: Omit<HistoryEntry, "id">): HistoryEntry {
    const stored = { ...entry, id: this.nextId++ };
    this.entries.push(stored);
    return stored;
  }

  list(): readonly HistoryEntry[] {
    return this.entries;
  }

  headlines(): string[] {
    return this.entries.map((e) => e.headline);
  }

  clear(): void {
    this.entries = [];
  }
}
