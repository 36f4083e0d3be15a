// Single source of truth for the coordinated views. Every view renders
// from this state; a mutation bumps the revision and notifies only the
// subscribers whose declared keys changed. Async fetches record the
// revision of their dependency keys at request time and drop responses
// that arrive after those keys moved on.

import type { Phase } from "./api";

export interface AttributeFilters {
  therapy: string[]; // empty = no filter
  gender: string[];
  t_category: string[];
}

export interface RuleFilters {
  minSupport: number;
  minLift: number;
}

export interface ViewState {
  datasetId: string | null;
  timepoint: string;
  phase: Phase;
  selectedSymptoms: string[]; // clustering subset; empty = all 28
  filamentSymptoms: [string, string]; // two side-by-side plots
  filamentMode: "individual" | "therapy_mean";
  selectedPatient: string | null;
  attributeFilters: AttributeFilters;
  ruleFilters: RuleFilters;
}

export type StateKey = keyof ViewState;

export const INITIAL_STATE: ViewState = {
  datasetId: null,
  timepoint: "wk0",
  phase: "acute",
  selectedSymptoms: [],
  filamentSymptoms: ["mucus", "taste"],
  filamentMode: "therapy_mean",
  selectedPatient: null,
  attributeFilters: { therapy: [], gender: [], t_category: [] },
  ruleFilters: { minSupport: 0.3, minLift: 1.2 },
};

type Listener = (changed: Set<StateKey>, state: ViewState) => void;

export class Store {
  private state: ViewState;
  private listeners: { keys: StateKey[]; fn: Listener }[] = [];
  private revision = 0;
  private keyRevision = new Map<StateKey, number>();

  constructor(initial: ViewState = INITIAL_STATE) {
    this.state = { ...initial };
  }

  get(): ViewState {
    return this.state;
  }

  get currentRevision(): number {
    return this.revision;
  }

  update(partial: Partial<ViewState>): void {
    const changed = new Set<StateKey>();
    for (const key of Object.keys(partial) as StateKey[]) {
      const next = partial[key];
      if (JSON.stringify(next) !== JSON.stringify(this.state[key])) {
        changed.add(key);
      }
    }
    if (changed.size === 0) return;
    this.revision += 1;
    this.state = { ...this.state, ...partial };
    for (const key of changed) this.keyRevision.set(key, this.revision);
    for (const { keys, fn } of [...this.listeners]) {
      if (keys.some((k) => changed.has(k))) fn(changed, this.state);
    }
  }

  // Subscribe to changes of specific keys only: unrelated mutations never
  // re-render or re-fetch this view.
  subscribe(keys: StateKey[], fn: Listener): () => void {
    const entry = { keys, fn };
    this.listeners.push(entry);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== entry);
    };
  }

  // Max revision across the given keys; the stale-discard token.
  revisionOf(keys: StateKey[]): number {
    return Math.max(0, ...keys.map((k) => this.keyRevision.get(k) ?? 0));
  }

  // Run an async fetch tied to dependency keys. The callback sees the
  // response only if none of those keys changed while it was in flight.
  async fetchFor<T>(
    keys: StateKey[],
    request: (state: ViewState) => Promise<T>,
    apply: (payload: T, state: ViewState) => void,
  ): Promise<boolean> {
    const token = this.revisionOf(keys);
    const payload = await request(this.state);
    if (this.revisionOf(keys) !== token) return false; // superseded
    apply(payload, this.state);
    return true;
  }
}

export function passesAttributeFilters(
  filters: AttributeFilters,
  point: { therapy: string; gender: string; t_category: string },
): boolean {
  return (
    (filters.therapy.length === 0 || filters.therapy.includes(point.therapy)) &&
    (filters.gender.length === 0 || filters.gender.includes(point.gender)) &&
    (filters.t_category.length === 0 || filters.t_category.includes(point.t_category))
  );
}
