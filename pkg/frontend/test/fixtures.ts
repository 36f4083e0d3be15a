// Deterministic fake API yielding payloads in the exact wire format the
// engine serves. The rules endpoint applies support/lift thresholds the
// way the server does, so DOM-vs-payload assertions are meaningful.

import type {
  Api,
  ClusterView,
  CorrelationsPayload,
  DatasetHandle,
  FilamentsPayload,
  GraphNode,
  HeatmapPayload,
  Meta,
  PatientPayload,
  Phase,
  Rule,
  RulesPayload,
} from "../src/api";

export const SYMPTOMS: { id: string; category: string }[] = [
  ...[
    "fatigue",
    "sleep",
    "distress",
    "pain",
    "drowsiness",
    "sadness",
    "memory",
    "numbness",
    "dry_mouth",
    "appetite",
    "breath",
    "nausea",
    "vomit",
  ].map((id) => ({ id, category: "core" })),
  ...[
    "swallow",
    "speech",
    "mucus",
    "taste",
    "constipation",
    "teeth",
    "sores",
    "choking",
    "skin_pain",
  ].map((id) => ({ id, category: "hnc_specific" })),
  ...["work", "enjoyment", "activity", "mood", "walk", "relations"].map((id) => ({
    id,
    category: "interference",
  })),
];

export const TIMEPOINTS = [
  { index: 0, label: "wk0", phase: "baseline" as Phase, day: 0 },
  ...[1, 2, 3, 4, 5, 6, 7].map((i) => ({
    index: i,
    label: `wk${i}`,
    phase: "acute" as Phase,
    day: 7 * i,
  })),
  { index: 8, label: "post6w", phase: "late" as Phase, day: 91 },
  { index: 9, label: "post6m", phase: "late" as Phase, day: 229 },
  { index: 10, label: "post12m", phase: "late" as Phase, day: 414 },
  { index: 11, label: "post18m", phase: "late" as Phase, day: 596 },
];

export const THERAPIES = ["Radiation", "CC_Radiation", "IC_Radiation", "IC_Radiation_CC"];

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export interface FakeApiOptions {
  patients?: number;
  seed?: number;
}

export class FakeApi implements Api {
  readonly n: number;
  readonly patientIds: string[];
  readonly attrs: Map<string, { therapy: string; gender: string; t_category: string }>;
  private ruleUniverse: Rule[];
  calls: string[] = [];

  constructor(opts: FakeApiOptions = {}) {
    this.n = opts.patients ?? 30;
    const rand = mulberry32(opts.seed ?? 7);
    this.patientIds = Array.from({ length: this.n }, (_v, i) => `p${String(i + 1).padStart(3, "0")}`);
    this.attrs = new Map(
      this.patientIds.map((pid) => [
        pid,
        {
          therapy: THERAPIES[Math.floor(rand() * 4)],
          gender: rand() < 0.7 ? "M" : "F",
          t_category: `T${Math.floor(rand() * 5)}`,
        },
      ]),
    );
    // 30 candidate rules over the first 10 symptoms, varied support/lift
    this.ruleUniverse = [];
    for (let i = 0; i < 30; i++) {
      const a = SYMPTOMS[i % 10].id;
      const b = SYMPTOMS[(i + 1 + (i % 3)) % 10].id;
      const c = SYMPTOMS[(i + 5) % 10].id;
      const multi = i % 4 === 0;
      this.ruleUniverse.push({
        id: 0, // assigned per-query after filtering
        antecedent: multi ? [a, b].sort() : [a],
        consequent: multi ? [c] : [b],
        support: 0.2 + 0.75 * ((i * 7) % 30) / 30,
        lift: 1.0 + 2.0 * ((i * 11) % 30) / 30,
      });
    }
  }

  async meta(): Promise<Meta> {
    this.calls.push("meta");
    return { symptoms: SYMPTOMS, timepoints: TIMEPOINTS, therapies: THERAPIES };
  }

  async datasets(): Promise<DatasetHandle[]> {
    this.calls.push("datasets");
    return [
      {
        dataset_id: "fixture01",
        name: "fixture",
        created_at: "2025-01-01T00:00:00Z",
        patient_count: this.n,
        status: "ready",
      },
    ];
  }

  async ingest(): Promise<DatasetHandle> {
    throw new Error("not supported in fixtures");
  }

  async clusters(_dataset: string, timepoint: string, symptoms?: string[]): Promise<ClusterView> {
    this.calls.push(`clusters:${timepoint}:${(symptoms ?? []).join("+")}`);
    const rand = mulberry32(1000 + timepoint.length * 13);
    return {
      timepoint,
      symptoms: symptoms?.length ? symptoms : SYMPTOMS.map((s) => s.id),
      k: 2,
      points: this.patientIds.map((pid, i) => ({
        patient_id: pid,
        pc1: (i < this.n / 2 ? -4 : 4) + rand() * 3,
        pc2: rand() * 4 - 2,
        burden: i < this.n / 2 ? "low" : "high",
        ...this.attrs.get(pid)!,
      })),
    };
  }

  async rules(
    _dataset: string,
    phase: Phase,
    minSupport: number,
    minLift: number,
  ): Promise<RulesPayload> {
    this.calls.push(`rules:${phase}:${minSupport}:${minLift}`);
    const survivors = this.ruleUniverse
      .filter((r) => r.support >= minSupport && r.lift >= minLift)
      .sort((a, b) => b.support - a.support || b.lift - a.lift)
      .slice(0, 20)
      .map((r, i) => ({ ...r, id: i + 1 }));

    const symptomIds = [...new Set(survivors.flatMap((r) => [...r.antecedent, ...r.consequent]))].sort();
    const nodes: GraphNode[] = [];
    symptomIds.forEach((s, i) => {
      nodes.push({ id: `s:${s}`, kind: "symptom", x: (i % 5) * 2, y: Math.floor(i / 5) * 2 });
    });
    const supports = survivors.map((r) => r.support);
    const lifts = survivors.map((r) => r.lift);
    const sLo = Math.min(...supports, 1);
    const sHi = Math.max(...supports, 0);
    const lLo = Math.min(...lifts, 99);
    const lHi = Math.max(...lifts, 0);
    survivors.forEach((r, i) => {
      nodes.push({
        id: `r:${r.id}`,
        kind: "rule",
        x: (i % 5) * 2 + 1,
        y: Math.floor(i / 5) * 2 + 1,
        rule_id: r.id,
        support: r.support,
        lift: r.lift,
        radius: sHi > sLo ? 6 + 12 * ((r.support - sLo) / (sHi - sLo)) : 12,
        shade: lHi > lLo ? (r.lift - lLo) / (lHi - lLo) : 0.5,
      });
    });
    const edges = survivors.flatMap((r) => [
      ...r.antecedent.map((s) => ({ from: `s:${s}`, to: `r:${r.id}` })),
      ...r.consequent.map((s) => ({ from: `r:${r.id}`, to: `s:${s}` })),
    ]);
    return {
      phase,
      min_support: minSupport,
      min_lift: minLift,
      top_k: 20,
      presence_threshold: 1,
      transaction_count: 123,
      rules: survivors,
      graph: { nodes, edges },
    };
  }

  async filaments(
    _dataset: string,
    symptom: string,
    mode: "individual" | "therapy_mean",
  ): Promise<FilamentsPayload> {
    this.calls.push(`filaments:${symptom}:${mode}`);
    const rand = mulberry32(17 + symptom.length);
    const owners = mode === "therapy_mean" ? THERAPIES : this.patientIds;
    return {
      symptom,
      mode,
      phase_highlight: null,
      filaments: owners.map((owner) => {
        let x = 0;
        let y = mode === "therapy_mean" ? rand() * 4 : 0;
        const vertices = [{ x, y, tp: 0, reported: true }];
        const last = mode === "individual" && rand() < 0.3 ? 7 : 11;
        for (let t = 1; t <= last; t++) {
          const l = t <= 7 ? 1 : 2.5;
          const theta = (rand() - 0.5) * 1.1;
          x += l * Math.cos(theta);
          y += l * Math.sin(theta);
          vertices.push({ x, y, tp: t, reported: rand() > 0.1 });
        }
        return { owner, highlight: false, vertices };
      }),
    };
  }

  async heatmap(_dataset: string, patientId?: string): Promise<HeatmapPayload> {
    this.calls.push(`heatmap:${patientId ?? ""}`);
    const rand = mulberry32(99);
    return {
      patient_id: patientId ?? null,
      rows: SYMPTOMS.map((s) => ({
        symptom: s.id,
        category: s.category,
        cells: TIMEPOINTS.map((tp) => {
          const zero = rand();
          const one = rand();
          const six = rand();
          const ten = rand() * 0.3;
          const total = zero + one + six + ten;
          const cell = {
            tp: tp.index,
            bins: {
              zero: zero / total,
              one_to_five: one / total,
              six_to_nine: six / total,
              ten: ten / total,
            },
            reporting_fraction: Math.max(0.2, 1 - tp.index * 0.06),
            prevalence: 1 - zero / total,
          } as HeatmapPayload["rows"][number]["cells"][number];
          if (patientId) {
            cell.patient_rating = tp.index <= 9 ? Math.floor(rand() * 11) : null;
          }
          return cell;
        }),
      })),
    };
  }

  async correlations(
    _dataset: string,
    timepoint: string,
    symptom?: string,
  ): Promise<CorrelationsPayload> {
    this.calls.push(`correlations:${timepoint}:${symptom ?? ""}`);
    const rand = mulberry32(5 + (symptom?.length ?? 0));
    const anchor = symptom ?? "fatigue";
    return {
      timepoint,
      symptom: anchor,
      entries: SYMPTOMS.map((s) => ({
        a: anchor,
        b: s.id,
        rho: s.id === anchor ? 1.0 : rand() < 0.1 ? null : Math.round((rand() * 2 - 1) * 100) / 100,
        n: this.n,
      })),
    };
  }

  async patient(_dataset: string, patientId: string): Promise<PatientPayload> {
    this.calls.push(`patient:${patientId}`);
    const rand = mulberry32(31);
    return {
      patient_id: patientId,
      age: 61,
      gender: this.attrs.get(patientId)?.gender ?? "M",
      t_category: this.attrs.get(patientId)?.t_category ?? "T2",
      therapy: this.attrs.get(patientId)?.therapy ?? "Radiation",
      total_dose: 66,
      reported_timepoints: [0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
      series: SYMPTOMS.map((s) => ({
        symptom: s.id,
        values: TIMEPOINTS.map(() => Math.floor(rand() * 11)),
        reported: TIMEPOINTS.map((tp) => tp.index <= 9),
      })),
    };
  }
}
