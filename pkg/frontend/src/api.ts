// Typed client for the analytics API. The engine computes everything;
// the client only fetches and renders, so these types mirror the wire
// formats exactly.

export type Phase = "baseline" | "acute" | "late";

export interface Meta {
  symptoms: { id: string; category: string }[];
  timepoints: { index: number; label: string; phase: Phase; day: number }[];
  therapies: string[];
}

export interface DatasetHandle {
  dataset_id: string;
  name: string;
  created_at: string;
  patient_count: number;
  status: string;
}

export interface ClusterPoint {
  patient_id: string;
  pc1: number;
  pc2: number;
  burden: "high" | "low" | string;
  therapy: string;
  gender: string;
  t_category: string;
}

export interface ClusterView {
  timepoint: string;
  symptoms: string[];
  k: number;
  points: ClusterPoint[];
}

export interface Rule {
  id: number;
  antecedent: string[];
  consequent: string[];
  support: number;
  lift: number;
}

export interface GraphNode {
  id: string;
  kind: "symptom" | "rule";
  x: number;
  y: number;
  rule_id?: number;
  support?: number;
  lift?: number;
  radius?: number;
  shade?: number;
}

export interface RulesPayload {
  phase: Phase;
  min_support: number;
  min_lift: number;
  top_k: number;
  presence_threshold: number;
  transaction_count: number;
  rules: Rule[];
  graph: { nodes: GraphNode[]; edges: { from: string; to: string }[] };
}

export interface FilamentVertex {
  x: number;
  y: number;
  tp: number;
  reported: boolean;
}

export interface FilamentsPayload {
  symptom: string;
  mode: "individual" | "therapy_mean";
  phase_highlight: Phase | null;
  filaments: { owner: string; highlight: boolean; vertices: FilamentVertex[] }[];
}

export interface HeatmapCell {
  tp: number;
  bins: { zero: number; one_to_five: number; six_to_nine: number; ten: number };
  reporting_fraction: number;
  prevalence: number | null;
  patient_rating?: number | null;
}

export interface HeatmapPayload {
  patient_id: string | null;
  rows: { symptom: string; category: string; cells: HeatmapCell[] }[];
}

export interface CorrelationsPayload {
  timepoint: string;
  symptom: string | null;
  entries: { a: string; b: string; rho: number | null; n: number }[];
}

export interface PatientPayload {
  patient_id: string;
  age: number;
  gender: string;
  t_category: string;
  therapy: string;
  total_dose: number | null;
  reported_timepoints: number[];
  series: { symptom: string; values: number[]; reported: boolean[] }[];
}

// Every view goes through this surface, so tests can substitute fixtures.
export interface Api {
  meta(): Promise<Meta>;
  datasets(): Promise<DatasetHandle[]>;
  ingest(patients: File, ratings: File, name?: string): Promise<DatasetHandle>;
  clusters(dataset: string, timepoint: string, symptoms?: string[]): Promise<ClusterView>;
  rules(dataset: string, phase: Phase, minSupport: number, minLift: number): Promise<RulesPayload>;
  filaments(
    dataset: string,
    symptom: string,
    mode: "individual" | "therapy_mean",
    opts?: { patients?: string[]; phaseHighlight?: Phase; highlight?: string },
  ): Promise<FilamentsPayload>;
  heatmap(dataset: string, patientId?: string): Promise<HeatmapPayload>;
  correlations(dataset: string, timepoint: string, symptom?: string): Promise<CorrelationsPayload>;
  patient(dataset: string, patientId: string): Promise<PatientPayload>;
}

async function getJson<T>(url: string): Promise<T> {
  const resp = await fetch(url);
  if (!resp.ok) {
    throw new Error(`${resp.status} ${await resp.text()}`);
  }
  return (await resp.json()) as T;
}

export class HttpApi implements Api {
  constructor(private base: string = "/api/v1") {}

  private url(path: string, params: Record<string, string | undefined> = {}): string {
    const q = Object.entries(params)
      .filter(([, v]) => v !== undefined && v !== "")
      .map(([k, v]) => `${encodeURIComponent(k)}=${encodeURIComponent(v!)}`)
      .join("&");
    return `${this.base}${path}${q ? "?" + q : ""}`;
  }

  meta() {
    return getJson<Meta>(this.url("/meta"));
  }

  async datasets() {
    const body = await getJson<{ datasets: DatasetHandle[] }>(this.url("/datasets"));
    return body.datasets;
  }

  async ingest(patients: File, ratings: File, name?: string) {
    const form = new FormData();
    form.append("patients", patients);
    form.append("ratings", ratings);
    if (name) form.append("name", name);
    const resp = await fetch(this.url("/datasets"), { method: "POST", body: form });
    if (!resp.ok) throw new Error(`${resp.status} ${await resp.text()}`);
    return (await resp.json()) as DatasetHandle;
  }

  clusters(dataset: string, timepoint: string, symptoms?: string[]) {
    return getJson<ClusterView>(
      this.url(`/datasets/${dataset}/clusters`, {
        timepoint,
        symptoms: symptoms?.length ? symptoms.join(",") : undefined,
      }),
    );
  }

  rules(dataset: string, phase: Phase, minSupport: number, minLift: number) {
    return getJson<RulesPayload>(
      this.url(`/datasets/${dataset}/rules`, {
        phase,
        min_support: String(minSupport),
        min_lift: String(minLift),
      }),
    );
  }

  filaments(
    dataset: string,
    symptom: string,
    mode: "individual" | "therapy_mean",
    opts: { patients?: string[]; phaseHighlight?: Phase; highlight?: string } = {},
  ) {
    return getJson<FilamentsPayload>(
      this.url(`/datasets/${dataset}/filaments`, {
        symptom,
        mode,
        patients: opts.patients?.length ? opts.patients.join(",") : undefined,
        phase_highlight: opts.phaseHighlight,
        highlight: opts.highlight,
      }),
    );
  }

  heatmap(dataset: string, patientId?: string) {
    return getJson<HeatmapPayload>(
      this.url(`/datasets/${dataset}/heatmap`, { patient_id: patientId }),
    );
  }

  correlations(dataset: string, timepoint: string, symptom?: string) {
    return getJson<CorrelationsPayload>(
      this.url(`/datasets/${dataset}/correlations`, { timepoint, symptom }),
    );
  }

  patient(dataset: string, patientId: string) {
    return getJson<PatientPayload>(this.url(`/datasets/${dataset}/patients/${patientId}`));
  }
}
