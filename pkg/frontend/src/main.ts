// Application shell: builds the coordinated-view layout, owns the single
// ViewState store, and maps state changes to the minimal set of re-fetches
// and re-renders. Views never fetch for themselves and never derive
// analytics; they render engine payloads and write interactions back into
// the store.

import * as d3 from "d3";

import type {
  Api,
  ClusterView,
  FilamentsPayload,
  HeatmapPayload,
  Meta,
  RulesPayload,
} from "./api";
import { HttpApi } from "./api";
import { Store, StateKey } from "./state";
import { CorrelationView } from "./views/correlation";
import { FilamentView } from "./views/filaments";
import { HeatmapView } from "./views/heatmap";
import { PatientPanel } from "./views/patient";
import { RuleGraphView } from "./views/rulegraph";
import { ScatterplotView } from "./views/scatterplot";

export class App {
  store: Store;
  scatterplot!: ScatterplotView;
  ruleGraph!: RuleGraphView;
  filamentViews!: [FilamentView, FilamentView];
  heatmapView!: HeatmapView;
  correlationView!: CorrelationView;
  patientPanel!: PatientPanel;

  meta: Meta | null = null;
  lastClusters: ClusterView | null = null;
  lastRules: RulesPayload | null = null;
  lastFilaments: [FilamentsPayload | null, FilamentsPayload | null] = [null, null];
  lastHeatmap: HeatmapPayload | null = null;

  private pending: Promise<unknown>[] = [];
  private knownPatients = new Set<string>();

  constructor(
    private rootEl: HTMLElement,
    private api: Api,
  ) {
    this.store = new Store();
  }

  async start(): Promise<void> {
    this.meta = await this.api.meta();
    this.buildLayout();
    this.wire();
    const datasets = await this.api.datasets();
    this.populateDatasetPicker(datasets.map((d) => d.dataset_id));
    if (datasets.length > 0) {
      this.store.update({ datasetId: datasets[0].dataset_id });
    }
  }

  // Await until every in-flight fetch settled (tests use this).
  async flush(): Promise<void> {
    while (this.pending.length > 0) {
      const batch = this.pending;
      this.pending = [];
      await Promise.all(batch);
    }
  }

  private track(p: Promise<unknown>): void {
    this.pending.push(p.catch((err) => console.error(err)));
  }

  private buildLayout(): void {
    const root = d3.select(this.rootEl);
    root.selectAll("*").remove();

    const header = root.append("header").attr("class", "toolbar");
    header.append("span").attr("class", "app-title").text("Symptom cohort explorer");
    header.append("select").attr("class", "dataset-picker");
    const upload = header.append("span").attr("class", "uploader");
    upload.append("input").attr("type", "file").attr("class", "file-patients").attr("title", "patients.csv");
    upload.append("input").attr("type", "file").attr("class", "file-ratings").attr("title", "ratings.csv");
    upload
      .append("button")
      .text("Ingest")
      .on("click", () => this.ingestFromInputs());

    const tpWrap = header.append("label").attr("class", "tp-slider");
    tpWrap.append("span").text("timepoint");
    tpWrap
      .append("input")
      .attr("type", "range")
      .attr("min", "0")
      .attr("max", "11")
      .attr("step", "1")
      .attr("class", "timepoint-slider")
      .property("value", 0)
      .on("input", (event: Event) => {
        const index = Number((event.target as HTMLInputElement).value);
        this.store.update({ timepoint: this.meta!.timepoints[index].label });
      });
    tpWrap.append("output").attr("class", "tp-label").text("wk0");

    const phaseWrap = header.append("span").attr("class", "phase-toggle");
    for (const phase of ["baseline", "acute", "late"] as const) {
      phaseWrap
        .append("button")
        .attr("class", "phase-btn")
        .attr("data-phase", phase)
        .classed("active", phase === this.store.get().phase)
        .text(phase)
        .on("click", () => this.store.update({ phase }));
    }

    const modeWrap = header.append("span").attr("class", "mode-toggle");
    for (const mode of ["therapy_mean", "individual"] as const) {
      modeWrap
        .append("button")
        .attr("class", "mode-btn")
        .attr("data-mode", mode)
        .classed("active", mode === this.store.get().filamentMode)
        .text(mode === "therapy_mean" ? "therapy means" : "individual")
        .on("click", () => this.store.update({ filamentMode: mode }));
    }

    const grid = root.append("main").attr("class", "grid");
    const scatterPanel = panel(grid, "panel-scatter", "Therapy clusters");
    const rulePanel = panel(grid, "panel-rules", "Association rules");
    const filamentPanel = panel(grid, "panel-filaments", "Symptom trajectories");
    const contextPanel = panel(grid, "panel-context", "Patient & correlations");
    const heatmapPanel = panel(grid, "panel-heatmap", "Cohort heatmap");

    const symptoms = this.meta!.symptoms.map((s) => s.id);
    this.scatterplot = new ScatterplotView(scatterPanel, this.store);
    this.buildSymptomSubsetPicker(scatterPanel, symptoms);
    this.ruleGraph = new RuleGraphView(rulePanel, this.store);
    const filamentSplit = d3.select(filamentPanel).append("div").attr("class", "filament-split");
    this.filamentViews = [
      new FilamentView(filamentSplit.append("div").node()! as HTMLElement, this.store, 0, symptoms),
      new FilamentView(filamentSplit.append("div").node()! as HTMLElement, this.store, 1, symptoms),
    ];
    this.patientPanel = new PatientPanel(contextPanel, this.store);
    this.correlationView = new CorrelationView(contextPanel, this.store);
    this.heatmapView = new HeatmapView(
      heatmapPanel,
      this.store,
      this.meta!.timepoints.map((t) => t.label),
    );
  }

  private buildSymptomSubsetPicker(container: HTMLElement, symptoms: string[]): void {
    const details = d3.select(container).append("details").attr("class", "subset-picker");
    details.append("summary").text("Cluster on a symptom subset");
    const box = details.append("div").attr("class", "subset-list");
    for (const sym of symptoms) {
      const label = box.append("label");
      label
        .append("input")
        .attr("type", "checkbox")
        .attr("data-subset-symptom", sym)
        .on("change", () => {
          const chosen: string[] = [];
          box.selectAll<HTMLInputElement, unknown>("input:checked").each(function () {
            chosen.push(this.getAttribute("data-subset-symptom")!);
          });
          this.store.update({ selectedSymptoms: chosen });
        });
      label.append("span").text(sym);
    }
  }

  private populateDatasetPicker(ids: string[]): void {
    const picker = d3.select(this.rootEl).select<HTMLSelectElement>("select.dataset-picker");
    picker.selectAll("option").remove();
    picker
      .selectAll("option")
      .data(ids)
      .enter()
      .append("option")
      .attr("value", (d) => d)
      .text((d) => d);
    picker.on("change", () => {
      this.store.update({ datasetId: picker.property("value") || null });
    });
  }

  private async ingestFromInputs(): Promise<void> {
    const patients = (this.rootEl.querySelector(".file-patients") as HTMLInputElement).files?.[0];
    const ratings = (this.rootEl.querySelector(".file-ratings") as HTMLInputElement).files?.[0];
    if (!patients || !ratings) return;
    const handle = await this.api.ingest(patients, ratings);
    const datasets = await this.api.datasets();
    this.populateDatasetPicker(datasets.map((d) => d.dataset_id));
    this.store.update({ datasetId: handle.dataset_id });
  }

  // -- state wiring -----------------------------------------------------------

  private wire(): void {
    const sub = (keys: StateKey[], fn: () => void) => this.store.subscribe(keys, fn);

    sub(["datasetId", "timepoint", "selectedSymptoms"], () => this.track(this.fetchClusters()));
    sub(["datasetId", "phase", "ruleFilters"], () => this.track(this.fetchRules()));
    sub(["datasetId", "filamentSymptoms", "filamentMode"], () => this.track(this.fetchFilaments()));
    sub(["datasetId", "selectedPatient"], () => {
      this.track(this.fetchHeatmap());
      this.track(this.fetchPatient());
    });
    sub(["datasetId", "timepoint", "filamentSymptoms"], () => this.track(this.fetchCorrelations()));

    // pure re-renders from cached payloads (no fetch)
    sub(["selectedPatient", "attributeFilters"], () => this.scatterplot.refreshHighlights());
    sub(["phase", "selectedPatient", "attributeFilters"], () => {
      this.filamentViews[0].refresh();
      this.filamentViews[1].refresh();
    });
    sub(["timepoint"], () => {
      this.heatmapView.render(this.lastHeatmap);
      const idx = this.meta!.timepoints.findIndex((t) => t.label === this.store.get().timepoint);
      d3.select(this.rootEl).select("input.timepoint-slider").property("value", idx);
      d3.select(this.rootEl).select("output.tp-label").text(this.store.get().timepoint);
    });
    sub(["phase"], () => {
      d3.select(this.rootEl)
        .selectAll("button.phase-btn")
        .classed("active", function () {
          return false;
        });
      d3.select(this.rootEl)
        .select(`button.phase-btn[data-phase=${this.store.get().phase}]`)
        .classed("active", true);
    });
    sub(["filamentMode"], () => {
      const mode = this.store.get().filamentMode;
      d3.select(this.rootEl)
        .selectAll<HTMLButtonElement, unknown>("button.mode-btn")
        .classed("active", function () {
          return this.getAttribute("data-mode") === mode;
        });
    });
  }

  // -- fetchers ---------------------------------------------------------------

  private async fetchClusters(): Promise<void> {
    const { datasetId } = this.store.get();
    if (!datasetId) return;
    await this.store.fetchFor(
      ["datasetId", "timepoint", "selectedSymptoms"],
      (s) =>
        this.api
          .clusters(s.datasetId!, s.timepoint, s.selectedSymptoms)
          .catch(() => null as ClusterView | null),
      (payload) => {
        this.lastClusters = payload;
        this.scatterplot.render(payload);
        if (payload) {
          for (const p of payload.points) {
            this.knownPatients.add(p.patient_id);
            for (const view of this.filamentViews) {
              view.ownerAttrs.set(p.patient_id, {
                therapy: p.therapy,
                gender: p.gender,
                t_category: p.t_category,
              });
            }
          }
          this.patientPanel.setPatientIds([...this.knownPatients].sort());
        }
      },
    );
  }

  private async fetchRules(): Promise<void> {
    const { datasetId } = this.store.get();
    if (!datasetId) return;
    await this.store.fetchFor(
      ["datasetId", "phase", "ruleFilters"],
      (s) =>
        this.api.rules(s.datasetId!, s.phase, s.ruleFilters.minSupport, s.ruleFilters.minLift),
      (payload) => {
        this.lastRules = payload;
        this.ruleGraph.render(payload);
      },
    );
  }

  private async fetchFilaments(): Promise<void> {
    const { datasetId } = this.store.get();
    if (!datasetId) return;
    await this.store.fetchFor(
      ["datasetId", "filamentSymptoms", "filamentMode"],
      (s) =>
        Promise.all([
          this.api.filaments(s.datasetId!, s.filamentSymptoms[0], s.filamentMode),
          this.api.filaments(s.datasetId!, s.filamentSymptoms[1], s.filamentMode),
        ]),
      ([first, second]) => {
        this.lastFilaments = [first, second];
        this.filamentViews[0].render(first);
        this.filamentViews[1].render(second);
      },
    );
  }

  private async fetchHeatmap(): Promise<void> {
    const { datasetId } = this.store.get();
    if (!datasetId) return;
    await this.store.fetchFor(
      ["datasetId", "selectedPatient"],
      (s) => this.api.heatmap(s.datasetId!, s.selectedPatient ?? undefined),
      (payload) => {
        this.lastHeatmap = payload;
        this.heatmapView.render(payload);
      },
    );
  }

  private async fetchPatient(): Promise<void> {
    const { datasetId, selectedPatient } = this.store.get();
    if (!datasetId) return;
    if (!selectedPatient) {
      this.patientPanel.render(null);
      return;
    }
    await this.store.fetchFor(
      ["datasetId", "selectedPatient"],
      (s) => this.api.patient(s.datasetId!, s.selectedPatient!),
      (payload) => this.patientPanel.render(payload),
    );
  }

  private async fetchCorrelations(): Promise<void> {
    const { datasetId } = this.store.get();
    if (!datasetId) return;
    await this.store.fetchFor(
      ["datasetId", "timepoint", "filamentSymptoms"],
      (s) =>
        this.api
          .correlations(s.datasetId!, s.timepoint, s.filamentSymptoms[0])
          .catch(() => null),
      (payload) => this.correlationView.render(payload),
    );
  }
}

function panel(
  grid: d3.Selection<HTMLElement, unknown, null, undefined>,
  cls: string,
  title: string,
): HTMLElement {
  const p = grid.append("section").attr("class", `panel ${cls}`);
  p.append("h2").text(title);
  return p.node()!;
}

declare global {
  interface Window {
    __symcohortApp?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const app = new App(document.getElementById("app")!, new HttpApi());
  window.__symcohortApp = app;
  app.start().catch((err) => {
    document.getElementById("app")!.textContent = `failed to start: ${err}`;
  });
}
