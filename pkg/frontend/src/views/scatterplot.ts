// Therapy cluster view: PCA scatterplot of patients at the selected
// timepoint. Color = therapy, shape = gender, size = tumor category;
// high-burden marks carry a dark stroke. The legend doubles as the
// attribute filter panel; clicking a mark selects that patient everywhere.

import * as d3 from "d3";

import type { ClusterView } from "../api";
import { genderSymbol, tCategorySize, therapyColor, THERAPY_LABELS } from "../scales";
import { passesAttributeFilters, Store } from "../state";

const MARGIN = { top: 12, right: 16, bottom: 28, left: 40 };

export class ScatterplotView {
  private svg: d3.Selection<SVGSVGElement, unknown, null, undefined>;
  private plot: d3.Selection<SVGGElement, unknown, null, undefined>;
  private legend: HTMLElement;
  private empty: HTMLElement;
  private data: ClusterView | null = null;

  constructor(
    container: HTMLElement,
    private store: Store,
    private width = 520,
    private height = 360,
  ) {
    const figure = d3.select(container).append("div").attr("class", "scatter-figure");
    this.svg = figure
      .append("svg")
      .attr("class", "scatterplot")
      .attr("viewBox", `0 0 ${width} ${height}`)
      .attr("width", width)
      .attr("height", height);
    this.plot = this.svg.append("g").attr("class", "plot");
    this.empty = figure.append("div").attr("class", "empty-state hidden").node()!;
    this.empty.textContent = "No eligible patients at this timepoint.";
    this.legend = d3.select(container).append("div").attr("class", "legend").node()!;
  }

  render(data: ClusterView | null): void {
    this.data = data;
    if (!data || data.points.length === 0) {
      this.plot.selectAll("*").remove();
      this.empty.classList.remove("hidden");
      return;
    }
    this.empty.classList.add("hidden");

    const state = this.store.get();
    const x = d3
      .scaleLinear()
      .domain(pad(d3.extent(data.points, (p) => p.pc1) as [number, number]))
      .range([MARGIN.left, this.width - MARGIN.right]);
    const y = d3
      .scaleLinear()
      .domain(pad(d3.extent(data.points, (p) => p.pc2) as [number, number]))
      .range([this.height - MARGIN.bottom, MARGIN.top]);

    const marks = this.plot
      .selectAll<SVGPathElement, ClusterView["points"][number]>("path.mark")
      .data(data.points, (p) => p.patient_id);
    marks.exit().remove();
    const entered = marks.enter().append("path").attr("class", "mark");
    entered.append("title");

    const all = entered.merge(marks);
    all
      .attr("transform", (p) => `translate(${x(p.pc1)},${y(p.pc2)})`)
      .attr("d", (p) =>
        d3.symbol().type(genderSymbol(p.gender)).size(tCategorySize(p.t_category))(),
      )
      .attr("fill", (p) => therapyColor(p.therapy))
      .attr("data-patient", (p) => p.patient_id)
      .attr("data-burden", (p) => p.burden)
      .classed("high-burden", (p) => p.burden === "high")
      .classed("faded", (p) => !passesAttributeFilters(state.attributeFilters, p))
      .classed("selected", (p) => p.patient_id === state.selectedPatient)
      .on("click", (_event, p) => this.store.update({ selectedPatient: p.patient_id }));
    all.select("title").text((p) => `${p.patient_id} (${p.therapy}, ${p.gender}, ${p.t_category})`);

    this.renderLegend();
  }

  // re-apply fade/selection classes in place; no joins, no refetch
  refreshHighlights(): void {
    if (!this.data) return;
    const state = this.store.get();
    this.plot
      .selectAll<SVGPathElement, ClusterView["points"][number]>("path.mark")
      .classed("faded", (p) => !passesAttributeFilters(state.attributeFilters, p))
      .classed("selected", (p) => p.patient_id === state.selectedPatient);
    this.renderLegend();
  }

  private renderLegend(): void {
    const state = this.store.get();
    const legend = d3.select(this.legend);
    legend.selectAll("*").remove();

    const therapyBlock = legend.append("div").attr("class", "legend-block");
    therapyBlock.append("span").attr("class", "legend-title").text("Therapy");
    for (const therapy of Object.keys(THERAPY_LABELS)) {
      const active =
        state.attributeFilters.therapy.length === 0 ||
        state.attributeFilters.therapy.includes(therapy);
      therapyBlock
        .append("button")
        .attr("class", `legend-item ${active ? "" : "inactive"}`)
        .attr("data-filter-therapy", therapy)
        .style("--swatch", therapyColor(therapy))
        .text(THERAPY_LABELS[therapy])
        .on("click", () => this.toggle("therapy", therapy));
    }

    const genderBlock = legend.append("div").attr("class", "legend-block");
    genderBlock.append("span").attr("class", "legend-title").text("Gender");
    for (const gender of ["M", "F"]) {
      const active =
        state.attributeFilters.gender.length === 0 ||
        state.attributeFilters.gender.includes(gender);
      genderBlock
        .append("button")
        .attr("class", `legend-item ${active ? "" : "inactive"}`)
        .attr("data-filter-gender", gender)
        .text(gender === "M" ? "M ●" : "F ▲")
        .on("click", () => this.toggle("gender", gender));
    }

    const sizeBlock = legend.append("div").attr("class", "legend-block");
    sizeBlock.append("span").attr("class", "legend-title").text("Tumor");
    for (const cat of ["T0", "T1", "T2", "T3", "T4"]) {
      const active =
        state.attributeFilters.t_category.length === 0 ||
        state.attributeFilters.t_category.includes(cat);
      sizeBlock
        .append("button")
        .attr("class", `legend-item ${active ? "" : "inactive"}`)
        .attr("data-filter-tcat", cat)
        .text(cat)
        .on("click", () => this.toggle("t_category", cat));
    }
  }

  private toggle(field: "therapy" | "gender" | "t_category", value: string): void {
    const filters = { ...this.store.get().attributeFilters };
    const current = filters[field];
    filters[field] = current.includes(value)
      ? current.filter((v) => v !== value)
      : [...current, value];
    this.store.update({ attributeFilters: filters });
  }
}

function pad([lo, hi]: [number, number]): [number, number] {
  if (!(isFinite(lo) && isFinite(hi))) return [-1, 1];
  const span = hi - lo || 1;
  return [lo - 0.05 * span, hi + 0.05 * span];
}
