// Filament plot: one polyline per patient (or per-therapy mean), growing
// left to right from a shared root; the screen y-axis is flipped so the
// engine's +y (worsening) points upward on screen. Hovering a filament
// greys out the rest; the selected patient's filament is black; filaments
// whose owner fails the scatterplot's attribute filters are faded.
//
// render() rebuilds from a fresh payload; refresh() re-applies highlight,
// fading, and detail layers in place, so cohort-sized plots absorb
// selection/filter changes without DOM churn. Timestamp dots and phase
// emphasis appear on mean filaments and highlighted individuals only.

import * as d3 from "d3";

import type { FilamentsPayload, FilamentVertex, Phase } from "../api";
import { therapyColor } from "../scales";
import { passesAttributeFilters, Store } from "../state";

// phase of a timepoint index (grid contract: 0 baseline, 1..7 acute, 8..11 late)
export function phaseOfIndex(tp: number): Phase {
  if (tp === 0) return "baseline";
  return tp <= 7 ? "acute" : "late";
}

export interface OwnerAttrs {
  therapy: string;
  gender: string;
  t_category: string;
}

type Filament = FilamentsPayload["filaments"][number];

const MARGIN = { top: 14, right: 12, bottom: 20, left: 14 };

export class FilamentView {
  private svg: d3.Selection<SVGSVGElement, unknown, null, undefined>;
  private root: d3.Selection<SVGGElement, unknown, null, undefined>;
  private title: HTMLElement;
  private picker: HTMLSelectElement;
  private payload: FilamentsPayload | null = null;
  private x: d3.ScaleLinear<number, number> = d3.scaleLinear();
  private y: d3.ScaleLinear<number, number> = d3.scaleLinear();
  private line: d3.Line<FilamentVertex>;
  // patient id -> attributes, supplied by the app from the cluster payload
  ownerAttrs: Map<string, OwnerAttrs> = new Map();

  constructor(
    container: HTMLElement,
    private store: Store,
    private slot: 0 | 1,
    symptoms: string[],
    private width = 400,
    private height = 300,
  ) {
    const header = d3.select(container).append("div").attr("class", "filament-header");
    this.title = header.append("span").attr("class", "filament-title").node()!;
    this.picker = header
      .append("select")
      .attr("class", "filament-picker")
      .attr("data-filament-picker", String(slot))
      .node()! as HTMLSelectElement;
    d3.select(this.picker)
      .selectAll("option")
      .data(symptoms)
      .enter()
      .append("option")
      .attr("value", (s) => s)
      .text((s) => s);
    this.picker.addEventListener("change", () => {
      const pair = [...this.store.get().filamentSymptoms] as [string, string];
      pair[this.slot] = this.picker.value;
      this.store.update({ filamentSymptoms: pair });
    });

    this.svg = d3
      .select(container)
      .append("svg")
      .attr("class", "filaments")
      .attr("viewBox", `0 0 ${width} ${height}`)
      .attr("width", width)
      .attr("height", height);
    this.root = this.svg.append("g");
    this.line = d3
      .line<FilamentVertex>()
      .x((v) => this.x(v.x))
      .y((v) => this.y(v.y));
  }

  private isHighlighted(f: Filament): boolean {
    return f.highlight || f.owner === this.store.get().selectedPatient;
  }

  private color(f: Filament): string {
    if (this.isHighlighted(f)) return "#000000";
    return this.payload!.mode === "therapy_mean" ? therapyColor(f.owner) : "#5b7b9b";
  }

  private passesFilters(owner: string): boolean {
    const filters = this.store.get().attributeFilters;
    if (this.payload!.mode === "therapy_mean") {
      return filters.therapy.length === 0 || filters.therapy.includes(owner);
    }
    const attrs = this.ownerAttrs.get(owner);
    return attrs ? passesAttributeFilters(filters, attrs) : true;
  }

  render(payload: FilamentsPayload | null): void {
    this.payload = payload;
    this.root.selectAll("*").remove();
    if (!payload) return;
    this.title.textContent = `${payload.symptom} (${payload.mode === "therapy_mean" ? "therapy means" : "patients"})`;
    if (this.picker.value !== payload.symptom) this.picker.value = payload.symptom;
    if (payload.filaments.length === 0) return;

    const vertices = payload.filaments.flatMap((f) => f.vertices);
    this.x = d3
      .scaleLinear()
      .domain(pad(d3.extent(vertices, (v) => v.x) as [number, number]))
      .range([MARGIN.left, this.width - MARGIN.right]);
    this.y = d3
      .scaleLinear()
      .domain(pad(d3.extent(vertices, (v) => v.y) as [number, number]))
      .range([this.height - MARGIN.bottom, MARGIN.top]); // flip: +y up on screen

    const groups = this.root
      .selectAll<SVGGElement, Filament>("g.filament")
      .data(payload.filaments, (f) => f.owner)
      .enter()
      .append("g")
      .attr("class", "filament")
      .attr("data-owner", (f) => f.owner);

    groups
      .append("path")
      .attr("class", "filament-line")
      .attr("d", (f) => this.line(f.vertices))
      .attr("fill", "none");

    groups
      .on("mouseenter", (_e, f) => {
        this.root
          .selectAll<SVGGElement, Filament>("g.filament")
          .classed("greyed", (other) => other.owner !== f.owner);
      })
      .on("mouseleave", () => {
        this.root.selectAll("g.filament").classed("greyed", false);
      });

    this.refresh();
  }

  // Re-apply highlight/fade/detail state to the existing DOM.
  refresh(): void {
    if (!this.payload || this.payload.filaments.length === 0) return;
    const phase = this.store.get().phase;

    const groups = this.root.selectAll<SVGGElement, Filament>("g.filament");
    groups
      .classed("highlight", (f) => this.isHighlighted(f))
      .classed("faded", (f) => !this.passesFilters(f.owner));
    groups.select<SVGPathElement>("path.filament-line").attr("stroke", (f) => this.color(f));

    // detail layers only where they stay legible
    groups.selectAll("path.filament-phase, circle.stamp").remove();
    const detailed = this.payload.filaments.filter(
      (f) => this.payload!.mode === "therapy_mean" || this.isHighlighted(f),
    );
    const byOwner = new Map<string, SVGGElement>();
    groups.each(function (f) {
      byOwner.set(f.owner, this);
    });
    for (const f of detailed) {
      const node = byOwner.get(f.owner);
      if (!node) continue;
      const g = d3.select(node);
      for (const segment of phaseRuns(f.vertices, phase)) {
        g.append("path")
          .attr("class", "filament-phase")
          .attr("d", this.line(segment))
          .attr("stroke", this.color(f))
          .attr("fill", "none");
      }
      g.selectAll("circle.stamp")
        .data(f.vertices.filter((v) => v.reported))
        .enter()
        .append("circle")
        .attr("class", "stamp")
        .attr("cx", (v) => this.x(v.x))
        .attr("cy", (v) => this.y(v.y))
        .attr("r", 2.1)
        .attr("fill", this.color(f));
    }
  }
}

// contiguous vertex runs whose segments fall inside the phase
function phaseRuns(vertices: FilamentVertex[], phase: Phase): FilamentVertex[][] {
  const runs: FilamentVertex[][] = [];
  let run: FilamentVertex[] = [];
  for (let k = 1; k < vertices.length; k++) {
    if (phaseOfIndex(vertices[k].tp) === phase) {
      if (run.length === 0) run.push(vertices[k - 1]);
      run.push(vertices[k]);
    } else if (run.length) {
      runs.push(run);
      run = [];
    }
  }
  if (run.length) runs.push(run);
  return runs;
}

function pad([lo, hi]: [number, number]): [number, number] {
  if (!(isFinite(lo) && isFinite(hi))) return [-1, 1];
  const span = hi - lo || 1;
  return [lo - 0.06 * span, hi + 0.06 * span];
}
