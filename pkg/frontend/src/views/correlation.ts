// Correlation strip for the selected symptom at the selected timepoint:
// one circle per other symptom, area tracking |rho| and color its sign.
// Undefined correlations (no variance / too few joint reporters) render
// as hollow "no data" marks.

import * as d3 from "d3";

import type { CorrelationsPayload } from "../api";
import { rhoColor } from "../scales";
import { Store } from "../state";

const CELL = 30;
const ROW_H = 46;

export class CorrelationView {
  private svg: d3.Selection<SVGSVGElement, unknown, null, undefined>;
  private caption: HTMLElement;

  constructor(
    container: HTMLElement,
    private store: Store,
    private perRow = 14,
  ) {
    this.caption = d3.select(container).append("div").attr("class", "correlation-caption").node()!;
    this.svg = d3.select(container).append("svg").attr("class", "correlation");
  }

  render(payload: CorrelationsPayload | null): void {
    this.svg.selectAll("*").remove();
    if (!payload || !payload.symptom) {
      this.caption.textContent = "Select a symptom to see its correlations.";
      return;
    }
    const anchor = payload.symptom;
    this.caption.textContent = `Spearman correlation of ${anchor} at ${payload.timepoint}`;

    const others = payload.entries
      .filter((e) => !(e.a === anchor && e.b === anchor))
      .map((e) => ({ other: e.a === anchor ? e.b : e.a, rho: e.rho, n: e.n }));

    const rows = Math.ceil(others.length / this.perRow);
    const width = this.perRow * CELL + 8;
    const height = rows * ROW_H + 6;
    this.svg.attr("viewBox", `0 0 ${width} ${height}`).attr("width", width).attr("height", height);

    const cells = this.svg
      .selectAll("g.rho-cell")
      .data(others)
      .enter()
      .append("g")
      .attr("class", "rho-cell")
      .attr("data-symptom", (d) => d.other)
      .attr("data-rho", (d) => (d.rho === null ? "null" : d.rho))
      .attr(
        "transform",
        (_d, i) =>
          `translate(${(i % this.perRow) * CELL + CELL / 2},${Math.floor(i / this.perRow) * ROW_H + 16})`,
      )
      .on("click", (_e, d) => {
        const pair = [...this.store.get().filamentSymptoms] as [string, string];
        pair[1] = d.other;
        this.store.update({ filamentSymptoms: pair });
      });

    cells
      .append("circle")
      .attr("r", (d) => (d.rho === null ? 3 : 3 + 8 * Math.abs(d.rho)))
      .attr("fill", (d) => (d.rho === null ? "none" : rhoColor(d.rho)))
      .attr("stroke", (d) => (d.rho === null ? "#bbb" : "none"));
    cells.append("title").text((d) => `${d.other}: ${d.rho === null ? "no data" : d.rho.toFixed(2)} (n=${d.n})`);
    cells
      .append("text")
      .attr("y", ROW_H - 24)
      .attr("text-anchor", "middle")
      .text((d) => (d.other.length > 8 ? d.other.slice(0, 7) + "…" : d.other));
  }
}
