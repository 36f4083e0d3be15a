// Percentile heatmap: 28 symptom rows (grouped by category) x 12
// timepoints. Each cell is a horizontal bar split by rating-bin shares,
// shaded light to dark with severity; bar height encodes the fraction of
// the cohort reporting at that timepoint. Cross markers pin the selected
// patient's own ratings; clicking a cell's column moves the timeline.

import * as d3 from "d3";

import type { HeatmapPayload } from "../api";
import { BIN_ORDER, BIN_SHADES } from "../scales";
import { Store } from "../state";

const CELL_W = 26;
const CELL_H = 14;
const LABEL_W = 92;
const HEADER_H = 20;
const CATEGORY_GAP = 8;

export class HeatmapView {
  private svg: d3.Selection<SVGSVGElement, unknown, null, undefined>;

  constructor(
    container: HTMLElement,
    private store: Store,
    private timepointLabels: string[],
  ) {
    this.svg = d3.select(container).append("svg").attr("class", "heatmap");
  }

  render(payload: HeatmapPayload | null): void {
    this.svg.selectAll("*").remove();
    if (!payload) return;

    const categories = [...new Set(payload.rows.map((r) => r.category))];
    const height =
      HEADER_H + payload.rows.length * CELL_H + categories.length * CATEGORY_GAP + 6;
    const width = LABEL_W + this.timepointLabels.length * CELL_W + 8;
    this.svg.attr("viewBox", `0 0 ${width} ${height}`).attr("width", width).attr("height", height);

    // column headers select the timepoint
    this.svg
      .selectAll("text.col")
      .data(this.timepointLabels)
      .enter()
      .append("text")
      .attr("class", "col")
      .attr("data-tp-label", (d) => d)
      .attr("x", (_d, i) => LABEL_W + i * CELL_W + CELL_W / 2)
      .attr("y", HEADER_H - 7)
      .attr("text-anchor", "middle")
      .classed("active", (d) => d === this.store.get().timepoint)
      .text((_d, i) => (i === 0 ? "wk0" : i <= 7 ? String(i) : this.timepointLabels[i]))
      .on("click", (_e, d) => this.store.update({ timepoint: d }));

    let yCursor = HEADER_H;
    let lastCategory = "";
    for (const row of payload.rows) {
      if (row.category !== lastCategory) {
        yCursor += CATEGORY_GAP;
        lastCategory = row.category;
        this.svg
          .append("text")
          .attr("class", "category-label")
          .attr("x", 2)
          .attr("y", yCursor - 1)
          .text(row.category.replace("_", " "));
      }
      const g = this.svg
        .append("g")
        .attr("class", "heatmap-row")
        .attr("data-symptom", row.symptom)
        .attr("transform", `translate(0,${yCursor})`);
      g.append("text")
        .attr("class", "row-label")
        .attr("x", LABEL_W - 6)
        .attr("y", CELL_H - 4)
        .attr("text-anchor", "end")
        .text(row.symptom)
        .on("click", () => {
          const pair = [...this.store.get().filamentSymptoms] as [string, string];
          pair[0] = row.symptom;
          this.store.update({ filamentSymptoms: pair });
        });

      for (const cell of row.cells) {
        const cx = LABEL_W + cell.tp * CELL_W;
        const cellG = g
          .append("g")
          .attr("class", "heatmap-cell")
          .attr("data-tp", cell.tp)
          .attr("transform", `translate(${cx},0)`);
        const barH = Math.max(1, (CELL_H - 3) * cell.reporting_fraction);
        let xOff = 0;
        for (const bin of BIN_ORDER) {
          const w = (CELL_W - 3) * cell.bins[bin];
          if (w <= 0) continue;
          cellG
            .append("rect")
            .attr("class", `bin bin-${bin}`)
            .attr("x", xOff)
            .attr("y", CELL_H - 2 - barH)
            .attr("width", w)
            .attr("height", barH)
            .attr("fill", BIN_SHADES[bin]);
          xOff += w;
        }
        if (cell.patient_rating !== undefined && cell.patient_rating !== null) {
          const px = (CELL_W - 3) * (cell.patient_rating / 10);
          cellG
            .append("path")
            .attr("class", "patient-mark")
            .attr("data-rating", cell.patient_rating)
            .attr(
              "d",
              `M${px - 2.6},${CELL_H / 2 - 2.6}L${px + 2.6},${CELL_H / 2 + 2.6}` +
                `M${px - 2.6},${CELL_H / 2 + 2.6}L${px + 2.6},${CELL_H / 2 - 2.6}`,
            );
        }
      }
      yCursor += CELL_H;
    }
  }
}
