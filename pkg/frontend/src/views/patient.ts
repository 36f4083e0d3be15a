// Patient panel: dropdown selector, demographics of the current patient,
// and the static anatomy sketch placeholder (no region mapping data, so
// nothing is highlighted on it).

import * as d3 from "d3";

import type { PatientPayload } from "../api";
import { THERAPY_LABELS } from "../scales";
import { Store } from "../state";

export class PatientPanel {
  private select: HTMLSelectElement;
  private details: HTMLElement;

  constructor(
    private container: HTMLElement,
    private store: Store,
  ) {
    const row = d3.select(container).append("div").attr("class", "patient-row");
    row.append("label").text("Patient:");
    this.select = row
      .append("select")
      .attr("class", "patient-select")
      .node()! as HTMLSelectElement;
    this.select.addEventListener("change", () => {
      this.store.update({ selectedPatient: this.select.value || null });
    });
    this.details = d3.select(container).append("dl").attr("class", "patient-details").node()!;
    this.renderAnatomySketch();
  }

  setPatientIds(ids: string[]): void {
    const current = this.store.get().selectedPatient ?? "";
    d3.select(this.select).selectAll("option").remove();
    d3.select(this.select)
      .selectAll("option")
      .data(["", ...ids])
      .enter()
      .append("option")
      .attr("value", (d) => d)
      .text((d) => d || "(none)");
    this.select.value = current;
  }

  render(payload: PatientPayload | null): void {
    const details = d3.select(this.details);
    details.selectAll("*").remove();
    if (!payload) return;
    if (this.select.value !== payload.patient_id) this.select.value = payload.patient_id;
    const fields: [string, string][] = [
      ["age", String(payload.age)],
      ["gender", payload.gender],
      ["tumor", payload.t_category],
      ["therapy", THERAPY_LABELS[payload.therapy] ?? payload.therapy],
      ["dose", payload.total_dose === null ? "—" : `${payload.total_dose} Gy`],
      ["questionnaires", String(payload.reported_timepoints.length)],
    ];
    for (const [k, v] of fields) {
      details.append("dt").text(k);
      details.append("dd").text(v);
    }
  }

  private renderAnatomySketch(): void {
    // placeholder figure: head-and-neck outline, no data joins
    const svg = d3
      .select(this.container)
      .append("svg")
      .attr("class", "anatomy-sketch")
      .attr("viewBox", "0 0 120 150")
      .attr("width", 120)
      .attr("height", 150);
    svg
      .append("path")
      .attr(
        "d",
        "M60,10 C85,10 96,32 94,52 C93,62 88,70 84,76 C82,86 84,92 88,98 " +
          "L74,104 C72,116 74,126 78,138 L42,138 C46,126 48,116 46,104 " +
          "L32,98 C36,92 38,86 36,76 C32,70 27,62 26,52 C24,32 35,10 60,10 Z",
      )
      .attr("fill", "#f3ece4")
      .attr("stroke", "#9a8c7c");
    svg.append("circle").attr("cx", 47).attr("cy", 48).attr("r", 3).attr("fill", "#9a8c7c");
    svg.append("circle").attr("cx", 73).attr("cy", 48).attr("r", 3).attr("fill", "#9a8c7c");
    svg
      .append("path")
      .attr("d", "M50,72 Q60,78 70,72")
      .attr("fill", "none")
      .attr("stroke", "#9a8c7c");
    svg
      .append("text")
      .attr("x", 60)
      .attr("y", 148)
      .attr("text-anchor", "middle")
      .attr("class", "sketch-note")
      .text("anatomy sketch (static)");
  }
}
