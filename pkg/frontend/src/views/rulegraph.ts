// Association rule diagram: circles are rules (size = support, shade =
// lift), rectangles are symptoms; edges run antecedent -> rule ->
// consequent. Positions come from the engine's fixed layout and are used
// verbatim. Clicking a rule highlights its members; clicking a symptom
// highlights every rule containing it plus their other symptoms.

import * as d3 from "d3";

import type { GraphNode, RulesPayload } from "../api";
import { ruleShade } from "../scales";
import { Store } from "../state";

const SYMPTOM_W = 64;
const SYMPTOM_H = 18;

export class RuleGraphView {
  private svg: d3.Selection<SVGSVGElement, unknown, null, undefined>;
  private root: d3.Selection<SVGGElement, unknown, null, undefined>;
  private empty: HTMLElement;
  private controls: HTMLElement;
  private payload: RulesPayload | null = null;
  private highlighted = new Set<string>();

  constructor(
    container: HTMLElement,
    private store: Store,
    private width = 560,
    private height = 420,
  ) {
    this.controls = d3.select(container).append("div").attr("class", "rule-controls").node()!;
    this.buildControls();
    this.svg = d3
      .select(container)
      .append("svg")
      .attr("class", "rulegraph")
      .attr("viewBox", `0 0 ${width} ${height}`)
      .attr("width", width)
      .attr("height", height);
    this.root = this.svg.append("g");
    this.empty = d3
      .select(container)
      .append("div")
      .attr("class", "empty-state hidden")
      .node()!;
    this.empty.textContent = "No rules pass the current support/lift thresholds.";
  }

  private buildControls(): void {
    const state = this.store.get();
    const controls = d3.select(this.controls);

    const support = controls.append("label").attr("class", "slider");
    support.append("span").text("min support");
    support
      .append("input")
      .attr("type", "range")
      .attr("min", "0.05")
      .attr("max", "0.95")
      .attr("step", "0.05")
      .attr("data-slider", "support")
      .property("value", state.ruleFilters.minSupport)
      .on("change", (event: Event) => {
        const value = Number((event.target as HTMLInputElement).value);
        this.store.update({
          ruleFilters: { ...this.store.get().ruleFilters, minSupport: value },
        });
      });
    support
      .append("output")
      .attr("data-slider-value", "support")
      .text(state.ruleFilters.minSupport.toFixed(2));

    const lift = controls.append("label").attr("class", "slider");
    lift.append("span").text("min lift");
    lift
      .append("input")
      .attr("type", "range")
      .attr("min", "1.0")
      .attr("max", "3.0")
      .attr("step", "0.05")
      .attr("data-slider", "lift")
      .property("value", state.ruleFilters.minLift)
      .on("change", (event: Event) => {
        const value = Number((event.target as HTMLInputElement).value);
        this.store.update({
          ruleFilters: { ...this.store.get().ruleFilters, minLift: value },
        });
      });
    lift
      .append("output")
      .attr("data-slider-value", "lift")
      .text(state.ruleFilters.minLift.toFixed(2));
  }

  render(payload: RulesPayload | null): void {
    this.payload = payload;
    this.highlighted.clear();
    this.root.selectAll("*").remove();
    d3.select(this.controls).select("output[data-slider-value=support]").text(
      this.store.get().ruleFilters.minSupport.toFixed(2),
    );
    d3.select(this.controls).select("output[data-slider-value=lift]").text(
      this.store.get().ruleFilters.minLift.toFixed(2),
    );
    if (!payload || payload.graph.nodes.length === 0) {
      this.empty.classList.remove("hidden");
      return;
    }
    this.empty.classList.add("hidden");

    const nodes = payload.graph.nodes;
    const xs = nodes.map((n) => n.x);
    const ys = nodes.map((n) => n.y);
    const x = d3
      .scaleLinear()
      .domain([Math.min(...xs) - 0.5, Math.max(...xs) + 0.5])
      .range([40, this.width - 40]);
    const y = d3
      .scaleLinear()
      .domain([Math.min(...ys) - 0.5, Math.max(...ys) + 0.5])
      .range([this.height - 30, 30]);
    const pos = new Map(nodes.map((n) => [n.id, [x(n.x), y(n.y)] as [number, number]]));

    this.root
      .selectAll("line.edge")
      .data(payload.graph.edges)
      .enter()
      .append("line")
      .attr("class", "edge")
      .attr("data-from", (e) => e.from)
      .attr("data-to", (e) => e.to)
      .attr("x1", (e) => pos.get(e.from)![0])
      .attr("y1", (e) => pos.get(e.from)![1])
      .attr("x2", (e) => pos.get(e.to)![0])
      .attr("y2", (e) => pos.get(e.to)![1])
      .attr("marker-end", "url(#arrow)");

    const defs = this.svg.selectAll("defs").data([0]).enter().append("defs");
    defs
      .append("marker")
      .attr("id", "arrow")
      .attr("viewBox", "0 -4 8 8")
      .attr("refX", 8)
      .attr("markerWidth", 6)
      .attr("markerHeight", 6)
      .attr("orient", "auto")
      .append("path")
      .attr("d", "M0,-4L8,0L0,4");

    const ruleNodes = nodes.filter((n) => n.kind === "rule");
    const ruleSel = this.root
      .selectAll<SVGCircleElement, GraphNode>("circle.rule-node")
      .data(ruleNodes, (n) => n.id)
      .enter()
      .append("circle")
      .attr("class", "rule-node")
      .attr("data-node", (n) => n.id)
      .attr("data-rule-id", (n) => n.rule_id ?? "")
      .attr("data-support", (n) => n.support ?? "")
      .attr("data-lift", (n) => n.lift ?? "")
      .attr("cx", (n) => pos.get(n.id)![0])
      .attr("cy", (n) => pos.get(n.id)![1])
      .attr("r", (n) => n.radius ?? 8)
      .attr("fill", (n) => ruleShade(n.shade ?? 0.5))
      .on("click", (_e, n) => this.highlightRule(n.rule_id!));
    ruleSel.append("title").text((n) => `rule ${n.rule_id}: support ${n.support}, lift ${n.lift}`);

    const symptomNodes = nodes.filter((n) => n.kind === "symptom");
    const symptomSel = this.root
      .selectAll<SVGGElement, GraphNode>("g.symptom-node")
      .data(symptomNodes, (n) => n.id)
      .enter()
      .append("g")
      .attr("class", "symptom-node")
      .attr("data-node", (n) => n.id)
      .attr("transform", (n) => `translate(${pos.get(n.id)![0]},${pos.get(n.id)![1]})`)
      .on("click", (_e, n) => this.highlightSymptom(n.id));
    symptomSel
      .append("rect")
      .attr("x", -SYMPTOM_W / 2)
      .attr("y", -SYMPTOM_H / 2)
      .attr("width", SYMPTOM_W)
      .attr("height", SYMPTOM_H)
      .attr("rx", 3);
    symptomSel
      .append("text")
      .attr("dy", "0.32em")
      .text((n) => n.id.replace(/^s:/, ""));
  }

  // Highlight exactly the rule's antecedent and consequent symptom nodes.
  highlightRule(ruleId: number): void {
    if (!this.payload) return;
    const rule = this.payload.rules.find((r) => r.id === ruleId);
    if (!rule) return;
    const members = new Set<string>([`r:${ruleId}`]);
    for (const s of rule.antecedent) members.add(`s:${s}`);
    for (const s of rule.consequent) members.add(`s:${s}`);
    this.applyHighlight(members);
  }

  // Highlight the rules containing the symptom plus all their other symptoms.
  highlightSymptom(nodeId: string): void {
    if (!this.payload) return;
    const symptom = nodeId.replace(/^s:/, "");
    const members = new Set<string>([nodeId]);
    for (const rule of this.payload.rules) {
      if (rule.antecedent.includes(symptom) || rule.consequent.includes(symptom)) {
        members.add(`r:${rule.id}`);
        for (const s of [...rule.antecedent, ...rule.consequent]) members.add(`s:${s}`);
      }
    }
    this.applyHighlight(members);
  }

  clearHighlight(): void {
    this.applyHighlight(new Set());
  }

  get highlightedNodes(): Set<string> {
    return new Set(this.highlighted);
  }

  private applyHighlight(members: Set<string>): void {
    this.highlighted = members;
    const anything = members.size > 0;
    this.root
      .selectAll<SVGElement, GraphNode>("circle.rule-node, g.symptom-node")
      .classed("highlighted", (n) => members.has(n.id))
      .classed("faded", (n) => anything && !members.has(n.id));
    this.root
      .selectAll<SVGLineElement, { from: string; to: string }>("line.edge")
      .classed("highlighted", (e) => members.has(e.from) && members.has(e.to))
      .classed("faded", (e) => anything && !(members.has(e.from) && members.has(e.to)));
  }
}
