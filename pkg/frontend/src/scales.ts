// Shared visual scales. Categorical palettes are colorblind-safe (Okabe-Ito).

import * as d3 from "d3";

export const THERAPY_COLORS: Record<string, string> = {
  Radiation: "#0072B2",
  CC_Radiation: "#E69F00",
  IC_Radiation: "#009E73",
  IC_Radiation_CC: "#CC79A7",
};

export const THERAPY_LABELS: Record<string, string> = {
  Radiation: "Radiation",
  CC_Radiation: "CC+Radiation",
  IC_Radiation: "IC+Radiation",
  IC_Radiation_CC: "IC+Radiation+CC",
};

export function therapyColor(therapy: string): string {
  return THERAPY_COLORS[therapy] ?? "#888888";
}

// gender -> d3 symbol generator (shape channel)
export function genderSymbol(gender: string): d3.SymbolType {
  return gender === "F" ? d3.symbolTriangle : d3.symbolCircle;
}

// tumor category -> mark area (size channel)
export function tCategorySize(tCategory: string): number {
  const rank = Number(tCategory.replace("T", ""));
  return 28 + (Number.isFinite(rank) ? rank : 0) * 22;
}

// heatmap bin shades, light to dark with severity
export const BIN_SHADES: Record<string, string> = {
  zero: "#f0f0f0",
  one_to_five: "#fdbe85",
  six_to_nine: "#e6550d",
  ten: "#7f2704",
};

export const BIN_ORDER = ["zero", "one_to_five", "six_to_nine", "ten"] as const;

// rule-node shade scalar (0..1 from the engine) -> fill
export function ruleShade(shade: number): string {
  return d3.interpolateBlues(0.25 + 0.7 * shade);
}

// signed correlation -> fill
export function rhoColor(rho: number): string {
  return d3.interpolateRdBu((1 - rho) / 2);
}
